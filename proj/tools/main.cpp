#include "airy/cli.hpp"

int main(int argc, char** argv) { return airy::run_cli(argc, argv); }
