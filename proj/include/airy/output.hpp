#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "airy/cases.hpp"

namespace airy {

struct SampleGrid {
  int nx = 50;
  int ny = 50;
};

struct ErrorReport {
  std::optional<double> l2_sxx;
  std::optional<double> l2_syy;
  std::optional<double> l2_sxy;
};

ErrorReport compute_errors(const std::vector<Patch>& solved, const CaseDefinition& def);

void write_stress_csv(const std::filesystem::path& path, const std::vector<Patch>& solved,
                      const SampleGrid& grid);

void write_report(const std::filesystem::path& path, const CaseDefinition& def,
                  const Solution& sol, const ErrorReport& errors);

// Stress profiles along the vertical stations declared by the case.
void write_profiles(const std::filesystem::path& dir, const CaseDefinition& def,
                    const std::vector<Patch>& solved, int samples = 101);

// Solves, samples, and writes stress.csv, report.txt, and any profile
// extracts into the output directory.
void export_case(const std::filesystem::path& dir, const CaseDefinition& def,
                 const Solution& sol, const SampleGrid& grid);

} // namespace airy
