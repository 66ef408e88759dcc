#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptnlms/analysis.hpp"
#include "ptnlms/scenarios.hpp"

namespace ptnlms {

/// Shortest decimal form that round-trips an IEEE double (17 significant
/// digits).
std::string format_g17(double v);

/// Write-to-temp-then-rename; the target never holds a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Everything required to reproduce a run byte-for-byte: the resolved
/// scenario, the algorithm roster, and the base seed.
struct ResolvedRun {
  std::string scenario_name;
  Scenario scenario;
  std::vector<Algorithm> algorithms;
  bool record_weights = false;
  std::uint64_t base_seed = 1;
};

/// CLI-level overrides applied on top of a preset or config file.
struct RunOverrides {
  std::optional<std::size_t> trials;
  std::optional<std::size_t> horizon;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> mu; // per-algorithm step-size overrides
};

/// Assemble a run from a preset name and/or a JSON config document
/// (the same schema the metadata file uses), then apply the overrides.
/// Precedence: preset < config < overrides.
ResolvedRun resolve_run(const std::optional<std::string>& scenario_name,
                        const std::optional<std::string>& config_text,
                        const RunOverrides& overrides);

std::string serialize_run(const ResolvedRun& run);
ResolvedRun parse_run(const std::string& json_text);

void write_meta(const std::filesystem::path& path, const ResolvedRun& run);
ResolvedRun read_meta(const std::filesystem::path& path);

/// curves.csv: `iteration,<name>_mse,...`, one row per iteration, 17
/// significant digits throughout.
void write_curves_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& names,
                      const std::vector<LearningCurve>& curves);

struct CurveTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> mse;
};
CurveTable read_curves_csv(const std::filesystem::path& path);

/// weights.csv: `iteration,algorithm,w0,...` for recorded mean trajectories.
void write_weights_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& names,
                       const std::vector<LearningCurve>& curves);

/// grid.csv: two axis-metadata comment lines, then `w0,w1,xi` rows.
void write_grid_csv(const std::filesystem::path& path, const ContourGrid& grid);
ContourGrid read_grid_csv(const std::filesystem::path& path);

void write_curves_plot_script(const std::filesystem::path& path,
                              const std::string& csv_name,
                              const std::vector<std::string>& names);
void write_grid_plot_script(const std::filesystem::path& path,
                            const std::string& csv_name,
                            const ContourGrid& grid);

} // namespace ptnlms
