#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fekete/array_analysis.hpp"
#include "fekete/fekete_solver.hpp"

namespace fekete {

inline constexpr const char* kReportSchema = "fs-report/1";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int error = 1;
inline constexpr int certificate_warning = 2;
inline constexpr int usage = 64;
inline constexpr int missing_degree = 65;
inline constexpr int unreadable = 66;
}  // namespace exit_code

// Error carrying the process exit code it maps to.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct RunConfig {
  std::string command;
  int d = 2;
  std::vector<int> degrees;
  double eps = 0.5;
  std::vector<double> alphas;
  std::optional<double> radius;
  std::string mesh = "fibonacci";
  std::string mode = "both";
  int max_iterations = 200;
  double stop_tolerance = 1e-9;
  double certificate_tolerance = 0.05;
  std::uint64_t seed = 0;
  std::size_t samples = 200;
  int trials = 20;
  bool mz = false;
  std::vector<std::string> points;
  std::string out = ".";

  // Throws CliError(usage) when the configuration cannot run.
  void validate() const;
  FeketeConfig solver_config() const;
};

// "a..b" (inclusive), comma lists, or a mix: "1..3,8" -> {1, 2, 3, 8}.
std::vector<int> parse_degrees(const std::string& text);

std::string fekete_file_name(int d, int L);

// Round to 12 significant digits, the precision of every emitted float.
double round12(double x);

struct Report {
  std::string schema = kReportSchema;
  RunConfig config;
  nlohmann::json payload = nlohmann::json::object();
  nlohmann::json timing = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);
void to_json(nlohmann::json& j, const Report& r);
void from_json(const nlohmann::json& j, Report& r);
void to_json(nlohmann::json& j, const SolveLog& s);
void from_json(const nlohmann::json& j, SolveLog& s);
void to_json(nlohmann::json& j, const FrameBounds& f);
void from_json(const nlohmann::json& j, FrameBounds& f);
void to_json(nlohmann::json& j, const MzEstimate& m);
void from_json(const nlohmann::json& j, MzEstimate& m);
void to_json(nlohmann::json& j, const DensityEstimate& e);
void from_json(const nlohmann::json& j, DensityEstimate& e);
void to_json(nlohmann::json& j, const EquidistributionReport& e);
void from_json(const nlohmann::json& j, EquidistributionReport& e);
void to_json(nlohmann::json& j, const ExtremalConstants& e);
void from_json(const nlohmann::json& j, ExtremalConstants& e);
void to_json(nlohmann::json& j, const LocalPairScan& s);
void from_json(const nlohmann::json& j, LocalPairScan& s);

// Report JSON without the timing block, for reproducibility comparisons.
nlohmann::json without_timing(const nlohmann::json& report);

struct CommandResult {
  Report report;
  int exit_code = exit_code::ok;
};

// Each command writes its report to <out>/<command>_report.json.
CommandResult cmd_generate(const RunConfig& config);
CommandResult cmd_analyze(const RunConfig& config);
CommandResult cmd_mz(const RunConfig& config);
CommandResult cmd_interp(const RunConfig& config);
// Also writes <out>/study.csv.
CommandResult cmd_study(const RunConfig& config);

// Worker count from FEKETE_SPHERE_THREADS, capped by the hardware.
unsigned worker_count();

// `fekete-sphere <generate|analyze|mz|interp|study> [flags]`; returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fekete
