#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftnm/bath_model.hpp"
#include "ftnm/concat_circuit.hpp"
#include "ftnm/spectral_bounds.hpp"

// Command-line front end: JSON config ingestion, dispatch into the library,
// and deterministic CSV/JSON report emission.  Reports carry no timestamps;
// a config plus seed maps to a byte-identical report body.

namespace ftnm {

using Json = nlohmann::ordered_json;

enum class ReportFormat { Csv, Json };

struct RunConfig {
  std::string command;
  Json parameters;  // command-specific tree (see README for schemas)
  std::uint64_t seed = 0;
  std::string output_path;  // empty: stdout
  ReportFormat format = ReportFormat::Csv;
};

// Raised for malformed invocations and configs; mapped to exit code 2.
class CliConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct Report {
  std::string command;
  Json config_echo;
  std::vector<std::pair<std::string, std::string>> extras;  // header key/values
  std::vector<std::string> columns;
  std::vector<Json> rows;  // one Json::array of scalars per row
  std::vector<Verdict> verdicts;
  std::uint64_t seed = 0;

  bool all_passed() const;
  std::string render(ReportFormat format) const;
};

// Dispatches to the module behind config.command and assembles the report.
// Throws CliConfigError (or std::invalid_argument / std::domain_error from
// the library) on bad inputs; bound violations are reported as failed
// verdicts, not exceptions.
Report execute(const RunConfig& config);

// Shortest decimal rendering of a double that parses back to the same value
// (std::to_chars).
std::string format_double(double v);

// JSON round-tripping for layouts and fault sets.
Json layout_to_json(const CircuitLayout& layout);
CircuitLayout layout_from_json(const Json& j);
Json fault_set_to_json(const FaultSet& faults);
std::vector<std::uint64_t> fault_ids_from_json(const Json& j);

// Model / spectral-density config parsing (shared with tests).
SystemBathModel model_from_json(const Json& j);
SpectralDensity spectral_density_from_json(const Json& j);

// Two-column CSV (header "omega,J", strictly increasing omega).
std::vector<std::pair<double, double>> read_spectral_csv(const std::string& path);

// Full front end: parses argv, loads the config file, runs the command,
// writes the report.  Returns the process exit code: 0 success, 1 failed
// verdict, 2 configuration error.
int run_cli(int argc, char** argv);

}  // namespace ftnm
