#ifndef MUFOURIER_SCENARIO_HPP
#define MUFOURIER_SCENARIO_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mufourier/inequalities.hpp"

namespace mufourier {

/// Scenario file problem: message plus the 1-based source line.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
  int line;
};

/// A parsed scenario: one task plus everything it needs. The same model
/// backs both scenario files and direct command-line invocation.
struct Scenario {
  std::string task;
  int dim = 0;

  // [region] name -> definition text, in file order; `use` picks the root.
  std::vector<std::pair<std::string, std::string>> region_defs;
  std::string region_use;

  struct FieldDef {
    std::string expr;
    std::optional<double> lower, upper, floor;
    std::string mask;  // optional predicate source; field is zero outside
  };
  std::map<std::string, FieldDef> fields;

  std::vector<std::string> seeds;      // family over f (weight 1/f)
  std::vector<std::string> psi_seeds;  // family over g (weight 1/g)
  int truncation = 0;                  // 0 = full family
  bool diagnostics = false;

  int partition_depth = 0;  // 0 = integrator depth default for the dimension
  double zeta = 0.0;        // 0 = scale-aware default
  std::vector<std::string> manual_cells;  // "+1 box 0.5 1"
  std::vector<std::string> cell_seeds;    // shared per-cell seed expressions

  IntegratorSettings settings;

  std::string report_path;
  std::string summary_path;
  std::string csv_path;
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

/// Everything a run produces. Exit code: 0 = completed with all asserted
/// properties holding, 2 = a property check failed. Input problems are
/// reported by throwing (ScenarioError / ParseError / invalid_argument).
struct RunOutput {
  int exit_code = 0;
  nlohmann::ordered_json report;
  std::string summary;
  std::string csv;  // empty when the task has no grid
};

RunOutput run_scenario(const Scenario& sc);

/// Run and write the report/summary/csv files named by the scenario
/// (paths may be overridden by the caller beforehand); echoes the summary
/// to `out`. Returns the exit code.
int execute_scenario(const Scenario& sc, std::ostream& out);

}  // namespace mufourier

#endif
