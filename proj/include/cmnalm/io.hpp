#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmnalm/experiments.hpp"
#include "cmnalm/solver.hpp"

namespace cmnalm::io {

using nlohmann::json;

// Instance files: {"A": [[...], ...], "y": [...], "sigma_n": 1.0}, or A given
// flat in row-major order together with "rows" and "cols".
Problem problem_from_json(const json& j);
json to_json(const Problem& problem);

// Solver parameter files. Every key is optional; missing keys keep `defaults`.
// "mu_init" and "lambda0" accept a number or "auto". An optional "lp" key
// selects the ℓp baseline at that p instead of the mixed norm.
SolverConfig solver_config_from_json(const json& j, SolverConfig defaults = {});
json to_json(const SolverConfig& cfg);

json to_json(const Variant& v);
Variant variant_from_json(const json& j);

// Experiment configs: "kind" is required, everything else falls back to the
// defaults of that kind.
ExperimentConfig experiment_config_from_json(const json& j);
json to_json(const ExperimentConfig& cfg);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// results.csv: variant,grid_value,mean_snr_db,sd_snr_db,n_trials,n_failed
inline constexpr const char* kResultsHeader = "variant,grid_value,mean_snr_db,sd_snr_db,n_trials,n_failed";
std::string results_csv(const ExperimentResult& result);
std::vector<ResultRow> parse_results_csv(std::istream& in);

// history.csv: iter,primal,dual,objective,mu
std::string history_csv(const SolveReport& report);

json summary_json(const ExperimentResult& result);

} // namespace cmnalm::io
