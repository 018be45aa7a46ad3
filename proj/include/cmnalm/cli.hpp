#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cmnalm::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageOrIo = 1;
inline constexpr int kNumerical = 2;

// Environment variable consulted for the default worker count.
inline constexpr const char* kWorkersEnv = "CMNALM_WORKERS";

struct SolveArgs {
    std::string instance;
    std::string params;
    std::string out;
};

struct ExperimentArgs {
    std::string config;
    std::string out;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
};

struct PlotArgs {
    std::string results;
    std::string out;
    std::optional<std::string> highlight;
    std::string baseline = "Lp-ADM";
    std::string x_scale = "auto"; // auto | linear | log
    std::string title;
    std::string x_label = "grid value";
};

// Writes x_hat.json, history.csv and manifest.json into args.out.
int cmd_solve(const SolveArgs& args, std::ostream& err);

// Writes results.csv, summary.json and manifest.json into args.out.
int cmd_experiment(const ExperimentArgs& args, std::ostream& err);

// Writes an SVG line chart to args.out.
int cmd_plot(const PlotArgs& args, std::ostream& err);

/// Worker count from the environment, or 1.
int default_workers();

int run(int argc, char** argv);

} // namespace cmnalm::cli
