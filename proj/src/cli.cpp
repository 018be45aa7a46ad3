#include "cmnalm/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cmnalm/experiments.hpp"
#include "cmnalm/io.hpp"
#include "cmnalm/svg_plot.hpp"

namespace cmnalm::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

std::string now_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
}

} // namespace

int default_workers() {
    if (const char* env = std::getenv(kWorkersEnv)) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

int cmd_solve(const SolveArgs& args, std::ostream& err) {
    Problem problem;
    SolverConfig config;
    json params;
    try {
        problem = io::problem_from_json(io::read_json_file(args.instance));
        params = args.params.empty() ? json::object() : io::read_json_file(args.params);
        config = io::solver_config_from_json(params);
        config.validate();
        ensure_dir(args.out);
    } catch (const std::exception& e) {
        err << "solve: " << e.what() << '\n';
        return kUsageOrIo;
    }

    SolveReport report;
    try {
        report = solve_cmn_alm(problem, config);
    } catch (const SolverError& e) {
        err << "solve: " << e.what() << '\n';
        return kNumerical;
    } catch (const SingularityError& e) {
        err << "solve: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "solve: " << e.what() << '\n';
        return kUsageOrIo;
    }
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';

    try {
        const json xj = {
            {"x_hat", report.x_hat},
            {"iterations", report.iterations},
            {"converged", report.converged},
            {"lambda0", report.lambda0},
            {"mu_init", report.mu_init},
            {"warnings", report.warnings},
        };
        io::write_text_file((fs::path(args.out) / "x_hat.json").string(), xj.dump(2) + '\n');
        io::write_text_file((fs::path(args.out) / "history.csv").string(), io::history_csv(report));
        const json resolved = io::to_json(config);
        const json manifest = {
            {"command", "solve"},
            {"instance_path", args.instance},
            {"params_path", args.params},
            {"output_dir", args.out},
            {"tool_version", kToolVersion},
            {"config_hash", fnv1a_hex(resolved.dump())},
            {"timestamp", now_utc()},
            {"config", resolved},
        };
        io::write_text_file((fs::path(args.out) / "manifest.json").string(), manifest.dump(2) + '\n');
    } catch (const std::exception& e) {
        err << "solve: " << e.what() << '\n';
        return kUsageOrIo;
    }
    return kOk;
}

int cmd_experiment(const ExperimentArgs& args, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        const json j = io::read_json_file(args.config);
        cfg = io::experiment_config_from_json(j);
        if (!j.contains("workers")) cfg.workers = default_workers();
        if (args.workers) cfg.workers = *args.workers;
        if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
        if (args.seed) cfg.master_seed = *args.seed;
        ensure_dir(args.out);
    } catch (const std::exception& e) {
        err << "experiment: " << e.what() << '\n';
        return kUsageOrIo;
    }

    ExperimentResult result;
    try {
        result = run_experiment(cfg);
    } catch (const SolverError& e) {
        err << "experiment: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "experiment: " << e.what() << '\n';
        return kUsageOrIo;
    }
    if (result.failed_solves > 0) {
        err << "warning: " << result.failed_solves << " solve(s) failed and were excluded from the means\n";
    }

    try {
        io::write_text_file((fs::path(args.out) / "results.csv").string(), io::results_csv(result));
        io::write_text_file((fs::path(args.out) / "summary.json").string(), io::summary_json(result).dump(2) + '\n');
        const json manifest = {
            {"command", "experiment"},
            {"config_path", args.config},
            {"master_seed", cfg.master_seed},
            {"workers", cfg.workers},
            {"output_dir", args.out},
            {"tool_version", kToolVersion},
            {"config_hash", result.config_hash},
            {"timestamp", result.timestamp},
            {"config", io::to_json(cfg)},
        };
        io::write_text_file((fs::path(args.out) / "manifest.json").string(), manifest.dump(2) + '\n');
    } catch (const std::exception& e) {
        err << "experiment: " << e.what() << '\n';
        return kUsageOrIo;
    }
    return kOk;
}

int cmd_plot(const PlotArgs& args, std::ostream& err) {
    try {
        std::ifstream in(args.results);
        if (!in) throw std::runtime_error("cannot open " + args.results);
        const auto rows = io::parse_results_csv(in);
        plot::PlotOptions opt;
        opt.title = args.title;
        opt.x_label = args.x_label;
        opt.highlight = args.highlight;
        opt.baseline = args.baseline;
        if (args.x_scale == "auto") opt.x_scale = plot::XScale::automatic;
        else if (args.x_scale == "linear") opt.x_scale = plot::XScale::linear;
        else if (args.x_scale == "log") opt.x_scale = plot::XScale::log;
        else throw std::invalid_argument("x-scale must be auto, linear or log");
        io::write_text_file(args.out, plot::render_svg(rows, opt));
    } catch (const std::exception& e) {
        err << "plot: " << e.what() << '\n';
        return kUsageOrIo;
    }
    return kOk;
}

int run(int argc, char** argv) {
    CLI::App app{"Robust sparse recovery with continuous mixed norm fidelity"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    SolveArgs solve;
    auto* sc = app.add_subcommand("solve", "Solve a single instance");
    sc->add_option("--instance", solve.instance, "Instance JSON (A, y, sigma_n)")->required();
    sc->add_option("--params", solve.params, "Solver parameter JSON");
    sc->add_option("--out", solve.out, "Output directory")->required();

    ExperimentArgs exp;
    auto* ec = app.add_subcommand("experiment", "Run a Monte-Carlo experiment");
    ec->add_option("--config", exp.config, "Experiment config JSON")->required();
    ec->add_option("--out", exp.out, "Output directory")->required();
    ec->add_option("--workers", exp.workers, std::string("Worker threads (default: $") + kWorkersEnv + " or 1)");
    ec->add_option("--seed", exp.seed, "Override the master seed");

    PlotArgs pl;
    auto* pc = app.add_subcommand("plot", "Render results.csv as an SVG chart");
    pc->add_option("--results", pl.results, "results.csv from the experiment command")->required();
    pc->add_option("--out", pl.out, "Output SVG file")->required();
    pc->add_option("--highlight", pl.highlight, "Shade grid points where this variant >= the baseline");
    pc->add_option("--baseline", pl.baseline, "Baseline series label")->capture_default_str();
    pc->add_option("--x-scale", pl.x_scale, "auto, linear or log")->capture_default_str();
    pc->add_option("--title", pl.title, "Chart title");
    pc->add_option("--x-label", pl.x_label, "x-axis label")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsageOrIo;
    }

    if (sc->parsed()) return cmd_solve(solve, std::cerr);
    if (ec->parsed()) return cmd_experiment(exp, std::cerr);
    return cmd_plot(pl, std::cerr);
}

} // namespace cmnalm::cli
