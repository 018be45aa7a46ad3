#include "cmnalm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace cmnalm::io {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw std::runtime_error("unterminated quote in CSV line");
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::runtime_error("bad number '" + s + "'");
    return v;
}

std::optional<double> number_or_auto(const json& j, const char* key) {
    if (j.is_string()) {
        if (j.get<std::string>() == "auto") return std::nullopt;
        throw std::invalid_argument(std::string(key) + ": expected a number or \"auto\"");
    }
    return j.get<double>();
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

} // namespace

Problem problem_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("instance: expected a JSON object");
    const json& ja = j.at("A");
    std::size_t rows = 0, cols = 0;
    std::vector<double> entries;
    if (!ja.is_array()) throw std::invalid_argument("instance: A must be an array");
    if (!ja.empty() && ja.front().is_array()) {
        rows = ja.size();
        cols = ja.front().size();
        entries.reserve(rows * cols);
        for (const auto& row : ja) {
            if (row.size() != cols) throw std::invalid_argument("instance: ragged rows in A");
            for (const auto& v : row) entries.push_back(v.get<double>());
        }
    } else {
        rows = j.at("rows").get<std::size_t>();
        cols = j.at("cols").get<std::size_t>();
        entries = ja.get<std::vector<double>>();
    }
    Problem p{DenseMatrix(rows, cols, std::move(entries)), j.at("y").get<std::vector<double>>(),
              j.value("sigma_n", 1.0)};
    p.validate();
    return p;
}

json to_json(const Problem& problem) {
    json ja = json::array();
    for (std::size_t i = 0; i < problem.a.rows(); ++i) {
        const auto r = problem.a.row(i);
        ja.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {{"A", ja}, {"y", problem.y}, {"sigma_n", problem.sigma_n}};
}

SolverConfig solver_config_from_json(const json& j, SolverConfig c) {
    if (!j.is_object()) throw std::invalid_argument("solver params: expected a JSON object");
    read_opt(j, "p_s", c.cmn.p_s);
    read_opt(j, "p_f", c.cmn.p_f);
    read_opt(j, "q", c.cmn.q);
    read_opt(j, "eps", c.cmn.eps);
    read_opt(j, "sigma", c.sigma);
    if (auto it = j.find("mu_init"); it != j.end()) c.mu_init = number_or_auto(*it, "mu_init");
    read_opt(j, "xi", c.xi);
    read_opt(j, "mu_min", c.mu_min);
    read_opt(j, "zeta", c.zeta);
    if (auto it = j.find("lambda0"); it != j.end()) c.lambda0 = number_or_auto(*it, "lambda0");
    if (auto it = j.find("lambda_policy"); it != j.end()) {
        const auto s = it->get<std::string>();
        if (s == "auto_raise") c.lambda_policy = LambdaPolicy::auto_raise;
        else if (s == "warn") c.lambda_policy = LambdaPolicy::warn;
        else throw std::invalid_argument("lambda_policy must be \"auto_raise\" or \"warn\"");
    }
    read_opt(j, "tol", c.tol);
    read_opt(j, "max_iter", c.max_iter);
    read_opt(j, "inner_iters", c.inner_iters);
    if (auto it = j.find("lp"); it != j.end()) c = lp_config(it->get<double>(), c);
    return c;
}

json to_json(const SolverConfig& c) {
    return {
        {"p_s", c.cmn.p_s},
        {"p_f", c.cmn.p_f},
        {"q", c.cmn.q},
        {"eps", c.cmn.eps},
        {"sigma", c.sigma},
        {"mu_init", c.mu_init ? json(*c.mu_init) : json("auto")},
        {"xi", c.xi},
        {"mu_min", c.mu_min},
        {"zeta", c.zeta},
        {"lambda0", c.lambda0 ? json(*c.lambda0) : json("auto")},
        {"lambda_policy", c.lambda_policy == LambdaPolicy::auto_raise ? "auto_raise" : "warn"},
        {"tol", c.tol},
        {"max_iter", c.max_iter},
        {"inner_iters", c.inner_iters},
    };
}

json to_json(const Variant& v) {
    if (v.lp) return {{"label", v.label}, {"lp", v.p}};
    return {{"label", v.label}, {"p_s", v.p_s}, {"p_f", v.p_f}, {"q", v.q}};
}

Variant variant_from_json(const json& j) {
    Variant v;
    if (auto it = j.find("lp"); it != j.end()) {
        v = Variant::lp_baseline(it->get<double>());
    } else {
        v = Variant::cmn(j.at("p_s").get<double>(), j.at("p_f").get<double>(), j.at("q").get<double>());
    }
    read_opt(j, "label", v.label);
    return v;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("experiment config: expected a JSON object");
    const auto kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    ExperimentConfig c;
    switch (kind) {
    case ExperimentKind::preference: c = default_preference_config(); break;
    case ExperimentKind::noise_sweep: c = default_noise_sweep_config(); break;
    case ExperimentKind::cs_sweep: c = default_cs_sweep_config(); break;
    }
    read_opt(j, "trials", c.trials);
    read_opt(j, "master_seed", c.master_seed);
    read_opt(j, "workers", c.workers);
    read_opt(j, "n", c.n);
    read_opt(j, "m", c.m);
    read_opt(j, "k", c.k);
    read_opt(j, "alpha", c.alpha);
    read_opt(j, "gamma", c.gamma);
    if (auto it = j.find("matrix_norm"); it != j.end()) c.matrix_norm = matrix_norm_from_string(it->get<std::string>());
    read_opt(j, "sigma_n", c.sigma_n);
    read_opt(j, "baseline_label", c.baseline_label);
    read_opt(j, "grid", c.grid);
    if (auto it = j.find("variants"); it != j.end()) {
        c.variants.clear();
        for (const auto& v : *it) c.variants.push_back(variant_from_json(v));
    }
    if (auto it = j.find("solver"); it != j.end()) c.solver = solver_config_from_json(*it, c.solver);
    c.validate();
    return c;
}

json to_json(const ExperimentConfig& c) {
    json variants = json::array();
    for (const auto& v : c.variants) variants.push_back(to_json(v));
    return {
        {"kind", to_string(c.kind)},
        {"trials", c.trials},
        {"master_seed", c.master_seed},
        {"workers", c.workers},
        {"n", c.n},
        {"m", c.m},
        {"k", c.k},
        {"alpha", c.alpha},
        {"gamma", c.gamma},
        {"matrix_norm", to_string(c.matrix_norm)},
        {"sigma_n", c.sigma_n},
        {"baseline_label", c.baseline_label},
        {"grid", c.grid},
        {"variants", variants},
        {"solver", to_json(c.solver)},
    };
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("error writing " + path);
}

std::string results_csv(const ExperimentResult& result) {
    std::string out = kResultsHeader;
    out += '\n';
    for (const auto& r : result.rows) {
        out += csv_field(r.variant) + ',' + fmt(r.grid_value) + ',' + fmt(r.mean_snr_db) + ',' + fmt(r.sd_snr_db) +
               ',' + std::to_string(r.n_trials) + ',' + std::to_string(r.n_failed) + '\n';
    }
    return out;
}

std::vector<ResultRow> parse_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("results.csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kResultsHeader) throw std::runtime_error("results.csv: unexpected header '" + line + "'");
    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw std::runtime_error("results.csv:" + std::to_string(lineno) + ": expected 6 fields");
        try {
            ResultRow r;
            r.variant = f[0];
            r.grid_value = parse_double(f[1]);
            r.mean_snr_db = parse_double(f[2]);
            r.sd_snr_db = parse_double(f[3]);
            r.n_trials = std::stoul(f[4]);
            r.n_failed = std::stoul(f[5]);
            rows.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw std::runtime_error("results.csv:" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (rows.empty()) throw std::runtime_error("results.csv: no data rows");
    return rows;
}

std::string history_csv(const SolveReport& report) {
    std::string out = "iter,primal,dual,objective,mu\n";
    for (std::size_t i = 0; i < report.history.size(); ++i) {
        const auto& h = report.history[i];
        out += std::to_string(i + 1) + ',' + fmt(h.primal) + ',' + fmt(h.dual) + ',' + fmt(h.objective) + ',' +
               fmt(h.mu) + '\n';
    }
    return out;
}

json summary_json(const ExperimentResult& result) {
    json ratios = json::object();
    for (const auto& p : result.preference) ratios[p.variant] = p.percent;
    json s = {
        {"kind", to_string(result.kind)},
        {"config_hash", result.config_hash},
        {"master_seed", result.master_seed},
        {"failed_solves", result.failed_solves},
    };
    if (result.kind == ExperimentKind::preference) s["preference_ratios"] = ratios;
    return s;
}

} // namespace cmnalm::io
