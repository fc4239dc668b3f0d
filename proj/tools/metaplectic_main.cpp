// Command-line front end: experiment orchestration, file I/O and report
// emission for the metaplectic calculus library.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "metaplectic/amalgam.hpp"
#include "metaplectic/io.hpp"
#include "metaplectic/metaplectic_op.hpp"
#include "metaplectic/schrodinger.hpp"
#include "metaplectic/symplectic.hpp"
#include "metaplectic/verify.hpp"
#include "metaplectic/version.hpp"
#include "metaplectic/wavefunction.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace metaplectic;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    double tol_sym = kDefaultSymTol;
    double tol_free = kDefaultFreeTol;
    bool reproducible = false;
    std::vector<std::string> overrides;
};

/// Outputs are staged in a temporary directory and renamed into place only
/// after the whole command succeeded, so failures leave no partial files.
class OutputStage {
  public:
    explicit OutputStage(const fs::path& out_dir)
        : final_dir_(out_dir),
          stage_dir_(out_dir / (".stage-" + std::to_string(::getpid()))) {
        fs::create_directories(stage_dir_);
    }

    ~OutputStage() {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(stage_dir_, ec);
        }
    }

    fs::path path_for(const std::string& name) {
        names_.push_back(name);
        return stage_dir_ / name;
    }

    const std::vector<std::string>& names() const { return names_; }

    void commit() {
        for (const auto& name : names_) {
            fs::rename(stage_dir_ / name, final_dir_ / name);
        }
        fs::remove_all(stage_dir_);
        committed_ = true;
    }

  private:
    fs::path final_dir_;
    fs::path stage_dir_;
    std::vector<std::string> names_;
    bool committed_ = false;
};

std::string now_string() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json parse_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config: " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

/// Apply --override key=value entries; dotted keys address nested objects and
/// values parse as JSON when possible, falling back to plain strings.
void apply_overrides(json& config, const std::vector<std::string>& overrides) {
    for (const std::string& entry : overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw InvalidInputError("--override expects KEY=VALUE, got '" + entry + "'");
        }
        const std::string key = entry.substr(0, eq);
        const std::string raw = entry.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw;
        }
        json* node = &config;
        std::size_t start = 0;
        for (;;) {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot - start);
            if (dot == std::string::npos) {
                (*node)[part] = value;
                break;
            }
            node = &(*node)[part];
            start = dot + 1;
        }
    }
}

double require_number(const json& cfg, const std::string& key) {
    if (!cfg.contains(key) || !cfg[key].is_number()) {
        throw InvalidInputError("config needs a numeric '" + key + "' field");
    }
    return cfg[key].get<double>();
}

double number_or(const json& cfg, const std::string& key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg[key].is_number()) {
        throw InvalidInputError("config field '" + key + "' must be numeric");
    }
    return cfg[key].get<double>();
}

/// Exponents admit "inf" / "infinity" strings on top of plain numbers.
double parse_exponent(const json& node, const std::string& key) {
    if (!node.contains(key)) {
        throw InvalidInputError("config needs exponent '" + key + "'");
    }
    const json& v = node[key];
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        throw InvalidInputError("exponent '" + key + "' must be a number or \"inf\"");
    }
    if (!v.is_number()) {
        throw InvalidInputError("exponent '" + key + "' must be a number or \"inf\"");
    }
    return v.get<double>();
}

json exponent_to_json(double p) {
    if (std::isinf(p)) return json("inf");
    return json(p);
}

Complex parse_complex(const json& v, const std::string& key) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return Complex(v[0].get<double>(), v[1].get<double>());
    }
    throw InvalidInputError("field '" + key + "' must be a number or [re, im]");
}

Eigen::MatrixXd parse_matrix_spec(const json& node, const CliOptions& opts) {
    if (node.is_string()) {
        return io::read_matrix(node.get<std::string>());
    }
    if (node.is_object() && node.contains("rows")) {
        const auto& rows = node["rows"];
        if (!rows.is_array() || rows.empty()) {
            throw InvalidInputError("matrix 'rows' must be a nonempty array");
        }
        const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
        const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
        Eigen::MatrixXd m(r, c);
        for (Eigen::Index i = 0; i < r; ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != c) {
                throw InvalidInputError("matrix rows are ragged");
            }
            for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
        }
        return m;
    }
    if (node.is_object() && node.contains("random")) {
        const auto& r = node["random"];
        const int n = static_cast<int>(number_or(r, "n", 1));
        std::uint64_t seed = opts.seed.value_or(1);
        if (r.contains("seed")) seed = r["seed"].get<std::uint64_t>();
        return random_symplectic(n, seed).matrix();
    }
    if (node.is_object() && node.contains("rotation")) {
        const auto& r = node["rotation"];
        const int n = static_cast<int>(number_or(r, "n", 1));
        return fractional_rotation(n, require_number(r, "alpha")).matrix();
    }
    throw InvalidInputError(
        "matrix spec must be a file path, {rows: ...}, {random: {n, seed}} or "
        "{rotation: {n, alpha}}");
}

Grid parse_grid(const json& cfg) {
    if (!cfg.contains("grid") || !cfg["grid"].is_object()) {
        throw InvalidInputError("config needs a 'grid' object with x0, dx, N");
    }
    const json& g = cfg["grid"];
    auto axis_values = [&](const std::string& key) {
        std::vector<double> vals;
        if (!g.contains(key)) {
            throw InvalidInputError("grid needs field '" + key + "'");
        }
        if (g[key].is_array()) {
            for (const auto& v : g[key]) vals.push_back(v.get<double>());
        } else {
            vals.push_back(g[key].get<double>());
        }
        return vals;
    };
    const auto x0 = axis_values("x0");
    const auto dx = axis_values("dx");
    const auto count = axis_values("N");
    if (x0.size() != dx.size() || x0.size() != count.size() || x0.empty() || x0.size() > 2) {
        throw InvalidInputError("grid fields must agree and describe 1 or 2 axes");
    }
    Grid grid;
    for (std::size_t a = 0; a < x0.size(); ++a) {
        grid.axes.push_back(AxisGrid{x0[a], dx[a], static_cast<int>(count[a])});
    }
    return grid;
}

SampledWavefunction parse_initial(const json& cfg, const CliOptions&) {
    if (!cfg.contains("initial") || !cfg["initial"].is_object()) {
        throw InvalidInputError("config needs an 'initial' object");
    }
    const json& init = cfg["initial"];
    const std::string type = init.value("type", "");
    const double hbar = number_or(cfg, "hbar", 1.0);

    if (type == "file") {
        const fs::path path = init.value("path", "");
        if (path.extension() == ".bin") {
            SampledWavefunction psi = io::read_wavefunction_binary(path);
            if (cfg.contains("hbar") && psi.hbar != hbar) {
                throw InvalidInputError("config hbar disagrees with the snapshot file");
            }
            return psi;
        }
        return io::read_wavefunction_csv(path, hbar);
    }

    const Grid grid = parse_grid(cfg);
    if (type == "gaussian") {
        if (!init.contains("a")) {
            throw InvalidInputError("gaussian initial needs field 'a'");
        }
        return normalized(make_gaussian(grid, parse_complex(init["a"], "a"), hbar));
    }
    if (type == "hermite") {
        const int k = static_cast<int>(number_or(init, "k", 0));
        return hermite_state(k, grid, hbar);
    }
    throw InvalidInputError("initial type must be gaussian, hermite or file");
}

AmalgamLattice parse_lattice(const json& cfg) {
    AmalgamLattice lattice;
    if (cfg.contains("window")) {
        const json& w = cfg["window"];
        const std::string type = w.value("type", "gaussian");
        if (type != "gaussian") {
            throw InvalidInputError("only gaussian windows are supported");
        }
        lattice.window_width = number_or(w, "width", 1.0);
    }
    lattice.hop = number_or(cfg, "hop", 0.0);
    lattice.freq_count = static_cast<int>(number_or(cfg, "freq_count", 0.0));
    return lattice;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return json{{"n", m.rows() / 2}, {"rows", rows}};
}

json lattice_to_json(const AmalgamLattice& lattice) {
    return json{{"window", {{"type", "gaussian"}, {"width", lattice.window_width}}},
                {"hop", lattice.hop},
                {"freq_count", lattice.freq_count}};
}

json report_to_json(const NormEstimateReport& report) {
    json doc;
    doc["matrix"] = matrix_to_json(report.matrix);
    doc["p"] = exponent_to_json(report.p);
    doc["q"] = exponent_to_json(report.q);
    doc["numerator_space"] = report.numerator_space;
    doc["denominator_space"] = report.denominator_space;
    doc["lattice"] = lattice_to_json(report.lattice);
    doc["family"] = report.family;
    doc["ratios"] = report.ratios;
    doc["max_ratio"] = report.max_ratio;
    if (report.factor_bound) doc["factor_bound"] = *report.factor_bound;
    doc["warnings"] = report.warnings;
    // Maxima over a finite family only lower-bound the operator norms, and the
    // values depend on this window and lattice.
    doc["semantics"] = "empirical lower bound, window- and lattice-relative";
    return doc;
}

std::vector<double> parse_times(const json& cfg) {
    std::vector<double> times;
    if (cfg.contains("times")) {
        for (const auto& v : cfg["times"]) times.push_back(v.get<double>());
    } else if (cfg.contains("t")) {
        times.push_back(cfg["t"].get<double>());
    } else {
        throw InvalidInputError("config needs 'times' (array) or 't' (number)");
    }
    return times;
}

// --- commands ---------------------------------------------------------------

void cmd_factor(const json& cfg, const CliOptions& opts, OutputStage& stage, json& results) {
    const SymplecticMatrix s(parse_matrix_spec(cfg.at("matrix"), opts), opts.tol_sym);
    const FreeFactorization split = factor_free(s, opts.tol_free);
    io::write_matrix_json(stage.path_for("factor1.json"), split.first.matrix());
    io::write_matrix_json(stage.path_for("factor2.json"), split.second.matrix());
    results["alpha"] = split.alpha;
    results["residual"] = split.residual;
    results["det_b_first"] = split.first.det_b();
    results["det_b_second"] = split.second.det_b();
    std::cout << "factored with alpha = " << split.alpha << ", residual = " << split.residual
              << "\n";
}

void cmd_flow(const json& cfg, const CliOptions& opts, OutputStage& stage, json& results) {
    const QuadraticHamiltonian h(parse_matrix_spec(cfg.at("hamiltonian"), opts), opts.tol_sym);
    const std::vector<double> times = parse_times(cfg);
    json listing = json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const SymplecticMatrix flow = hamiltonian_flow(h, times[i]);
        char name[32];
        std::snprintf(name, sizeof(name), "flow_%03zu.json", i);
        io::write_matrix_json(stage.path_for(name), flow.matrix());
        listing.push_back({{"t", times[i]}, {"file", name}, {"det_b", flow.det_b()}});
    }
    results["flows"] = listing;
}

void cmd_apply(const json& cfg, const CliOptions& opts, OutputStage& stage, json& results) {
    const SymplecticMatrix s(parse_matrix_spec(cfg.at("matrix"), opts), opts.tol_sym);
    const SampledWavefunction psi = parse_initial(cfg, opts);
    ApplyOptions apply_opts;
    const std::string method = cfg.value("method", "fast");
    if (method == "direct") {
        apply_opts.method = ApplyMethod::direct;
    } else if (method == "fast") {
        apply_opts.method = ApplyMethod::fast;
    } else {
        throw InvalidInputError("method must be 'fast' or 'direct'");
    }
    apply_opts.allow_aliasing = cfg.value("allow_aliasing", false);
    const int m_choice = static_cast<int>(number_or(cfg, "m_choice", 0.0));

    const SampledWavefunction out = apply(s, m_choice, psi, apply_opts, opts.tol_free);
    io::write_wavefunction_binary(stage.path_for("output.bin"), out);
    io::write_wavefunction_csv(stage.path_for("output.csv"), out);
    io::write_profile_csv(stage.path_for("output_profile.csv"), out);
    results["input_norm"] = psi.l2_norm();
    results["output_norm"] = out.l2_norm();
    results["free"] = is_free(s, opts.tol_free);
    std::cout << "applied; norm " << psi.l2_norm() << " -> " << out.l2_norm() << "\n";
}

void cmd_propagate(const json& cfg, const CliOptions& opts, OutputStage& stage, json& results) {
    const json& m_node = cfg.contains("M") ? cfg.at("M") : cfg.at("hamiltonian");
    PropagationJob job{QuadraticHamiltonian(parse_matrix_spec(m_node, opts), opts.tol_sym),
                       parse_initial(cfg, opts),
                       parse_times(cfg),
                       PropagationMethod::metaplectic,
                       number_or(cfg, "dt", 1e-3),
                       cfg.value("allow_aliasing", false)};
    const std::string method = cfg.value("method", "metaplectic");
    if (method == "splitstep") {
        job.method = PropagationMethod::splitstep;
    } else if (method != "metaplectic") {
        throw InvalidInputError("method must be 'metaplectic' or 'splitstep'");
    }

    const PropagationResult result = job.method == PropagationMethod::metaplectic
                                         ? propagate_metaplectic(job)
                                         : propagate_splitstep(job);

    json index = json::array();
    std::ofstream norms;  // flat time series of snapshot norms
    {
        auto norms_path = stage.path_for("norms.csv");
        norms.open(norms_path);
        norms << "t,l2_norm\n";
    }
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
        char name[48];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.bin", i);
        io::write_wavefunction_binary(stage.path_for(name), result.snapshots[i].state);
        char profile[48];
        std::snprintf(profile, sizeof(profile), "profile_%03zu.csv", i);
        io::write_profile_csv(stage.path_for(profile), result.snapshots[i].state);
        index.push_back({{"t", result.snapshots[i].t},
                         {"file", name},
                         {"profile", profile},
                         {"l2_norm", result.snapshots[i].l2_norm}});
        norms << io::format_double(result.snapshots[i].t) << ","
              << io::format_double(result.snapshots[i].l2_norm) << "\n";
    }
    norms.close();

    json index_doc;
    index_doc["method"] = result.method;
    index_doc["initial_norm"] = result.initial_norm;
    index_doc["snapshots"] = index;
    std::ofstream out(stage.path_for("snapshots.json"));
    out << index_doc.dump(2) << "\n";

    results["method"] = result.method;
    results["snapshot_count"] = result.snapshots.size();
    results["initial_norm"] = result.initial_norm;
    std::cout << "propagated " << result.snapshots.size() << " snapshots (" << result.method
              << ")\n";
}

void cmd_amalgam_norm(const json& cfg, const CliOptions& opts, OutputStage& stage,
                      json& results) {
    const SampledWavefunction psi = parse_initial(cfg, opts);
    AmalgamNormSpec spec;
    spec.p = parse_exponent(cfg, "p");
    spec.q = parse_exponent(cfg, "q");
    spec.lattice = parse_lattice(cfg);
    const double value = amalgam_norm(psi, spec);

    json doc;
    doc["p"] = exponent_to_json(spec.p);
    doc["q"] = exponent_to_json(spec.q);
    doc["lattice"] = lattice_to_json(spec.lattice);
    doc["amalgam_norm"] = value;
    doc["l2_norm"] = psi.l2_norm();
    std::ofstream out(stage.path_for("norm.json"));
    out << doc.dump(2) << "\n";

    results["amalgam_norm"] = value;
    results["l2_norm"] = psi.l2_norm();
    std::cout << "amalgam norm = " << value << "\n";
}

void cmd_estimate(const json& cfg, const CliOptions& opts, OutputStage& stage, json& results) {
    const SymplecticMatrix s(parse_matrix_spec(cfg.at("matrix"), opts), opts.tol_sym);
    const double p = parse_exponent(cfg, "p");
    const double q = parse_exponent(cfg, "q");
    const AmalgamLattice lattice = parse_lattice(cfg);
    const double hbar = number_or(cfg, "hbar", 1.0);

    std::vector<FamilyMember> family;
    if (!cfg.contains("family") || (cfg["family"].is_string() && cfg["family"] == "default")) {
        family = default_test_family(parse_grid(cfg), hbar);
    } else if (cfg["family"].is_array()) {
        int idx = 0;
        for (const auto& item : cfg["family"]) {
            json wrapper = cfg;
            wrapper["initial"] = item;
            family.push_back(
                {"member " + std::to_string(idx++), parse_initial(wrapper, opts)});
        }
    } else {
        throw InvalidInputError("'family' must be \"default\" or an array of initial specs");
    }

    const std::string variant = cfg.value("variant", "cross");
    NormEstimateReport report;
    if (variant == "cross") {
        report = cross_estimate_experiment(s, p, q, family, lattice, opts.tol_free);
    } else if (variant == "same-space") {
        report = same_space_estimate_experiment(s, p, q, family, lattice, opts.tol_free);
    } else {
        throw InvalidInputError("variant must be 'cross' or 'same-space'");
    }

    std::ofstream out(stage.path_for("report.json"));
    out << report_to_json(report).dump(2) << "\n";
    io::write_report_csv(stage.path_for("report.csv"), report);

    results["max_ratio"] = report.max_ratio;
    if (report.factor_bound) results["factor_bound"] = *report.factor_bound;
    std::cout << variant << " estimate: max ratio = " << report.max_ratio << "\n";
}

void cmd_regularity(const json& cfg, const CliOptions& opts, OutputStage& stage, json& results) {
    const json& m_node = cfg.contains("M") ? cfg.at("M") : cfg.at("hamiltonian");
    const QuadraticHamiltonian h(parse_matrix_spec(m_node, opts), opts.tol_sym);
    const SampledWavefunction f0 = parse_initial(cfg, opts);
    const double p = parse_exponent(cfg, "p");
    const double q = parse_exponent(cfg, "q");
    const NormTimeSeries series =
        regularity_experiment(h, f0, p, q, parse_times(cfg), parse_lattice(cfg));

    io::write_series_csv(stage.path_for("series.csv"), series);
    json doc;
    doc["p"] = exponent_to_json(p);
    doc["q"] = exponent_to_json(q);
    doc["times"] = series.times;
    doc["norms"] = series.norms;
    std::ofstream out(stage.path_for("series.json"));
    out << doc.dump(2) << "\n";

    results["count"] = series.norms.size();
    std::cout << "regularity series with " << series.norms.size() << " points\n";
}

int cmd_verify(const json& cfg, OutputStage& stage, json& results) {
    std::vector<verify::CheckResult> checks;
    if (cfg.contains("checks") && cfg["checks"].is_array()) {
        for (const auto& name : cfg["checks"]) {
            checks.push_back(verify::run_check(name.get<std::string>()));
        }
    } else {
        checks = verify::run_all_checks();
    }
    bool all = true;
    json listing = json::array();
    for (const auto& r : checks) {
        std::printf("[%s] %-22s %6.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.seconds, r.detail.c_str());
        listing.push_back(
            {{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        all = all && r.passed;
    }
    std::ofstream out(stage.path_for("verify_report.json"));
    out << listing.dump(2) << "\n";
    results["all_passed"] = all;
    return all ? 0 : 1;
}

int run_command(const std::string& command, const CliOptions& opts) {
    json config = json::object();
    if (!opts.config_path.empty()) {
        config = parse_json_file(opts.config_path);
        if (!config.is_object()) {
            throw InvalidInputError("config root must be a JSON object");
        }
    }
    if (config.contains("command") && config["command"] != command) {
        throw InvalidInputError("config 'command' field disagrees with the subcommand");
    }
    apply_overrides(config, opts.overrides);
    if (opts.seed) config["seed"] = *opts.seed;

    fs::create_directories(opts.out_dir);
    OutputStage stage{opts.out_dir};

    json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["seed"] = opts.seed ? json(*opts.seed) : json(nullptr);
    manifest["tolerances"] = {{"tol_sym", opts.tol_sym}, {"tol_free", opts.tol_free}};
    manifest["config"] = config;
    if (!opts.reproducible) {
        manifest["timestamps"] = {{"started", now_string()}};
    }

    json results = json::object();
    int status = 0;
    if (command == "factor") {
        cmd_factor(config, opts, stage, results);
    } else if (command == "flow") {
        cmd_flow(config, opts, stage, results);
    } else if (command == "apply") {
        cmd_apply(config, opts, stage, results);
    } else if (command == "propagate") {
        cmd_propagate(config, opts, stage, results);
    } else if (command == "amalgam-norm") {
        cmd_amalgam_norm(config, opts, stage, results);
    } else if (command == "estimate") {
        cmd_estimate(config, opts, stage, results);
    } else if (command == "regularity") {
        cmd_regularity(config, opts, stage, results);
    } else if (command == "verify") {
        status = cmd_verify(config, stage, results);
    } else {
        throw InvalidInputError("unknown command: " + command);
    }

    manifest["results"] = results;
    if (!opts.reproducible) {
        manifest["timestamps"]["finished"] = now_string();
    }
    {
        std::ofstream out(stage.path_for("manifest.json"));
        out << manifest.dump(2) << "\n";
    }
    manifest["outputs"] = stage.names();  // recorded for the reader of stdout only
    stage.commit();
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metaplectic: free metaplectic operators, exact quadratic-Hamiltonian "
                 "propagation and Wiener-amalgam norm experiments"};
    app.require_subcommand(1);

    CliOptions opts;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"factor", "split a symplectic matrix into two free factors"},
        {"flow", "evaluate the Hamiltonian flow exp(tJM) at given times"},
        {"apply", "apply the metaplectic lift of a matrix to sampled data"},
        {"propagate", "solve the quadratic-symbol Schrodinger equation"},
        {"amalgam-norm", "compute a W(FL^p, L^q) mixed norm"},
        {"estimate", "measure continuity-constant ratios over a test family"},
        {"regularity", "amalgam norms along an exact evolution"},
        {"verify", "run the full invariant suite and print a pass/fail table"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", opts.config_path, "JSON experiment config");
        sub->add_option("--out", opts.out_dir, "output directory (default ./out)");
        sub->add_option("--seed", opts.seed, "seed recorded in the manifest and used by "
                                             "{random: ...} matrix specs");
        sub->add_option("--tol-sym", opts.tol_sym, "symplecticity validation tolerance");
        sub->add_option("--tol-free", opts.tol_free, "free-matrix detection tolerance");
        sub->add_flag("--reproducible", opts.reproducible,
                      "omit timestamps so manifests are byte-identical per config+seed");
        sub->add_option("--override", opts.overrides,
                        "KEY=VALUE config override (dotted keys reach nested fields; "
                        "plot CSV columns: wavefunction profiles x,re,im,abs2; "
                        "ratio tables index,label,ratio; series t,norm)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run_command(app.get_subcommands().front()->get_name(), opts);
    } catch (const AliasingRiskError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const FactorizationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
