#include "memwave/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "memwave/acceptance.hpp"
#include "memwave/parallel.hpp"
#include "memwave/pde_oracle.hpp"
#include "memwave/series.hpp"
#include "memwave/spectrum.hpp"

namespace memwave {

using nlohmann::json;

namespace {

// Collects problems while reading a JSON tree.
class Reader {
public:
    explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

    const json* object(const json& parent, const std::string& key, const std::string& where) {
        if (!parent.contains(key)) return nullptr;
        const auto& v = parent.at(key);
        if (!v.is_object()) {
            problems_.push_back(where + key + ": expected an object");
            return nullptr;
        }
        return &v;
    }

    std::optional<double> number(const json& parent, const std::string& key, const std::string& where,
                                 bool required) {
        if (!parent.contains(key)) {
            if (required) problems_.push_back(where + key + ": missing required field");
            return std::nullopt;
        }
        const auto& v = parent.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            problems_.push_back(where + key + ": expected a finite number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<long long> integer(const json& parent, const std::string& key, const std::string& where,
                                     bool required) {
        if (!parent.contains(key)) {
            if (required) problems_.push_back(where + key + ": missing required field");
            return std::nullopt;
        }
        const auto& v = parent.at(key);
        if (!v.is_number_integer()) {
            problems_.push_back(where + key + ": expected an integer");
            return std::nullopt;
        }
        return v.get<long long>();
    }

    std::optional<std::vector<double>> numbers(const json& parent, const std::string& key,
                                               const std::string& where) {
        if (!parent.contains(key)) return std::nullopt;
        const auto& v = parent.at(key);
        std::vector<double> out;
        if (v.is_array()) {
            for (const auto& e : v) {
                if (!e.is_number() || !std::isfinite(e.get<double>())) break;
                out.push_back(e.get<double>());
            }
            if (out.size() == v.size()) return out;
        }
        problems_.push_back(where + key + ": expected an array of finite numbers");
        return std::nullopt;
    }

    void fail(const std::string& message) { problems_.push_back(message); }

private:
    std::vector<std::string>& problems_;
};

std::vector<ModeData> read_modes(Reader& rd, const json& parent, const std::string& key,
                                 const std::string& where, int N) {
    std::vector<ModeData> out(static_cast<std::size_t>(std::max(N, 0)));
    if (!parent.contains(key)) return out;
    const auto& arr = parent.at(key);
    const std::string here = where + key;
    if (!arr.is_array()) {
        rd.fail(here + ": expected an array of mode entries");
        return out;
    }
    std::set<long long> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = here + "[" + std::to_string(i) + "].";
        if (!arr[i].is_object()) {
            rd.fail(here + "[" + std::to_string(i) + "]: expected an object");
            continue;
        }
        const auto n = rd.integer(arr[i], "n", at, true);
        ModeData d;
        d.alpha1 = rd.number(arr[i], "alpha1", at, false).value_or(0.0);
        d.rho1 = rd.number(arr[i], "rho1", at, false).value_or(0.0);
        d.alpha2 = rd.number(arr[i], "alpha2", at, false).value_or(0.0);
        d.rho2 = rd.number(arr[i], "rho2", at, false).value_or(0.0);
        for (const auto& [k, v] : arr[i].items()) {
            if (k != "n" && k != "alpha1" && k != "rho1" && k != "alpha2" && k != "rho2") {
                rd.fail(at + k + ": unknown field");
            }
        }
        if (!n || N < 1) continue;  // a bad N is reported on its own
        if (*n < 1 || *n > N) {
            rd.fail(at + "n: must lie in 1..N (N=" + std::to_string(N) + ")");
            continue;
        }
        if (!seen.insert(*n).second) {
            rd.fail(at + "n: mode " + std::to_string(*n) + " listed twice");
            continue;
        }
        out[static_cast<std::size_t>(*n - 1)] = d;
    }
    return out;
}

json modes_to_json(std::span<const ModeData> modes) {
    json arr = json::array();
    for (std::size_t k = 0; k < modes.size(); ++k) {
        if (modes[k].is_zero()) continue;
        arr.push_back({{"n", k + 1},
                       {"alpha1", modes[k].alpha1},
                       {"rho1", modes[k].rho1},
                       {"alpha2", modes[k].alpha2},
                       {"rho2", modes[k].rho2}});
    }
    return arr;
}

DataGenerator law_from_name(const std::string& name) {
    return name == "second_component" ? second_component_law() : standard_data_law();
}

FrameExperiment frame_from(const ExperimentConfig& cfg) {
    FrameExperiment ex;
    ex.N = cfg.ingham.N;
    ex.T = cfg.ingham.T;
    ex.trials = cfg.ingham.trials;
    ex.seed = cfg.ingham.seed;
    ex.intervals = cfg.grid.time_intervals;
    ex.generator = law_from_name(cfg.ingham.law);
    return ex;
}

json report_to_json(const InghamReport& r) {
    json j = {{"T", r.T},
              {"gamma", r.gamma},
              {"alpha", r.alpha},
              {"threshold_gamma4alpha", r.threshold_gamma4alpha},
              {"threshold_gammaonly", r.threshold_gammaonly},
              {"lower_ratio", r.lower_ratio},
              {"upper_ratio", r.upper_ratio},
              {"trials", r.trials},
              {"seed", r.seed},
              {"skipped", r.skipped},
              {"bounds", "empirical"}};
    if (!std::isnan(r.section_bound)) j["section_bound"] = r.section_bound;
    return j;
}

std::vector<double> snapshot_times(const ExperimentConfig& cfg) {
    if (!cfg.solution.snapshots.empty()) return cfg.solution.snapshots;
    return {0.0, cfg.T / 4, cfg.T / 2, 3 * cfg.T / 4, cfg.T};
}

json error_document(const std::string& sub, const std::exception& e) {
    json j = {{"schema_version", kSummarySchemaVersion},
              {"status", "error"},
              {"subcommand", sub},
              {"error", e.what()}};
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) j["problems"] = ce->problems();
    const char* kind = dynamic_cast<const ConfigError*>(&e)          ? "config"
                       : dynamic_cast<const InvalidArgument*>(&e)    ? "invalid_argument"
                       : dynamic_cast<const NumericalFailure*>(&e)   ? "numerical_failure"
                                                                     : "runtime";
    j["kind"] = kind;
    return j;
}

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream s;
    s << "invalid config (" << problems.size() << " problem" << (problems.size() == 1 ? "" : "s") << ")";
    for (const auto& p : problems) s << "\n  " << p;
    return s.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : InvalidArgument(join_problems(problems)), problems_(std::move(problems)) {}

ExperimentConfig parse_config(const json& j) {
    std::vector<std::string> problems;
    Reader rd(problems);
    ExperimentConfig cfg;
    if (!j.is_object()) throw ConfigError({"config: expected a JSON object"});

    static const std::set<std::string> known{"schema_version", "params",  "N",       "T",
                                             "grid",           "spectrum", "initial_data", "solution",
                                             "ingham",         "control", "output_dir"};
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) problems.push_back(k + ": unknown field");
    }
    if (const auto v = rd.integer(j, "schema_version", "", false); v && *v != kConfigSchemaVersion) {
        problems.push_back("schema_version: unsupported (expected " + std::to_string(kConfigSchemaVersion) + ")");
    }

    std::optional<double> beta, eta, a, b;
    if (!j.contains("params")) {
        for (const char* k : {"beta", "eta", "a", "b"}) problems.push_back(std::string("params.") + k + ": missing required field");
    } else if (const auto* p = rd.object(j, "params", "")) {
        beta = rd.number(*p, "beta", "params.", true);
        eta = rd.number(*p, "eta", "params.", true);
        a = rd.number(*p, "a", "params.", true);
        b = rd.number(*p, "b", "params.", true);
        if (beta && eta && !(*beta > 0.0 && *beta < *eta)) problems.push_back("params: need 0 < beta < eta");
        if (a && *a == 0.0) problems.push_back("params.a: coupling must be nonzero");
        if (b && *b == 0.0) problems.push_back("params.b: coupling must be nonzero");
    }

    const auto N = rd.integer(j, "N", "", true);
    if (N && *N < 1) problems.push_back("N: must be at least 1");
    const auto T = rd.number(j, "T", "", true);
    if (T && !(*T > 0.0)) problems.push_back("T: must be positive");
    if (N) cfg.N = static_cast<int>(*N);
    if (!N && j.contains("N")) cfg.N = 0;
    if (T) cfg.T = *T;

    if (const auto* g = rd.object(j, "grid", "")) {
        if (auto v = rd.integer(*g, "nx", "grid.", false)) {
            if (*v < 16) problems.push_back("grid.nx: must be at least 16");
            else cfg.grid.nx = static_cast<std::size_t>(*v);
        }
        if (auto v = rd.integer(*g, "time_intervals", "grid.", false)) {
            if (*v < 2) problems.push_back("grid.time_intervals: must be at least 2");
            else cfg.grid.time_intervals = static_cast<std::size_t>(*v);
        }
        if (auto v = rd.number(*g, "cfl", "grid.", false)) {
            if (!(*v > 0.0 && *v <= 0.9)) problems.push_back("grid.cfl: must lie in (0, 0.9]");
            else cfg.grid.cfl = *v;
        }
    }
    if (const auto* s = rd.object(j, "spectrum", "")) {
        if (auto v = rd.integer(*s, "modes", "spectrum.", false)) {
            if (*v < 2) problems.push_back("spectrum.modes: must be at least 2");
            else cfg.spectrum.modes = static_cast<int>(*v);
        }
    }
    cfg.initial_data = read_modes(rd, j, "initial_data", "", cfg.N);

    if (const auto* s = rd.object(j, "solution", "")) {
        if (auto v = rd.numbers(*s, "snapshots", "solution.")) {
            for (double t : *v) {
                if (t < 0.0 || (T && t > *T)) {
                    problems.push_back("solution.snapshots: times must lie in [0, T]");
                    break;
                }
            }
            cfg.solution.snapshots = *v;
        }
        if (auto v = rd.integer(*s, "x_samples", "solution.", false)) {
            if (*v < 2) problems.push_back("solution.x_samples: must be at least 2");
            else cfg.solution.x_samples = static_cast<std::size_t>(*v);
        }
    }

    if (const auto* s = rd.object(j, "ingham", "")) {
        if (auto v = rd.integer(*s, "N", "ingham.", false)) {
            if (*v < 1) problems.push_back("ingham.N: must be at least 1");
            else cfg.ingham.N = static_cast<int>(*v);
        }
        if (auto v = rd.number(*s, "T", "ingham.", false)) {
            if (!(*v > 0.0)) problems.push_back("ingham.T: must be positive");
            else cfg.ingham.T = *v;
        }
        if (auto v = rd.integer(*s, "trials", "ingham.", false)) {
            if (*v < 1) problems.push_back("ingham.trials: must be at least 1");
            else cfg.ingham.trials = static_cast<int>(*v);
        }
        if (s->contains("seed")) {
            const auto& v = s->at("seed");
            if (v.is_number_unsigned()) cfg.ingham.seed = v.get<std::uint64_t>();
            else problems.push_back("ingham.seed: expected a non-negative integer");
        }
        if (s->contains("law")) {
            const auto& v = s->at("law");
            if (v.is_string() && (v == "standard" || v == "second_component")) cfg.ingham.law = v.get<std::string>();
            else problems.push_back("ingham.law: expected \"standard\" or \"second_component\"");
        }
        if (auto v = rd.number(*s, "eps", "ingham.", false)) {
            if (!(*v > 0.0 && *v < 1.0)) problems.push_back("ingham.eps: must lie in (0, 1)");
            else cfg.ingham.eps = *v;
        }
        if (auto v = rd.numbers(*s, "sweep_T", "ingham.")) {
            for (double t : *v) {
                if (!(t > 0.0)) {
                    problems.push_back("ingham.sweep_T: times must be positive");
                    break;
                }
            }
            cfg.ingham.sweep_T = *v;
        }
    }

    cfg.control.target.modes.assign(static_cast<std::size_t>(std::max(cfg.N, 0)), ModeData{});
    if (const auto* s = rd.object(j, "control", "")) {
        cfg.control.target.modes = read_modes(rd, *s, "target", "control.", cfg.N);
        if (auto v = rd.number(*s, "regularization", "control.", false)) {
            if (*v < 0.0) problems.push_back("control.regularization: must be non-negative");
            else cfg.control.regularization = *v;
        }
        if (auto v = rd.number(*s, "max_condition", "control.", false)) {
            if (!(*v > 1.0)) problems.push_back("control.max_condition: must exceed 1");
            else cfg.control.max_condition = *v;
        }
        if (auto v = rd.number(*s, "tolerance", "control.", false)) {
            if (!(*v > 0.0)) problems.push_back("control.tolerance: must be positive");
            else cfg.control.tolerance = *v;
        }
        if (auto v = rd.number(*s, "T_below", "control.", false)) {
            if (!(*v > 0.0)) problems.push_back("control.T_below: must be positive");
            else cfg.control.T_below = *v;
        }
    }

    if (j.contains("output_dir")) {
        if (j.at("output_dir").is_string()) cfg.output_dir = j.at("output_dir").get<std::string>();
        else problems.push_back("output_dir: expected a string");
    }

    if (!problems.empty()) throw ConfigError(std::move(problems));
    cfg.params = Parameters(*beta, *eta, *a, *b);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot open " + path.string()});
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("config: ") + e.what()});
    }
    return parse_config(j);
}

std::uint64_t config_hash(const json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : j.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_hash(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ReportWriter::ReportWriter(std::filesystem::path dir, std::uint64_t hash) : dir_(std::move(dir)), hash_(hash) {
    std::filesystem::create_directories(dir_);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace

void ReportWriter::csv(const std::string& name, const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows) const {
    auto out = open_output(dir_ / name);
    out << "# config_hash: " << format_hash(hash_) << '\n';
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
}

void ReportWriter::plot(const std::string& name, const std::string& comment,
                        const std::vector<std::vector<std::vector<double>>>& blocks) const {
    auto out = open_output(dir_ / name);
    out << "# config_hash: " << format_hash(hash_) << '\n';
    out << "# " << comment << '\n';
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (b) out << "\n\n";
        for (const auto& row : blocks[b]) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? " " : "") << format_double(row[c]);
            out << '\n';
        }
    }
}

void ReportWriter::json(const std::string& name, nlohmann::json doc) const {
    doc["config_hash"] = format_hash(hash_);
    auto out = open_output(dir_ / name);
    out << doc.dump(2) << '\n';
}

std::optional<Subcommand> parse_subcommand(const std::string& name) {
    for (auto s : {Subcommand::Spectrum, Subcommand::Modes, Subcommand::Solution, Subcommand::Ingham,
                   Subcommand::Control, Subcommand::Simulate, Subcommand::VerifyAll}) {
        if (subcommand_name(s) == name) return s;
    }
    return std::nullopt;
}

std::string subcommand_name(Subcommand s) {
    switch (s) {
        case Subcommand::Spectrum: return "spectrum";
        case Subcommand::Modes: return "modes";
        case Subcommand::Solution: return "solution";
        case Subcommand::Ingham: return "ingham";
        case Subcommand::Control: return "control";
        case Subcommand::Simulate: return "simulate";
        case Subcommand::VerifyAll: return "verify-all";
    }
    return "?";
}

void run_spectrum(const ExperimentConfig& cfg, const ReportWriter& out) {
    const auto spectra = string_spectra(cfg.params, cfg.spectrum.modes);
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<double>> loci;
    for (const auto& s : spectra) {
        const auto res = spectrum_residuals(cfg.params, s);
        rows.push_back({static_cast<double>(s.n), s.lambda, s.r, s.omega.real(), s.omega.imag(), s.zeta.real(),
                        s.zeta.imag(), res.max_poly_residual, res.trace_error, res.product_error,
                        res.min_separation});
        for (const auto& z : s.roots()) loci.push_back({static_cast<double>(s.n), z.real(), z.imag()});
    }
    out.csv("spectrum.csv",
            {"n", "lambda", "r", "re_omega", "im_omega", "re_zeta", "im_zeta", "max_poly_residual",
             "trace_error", "product_error", "min_separation"},
            rows);
    out.plot("spectra_loci.dat", "n re(root) im(root); five roots per mode", {loci});

    const auto sc = sequence_constants(spectra);
    const double radicand = sc.gamma * sc.gamma - 16 * sc.alpha * sc.alpha;
    json doc = {{"schema_version", kSummarySchemaVersion},
                {"modes", cfg.spectrum.modes},
                {"gamma", sc.gamma},
                {"alpha", sc.alpha},
                {"chi", sc.chi},
                {"threshold_gammaonly", 2 * std::numbers::pi / sc.gamma}};
    if (radicand > 0.0) doc["threshold_gamma4alpha"] = 2 * std::numbers::pi / std::sqrt(radicand);
    out.json("spectrum.json", doc);
}

void run_modes(const ExperimentConfig& cfg, const ReportWriter& out) {
    const auto spectra = string_spectra(cfg.params, cfg.N);
    std::vector<std::vector<double>> rows;
    for (int n = 1; n <= cfg.N; ++n) {
        const auto& s = spectra[static_cast<std::size_t>(n - 1)];
        const auto c = mode_coefficients(cfg.params, s, cfg.initial_data[static_cast<std::size_t>(n - 1)]);
        rows.push_back({static_cast<double>(n), c.R, c.C.real(), c.C.imag(), c.D.real(), c.D.imag(), c.c.real(),
                        c.c.imag(), c.d.real(), c.d.imag(), c.E, c.condition});
    }
    out.csv("modes.csv",
            {"n", "R", "re_C", "im_C", "re_D", "im_D", "re_c", "im_c", "re_d", "im_d", "E",
             "vandermonde_condition"},
            rows);
}

void run_solution(const ExperimentConfig& cfg, const ReportWriter& out) {
    const auto ms = assemble_mode_set(cfg.params, cfg.initial_data);
    std::vector<double> x(cfg.solution.x_samples);
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = std::numbers::pi * static_cast<double>(j) / static_cast<double>(x.size() - 1);
    }
    std::vector<std::vector<double>> rows;
    for (double t : snapshot_times(cfg)) {
        const auto snap = eval_solution(ms, t, x);
        for (std::size_t j = 0; j < x.size(); ++j) rows.push_back({t, x[j], snap.u1[j], snap.u2[j]});
    }
    out.csv("solution_snapshots.csv", {"t", "x", "u1", "u2"}, rows);

    const TimeGrid g(0.0, cfg.T, cfg.grid.time_intervals);
    const auto tr = boundary_trace(ms, g);
    rows.clear();
    for (std::size_t k = 0; k < g.size(); ++k) rows.push_back({g.time(k), tr.first[k], tr.second[k]});
    out.csv("solution_trace.csv", {"t", "z1x", "z2x"}, rows);
}

void run_ingham(const ExperimentConfig& cfg, const ReportWriter& out) {
    const auto ex = frame_from(cfg);
    const auto rep = frame_ratio_experiment(cfg.params, ex);
    json doc = report_to_json(rep);
    doc["schema_version"] = kSummarySchemaVersion;
    doc["N"] = ex.N;
    doc["law"] = cfg.ingham.law;
    // Analytic constant of the inverse inequality next to the empirical ratio;
    // null when eps is outside the admissible range for these gamma, alpha.
    doc["analytic_lower_bound"] = {{"eps", cfg.ingham.eps}, {"value", nullptr}};
    try {
        doc["analytic_lower_bound"]["value"] = lower_bound_constant(ex.T, cfg.ingham.eps, rep.gamma, rep.alpha);
    } catch (const InvalidArgument&) {
    }
    out.json("ingham.json", doc);

    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < rep.ratios.size(); ++t) rows.push_back({static_cast<double>(t), rep.ratios[t]});
    out.csv("ingham_trials.csv", {"trial", "ratio"}, rows);

    if (!cfg.ingham.sweep_T.empty()) {
        std::vector<std::vector<double>> curve;
        for (double T : cfg.ingham.sweep_T) {
            auto sweep = ex;
            sweep.T = T;
            const auto r = frame_ratio_experiment(cfg.params, sweep);
            curve.push_back({T, r.lower_ratio, r.upper_ratio});
        }
        out.plot("ratio_vs_T.dat", "T lower_ratio upper_ratio (same seed at every T)", {curve});
    }
}

void run_control(const ExperimentConfig& cfg, const ReportWriter& out) {
    HumOptions opt;
    opt.intervals = cfg.grid.time_intervals;
    opt.regularization = cfg.control.regularization;
    opt.max_condition = cfg.control.max_condition;
    const auto res = solve_controls(cfg.params, cfg.control.target, cfg.T, opt);

    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < res.controls.g1.size(); ++k) {
        rows.push_back({res.controls.g1.time(k), res.controls.g1[k], res.controls.g2[k]});
    }
    out.csv("controls.csv", {"t", "g1", "g2"}, rows);
    out.plot("control_waveforms.dat", "t g1 g2", {rows});

    const auto grid = FDGrid::make(cfg.grid.nx, cfg.T, cfg.grid.cfl);
    StateHistory h;
    const auto rep = verify_control(cfg.params, res.controls, cfg.control.target, cfg.T, grid, &h);
    const auto target = target_profiles(cfg.control.target, grid);
    const auto x = grid.x();
    std::vector<std::vector<double>> overlay;
    for (std::size_t j = 0; j < grid.nx; ++j) {
        overlay.push_back({x[j], h.final_u1[j], target[0][j], h.final_u2[j], target[2][j], h.final_v1[j],
                           target[1][j], h.final_v2[j], target[3][j]});
    }
    out.plot("final_state.dat",
             "x u1(T) u1_target u2(T) u2_target u1_t(T) u1_t_target u2_t(T) u2_t_target", {overlay});

    const auto& g = res.gram;
    json doc = {{"schema_version", kSummarySchemaVersion},
                {"N", cfg.N},
                {"T", cfg.T},
                {"target", modes_to_json(cfg.control.target.modes)},
                {"gram",
                 {{"size", g.G.rows()},
                  {"condition_estimate", g.condition_estimate},
                  {"min_eigenvalue", g.min_eigenvalue},
                  {"max_eigenvalue", g.max_eigenvalue},
                  {"symmetry_error", g.symmetry_error},
                  {"regularization", g.regularization},
                  {"solver", g.solver}}},
                {"verification",
                 {{"nx", rep.nx},
                  {"nt", rep.nt},
                  {"u1_l2", rep.u1_l2},
                  {"u2_l2", rep.u2_l2},
                  {"v1_hm1", rep.v1_hm1},
                  {"v2_hm1", rep.v2_hm1},
                  {"projected", rep.projected},
                  {"target_norm", rep.target_norm},
                  {"tolerance", cfg.control.tolerance},
                  {"passed", rep.max_error() <= cfg.control.tolerance}}}};
    out.json("control.json", doc);
}

void run_simulate(const ExperimentConfig& cfg, const ReportWriter& out) {
    const auto grid = FDGrid::make(cfg.grid.nx, cfg.T, cfg.grid.cfl);
    SimulationOptions opt;
    opt.snapshot_stride = std::max<std::size_t>(1, grid.nt / 8);
    const auto h = simulate(cfg.params, grid, InitialState::from_modes(grid, cfg.initial_data), std::nullopt,
                            std::nullopt, opt);
    const auto x = grid.x();
    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < h.snapshot_times.size(); ++s) {
        for (std::size_t j = 0; j < grid.nx; ++j) rows.push_back({h.snapshot_times[s], x[j], h.u1[s][j], h.u2[s][j]});
    }
    out.csv("simulate_snapshots.csv", {"t", "x", "u1", "u2"}, rows);
    const auto tr = boundary_trace_fd(h);
    rows.clear();
    for (std::size_t k = 0; k < tr.first.size(); ++k) rows.push_back({tr.first.time(k), tr.first[k], tr.second[k]});
    out.csv("simulate_trace.csv", {"t", "z1x", "z2x"}, rows);
}

bool run_verify_all(const ExperimentConfig& cfg, const ReportWriter& out) {
    run_spectrum(cfg, out);
    run_modes(cfg, out);
    run_ingham(cfg, out);
    run_control(cfg, out);

    AcceptanceSettings s;
    s.params = cfg.params;
    s.seed = cfg.ingham.seed;
    s.spectrum_modes = cfg.spectrum.modes;
    s.frame_N = cfg.ingham.N;
    s.frame_T = cfg.ingham.T;
    s.trials = cfg.ingham.trials;
    s.trace_intervals = cfg.grid.time_intervals;
    s.hum_N = cfg.N;
    s.hum_T = cfg.T;
    s.hum_T_below = cfg.control.T_below;
    s.nx = cfg.grid.nx;
    s.target = cfg.control.target;
    s.tolerance = cfg.control.tolerance;

    json criteria = json::array();
    bool all = true;
    for (const auto& r : run_acceptance(s)) {
        all = all && r.passed;
        criteria.push_back({{"id", r.id},
                            {"name", r.name},
                            {"passed", r.passed},
                            {"detail", r.detail},
                            {"seconds", r.seconds}});
    }
    out.json("summary.json", {{"schema_version", kSummarySchemaVersion},
                              {"status", all ? "pass" : "fail"},
                              {"criteria", criteria}});
    return all;
}

int run(Subcommand sub, const RunOptions& options) {
    const std::string name = subcommand_name(sub);
    std::filesystem::path out_dir = options.out.value_or("out");
    default_thread_count() = options.threads;
    try {
        std::ifstream in(options.config);
        if (!in) throw ConfigError({"config: cannot open " + options.config.string()});
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError({std::string("config: ") + e.what()});
        }
        if (options.seed && j.is_object()) j["ingham"]["seed"] = *options.seed;
        if (!options.out && j.is_object() && j.contains("output_dir") && j["output_dir"].is_string()) {
            out_dir = j["output_dir"].get<std::string>();
        }
        const auto cfg = parse_config(j);
        json hashed = j;
        hashed.erase("output_dir");
        const ReportWriter writer(out_dir, config_hash(hashed));

        switch (sub) {
            case Subcommand::Spectrum: run_spectrum(cfg, writer); break;
            case Subcommand::Modes: run_modes(cfg, writer); break;
            case Subcommand::Solution: run_solution(cfg, writer); break;
            case Subcommand::Ingham: run_ingham(cfg, writer); break;
            case Subcommand::Control: run_control(cfg, writer); break;
            case Subcommand::Simulate: run_simulate(cfg, writer); break;
            case Subcommand::VerifyAll: return run_verify_all(cfg, writer) ? 0 : 2;
        }
        return 0;
    } catch (const std::exception& e) {
        const auto doc = error_document(name, e);
        std::cerr << doc.dump(2) << '\n';
        try {
            std::filesystem::create_directories(out_dir);
            std::ofstream f(out_dir / "error.json");
            f << doc.dump(2) << '\n';
        } catch (const std::exception&) {
        }
        return 1;
    }
}

}  // namespace memwave
