#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qbs/errors.hpp"

namespace qbs::cli {

namespace detail {

FockPair read_pair(const Params& p) {
    FockPair pair{p.get_int("s1"), p.get_int("s2", 0)};
    pair.validate();
    return pair;
}

double read_omega_tbs(const Params& p, const char* key, const std::string& def) {
    const std::string v = p.get_string(key, def);
    if (v == "inf") return std::numeric_limits<double>::infinity();
    const double x = p.get_double(key);
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError(std::string("parameter '") + key +
                              "' must be a non-negative number or 'inf'");
    }
    return x;
}

double balanced_point(double omega_g_over_omega, double target, double max_tbs,
                      const numerics::QuadratureOptions& opts) {
    const auto roots = balanced_tbs(omega_g_over_omega, max_tbs, opts);
    if (roots.empty()) {
        throw ValidationError("no Omega t_BS in [0, " + format_number(max_tbs) +
                              "] gives mean R = 1/2 at Omega_g/Omega = " +
                              format_number(omega_g_over_omega));
    }
    double best = roots.front();
    for (double r : roots) {
        if (std::fabs(r - target) < std::fabs(best - target)) best = r;
    }
    return best;
}

AveragedModes identical_modes(const FockPair& pair, double sigma_over_omega, double omega_tbs,
                              const numerics::QuadratureOptions& opts) {
    const auto eps = DetuningDistribution::identical(sigma_over_omega);
    if (std::isinf(omega_tbs)) return averaged_schmidt_modes_asymptotic(pair, eps, opts);
    return averaged_schmidt_modes(pair, omega_tbs, eps, opts);
}

void append_entropy_vs_r(Result& r, const FockPair& pair, const std::vector<double>& rs,
                         Measure measure) {
    const FockEvolver ev(pair);
    for (double x : rs) {
        if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("reflectance grid must lie in [0, 1]");
    }
    for (double x : rs) {
        const auto s = SchmidtSpectrum::from_probabilities(ev.probabilities(x));
        r.add_row({double(pair.s1), double(pair.s2), x,
                   measure == Measure::Schmidt ? s.k_param : s.s_n});
    }
}

void append_waveguide_entropy(Result& r, const FockPair& pair, const std::vector<double>& sigmas,
                              const std::vector<double>& omega_tbs,
                              const numerics::QuadratureOptions& opts) {
    for (double s : sigmas) {
        if (!(s >= 0.0)) throw ValidationError("sigma/Omega must be non-negative");
    }
    for (double x : omega_tbs) {
        if (!(x >= 0.0)) throw ValidationError("Omega t_BS must be non-negative");
    }
    for (double s : sigmas) {
        for (double x : omega_tbs) {
            const auto m = identical_modes(pair, s, x, opts);
            r.add_row({double(pair.s1), double(pair.s2), s, x, m.spectrum.s_n, m.spectrum.k_param});
        }
    }
}

VisibilityPoint identical_visibility(const HomDimless& p, const numerics::QuadratureOptions& opts) {
    // 50 / Omega_g is 25 coherence times for B = 1
    const HomCurve c = hom_curve(p, {0.0, 50.0 / p.b_param}, opts);
    return {c.p12[0], c.p12[1], visibility(c)};
}

}  // namespace detail

namespace {

using namespace detail;

const char* kNormProbs = "probabilities sum to 1";

nlohmann::ordered_json params_json(const Params& p) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : p.raw()) {
        // numbers are recorded as numbers, everything else verbatim
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (!v.empty() && end == v.c_str() + v.size() && std::isfinite(x)) {
            j[k] = x;
        } else {
            j[k] = v;
        }
    }
    return j;
}

Result cmd_evolve(const Params& p, const numerics::QuadratureOptions&) {
    const FockPair pair = read_pair(p);
    BsParams bs{p.get_double("r"), p.get_double("phi", std::numbers::pi / 2)};
    bs.validate();
    const auto dist = output_distribution(pair, bs);
    Result r;
    r.columns = {{"k", "photons"}, {"probs", "-"}};
    for (std::size_t k = 0; k < dist.probs.size(); ++k) r.add_row({double(k), dist.probs[k]});
    r.equations = {"bs-unitary", "fock-amplitude-jacobi"};
    r.normalization = kNormProbs;
    return r;
}

Result cmd_entropy_sweep(const Params& p, const numerics::QuadratureOptions&) {
    const FockPair pair = read_pair(p);
    const Grid g = p.get_grid("r-grid", "0:1:201");
    const std::string m = p.choice("measure", "vn", {"vn", "schmidt"});
    const Measure measure = m == "vn" ? Measure::VonNeumann : Measure::Schmidt;
    Result r;
    r.grid["r"] = g.to_json();
    r.columns = {{"s1", "photons"}, {"s2", "photons"}, {"R", "-"},
                 {m == "vn" ? "S_N" : "K", m == "vn" ? "nats" : "-"}};
    append_entropy_vs_r(r, pair, g.values(), measure);
    r.equations = {"fock-amplitude-jacobi", m == "vn" ? "von-neumann-entropy" : "schmidt-parameter"};
    r.normalization = kNormProbs;
    return r;
}

// sigma/Omega from the dimensionless key or from sigma and Omega in rad/s.
double read_sigma_over_omega(const Params& p, Result& r) {
    if (p.has("sigma-over-omega")) {
        const double s = p.get_double("sigma-over-omega");
        if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("sigma-over-omega must be >= 0");
        return s;
    }
    if (!p.has("sigma")) throw ValidationError("give sigma-over-omega, or sigma with omega");
    const double sigma = p.get_double("sigma");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive");
    double omega = 0.0;
    if (p.has("omega")) {
        omega = p.get_double("omega");
    } else if (p.has("electron-count")) {
        MediumParams m{p.get_double("electron-count"), p.get_double("modal-volume"),
                       p.get_double("overlap", 1.0), p.get_double("center-frequency")};
        omega = omega_from_medium(m);
        r.params["omega_resolved"] = omega;
    } else {
        throw ValidationError("give omega (rad/s) or the medium parameters with sigma");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be positive");
    return sigma / omega;
}

Result cmd_stats(const Params& p, const numerics::QuadratureOptions& opts) {
    const FockPair pair = read_pair(p);
    Result r;
    const double s = read_sigma_over_omega(p, r);
    double x = 0.0;
    if (p.has("t-bs") && p.has("omega")) {
        x = p.get_double("t-bs") * p.get_double("omega");
        if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError("t-bs must be non-negative");
    } else {
        x = read_omega_tbs(p, "omega-tbs", "inf");
    }
    const auto m = identical_modes(pair, s, x, opts);
    r.columns = {{"k", "photons"}, {"Lambda_k", "-"}};
    for (std::size_t k = 0; k < m.spectrum.lambdas.size(); ++k) {
        r.add_row({double(k), m.spectrum.lambdas[k]});
    }
    r.params["sigma_over_omega"] = s;
    r.params["omega_tbs"] = std::isinf(x) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(x);
    r.params["S_N"] = m.spectrum.s_n;
    r.params["K"] = m.spectrum.k_param;
    r.equations = {"waveguide-reflectance", "averaged-schmidt-modes", "fock-amplitude-jacobi"};
    if (std::isinf(x)) r.equations.push_back("oscillation-averaged-asymptote");
    r.normalization = "sum of Lambda_k = 1";
    return r;
}

Result cmd_waveguide_entropy(const Params& p, const numerics::QuadratureOptions& opts) {
    const FockPair pair = read_pair(p);
    const Grid g = p.get_grid("sigma-grid", "0.05:3:120");
    const double x = read_omega_tbs(p, "omega-tbs", "inf");
    Result r;
    r.grid["sigma_over_omega"] = g.to_json();
    r.params["omega_tbs"] = std::isinf(x) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(x);
    r.columns = {{"s1", "photons"}, {"s2", "photons"}, {"sigma_over_omega", "-"},
                 {"omega_tbs", "rad"}, {"S_N", "nats"}, {"K", "-"}};
    append_waveguide_entropy(r, pair, g.values(), {x}, opts);
    r.equations = {"waveguide-reflectance", "averaged-schmidt-modes", "von-neumann-entropy",
                   "schmidt-parameter"};
    if (std::isinf(x)) r.equations.push_back("oscillation-averaged-asymptote");
    r.normalization = "sum of Lambda_k = 1";
    return r;
}

JsaParams read_jsa(const Params& p) {
    JsaParams j;
    j.width1 = p.get_double("sigma1");
    j.width2 = p.get_double("sigma2", j.width1);
    j.center1 = p.get_double("center1");
    j.center2 = p.get_double("center2", j.center1);
    const std::string pw = p.get_string("pump-width", "inf");
    if (pw != "inf") {
        j.pump_width = p.get_double("pump-width");
        j.pump_center = p.get_double("pump-center", j.center1 + j.center2);
    }
    j.validate();
    return j;
}

void add_jsa_warnings(Result& r, const JsaParams& j, const JsaDerived& d) {
    if (d.omega0_dimension_flag) {
        r.warnings.push_back("omega0: first numerator term is " + format_number(d.omega0_term_ratio) +
                             " of the second; the printed formula was evaluated as is");
    }
    const double dev = jsa_normalization_deviation(j);
    if (std::fabs(dev) > 1e-6) {
        r.warnings.push_back("printed JSA constant C deviates from exact normalization by " +
                             format_number(dev) + "; results are renormalized numerically");
    }
    r.params["B"] = d.b_param;
    r.params["omega_g"] = d.omega_g;
    r.params["delta_omega"] = d.delta_omega;
    r.params["omega0"] = d.omega0_eff;
    r.params["C_deviation"] = dev;
}

Result cmd_hom_dip(const Params& p, const numerics::QuadratureOptions& opts) {
    const std::string splitter = p.choice("splitter", "waveguide", {"waveguide", "conventional"});
    const Grid g = p.get_grid("tau-grid", "-10:10:201");
    Result r;
    r.grid["omega_g_tau"] = g.to_json();
    const bool physical = p.has("sigma1");

    if (splitter == "conventional") {
        if (!physical) throw ValidationError("splitter=conventional needs the JSA (sigma1, center1, ...)");
        const JsaParams j = read_jsa(p);
        const JsaDerived d = jsa_derived(j);
        add_jsa_warnings(r, j, d);
        r.columns = {{"omega_g_tau", "-"}, {"delay", "s"}, {"P12", "-"}};
        for (double t : g.values()) {
            const double tau = t / d.omega_g;
            r.add_row({t, tau, hom_conventional(j, tau, opts)});
        }
        r.equations = {"hom-overlap-conventional", "jsa-gaussian"};
        r.normalization = "P12 = 1 without a splitter (R = 0)";
        return r;
    }

    HomDimless hp;
    double omega_g = 0.0;
    if (physical) {
        const JsaParams j = read_jsa(p);
        const JsaDerived d = jsa_derived(j);
        add_jsa_warnings(r, j, d);
        double omega = 0.0;
        if (p.has("omega")) {
            omega = p.get_double("omega");
        } else if (p.has("electron-count")) {
            omega = omega_from_medium({p.get_double("electron-count"), p.get_double("modal-volume"),
                                       p.get_double("overlap", 1.0), d.omega0_eff});
            r.params["omega_resolved"] = omega;
        } else {
            throw ValidationError("give omega (rad/s) or the medium parameters");
        }
        if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be positive");
        omega_g = d.omega_g;
        hp.b_param = d.b_param;
        hp.detuning_ratio = d.delta_omega / d.omega_g;
        hp.omega_g_over_omega = d.omega_g / omega;
        if (p.has("t-bs")) {
            hp.omega_tbs = p.get_double("t-bs") * omega;
        } else if (p.get_string("omega-tbs", "balanced") != "balanced") {
            hp.omega_tbs = p.get_double("omega-tbs");
        } else {
            hp.omega_tbs = -1.0;
        }
    } else {
        hp.b_param = p.get_double("b", 1.0);
        hp.detuning_ratio = p.get_double("detuning-ratio", 0.0);
        hp.omega_g_over_omega = p.get_double("omega-g-over-omega", 0.0);
        hp.omega_tbs = p.get_string("omega-tbs", "balanced") == "balanced"
                           ? -1.0
                           : p.get_double("omega-tbs");
    }
    if (hp.omega_tbs < 0.0) {
        HomDimless probe = hp;
        probe.omega_tbs = 0.0;
        probe.validate();
        hp.omega_tbs = balanced_point(hp.omega_g_over_omega, kBalancedTarget,
                                      p.get_double("max-tbs", kBalancedSearchMax), opts);
        r.params["omega_tbs_balanced"] = hp.omega_tbs;
    }
    hp.validate();
    const HomCurve c = hom_curve(hp, g.values(), opts);
    if (physical) {
        r.columns = {{"omega_g_tau", "-"}, {"delay", "s"}, {"P12", "-"}};
        for (std::size_t i = 0; i < c.delays.size(); ++i) {
            r.add_row({c.delays[i], c.delays[i] / omega_g, c.p12[i]});
        }
    } else {
        r.columns = {{"omega_g_tau", "-"}, {"P12", "-"}};
        for (std::size_t i = 0; i < c.delays.size(); ++i) r.add_row({c.delays[i], c.p12[i]});
    }
    r.params["coherence_time_omega_g"] = c.coherence_time;
    if (std::isfinite(c.visibility)) r.params["visibility"] = c.visibility;
    r.equations = {"hom-waveguide-1d", "waveguide-reflectance", "jsa-derived-widths"};
    r.normalization = "P12 = 1 at t_BS = 0";
    return r;
}

Result cmd_visibility(const Params& p, const numerics::QuadratureOptions& opts) {
    const Grid g = p.get_grid("omega-g-grid", "0:1:21");
    const std::string tbs = p.get_string("omega-tbs", "balanced");
    const double target = p.get_double("target-tbs", kBalancedTarget);
    const double max_tbs = p.get_double("max-tbs", kBalancedSearchMax);
    HomDimless hp;
    hp.b_param = p.get_double("b", 1.0);
    hp.detuning_ratio = p.get_double("detuning-ratio", 0.0);
    const bool balanced = tbs == "balanced";
    const double fixed = balanced ? 0.0 : p.get_double("omega-tbs");
    hp.omega_tbs = fixed;
    hp.omega_g_over_omega = g.lo;
    hp.validate();
    if (!(max_tbs > 0.0)) throw ValidationError("max-tbs must be positive");

    Result r;
    r.grid["omega_g_over_omega"] = g.to_json();
    r.columns = {{"omega_g_over_omega", "-"}, {"omega_tbs", "rad"}, {"P12_zero", "-"},
                 {"P12_plateau", "-"}, {"visibility", "-"}};
    for (double rho : g.values()) {
        hp.omega_g_over_omega = rho;
        if (balanced) {
            const auto roots = balanced_tbs(rho, max_tbs, opts);
            if (roots.empty()) {
                r.warnings.push_back("no balanced point at Omega_g/Omega = " + format_number(rho));
                continue;
            }
            double best = roots.front();
            for (double x : roots) {
                if (std::fabs(x - target) < std::fabs(best - target)) best = x;
            }
            hp.omega_tbs = best;
        }
        const auto v = identical_visibility(hp, opts);
        r.add_row({rho, hp.omega_tbs, v.p12_zero, v.p12_plateau, v.visibility});
    }
    r.equations = {"hom-waveguide-1d", "visibility-plateau-ratio", "waveguide-reflectance"};
    r.normalization = "P12 = 1 at t_BS = 0";
    return r;
}

Result cmd_figure(const Params& p, const numerics::QuadratureOptions& opts) {
    const std::string name = p.get_string("name", "");
    for (const auto& rec : figure_recipes()) {
        if (rec.name == name) {
            Result r = rec.build(p, opts);
            r.params["recipe"] = rec.name;
            r.params["figure"] = rec.figure;
            r.params["operation"] = rec.operation;
            return r;
        }
    }
    throw ValidationError("unknown figure '" + name + "'; see figure --list");
}

bool parent_writable(const std::string& path) {
    namespace fs = std::filesystem;
    fs::path parent = fs::path(path).parent_path();
    if (parent.empty()) parent = ".";
    std::error_code ec;
    if (!fs::is_directory(parent, ec)) return false;
    return ::access(parent.c_str(), W_OK) == 0;
}

void write_result(const Result& r, Format f, const numerics::QuadratureOptions& opts,
                  std::ostream& os) {
    if (f == Format::Json) {
        write_json(r, opts, os);
    } else {
        write_csv(r, os);
    }
}

}  // namespace

Result run_command(const std::string& command, const Params& p,
                   const numerics::QuadratureOptions& opts) {
    Result r;
    if (command == "evolve") {
        r = cmd_evolve(p, opts);
    } else if (command == "entropy-sweep") {
        r = cmd_entropy_sweep(p, opts);
    } else if (command == "stats") {
        r = cmd_stats(p, opts);
    } else if (command == "waveguide-entropy") {
        r = cmd_waveguide_entropy(p, opts);
    } else if (command == "hom-dip") {
        r = cmd_hom_dip(p, opts);
    } else if (command == "visibility") {
        r = cmd_visibility(p, opts);
    } else if (command == "figure") {
        r = cmd_figure(p, opts);
    } else {
        throw ValidationError("unknown command '" + command + "'");
    }
    nlohmann::ordered_json merged = params_json(p);
    for (auto& [k, v] : r.params.items()) merged[k] = v;
    r.params = std::move(merged);
    return r;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const numerics::QuadratureOptions opts = numerics::quadrature_options_from_env();
        if (!config.output_path.empty() && !parent_writable(config.output_path)) {
            throw ValidationError("cannot write output to '" + config.output_path + "'");
        }
        if (config.command == "figure" && config.params.has("list")) {
            std::ostringstream os;
            for (const auto& rec : figure_recipes()) {
                os << rec.name << '\t' << rec.figure << '\t' << rec.operation << '\t'
                   << rec.parameters << '\n';
            }
            out << os.str();
            return kExitOk;
        }
        const Result r = run_command(config.command, config.params, opts);
        if (config.output_path.empty()) {
            write_result(r, config.format, opts, out);
            return kExitOk;
        }
        // Write to a sibling temporary and rename so a failed run leaves no partial file.
        const std::string tmp = config.output_path + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f) throw ValidationError("cannot open '" + tmp + "' for writing");
            write_result(r, config.format, opts, f);
            if (!f.flush()) throw ValidationError("write to '" + tmp + "' failed");
        }
        std::error_code ec;
        std::filesystem::rename(tmp, config.output_path, ec);
        if (ec) {
            std::filesystem::remove(tmp, ec);
            throw ValidationError("cannot move output into '" + config.output_path + "'");
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ConvergenceError& e) {
        err << "error: numerical non-convergence: " << e.what() << '\n';
        return kExitConvergence;
    }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(f, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw ValidationError(path + ":" + std::to_string(lineno) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

namespace {

// Flags accepted by each command. Every flag takes one value except `list`.
const std::map<std::string, std::vector<std::string>>& command_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"evolve", {"s1", "s2", "r", "phi"}},
        {"entropy-sweep", {"s1", "s2", "r-grid", "measure"}},
        {"stats",
         {"s1", "s2", "sigma-over-omega", "sigma", "omega", "electron-count", "modal-volume",
          "overlap", "center-frequency", "omega-tbs", "t-bs"}},
        {"waveguide-entropy", {"s1", "s2", "sigma-grid", "omega-tbs"}},
        {"hom-dip",
         {"splitter", "tau-grid", "omega-g-over-omega", "omega-tbs", "b", "detuning-ratio",
          "max-tbs", "sigma1", "sigma2", "center1", "center2", "pump-width", "pump-center", "omega",
          "electron-count", "modal-volume", "overlap", "t-bs"}},
        {"visibility",
         {"omega-g-grid", "omega-tbs", "b", "detuning-ratio", "target-tbs", "max-tbs"}},
        {"figure",
         {"name", "r-grid", "sigma-grid", "omega-tbs-grid", "tau-grid", "omega-g-grid",
          "detuning-ratio", "max-tbs"}},
    };
    return keys;
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Beam-splitter quantum optics simulator"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::map<std::string, std::string> values;
    std::string out_path, format = "csv", config_path;
    bool list = false;
    std::map<std::string, CLI::App*> subs;
    const std::map<std::string, std::string> about = {
        {"evolve", "output photon-number distribution for |s1,s2> on a constant splitter"},
        {"entropy-sweep", "entanglement of the output state over a reflectance grid"},
        {"stats", "spectrally averaged Schmidt modes and entropy on a waveguide splitter"},
        {"waveguide-entropy", "entropy over a grid of sigma/Omega or Omega t_BS"},
        {"hom-dip", "coincidence probability against delay"},
        {"visibility", "HOM visibility over Omega_g/Omega at balanced points"},
        {"figure", "run a named figure recipe (--list shows them)"}};
    for (const auto& [cmd, keys] : command_keys()) {
        const auto d = about.find(cmd);
        CLI::App* sub = app.add_subcommand(cmd, d == about.end() ? std::string() : d->second);
        sub->add_option("--out", out_path, "output file (default: standard output)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--config", config_path, "flat key=value parameter file");
        if (cmd == "figure") sub->add_flag("--list", list, "list the figure recipes");
        for (const auto& k : keys) {
            sub->add_option_function<std::string>(
                "--" + k, [&values, k](const std::string& v) { values[k] = v; });
        }
        subs[cmd] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitValidation;
    }

    RunConfig cfg;
    for (const auto& [cmd, sub] : subs) {
        if (sub->parsed()) cfg.command = cmd;
    }
    try {
        if (!config_path.empty()) {
            const auto& allowed = command_keys().at(cfg.command);
            for (auto& [k, v] : read_config_file(config_path)) {
                if (k == "out" || k == "format") {
                    if (k == "out" && out_path.empty()) out_path = v;
                    if (k == "format" && format == "csv" && !subs[cfg.command]->count("--format")) {
                        format = v;
                    }
                    continue;
                }
                if (std::find(allowed.begin(), allowed.end(), k) == allowed.end() && k != "list") {
                    throw ValidationError("config key '" + k + "' is not valid for " + cfg.command);
                }
                // command-line flags take precedence
                values.try_emplace(k, v);
            }
        }
        if (format != "csv" && format != "json") throw ValidationError("format must be csv or json");
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    if (list) values["list"] = "1";
    cfg.params = Params(values);
    cfg.output_path = out_path;
    cfg.format = format == "json" ? Format::Json : Format::Csv;
    return run(cfg, out, err);
}

}  // namespace qbs::cli
