#include <cmath>
#include <limits>
#include <numbers>

#include "commands.hpp"
#include "qbs/errors.hpp"

namespace qbs::cli {

namespace {

using namespace detail;

using Pairs = std::vector<FockPair>;

const std::vector<double> kSigmaSet = {10.0, 5.0, 3.0, 1.0, 1.0 / 3.0, 0.0};

Result entropy_vs_r(const Params& p, const Pairs& pairs, Measure m, const char* def_grid) {
    const Grid g = p.get_grid("r-grid", def_grid);
    Result r;
    r.grid["r"] = g.to_json();
    r.columns = {{"s1", "photons"}, {"s2", "photons"}, {"R", "-"},
                 m == Measure::Schmidt ? Column{"K", "-"} : Column{"S_N", "nats"}};
    for (const auto& pair : pairs) append_entropy_vs_r(r, pair, g.values(), m);
    r.equations = {"fock-amplitude-jacobi",
                   m == Measure::Schmidt ? "schmidt-parameter" : "von-neumann-entropy"};
    r.normalization = "probabilities sum to 1";
    return r;
}

Result entropy_vs_tbs(const Params& p, const Pairs& pairs, const numerics::QuadratureOptions& o) {
    const Grid g = p.get_grid("omega-tbs-grid", "0:30:151");
    Result r;
    r.grid["omega_tbs"] = g.to_json();
    r.params["sigma_over_omega"] = kSigmaSet;
    r.columns = {{"s1", "photons"}, {"s2", "photons"}, {"sigma_over_omega", "-"},
                 {"omega_tbs", "rad"}, {"S_N", "nats"}, {"K", "-"}};
    for (const auto& pair : pairs) append_waveguide_entropy(r, pair, kSigmaSet, g.values(), o);
    r.equations = {"waveguide-reflectance", "averaged-schmidt-modes", "von-neumann-entropy"};
    r.normalization = "sum of Lambda_k = 1";
    return r;
}

Result entropy_contour(const Params& p, const FockPair& pair, const numerics::QuadratureOptions& o) {
    const Grid gs = p.get_grid("sigma-grid", "0.05:3:60");
    const Grid gt = p.get_grid("omega-tbs-grid", "0:30:61");
    Result r;
    r.grid["sigma_over_omega"] = gs.to_json();
    r.grid["omega_tbs"] = gt.to_json();
    r.columns = {{"s1", "photons"}, {"s2", "photons"}, {"sigma_over_omega", "-"},
                 {"omega_tbs", "rad"}, {"S_N", "nats"}, {"K", "-"}};
    append_waveguide_entropy(r, pair, gs.values(), gt.values(), o);
    r.equations = {"waveguide-reflectance", "averaged-schmidt-modes", "von-neumann-entropy"};
    r.normalization = "sum of Lambda_k = 1";
    return r;
}

Result asymptotic_entropy(const Params& p, const FockPair& pair, const numerics::QuadratureOptions& o) {
    const Grid g = p.get_grid("sigma-grid", "0.05:3:120");
    Result r;
    r.grid["sigma_over_omega"] = g.to_json();
    r.columns = {{"sigma_over_omega", "-"}, {"S_N", "nats"}, {"K", "-"}};
    for (double s : g.values()) {
        if (!(s >= 0.0)) throw ValidationError("sigma/Omega must be non-negative");
    }
    for (double s : g.values()) {
        const auto m = identical_modes(pair, s, std::numeric_limits<double>::infinity(), o);
        r.add_row({s, m.spectrum.s_n, m.spectrum.k_param});
    }
    r.equations = {"oscillation-averaged-asymptote", "averaged-schmidt-modes", "von-neumann-entropy"};
    r.normalization = "sum of Lambda_k = 1";
    return r;
}

Result probabilities(const FockPair& pair, double refl) {
    const auto d = output_distribution(pair, BsParams{refl});
    Result r;
    r.params["s1"] = pair.s1;
    r.params["s2"] = pair.s2;
    r.params["r"] = refl;
    r.columns = {{"k", "photons"}, {"P_k", "-"}};
    for (std::size_t k = 0; k < d.probs.size(); ++k) r.add_row({double(k), d.probs[k]});
    r.equations = {"fock-amplitude-jacobi"};
    r.normalization = "probabilities sum to 1";
    return r;
}

// Mean reflectance for Omega t_BS -> infinity: sin^2 averages to 1/2.
double asymptotic_mean_r(double rho, const numerics::QuadratureOptions& o) {
    if (rho == 0.0) return 0.5;
    return numerics::gaussian_expectation(
        [rho](double y) { return 0.5 / (1.0 + rho * rho * y * y); }, o);
}

Result hom_dips(const Params& p, const std::vector<double>& rhos, double detuning,
                const numerics::QuadratureOptions& o) {
    const Grid g = p.get_grid("tau-grid", "-10:10:201");
    const double max_tbs = p.get_double("max-tbs", kBalancedSearchMax);
    Result r;
    r.grid["omega_g_tau"] = g.to_json();
    r.params["omega_g_over_omega"] = rhos;
    r.params["detuning_ratio"] = detuning;
    r.params["b"] = 1.0;
    r.columns = {{"omega_g_over_omega", "-"}, {"omega_tbs", "rad"}, {"omega_g_tau", "-"},
                 {"P12", "-"}};
    for (double rho : rhos) {
        HomDimless hp{1.0, detuning, rho, 0.0};
        hp.validate();
        hp.omega_tbs = balanced_point(rho, kBalancedTarget, max_tbs, o);
        const HomCurve c = hom_curve(hp, g.values(), o);
        for (std::size_t i = 0; i < c.delays.size(); ++i) {
            r.add_row({rho, hp.omega_tbs, c.delays[i], c.p12[i]});
        }
    }
    r.equations = {"hom-waveguide-1d", "waveguide-reflectance", "balanced-mean-reflectance"};
    r.normalization = "P12 = 1 at t_BS = 0";
    return r;
}

std::vector<Recipe> build_recipes() {
    std::vector<Recipe> v;
    const Pairs mixed = {{1, 1}, {2, 1}, {2, 2}, {3, 3}, {1, 6}};
    const Pairs vacuum = {{1, 0}, {2, 0}, {4, 0}, {6, 0}};
    const Pairs sym = {{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}};
    const Pairs fig7 = {{1, 1}, {2, 3}, {4, 2}, {3, 3}};

    v.push_back({"fig5a", "Fig. 5(a)", "schmidt_spectrum",
                 "S_N vs R, (1,1),(2,1),(2,2),(3,3),(1,6), r-grid 0:1:201",
                 [=](const Params& p, const numerics::QuadratureOptions&) {
                     return entropy_vs_r(p, mixed, Measure::VonNeumann, "0:1:201");
                 }});
    v.push_back({"fig5b", "Fig. 5(b)", "schmidt_spectrum",
                 "S_N vs R, (1,0),(2,0),(4,0),(6,0), r-grid 0:1:201",
                 [=](const Params& p, const numerics::QuadratureOptions&) {
                     return entropy_vs_r(p, vacuum, Measure::VonNeumann, "0:1:201");
                 }});
    v.push_back({"fig5c", "Fig. 5(c)", "schmidt_spectrum",
                 "K vs R, (1,1),(2,1),(2,2),(3,3),(1,6), r-grid 0:1:201",
                 [=](const Params& p, const numerics::QuadratureOptions&) {
                     return entropy_vs_r(p, mixed, Measure::Schmidt, "0:1:201");
                 }});
    v.push_back({"fig5d", "Fig. 5(d)", "schmidt_spectrum",
                 "K vs R, (1,0),(2,0),(4,0),(6,0), r-grid 0:1:201",
                 [=](const Params& p, const numerics::QuadratureOptions&) {
                     return entropy_vs_r(p, vacuum, Measure::Schmidt, "0:1:201");
                 }});
    v.push_back({"fig6a", "Fig. 6(a)", "schmidt_spectrum",
                 "S_N vs R for s1 = s2 = 1..6, r-grid 0:0.5:101",
                 [=](const Params& p, const numerics::QuadratureOptions&) {
                     return entropy_vs_r(p, sym, Measure::VonNeumann, "0:0.5:101");
                 }});
    v.push_back({"fig6b", "Fig. 6(b)", "schmidt_spectrum",
                 "K vs R for s1 = s2 = 1..6, r-grid 0:0.5:101",
                 [=](const Params& p, const numerics::QuadratureOptions&) {
                     return entropy_vs_r(p, sym, Measure::Schmidt, "0:0.5:101");
                 }});
    v.push_back({"fig7", "Fig. 7", "averaged_schmidt_modes",
                 "S_N vs Omega t_BS, (1,1),(2,3),(4,2),(3,3), sigma/Omega in {10,5,3,1,1/3,0}, "
                 "omega-tbs-grid 0:30:151",
                 [=](const Params& p, const numerics::QuadratureOptions& o) {
                     return entropy_vs_tbs(p, fig7, o);
                 }});
    v.push_back({"fig8a", "Fig. 8(a)", "averaged_schmidt_modes",
                 "S_N contour for (1,1), sigma-grid 0.05:3:60, omega-tbs-grid 0:30:61",
                 [](const Params& p, const numerics::QuadratureOptions& o) {
                     return entropy_contour(p, {1, 1}, o);
                 }});
    v.push_back({"fig8b", "Fig. 8(b)", "entropy_asymptotic_11",
                 "asymptotic S_N for (1,1), sigma-grid 0.05:3:120",
                 [](const Params& p, const numerics::QuadratureOptions&) {
                     const Grid g = p.get_grid("sigma-grid", "0.05:3:120");
                     Result r;
                     r.grid["sigma_over_omega"] = g.to_json();
                     r.columns = {{"sigma_over_omega", "-"}, {"S_N", "nats"}, {"J", "-"}};
                     for (double s : g.values()) {
                         if (!(s > 0.0)) throw ValidationError("sigma/Omega must be positive");
                     }
                     for (double s : g.values()) {
                         const auto e = entropy_asymptotic_11(s);
                         r.add_row({s, e.s_n, e.j});
                     }
                     r.equations = {"asymptotic-j-erfc", "three-mode-entropy"};
                     r.normalization = "Lambda = {(1-J)/2, J, (1-J)/2}";
                     return r;
                 }});
    v.push_back({"fig9a", "Fig. 9(a)", "averaged_schmidt_modes",
                 "S_N vs Omega t_BS for (0,2), sigma/Omega in {10,5,3,1,1/3,0}, "
                 "omega-tbs-grid 0:30:151",
                 [](const Params& p, const numerics::QuadratureOptions& o) {
                     return entropy_vs_tbs(p, {{0, 2}}, o);
                 }});
    v.push_back({"fig9b", "Fig. 9(b)", "averaged_schmidt_modes",
                 "S_N contour for (0,2), sigma-grid 0.05:3:60, omega-tbs-grid 0:30:61",
                 [](const Params& p, const numerics::QuadratureOptions& o) {
                     return entropy_contour(p, {0, 2}, o);
                 }});
    v.push_back({"fig9-inset", "Fig. 9(b) inset", "averaged_schmidt_modes_asymptotic",
                 "asymptotic S_N for (0,2), sigma-grid 0.05:3:120",
                 [](const Params& p, const numerics::QuadratureOptions& o) {
                     return asymptotic_entropy(p, {0, 2}, o);
                 }});
    const double r_max = 0.5 * (1.0 + 1.0 / std::sqrt(3.0));
    v.push_back({"fig10a", "Fig. 10(a)", "output_distribution", "(1,1) at R = 1/2",
                 [](const Params&, const numerics::QuadratureOptions&) {
                     return probabilities({1, 1}, 0.5);
                 }});
    v.push_back({"fig10b", "Fig. 10(b)", "output_distribution", "(1,1) at R = (1 + 1/sqrt3)/2",
                 [=](const Params&, const numerics::QuadratureOptions&) {
                     return probabilities({1, 1}, r_max);
                 }});
    v.push_back({"fig10c", "Fig. 10(c)", "output_distribution", "(0,2) at R = 1/2",
                 [](const Params&, const numerics::QuadratureOptions&) {
                     return probabilities({0, 2}, 0.5);
                 }});
    v.push_back({"fig10d", "Fig. 10(d)", "output_distribution", "(0,2) at R = (1 + 1/sqrt3)/2",
                 [=](const Params&, const numerics::QuadratureOptions&) {
                     return probabilities({0, 2}, r_max);
                 }});
    v.push_back({"fig11a", "Fig. 11", "averaged_schmidt_modes",
                 "(1,1) P_k at Omega t_BS = 5 pi/2, sigma/Omega in {0,1/3,1,3,10}",
                 [](const Params&, const numerics::QuadratureOptions& o) {
                     Result r;
                     const std::vector<double> sigmas = {0.0, 1.0 / 3.0, 1.0, 3.0, 10.0};
                     r.params["sigma_over_omega"] = sigmas;
                     r.params["omega_tbs"] = kBalancedTarget;
                     r.columns = {{"sigma_over_omega", "-"}, {"k", "photons"}, {"P_k", "-"}};
                     for (double s : sigmas) {
                         const auto m = identical_modes({1, 1}, s, kBalancedTarget, o);
                         for (std::size_t k = 0; k < m.spectrum.lambdas.size(); ++k) {
                             r.add_row({s, double(k), m.spectrum.lambdas[k]});
                         }
                     }
                     r.equations = {"waveguide-reflectance", "averaged-schmidt-modes"};
                     r.normalization = "sum of Lambda_k = 1";
                     return r;
                 }});
    v.push_back({"fig11b", "Fig. 11", "entropy_asymptotic_11",
                 "(1,1) P_k for Omega t_BS -> inf at sigma/Omega = 0.44467",
                 [](const Params&, const numerics::QuadratureOptions&) {
                     const double s = 0.44467;
                     const double j = asymptotic_j(s);
                     Result r;
                     r.params["sigma_over_omega"] = s;
                     r.columns = {{"k", "photons"}, {"P_k", "-"}};
                     r.add_row({0.0, 0.5 * (1.0 - j)});
                     r.add_row({1.0, j});
                     r.add_row({2.0, 0.5 * (1.0 - j)});
                     r.equations = {"asymptotic-j-erfc"};
                     r.normalization = "probabilities sum to 1";
                     return r;
                 }});
    auto coincidence = [](bool p11) {
        return [p11](const Params& p, const numerics::QuadratureOptions&) {
            const Grid g = p.get_grid("sigma-grid", "0.05:3:120");
            Result r;
            r.grid["sigma_over_omega"] = g.to_json();
            r.columns = {{"sigma_over_omega", "-"},
                         p11 ? Column{"P11", "-"} : Column{"P20", "-"}};
            for (double s : g.values()) {
                if (!(s > 0.0)) throw ValidationError("sigma/Omega must be positive");
            }
            for (double s : g.values()) {
                const auto c = coincidence_probs_asymptotic(s);
                r.add_row({s, p11 ? c.p11 : c.p20});
            }
            r.equations = {"asymptotic-j-erfc"};
            r.normalization = "P11 + 2 P20 = 1";
            return r;
        };
    };
    v.push_back({"fig12a", "Fig. 12(a)", "coincidence_probs_asymptotic",
                 "asymptotic P11 for (1,1), sigma-grid 0.05:3:120", coincidence(true)});
    v.push_back({"fig12b", "Fig. 12(b)", "coincidence_probs_asymptotic",
                 "asymptotic P20 = P02 for (1,1), sigma-grid 0.05:3:120", coincidence(false)});
    v.push_back({"fig12-inset", "Fig. 12 insets", "averaged_schmidt_modes",
                 "(1,1) P11 and P20 contour, sigma-grid 0.05:3:60, omega-tbs-grid 0:30:61",
                 [](const Params& p, const numerics::QuadratureOptions& o) {
                     const Grid gs = p.get_grid("sigma-grid", "0.05:3:60");
                     const Grid gt = p.get_grid("omega-tbs-grid", "0:30:61");
                     Result r;
                     r.grid["sigma_over_omega"] = gs.to_json();
                     r.grid["omega_tbs"] = gt.to_json();
                     r.columns = {{"sigma_over_omega", "-"}, {"omega_tbs", "rad"}, {"P11", "-"},
                                  {"P20", "-"}};
                     for (double s : gs.values()) {
                         if (!(s >= 0.0)) throw ValidationError("sigma/Omega must be non-negative");
                     }
                     for (double s : gs.values()) {
                         for (double x : gt.values()) {
                             if (!(x >= 0.0)) throw ValidationError("Omega t_BS must be non-negative");
                             const auto m = identical_modes({1, 1}, s, x, o);
                             r.add_row({s, x, m.spectrum.lambdas[1], m.spectrum.lambdas[2]});
                         }
                     }
                     r.equations = {"waveguide-reflectance", "averaged-schmidt-modes"};
                     r.normalization = "sum of Lambda_k = 1";
                     return r;
                 }});
    const std::vector<double> rhos13 = {1.0, 0.5, 0.25, 0.0};
    const std::vector<std::pair<const char*, double>> fig13 = {
        {"fig13a", 0.0}, {"fig13b", 0.5}, {"fig13c", 1.0}, {"fig13d", 1.5}};
    for (const auto& [name, d] : fig13) {
        const std::string panel = std::string("Fig. 13(") + name[5] + ")";
        v.push_back({name, panel, "hom_frequency_dependent",
                     "B = 1, Delta omega / Omega_g = " + format_number(d) +
                         ", Omega_g/Omega in {1,0.5,0.25,0}, balanced Omega t_BS nearest 5 pi/2, "
                         "tau-grid -10:10:201",
                     [=, dd = d](const Params& p, const numerics::QuadratureOptions& o) {
                         return hom_dips(p, rhos13, p.get_double("detuning-ratio", dd), o);
                     }});
    }
    v.push_back({"fig14a", "Fig. 14(a)", "mean_reflectance",
                 "mean R for Omega t_BS -> inf, omega-g-grid 0:10:201",
                 [](const Params& p, const numerics::QuadratureOptions& o) {
                     const Grid g = p.get_grid("omega-g-grid", "0:10:201");
                     Result r;
                     r.grid["omega_g_over_omega"] = g.to_json();
                     r.columns = {{"omega_g_over_omega", "-"}, {"mean_R", "-"}};
                     for (double rho : g.values()) {
                         if (!(rho >= 0.0)) throw ValidationError("Omega_g/Omega must be non-negative");
                     }
                     for (double rho : g.values()) r.add_row({rho, asymptotic_mean_r(rho, o)});
                     r.equations = {"mean-reflectance", "oscillation-averaged-asymptote"};
                     r.normalization = "mean over eps ~ Omega_g/Omega * y, y ~ exp(-y^2)/sqrt(pi)";
                     return r;
                 }});
    v.push_back({"fig14a-inset", "Fig. 14(a) inset", "mean_reflectance",
                 "mean R vs Omega t_BS for Omega_g/Omega in {1,2,5,10}, omega-tbs-grid 0:30:301",
                 [](const Params& p, const numerics::QuadratureOptions& o) {
                     const Grid g = p.get_grid("omega-tbs-grid", "0:30:301");
                     const std::vector<double> rhos = {1.0, 2.0, 5.0, 10.0};
                     Result r;
                     r.grid["omega_tbs"] = g.to_json();
                     r.params["omega_g_over_omega"] = rhos;
                     r.columns = {{"omega_g_over_omega", "-"}, {"omega_tbs", "rad"}, {"mean_R", "-"}};
                     for (double x : g.values()) {
                         if (!(x >= 0.0)) throw ValidationError("Omega t_BS must be non-negative");
                     }
                     for (double rho : rhos) {
                         for (double x : g.values()) r.add_row({rho, x, mean_reflectance(rho, x, o)});
                     }
                     r.equations = {"mean-reflectance", "waveguide-reflectance"};
                     r.normalization = "mean over eps ~ Omega_g/Omega * y, y ~ exp(-y^2)/sqrt(pi)";
                     return r;
                 }});
    v.push_back({"fig14b", "Fig. 14(b)", "hom_frequency_dependent",
                 "visibility at mean R = 1/2 for Omega t_BS near {2,8,14,20,30}, B = 1, "
                 "omega-g-grid 0:2:41",
                 [](const Params& p, const numerics::QuadratureOptions& o) {
                     const Grid g = p.get_grid("omega-g-grid", "0:2:41");
                     const double max_tbs = p.get_double("max-tbs", kBalancedSearchMax);
                     const std::vector<double> targets = {2.0, 8.0, 14.0, 20.0, 30.0};
                     Result r;
                     r.grid["omega_g_over_omega"] = g.to_json();
                     r.params["target_omega_tbs"] = targets;
                     r.columns = {{"target_omega_tbs", "rad"}, {"omega_g_over_omega", "-"},
                                  {"omega_tbs", "rad"}, {"visibility", "-"}};
                     for (double rho : g.values()) {
                         if (!(rho >= 0.0)) throw ValidationError("Omega_g/Omega must be non-negative");
                     }
                     for (double t : targets) {
                         for (double rho : g.values()) {
                             const auto roots = balanced_tbs(rho, max_tbs, o);
                             if (roots.empty()) continue;
                             double best = roots.front();
                             for (double x : roots) {
                                 if (std::fabs(x - t) < std::fabs(best - t)) best = x;
                             }
                             const auto vp = identical_visibility({1.0, 0.0, rho, best}, o);
                             r.add_row({t, rho, best, vp.visibility});
                         }
                     }
                     r.equations = {"hom-waveguide-1d", "visibility-plateau-ratio",
                                    "balanced-mean-reflectance"};
                     r.normalization = "P12 = 1 at t_BS = 0";
                     return r;
                 }});
    return v;
}

}  // namespace

const std::vector<Recipe>& figure_recipes() {
    static const std::vector<Recipe> recipes = build_recipes();
    return recipes;
}

}  // namespace qbs::cli
