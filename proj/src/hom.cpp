#include "qbs/hom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "qbs/errors.hpp"

namespace qbs {

namespace {

constexpr double kOmega0FlagThreshold = 1e-3;
constexpr double kScanStep = 0.02;  // Omega t_BS spacing of the root scan
constexpr double kRootTol = 1e-9;

bool close_rel(double a, double b) {
    return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be positive and finite");
    }
}

void check_nonneg(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be finite and non-negative");
    }
}

// Quadratic forms of the JSA in frequency units shifted by the mean center and
// scaled by the larger width, so the exponents stay O(1).
struct JsaForms {
    Eigen::Matrix2d h;    // phi(w1,w2) phi(w2,w1) = exp(-x'Hx/2 + g'x - c)
    Eigen::Vector2d g;
    Eigen::Matrix2d hn;   // |phi(w1,w2)|^2 = exp(-x'Hn x/2 + gn'x - c)
    Eigen::Vector2d gn;
    double c = 0.0;
    double unit = 1.0;    // frequency unit used for the scaling
};

JsaForms jsa_forms(const JsaParams& j) {
    JsaForms f;
    f.unit = std::max(j.width1, j.width2);
    const double mid = 0.5 * (j.center1 + j.center2);
    const double s1 = j.width1 / f.unit;
    const double s2 = j.width2 / f.unit;
    const double c1 = (j.center1 - mid) / f.unit;
    const double c2 = (j.center2 - mid) / f.unit;
    double p = 0.0;   // 2 / sp^2
    double wp = 0.0;  // shifted pump center
    if (!j.fock_limit()) {
        const double sp = *j.pump_width / f.unit;
        p = 2.0 / (sp * sp);
        wp = (j.pump_center - 2.0 * mid) / f.unit;
        f.c = wp * wp / (sp * sp);
    }
    const double i1 = 1.0 / (s1 * s1);
    const double i2 = 1.0 / (s2 * s2);
    f.c += c1 * c1 * i1 + c2 * c2 * i2;
    f.h << p + i1 + i2, p, p, p + i1 + i2;
    const double gl = p * wp + c1 * i1 + c2 * i2;
    f.g << gl, gl;
    f.hn << p + 2.0 * i1, p, p, p + 2.0 * i2;
    f.gn << p * wp + 2.0 * c1 * i1, p * wp + 2.0 * c2 * i2;
    return f;
}

// log of int exp(-x'Hx/2 + g'x) d^2x without the common 2 pi
double log_gaussian_mass(const Eigen::Matrix2d& h, const Eigen::Vector2d& g) {
    return -0.5 * std::log(h.determinant()) + 0.5 * g.dot(h.ldlt().solve(g));
}

double hom_integrand_mean(const HomDimless& p, double omega_g_tau,
                          const numerics::QuadratureOptions& opts) {
    const double rho = p.omega_g_over_omega;
    const double d = p.detuning_ratio;
    const double b = p.b_param;
    const double x = p.omega_tbs;
    const double cross = 2.0 * b * std::exp(-d * d);
    return numerics::gaussian_expectation(
        [=](double t) {
            const double r1 = reflectance_r(rho * (t + d), x);
            const double t1 = 1.0 - r1;
            const double r2 = reflectance_r(rho * b * t, x);
            return t1 * t1 + r1 * r1 - cross * (1.0 - r2) * r2 * std::cos(b * omega_g_tau * t);
        },
        opts);
}

}  // namespace

bool JsaParams::symmetric() const {
    return close_rel(width1, width2) && close_rel(center1, center2);
}

void JsaParams::validate() const {
    check_positive(width1, "sigma_1");
    check_positive(width2, "sigma_2");
    if (!std::isfinite(center1) || !std::isfinite(center2)) {
        throw ValidationError("center frequencies must be finite");
    }
    if (pump_width) {
        check_positive(*pump_width, "sigma_p");
        if (!std::isfinite(pump_center)) throw ValidationError("pump center must be finite");
    }
}

JsaDerived jsa_derived(const JsaParams& j) {
    j.validate();
    const double s1 = j.width1 * j.width1;
    const double s2 = j.width2 * j.width2;
    const double sum = s1 + s2;
    JsaDerived d;
    d.a_param = 2.0 * j.width1 * j.width2 / sum;
    if (j.fock_limit()) {
        d.b_param = d.a_param;
        d.omega_g = std::sqrt(sum);
        d.delta_omega = j.center2 - j.center1;
        d.omega0_eff = (s2 * j.center1 + s1 * j.center2) / sum;
        return d;
    }
    const double sp = *j.pump_width;
    const double sp2 = sp * sp;
    const double x = sp2 / sum;
    const double a2 = d.a_param * d.a_param;
    d.b_param = d.a_param * std::sqrt((1.0 + x) / (a2 + x));
    const double den = sum + sp2;
    d.omega_g = std::sqrt((4.0 * s1 * s2 + sum * sp2) / den);
    d.delta_omega = (j.center2 * (sp2 + 2.0 * s1) - j.center1 * (sp2 + 2.0 * s2) +
                     j.pump_center * (s2 - s1)) /
                    den;
    const double first = 2.0 * sp * s1 * s2;
    const double second = sp2 * (s2 * j.center1 + s1 * j.center2);
    d.omega0_eff = (first + second) / (4.0 * s1 * s2 + sum * sp2);
    d.omega0_term_ratio = second != 0.0 ? std::fabs(first / second)
                                        : std::numeric_limits<double>::infinity();
    d.omega0_dimension_flag = d.omega0_term_ratio > kOmega0FlagThreshold;
    return d;
}

double jsa_normalization_deviation(const JsaParams& j) {
    j.validate();
    if (j.fock_limit()) return 0.0;
    const JsaForms f = jsa_forms(j);
    const double s1 = j.width1 / f.unit;
    const double s2 = j.width2 / f.unit;
    const double sp = *j.pump_width / f.unit;
    const double log_c2 = 0.5 * std::log(s1 * s1 + s2 * s2 + sp * sp) -
                          std::log(std::numbers::pi * s1 * s2 * sp);
    const double log_norm = log_c2 + std::log(2.0 * std::numbers::pi) +
                            log_gaussian_mass(f.hn, f.gn) - f.c;
    return std::expm1(0.5 * log_norm);  // sqrt(int |C phi|^2) - 1
}

double hom_conventional(const JsaParams& j, double delta_tau,
                        const numerics::QuadratureOptions& opts) {
    j.validate();
    if (!std::isfinite(delta_tau)) throw ValidationError("delay must be finite");
    const JsaForms f = jsa_forms(j);
    // Overlap normalized by int |phi|^2, so C drops out.
    const double amp = std::exp(log_gaussian_mass(f.h, f.g) - log_gaussian_mass(f.hn, f.gn));
    const Eigen::Matrix2d cov = f.h.inverse();
    const Eigen::Vector2d mean = cov * f.g;
    const Eigen::Matrix2d l = cov.llt().matrixL();
    const double tau = delta_tau * f.unit;

    auto pass = [&](int order) {
        const auto rule = numerics::gauss_hermite_rule(order);
        double acc = 0.0;
        const std::size_t n = rule->nodes.size();
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                const Eigen::Vector2d z(rule->nodes[a], rule->nodes[b]);
                const Eigen::Vector2d w = mean + std::numbers::sqrt2 * (l * z);
                acc += rule->weights[a] * rule->weights[b] * std::cos((w(1) - w(0)) * tau);
            }
        }
        return acc / std::numbers::pi;
    };

    int order = std::clamp(opts.initial_order, 2, opts.max_order);
    double prev = pass(order);
    while (order < opts.max_order) {
        order = std::min(2 * order, opts.max_order);
        const double cur = pass(order);
        if (std::fabs(cur - prev) <= opts.tolerance * std::max(1.0, std::fabs(cur))) {
            return 0.5 * (1.0 - amp * cur);
        }
        prev = cur;
    }
    throw ConvergenceError("hom_conventional: two-dimensional quadrature did not converge");
}

double hom_gaussian_closed(double delta_omega, double delta_tau) {
    const double u = delta_omega * delta_tau;
    return 0.5 * (1.0 - std::exp(-u * u));
}

void HomDimless::validate() const {
    if (!(b_param > 0.0 && b_param <= 1.0)) throw ValidationError("B must lie in (0, 1]");
    if (!std::isfinite(detuning_ratio)) throw ValidationError("Delta omega / Omega_g must be finite");
    check_nonneg(omega_g_over_omega, "Omega_g / Omega");
    check_nonneg(omega_tbs, "Omega t_BS");
}

HomDimless HomDimless::from(const JsaParams& j, const WaveguideParams& wg) {
    wg.validate();
    const JsaDerived d = jsa_derived(j);
    return {d.b_param, d.delta_omega / d.omega_g, d.omega_g / wg.omega_coupling, wg.omega_tbs()};
}

double hom_frequency_dependent(const HomDimless& p, double omega_g_tau,
                               const numerics::QuadratureOptions& opts) {
    p.validate();
    if (!std::isfinite(omega_g_tau)) throw ValidationError("delay must be finite");
    return hom_integrand_mean(p, omega_g_tau, opts);
}

double hom_frequency_dependent(const JsaParams& j, const WaveguideParams& wg, double delta_tau,
                               const numerics::QuadratureOptions& opts) {
    const HomDimless p = HomDimless::from(j, wg);
    return hom_frequency_dependent(p, jsa_derived(j).omega_g * delta_tau, opts);
}

double hom_constant_closed(double b_param, double detuning_ratio, double omega_g_tau) {
    const double u = b_param * omega_g_tau;
    return 0.5 * (1.0 - b_param * std::exp(-detuning_ratio * detuning_ratio) *
                            std::exp(-0.25 * u * u));
}

ReflectanceMoments reflectance_moments(double omega_g_over_omega, double omega_tbs,
                                       const numerics::QuadratureOptions& opts) {
    check_nonneg(omega_g_over_omega, "Omega_g / Omega");
    check_nonneg(omega_tbs, "Omega t_BS");
    const auto e = numerics::gaussian_expectation(
        [=](double y, std::span<double> out) {
            const double r = reflectance_r(omega_g_over_omega * y, omega_tbs);
            const double t = 1.0 - r;
            out[0] = r;
            out[1] = r * r;
            out[2] = t * t;
            out[3] = (t - r) * (t - r);
        },
        4, opts);
    return {e.values[0], e.values[1], e.values[2], e.values[3]};
}

double mean_reflectance(double omega_g_over_omega, double omega_tbs,
                        const numerics::QuadratureOptions& opts) {
    check_nonneg(omega_g_over_omega, "Omega_g / Omega");
    check_nonneg(omega_tbs, "Omega t_BS");
    return numerics::gaussian_expectation(
        [=](double y) { return reflectance_r(omega_g_over_omega * y, omega_tbs); }, opts);
}

double hom_identical_zero_delay(double omega_g_over_omega, double omega_tbs,
                                const numerics::QuadratureOptions& opts) {
    check_nonneg(omega_g_over_omega, "Omega_g / Omega");
    check_nonneg(omega_tbs, "Omega t_BS");
    return numerics::gaussian_expectation(
        [=](double y) {
            const double r = reflectance_r(omega_g_over_omega * y, omega_tbs);
            return (1.0 - 2.0 * r) * (1.0 - 2.0 * r);
        },
        opts);
}

double hom_identical_zero_delay(const JsaParams& j, const WaveguideParams& wg,
                                const numerics::QuadratureOptions& opts) {
    j.validate();
    wg.validate();
    if (!j.symmetric()) {
        throw ValidationError("hom_identical_zero_delay: JSA is not symmetric under w1 <-> w2");
    }
    return hom_identical_zero_delay(jsa_derived(j).omega_g / wg.omega_coupling, wg.omega_tbs(),
                                    opts);
}

std::vector<double> balanced_tbs(double omega_g_over_omega, double max_omega_tbs,
                                 const numerics::QuadratureOptions& opts) {
    check_nonneg(omega_g_over_omega, "Omega_g / Omega");
    check_positive(max_omega_tbs, "maximum Omega t_BS");
    auto f = [&](double x) { return mean_reflectance(omega_g_over_omega, x, opts) - 0.5; };

    const int n = static_cast<int>(std::ceil(max_omega_tbs / kScanStep));
    std::vector<double> xs(n + 1), fs(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = std::min(i * kScanStep, max_omega_tbs);
        fs[i] = f(xs[i]);
    }

    std::vector<double> roots;
    auto add_bracket = [&](double lo, double hi) {
        roots.push_back(numerics::bisect_root(f, lo, hi, kRootTol));
    };
    for (int i = 0; i < n; ++i) {
        if (fs[i] == 0.0) {
            roots.push_back(xs[i]);
        } else if ((fs[i] < 0.0) != (fs[i + 1] < 0.0) && fs[i + 1] != 0.0) {
            add_bracket(xs[i], xs[i + 1]);
        }
    }
    if (fs[n] == 0.0) roots.push_back(xs[n]);

    // A crossing pair narrower than the scan step hides inside one local
    // extremum; refine extrema that come close to 1/2 and bracket from there.
    for (int i = 1; i < n; ++i) {
        const bool peak = fs[i] >= fs[i - 1] && fs[i] >= fs[i + 1] && fs[i] < 0.0;
        const bool dip = fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1] && fs[i] > 0.0;
        if (!(peak || dip) || std::fabs(fs[i]) > 1e-2) continue;
        const double sign = peak ? 1.0 : -1.0;
        const double xm = numerics::golden_section_max(
            [&](double x) { return sign * f(x); }, xs[i - 1], xs[i + 1], 1e-10);
        const double fm = f(xm);
        if (sign * fm < 0.0) continue;
        if (fm == 0.0) {
            roots.push_back(xm);
            continue;
        }
        add_bracket(xs[i - 1], xm);
        add_bracket(xm, xs[i + 1]);
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::fabs(a - b) < 1e-7; }),
                roots.end());
    return roots;
}

HomCurve hom_curve(const HomDimless& p, const std::vector<double>& omega_g_taus,
                   const numerics::QuadratureOptions& opts) {
    p.validate();
    HomCurve c;
    c.delays = omega_g_taus;
    c.p12.reserve(omega_g_taus.size());
    for (double t : omega_g_taus) c.p12.push_back(hom_frequency_dependent(p, t, opts));
    c.coherence_time = 2.0 / p.b_param;
    try {
        c.visibility = visibility(c);
    } catch (const ValidationError&) {
        c.visibility = std::numeric_limits<double>::quiet_NaN();
    }
    return c;
}

double visibility(const HomCurve& curve) {
    if (curve.delays.size() != curve.p12.size() || curve.delays.empty()) {
        throw ValidationError("visibility: delays and P12 must be non-empty and of equal length");
    }
    if (!(curve.coherence_time > 0.0)) throw ValidationError("visibility: coherence time unset");
    std::optional<std::size_t> zero;
    std::size_t far = 0;
    for (std::size_t i = 0; i < curve.delays.size(); ++i) {
        if (curve.delays[i] == 0.0 && !zero) zero = i;
        if (std::fabs(curve.delays[i]) > std::fabs(curve.delays[far])) far = i;
    }
    if (!zero) throw ValidationError("visibility: curve has no zero-delay sample");
    if (std::fabs(curve.delays[far]) < 10.0 * curve.coherence_time) {
        throw ValidationError("visibility: no plateau sample at |delay| >= 10 tau_c");
    }
    const double plateau = curve.p12[far];
    if (!(plateau > 0.0)) throw ValidationError("visibility: plateau value is not positive");
    return (plateau - curve.p12[*zero]) / plateau;
}

}  // namespace qbs
