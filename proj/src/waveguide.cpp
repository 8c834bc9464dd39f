#include "qbs/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qbs/errors.hpp"

namespace qbs {

namespace {

// CODATA 2018
constexpr double kElementaryCharge = 1.602176634e-19;  // C
constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
constexpr double kElectronMass = 9.1093837015e-31;  // kg

// Below this width the closed form for J loses digits to cancellation and the
// moment series is used instead.
constexpr double kSeriesThreshold = 0.05;

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

AveragedModes finish(const numerics::Expectation& e) {
    AveragedModes out;
    out.spectrum = SchmidtSpectrum::from_probabilities(e.values);
    out.quadrature_order = e.order;
    out.panels = e.panels;
    return out;
}

void check_distribution(const DetuningDistribution& eps) {
    check_finite(eps.mean, "detuning mean");
    if (!(eps.stddev >= 0.0) || !std::isfinite(eps.stddev)) {
        throw ValidationError("detuning spread must be finite and non-negative");
    }
}

// E[g] and E[g^2] for g = 1/(1+eps^2), eps ~ N(0, v), from the asymptotic
// moment series; accurate for small v.
void g_moments_series(double v, double& eg, double& eg2) {
    eg = 1.0;
    eg2 = 1.0;
    double term = 1.0;  // (2j-1)!! (-v)^j
    double prev = 1.0;
    for (int j = 1; j < 400; ++j) {
        term *= -(2.0 * j - 1.0) * v;
        if (std::fabs(term) > prev || std::fabs(term) < 1e-20) break;
        prev = std::fabs(term);
        eg += term;
        eg2 += (j + 1.0) * term;
    }
}

}  // namespace

void WaveguideParams::validate() const {
    if (!(omega_coupling > 0.0) || !std::isfinite(omega_coupling)) {
        throw ValidationError("coupling frequency Omega must be positive");
    }
    if (!(t_bs >= 0.0) || !std::isfinite(t_bs)) {
        throw ValidationError("interaction time t_BS must be non-negative");
    }
}

void MediumParams::validate() const {
    if (!(electron_count > 0.0)) throw ValidationError("electron count must be positive");
    if (!(modal_volume > 0.0)) throw ValidationError("modal volume must be positive");
    if (!(center_frequency > 0.0)) throw ValidationError("center frequency must be positive");
    if (!(polarization_overlap >= -1.0 && polarization_overlap <= 1.0)) {
        throw ValidationError("polarization overlap must lie in [-1, 1]");
    }
    check_finite(electron_count, "electron count");
    check_finite(modal_volume, "modal volume");
    check_finite(center_frequency, "center frequency");
}

void SpectralProfile::validate() const {
    if (!(center > 0.0) || !std::isfinite(center)) {
        throw ValidationError("spectral center must be positive");
    }
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw ValidationError("spectral width must be positive");
    }
}

double reflectance_r(double eps, double omega_tbs) {
    const double q = 1.0 + eps * eps;
    const double s = std::sin(0.5 * omega_tbs * std::sqrt(q));
    return s * s / q;
}

ReflectanceResult reflectance_eps(double eps, double omega_tbs) {
    check_finite(eps, "detuning");
    check_finite(omega_tbs, "Omega t_BS");
    ReflectanceResult out;
    out.r = std::clamp(reflectance_r(eps, omega_tbs), 0.0, 1.0);
    const double t = 1.0 - out.r;
    if (t <= 0.0) {
        out.phi = std::numbers::pi / 2;
        out.degenerate_phase = true;
        return out;
    }
    // |eps| sqrt(R/T) <= 1 follows from R (1+eps^2) <= 1; clamp guards rounding.
    const double c = std::clamp(-eps * std::sqrt(out.r / t), -1.0, 1.0);
    out.phi = std::acos(c);
    return out;
}

ReflectanceResult reflectance(double omega1, double omega2, const WaveguideParams& wg) {
    wg.validate();
    if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw ValidationError("frequencies must be positive");
    return reflectance_eps((omega2 - omega1) / wg.omega_coupling, wg.omega_tbs());
}

double omega_from_medium(const MediumParams& m) {
    m.validate();
    const double n = m.electron_count / m.modal_volume;
    const double wp2 = n * kElementaryCharge * kElementaryCharge /
                       (kVacuumPermittivity * kElectronMass);
    return m.polarization_overlap * wp2 / m.center_frequency;
}

Eigen::Matrix2cd coupled_mode_transfer(double kappa, double delta, double z) {
    if (!(kappa >= 0.0)) throw ValidationError("coupling kappa must be non-negative");
    check_finite(kappa, "kappa");
    check_finite(delta, "delta");
    check_finite(z, "z");
    const double s = std::hypot(delta, kappa);
    if (s == 0.0) return Eigen::Matrix2cd::Identity();
    const double cos_eta = delta / s;
    const double sin_eta = kappa / s;
    const double c = std::cos(s * z);
    const double sn = std::sin(s * z);
    const std::complex<double> u11(c, -cos_eta * sn);
    const std::complex<double> u12(0.0, -sin_eta * sn);
    Eigen::Matrix2cd u;
    u << u11, u12, u12, std::conj(u11);
    return u;
}

DetuningDistribution DetuningDistribution::from_profiles(const SpectralProfile& p1,
                                                         const SpectralProfile& p2,
                                                         double omega_coupling) {
    p1.validate();
    p2.validate();
    if (!(omega_coupling > 0.0)) throw ValidationError("coupling frequency Omega must be positive");
    return {(p2.center - p1.center) / omega_coupling,
            std::hypot(p1.width, p2.width) / omega_coupling};
}

DetuningDistribution DetuningDistribution::identical(double sigma_over_omega) {
    if (!(sigma_over_omega >= 0.0) || !std::isfinite(sigma_over_omega)) {
        throw ValidationError("sigma/Omega must be finite and non-negative");
    }
    return {0.0, std::numbers::sqrt2 * sigma_over_omega};
}

AveragedModes averaged_schmidt_modes(const FockPair& pair, double omega_tbs,
                                     const DetuningDistribution& eps,
                                     const numerics::QuadratureOptions& opts) {
    check_distribution(eps);
    if (!(omega_tbs >= 0.0) || !std::isfinite(omega_tbs)) {
        throw ValidationError("Omega t_BS must be finite and non-negative");
    }
    const FockEvolver ev(pair);
    const std::size_t dim = pair.total() + 1;
    if (eps.stddev == 0.0) {
        numerics::Expectation e;
        e.values = ev.probabilities(reflectance_r(eps.mean, omega_tbs));
        return finish(e);
    }
    const double scale = std::numbers::sqrt2 * eps.stddev;
    const numerics::VectorIntegrand f = [&](double y, std::span<double> out) {
        ev.probabilities(std::clamp(reflectance_r(eps.mean + scale * y, omega_tbs), 0.0, 1.0), out);
    };
    return finish(numerics::gaussian_expectation(f, dim, opts));
}

SchmidtSpectrum averaged_schmidt_modes(const FockPair& pair, const WaveguideParams& wg,
                                       const SpectralProfile& p1, const SpectralProfile& p2) {
    wg.validate();
    const auto eps = DetuningDistribution::from_profiles(p1, p2, wg.omega_coupling);
    return averaged_schmidt_modes(pair, wg.omega_tbs(), eps, numerics::quadrature_options_from_env())
        .spectrum;
}

AveragedModes averaged_schmidt_modes_asymptotic(const FockPair& pair,
                                                const DetuningDistribution& eps,
                                                const numerics::QuadratureOptions& opts) {
    check_distribution(eps);
    const FockEvolver ev(pair);
    const int total = pair.total();
    const std::size_t dim = total + 1;
    // lambda_k(g sin^2 theta) is a trigonometric polynomial of degree `total`
    // in 2 theta, so an equispaced rule with more than `total` points on one
    // period averages it exactly.
    const int m = 2 * total + 2;
    std::vector<double> sin2(m);
    for (int i = 0; i < m; ++i) {
        const double s = std::sin(std::numbers::pi * i / m);
        sin2[i] = s * s;
    }
    auto phase_average = [&, buf = std::vector<double>(dim)](double e, std::span<double> out) mutable {
        const double g = 1.0 / (1.0 + e * e);
        std::fill(out.begin(), out.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            ev.probabilities(std::min(g * sin2[i], 1.0), buf);
            for (std::size_t k = 0; k < dim; ++k) out[k] += buf[k];
        }
        for (double& v : out) v /= m;
    };
    if (eps.stddev == 0.0) {
        numerics::Expectation e;
        e.values.resize(dim);
        phase_average(eps.mean, e.values);
        return finish(e);
    }
    const double scale = std::numbers::sqrt2 * eps.stddev;
    const numerics::VectorIntegrand f = [&](double y, std::span<double> out) {
        phase_average(eps.mean + scale * y, out);
    };
    return finish(numerics::gaussian_expectation(f, dim, opts));
}

double asymptotic_j(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ValidationError("sigma/Omega must be positive and finite");
    }
    if (a < kSeriesThreshold) {
        double eg = 0.0, eg2 = 0.0;
        g_moments_series(2.0 * a * a, eg, eg2);
        return 1.0 - 2.0 * eg + 1.5 * eg2;
    }
    // The printed "erf(x) e^{x^2}" must be erfc for J to stay in [0, 1]; it is
    // evaluated as the scaled complementary function to avoid overflow.
    const double r = 1.0 / a;
    return 1.0 + 0.375 * r * r -
           numerics::kSqrtPi / 16.0 * r * r * r * (3.0 + 10.0 * a * a) * numerics::erfcx(0.5 * r);
}

double entropy_from_j(double j) {
    if (!(j >= 0.0 && j <= 1.0)) throw ValidationError("J must lie in [0, 1]");
    // ln(2 (1-J)^{J-1} / (2J)^J) with 0 ln 0 = 0 at both ends
    return (1.0 - j) * std::log(2.0) - xlogx(j) - xlogx(1.0 - j);
}

AsymptoticEntropy entropy_asymptotic_11(double sigma_over_omega) {
    const double j = std::clamp(asymptotic_j(sigma_over_omega), 0.0, 1.0);
    return {entropy_from_j(j), j};
}

CoincidenceProbs coincidence_probs_asymptotic(double sigma_over_omega) {
    const double j = std::clamp(asymptotic_j(sigma_over_omega), 0.0, 1.0);
    return {j, 0.5 * (1.0 - j)};
}

}  // namespace qbs
