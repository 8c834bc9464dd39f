#pragma once

// Hong-Ou-Mandel coincidence probability P_{1,2} for the Gaussian joint
// spectral amplitude
//   phi(w1, w2) = C exp(-(w1+w2-Wp)^2/(2 sp^2) - (w1-w01)^2/(2 s1^2) - (w2-w02)^2/(2 s2^2)),
// on a constant 50:50 splitter and on the frequency-dependent waveguide splitter.
//
// Normalizations differ by construction: the constant-splitter curve equals 1
// without a splitter (R = 0), the waveguide curve equals 1 at t_BS = 0.

#include <optional>
#include <vector>

#include "qbs/numerics.hpp"
#include "qbs/waveguide.hpp"

namespace qbs {

struct JsaParams {
    double pump_center = 0.0;               // Omega_p, rad/s
    std::optional<double> pump_width;       // sigma_p, rad/s; empty means infinite (Fock limit)
    double center1 = 0.0;                   // omega_01, rad/s
    double center2 = 0.0;                   // omega_02, rad/s
    double width1 = 1.0;                    // sigma_1, rad/s
    double width2 = 1.0;                    // sigma_2, rad/s

    bool fock_limit() const { return !pump_width.has_value(); }
    bool symmetric() const;
    void validate() const;
};

struct JsaDerived {
    double a_param = 1.0;       // A
    double b_param = 1.0;       // B
    double omega_g = 0.0;       // Omega_g, rad/s
    double delta_omega = 0.0;   // Delta omega, rad/s
    double omega0_eff = 0.0;    // omega_0 entering Omega, rad/s
    // |2 sp s1^2 s2^2| / |sp^2 (s2^2 w01 + s1^2 w02)|: the first numerator term
    // of omega_0 has different dimensions from the second. Zero in the Fock limit.
    double omega0_term_ratio = 0.0;
    bool omega0_dimension_flag = false;  // ratio above 1e-3
};

JsaDerived jsa_derived(const JsaParams& j);

/// Relative deviation of the printed normalization constant C from the exact
/// Gaussian normalization, sqrt(int |phi|^2) - 1. Zero in the Fock limit,
/// where C is not defined and the factorized profiles are normalized exactly.
double jsa_normalization_deviation(const JsaParams& j);

/// Constant-splitter P_{1,2} at R = T = 1/2 by two-dimensional Gauss-Hermite
/// quadrature of the JSA overlap. Normalized numerically.
double hom_conventional(const JsaParams& j, double delta_tau,
                        const numerics::QuadratureOptions& opts = {});

/// Closed form 1/2 (1 - exp(-(delta_omega tau)^2)) for comparison.
double hom_gaussian_closed(double delta_omega, double delta_tau);

/// Dimensionless controls of the waveguide HOM integral.
struct HomDimless {
    double b_param = 1.0;                  // B
    double detuning_ratio = 0.0;           // Delta omega / Omega_g
    double omega_g_over_omega = 0.0;       // Omega_g / Omega
    double omega_tbs = 0.0;                // Omega t_BS

    void validate() const;
    static HomDimless from(const JsaParams& j, const WaveguideParams& wg);
};

/// Waveguide P_{1,2} at dimensionless delay Omega_g * Delta tau.
double hom_frequency_dependent(const HomDimless& p, double omega_g_tau,
                               const numerics::QuadratureOptions& opts = {});

/// Same in physical units; Delta tau in seconds.
double hom_frequency_dependent(const JsaParams& j, const WaveguideParams& wg, double delta_tau,
                               const numerics::QuadratureOptions& opts = {});

/// Closed form for constant R = T = 1/2.
double hom_constant_closed(double b_param, double detuning_ratio, double omega_g_tau);

/// Moments of R over y ~ e^{-y^2}/sqrt(pi) with eps = (Omega_g/Omega) y.
struct ReflectanceMoments {
    double mean_r = 0.0;
    double mean_r2 = 0.0;
    double mean_t2 = 0.0;
    double mean_t_minus_r_sq = 0.0;
};

ReflectanceMoments reflectance_moments(double omega_g_over_omega, double omega_tbs,
                                       const numerics::QuadratureOptions& opts = {});

double mean_reflectance(double omega_g_over_omega, double omega_tbs,
                        const numerics::QuadratureOptions& opts = {});

/// Identical photons at zero delay: mean of (T - R)^2. Rejects a JSA that is
/// not symmetric under w1 <-> w2.
double hom_identical_zero_delay(const JsaParams& j, const WaveguideParams& wg,
                                const numerics::QuadratureOptions& opts = {});

/// Dimensionless form, taking Omega_g / Omega directly.
double hom_identical_zero_delay(double omega_g_over_omega, double omega_tbs,
                                const numerics::QuadratureOptions& opts = {});

/// All Omega t_BS in [0, max_omega_tbs] where the mean reflectance equals 1/2.
std::vector<double> balanced_tbs(double omega_g_over_omega, double max_omega_tbs,
                                 const numerics::QuadratureOptions& opts = {});

struct HomCurve {
    std::vector<double> delays;  // Omega_g * Delta tau, or seconds for physical curves
    std::vector<double> p12;
    double coherence_time = 0.0;  // same units as delays
    double visibility = 0.0;
};

/// P_{1,2} on the given dimensionless delays; tau_c = 2 / B.
HomCurve hom_curve(const HomDimless& p, const std::vector<double>& omega_g_taus,
                   const numerics::QuadratureOptions& opts = {});

/// (P(plateau) - P(0)) / P(plateau). Requires a sample at zero delay and one at
/// |delay| >= 10 tau_c; the plateau is the sample with the largest |delay|.
double visibility(const HomCurve& curve);

}  // namespace qbs
