#pragma once

// Frequency-dependent waveguide beam splitter.
//
// R and phi depend on the photon frequencies only through
// eps = (omega2 - omega1) / Omega. Averages over Gaussian spectra therefore
// reduce to one-dimensional Gauss-Hermite integrals over eps.

#include <Eigen/Dense>

#include "qbs/bs_core.hpp"
#include "qbs/entanglement.hpp"
#include "qbs/numerics.hpp"

namespace qbs {

struct WaveguideParams {
    double omega_coupling = 1.0;  // Omega, rad/s
    double t_bs = 0.0;            // interaction time, s

    double omega_tbs() const { return omega_coupling * t_bs; }
    void validate() const;
};

struct MediumParams {
    double electron_count = 0.0;        // effective electrons N
    double modal_volume = 0.0;          // V, m^3
    double polarization_overlap = 1.0;  // u1 . u2
    double center_frequency = 0.0;      // omega0, rad/s

    void validate() const;
};

struct SpectralProfile {
    double center = 0.0;  // omega_0i, rad/s
    double width = 0.0;   // sigma_i, rad/s

    void validate() const;
};

struct ReflectanceResult {
    double r = 0.0;
    double phi = 0.0;
    // T = 0, so cos(phi) = -eps sqrt(R/T) is undefined; phi is set to pi/2.
    bool degenerate_phase = false;
};

/// R and phi at the dimensionless detuning eps and coupling strength Omega t_BS.
ReflectanceResult reflectance_eps(double eps, double omega_tbs);

/// R(eps) alone; the same envelope sin^2(x sqrt(1+eps^2)/2) / (1+eps^2).
double reflectance_r(double eps, double omega_tbs);

ReflectanceResult reflectance(double omega1, double omega2, const WaveguideParams& wg);

/// Coupling frequency from the medium, via the plasma frequency of the
/// effective electron density n = N / V (SI units):
/// Omega = (u1 . u2) n e^2 / (eps0 m_e omega0).
double omega_from_medium(const MediumParams& m);

/// Coupled-mode transfer matrix over length z for coupling kappa and
/// propagation mismatch delta. Reduces to the identity at z = 0.
Eigen::Matrix2cd coupled_mode_transfer(double kappa, double delta, double z);

/// Gaussian distribution of eps: mean and standard deviation.
struct DetuningDistribution {
    double mean = 0.0;
    double stddev = 0.0;

    /// eps ~ N((w02 - w01)/Omega, (s1^2 + s2^2)/Omega^2) for factorized Gaussian photons.
    static DetuningDistribution from_profiles(const SpectralProfile& p1, const SpectralProfile& p2,
                                              double omega_coupling);
    /// Identical photons of width sigma: stddev = sqrt(2) sigma / Omega.
    static DetuningDistribution identical(double sigma_over_omega);
};

struct AveragedModes {
    SchmidtSpectrum spectrum;
    int quadrature_order = 0;  // 0 when the panel fallback was used
    int panels = 0;
};

/// Lambda_k averaged over the joint spectral density at fixed Omega t_BS.
AveragedModes averaged_schmidt_modes(const FockPair& pair, double omega_tbs,
                                     const DetuningDistribution& eps,
                                     const numerics::QuadratureOptions& opts = {});

SchmidtSpectrum averaged_schmidt_modes(const FockPair& pair, const WaveguideParams& wg,
                                       const SpectralProfile& p1, const SpectralProfile& p2);

/// Omega t_BS -> infinity: the rapidly oscillating terms are dropped by
/// averaging lambda_k over the phase Omega t_BS sqrt(1+eps^2)/2 at each eps.
AveragedModes averaged_schmidt_modes_asymptotic(const FockPair& pair,
                                                const DetuningDistribution& eps,
                                                const numerics::QuadratureOptions& opts = {});

struct AsymptoticEntropy {
    double s_n = 0.0;
    double j = 1.0;
};

/// Closed-form asymptote for |1,1> with identical Gaussian photons.
AsymptoticEntropy entropy_asymptotic_11(double sigma_over_omega);

/// J alone (equals P_{1,1}).
double asymptotic_j(double sigma_over_omega);

/// S_N of the three-mode spectrum {(1-J)/2, J, (1-J)/2}.
double entropy_from_j(double j);

struct CoincidenceProbs {
    double p11 = 1.0;
    double p20 = 0.0;  // equals p02
};

CoincidenceProbs coincidence_probs_asymptotic(double sigma_over_omega);

}  // namespace qbs
