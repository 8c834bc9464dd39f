#pragma once

// Two-mode Fock-state evolution through a beam splitter with constant
// reflectance R and phase shift phi.
//
// Port convention: k counts photons leaving output port 1, which receives the
// transmitted share of input port 1; p = s1 + s2 - k photons leave port 2.

#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qbs {

inline constexpr int kDefaultMaxPhotons = 40;

struct FockPair {
    int s1 = 0;
    int s2 = 0;

    int total() const { return s1 + s2; }
    /// Throws ValidationError on negative counts or s1 + s2 > max_total.
    void validate(int max_total = kDefaultMaxPhotons) const;
};

struct BsParams {
    double reflectance = 0.5;            // R in [0, 1]
    double phase = std::numbers::pi / 2;  // phi in [0, 2 pi)

    double transmittance() const { return 1.0 - reflectance; }
    void validate() const;
};

/// lambda_k for k = 0..s1+s2.
struct OutputDistribution {
    std::vector<double> probs;

    double mean_port1() const;
};

/// Lossless splitter matrix mapping input to output annihilation operators.
Eigen::Matrix2cd bs_matrix(const BsParams& params);

/// Evaluates the closed-form output amplitudes for one input pair.
///
/// The R-independent Jacobi-polynomial mode coefficients are built once at
/// construction (phi = pi/2, where they are exact integers up to a prefactor);
/// each call then costs O((s1+s2)^2).
class FockEvolver {
public:
    explicit FockEvolver(FockPair pair, int max_total = kDefaultMaxPhotons);

    const FockPair& pair() const { return pair_; }

    /// Amplitudes c_{k, N-k} for k = 0..N at reflectance R (phase fixed at pi/2).
    std::vector<std::complex<double>> amplitudes(double reflectance) const;

    /// lambda_k(R); R = 0 and R = 1 return the exact degenerate limits.
    std::vector<double> probabilities(double reflectance) const;

    /// Writes lambda_k(R) into `out` (size N+1) without allocating.
    void probabilities(double reflectance, std::span<double> out) const;

private:
    FockPair pair_;
    int total_;
    // modes_[k * (N+1) + n] = A^{k, N-k}_{n, N-n} at unit mu.
    std::vector<double> modes_;
};

/// c_{k,p} from the Jacobi-polynomial closed form at the given (R, phi).
/// phi must lie in (0, pi/2]; k + p must equal s1 + s2.
std::complex<double> amplitude_c(int k, int p, const FockPair& pair, const BsParams& params);

/// Independent route: expands (b1^+)^{s1} (b2^+)^{s2} |0> term by term.
OutputDistribution brute_force_distribution(const FockPair& pair, const BsParams& params);

/// lambda_k = |c_{k, N-k}|^2 from the closed form.
OutputDistribution output_distribution(const FockPair& pair, const BsParams& params);

struct MeanPhotonNumbers {
    double port1 = 0.0;  // k-bar
    double port2 = 0.0;  // p-bar
};

/// Mean photon numbers for input |s1, 0>: (s1 (1 - R), s1 R).
MeanPhotonNumbers mean_photon_numbers(int s1, double reflectance);

/// Output of |s, s> on a balanced splitter; entry n is the amplitude of
/// |2n, 2s - 2n>. s must be even and positive.
std::vector<std::complex<double>> holland_burnett_state(int s, double phase);

}  // namespace qbs
