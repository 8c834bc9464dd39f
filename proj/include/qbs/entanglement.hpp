#pragma once

// Entanglement of the two output modes: von Neumann entropy (nats) and the
// Schmidt parameter K computed from the Schmidt spectrum lambda_k.

#include <span>
#include <vector>

#include "qbs/bs_core.hpp"

namespace qbs {

struct SchmidtSpectrum {
    std::vector<double> lambdas;
    double s_n = 0.0;      // -sum lambda ln lambda, with 0 ln 0 = 0
    double k_param = 1.0;  // 1 / sum lambda^2

    /// Builds the spectrum; throws ValidationError if the probabilities do not
    /// sum to one within 1e-9 or any entry is negative beyond rounding.
    static SchmidtSpectrum from_probabilities(std::vector<double> probs);
};

SchmidtSpectrum schmidt_spectrum(const FockPair& pair, const BsParams& params);

/// Closed forms for the |1,1> input.
double entropy_11_closed(double reflectance);
double schmidt_k_11_closed(double reflectance);

/// K of the Holland-Burnett state from the 4F3 closed form. s even, 2 <= s <= 60.
double schmidt_k_hb(int s);

/// K for input |s1, 0> from the 2F1 closed form. R must lie in [0, 1).
double schmidt_k_s0(int s1, double reflectance);

/// 2^{2 s1} (s1!)^2 / (2 s1)!, the value of schmidt_k_s0 at R = 1/2.
double schmidt_k_s0_max(int s1);

enum class Measure { VonNeumann, Schmidt };

struct Extremum {
    double r_star = 0.5;
    double value = 0.0;
};

/// Maximizer of the chosen measure over R in [0, 1/2]; 1 - r_star is the mirror
/// maximizer. A measure that is constant in R reports r_star = 1/2.
Extremum argmax_entanglement(const FockPair& pair, Measure measure);

}  // namespace qbs
