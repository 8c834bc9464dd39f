#pragma once

// Special functions and Gaussian-weight quadrature shared by every physics module.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace qbs::numerics {

inline constexpr double kSqrtPi = 1.7724538509055160273;

/// Gauss-Hermite rule for the weight e^{-x^2}.
///
/// Nodes whose weight underflows the smallest normal double are dropped, so for
/// orders above roughly 360 `nodes.size()` is smaller than `order`. The dropped
/// nodes cannot contribute to any finite integrand.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
};

/// Jacobi polynomial P_n^{(alpha,beta)}(x) from the terminating binomial sum.
///
/// Valid for every real alpha and beta, including negative integers where the
/// usual orthogonality-based routines break down. When alpha, beta are integers
/// and x is an odd integer the sum is carried out exactly in 128-bit integers;
/// otherwise the binomial coefficients are formed in log space with sign tracking
/// and accumulated in extended precision. Throws ValidationError for non-finite x.
double jacobi_p(int n, double alpha, double beta, double x);

/// Shared, immutable Gauss-Hermite rule. order must lie in [2, 512].
std::shared_ptr<const QuadratureRule> gauss_hermite_rule(int order);

/// Same as gauss_hermite_rule but returns a copy.
QuadratureRule gauss_hermite(int order);

/// Gauss-Legendre nodes and weights on [-1, 1].
std::shared_ptr<const QuadratureRule> gauss_legendre_rule(int order);

/// Error function, odd by construction.
double erf(double x);

/// Scaled complementary error function e^{x^2} erfc(x), finite for large x.
double erfcx(double x);

/// Terminating 2F1(-n, b; c; x) as a finite sum of n+1 terms.
/// Throws ValidationError when c is a non-positive integer reached before termination.
double hyp2f1_terminating(int n, double b, double c, double x);

/// Generalized hypergeometric pFq with at least one non-positive integer upper
/// parameter, summed to its last non-zero term.
double hyp_pfq_terminating(std::span<const double> upper, std::span<const double> lower, double x);

/// 4F3 convenience wrapper over hyp_pfq_terminating.
double hyp4f3_terminating(const std::array<double, 4>& upper, const std::array<double, 3>& lower, double x);

/// ln(n!) for n >= 0.
double log_factorial(int n);

/// Controls the adaptive Gaussian-expectation integrator.
///
/// The integrator starts with a Gauss-Hermite rule of `initial_order`, doubles
/// the order (capped at `max_order`) until successive results agree within
/// `tolerance`, and falls back to composite Gauss-Legendre panels on
/// [-half_width, half_width] when the Hermite sequence does not settle
/// (sharply peaked or highly oscillatory integrands).
struct QuadratureOptions {
    int initial_order = 96;
    int max_order = 512;
    double tolerance = 1e-9;
    double half_width = 10.0;
    int min_panels = 32;
    int max_panels = 1 << 15;
};

/// Options with `initial_order` taken from QBS_QUAD_ORDER when it is set.
QuadratureOptions quadrature_options_from_env();

/// Result of a vector-valued expectation, with the rule that produced it.
struct Expectation {
    std::vector<double> values;
    int order = 0;        // Hermite order, or 0 when the panel fallback was used
    int panels = 0;       // panel count of the fallback, 0 otherwise
};

using VectorIntegrand = std::function<void(double y, std::span<double> out)>;

/// Computes E[f(y)] = int e^{-y^2} f(y) dy / sqrt(pi) for a vector-valued f of
/// dimension `dim`. Throws ConvergenceError when neither strategy converges.
Expectation gaussian_expectation(const VectorIntegrand& f, std::size_t dim,
                                 const QuadratureOptions& opts = {});

/// Scalar convenience overload.
double gaussian_expectation(const std::function<double(double)>& f,
                            const QuadratureOptions& opts = {});

/// Golden-section maximization of f on [lo, hi]; returns the abscissa.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol);

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace qbs::numerics
