#pragma once

// Building blocks shared by the commands and the figure recipes.

#include <vector>

#include "qbs/bs_core.hpp"
#include "qbs/cli.hpp"
#include "qbs/entanglement.hpp"
#include "qbs/hom.hpp"
#include "qbs/waveguide.hpp"

namespace qbs::cli::detail {

inline constexpr double kBalancedTarget = 2.5 * 3.14159265358979323846;  // 5 pi / 2
inline constexpr double kBalancedSearchMax = 40.0;

FockPair read_pair(const Params& p);

/// Omega t_BS from `key`: a number, or "inf" for the asymptotic limit (+inf).
double read_omega_tbs(const Params& p, const char* key, const std::string& def);

/// Balanced Omega t_BS nearest `target` for the given Omega_g / Omega; throws
/// ValidationError when no balanced point exists below `max_tbs`.
double balanced_point(double omega_g_over_omega, double target, double max_tbs,
                      const numerics::QuadratureOptions& opts);

/// Lambda_k of identical Gaussian photons; omega_tbs = +inf selects the asymptote.
AveragedModes identical_modes(const FockPair& pair, double sigma_over_omega, double omega_tbs,
                              const numerics::QuadratureOptions& opts);

/// Rows (s1, s2, R, measure) for a reflectance grid.
void append_entropy_vs_r(Result& r, const FockPair& pair, const std::vector<double>& rs,
                         Measure measure);

/// Rows (s1, s2, sigma/Omega, Omega t_BS, S_N, K).
void append_waveguide_entropy(Result& r, const FockPair& pair, const std::vector<double>& sigmas,
                              const std::vector<double>& omega_tbs,
                              const numerics::QuadratureOptions& opts);

/// Visibility of identical photons at the given balanced point.
struct VisibilityPoint {
    double p12_zero = 0.0;
    double p12_plateau = 0.0;
    double visibility = 0.0;
};
VisibilityPoint identical_visibility(const HomDimless& p, const numerics::QuadratureOptions& opts);

}  // namespace qbs::cli::detail
