#include "qbs/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qbs/errors.hpp"
#include "qbs/numerics.hpp"

namespace qbs {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_reflectance(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("reflectance must lie in [0, 1]");
}

constexpr int kScanPoints = 401;
constexpr double kRefineTol = 1e-9;

}  // namespace

SchmidtSpectrum SchmidtSpectrum::from_probabilities(std::vector<double> probs) {
    if (probs.empty()) throw ValidationError("Schmidt spectrum needs at least one entry");
    double sum = 0.0;
    for (double& p : probs) {
        if (!(p >= -1e-12)) throw ValidationError("Schmidt spectrum has a negative entry");
        p = std::max(p, 0.0);
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw ValidationError("Schmidt spectrum sums to " + std::to_string(sum) + ", not 1");
    }
    SchmidtSpectrum s;
    double sq = 0.0;
    double ent = 0.0;
    for (double p : probs) {
        sq += p * p;
        ent -= xlogx(p);
    }
    s.lambdas = std::move(probs);
    s.s_n = std::max(ent, 0.0);
    s.k_param = 1.0 / sq;
    return s;
}

SchmidtSpectrum schmidt_spectrum(const FockPair& pair, const BsParams& params) {
    return SchmidtSpectrum::from_probabilities(output_distribution(pair, params).probs);
}

double entropy_11_closed(double r) {
    check_reflectance(r);
    const double a = (1.0 - 2.0 * r) * (1.0 - 2.0 * r);
    const double b = 2.0 * r * (1.0 - r);
    // lambda = {b, a, b}: -a ln a - 2 b ln b
    return -xlogx(a) - 2.0 * xlogx(b);
}

double schmidt_k_11_closed(double r) {
    check_reflectance(r);
    const double q = r * (1.0 - r);
    return 1.0 / (1.0 - 8.0 * q * (1.0 - 3.0 * q));
}

double schmidt_k_hb(int s) {
    if (s < 2 || s % 2 != 0) throw ValidationError("schmidt_k_hb: s must be even and >= 2");
    if (s > 60) throw ValidationError("schmidt_k_hb: s > 60 is outside the supported range");
    const double sd = s;
    const std::array<double, 4> upper{0.5, 0.5, -sd, -sd};
    const std::array<double, 3> lower{1.0, 0.5 - sd, 0.5 - sd};
    const double f = numerics::hyp4f3_terminating(upper, lower, 1.0);
    // pi (s!)^2 / Gamma(s + 1/2)^2 in log form
    const double log_pref = std::log(std::numbers::pi) + 2.0 * numerics::log_factorial(s) -
                            2.0 * std::lgamma(sd + 0.5);
    return std::exp(log_pref) / f;
}

double schmidt_k_s0(int s1, double r) {
    if (s1 < 1) throw ValidationError("schmidt_k_s0: s1 must be positive");
    check_reflectance(r);
    if (r == 1.0) throw ValidationError("schmidt_k_s0: R = 1 is a pole; use R -> 1 - R");
    const double x = r / (1.0 - r);
    const double f = numerics::hyp2f1_terminating(s1, -static_cast<double>(s1), 1.0, x * x);
    return 1.0 / (std::pow(1.0 - r, 2.0 * s1) * f);
}

double schmidt_k_s0_max(int s1) {
    if (s1 < 0) throw ValidationError("schmidt_k_s0_max: s1 must be non-negative");
    return std::exp(2.0 * s1 * std::log(2.0) + 2.0 * numerics::log_factorial(s1) -
                    numerics::log_factorial(2 * s1));
}

Extremum argmax_entanglement(const FockPair& pair, Measure measure) {
    const FockEvolver ev(pair);
    std::vector<double> buf(pair.total() + 1);
    auto value = [&](double r) {
        ev.probabilities(std::clamp(r, 0.0, 1.0), buf);
        double sq = 0.0;
        double ent = 0.0;
        for (double p : buf) {
            sq += p * p;
            ent -= xlogx(p);
        }
        return measure == Measure::Schmidt ? 1.0 / sq : ent;
    };

    std::vector<double> grid(kScanPoints);
    int best = 0;
    double vmin = 0.0, vmax = 0.0;
    for (int i = 0; i < kScanPoints; ++i) {
        const double r = 0.5 * i / (kScanPoints - 1);
        grid[i] = value(r);
        if (i == 0 || grid[i] < vmin) vmin = grid[i];
        if (i == 0 || grid[i] > vmax) {
            vmax = grid[i];
            best = i;
        }
    }
    if (vmax - vmin < 1e-14) return {0.5, grid[kScanPoints - 1]};

    const double step = 0.5 / (kScanPoints - 1);
    const double lo = std::max(0.0, (best - 1) * step);
    const double hi = std::min(0.5, (best + 1) * step);
    const double r = numerics::golden_section_max(value, lo, hi, kRefineTol);
    const double v = value(r);
    if (v < grid[best]) return {best * step, grid[best]};
    return {r, v};
}

}  // namespace qbs
