#include "qbs/bs_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qbs/errors.hpp"
#include "qbs/numerics.hpp"

namespace qbs {

using numerics::log_factorial;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// A^{k,p}_{n,m} with mu supplied; the Jacobi argument is -(2 + mu^2)/mu^2.
double mode_coefficient(int k, int p, int n, int m, double mu) {
    const double jac = numerics::jacobi_p(n, -(1.0 + m + n), static_cast<double>(m - k),
                                          mu == 1.0 ? -3.0 : -(2.0 + mu * mu) / (mu * mu));
    if (jac == 0.0) return 0.0;
    const double log_pref = 0.5 * (log_factorial(m) + log_factorial(n) - log_factorial(k) -
                                   log_factorial(p)) -
                            0.5 * (n + m) * std::log1p(mu * mu) + (k + n) * std::log(mu);
    return std::exp(log_pref) * jac;
}

// Off the symmetric phase mu != 1 and the Jacobi sum cancels badly, roughly
// one decimal digit per photon for small R or small phi. The sum is run in
// long double first with a running rounding bound, then in extended binary
// floating point when that bound is too loose. Inputs are exact doubles, so
// only rounding inside the sum matters.
template <class F>
bool amplitude_general(int k, int p, const FockPair& pair, double r, double phase,
                       std::complex<double>& out) {
    using std::acos, std::cos, std::exp, std::fabs, std::log, std::log1p, std::pow, std::sin,
        std::sqrt;
    using boost::multiprecision::acos, boost::multiprecision::cos, boost::multiprecision::exp,
        boost::multiprecision::fabs, boost::multiprecision::log, boost::multiprecision::log1p,
        boost::multiprecision::pow, boost::multiprecision::sin, boost::multiprecision::sqrt;
    const F eps = std::numeric_limits<F>::epsilon();
    const int total = pair.total();
    const F rr = r;
    const F c = cos(F(phase));
    const F s = sin(F(phase));
    const F ratio = (1 - rr) / rr;
    const F mu = sqrt(1 + ratio * c * c) - c * sqrt(ratio);
    const F theta = acos(sqrt(1 - rr) * s);
    const F x = -(2 + mu * mu) / (mu * mu);
    const F lower = (x - 1) / 2;
    const F upper = (x + 1) / 2;
    const F log_mu = log(mu);
    const F log_scale = log1p(mu * mu);

    struct Value {
        F v;
        F err;
    };
    // P_n^{(alpha, beta)}(x) from the explicit binomial sum, both binomials
    // advanced incrementally in s. Returns the sum and a rounding bound.
    auto jacobi = [&](int n, int alpha, int beta) {
        const F za = F(n + alpha);
        const F zb = F(n + beta);
        F ca = 1;  // C(n + alpha, n - s)
        for (int i = 0; i < n; ++i) ca = ca * (za - i) / (i + 1);
        F cb = 1;  // C(n + beta, s)
        F pl = 1;
        F pu = pow(upper, n);
        F sum = 0;
        F mag = 0;
        for (int j = 0; j <= n; ++j) {
            const F term = ca * cb * pl * pu;
            sum += term;
            mag += fabs(term);
            if (j == n) break;
            // alpha + j + 1 < 0 throughout, so the divisor never vanishes
            ca = ca * (n - j) / (za - n + j + 1);
            cb = cb * (zb - j) / (j + 1);
            pl *= lower;
            pu /= upper;  // upper = -1/mu^2
        }
        return Value{sum, 4 * (n + 2) * eps * mag};
    };
    auto mode = [&](int kk, int pp, int n, int m) {
        const Value jac = jacobi(n, -(1 + m + n), m - kk);
        const F log_pref = F(0.5 * (log_factorial(m) + log_factorial(n) - log_factorial(kk) -
                                    log_factorial(pp))) -
                           F(n + m) / 2 * log_scale + F(kk + n) * log_mu;
        const F pref = exp(log_pref);
        // the prefactor carries the double-precision log factorials
        return Value{pref * jac.v, pref * (jac.err + 1e-15 * (n + m + 1) * fabs(jac.v))};
    };

    F re = 0;
    F im = 0;
    F err = 0;
    for (int n = 0; n <= total; ++n) {
        const int m = total - n;
        const Value a_in = mode(pair.s1, pair.s2, n, m);
        if (a_in.v == 0 && a_in.err == 0) continue;
        const Value a_out = mode(k, p, n, m);
        const F w = a_in.v * a_out.v;
        re += w * cos(2 * n * theta);
        im -= w * sin(2 * n * theta);
        err += fabs(a_in.v) * a_out.err + fabs(a_out.v) * a_in.err + a_in.err * a_out.err;
    }
    out = {static_cast<double>(re), static_cast<double>(im)};
    return err < 1e-13;
}

}  // namespace

void FockPair::validate(int max_total) const {
    if (s1 < 0 || s2 < 0) throw ValidationError("photon numbers must be non-negative");
    if (total() > max_total) {
        throw ValidationError("s1 + s2 = " + std::to_string(total()) + " exceeds the limit " +
                              std::to_string(max_total));
    }
}

void BsParams::validate() const {
    if (!(reflectance >= 0.0 && reflectance <= 1.0)) {
        throw ValidationError("reflectance must lie in [0, 1]");
    }
    if (!(phase >= 0.0 && phase < kTwoPi)) throw ValidationError("phase must lie in [0, 2pi)");
}

double OutputDistribution::mean_port1() const {
    double m = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
    return m;
}

Eigen::Matrix2cd bs_matrix(const BsParams& params) {
    params.validate();
    const double t = std::sqrt(params.transmittance());
    const double r = std::sqrt(params.reflectance);
    const std::complex<double> e = std::polar(1.0, params.phase);
    Eigen::Matrix2cd u;
    u << t, e * r, -std::conj(e) * r, t;
    return u;
}

FockEvolver::FockEvolver(FockPair pair, int max_total) : pair_(pair), total_(pair.total()) {
    pair_.validate(max_total);
    const int n_states = total_ + 1;
    modes_.resize(static_cast<std::size_t>(n_states) * n_states);
    for (int k = 0; k <= total_; ++k) {
        for (int n = 0; n <= total_; ++n) {
            modes_[k * n_states + n] = mode_coefficient(k, total_ - k, n, total_ - n, 1.0);
        }
    }
}

std::vector<std::complex<double>> FockEvolver::amplitudes(double reflectance) const {
    if (!(reflectance >= 0.0 && reflectance <= 1.0)) {
        throw ValidationError("reflectance must lie in [0, 1]");
    }
    const int n_states = total_ + 1;
    std::vector<std::complex<double>> c(n_states);
    const double theta = std::acos(std::sqrt(1.0 - reflectance));
    std::vector<std::complex<double>> phases(n_states);
    for (int n = 0; n < n_states; ++n) phases[n] = std::polar(1.0, -2.0 * n * theta);
    const double* in_row = &modes_[pair_.s1 * n_states];
    for (int k = 0; k < n_states; ++k) {
        const double* row = &modes_[k * n_states];
        std::complex<double> acc = 0.0;
        for (int n = 0; n < n_states; ++n) acc += in_row[n] * row[n] * phases[n];
        c[k] = acc;
    }
    return c;
}

void FockEvolver::probabilities(double reflectance, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (reflectance == 0.0) {
        out[pair_.s1] = 1.0;
        return;
    }
    if (reflectance == 1.0) {
        out[pair_.s2] = 1.0;
        return;
    }
    const int n_states = total_ + 1;
    // cos(theta) = sqrt(T), sin(theta) = sqrt(R); e^{-2i n theta} via recurrence.
    const std::complex<double> step(1.0 - 2.0 * reflectance,
                                    -2.0 * std::sqrt(reflectance * (1.0 - reflectance)));
    const double* in_row = &modes_[pair_.s1 * n_states];
    for (int k = 0; k < n_states; ++k) {
        const double* row = &modes_[k * n_states];
        std::complex<double> acc = 0.0;
        std::complex<double> ph = 1.0;
        for (int n = 0; n < n_states; ++n) {
            acc += in_row[n] * row[n] * ph;
            ph *= step;
        }
        out[k] = std::norm(acc);
    }
}

std::vector<double> FockEvolver::probabilities(double reflectance) const {
    if (!(reflectance >= 0.0 && reflectance <= 1.0)) {
        throw ValidationError("reflectance must lie in [0, 1]");
    }
    std::vector<double> out(total_ + 1);
    probabilities(reflectance, out);
    return out;
}

std::complex<double> amplitude_c(int k, int p, const FockPair& pair, const BsParams& params) {
    pair.validate();
    params.validate();
    const int total = pair.total();
    if (k < 0 || p < 0 || k + p != total) {
        throw ValidationError("amplitude_c: k + p must equal s1 + s2");
    }
    if (!(params.phase > 0.0 && params.phase <= std::numbers::pi / 2 + 1e-15)) {
        throw ValidationError("amplitude_c: phase must lie in (0, pi/2]");
    }
    const double r = params.reflectance;
    if (r == 0.0) return k == pair.s1 ? 1.0 : 0.0;
    if (r == 1.0) {
        // Full swap: b1^+ = e^{-i phi} a2^+, b2^+ = -e^{i phi} a1^+.
        if (k != pair.s2) return 0.0;
        const double sign = pair.s2 % 2 == 0 ? 1.0 : -1.0;
        return sign * std::polar(1.0, params.phase * (pair.s2 - pair.s1));
    }
    if (params.phase == std::numbers::pi / 2) {
        std::complex<double> acc = 0.0;
        const double theta = std::acos(std::sqrt(1.0 - r));
        for (int n = 0; n <= total; ++n) {
            const int m = total - n;
            const double a_in = mode_coefficient(pair.s1, pair.s2, n, m, 1.0);
            if (a_in == 0.0) continue;
            acc += a_in * mode_coefficient(k, p, n, m, 1.0) * std::polar(1.0, -2.0 * n * theta);
        }
        return acc;
    }
    namespace mp = boost::multiprecision;
    std::complex<double> out;
    if (amplitude_general<long double>(k, p, pair, r, params.phase, out)) return out;
    if (amplitude_general<mp::number<mp::cpp_bin_float<50>>>(k, p, pair, r, params.phase, out)) {
        return out;
    }
    if (amplitude_general<mp::number<mp::cpp_bin_float<120>>>(k, p, pair, r, params.phase, out)) {
        return out;
    }
    amplitude_general<mp::number<mp::cpp_bin_float<300>>>(k, p, pair, r, params.phase, out);
    return out;
}

OutputDistribution brute_force_distribution(const FockPair& pair, const BsParams& params) {
    pair.validate();
    params.validate();
    const int total = pair.total();
    const double t = std::sqrt(params.transmittance());
    const double r = std::sqrt(params.reflectance);
    const std::complex<double> e = std::polar(1.0, params.phase);
    // b1^+ = sqrt(T) a1^+ + e^{-i phi} sqrt(R) a2^+,  b2^+ = -e^{i phi} sqrt(R) a1^+ + sqrt(T) a2^+.
    // poly[i] is the coefficient of (a1^+)^i (a2^+)^{deg - i}.
    std::vector<std::complex<double>> poly{1.0};
    auto multiply = [&poly](std::complex<double> c1, std::complex<double> c2) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i] * c1;
            next[i] += poly[i] * c2;
        }
        poly = std::move(next);
    };
    for (int i = 0; i < pair.s1; ++i) multiply(t, std::conj(e) * r);
    for (int i = 0; i < pair.s2; ++i) multiply(-e * r, t);

    OutputDistribution out;
    out.probs.resize(total + 1);
    const double log_norm = log_factorial(pair.s1) + log_factorial(pair.s2);
    for (int k = 0; k <= total; ++k) {
        const double a = std::norm(poly[k]);
        out.probs[k] =
            a == 0.0 ? 0.0
                     : a * std::exp(log_factorial(k) + log_factorial(total - k) - log_norm);
    }
    return out;
}

OutputDistribution output_distribution(const FockPair& pair, const BsParams& params) {
    params.validate();
    return {FockEvolver(pair).probabilities(params.reflectance)};
}

MeanPhotonNumbers mean_photon_numbers(int s1, double reflectance) {
    if (s1 < 0) throw ValidationError("photon number must be non-negative");
    if (!(reflectance >= 0.0 && reflectance <= 1.0)) {
        throw ValidationError("reflectance must lie in [0, 1]");
    }
    return {s1 * (1.0 - reflectance), s1 * reflectance};
}

std::vector<std::complex<double>> holland_burnett_state(int s, double phase) {
    if (s <= 0 || s % 2 != 0) {
        throw ValidationError("holland_burnett_state: s must be even and positive");
    }
    if (2 * s > kDefaultMaxPhotons) throw ValidationError("holland_burnett_state: s too large");
    std::vector<std::complex<double>> amps(s + 1);
    for (int n = 0; n <= s; ++n) {
        const double log_mag = 0.5 * (log_factorial(2 * n) + log_factorial(2 * s - 2 * n)) -
                               s * std::log(2.0) - log_factorial(n) - log_factorial(s - n);
        amps[n] = std::polar(std::exp(log_mag), 2.0 * n * phase);
    }
    return amps;
}

}  // namespace qbs
