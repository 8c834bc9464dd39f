#include "qbs/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qbs/errors.hpp"

namespace qbs::numerics {

namespace {

__extension__ typedef __int128 i128;

bool is_integer(double v) { return std::isfinite(v) && v == std::nearbyint(v); }

// Binomial C(n, k) for 0 <= k <= n; nullopt-like failure signalled through `ok`.
bool binomial_exact(long long n, long long k, i128& out) {
    if (k < 0 || k > n) {
        out = 0;
        return true;
    }
    if (k > n - k) k = n - k;
    i128 r = 1;
    for (long long j = 1; j <= k; ++j) {
        i128 next;
        if (__builtin_mul_overflow(r, static_cast<i128>(n - k + j), &next)) return false;
        r = next / j;  // exact: r * (n-k+j) is divisible by j at this step
    }
    out = r;
    return true;
}

// Generalized binomial C(z, k) for integer z (possibly negative).
bool gen_binomial_exact(long long z, long long k, i128& out) {
    if (k < 0) {
        out = 0;
        return true;
    }
    if (z >= 0) return binomial_exact(z, k, out);
    // C(z, k) = (-1)^k C(k - z - 1, k) for negative z
    if (!binomial_exact(k - z - 1, k, out)) return false;
    if (k % 2 != 0) out = -out;
    return true;
}

bool ipow_exact(i128 base, int e, i128& out) {
    i128 r = 1;
    for (int i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) return false;
    }
    out = r;
    return true;
}

bool jacobi_exact(int n, long long alpha, long long beta, long long x, double& result) {
    const i128 lower = (x - 1) / 2;
    const i128 upper = (x + 1) / 2;
    i128 sum = 0;
    for (int s = 0; s <= n; ++s) {
        i128 c1, c2, p1, p2;
        if (!gen_binomial_exact(n + alpha, n - s, c1)) return false;
        if (c1 == 0) continue;
        if (!gen_binomial_exact(n + beta, s, c2)) return false;
        if (c2 == 0) continue;
        if (!ipow_exact(lower, s, p1) || !ipow_exact(upper, n - s, p2)) return false;
        i128 term;
        if (__builtin_mul_overflow(c1, c2, &term)) return false;
        if (__builtin_mul_overflow(term, p1, &term)) return false;
        if (__builtin_mul_overflow(term, p2, &term)) return false;
        if (__builtin_add_overflow(sum, term, &sum)) return false;
    }
    result = static_cast<double>(static_cast<long double>(sum));
    return true;
}

// log|C(z, k)| and its sign; sign 0 means the coefficient vanishes.
struct LogValue {
    long double log_abs = 0.0L;
    int sign = 1;
};

LogValue log_gen_binomial(long double z, int k) {
    LogValue v;
    for (int j = 0; j < k; ++j) {
        const long double f = z - j;
        if (f == 0.0L) return {0.0L, 0};
        if (f < 0) v.sign = -v.sign;
        v.log_abs += std::log(std::fabs(f));
    }
    v.log_abs -= std::lgamma(static_cast<long double>(k) + 1.0L);
    return v;
}

LogValue log_pow(long double base, int e) {
    if (e == 0) return {0.0L, 1};
    if (base == 0.0L) return {0.0L, 0};
    return {e * std::log(std::fabs(base)), (base < 0 && e % 2 != 0) ? -1 : 1};
}

double jacobi_logspace(int n, double alpha, double beta, double x) {
    const long double lower = (static_cast<long double>(x) - 1.0L) / 2.0L;
    const long double upper = (static_cast<long double>(x) + 1.0L) / 2.0L;
    long double sum = 0.0L;
    for (int s = 0; s <= n; ++s) {
        const LogValue c1 = log_gen_binomial(n + static_cast<long double>(alpha), n - s);
        const LogValue c2 = log_gen_binomial(n + static_cast<long double>(beta), s);
        const LogValue p1 = log_pow(lower, s);
        const LogValue p2 = log_pow(upper, n - s);
        const int sign = c1.sign * c2.sign * p1.sign * p2.sign;
        if (sign == 0) continue;
        sum += sign * std::exp(c1.log_abs + c2.log_abs + p1.log_abs + p2.log_abs);
    }
    return static_cast<double>(sum);
}

// Pochhammer-ratio series shared by the terminating hypergeometric functions.
// Term j is prod (a_i)_j / prod (b_i)_j * x^j / j!, built in log space.
double terminating_series(std::span<const double> upper, std::span<const double> lower, double x,
                          int terms) {
    long double sum = 0.0L;
    long double log_abs = 0.0L;
    int sign = 1;
    for (int j = 0; j < terms; ++j) {
        if (j > 0) {
            const int i = j - 1;
            for (double a : upper) {
                const long double f = static_cast<long double>(a) + i;
                if (f == 0.0L) return static_cast<double>(sum);
                if (f < 0) sign = -sign;
                log_abs += std::log(std::fabs(f));
            }
            for (double b : lower) {
                const long double f = static_cast<long double>(b) + i;
                if (f < 0) sign = -sign;
                log_abs -= std::log(std::fabs(f));
            }
            if (x == 0.0) break;
            if (x < 0) sign = -sign;
            log_abs += std::log(std::fabs(static_cast<long double>(x)));
            log_abs -= std::log(static_cast<long double>(j));
        }
        sum += sign * std::exp(log_abs);
    }
    return static_cast<double>(sum);
}

void check_lower_poles(std::span<const double> lower, int terms) {
    for (double b : lower) {
        if (is_integer(b) && b <= 0 && -b <= terms - 2) {
            throw ValidationError("hypergeometric lower parameter " + std::to_string(b) +
                                  " is a pole reached before the series terminates");
        }
    }
}

}  // namespace

double log_factorial(int n) {
    if (n < 0) throw ValidationError("log_factorial: n must be non-negative");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double jacobi_p(int n, double alpha, double beta, double x) {
    if (n < 0) throw ValidationError("jacobi_p: degree must be non-negative");
    if (!std::isfinite(x) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw ValidationError("jacobi_p: arguments must be finite");
    }
    if (n == 0) return 1.0;
    const bool integral = is_integer(alpha) && is_integer(beta) && is_integer(x) &&
                          std::fabs(x) < 1e15 && std::fabs(alpha) < 1e6 && std::fabs(beta) < 1e6;
    if (integral && static_cast<long long>(x) % 2 != 0) {
        double exact = 0.0;
        if (jacobi_exact(n, static_cast<long long>(alpha), static_cast<long long>(beta),
                         static_cast<long long>(x), exact)) {
            return exact;
        }
    }
    return jacobi_logspace(n, alpha, beta, x);
}

double erf(double x) {
    const double r = std::erf(std::fabs(x));
    return std::signbit(x) ? -r : r;
}

double erfcx(double x) {
    if (x < 5.0) return std::exp(x * x) * std::erfc(x);
    // Laplace continued fraction, evaluated backward:
    // erfc(x) e^{x^2} = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    long double t = x;
    for (int k = 60; k >= 1; --k) t = x + (k / 2.0L) / t;
    return static_cast<double>(1.0L / (static_cast<long double>(kSqrtPi) * t));
}

double hyp2f1_terminating(int n, double b, double c, double x) {
    if (n < 0) throw ValidationError("hyp2f1_terminating: n must be non-negative");
    const std::array<double, 2> upper{-static_cast<double>(n), b};
    const std::array<double, 1> lower{c};
    check_lower_poles(lower, n + 1);
    return terminating_series(upper, lower, x, n + 1);
}

double hyp_pfq_terminating(std::span<const double> upper, std::span<const double> lower,
                           double x) {
    int terms = -1;
    for (double a : upper) {
        if (is_integer(a) && a <= 0) {
            const int t = static_cast<int>(-a) + 1;
            terms = terms < 0 ? t : std::min(terms, t);
        }
    }
    if (terms < 0) {
        throw ValidationError("hyp_pfq_terminating: no non-positive integer upper parameter");
    }
    check_lower_poles(lower, terms);
    return terminating_series(upper, lower, x, terms);
}

double hyp4f3_terminating(const std::array<double, 4>& upper, const std::array<double, 3>& lower,
                          double x) {
    return hyp_pfq_terminating(upper, lower, x);
}

}  // namespace qbs::numerics
