#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "qbs/errors.hpp"
#include "qbs/numerics.hpp"

namespace qbs::numerics {

namespace {

// Starting points are the eigenvalues of the Jacobi matrix (Golub-Welsch);
// Newton on the orthonormal recurrence then polishes each node and gives the
// weight 2 / p'^2 without forming tiny eigenvector components.
QuadratureRule build_gauss_hermite(int n) {
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int j = 1; j < n; ++j) sub[j - 1] = std::sqrt(j / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& guess = es.eigenvalues();  // ascending

    std::vector<double> x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = guess[n - 1 - i];
        double pp = 0.0;
        double p2 = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4;
            p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= 1e-15 * std::max(1.0, std::fabs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if (n % 2 == 1) x[half - 1] = 0.0;

    QuadratureRule rule;
    rule.order = n;
    // Stored ascending; the recurrence produced descending nodes.
    for (int i = n - 1; i >= 0; --i) {
        if (std::isfinite(w[i]) && w[i] >= std::numeric_limits<double>::min()) {
            rule.nodes.push_back(x[i]);
            rule.weights.push_back(w[i]);
        }
    }
    return rule;
}

QuadratureRule build_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= 1e-16) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

template <class Builder>
std::shared_ptr<const QuadratureRule> cached(std::map<int, std::shared_ptr<const QuadratureRule>>& cache,
                                             std::mutex& mtx, int order, Builder build) {
    std::lock_guard lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    auto rule = std::make_shared<const QuadratureRule>(build(order));
    cache.emplace(order, rule);
    return rule;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

void hermite_pass(const VectorIntegrand& f, const QuadratureRule& rule, std::vector<double>& acc,
                  std::vector<double>& scratch) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        f(rule.nodes[i], scratch);
        for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += rule.weights[i] * scratch[d];
    }
    for (double& v : acc) v /= kSqrtPi;
}

void panel_pass(const VectorIntegrand& f, double half_width, int panels, std::vector<double>& acc,
                std::vector<double>& scratch) {
    const auto gl = gauss_legendre_rule(20);
    std::fill(acc.begin(), acc.end(), 0.0);
    const double h = 2.0 * half_width / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = -half_width + (p + 0.5) * h;
        for (std::size_t i = 0; i < gl->nodes.size(); ++i) {
            const double y = mid + 0.5 * h * gl->nodes[i];
            const double wt = 0.5 * h * gl->weights[i] * std::exp(-y * y);
            f(y, scratch);
            for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += wt * scratch[d];
        }
    }
    for (double& v : acc) v /= kSqrtPi;
}

}  // namespace

std::shared_ptr<const QuadratureRule> gauss_hermite_rule(int order) {
    if (order < 2 || order > 512) {
        throw ValidationError("gauss_hermite: order " + std::to_string(order) +
                              " outside [2, 512]");
    }
    static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
    static std::mutex mtx;
    return cached(cache, mtx, order, build_gauss_hermite);
}

QuadratureRule gauss_hermite(int order) { return *gauss_hermite_rule(order); }

std::shared_ptr<const QuadratureRule> gauss_legendre_rule(int order) {
    if (order < 1 || order > 1024) {
        throw ValidationError("gauss_legendre: order " + std::to_string(order) +
                              " outside [1, 1024]");
    }
    static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
    static std::mutex mtx;
    return cached(cache, mtx, order, build_gauss_legendre);
}

QuadratureOptions quadrature_options_from_env() {
    QuadratureOptions opts;
    if (const char* env = std::getenv("QBS_QUAD_ORDER"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 2 || v > 512) {
            throw ValidationError(std::string("QBS_QUAD_ORDER must be an integer in [2, 512], got '") +
                                  env + "'");
        }
        opts.initial_order = static_cast<int>(v);
    }
    return opts;
}

Expectation gaussian_expectation(const VectorIntegrand& f, std::size_t dim,
                                 const QuadratureOptions& opts) {
    std::vector<double> prev(dim), cur(dim), scratch(dim);
    int order = std::clamp(opts.initial_order, 2, opts.max_order);
    hermite_pass(f, *gauss_hermite_rule(order), prev, scratch);
    while (order < opts.max_order) {
        const int next = std::min(2 * order, opts.max_order);
        hermite_pass(f, *gauss_hermite_rule(next), cur, scratch);
        order = next;
        if (max_abs_diff(prev, cur) <= opts.tolerance * std::max(1.0, max_abs(cur))) {
            return {cur, order, 0};
        }
        std::swap(prev, cur);
    }

    int panels = opts.min_panels;
    panel_pass(f, opts.half_width, panels, prev, scratch);
    while (panels < opts.max_panels) {
        panels *= 2;
        panel_pass(f, opts.half_width, panels, cur, scratch);
        if (max_abs_diff(prev, cur) <= opts.tolerance * std::max(1.0, max_abs(cur))) {
            return {cur, 0, panels};
        }
        std::swap(prev, cur);
    }
    throw ConvergenceError("gaussian_expectation: no convergence with Hermite order " +
                           std::to_string(opts.max_order) + " or " +
                           std::to_string(opts.max_panels) + " Legendre panels");
}

double gaussian_expectation(const std::function<double(double)>& f,
                            const QuadratureOptions& opts) {
    const VectorIntegrand vf = [&f](double y, std::span<double> out) { out[0] = f(y); };
    return gaussian_expectation(vf, 1, opts).values[0];
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    // Compare the interior estimate with the bracket ends so boundary maxima are kept.
    const double mid = 0.5 * (a + b);
    double best = mid, fbest = f(mid);
    for (double x : {lo, hi}) {
        if (std::fabs(x - mid) <= 2.0 * tol) {
            const double fx = f(x);
            if (fx > fbest) {
                best = x;
                fbest = fx;
            }
        }
    }
    return best;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0) == (fhi < 0)) throw ValidationError("bisect_root: interval does not bracket a root");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qbs::numerics
