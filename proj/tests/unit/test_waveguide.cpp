#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "qbs/errors.hpp"
#include "qbs/waveguide.hpp"

using namespace qbs;

namespace {

// Composite Simpson over eps ~ N(mean, sd^2), truncated at 12 sd.
std::vector<double> simpson_average(const std::function<std::vector<double>(double)>& f,
                                    double mean, double sd, std::size_t dim, int n = 40000) {
    std::vector<double> acc(dim, 0.0);
    const double lo = mean - 12 * sd, h = 24 * sd / n;
    for (int i = 0; i <= n; ++i) {
        const double e = lo + i * h;
        const double z = (e - mean) / sd;
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        const double dens = std::exp(-0.5 * z * z) / (sd * std::sqrt(2 * std::numbers::pi));
        const auto v = f(e);
        for (std::size_t k = 0; k < dim; ++k) acc[k] += w * dens * v[k];
    }
    for (double& a : acc) a *= h / 3;
    return acc;
}

}  // namespace

TEST_CASE("reflectance agrees with the coupled-mode transfer matrix") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uk(0.1, 3.0), ud(-5.0, 5.0), uz(0.0, 20.0);
    for (int i = 0; i < 500; ++i) {
        const double kappa = uk(rng), delta = ud(rng), z = uz(rng);
        const auto u = coupled_mode_transfer(kappa, delta, z);
        CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
        CHECK(std::norm(u(0, 1)) ==
              doctest::Approx(reflectance_r(delta / kappa, 2 * kappa * z)).epsilon(1e-12).scale(1.0));
    }
    CHECK((coupled_mode_transfer(1.0, 0.3, 0.0) - Eigen::Matrix2cd::Identity()).norm() == 0.0);
    CHECK((coupled_mode_transfer(0.0, 0.0, 4.0) - Eigen::Matrix2cd::Identity()).norm() == 0.0);
}

TEST_CASE("reflectance at zero detuning is sin^2(x/2)") {
    for (double x = 0; x < 30; x += 0.7) {
        CHECK(reflectance_eps(0.0, x).r == doctest::Approx(std::pow(std::sin(x / 2), 2)).epsilon(1e-14).scale(1.0));
    }
    const auto full = reflectance_eps(0.0, std::numbers::pi);
    CHECK(full.degenerate_phase);
    CHECK(full.phi == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("waveguide phase obeys cos(phi) = -eps sqrt(R/T)") {
    for (double eps : {-2.0, -0.4, 0.3, 1.7}) {
        for (double x : {1.0, 4.0, 9.5}) {
            const auto r = reflectance_eps(eps, x);
            CHECK_FALSE(r.degenerate_phase);
            CHECK(std::cos(r.phi) == doctest::Approx(-eps * std::sqrt(r.r / (1 - r.r))).epsilon(1e-12).scale(1.0));
            CHECK(r.r <= 1.0 / (1.0 + eps * eps) + 1e-15);
        }
    }
    const WaveguideParams wg{2.0, 1.5};
    CHECK(reflectance(10.0, 11.0, wg).r == doctest::Approx(reflectance_eps(0.5, 3.0).r));
    CHECK_THROWS_AS(reflectance(-1.0, 1.0, wg), ValidationError);
}

TEST_CASE("omega_from_medium uses the plasma frequency") {
    // omega_p = 56.4146 sqrt(n) rad/s for n in m^-3
    const double n = 2.5e26, w0 = 2.35e15;
    const MediumParams m{n * 1e-18, 1e-18, 0.8, w0};
    const double wp = 56.41460 * std::sqrt(n);
    CHECK(omega_from_medium(m) == doctest::Approx(0.8 * wp * wp / w0).epsilon(1e-6));
    CHECK_THROWS_AS(omega_from_medium({0.0, 1.0, 1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(omega_from_medium({1.0, 1.0, 1.5, 1.0}), ValidationError);
}

TEST_CASE("detuning distribution from spectral profiles") {
    const auto d = DetuningDistribution::from_profiles({100.0, 3.0}, {104.0, 4.0}, 2.0);
    CHECK(d.mean == doctest::Approx(2.0));
    CHECK(d.stddev == doctest::Approx(2.5));
    CHECK(DetuningDistribution::identical(0.5).stddev == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(DetuningDistribution::identical(-1.0), ValidationError);
    CHECK_THROWS_AS(DetuningDistribution::from_profiles({100.0, 0.0}, {100.0, 1.0}, 1.0), ValidationError);
}

TEST_CASE("nearly monochromatic photons reproduce the constant splitter") {
    const double x = 2.5 * std::numbers::pi;
    for (int s1 = 0; s1 <= 6; ++s1) {
        for (int s2 = 0; s1 + s2 <= 6; ++s2) {
            const auto m = averaged_schmidt_modes({s1, s2}, x, DetuningDistribution::identical(1e-4));
            const auto ref = output_distribution({s1, s2}, BsParams{0.5}).probs;
            for (std::size_t k = 0; k < ref.size(); ++k) CHECK(std::fabs(m.spectrum.lambdas[k] - ref[k]) < 1e-6);
        }
    }
}

TEST_CASE("averaged modes agree with direct Simpson integration") {
    const std::vector<std::pair<FockPair, double>> cases = {{{1, 1}, 7.85}, {{2, 3}, 12.0}, {{0, 2}, 4.0}};
    for (const auto& [pair, x] : cases) {
        for (const auto& d : {DetuningDistribution{0.0, 0.47}, DetuningDistribution{0.8, 1.3},
                              DetuningDistribution{-0.2, 3.0}}) {
            const auto m = averaged_schmidt_modes(pair, x, d);
            const auto ref = simpson_average(
                [&](double e) { return output_distribution(pair, BsParams{reflectance_r(e, x)}).probs; },
                d.mean, d.stddev, pair.total() + 1);
            for (std::size_t k = 0; k < ref.size(); ++k) {
                CHECK(m.spectrum.lambdas[k] == doctest::Approx(ref[k]).epsilon(1e-8).scale(1.0));
            }
        }
    }
}

TEST_CASE("physical-unit overload") {
    const WaveguideParams wg{1e12, 7.0e-12};
    const auto s = averaged_schmidt_modes({1, 1}, wg, {2e15, 3e11}, {2e15, 3e11});
    const auto ref = averaged_schmidt_modes({1, 1}, 7.0, DetuningDistribution::identical(0.3));
    CHECK(s.lambdas[1] == doctest::Approx(ref.spectrum.lambdas[1]).epsilon(1e-12));
}

TEST_CASE("asymptotic |1,1> spectrum matches the closed form") {
    // For |1,1>: lambda_1 = (1 - 2R)^2 and the phase average of sin^4 is 3/8,
    // so P11 = E[1 - 2g + 3g^2/2] with g = 1 / (1 + eps^2).
    for (double a : {0.02, 0.05, 0.2, 0.44467, 1.0, 3.0, 10.0}) {
        const double sd = std::numbers::sqrt2 * a;
        const double ref = simpson_average(
            [](double e) {
                const double g = 1.0 / (1.0 + e * e);
                return std::vector<double>{1 - 2 * g + 1.5 * g * g};
            },
            0.0, sd, 1)[0];
        CHECK(asymptotic_j(a) == doctest::Approx(ref).epsilon(1e-9));
        const auto m = averaged_schmidt_modes_asymptotic({1, 1}, DetuningDistribution::identical(a));
        CHECK(m.spectrum.lambdas[1] == doctest::Approx(ref).epsilon(1e-9));
        const auto e = entropy_asymptotic_11(a);
        CHECK(e.s_n == doctest::Approx(m.spectrum.s_n).epsilon(1e-8));
        const auto c = coincidence_probs_asymptotic(a);
        CHECK(c.p11 + 2 * c.p20 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("asymptotic J is continuous across the series switch with the right limits") {
    CHECK(std::fabs(asymptotic_j(0.05 - 1e-12) - asymptotic_j(0.05 + 1e-12)) < 1e-11);
    CHECK(asymptotic_j(1e-6) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(asymptotic_j(1e4) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(entropy_from_j(1.0 / 3.0) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(entropy_from_j(1.0) == 0.0);
    CHECK_THROWS_AS(asymptotic_j(0.0), ValidationError);
}

TEST_CASE("asymptote is the long-time average of the finite-time spectrum") {
    // Average over a window of Omega t_BS much longer than the beat period.
    const FockPair pair{0, 2};
    const auto eps = DetuningDistribution::identical(0.6);
    const auto inf = averaged_schmidt_modes_asymptotic(pair, eps);
    std::vector<double> acc(3, 0.0);
    const int n = 800;
    for (int i = 0; i < n; ++i) {
        const auto m = averaged_schmidt_modes(pair, 400.0 + 0.37 * i, eps);
        for (int k = 0; k < 3; ++k) acc[k] += m.spectrum.lambdas[k] / n;
    }
    for (int k = 0; k < 3; ++k) CHECK(acc[k] == doctest::Approx(inf.spectrum.lambdas[k]).epsilon(5e-3));
}
