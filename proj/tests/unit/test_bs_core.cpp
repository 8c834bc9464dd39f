#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qbs/bs_core.hpp"
#include "qbs/errors.hpp"

using namespace qbs;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return k;
}

// Output state built from explicit creation-operator matrices on the
// two-mode Fock space truncated at N photons per mode:
// |out> = (b1^+)^{s1} (b2^+)^{s2} |0,0> / sqrt(s1! s2!),
// b1^+ = sqrt(T) a1^+ + e^{-i phi} sqrt(R) a2^+, b2^+ = -e^{i phi} sqrt(R) a1^+ + sqrt(T) a2^+.
std::vector<double> operator_oracle(int s1, int s2, double r, double phi) {
    const int n = s1 + s2;
    const int d = n + 1;
    Eigen::MatrixXcd ad = Eigen::MatrixXcd::Zero(d, d);
    for (int m = 0; m < n; ++m) ad(m + 1, m) = std::sqrt(double(m + 1));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd a1 = kron(ad, id);
    const Eigen::MatrixXcd a2 = kron(id, ad);
    const double t = 1.0 - r;
    const cd e = std::polar(1.0, phi);
    const Eigen::MatrixXcd b1 = std::sqrt(t) * a1 + std::conj(e) * std::sqrt(r) * a2;
    const Eigen::MatrixXcd b2 = -e * std::sqrt(r) * a1 + std::sqrt(t) * a2;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
    v(0) = 1.0;
    double norm = 1.0;
    for (int i = 0; i < s2; ++i) {
        v = b2 * v;
        norm *= i + 1;
    }
    for (int i = 0; i < s1; ++i) {
        v = b1 * v;
        norm *= i + 1;
    }
    std::vector<double> probs(d);
    for (int k = 0; k <= n; ++k) probs[k] = std::norm(v(k * d + (n - k))) / norm;
    return probs;
}

}  // namespace

TEST_CASE("single photon splits as R and T") {
    for (double r : {0.0, 0.1, 0.5, 0.93, 1.0}) {
        const auto d = output_distribution({1, 0}, BsParams{r});
        REQUIRE(d.probs.size() == 2);
        CHECK(d.probs[0] == doctest::Approx(r).epsilon(1e-14).scale(1.0));
        CHECK(d.probs[1] == doctest::Approx(1 - r).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("HOM dip for |1,1> on a balanced splitter") {
    const auto d = output_distribution({1, 1}, BsParams{0.5});
    CHECK(std::fabs(d.probs[0] - 0.5) < 1e-12);
    CHECK(std::fabs(d.probs[1]) < 1e-12);
    CHECK(std::fabs(d.probs[2] - 0.5) < 1e-12);
}

TEST_CASE("closed form agrees with the operator oracle") {
    for (int s1 = 0; s1 <= 5; ++s1) {
        for (int s2 = 0; s2 + s1 <= 8; ++s2) {
            for (double r : {0.05, 0.3, 0.5, 0.77}) {
                for (double phi : {0.1, 1.2, std::numbers::pi / 2}) {
                    const auto ref = operator_oracle(s1, s2, r, phi);
                    const auto got = output_distribution({s1, s2}, BsParams{r, phi}).probs;
                    const auto bf = brute_force_distribution({s1, s2}, BsParams{r, phi}).probs;
                    for (std::size_t k = 0; k < ref.size(); ++k) {
                        CHECK(std::fabs(got[k] - ref[k]) < 1e-11);
                        CHECK(std::fabs(bf[k] - ref[k]) < 1e-11);
                    }
                }
            }
        }
    }
}

TEST_CASE("amplitude_c probabilities do not depend on phi") {
    const FockPair pair{3, 2};
    for (double r : {0.2, 0.6}) {
        for (int k = 0; k <= 5; ++k) {
            const double ref = std::norm(amplitude_c(k, 5 - k, pair, {r, std::numbers::pi / 2}));
            for (double phi : {0.05, 0.7, 1.3}) {
                CHECK(std::norm(amplitude_c(k, 5 - k, pair, {r, phi})) ==
                      doctest::Approx(ref).epsilon(1e-10).scale(1.0));
            }
        }
    }
    CHECK_THROWS_AS(amplitude_c(0, 5, pair, {0.5, 0.0}), ValidationError);
    CHECK_THROWS_AS(amplitude_c(0, 4, pair, {0.5, 1.0}), ValidationError);
}

TEST_CASE("amplitude_c stays accurate where the Jacobi sum cancels") {
    // small R and small phi push mu far from 1
    for (const FockPair pair : {FockPair{10, 10}, FockPair{17, 13}, FockPair{0, 24}}) {
        for (double r : {1e-3, 0.05, 0.97}) {
            const auto ref = brute_force_distribution(pair, BsParams{r}).probs;
            for (double phi : {0.01, 0.3}) {
                for (int k = 0; k <= pair.total(); ++k) {
                    CHECK(std::fabs(std::norm(amplitude_c(k, pair.total() - k, pair, {r, phi})) - ref[k]) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("FockEvolver matches output_distribution and handles the endpoints") {
    const FockPair pair{4, 3};
    const FockEvolver ev(pair);
    for (double r : {0.01, 0.37, 0.5, 0.99}) {
        const auto a = ev.probabilities(r);
        const auto b = output_distribution(pair, BsParams{r}).probs;
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12).scale(1.0));
    }
    const auto p0 = ev.probabilities(0.0);
    const auto p1 = ev.probabilities(1.0);
    for (int k = 0; k <= 7; ++k) {
        CHECK(p0[k] == (k == 4 ? 1.0 : 0.0));
        CHECK(p1[k] == (k == 3 ? 1.0 : 0.0));
    }
    std::vector<double> out(8);
    ev.probabilities(0.25, out);
    CHECK(out[2] == doctest::Approx(ev.probabilities(0.25)[2]));
}

TEST_CASE("large photon numbers stay normalized") {
    const FockEvolver ev({20, 20});
    for (double r : {0.1, 0.5, 0.8}) {
        double s = 0;
        for (double p : ev.probabilities(r)) {
            CHECK(p >= -1e-15);
            s += p;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
    // HOM suppression of odd k for |20,20> at R = 1/2
    const auto h = ev.probabilities(0.5);
    for (int k = 1; k <= 40; k += 2) CHECK(std::fabs(h[k]) < 1e-12);
}

TEST_CASE("bs_matrix is unitary") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1), ph(0, 2 * std::numbers::pi);
    for (int i = 0; i < 200; ++i) {
        const auto m = bs_matrix({u(rng), ph(rng)});
        CHECK((m.adjoint() * m - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
    }
}

TEST_CASE("mean photon numbers follow the distribution") {
    for (int s : {1, 3, 7}) {
        for (double r : {0.0, 0.3, 1.0}) {
            const auto m = mean_photon_numbers(s, r);
            const auto d = output_distribution({s, 0}, BsParams{r});
            CHECK(m.port1 == doctest::Approx(d.mean_port1()).epsilon(1e-12).scale(1.0));
            CHECK(m.port1 + m.port2 == doctest::Approx(s));
        }
    }
}

TEST_CASE("Holland-Burnett state keeps only even photon numbers") {
    for (int s : {2, 4, 6}) {
        const auto amps = holland_burnett_state(s, std::numbers::pi / 2);
        const auto d = output_distribution({s, s}, BsParams{0.5}).probs;
        REQUIRE(amps.size() == std::size_t(s + 1));
        for (int n = 0; n <= s; ++n) CHECK(std::norm(amps[n]) == doctest::Approx(d[2 * n]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(holland_burnett_state(3, 0.0), ValidationError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(FockPair({-1, 0}).validate(), ValidationError);
    CHECK_THROWS_AS(FockPair({30, 11}).validate(), ValidationError);
    CHECK_NOTHROW(FockPair({30, 10}).validate());
    CHECK_THROWS_AS(BsParams({1.2}).validate(), ValidationError);
    CHECK_THROWS_AS(BsParams({-0.1}).validate(), ValidationError);
    CHECK_THROWS_AS(output_distribution({41, 0}, BsParams{0.5}), ValidationError);
    CHECK_THROWS_AS(FockEvolver({1, 1}).probabilities(1.5), ValidationError);
}
