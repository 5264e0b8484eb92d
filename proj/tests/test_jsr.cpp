#include <doctest.h>

#include <cmath>
#include <random>

#include "jspec/jsr.hpp"
#include "oracle.hpp"

using namespace jspec;

namespace {

UnimodularMatrix um(const Matrix& m) { return UnimodularMatrix::normalize(m); }

std::vector<Matrix> fib_mats() { return {oracle::fib_a(), oracle::fib_b()}; }

double log_rho_of_word(const std::vector<Matrix>& mats, const Word& w) {
    Matrix p = Matrix::Identity(mats[0].rows(), mats[0].cols());
    for (auto letter : w) p = p * mats[letter];
    return std::log(eigenvalue_moduli(p)(0)) / static_cast<double>(w.size());
}

} // namespace

TEST_CASE("jsr examples") {
    Matrix d(2, 2);
    d << 2, 0, 0, 0.5;
    const auto b = jsr_bounds(std::vector<Matrix>{d}, 1, 0.005);
    CHECK(b.lower == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(b.upper == doctest::Approx(std::log(2.0)).epsilon(1e-9));

    const auto r = jsr_bounds(std::vector<Matrix>{oracle::rotation(0.9)}, 5, 0.005);
    CHECK(std::abs(r.lower) <= 1e-9);
    CHECK(std::abs(r.upper) <= 1e-9);
}

TEST_CASE("fibonacci pair bracket") {
    const auto mats = fib_mats();
    const double log_phi = std::log(oracle::kPhi);
    const auto b2 = jsr_bounds(mats, 2, 0.005);
    CHECK(b2.lower >= log_phi - 1e-12);
    // the witness A B = [[2,1],[1,1]], spectral radius (3 + sqrt5) / 2
    REQUIRE(b2.witness.size() == 2);
    const auto [mu, _] = oracle::quadratic_roots(3.0, 1.0);
    CHECK(mu == doctest::Approx((3 + std::sqrt(5.0)) / 2));
    CHECK(log_rho_of_word(mats, b2.witness) == doctest::Approx(std::log(mu) / 2).epsilon(1e-12));
    CHECK(b2.lower == doctest::Approx(std::log(mu) / 2).epsilon(1e-12));
    CHECK(b2.witness == Word{0, 1}); // lexicographically before 1.0

    const auto b16 = jsr_bounds(mats, 16, 0.005);
    CHECK(b16.upper - b16.lower <= 0.02);
    CHECK(b16.lower <= log_phi + 1e-12);
    CHECK(b16.upper >= log_phi - 1e-12);
}

TEST_CASE("brackets are valid and refine monotonically with depth") {
    std::mt19937_64 rng(83);
    for (int d : {2, 3}) {
        std::vector<Matrix> mats{oracle::random_sl(d, rng), oracle::random_sl(d, rng)};
        double lo = -INFINITY, hi = INFINITY;
        for (int depth = 1; depth <= 10; ++depth) {
            const auto b = jsr_bounds(mats, depth, 0.01);
            CHECK(b.lower <= b.upper + 1e-9);
            CHECK(b.lower >= lo - 1e-12);
            CHECK(b.upper <= hi + 1e-12);
            CHECK(log_rho_of_word(mats, b.witness) == doctest::Approx(b.lower).epsilon(1e-9));
            lo = b.lower;
            hi = b.upper;
        }
    }
}

TEST_CASE("scale equivariance") {
    std::mt19937_64 rng(89);
    std::vector<Matrix> mats{oracle::random_sl(3, rng), oracle::random_sl(3, rng), oracle::random_sl(3, rng)};
    const auto base = jsr_bounds(mats, 6, 0.01);
    for (double c : {3.0, -0.5}) {
        std::vector<Matrix> scaled;
        for (const auto& m : mats) scaled.push_back(c * m);
        const auto b = jsr_bounds(scaled, 6, 0.01);
        CHECK(b.lower == doctest::Approx(base.lower + std::log(std::abs(c))).epsilon(1e-9));
        CHECK(b.upper == doctest::Approx(base.upper + std::log(std::abs(c))).epsilon(1e-9));
    }
}

TEST_CASE("witness ties go to the smallest word") {
    Matrix d(2, 2);
    d << 2, 0, 0, 0.5;
    const auto b = jsr_bounds(std::vector<Matrix>{d, d}, 4, 0.0);
    CHECK(b.witness == Word{0});
}

TEST_CASE("jsr input validation") {
    CHECK_THROWS_AS(jsr_bounds(std::vector<Matrix>{}, 3), Error);
    CHECK_THROWS_AS(jsr_bounds(fib_mats(), 0), Error);
    CHECK_THROWS_AS(jsr_bounds(fib_mats(), 3, -1.0), Error);
    CHECK_THROWS_AS(jsr_bounds(std::vector<Matrix>{Matrix::Identity(2, 2), Matrix::Identity(3, 3)}, 3), Error);
}

TEST_CASE("zero products are handled") {
    Matrix n(2, 2);
    n << 0, 1, 0, 0;
    const auto b = jsr_bounds(std::vector<Matrix>{n}, 4, 0.0);
    CHECK(std::isinf(b.lower));
    CHECK(b.lower < 0);
    CHECK(b.lower <= b.upper);
}

TEST_CASE("berger wang examples") {
    Matrix d(2, 2);
    d << 2, 0, 0, 0.5;
    const MatrixSet diag({um(d)});
    const auto dirs = DirectionSet::make(2, 2, 0);
    const auto est = joint_spectrum_estimate(diag, 4, dirs).back();
    const auto r = berger_wang_check(diag, 1, 4, est);
    CHECK(r.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(r.lower == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(r.gap <= 1e-9);

    const MatrixSet fib({um(oracle::fib_a()), um(oracle::fib_b())});
    const auto fest = joint_spectrum_estimate(fib, 12, DirectionSet::make(2, 64, 0)).back();
    const auto f = berger_wang_check(fib, 1, 14, fest);
    CHECK(f.gap <= 0.03);
    CHECK(f.lower <= std::log(oracle::kPhi) + 1e-12);
    CHECK(f.upper >= std::log(oracle::kPhi) - 1e-12);

    CHECK_THROWS_AS(berger_wang_check(fib, 0, 4, fest), Error);
    CHECK_THROWS_AS(berger_wang_check(fib, 2, 4, fest), Error);
}

TEST_CASE("jordan data never exceeds the joint spectrum support") {
    std::mt19937_64 rng(97);
    const MatrixSet set({um(oracle::random_sl(3, rng)), um(oracle::random_sl(3, rng))});
    const int n = 8;
    const auto est = joint_spectrum_estimate(set, n, DirectionSet::make(3, 128, 0)).back();
    for (int k = 1; k <= 2; ++k) {
        const auto r = berger_wang_check(set, k, n, est);
        double best = -INFINITY;
        for (int len = 1; len <= n; ++len) {
            enumerate_products(set, len, {}, [&](auto, const ScaledProduct& p) {
                best = std::max(best, p.log_spectral_radius(k) / len);
            });
        }
        CHECK(best <= r.lhs + 1e-6);
        CHECK(r.lower <= best + 1e-9); // pruned branches are never explored
    }
}
