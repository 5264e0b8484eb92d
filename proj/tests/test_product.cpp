#include <doctest.h>

#include <cmath>
#include <random>

#include "jspec/product.hpp"
#include "oracle.hpp"

using namespace jspec;

TEST_CASE("empty product is the identity") {
    const ScaledProduct p(3);
    CHECK(p.length() == 0);
    CHECK(p.matrix().isApprox(Matrix::Identity(3, 3)));
    const auto k = p.cartan();
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(k[i]) < 1e-15);
}

TEST_CASE("short products agree with explicit multiplication") {
    std::mt19937_64 rng(41);
    for (int d = 2; d <= 4; ++d) {
        std::vector<UnimodularMatrix> gens;
        for (int i = 0; i < 3; ++i) gens.push_back(UnimodularMatrix::normalize(oracle::random_sl(d, rng)));
        ScaledProduct right(d), left(d);
        Matrix explicit_right = Matrix::Identity(d, d), explicit_left = Matrix::Identity(d, d);
        for (int step = 0; step < 12; ++step) {
            const auto& g = gens[static_cast<std::size_t>(step % 3)];
            right.multiply_right(CompoundGenerator::from(g));
            left.multiply_left(CompoundGenerator::from(g));
            explicit_right = explicit_right * g.entries();
            explicit_left = g.entries() * explicit_left;
        }
        CHECK(right.length() == 12);
        CHECK((right.matrix() - explicit_right).norm() <= 1e-9 * explicit_right.norm());
        CHECK((left.matrix() - explicit_left).norm() <= 1e-9 * explicit_left.norm());
        for (int k = 1; k < d; ++k) {
            const Matrix w = exterior_power(explicit_right, k);
            const Matrix c = right.compound(k) * std::exp(right.log_factor(k));
            CHECK((w - c).norm() <= 1e-8 * w.norm());
        }
    }
}

TEST_CASE("cartan of a product matches singular values of P and its inverse") {
    // top coordinate from sigma_1(P), bottom from sigma_1(P^-1); the middle
    // one (d = 3) is what is left so the sum vanishes
    std::mt19937_64 rng(43);
    for (int t = 0; t < 20; ++t) {
        const auto g = UnimodularMatrix::normalize(oracle::random_sl(3, rng));
        const auto h = UnimodularMatrix::normalize(oracle::random_sl(3, rng));
        ScaledProduct p(3);
        Matrix m = Matrix::Identity(3, 3);
        for (int step = 0; step < 8; ++step) {
            const auto& x = step % 3 == 0 ? h : g;
            p.multiply_right(CompoundGenerator::from(x));
            m = m * x.entries();
        }
        Eigen::JacobiSVD<Matrix> svd(m), svd_inv(Matrix(m.inverse()));
        const double top = std::log(svd.singularValues()(0));
        const double bottom = -std::log(svd_inv.singularValues()(0));
        const auto k = p.cartan();
        // the explicit inverse carries a relative error of order
        // cond(P) * 1e-16, which is what bounds the agreement here
        CHECK(std::abs(k[0] - top) <= 1e-6);
        CHECK(std::abs(k[2] - bottom) <= 1e-6);
        CHECK(std::abs(k[1] + top + bottom) <= 1e-6);
    }
}

TEST_CASE("long products do not overflow") {
    Matrix d2(2, 2);
    d2 << 2, 0, 0, 0.5;
    const auto g = CompoundGenerator::from(UnimodularMatrix::normalize(d2));
    ScaledProduct p(2);
    for (int i = 0; i < 5000; ++i) p.multiply_right(g);
    const auto k = p.cartan();
    CHECK(k[0] == doctest::Approx(5000 * std::log(2.0)).epsilon(1e-12));
    CHECK(p.jordan()[0] == doctest::Approx(5000 * std::log(2.0)).epsilon(1e-12));
    for (int c = 1; c < 2; ++c) CHECK(std::isfinite(p.compound(c).norm()));
}

TEST_CASE("product of products") {
    std::mt19937_64 rng(47);
    const auto a = CompoundGenerator::from(UnimodularMatrix::normalize(oracle::random_sl(4, rng)));
    const auto b = CompoundGenerator::from(UnimodularMatrix::normalize(oracle::random_sl(4, rng)));
    ScaledProduct x(a), y(b), xy(a);
    x.multiply_right(b);
    y.multiply_right(a);
    x.multiply_right(y); // a b b a
    xy.multiply_right(b);
    xy.multiply_right(b);
    xy.multiply_right(a);
    CHECK(x.length() == 4);
    const auto k1 = x.cartan(), k2 = xy.cartan();
    for (std::size_t i = 0; i < 4; ++i) CHECK(k1[i] == doctest::Approx(k2[i]).epsilon(1e-10));
}

TEST_CASE("fibonacci products have the expected jordan data") {
    // A B = [[2,1],[1,1]] has spectral radius phi^2
    const auto a = CompoundGenerator::from(UnimodularMatrix::normalize(oracle::fib_a()));
    const auto b = CompoundGenerator::from(UnimodularMatrix::normalize(oracle::fib_b()));
    ScaledProduct p(a);
    p.multiply_right(b);
    CHECK(p.jordan()[0] == doctest::Approx(2 * std::log(oracle::kPhi)).epsilon(1e-12));
    ScaledProduct u(a);
    for (int i = 0; i < 9; ++i) u.multiply_right(a);
    CHECK(std::abs(u.jordan()[0]) < 1e-6);
}
