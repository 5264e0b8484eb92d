#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "jspec/linalg.hpp"
#include "jspec/product.hpp"
#include "oracle.hpp"

using namespace jspec;

namespace {

UnimodularMatrix um(const Matrix& m) { return UnimodularMatrix::normalize(m); }

Matrix diag(std::initializer_list<double> v) {
    Vector d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) d(i++) = x;
    return d.asDiagonal();
}

double partial(const ChamberVector& v, int k) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += v[static_cast<std::size_t>(i)];
    return s;
}

void check_chamber(const ChamberVector& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        s += v[i];
        if (i + 1 < v.dim()) CHECK(v[i] >= v[i + 1] - 1e-12);
    }
    CHECK(std::abs(s) <= 1e-9);
}

} // namespace

TEST_CASE("normalize_det examples") {
    const auto id = um(Matrix::Identity(2, 2));
    CHECK(id.entries().isApprox(Matrix::Identity(2, 2)));
    CHECK(id.log_scale() == 0.0);

    const auto d = um(diag({4, 1}));
    CHECK(d.entries()(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d.entries()(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.log_scale() == doctest::Approx(2 * std::log(2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(um(Matrix::Zero(2, 2)), Error);
    try {
        um(Matrix::Zero(2, 2));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularInput);
    }
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(um(bad), Error);
}

TEST_CASE("negative determinant is accepted and flagged") {
    const auto g = um(diag({-3, 1}));
    CHECK(g.orientation_reversing());
    CHECK(std::abs(std::abs(g.entries().determinant()) - 1.0) <= 1e-9);
    const auto k = cartan_projection(g);
    CHECK(k[0] == doctest::Approx(std::log(3.0) / 2).epsilon(1e-12));
}

TEST_CASE("normalized determinant stays unimodular on random input") {
    std::mt19937_64 rng(11);
    for (int d = 2; d <= kMaxDim; ++d) {
        for (int t = 0; t < 20; ++t) {
            Matrix m = oracle::gaussian(d, rng) * 7.5;
            const auto g = um(m);
            CHECK(std::abs(std::abs(g.entries().determinant()) - 1.0) <= 1e-9);
            CHECK(g.log_scale() == doctest::Approx(std::log(std::abs(m.determinant()))).epsilon(1e-10));
        }
    }
}

TEST_CASE("cartan_projection examples") {
    const auto k = cartan_projection(um(diag({2, 0.5})));
    CHECK(k[0] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(k[1] == doctest::Approx(-std::log(2.0)).epsilon(1e-14));

    for (double a : {0.3, 1.0, 2.5}) {
        const auto r = cartan_projection(um(oracle::rotation(a)));
        CHECK(std::abs(r[0]) < 1e-14);
        CHECK(std::abs(r[1]) < 1e-14);
    }

    // top singular value of [[1,1],[0,1]] from the quadratic formula
    const auto [s1, s2] = oracle::singular_values_2x2(oracle::fib_a());
    const auto u = cartan_projection(um(oracle::fib_a()));
    CHECK(u[0] == doctest::Approx(std::log(s1)).epsilon(1e-12));
    CHECK(u[1] == doctest::Approx(std::log(s2)).epsilon(1e-12));
    CHECK(u[0] == doctest::Approx(0.4812118250596).epsilon(1e-12));
}

TEST_CASE("jordan_projection examples") {
    const auto u = jordan_projection(um(oracle::fib_a()));
    CHECK(std::abs(u[0]) < 1e-12);
    CHECK(std::abs(u[1]) < 1e-12);

    const auto d = jordan_projection(um(diag({3, 1.0 / 3})));
    CHECK(d[0] == doctest::Approx(std::log(3.0)).epsilon(1e-14));

    Matrix m(2, 2);
    m << 2, 1, 1, 1;
    const auto [mu1, mu2] = oracle::quadratic_roots(3.0, 1.0);
    const auto j = jordan_projection(um(m));
    CHECK(j[0] == doctest::Approx(std::log(mu1)).epsilon(1e-12));
    CHECK(j[1] == doctest::Approx(std::log(mu2)).epsilon(1e-12));
    CHECK(j[0] == doctest::Approx(0.9624236501192).epsilon(1e-12));
}

TEST_CASE("jordan projection of a rotation-scaling block") {
    // complex pair of modulus 2 next to a real eigenvalue 1/4
    Matrix m = Matrix::Zero(3, 3);
    m.topLeftCorner(2, 2) = 2.0 * oracle::rotation(0.7);
    m(2, 2) = 0.25;
    const auto j = jordan_projection(um(m));
    CHECK(j[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(j[1] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(j[2] == doctest::Approx(std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("exterior_power examples") {
    std::mt19937_64 rng(3);
    const auto g = um(oracle::random_sl(3, rng));
    CHECK(exterior_power(g, 1).isApprox(g.entries(), 1e-15));
    const Matrix top = exterior_power(g, 3);
    REQUIRE(top.rows() == 1);
    CHECK(std::abs(std::abs(top(0, 0)) - 1.0) <= 1e-12);

    const Matrix w = exterior_power(diag({2, 3, 5}), 2);
    CHECK(w.isApprox(diag({6, 10, 15}), 1e-15));

    CHECK_THROWS_AS(exterior_power(g, 0), Error);
    CHECK_THROWS_AS(exterior_power(g, 4), Error);
}

TEST_CASE("exterior_power entries are Leibniz minors") {
    std::mt19937_64 rng(5);
    const Matrix m = oracle::gaussian(5, rng);
    for (int k = 1; k <= 5; ++k) {
        const auto sets = index_subsets(5, k);
        const Matrix w = exterior_power(m, k);
        REQUIRE(static_cast<std::size_t>(w.rows()) == sets.size());
        for (std::size_t a = 0; a < sets.size(); ++a) {
            for (std::size_t b = 0; b < sets.size(); ++b) {
                Matrix sub(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) sub(i, j) = m(sets[a][static_cast<std::size_t>(i)], sets[b][static_cast<std::size_t>(j)]);
                CHECK(w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) ==
                      doctest::Approx(oracle::leibniz_det(sub)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("index subsets are lexicographic") {
    const auto s = index_subsets(4, 2);
    const std::vector<std::vector<int>> expect{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    CHECK(s == expect);
}

TEST_CASE("exterior powers are multiplicative") {
    std::mt19937_64 rng(17);
    for (int d = 2; d <= kMaxDim; ++d) {
        const Matrix g = oracle::random_sl(d, rng);
        const Matrix h = oracle::random_sl(d, rng);
        for (int k = 1; k <= d; ++k) {
            const Matrix lhs = exterior_power(Matrix(g * h), k);
            const Matrix rhs = exterior_power(g, k) * exterior_power(h, k);
            CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());
        }
    }
}

TEST_CASE("proximality examples") {
    const auto rep = proximality_report(um(diag({10, 0.1})), 1.0, 0.01);
    REQUIRE(rep.per_rep.size() == 1);
    const auto& p = rep.per_rep[0];
    CHECK(p.sv_ratio == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(p.eigen_gap == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(p.top_evec_distance == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.eps_proximal);
    CHECK(p.r_eps_proximal);
    CHECK(rep.loxodromic);
    CHECK_FALSE(proximality_report(um(diag({10, 0.1})), 1.0, 0.009).loxodromic);

    const auto rot = proximality_report(um(oracle::rotation(0.4)), 0.01, 0.99);
    CHECK(rot.per_rep[0].eigen_gap == doctest::Approx(1.0));
    CHECK_FALSE(rot.per_rep[0].eps_proximal);
    CHECK_FALSE(rot.loxodromic);

    const auto uni = proximality_report(um(oracle::fib_a()), 0.01, 0.99);
    CHECK(uni.per_rep[0].degenerate_spectrum);
    CHECK_FALSE(uni.loxodromic);

    CHECK_THROWS_AS(proximality_report(um(diag({2, 0.5})), 0.5, 0.0), Error);
    CHECK_THROWS_AS(proximality_report(um(diag({2, 0.5})), 1.5, 0.1), Error);
    CHECK_THROWS_AS(proximality_report(um(diag({2, 0.5})), 0.0, 0.1), Error);
}

TEST_CASE("top eigenvector distance matches the 2x2 eigenvector angle") {
    // eigenvectors of [[a,b],[c,e]] are (b, mu - a); the sine of the angle
    // between the two eigenlines is |det[v1 v2]| / (|v1| |v2|)
    std::mt19937_64 rng(23);
    int tested = 0;
    while (tested < 50) {
        const Matrix m = oracle::random_sl(2, rng);
        const double t = m.trace();
        if (t * t <= 4.0 + 1e-3) continue; // need real distinct eigenvalues
        const auto [mu1, mu2] = oracle::quadratic_roots(t, m.determinant());
        const double big = std::abs(mu1) >= std::abs(mu2) ? mu1 : mu2;
        const double small = big == mu1 ? mu2 : mu1;
        const Eigen::Vector2d v1(m(0, 1), big - m(0, 0));
        const Eigen::Vector2d v2(m(0, 1), small - m(0, 0));
        const double sine = std::abs(v1.x() * v2.y() - v1.y() * v2.x()) / (v1.norm() * v2.norm());
        const auto rep = proximality_report(um(m), 0.01, 0.99);
        CHECK(rep.per_rep[0].top_evec_distance == doctest::Approx(sine).epsilon(1e-8));
        CHECK(rep.per_rep[0].eigen_gap == doctest::Approx(std::abs(small / big)).epsilon(1e-10));
        ++tested;
    }
}

TEST_CASE("proximality report invariants on random elements") {
    std::mt19937_64 rng(29);
    for (int d = 2; d <= 5; ++d) {
        for (int t = 0; t < 40; ++t) {
            const auto g = um(oracle::random_sl(d, rng));
            const auto rep = proximality_report(g, 0.1, 0.5);
            REQUIRE(rep.per_rep.size() == static_cast<std::size_t>(d - 1));
            bool all = true;
            for (const auto& p : rep.per_rep) {
                CHECK(p.top_evec_distance >= 0.0);
                CHECK(p.top_evec_distance <= 1.0 + 1e-12);
                if (p.eps_proximal) CHECK(p.eigen_gap < 1.0);
                if (p.r_eps_proximal) CHECK(p.eps_proximal);
                CHECK(p.eps_proximal == (!p.degenerate_spectrum && p.sv_ratio <= 0.5));
                all = all && p.r_eps_proximal;
            }
            CHECK(rep.loxodromic == all);
        }
    }
}

TEST_CASE("chamber vector validation") {
    CHECK_NOTHROW(ChamberVector({1.0, 0.0, -1.0}));
    CHECK_THROWS_AS(ChamberVector({1.0, 0.5}), Error);
    CHECK_THROWS_AS(ChamberVector({-1.0, 1.0}), Error);
    const auto p = ChamberVector::project({-1.0, 3.0, 1.0});
    CHECK(p[0] == doctest::Approx(2.0));
    CHECK(p[2] == doctest::Approx(-2.0));
}

TEST_CASE("projection identities on random elements") {
    std::mt19937_64 rng(31);
    for (int d = 2; d <= kMaxDim; ++d) {
        for (int t = 0; t < 30; ++t) {
            const auto g = um(oracle::random_sl(d, rng));
            const auto h = um(oracle::random_sl(d, rng));
            const auto kg = cartan_projection(g);
            check_chamber(kg);
            check_chamber(jordan_projection(g));

            // inverse reverses and negates
            const auto ki = cartan_projection(g.inverse());
            for (int i = 0; i < d; ++i) {
                CHECK(ki[static_cast<std::size_t>(i)] ==
                      doctest::Approx(-kg[static_cast<std::size_t>(d - 1 - i)]).epsilon(1e-9));
            }

            const auto kh = cartan_projection(h);
            const auto kgh = cartan_projection(g * h);
            for (int k = 1; k <= d; ++k) {
                CHECK(partial(kgh, k) <= partial(kg, k) + partial(kh, k) + 1e-8);
                if (k < d) {
                    const double top = std::log(singular_values(exterior_power(g, k))(0));
                    CHECK(partial(kg, k) == doctest::Approx(top).epsilon(1e-8));
                }
            }

            const auto l1 = jordan_projection(g * h);
            const auto l2 = jordan_projection(h * g);
            for (int i = 0; i < d; ++i) {
                CHECK(l1[static_cast<std::size_t>(i)] ==
                      doctest::Approx(l2[static_cast<std::size_t>(i)]).epsilon(1e-8));
            }

            // powers through the product type, which keeps the exterior
            // powers separately and so does not lose the small eigenvalues
            const auto cg = CompoundGenerator::from(g);
            ScaledProduct power(cg);
            const auto lg = jordan_projection(g);
            for (int n = 2; n <= 40; ++n) {
                power.multiply_right(cg);
                const auto ln = power.jordan();
                for (int i = 0; i < d; ++i) {
                    CHECK(ln[static_cast<std::size_t>(i)] ==
                          doctest::Approx(n * lg[static_cast<std::size_t>(i)]).epsilon(n * 1e-8));
                }
            }
        }
    }
}

TEST_CASE("cartan equals jordan on symmetric positive definite elements") {
    std::mt19937_64 rng(37);
    for (int d = 2; d <= kMaxDim; ++d) {
        for (int t = 0; t < 20; ++t) {
            const Matrix a = oracle::gaussian(d, rng);
            const auto g = um(Matrix(a * a.transpose() + 0.1 * Matrix::Identity(d, d)));
            const auto k = cartan_projection(g);
            const auto l = jordan_projection(g);
            for (int i = 0; i < d; ++i) {
                CHECK(k[static_cast<std::size_t>(i)] ==
                      doctest::Approx(l[static_cast<std::size_t>(i)]).epsilon(1e-9));
            }
        }
    }
}
