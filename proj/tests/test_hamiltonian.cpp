#include <catch_amalgamated.hpp>

#include "bandres/hamiltonian.hpp"
#include "oracle.hpp"

using namespace bandres;
using Catch::Approx;

namespace {

PolynomialPotential poly(std::initializer_list<Complex> c) { return PolynomialPotential(std::vector<Complex>(c)); }

PolynomialPotential random_even_poly(oracle::Gen& gen, int degree) {
    PolynomialPotential p;
    for (int k = 0; k <= degree; k += 2) p.add_term(k, gen.complex(1.0));
    return p;
}

} // namespace

TEST_CASE("shift_origin examples") {
    const PolynomialPotential x2 = poly({0, 0, 1});
    CHECK(shift_origin(x2, 0.0) == x2);

    const PolynomialPotential x3 = shift_origin(poly({0, 0, 0, 1}), 1.0);
    CHECK(x3.coeffs == std::vector<Complex>{1, 3, 3, 1});
    CHECK(x3.origin == 1.0);

    // double well -x^2 + lambda^2 x^4 / 2 about its minimum at 1/lambda
    const double lambda = 0.3;
    const PolynomialPotential dw = shift_origin(poly({0, 0, -1, 0, 0.5 * lambda * lambda}), 1.0 / lambda);
    CHECK(dw.coeff(0).real() == Approx(-1.0 / (2 * lambda * lambda)).epsilon(1e-14));
    CHECK(std::abs(dw.coeff(1)) < 1e-14);
    CHECK(dw.coeff(2).real() == Approx(2.0).epsilon(1e-14));
    CHECK(dw.coeff(3).real() == Approx(2.0 * lambda).epsilon(1e-14));
    CHECK(dw.coeff(4).real() == Approx(0.5 * lambda * lambda).epsilon(1e-14));
    CHECK(dw.degree() == 4);
}

TEST_CASE("shift_origin properties") {
    oracle::Gen gen(3);
    for (int trial = 0; trial < 500; ++trial) {
        PolynomialPotential p;
        const int deg = gen.integer(1, kMaxDegree);
        for (int k = 0; k <= deg; ++k) p.add_term(k, gen.complex(2.0));
        const double a = gen.uniform(-2.0, 2.0);
        const PolynomialPotential q = shift_origin(p, a);
        REQUIRE(q.degree() == p.degree());

        // evaluation identity p(a + t) == q(t); Horner against explicit powers
        const double t = gen.uniform(-1.5, 1.5);
        Complex direct{};
        for (int k = 0; k <= deg; ++k) direct += p.coeff(k) * std::pow(a + t, k);
        REQUIRE(std::abs(q.evaluate(t) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
        REQUIRE(std::abs(p.evaluate(a + t) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));

        // round trip
        const PolynomialPotential back = shift_origin(q, -a);
        REQUIRE(back.origin == Approx(p.origin).margin(1e-15));
        for (int k = 0; k <= deg; ++k) REQUIRE(std::abs(back.coeff(k) - p.coeff(k)) < 1e-13 * std::pow(1.0 + std::abs(a), deg) * 4);
    }
}

TEST_CASE("band_index examples") {
    CHECK(band_index(1, 1, 3) == 1);
    CHECK(band_index(2, 5, 3) == 8);
    CHECK(band_index(1, 1, 4) == 1);
    CHECK_THROWS_AS(band_index(2, 1, 3), std::out_of_range);
    CHECK_THROWS_AS(band_index(2, 6, 3), std::out_of_range);
}

TEST_CASE("band layout is contiguous and disjoint") {
    for (int b = 0; b <= 8; ++b) {
        const int dim = 12;
        std::vector<int> hits(dim * (b + 1) + 1, 0);
        for (int j = 1; j <= dim; ++j)
            for (int k = j; k <= j + b; ++k) ++hits[band_index(j, k, b)];
        for (int m = 1; m <= dim * (b + 1); ++m) REQUIRE(hits[m] == 1);
    }
}

TEST_CASE("BandedComplexSymmetric storage") {
    BandedComplexSymmetric m(5, 2);
    CHECK(m.data().size() == 15);
    m.set(1, 3, {2, -1});
    CHECK(m.get(3, 1) == Complex(2, -1));
    CHECK(m.get(0, 4) == Complex{});
    CHECK_THROWS_AS(m.set(0, 3, 1.0), std::out_of_range);
    CHECK_THROWS_AS(m.get(0, 5), std::out_of_range);
    CHECK(m.shifted({1, 1}).get(2, 2) == Complex(1, 1));
    CHECK(m.get(2, 2) == Complex{});
}

TEST_CASE("to_dense examples and round trip") {
    BandedComplexSymmetric one(1, 0);
    one.set(0, 0, {3, 4});
    const DenseMatrix d1 = to_dense(one);
    CHECK(d1.size() == 1);
    CHECK(d1(0, 0) == Complex(3, 4));

    BandedComplexSymmetric diag(4, 0);
    for (int i = 0; i < 4; ++i) diag.set(i, i, double(i + 1));
    const DenseMatrix dd = to_dense(diag);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(dd(i, j) == (i == j ? Complex(i + 1) : Complex{}));

    oracle::Gen gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        const BandedComplexSymmetric m = gen.banded(8, 3);
        const DenseMatrix d = to_dense(m);
        REQUIRE(d.is_symmetric());
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) REQUIRE(d(i, j) == m.get(i, j));
        // back into band storage
        BandedComplexSymmetric r(8, 3);
        for (int i = 0; i < 8; ++i)
            for (int j = i; j < std::min(8, i + 4); ++j) r.set(i, j, d(i, j));
        REQUIRE(r == m);
    }
    CHECK_THROWS_AS(to_dense(BandedComplexSymmetric(kMaxDenseDim + 1, 0)), std::length_error);
}

TEST_CASE("assemble: harmonic potential with matching W is diagonal") {
    const BasisSpec s{1.0, {1, 0}, Parity::Full, 10};
    const BandedComplexSymmetric h = assemble(s, poly({0, 0, 1}));
    CHECK(h.halfwidth() == 2);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) CHECK(h.get(i, j) == (i == j ? Complex(2 * i + 1) : Complex{}));
}

TEST_CASE("assemble: constant term lands on the diagonal") {
    const BasisSpec s{1.0, {1, 0}, Parity::Full, 6};
    const BandedComplexSymmetric a = assemble(s, poly({0, 0, 1, 0, 0.1}));
    const BandedComplexSymmetric b = assemble(s, poly({-2.5, 0, 1, 0, 0.1}));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) CHECK(std::abs(b.get(i, j) - a.get(i, j) - (i == j ? Complex(-2.5) : Complex{})) < 1e-14);
}

TEST_CASE("assemble: against a dense construction") {
    // Independent route: full Hamiltonian via dense x powers and the
    // kinetic term written out as -alpha D^2 = H0 - W x^2.
    oracle::Gen gen(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = gen.integer(3, 25);
        const BasisSpec s{gen.uniform(0.3, 2.0), gen.w(), Parity::Full, dim};
        PolynomialPotential v;
        const int deg = gen.integer(1, 6);
        for (int k = 0; k <= deg; ++k) v.add_term(k, gen.complex(1.0));
        const BandedComplexSymmetric h = assemble(s, v);
        REQUIRE(h.halfwidth() == std::max(deg, 2));

        Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(dim, dim);
        const Complex root = std::sqrt(s.w * s.alpha);
        for (int n = 0; n < dim; ++n) ref(n, n) += double(2 * n + 1) * root;
        ref -= s.w * oracle::dense_power(s, 2, dim);
        ref += v.coeff(0) * Eigen::MatrixXcd::Identity(dim, dim);
        for (int k = 1; k <= deg; ++k) ref += v.coeff(k) * oracle::dense_power(s, k, dim);

        const double scale = ref.cwiseAbs().maxCoeff();
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                REQUIRE(std::abs(h.get(i, j) - ref(i, j)) <= 1e-13 * scale);
                if (std::abs(i - j) > h.halfwidth()) REQUIRE(h.get(i, j) == Complex{});
            }
        // the outermost band is populated for a generic degree-matching potential
        if (deg >= 2 && dim > deg) REQUIRE(h.get(0, deg) != Complex{});
    }
}

TEST_CASE("assemble: parity restriction commutes with assembly") {
    oracle::Gen gen(19);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = gen.integer(2, 30);
        const Complex w = gen.w();
        const PolynomialPotential v = random_even_poly(gen, 2 * gen.integer(1, 4));
        const BandedComplexSymmetric full = assemble({1.0, w, Parity::Full, 2 * dim}, v);
        const BandedComplexSymmetric even = assemble({1.0, w, Parity::Even, dim}, v);
        const BandedComplexSymmetric odd = assemble({1.0, w, Parity::Odd, dim}, v);
        REQUIRE(even.halfwidth() == full.halfwidth() / 2);
        const double scale = std::max(1.0, full.inf_norm());
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                REQUIRE(std::abs(even.get(i, j) - full.get(2 * i, 2 * j)) <= 1e-13 * scale);
                REQUIRE(std::abs(odd.get(i, j) - full.get(2 * i + 1, 2 * j + 1)) <= 1e-13 * scale);
            }
    }
}

TEST_CASE("assemble: real W and real potential give a real matrix") {
    oracle::Gen gen(23);
    for (int trial = 0; trial < 20; ++trial) {
        PolynomialPotential v;
        for (int k = 0; k <= 6; ++k) v.add_term(k, gen.uniform(-1.0, 1.0));
        const BandedComplexSymmetric h = assemble({gen.uniform(0.2, 2.0), {gen.uniform(0.2, 5.0), 0.0}, Parity::Full, 30}, v);
        for (const Complex& c : h.data()) REQUIRE(c.imag() == 0.0);
    }
}

TEST_CASE("assemble: precondition errors") {
    CHECK_THROWS_AS(assemble({1.0, {1, 0}, Parity::Even, 10}, poly({0, 0, 1, 1})), std::invalid_argument);
    CHECK_THROWS_AS(assemble({1.0, {1, 0}, Parity::Full, 10}, poly({1})), std::invalid_argument);
    PolynomialPotential nine;
    nine.add_term(9, 1.0);
    CHECK_THROWS_AS(assemble({1.0, {1, 0}, Parity::Full, 10}, nine), std::invalid_argument);
}

TEST_CASE("PolynomialPotential basics") {
    PolynomialPotential p;
    CHECK(p.degree() == -1);
    p.add_term(3, {0, 1}).add_term(1, 2.0);
    CHECK(p.degree() == 3);
    CHECK(p.has_odd_powers());
    CHECK(p.evaluate(2.0) == Complex(4, 8));
    CHECK(p.coeff(7) == Complex{});
}
