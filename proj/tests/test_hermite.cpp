#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xmom/errors.hpp"
#include "xmom/hermite.hpp"

using namespace xmom;

TEST_CASE("hermite_eval matches the explicit low-order forms") {
    CHECK(hermite_eval(0, 7.3) == 1.0);
    CHECK(hermite_eval(2, 0.0) == -1.0);
    CHECK(hermite_eval(3, 2.0) == 2.0);

    // Recurrence vs definition at rational points, exact arithmetic.
    const double points[] = {-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0};
    for (double x : points) {
        CHECK(hermite_eval(1, x) == x);
        CHECK(hermite_eval(2, x) == x * x - 1.0);
        CHECK(hermite_eval(3, x) == x * x * x - 3.0 * x);
        CHECK(hermite_eval(4, x) == x * x * x * x - 6.0 * x * x + 3.0);
    }
    CHECK_THROWS_AS(hermite_eval(-1, 0.0), PreconditionError);
}

TEST_CASE("hermite_normalized_row is He_n/sqrt(n!)") {
    const auto row = hermite_normalized_row(6, 1.7);
    double fact = 1.0;
    for (int n = 0; n <= 6; ++n) {
        if (n > 0) fact *= n;
        CHECK(row[static_cast<size_t>(n)] ==
              doctest::Approx(hermite_eval(n, 1.7) / std::sqrt(fact)).epsilon(1e-12));
    }
}

TEST_CASE("hermite_monomial_coeffs reproduce the polynomials") {
    const auto c3 = hermite_monomial_coeffs(3); // x^3 - 3x
    REQUIRE(c3.size() == 4);
    CHECK(c3[0] == 0.0);
    CHECK(c3[1] == -3.0);
    CHECK(c3[2] == 0.0);
    CHECK(c3[3] == 1.0);
    for (double x : {-1.3, 0.4, 2.0}) {
        const auto c6 = hermite_monomial_coeffs(6);
        double acc = 0.0;
        for (size_t i = c6.size(); i-- > 0;) acc = acc * x + c6[i];
        CHECK(acc == doctest::Approx(hermite_eval(6, x)).epsilon(1e-12));
    }
}

TEST_CASE("gauss_hermite_rule: structure and exactness") {
    CHECK_THROWS_AS(gauss_hermite_rule(0), PreconditionError);

    const QuadratureRule one = gauss_hermite_rule(1);
    REQUIRE(one.size() == 1);
    CHECK(one.nodes[0] == 0.0);
    CHECK(one.weights[0] == 1.0);

    const QuadratureRule two = gauss_hermite_rule(2);
    CHECK(two.integrate([](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-14));

    const QuadratureRule eight = gauss_hermite_rule(8);
    CHECK(eight.integrate([](double x) { return std::pow(x, 6); }) ==
          doctest::Approx(15.0).epsilon(1e-12));

    // Exact for degree <= 2m-1; positive weights; symmetric increasing nodes.
    // Odd-degree moments vanish only through cancellation of large terms, so
    // their tolerance is scaled by the neighboring even moment.
    for (int m : {3, 5, 16}) {
        const QuadratureRule rule = gauss_hermite_rule(m);
        for (int deg = 0; deg <= 2 * m - 1; ++deg) {
            const double got = rule.integrate([&](double x) { return std::pow(x, deg); });
            const double want = oracles::gaussian_moment(deg, 1.0);
            const double scale =
                std::max(1.0, oracles::gaussian_moment(deg + (deg % 2), 1.0));
            CHECK(std::fabs(got - want) <= 1e-11 * scale);
        }
        for (size_t i = 0; i < rule.size(); ++i) {
            CHECK(rule.weights[i] > 0.0);
            if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
            CHECK(rule.nodes[i] == -rule.nodes[rule.size() - 1 - i]);
        }
    }
}

TEST_CASE("orthogonality under quadrature: E[He_n He_m] = n! delta_nm") {
    // Oracle-side evaluation in extended precision so the check measures the
    // rule, not double round-off in the integrand.
    auto he_ld = [](int n, long double x) {
        long double p0 = 1.0L, p1 = x;
        if (n == 0) return p0;
        for (int k = 1; k < n; ++k) {
            const long double p2 = x * p1 - static_cast<long double>(k) * p0;
            p0 = p1;
            p1 = p2;
        }
        return p1;
    };
    // Tolerance is scaled by the integrand mass sqrt(n! m!): at n = m = 10
    // the target is n! = 3628800, whose double ulp is already 4.8e-10, so an
    // absolute 1e-9 would sit below the representation floor of any
    // double-precision rule.
    auto fact = [](int n) {
        long double f = 1.0L;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    };
    for (int m_nodes : {16, 32, 64}) {
        const QuadratureRule rule = gauss_hermite_rule(m_nodes);
        for (int n = 0; n <= 10; ++n)
            for (int m = 0; m <= 10; ++m) {
                long double acc = 0.0L;
                for (size_t i = 0; i < rule.size(); ++i)
                    acc += static_cast<long double>(rule.weights[i]) *
                           he_ld(n, rule.nodes[i]) * he_ld(m, rule.nodes[i]);
                const long double want = n == m ? fact(n) : 0.0L;
                const double scale = static_cast<double>(std::sqrt(fact(n) * fact(m)));
                CHECK(std::fabs(static_cast<double>(acc - want)) <= 1e-9 * std::max(1.0, scale));
            }
    }
}

TEST_CASE("composite rule: weight normalization and a discontinuous projection") {
    const QuadratureRule rule = composite_gaussian_rule({0.0});
    long double total = 0.0L;
    for (double w : rule.weights) total += w;
    CHECK(static_cast<double>(total) == doctest::Approx(1.0).epsilon(1e-14));

    // a_1 of sign at sigma=1 is E[|Z|] = sqrt(2/pi).
    const double a1 = rule.integrate([](double x) { return (x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0)) * x; });
    CHECK(a1 == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("project: exact Gaussian-moment anchors") {
    SUBCASE("identity at sigma=2") {
        const HermiteSeries s = project(FunctionSpec::identity(), 2.0, 3);
        CHECK(std::fabs(s.coeffs[0]) < 1e-12);
        CHECK(s.coeffs[1] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::fabs(s.coeffs[2]) < 1e-12);
        CHECK(std::fabs(s.coeffs[3]) < 1e-12);
    }
    SUBCASE("x^3 at sigma=1: a1=3, a3=6") {
        const HermiteSeries s = project(FunctionSpec::poly({0, 0, 0, 1}), 1.0, 4);
        CHECK(s.coeffs[1] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(s.coeffs[3] == doctest::Approx(6.0).epsilon(1e-12));
        CHECK(std::fabs(s.coeffs[0]) < 1e-12);
        CHECK(std::fabs(s.coeffs[2]) < 1e-12);
        CHECK(std::fabs(s.coeffs[4]) < 1e-11);
    }
    SUBCASE("constant: only a0 survives") {
        const HermiteSeries s = project(FunctionSpec::poly({1.0}), 0.7, 6);
        CHECK(s.coeffs[0] == doctest::Approx(1.0).epsilon(1e-13));
        for (int n = 1; n <= 6; ++n)
            CHECK(std::fabs(s.coeffs[static_cast<size_t>(n)]) < 1e-12);
    }
    CHECK_THROWS_AS(project(FunctionSpec::identity(), 0.0, 3), PreconditionError);
}

TEST_CASE("reconstruct: truncated series evaluation") {
    const HermiteSeries cubic = project(FunctionSpec::poly({0, 0, 0, 1}), 1.0, 3);
    CHECK(reconstruct(cubic, 2.0) == doctest::Approx(8.0).epsilon(1e-12));

    HermiteSeries zero;
    zero.sigma = 1.0;
    zero.coeffs = {0, 0, 0, 0};
    CHECK(reconstruct(zero, 4.2) == 0.0);

    const HermiteSeries ident = project(FunctionSpec::identity(), 2.0, 3);
    CHECK(reconstruct(ident, 5.0) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("projection/reconstruction round-trip on random polynomials") {
    std::mt19937 gen(7771);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> deg(0, 8);
    for (double sigma : {0.5, 1.0, 2.0}) {
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<double> c(static_cast<size_t>(deg(gen)) + 1);
            for (auto& v : c) v = coeff(gen);
            const FunctionSpec g = FunctionSpec::poly(c);
            const HermiteSeries s = project(g, sigma, 32);
            std::uniform_real_distribution<double> pt(-4.0 * sigma, 4.0 * sigma);
            for (int i = 0; i < 100; ++i) {
                const double x = pt(gen);
                const double want = g(x);
                CHECK(std::fabs(reconstruct(s, x) - want) <= 1e-8 * std::max(1.0, std::fabs(want)));
            }
        }
    }
}

TEST_CASE("scale covariance: project(g, sigma) == project(g(sigma x), 1)") {
    for (const auto& g : oracles::corpus9()) {
        for (double sigma : {0.5, 2.0}) {
            const HermiteSeries a = project(g, sigma, 16);
            const HermiteSeries b = project(FunctionSpec::input_scaled(sigma, g), 1.0, 16,
                                            rule_for(g, sigma));
            REQUIRE(a.coeffs.size() == b.coeffs.size());
            for (size_t n = 0; n < a.coeffs.size(); ++n)
                CHECK(std::fabs(a.coeffs[n] - b.coeffs[n]) <= 1e-10);
        }
    }
}

TEST_CASE("parse_function: grammar and validation") {
    const FunctionSpec cubic = parse_function("poly:0,1,0,0.2");
    CHECK(cubic(2.0) == doctest::Approx(2.0 + 0.2 * 8.0).epsilon(1e-15));
    CHECK(cubic.label() == "poly:0,1,0,0.2");

    const FunctionSpec s = parse_function("sign");
    CHECK(s(0.3) == 1.0);
    CHECK(s(-0.3) == -1.0);
    CHECK(s(0.0) == 0.0);

    CHECK_THROWS_AS(parse_function("clip:0"), PreconditionError);
    CHECK_THROWS_AS(parse_function("warp"), PreconditionError);
    CHECK_THROWS_AS(parse_function("clip:1,2"), PreconditionError);
    CHECK_THROWS_AS(parse_function("poly:"), PreconditionError);
    CHECK_THROWS_AS(parse_function("poly:1,x"), PreconditionError);

    try {
        parse_function("tanh:0");
        FAIL("expected a parse error");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("slope must be > 0") != std::string::npos);
    }
    try {
        parse_function("poly:1,zz");
        FAIL("expected a parse error");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }

    CHECK(parse_function("deadzone:0.5")(0.4) == 0.0);
    CHECK(parse_function("deadzone:0.5")(1.5) == doctest::Approx(1.0));
    CHECK(parse_function("deadzone:0.5")(-1.5) == doctest::Approx(-1.0));
    CHECK(parse_function("abs")(-2.5) == 2.5);
    CHECK(parse_function("clip:1.5")(7.0) == 1.5);
    CHECK(parse_function("identity")(0.25) == 0.25);
}

TEST_CASE("wrappers: scaled / reflected / input_scaled") {
    const FunctionSpec t = FunctionSpec::tanh(1.0);
    const FunctionSpec st = FunctionSpec::scaled(2.5, t);
    CHECK(st(0.7) == doctest::Approx(2.5 * std::tanh(0.7)).epsilon(1e-15));

    const FunctionSpec rt = FunctionSpec::reflected(FunctionSpec::clip(1.0));
    CHECK(rt(0.4) == doctest::Approx(-0.4));
    CHECK(rt(2.0) == doctest::Approx(-1.0));
    CHECK(rt.breakpoints()[0] == doctest::Approx(-1.0)); // reflected kink positions

    const FunctionSpec is = FunctionSpec::input_scaled(2.0, FunctionSpec::deadzone(1.0));
    CHECK(is(0.4) == 0.0);
    CHECK(is(1.0) == doctest::Approx(1.0));
    const auto bps = is.breakpoints();
    REQUIRE(bps.size() == 2);
    CHECK(std::fabs(bps[0]) == doctest::Approx(0.5));
}

TEST_CASE("series weighted norm") {
    HermiteSeries s;
    s.sigma = 1.0;
    s.coeffs = {0.0, 3.0, 0.0, 6.0}; // x^3: 9 + 36/6 = 15 = E[Z^6] - check norm^2
    CHECK(s.weighted_norm() == doctest::Approx(std::sqrt(15.0)).epsilon(1e-14));
}
