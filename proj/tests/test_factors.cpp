#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stokeskit/errors.hpp"
#include "stokeskit/factor.hpp"

using namespace stokeskit;

namespace {

ExponentialFactor random_factor(std::mt19937& rng, int max_ord = 4, bool allow_ram = false) {
    std::uniform_int_distribution<int> nterms(0, 3);
    std::uniform_int_distribution<long long> num(-4, 4);
    std::uniform_int_distribution<long long> den(1, 3);
    long long ram = 1;
    if (allow_ram && rng() % 3 == 0) ram = 2;
    std::map<long long, QComplex> terms;
    int n = nterms(rng);
    std::uniform_int_distribution<long long> expo(-max_ord, 2);
    for (int i = 0; i < n; ++i) {
        QComplex c(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        terms[expo(rng) * ram + (ram > 1 ? static_cast<long long>(rng() % 2) : 0)] += c;
    }
    return ExponentialFactor(ram, std::move(terms));
}

} // namespace

TEST_CASE("parse normalizes the grammar examples") {
    auto f = parse_factor("1/x");
    CHECK(f.ram() == 1);
    REQUIRE(f.terms().size() == 1);
    CHECK(f.terms().at(-1) == QComplex(1));

    auto g = parse_factor("(2+1*i)*x^-3 + x^-1");
    CHECK(g.ram() == 1);
    REQUIRE(g.terms().size() == 2);
    CHECK(g.terms().at(-3) == QComplex(Rational(2), Rational(1)));
    CHECK(g.terms().at(-1) == QComplex(1));

    auto h = parse_factor("x^(-3/2)");
    CHECK(h.ram() == 2);
    REQUIRE(h.terms().size() == 1);
    CHECK(h.terms().at(-3) == QComplex(1));

    // parsing normalizes: exponent reduction and cancellation
    CHECK(parse_factor("x^(2/4)") == parse_factor("x^(1/2)"));
    CHECK(parse_factor("x^-1 - 1/x").is_zero());
}

TEST_CASE("parse reports the failure position") {
    try {
        parse_factor("x^( -3 / )");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.position() > 0);
    }
    CHECK_THROWS_AS(parse_factor("x^(1/2) + %"), parse_error);
}

TEST_CASE("combine matches the stated examples") {
    auto one_over_x = parse_factor("1/x");
    CHECK(combine(one_over_x, one_over_x, -1).is_zero());
    CHECK(combine(one_over_x, one_over_x, -1).ram() == 1);

    auto s = combine(one_over_x, parse_factor("3 + x"), +1);
    CHECK(s.terms().at(-1) == QComplex(1));
    CHECK(s.terms().at(0) == QComplex(3));
    CHECK(s.terms().at(1) == QComplex(1));

    // lcm(1,2) = 2 rescaling of exponents
    auto d = combine(parse_factor("x^-1"), parse_factor("x^(-3/2)"), -1);
    CHECK(d.ram() == 2);
    CHECK(d.terms().at(-3) == QComplex(-1));
    CHECK(d.terms().at(-2) == QComplex(1));
}

TEST_CASE("principal part splits order, leading, and pole terms") {
    auto p = principal_part(parse_factor("1/x + 3 + x"));
    CHECK(p.order == Rational(1));
    CHECK(p.leading == QComplex(1));
    CHECK(p.pole_terms == parse_factor("x^-1"));

    auto q = principal_part(parse_factor("(2+1*i)*x^-3 + x^-1"));
    CHECK(q.order == Rational(3));
    CHECK(q.leading == QComplex(Rational(2), Rational(1)));
    CHECK(q.pole_terms == parse_factor("(2+1*i)*x^-3 + x^-1"));

    auto r = principal_part(parse_factor("5 + x^2"));
    CHECK(r.order == Rational(0));
    CHECK(r.leading == QComplex(0));
    CHECK(r.pole_terms.is_zero());
}

TEST_CASE("ramified pullback") {
    CHECK(ramify_pullback(parse_factor("1/x"), 2) == parse_factor("x^-2"));
    auto f = ramify_pullback(parse_factor("x^(-3/2)"), 2);
    CHECK(f.ram() == 1);
    CHECK(f == parse_factor("x^-3"));
    auto g = parse_factor("x^(-3/2) + 2*x^-1");
    CHECK(ramify_pullback(g, 1) == g);
}

TEST_CASE("evaluate on the stated points") {
    auto f = parse_factor("1/x");
    CHECK(f.evaluate(CoverPoint{0.1, 0.0}).real() == doctest::Approx(10.0));
    auto at_i = f.evaluate(CoverPoint{1.0, 1.5707963267948966});
    CHECK(at_i.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_i.imag() == doctest::Approx(-1.0));
    auto half = parse_factor("x^(-1/2)");
    CHECK(half.evaluate(CoverPoint{0.25, 0.0}).real() == doctest::Approx(2.0));
    CHECK_THROWS_AS(f.evaluate(CoverPoint{0.0, 0.0}), math_error);
}

TEST_CASE("render/parse round trip on random factors") {
    std::mt19937 rng(20240811);
    for (int t = 0; t < 200; ++t) {
        auto f = random_factor(rng, 5, true);
        CAPTURE(f.render());
        CHECK(parse_factor(f.render()) == f);
    }
}

TEST_CASE("combine is commutative and associative with the empty factor as unit") {
    std::mt19937 rng(7);
    ExponentialFactor zero;
    for (int t = 0; t < 100; ++t) {
        auto a = random_factor(rng, 4, true);
        auto b = random_factor(rng, 4, true);
        auto c = random_factor(rng, 4, true);
        CHECK(combine(a, b, +1) == combine(b, a, +1));
        CHECK(combine(combine(a, b, +1), c, +1) == combine(a, combine(b, c, +1), +1));
        CHECK(combine(a, zero, +1) == a);
        CHECK(combine(a, a, -1).is_zero());
    }
}

TEST_CASE("pullback multiplies the order") {
    std::mt19937 rng(99);
    for (int t = 0; t < 60; ++t) {
        auto f = random_factor(rng, 4, true);
        for (long long m = 1; m <= 6; ++m) {
            auto g = ramify_pullback(f, m);
            CHECK(g.order() == f.order() * Rational(m));
        }
    }
}

TEST_CASE("evaluate is additive under combine") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> rho_dist(1e-3, 1.0);
    std::uniform_real_distribution<double> th_dist(0.0, 6.28);
    for (int t = 0; t < 60; ++t) {
        auto a = random_factor(rng, 3, true);
        auto b = random_factor(rng, 3, true);
        auto s = combine(a, b, +1);
        CoverPoint x{rho_dist(rng), th_dist(rng)};
        auto lhs = s.evaluate(x);
        auto rhs = a.evaluate(x) + b.evaluate(x);
        double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        CHECK(std::abs(lhs - rhs) / scale < 1e-12);
    }
}

TEST_CASE("derivative and deck image") {
    auto f = parse_factor("1/2*x^-2");
    CHECK(f.derivative() == parse_factor("-1*x^-3"));
    auto g = parse_factor("x^(-3/2)");
    CHECK(g.deck_image() == parse_factor("-1*x^(-3/2)"));
    CHECK(parse_factor("x^-2").deck_image() == parse_factor("x^-2"));
}
