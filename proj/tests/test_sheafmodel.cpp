#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "stokeskit/errors.hpp"
#include "stokeskit/sheafmodel.hpp"

using namespace stokeskit;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

ExponentialFactor random_pole_factor(std::mt19937& rng, int max_ord) {
    std::uniform_int_distribution<long long> num(-3, 3);
    std::map<long long, QComplex> terms;
    long long lead = -1 - static_cast<long long>(rng() % max_ord);
    QComplex c(Rational(num(rng)), Rational(num(rng)));
    if (c.is_zero()) c = QComplex(1);
    terms[lead] = c;
    for (long long k = lead + 1; k < 0; ++k)
        if (rng() % 3 == 0) terms[k] += QComplex(Rational(num(rng)), Rational(num(rng)));
    return ExponentialFactor(1, std::move(terms));
}

Sector random_sector(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    std::uniform_real_distribution<double> w(0.2, 2.0);
    double lo = u(rng);
    return {Direction::numeric(lo), Direction::numeric(lo + w(rng)), 0.1};
}

} // namespace

TEST_CASE("sublevel membership on the worked points") {
    auto phi = parse_factor("1/x");
    CHECK(sublevel_contains(phi, 0.0, ExtPoint::finite({1.0, 0.0}), ExtPoint::finite({-2.0, 0.0})));
    CHECK(!sublevel_contains(phi, 100.0, ExtPoint::finite({0.0, 0.0}), ExtPoint::finite({0.0, 0.0})));
    CHECK(!sublevel_contains(phi, 0.0, ExtPoint::finite({0.1, 0.0}), ExtPoint::finite({0.0, 0.0})));
    CHECK(!sublevel_contains(phi, 1e9, ExtPoint::at_infinity(), ExtPoint::finite({0.0, 0.0})));
    CHECK(!sublevel_contains(phi, 1e9, ExtPoint::finite({1.0, 0.0}), ExtPoint::at_infinity()));
}

TEST_CASE("sublevel monotonicity in c") {
    std::mt19937 rng(1000003);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    auto phi = parse_factor("(1+i)*x^-2 + x^-1");
    for (int t = 0; t < 200; ++t) {
        ExtPoint x = ExtPoint::finite({u(rng), u(rng)});
        ExtPoint tt = ExtPoint::finite({u(rng), u(rng)});
        double c = u(rng);
        if (sublevel_contains(phi, c, x, tt)) {
            CHECK(sublevel_contains(phi, c + 0.5, x, tt));
            CHECK(sublevel_contains(phi, c + 5.0, x, tt));
        }
    }
}

TEST_CASE("hom pattern reproduces the two-factor trichotomy") {
    std::vector<ExponentialFactor> fam = {parse_factor("1/x"), ExponentialFactor()};

    // dominance sector around theta = 0: one-sided triangular with entry (2,1)
    Sector right{Direction::exact(Rational(-1, 4)), Direction::exact(Rational(1, 4)), 0.1};
    auto s1 = hom_shape(fam, right);
    CHECK(s1.tag == HomTag::LowerLike);
    CHECK(s1.allowed == std::set<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}});

    // opposite dominance sector: the transpose pattern
    Sector left{Direction::exact(Rational(3, 4)), Direction::exact(Rational(5, 4)), 0.1};
    auto s2 = hom_shape(fam, left);
    CHECK(s2.tag == HomTag::UpperLike);
    CHECK(s2.allowed == std::set<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}});

    // a sector containing exactly one Stokes line: diagonal
    Sector around_line{Direction::exact(Rational(1, 4)), Direction::exact(Rational(3, 4)), 0.1};
    auto s3 = hom_shape(fam, around_line);
    CHECK(s3.tag == HomTag::Diagonal);
    CHECK(s3.allowed == std::set<std::pair<int, int>>{{1, 1}, {2, 2}});

    // isomorphic factors: full on any sector
    std::vector<ExponentialFactor> iso = {parse_factor("1/x"), parse_factor("1/x + 3")};
    CHECK(hom_shape(iso, right).tag == HomTag::Full);
    CHECK(hom_shape(iso, around_line).tag == HomTag::Full);
}

TEST_CASE("exact rule agrees with the brute-force oracle") {
    OracleGrid grid;
    std::vector<ExponentialFactor> fam = {parse_factor("1/x"), ExponentialFactor()};
    Sector right{Direction::exact(Rational(-1, 4)), Direction::exact(Rational(1, 4)), 0.1};
    CHECK(hom_exists(fam[1], fam[0], right) == hom_exists_bruteforce(fam[1], fam[0], right, grid));
    CHECK(hom_exists(fam[0], fam[1], right) == hom_exists_bruteforce(fam[0], fam[1], right, grid));

    std::mt19937 rng(2718281);
    int agree = 0, total = 0;
    while (total < 100) {
        auto a = random_pole_factor(rng, 3);
        auto b = random_pole_factor(rng, 3);
        Sector s = random_sector(rng);
        // keep the endpoints resolvable on the oracle's angular grid
        auto delta = combine(a, b, -1);
        if (delta.pole_part().is_zero()) continue;
        bool marginal = false;
        for (const auto& d : stokes_directions(delta))
            for (int k = -1; k <= 1; ++k)
                for (double end : {s.lo.radians, s.hi.radians})
                    if (std::abs(d.radians + 2 * kPi * k - end) < 0.1) marginal = true;
        if (marginal) continue;
        bool exact = hom_exists(a, b, s);
        bool brute = hom_exists_bruteforce(a, b, s, grid);
        ++total;
        if (exact == brute) ++agree;
        CAPTURE(a.render());
        CAPTURE(b.render());
        CAPTURE(s.lo.radians);
        CAPTURE(s.hi.radians);
        CHECK(exact == brute);
    }
    CHECK(agree == total);
}

TEST_CASE("oracle agreement when the sector boundary touches a Stokes direction") {
    // boundary exactly on pi/2, where the leading real part vanishes
    std::vector<ExponentialFactor> fam = {parse_factor("1/x"), ExponentialFactor()};
    Sector touching{Direction::exact(Rational(1, 2)), Direction::exact(Rational(1)), 0.1};
    OracleGrid grid;
    CHECK(hom_exists(fam[0], fam[1], touching) ==
          hom_exists_bruteforce(fam[0], fam[1], touching, grid));
    CHECK(hom_exists(fam[1], fam[0], touching) ==
          hom_exists_bruteforce(fam[1], fam[0], touching, grid));
}

TEST_CASE("allowed sets are transitively closed") {
    std::mt19937 rng(112);
    for (int t = 0; t < 25; ++t) {
        int n = 2 + static_cast<int>(rng() % 3);
        std::vector<ExponentialFactor> fam;
        for (int i = 0; i < n; ++i) fam.push_back(random_pole_factor(rng, 3));
        Sector s = random_sector(rng);
        auto shape = hom_shape(fam, s);
        for (const auto& [i, j] : shape.allowed)
            for (const auto& [j2, k] : shape.allowed)
                if (j == j2) CHECK(shape.allowed.count({i, k}) == 1);
    }
}

TEST_CASE("shrinking the sector never removes allowed pairs") {
    std::mt19937 rng(355113);
    for (int t = 0; t < 30; ++t) {
        std::vector<ExponentialFactor> fam = {random_pole_factor(rng, 3),
                                              random_pole_factor(rng, 3)};
        Sector s = random_sector(rng);
        double w = s.hi.radians - s.lo.radians;
        Sector smaller{Direction::numeric(s.lo.radians + 0.2 * w),
                       Direction::numeric(s.hi.radians - 0.2 * w), s.rho_max};
        auto big = hom_shape(fam, s).allowed;
        auto small = hom_shape(fam, smaller).allowed;
        for (const auto& p : big) CHECK(small.count(p) == 1);
    }
}

TEST_CASE("negating every factor transposes the allowed set") {
    std::mt19937 rng(314159);
    for (int t = 0; t < 100; ++t) {
        std::vector<ExponentialFactor> fam = {random_pole_factor(rng, 3),
                                              random_pole_factor(rng, 3)};
        std::vector<ExponentialFactor> neg;
        for (const auto& f : fam) neg.push_back(combine(ExponentialFactor(), f, -1));
        Sector s = random_sector(rng);
        auto a = hom_shape(fam, s).allowed;
        auto b = hom_shape(neg, s).allowed;
        for (const auto& [i, j] : a) CHECK(b.count({j, i}) == 1);
        for (const auto& [i, j] : b) CHECK(a.count({j, i}) == 1);
    }
}

TEST_CASE("cover sectors of a two-factor family never produce a full pattern") {
    std::mt19937 rng(8128);
    for (int t = 0; t < 25; ++t) {
        auto a = random_pole_factor(rng, 3);
        auto b = random_pole_factor(rng, 3);
        if (combine(a, b, -1).pole_part().is_zero()) continue;
        std::vector<ExponentialFactor> fam = {a, b};
        auto d = build_diagram(fam, 0.5);
        for (const auto& sec : d.cover) {
            auto shape = hom_shape(fam, sec);
            bool tri = shape.tag == HomTag::Diagonal || shape.tag == HomTag::UpperLike ||
                       shape.tag == HomTag::LowerLike;
            CHECK(tri);
        }
    }
}

TEST_CASE("constructible description of e^phi") {
    auto d = phi_exponential(parse_factor("1/x"));
    REQUIRE(d.size() == 3);
    CHECK(d[0].degree == 0);
    CHECK(d[0].stratum == Stratum::SublevelFamily);
    CHECK(d[0].factor == parse_factor("1/x"));
    CHECK(d[0].rank == 1);
    CHECK(d[1].degree == 1);
    CHECK(d[1].stratum == Stratum::XZeroTFinite);
    CHECK(d[2].degree == 1);
    CHECK(d[2].stratum == Stratum::XNonzeroTInfinity);

    auto d2 = phi_exponential(parse_factor("2/x"));
    CHECK(d2[0].factor == parse_factor("2/x"));
    CHECK(d2[1].stratum == d[1].stratum);
    CHECK(d2[2].stratum == d[2].stratum);

    CHECK_THROWS_AS(phi_exponential(parse_factor("3 + x")), math_error);
}

TEST_CASE("degree-0 entry membership agrees with direct evaluation") {
    auto phi = parse_factor("x^-2");
    auto d = phi_exponential(phi);
    std::mt19937 rng(161803);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 1000; ++t) {
        std::complex<double> x{u(rng), u(rng)};
        std::complex<double> tt{u(rng), u(rng)};
        double c = u(rng);
        if (std::abs(x) < 1e-6) continue;
        bool direct = (tt + phi.evaluate(x)).real() < c;
        CHECK(sublevel_contains(d[0].factor, c, ExtPoint::finite(x), ExtPoint::finite(tt)) ==
              direct);
    }
}

TEST_CASE("omp and serial grid suprema agree bitwise") {
    auto delta = parse_factor("(1+2*i)*x^-3 + x^-1");
    Sector s{Direction::numeric(0.4), Direction::numeric(2.2), 0.1};
    std::vector<double> radii = {1e-3, 1e-2, 1e-1};
    CHECK(sector_sup_re(delta, s, radii, 511) == sector_sup_re_serial(delta, s, radii, 511));
}
