#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "stokeskit/errors.hpp"
#include "stokeskit/formal.hpp"
#include "stokeskit/numstokes.hpp"
#include "support.hpp"

using namespace stokeskit;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::vector<std::complex<double>> circle_path(double rho, double from, double to, int steps = 48) {
    std::vector<std::complex<double>> p;
    for (int i = 0; i <= steps; ++i)
        p.push_back(std::polar(rho, from + (to - from) * i / static_cast<double>(steps)));
    return p;
}

double char_poly_distance(const CMatrix& a, const CMatrix& b) {
    auto ca = a.char_poly(), cb = b.char_poly();
    double d = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i) d = std::max(d, std::abs(ca[i] - cb[i]));
    return d;
}

} // namespace

TEST_CASE("asymptotic seed evaluates the closed forms") {
    // x^3 D + 1 with N = 0: the column is e^{1/(2x^2)}, worth e^2 at x = 0.5
    auto op = DifferentialOperator::parse("x^3*D + 1");
    auto ft = formal_type(ConnectionSpec(op));
    auto y = asymptotic_seed(ConnectionSpec(op), ft, 0.0, 0.5, 0);
    CHECK(std::abs(y.at(0, 0) - std::exp(std::complex<double>(2.0, 0.0))) < 1e-12);

    // Euler x D - 1/2: x^(1/2) exactly, every series coefficient zero
    auto euler = DifferentialOperator::parse("x*D - 1/2");
    auto eft = formal_type(ConnectionSpec(euler));
    for (int n : {0, 4, 12}) {
        auto m = asymptotic_seed(ConnectionSpec(euler), eft, 0.7, 0.81, n);
        CHECK(std::abs(m.at(0, 0) - std::exp(0.5 * std::complex<double>(std::log(0.81), 0.7))) <
              1e-13);
    }

    // diagonal system: block-diagonal seed equal to the rank-1 seeds
    SystemSpec diag;
    diag.entries = {{LaurentPoly::parse("-1*x^-3"), LaurentPoly()},
                    {LaurentPoly(), LaurentPoly()}};
    auto dft = formal_type(ConnectionSpec(diag));
    auto dm = asymptotic_seed(ConnectionSpec(diag), dft, 0.3, 0.4, 6);
    CHECK(std::abs(dm.at(0, 1)) < 1e-15);
    CHECK(std::abs(dm.at(1, 0)) < 1e-15);
    // first item is the factor 1/(2x^2): its column solves du = -x^-3 u
    std::complex<double> x = std::polar(0.4, 0.3);
    CHECK(std::abs(dm.at(0, 0) - std::exp(0.5 / (x * x))) < 1e-12);
    CHECK(std::abs(dm.at(1, 1) - 1.0) < 1e-15);
}

TEST_CASE("integrate reproduces the exponential and the Euler loop") {
    IntegrationConfig cfg;
    auto op = DifferentialOperator::parse("D - 1");
    CMatrix y0 = CMatrix::identity(1);
    auto y = integrate(ConnectionSpec(op), {{1.0, 0.0}, {2.0, 0.0}}, y0, cfg);
    CHECK(std::abs(y.at(0, 0) - std::exp(1.0)) < 1e-9);

    auto euler = DifferentialOperator::parse("x*D - 1/2");
    auto loop = circle_path(0.7, 0.0, 2 * kPi);
    auto m = integrate(ConnectionSpec(euler), loop, CMatrix::identity(1), cfg);
    CHECK(std::abs(m.at(0, 0) - std::complex<double>(-1.0, 0.0)) < 1e-9);
}

TEST_CASE("path reversal inverts the transport") {
    IntegrationConfig cfg;
    auto op = DifferentialOperator::parse("x^3*D^2 + x*D - 1");
    auto path = circle_path(0.8, 0.3, 2.1);
    auto back = circle_path(0.8, 2.1, 0.3);
    auto there = integrate(ConnectionSpec(op), path, CMatrix::identity(2), cfg);
    auto and_back = integrate(ConnectionSpec(op), back, there, cfg);
    CHECK(and_back.close_to(CMatrix::identity(2), 1e-8));
}

TEST_CASE("numeric monodromy of the reference connections") {
    IntegrationConfig cfg;
    auto euler = numeric_monodromy(ConnectionSpec(DifferentialOperator::parse("x*D - 1/2")), 0.6,
                                   cfg);
    CHECK(std::abs(euler.at(0, 0) + 1.0) < 1e-9);

    // e^{1/(2x^2)} is single-valued: trivial monodromy
    auto m = numeric_monodromy(ConnectionSpec(DifferentialOperator::parse("x^3*D + 1")), 0.9, cfg);
    CHECK(m.close_to(CMatrix::identity(1), 1e-8));

    // characteristic polynomial independent of the radius and starting angle
    auto op = DifferentialOperator::parse("x^3*D^2 + x^2*D + 1");
    auto m1 = numeric_monodromy(ConnectionSpec(op), 0.5, cfg);
    auto m2 = numeric_monodromy(ConnectionSpec(op), 0.9, cfg);
    CHECK(char_poly_distance(m1, m2) < 1e-7);
    auto rotated = integrate(ConnectionSpec(op), circle_path(0.5, 1.1, 1.1 + 2 * kPi),
                             CMatrix::identity(2), cfg);
    CHECK(char_poly_distance(m1, rotated) < 1e-7);
}

TEST_CASE("stokes matrices of the decoupled and single-factor cases") {
    SystemSpec diag;
    diag.entries = {{LaurentPoly::parse("-1*x^-3"), LaurentPoly()},
                    {LaurentPoly(), LaurentPoly()}};
    auto res = stokes_matrices(ConnectionSpec(diag));
    CHECK(res.violations.empty());
    REQUIRE(res.structure.matrices.size() == 4);
    for (const auto& a : res.structure.matrices)
        CHECK(a.close_to(CMatrix::identity(2), 1e-8));

    auto single = stokes_matrices(ConnectionSpec(DifferentialOperator::parse("x^3*D + 1")));
    CHECK(single.structure.matrices.empty());
    CHECK(single.structure.diagram.lines.empty());
    CHECK(glue_monodromy(single.structure).close_to(CMatrix::identity(1), 1e-12));
}

TEST_CASE("airy-type operator: three unipotent matrices and the monodromy identity") {
    auto op = DifferentialOperator::parse("x^5*D^2 - 1");
    auto res = stokes_matrices(ConnectionSpec(op));
    CHECK(res.violations.empty());
    REQUIRE(res.structure.matrices.size() == 3);
    for (double r : res.residuals) CHECK(r < 1e-7); // raw off-shape bound 1e3*tol
    for (const auto& a : res.structure.matrices) {
        CHECK(std::abs(a.at(0, 0) - 1.0) < 1e-12);
        CHECK(std::abs(a.at(1, 1) - 1.0) < 1e-12);
        CHECK(std::abs(a.det() - 1.0) < 1e-12);
    }
    auto glue = glue_monodromy(res.structure);
    auto num = numeric_monodromy(ConnectionSpec(op), 0.9, IntegrationConfig{});
    CHECK(char_poly_distance(glue, num) < 1e-6);
}

TEST_CASE("monodromy identity on random diagonal systems") {
    std::mt19937 rng(5577);
    IntegrationConfig cfg;
    int done = 0;
    while (done < 10) {
        FormalType ft = stokeskit::testing::random_formal(rng, 2, 2, true);
        if (ft.total_rank() != 2) continue;
        SystemSpec sys;
        try {
            sys = diagonal_system(ft);
        } catch (const math_error&) {
            continue;
        }
        auto res = stokes_matrices(ConnectionSpec(sys));
        if (!res.violations.empty()) {
            CAPTURE(done);
            FAIL_CHECK("unexpected validation failure");
            ++done;
            continue;
        }
        auto glue = glue_monodromy(res.structure);
        auto num = numeric_monodromy(ConnectionSpec(sys), 1.1, cfg);
        CAPTURE(done);
        CHECK(char_poly_distance(glue, num) < 1e-6);
        ++done;
    }
}

TEST_CASE("seeding robustness: halved radius and deeper truncation") {
    auto op = DifferentialOperator::parse("x^5*D^2 - 1");
    IntegrationConfig base;
    base.resolve(formal_type(ConnectionSpec(op)));
    auto ref = stokes_matrices(ConnectionSpec(op), base);

    IntegrationConfig half = base;
    half.rho_seed = base.rho_seed / 2;
    half.rho_match = 0.0;
    half.resolve(formal_type(ConnectionSpec(op)));
    auto deep = stokes_matrices(ConnectionSpec(op), half);

    IntegrationConfig more = base;
    more.n_asym = base.n_asym + 2;
    auto richer = stokes_matrices(ConnectionSpec(op), more);

    REQUIRE(ref.structure.matrices.size() == deep.structure.matrices.size());
    for (std::size_t k = 0; k < ref.structure.matrices.size(); ++k) {
        CHECK((ref.structure.matrices[k] - deep.structure.matrices[k]).norm_inf() < 1e-6);
        CHECK((ref.structure.matrices[k] - richer.structure.matrices[k]).norm_inf() < 1e-6);
    }
}

TEST_CASE("integration config guards its radii") {
    IntegrationConfig cfg;
    cfg.rho_seed = 1.0;
    cfg.rho_match = 0.5;
    auto ft = formal_type(ConnectionSpec(DifferentialOperator::parse("x^3*D + 1")));
    CHECK_THROWS_AS(cfg.resolve(ft), math_error);
}
