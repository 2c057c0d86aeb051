#include "stokeskit/sheafmodel.hpp"

#include <algorithm>
#include <cmath>

#include "stokeskit/errors.hpp"

namespace stokeskit {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

} // namespace

bool sublevel_contains(const ExponentialFactor& phi, double c, const ExtPoint& x,
                       const ExtPoint& t) {
    if (x.infinite || t.infinite) return false;
    if (x.value == std::complex<double>(0.0, 0.0)) return false; // x must lie in U
    return (t.value + phi.evaluate(x.value)).real() < c;
}

bool hom_exists(const ExponentialFactor& source, const ExponentialFactor& target,
                const Sector& sector) {
    // The sublevel set of the source must eventually sit inside the target's:
    // fiberwise, Re(target - source) must stay bounded above on the germ.
    ExponentialFactor delta = combine(target, source, -1);
    if (delta.order().is_zero()) return true; // pole parts coincide

    // dominance is constant between consecutive Stokes directions of delta, so
    // the closure check reduces to: endpoints, every direction lift inside the
    // arc, and one representative per open subarc.
    std::vector<Direction> checks = {sector.lo, sector.hi};
    std::vector<Direction> inside;
    for (const auto& dir : stokes_directions(delta)) {
        // lifts dir + 2 pi k meeting [lo, hi]
        double span_lo = sector.lo.radians, span_hi = sector.hi.radians;
        long long kmin = static_cast<long long>(std::floor((span_lo - dir.radians) / (2 * kPi)));
        long long kmax = static_cast<long long>(std::ceil((span_hi - dir.radians) / (2 * kPi)));
        for (long long k = kmin; k <= kmax; ++k) {
            double lift = dir.radians + 2 * kPi * static_cast<double>(k);
            if (lift < span_lo - 1e-12 || lift > span_hi + 1e-12) continue;
            Direction d = dir.pi_mult ? Direction::exact(*dir.pi_mult + Rational(2 * k))
                                      : Direction::numeric(lift);
            inside.push_back(d);
        }
    }
    std::sort(inside.begin(), inside.end(),
              [](const Direction& a, const Direction& b) { return a.radians < b.radians; });
    std::vector<Direction> walls = {sector.lo};
    walls.insert(walls.end(), inside.begin(), inside.end());
    walls.push_back(sector.hi);
    for (std::size_t i = 0; i + 1 < walls.size(); ++i)
        checks.push_back(midpoint(walls[i], walls[i + 1]));
    checks.insert(checks.end(), inside.begin(), inside.end());

    for (const auto& theta : checks)
        if (dominance(delta, theta) > 0) return false;
    return true;
}

HomShape hom_shape(const std::vector<ExponentialFactor>& factors, const Sector& sector) {
    if (factors.empty()) throw math_error("hom shape of an empty family");
    HomShape shape;
    shape.n = static_cast<int>(factors.size());
    for (int i = 1; i <= shape.n; ++i)
        for (int j = 1; j <= shape.n; ++j)
            if (i == j || hom_exists(factors[j - 1], factors[i - 1], sector))
                shape.allowed.insert({i, j});

    bool all = shape.allowed.size() == static_cast<std::size_t>(shape.n) * shape.n;
    bool upper = true, lower = true, offdiag = false;
    for (const auto& [i, j] : shape.allowed) {
        if (i < j) lower = false;
        if (i > j) upper = false;
        if (i != j) offdiag = true;
    }
    if (all && shape.n > 1)
        shape.tag = HomTag::Full;
    else if (!offdiag)
        shape.tag = HomTag::Diagonal;
    else if (upper)
        shape.tag = HomTag::UpperLike;
    else if (lower)
        shape.tag = HomTag::LowerLike;
    else
        shape.tag = HomTag::Other;
    return shape;
}

std::string hom_tag_name(HomTag tag) {
    switch (tag) {
    case HomTag::Diagonal: return "diag";
    case HomTag::UpperLike: return "upper-like";
    case HomTag::LowerLike: return "lower-like";
    case HomTag::Full: return "full";
    default: return "other";
    }
}

namespace {

double grid_sup(const ExponentialFactor& delta, const Sector& sector,
                const std::vector<double>& radii, int n_theta, bool parallel) {
    double lo = sector.lo.radians, hi = sector.hi.radians;
    double sup = -1e300;
    if (parallel) {
#pragma omp parallel for reduction(max : sup) schedule(static)
        for (int ti = 0; ti < n_theta; ++ti) {
            double theta = lo + (hi - lo) * static_cast<double>(ti) /
                                    static_cast<double>(n_theta - 1);
            for (double rho : radii) {
                double v = delta.evaluate(CoverPoint{rho, theta}).real();
                if (v > sup) sup = v;
            }
        }
    } else {
        for (int ti = 0; ti < n_theta; ++ti) {
            double theta = lo + (hi - lo) * static_cast<double>(ti) /
                                    static_cast<double>(n_theta - 1);
            for (double rho : radii) {
                double v = delta.evaluate(CoverPoint{rho, theta}).real();
                if (v > sup) sup = v;
            }
        }
    }
    return sup;
}

} // namespace

double sector_sup_re(const ExponentialFactor& delta, const Sector& sector,
                     const std::vector<double>& radii, int n_theta) {
    return grid_sup(delta, sector, radii, n_theta, true);
}

double sector_sup_re_serial(const ExponentialFactor& delta, const Sector& sector,
                            const std::vector<double>& radii, int n_theta) {
    return grid_sup(delta, sector, radii, n_theta, false);
}

namespace {

bool bruteforce(const ExponentialFactor& source, const ExponentialFactor& target,
                const Sector& sector, const OracleGrid& grid, bool parallel) {
    ExponentialFactor delta = combine(target, source, -1);
    if (delta.is_zero()) return true;
    // The inclusion defect is the per-radius supremum of Re delta; it stabilizes
    // as c' grows iff the defect stops climbing between the innermost layers and
    // never exceeds the top of the ladder.
    std::vector<double> radii = grid.radii;
    std::sort(radii.begin(), radii.end());
    auto layer_sup = [&](double rho) {
        std::vector<double> one = {rho};
        return parallel ? sector_sup_re(delta, sector, one, grid.n_theta)
                        : sector_sup_re_serial(delta, sector, one, grid.n_theta);
    };
    double inner = layer_sup(radii.front());
    double outer = -1e300;
    for (std::size_t i = 1; i < radii.size(); ++i) outer = std::max(outer, layer_sup(radii[i]));
    if (inner > grid.c_cap) return false;
    double growth = inner - std::max(outer, 0.0);
    return growth < 1.0; // within one ladder increment
}

} // namespace

bool hom_exists_bruteforce(const ExponentialFactor& source, const ExponentialFactor& target,
                           const Sector& sector, const OracleGrid& grid) {
    return bruteforce(source, target, sector, grid, true);
}

bool hom_exists_bruteforce_serial(const ExponentialFactor& source,
                                  const ExponentialFactor& target, const Sector& sector,
                                  const OracleGrid& grid) {
    return bruteforce(source, target, sector, grid, false);
}

std::string stratum_name(Stratum s) {
    switch (s) {
    case Stratum::SublevelFamily: return "Re(t+phi)<?";
    case Stratum::XZeroTFinite: return "x=0, t!=inf";
    default: return "x!=0, t=inf";
    }
}

ConstructibleDescription phi_exponential(const ExponentialFactor& phi) {
    if (phi.order().is_zero())
        throw math_error("phi must have an effective pole (regular case excluded)");
    ConstructibleDescription out;
    out.push_back({0, Stratum::SublevelFamily, phi, 1});
    out.push_back({1, Stratum::XZeroTFinite, ExponentialFactor(), 1});
    out.push_back({1, Stratum::XNonzeroTInfinity, ExponentialFactor(), 1});
    return out;
}

} // namespace stokeskit
