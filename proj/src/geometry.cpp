#include "stokeskit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stokeskit/errors.hpp"

namespace stokeskit {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

} // namespace

Direction Direction::exact(const Rational& pim) {
    return {pim.to_double() * kPi, pim};
}

std::string Direction::exact_str() const {
    if (!pi_mult) return {};
    const Rational& r = *pi_mult;
    if (r.is_zero()) return "0";
    std::string num = r.num() == 1 ? "pi" : (r.num() == -1 ? "-pi" : std::to_string(r.num()) + "pi");
    if (r.den() == 1) return num;
    return num + "/" + std::to_string(r.den());
}

Direction Direction::operator+(const Direction& o) const {
    if (pi_mult && o.pi_mult) return Direction::exact(*pi_mult + *o.pi_mult);
    return Direction::numeric(radians + o.radians);
}

Direction Direction::operator-(const Direction& o) const {
    if (pi_mult && o.pi_mult) return Direction::exact(*pi_mult - *o.pi_mult);
    return Direction::numeric(radians - o.radians);
}

Direction Direction::scaled(const Rational& r) const {
    if (pi_mult) return Direction::exact(*pi_mult * r);
    return Direction::numeric(radians * r.to_double());
}

Direction midpoint(const Direction& a, const Direction& b) {
    return (a + b).scaled(Rational(1, 2));
}

bool Sector::contains_angle(double theta) const {
    double span = hi.radians - lo.radians;
    double t = std::fmod(theta - lo.radians, 2 * kPi);
    if (t < 0) t += 2 * kPi;
    return t > 0 && t < span;
}

// ---------------------------------------------------------------------------
// Exact trigonometry on the field generated by sqrt(2) and sqrt(3): enough for
// angles that are multiples of pi/12, which covers every direction produced by
// factors whose leading argument is a multiple of pi/4.

namespace {

struct QuadExt {
    Rational c1, c2, c3, c6; // c1 + c2 sqrt2 + c3 sqrt3 + c6 sqrt6

    bool is_zero() const {
        return c1.is_zero() && c2.is_zero() && c3.is_zero() && c6.is_zero();
    }
    double value() const {
        static const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
        return c1.to_double() + c2.to_double() * s2 + c3.to_double() * s3 + c6.to_double() * s6;
    }
    QuadExt scaled(const Rational& r) const { return {c1 * r, c2 * r, c3 * r, c6 * r}; }
    QuadExt operator-(const QuadExt& o) const {
        return {c1 - o.c1, c2 - o.c2, c3 - o.c3, c6 - o.c6};
    }
};

// cos(p * pi/12) for p in [0, 6]; other p by symmetry.
QuadExt cos_table(long long p) {
    switch (p) {
    case 0: return {Rational(1), {}, {}, {}};
    case 1: return {{}, Rational(1, 4), {}, Rational(1, 4)}; // (sqrt6+sqrt2)/4
    case 2: return {{}, {}, Rational(1, 2), {}};
    case 3: return {{}, Rational(1, 2), {}, {}};
    case 4: return {Rational(1, 2), {}, {}, {}};
    case 5: return {{}, Rational(-1, 4), {}, Rational(1, 4)}; // (sqrt6-sqrt2)/4
    default: return {};                                       // p == 6
    }
}

QuadExt cos_of_twelfths(long long p) {
    p = ((p % 24) + 24) % 24;
    if (p > 12) p = 24 - p;
    if (p <= 6) return cos_table(p);
    return QuadExt{} - cos_table(12 - p);
}

bool exact_cos_sin(const Rational& pim, QuadExt& c, QuadExt& s) {
    // pim * pi must be a multiple of pi/12.
    if (12 % pim.den() != 0) return false;
    long long p = pim.num() * (12 / pim.den());
    c = cos_of_twelfths(p);
    s = cos_of_twelfths(p - 6); // sin t = cos(t - pi/2)
    return true;
}

// Sign of Re(coef * e^{i u}) with exact zero detection when u is an exact
// multiple of pi/12; numeric otherwise (zeros below 1e-13 relative).
int term_real_sign(const QComplex& coef, const std::optional<Rational>& u_pi, double u) {
    if (u_pi) {
        QuadExt c, s;
        if (exact_cos_sin(*u_pi, c, s)) {
            QuadExt v = c.scaled(coef.re) - s.scaled(coef.im);
            if (v.is_zero()) return 0;
            double d = v.value();
            return d > 0 ? 1 : -1;
        }
    }
    double v = coef.re.to_double() * std::cos(u) - coef.im.to_double() * std::sin(u);
    double scale = std::abs(coef.re.to_double()) + std::abs(coef.im.to_double());
    if (std::abs(v) <= 1e-13 * scale) return 0;
    return v > 0 ? 1 : -1;
}

} // namespace

int dominance(const ExponentialFactor& delta, const Direction& theta) {
    long long m = delta.ram();
    for (const auto& [k, c] : delta.terms()) {
        if (k >= 0) break; // only pole terms decide
        std::optional<Rational> u_pi;
        if (theta.pi_mult) u_pi = *theta.pi_mult * Rational(k, m);
        int s = term_real_sign(c, u_pi, static_cast<double>(k) / static_cast<double>(m) *
                                            theta.radians);
        if (s != 0) return s;
    }
    return 0;
}

int dominance(const ExponentialFactor& delta, double theta) {
    return dominance(delta, Direction::numeric(theta));
}

// ---------------------------------------------------------------------------

namespace {

std::optional<Rational> exact_arg_pi(const QComplex& c) {
    // arg(c)/pi is rational exactly for the multiples of pi/4 (Niven).
    const Rational &a = c.re, &b = c.im;
    if (b.is_zero()) return a.sign() > 0 ? Rational(0) : Rational(1);
    if (a.is_zero()) return b.sign() > 0 ? Rational(1, 2) : Rational(3, 2);
    if (a == b) return a.sign() > 0 ? Rational(1, 4) : Rational(5, 4);
    if (a == -b) return a.sign() > 0 ? Rational(7, 4) : Rational(3, 4);
    return std::nullopt;
}

Rational mod_two(Rational r) {
    long long f = (r / Rational(2)).floor();
    return r - Rational(2 * f);
}

} // namespace

std::vector<Direction> stokes_directions(const ExponentialFactor& delta) {
    Rational ord = delta.order();
    if (ord.is_zero())
        throw math_error("factor has no effective pole, so no Stokes directions");
    long long m = delta.ram();
    long long k0 = -delta.terms().begin()->first; // leading exponent is -k0/m
    QComplex c = delta.leading_coefficient();

    std::vector<Direction> out;
    std::optional<Rational> argc_pi = exact_arg_pi(c);
    if (argc_pi) {
        std::vector<Rational> vals;
        for (long long j = 0; j < 2 * k0; ++j) {
            // theta = (arg c - pi/2 - j pi) * m / k0, reduced mod 2 pi
            Rational t = (*argc_pi - Rational(1, 2) - Rational(j)) * Rational(m, k0);
            t = mod_two(t);
            if (std::find(vals.begin(), vals.end(), t) == vals.end()) vals.push_back(t);
        }
        std::sort(vals.begin(), vals.end());
        for (const auto& v : vals) out.push_back(Direction::exact(v));
        return out;
    }

    double argc = std::atan2(c.im.to_double(), c.re.to_double());
    std::vector<double> vals;
    for (long long j = 0; j < 2 * k0; ++j) {
        double t = (argc - kPi / 2 - static_cast<double>(j) * kPi) * static_cast<double>(m) /
                   static_cast<double>(k0);
        t = std::fmod(t, 2 * kPi);
        if (t < 0) t += 2 * kPi;
        bool dup = false;
        for (double v : vals)
            if (std::abs(v - t) < 1e-12 || std::abs(std::abs(v - t) - 2 * kPi) < 1e-12) dup = true;
        if (!dup) vals.push_back(t);
    }
    std::sort(vals.begin(), vals.end());
    for (double v : vals) out.push_back(Direction::numeric(v));
    return out;
}

// ---------------------------------------------------------------------------
// Curve tracking

namespace {

double real_part_at(const ExponentialFactor& delta, double rho, double theta) {
    return delta.evaluate(CoverPoint{rho, theta}).real();
}

StokesCurve track_one(const ExponentialFactor& delta, const Direction& line,
                      const std::vector<double>& rho_grid, double bracket) {
    StokesCurve curve;
    curve.line = line;
    double theta = line.radians;
    for (double rho : rho_grid) {
        double w = bracket;
        double lo = theta - w, hi = theta + w;
        double flo = real_part_at(delta, rho, lo);
        double fhi = real_part_at(delta, rho, hi);
        int expand = 0;
        while (flo * fhi > 0 && expand < 4) {
            w *= 1.5;
            lo = theta - w;
            hi = theta + w;
            flo = real_part_at(delta, rho, lo);
            fhi = real_part_at(delta, rho, hi);
            ++expand;
        }
        if (flo == 0.0 && fhi == 0.0)
            throw math_error("curve degenerates to a band near rho=" + std::to_string(rho));
        if (flo * fhi > 0)
            throw math_error("lost the Stokes curve at rho=" + std::to_string(rho) +
                             " (curve left the disc or curves collided)");
        while (hi - lo > 1e-13) {
            double mid = 0.5 * (lo + hi);
            double fm = real_part_at(delta, rho, mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        theta = 0.5 * (lo + hi);
        curve.points.push_back({rho, theta});
    }
    return curve;
}

void check_collisions(const std::vector<StokesCurve>& curves) {
    if (curves.size() < 2 || curves.front().points.empty()) return;
    for (std::size_t p = 0; p < curves.front().points.size(); ++p)
        for (std::size_t a = 0; a < curves.size(); ++a)
            for (std::size_t b = a + 1; b < curves.size(); ++b) {
                double d = std::abs(curves[a].points[p].theta - curves[b].points[p].theta);
                d = std::min(d, std::abs(d - 2 * kPi));
                if (d < 1e-9)
                    throw math_error("Stokes curves collided at rho=" +
                                     std::to_string(curves[a].points[p].rho));
            }
}

} // namespace

std::vector<StokesCurve> stokes_curves_serial(const ExponentialFactor& delta,
                                              const std::vector<double>& rho_grid) {
    auto dirs = stokes_directions(delta);
    double gap = 2 * kPi / static_cast<double>(dirs.size());
    double bracket = 0.45 * gap;
    std::vector<StokesCurve> out(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i)
        out[i] = track_one(delta, dirs[i], rho_grid, bracket);
    check_collisions(out);
    return out;
}

std::vector<StokesCurve> stokes_curves(const ExponentialFactor& delta,
                                       const std::vector<double>& rho_grid) {
    auto dirs = stokes_directions(delta);
    double gap = 2 * kPi / static_cast<double>(dirs.size());
    double bracket = 0.45 * gap;
    std::vector<StokesCurve> out(dirs.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(dirs.size()); ++i) {
        try {
            out[i] = track_one(delta, dirs[i], rho_grid, bracket);
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    check_collisions(out);
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Sector> sector_cover(const std::vector<Direction>& lines, double rho_max,
                                 double full_turn) {
    if (lines.empty())
        throw math_error("sector cover needs at least one Stokes line");

    std::vector<Direction> ls = lines;
    std::sort(ls.begin(), ls.end(),
              [](const Direction& a, const Direction& b) { return a.radians < b.radians; });
    std::size_t n = ls.size();
    bool turn_exact = std::abs(full_turn - 2 * kPi) < 1e-15;
    Direction turn = turn_exact ? Direction::exact(Rational(2))
                                : Direction::numeric(full_turn);

    if (n == 1) {
        // One sector of width full/2 around the line plus a complementary
        // overlap sector containing no line.
        Direction q = turn.scaled(Rational(1, 4));
        Direction e = turn.scaled(Rational(1, 8));
        std::vector<Sector> out;
        out.push_back({ls[0] - q, ls[0] + q, rho_max});
        out.push_back({ls[0] + e, ls[0] + turn - e, rho_max});
        return out;
    }

    // Minimal cyclic gap fixes eps = gap/4.
    Direction min_gap = (ls[0] + turn) - ls[n - 1];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Direction g = ls[i + 1] - ls[i];
        if (g.radians < min_gap.radians) min_gap = g;
    }
    Direction eps = min_gap.scaled(Rational(1, 4));

    std::vector<Sector> out;
    for (std::size_t i = 0; i < n; ++i) {
        Direction prev = i == 0 ? ls[n - 1] - turn : ls[i - 1];
        Direction next = i + 1 == n ? ls[0] + turn : ls[i + 1];
        out.push_back({midpoint(prev, ls[i]) - eps, midpoint(ls[i], next) + eps, rho_max});
    }
    return out;
}

StokesDiagram build_diagram(const std::vector<ExponentialFactor>& factors, double rho_max) {
    StokesDiagram d;
    d.factors = factors;
    d.rho_max = rho_max;
    int n = static_cast<int>(factors.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            DiagramPair pair;
            pair.i = i + 1;
            pair.j = j + 1;
            pair.delta = combine(factors[i], factors[j], -1);
            if (pair.delta.order().is_zero()) continue; // isomorphic pieces, no lines
            pair.directions = stokes_directions(pair.delta);
            d.pairs.push_back(std::move(pair));
        }

    for (const auto& pair : d.pairs)
        for (const auto& dir : pair.directions) {
            bool dup = false;
            for (const auto& l : d.lines) {
                if (l.pi_mult && dir.pi_mult) {
                    if (*l.pi_mult == *dir.pi_mult) dup = true;
                } else if (std::abs(l.radians - dir.radians) < 1e-12) {
                    dup = true;
                }
            }
            if (!dup) d.lines.push_back(dir);
        }
    std::sort(d.lines.begin(), d.lines.end(),
              [](const Direction& a, const Direction& b) { return a.radians < b.radians; });
    if (!d.lines.empty()) d.cover = sector_cover(d.lines, rho_max);
    return d;
}

} // namespace stokeskit
