#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stokeskit/factor.hpp"

namespace stokeskit {

// An angle, exact (a rational multiple of pi) whenever the inputs allow it.
// Values live on the real line: sector bounds may be negative or exceed 2*pi,
// which is how arcs crossing the seam are written.
struct Direction {
    double radians = 0.0;
    std::optional<Rational> pi_mult; // radians == pi_mult * pi when set

    static Direction exact(const Rational& pim);
    static Direction numeric(double rad) { return {rad, std::nullopt}; }

    bool is_exact() const { return pi_mult.has_value(); }
    std::string exact_str() const; // "pi/2", "3pi/2", "0"

    Direction operator+(const Direction& o) const;
    Direction operator-(const Direction& o) const;
    Direction scaled(const Rational& r) const;
};

Direction midpoint(const Direction& a, const Direction& b);

// Open arc (lo, hi) with lo < hi as reals, bounded by radius rho_max.
struct Sector {
    Direction lo;
    Direction hi;
    double rho_max = 1.0;

    double width() const { return hi.radians - lo.radians; }
    Direction bisector() const { return midpoint(lo, hi); }
    bool contains_angle(double theta) const;        // mod the full turn
    bool strictly_contains_angle(double theta) const { return contains_angle(theta); }
};

// Asymptotic sign of Re delta(rho e^{i theta}) as rho -> 0+, by exact
// term-by-term inspection in decreasing pole order; 0 iff every pole term
// contributes zero real part along the ray.
int dominance(const ExponentialFactor& delta, const Direction& theta);
int dominance(const ExponentialFactor& delta, double theta);

// Distinct Stokes rays of delta (ord > 0 required), sorted in [0, 2*pi),
// exact when arg of the leading coefficient is a rational multiple of pi.
std::vector<Direction> stokes_directions(const ExponentialFactor& delta);

struct CurvePoint {
    double rho = 0.0;
    double theta = 0.0;
};

struct StokesCurve {
    Direction line;                 // the limit tangent half-line
    std::vector<CurvePoint> points; // one per grid radius, grid order
};

// Tracks Re delta = 0 by per-radius bisection in theta, seeded at each Stokes
// direction and continued from the previous radius. Throws math_error naming
// the radius when a root is lost or two curves collide.
std::vector<StokesCurve> stokes_curves(const ExponentialFactor& delta,
                                       const std::vector<double>& rho_grid);
std::vector<StokesCurve> stokes_curves_serial(const ExponentialFactor& delta,
                                              const std::vector<double>& rho_grid);

// Sectors around each line: from the midpoint with the previous line minus eps
// to the midpoint with the next line plus eps, eps = (minimal gap)/4. A single
// line gets a half-turn sector plus a complementary overlap sector.
std::vector<Sector> sector_cover(const std::vector<Direction>& lines, double rho_max,
                                 double full_turn = 6.283185307179586476925286766559);

struct DiagramPair {
    int i = 0; // 1-based factor indices, i < j
    int j = 0;
    ExponentialFactor delta; // phi_i - phi_j
    std::vector<Direction> directions;
};

struct StokesDiagram {
    std::vector<ExponentialFactor> factors;
    std::vector<DiagramPair> pairs;
    std::vector<Direction> lines; // merged over pairs, sorted counterclockwise
    std::vector<Sector> cover;    // empty iff lines empty
    double rho_max = 1.0;
};

StokesDiagram build_diagram(const std::vector<ExponentialFactor>& factors, double rho_max = 1.0);

} // namespace stokeskit
