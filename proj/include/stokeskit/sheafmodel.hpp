#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stokeskit/factor.hpp"
#include "stokeskit/geometry.hpp"

namespace stokeskit {

// A point of the projective line: finite value or the point at infinity.
struct ExtPoint {
    std::complex<double> value{0.0, 0.0};
    bool infinite = false;

    static ExtPoint at_infinity() { return {.value = {}, .infinite = true}; }
    static ExtPoint finite(std::complex<double> v) { return {.value = v, .infinite = false}; }
};

// Membership in {(x,t) : x in U, Re(t + phi(x)) < c}; false at x = 0 and at
// either infinity tag. Ramified phi is read on the principal branch.
bool sublevel_contains(const ExponentialFactor& phi, double c, const ExtPoint& x,
                       const ExtPoint& t);

// The c-indexed family {Re(t + phi) < c}, represented intensionally by phi.
// Membership is monotone in c.
struct SublevelFamily {
    ExponentialFactor factor;

    bool contains(double c, const ExtPoint& x, const ExtPoint& t) const {
        return sublevel_contains(factor, c, x, t);
    }
};

enum class HomTag { Diagonal, UpperLike, LowerLike, Full, Other };

std::string hom_tag_name(HomTag tag);

struct HomShape {
    int n = 0;
    // (i, j) present means a morphism from summand j to summand i is allowed;
    // 1-based, matching matrix entry (row i, column j).
    std::set<std::pair<int, int>> allowed;
    HomTag tag = HomTag::Diagonal;
};

// Germ-level criterion: a morphism between the sublevel families exists for
// c' >> c iff Re(target - source) is bounded above on the sector near 0
// (the source's sublevel sets must eventually sit inside the target's).
bool hom_exists(const ExponentialFactor& source, const ExponentialFactor& target,
                const Sector& sector);

HomShape hom_shape(const std::vector<ExponentialFactor>& factors, const Sector& sector);

struct OracleGrid {
    std::vector<double> radii = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    int n_theta = 256;
    double c_cap = 1e3; // top rung of the c' - c ladder
};

// Grid supremum of Re delta over the closed sector; the hot kernel behind the
// brute-force oracle, in OpenMP and serial reference versions.
double sector_sup_re(const ExponentialFactor& delta, const Sector& sector,
                     const std::vector<double>& radii, int n_theta);
double sector_sup_re_serial(const ExponentialFactor& delta, const Sector& sector,
                            const std::vector<double>& radii, int n_theta);

bool hom_exists_bruteforce(const ExponentialFactor& source, const ExponentialFactor& target,
                           const Sector& sector, const OracleGrid& grid);
bool hom_exists_bruteforce_serial(const ExponentialFactor& source,
                                  const ExponentialFactor& target, const Sector& sector,
                                  const OracleGrid& grid);

enum class Stratum {
    SublevelFamily,   // {Re(t + phi) < ?}
    XZeroTFinite,     // {x = 0, t != infinity}
    XNonzeroTInfinity // {x != 0, t = infinity}
};

std::string stratum_name(Stratum s);

struct ConstructibleEntry {
    int degree = 0;
    Stratum stratum = Stratum::SublevelFamily;
    ExponentialFactor factor; // set for sublevel strata
    int rank = 1;
};

using ConstructibleDescription = std::vector<ConstructibleEntry>;

// The constructible shape of the solution object attached to e^phi: the
// sublevel family in degree 0 and the two boundary strata in degree 1.
ConstructibleDescription phi_exponential(const ExponentialFactor& phi);

} // namespace stokeskit
