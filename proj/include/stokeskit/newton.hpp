#pragma once

#include <vector>

#include "stokeskit/connection.hpp"
#include "stokeskit/rational.hpp"

namespace stokeskit {

struct NewtonSlope {
    Rational slope;  // nonnegative
    Rational length; // horizontal extent
};

struct NewtonPolygon {
    // Lower convex hull of {(i, v(a_i) - i) : a_i != 0}, left to right.
    std::vector<std::pair<Rational, Rational>> vertices;
    // Slopes in increasing order. Strictly positive slopes are the pole orders of
    // exponential factors; the slope-0 entry collects the regular part (edges of
    // negative slope contribute to it: their solutions have moderate growth).
    std::vector<NewtonSlope> slopes;

    Rational max_slope() const;
};

NewtonPolygon newton_polygon(const DifferentialOperator& op);

// Least m making every m*slope integral.
long long ramification_order(const std::vector<NewtonSlope>& slopes);

} // namespace stokeskit
