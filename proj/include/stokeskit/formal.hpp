#pragma once

#include "stokeskit/connection.hpp"
#include "stokeskit/newton.hpp"

namespace stokeskit {

// Formal decomposition into exponential-times-regular pieces for rank <= 2 inputs
// (any rank passes through for FormalType inputs). Factors keep only their pole
// parts; exponents are normalized to Re in [0,1).
FormalType formal_type(const ConnectionSpec& spec);

// Scalar operator annihilating the first (or, for a left-column-zero system, the
// second) coordinate of du = A u; used to reduce systems to operators.
DifferentialOperator cyclic_operator(const SystemSpec& sys, int& pivot);

// Diagonal system realizing a FormalType: one row phi' + lambda/x per exponent.
// Requires ram-1 factors and exponents recognizable as small rationals.
SystemSpec diagonal_system(const FormalType& type);

// Deck permutation on items: sigma[i] = index of the factor obtained from item i
// by theta -> theta + 2 pi. Identity for unramified types.
std::vector<int> deck_permutation(const FormalType& type);

// Item ordering used everywhere: decreasing pole order, then render string.
void sort_formal_items(std::vector<FormalItem>& items);

bool formal_types_close(const FormalType& a, const FormalType& b, double tol = 1e-9);

} // namespace stokeskit
