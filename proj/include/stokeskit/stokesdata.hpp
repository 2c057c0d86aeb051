#pragma once

#include <string>
#include <vector>

#include "stokeskit/cmatrix.hpp"
#include "stokeskit/formal.hpp"
#include "stokeskit/geometry.hpp"
#include "stokeskit/sheafmodel.hpp"

namespace stokeskit {

// Stokes structure: formal data, the diagram of the pairwise factor differences,
// and one gluing matrix per Stokes line in counterclockwise order. Matrix entry
// (i, j) is a morphism from summand j to summand i; blocks follow the formal
// item order.
struct StokesStructure {
    FormalType formal;
    StokesDiagram diagram;
    std::vector<CMatrix> matrices;
    CMatrix formal_monodromy; // starts as the canonical one; normal_form may fold
                              // residual diagonal factors into it
    int base_index = 1;

    int size() const { return formal.total_rank(); }
};

// Block offsets of the formal items inside the total rank.
std::vector<int> block_offsets(const FormalType& formal);

// Overlap arc that matrix position k (0-based, counterclockwise from the base
// sector) glues across; the seam overlap comes back with its +2 pi lift.
Sector overlap_sector(const StokesDiagram& d, int base_index, std::size_t position);

// P_sigma * diag(e^{2 pi i lambda}), sigma the deck permutation: the matrix by
// which the formal frame re-seeds across the 2 pi seam.
CMatrix canonical_formal_monodromy(const FormalType& formal);

StokesStructure make_structure(const FormalType& formal, std::vector<CMatrix> matrices,
                               double rho_max = 1.0);

struct Violation {
    int matrix_index = 0; // 1-based; 0 = structural
    int block_i = 0;
    int block_j = 0;
    std::string what;
};

// Invertibility and overlap triangularity; with require_unit_diagonal also the
// normal-form condition that diagonal blocks equal the identity.
std::vector<Violation> validate(const StokesStructure& s, bool require_unit_diagonal = false,
                                double tol = 0.0);

// Mf * A_N * ... * A_1 read counterclockwise from the base sector. Throws
// validation_error when validate() reports violations.
CMatrix glue_monodromy(const StokesStructure& s);

struct Trivialization {
    int sector = 1; // 1-based sector index
    CMatrix alpha;
};

// A_i = alpha_{i+1}^{-1} alpha_i (cyclically); the would-be matrices must pass
// validate or a validation_error carries the violations.
StokesStructure extract_from_cover(const FormalType& formal,
                                   const std::vector<Trivialization>& trivializations,
                                   double rho_max = 1.0);

// Absorbs the diagonal blocks of every matrix into the trivializations
// (right-to-left sweep); the residual block-diagonal factor lands in the formal
// monodromy. Idempotent; base_index becomes 1.
StokesStructure normal_form(const StokesStructure& s);

// Re-anchor the gluing data at base sector (1 + shift); matrices that cross the
// seam pick up an Mf-conjugation.
StokesStructure rebase(const StokesStructure& s, int shift);

// Equality of normal forms up to simultaneous block-diagonal conjugation and
// cyclic re-basing, decided numerically at the given tolerance.
bool equivalent(const StokesStructure& a, const StokesStructure& b, double tol = 1e-9);

} // namespace stokeskit
