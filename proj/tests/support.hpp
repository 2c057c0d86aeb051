#pragma once

// Shared generators for the Stokes-structure test suites.

#include <random>

#include "stokeskit/stokesdata.hpp"

namespace stokeskit::testing {

inline ExponentialFactor random_pole_part(std::mt19937& rng, int max_ord) {
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

// Unramified formal type with pairwise distinct pole parts, <= max_factors
// items, total rank <= max_rank.
inline FormalType random_formal(std::mt19937& rng, int max_factors = 3, int max_rank = 4,
                                bool allow_regular = true) {
    FormalType ft;
    int nf = 1 + static_cast<int>(rng() % max_factors);
    int budget = max_rank;
    for (int i = 0; i < nf; ++i) {
        FormalItem item;
        for (int tries = 0; tries < 64; ++tries) {
            ExponentialFactor cand = (allow_regular && i == 0 && rng() % 4 == 0)
                                         ? ExponentialFactor()
                                         : random_pole_part(rng, 3);
            bool dup = false;
            for (const auto& it : ft.items)
                if (it.factor == cand) dup = true;
            if (!dup) {
                item.factor = cand;
                break;
            }
        }
        int max_m = std::min(budget - (nf - 1 - i), 2);
        if (max_m < 1) break;
        item.rank = 1 + static_cast<int>(rng() % max_m);
        budget -= item.rank;
        for (int k = 0; k < item.rank; ++k) {
            QComplex lam(Rational(static_cast<long long>(rng() % 8), 8),
                         Rational(static_cast<long long>(rng() % 5) - 2, 4));
            item.exact_exponents.push_back(lam);
            item.exponents.push_back(lam.to_complex());
        }
        ft.items.push_back(std::move(item));
        if (budget == 0) break;
    }
    return ft;
}

// Valid structure: identity diagonal blocks plus random entries exactly in the
// blocks each overlap allows.
inline StokesStructure random_valid_structure(std::mt19937& rng, const FormalType& formal_in,
                                              double entry_scale = 1.0) {
    FormalType formal = formal_type(ConnectionSpec(formal_in));
    std::vector<ExponentialFactor> fs;
    for (const auto& item : formal.items) fs.push_back(item.factor);
    StokesDiagram diagram = build_diagram(fs, 1.0);
    auto off = block_offsets(formal);
    int n = formal.total_rank();
    std::uniform_real_distribution<double> u(-entry_scale, entry_scale);

    std::vector<CMatrix> mats;
    for (std::size_t k = 0; k < diagram.lines.size(); ++k) {
        CMatrix a = CMatrix::identity(n);
        HomShape shape = hom_shape(fs, overlap_sector(diagram, 1, k));
        for (const auto& [i, j] : shape.allowed) {
            if (i == j) continue;
            for (int r = off[i - 1]; r < off[i]; ++r)
                for (int c = off[j - 1]; c < off[j]; ++c) a.at(r, c) = {u(rng), u(rng)};
        }
        mats.push_back(std::move(a));
    }
    return make_structure(formal, std::move(mats), 1.0);
}

// The trivializations alpha_1 = I, alpha_{k+1} = alpha_k A_k^{-1}, including the
// re-read of sector 1 across the seam.
inline std::vector<Trivialization> trivializations_of(const StokesStructure& s) {
    std::vector<Trivialization> out;
    int n = s.formal.total_rank();
    CMatrix alpha = CMatrix::identity(n);
    out.push_back({1, alpha});
    for (std::size_t k = 0; k < s.matrices.size(); ++k) {
        alpha = alpha * s.matrices[k].inverse();
        out.push_back({static_cast<int>(k) + 2, alpha});
    }
    return out;
}

} // namespace stokeskit::testing
