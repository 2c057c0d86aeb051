#include "stokeskit/stokesdata.hpp"

#include <algorithm>
#include <cmath>

#include "stokeskit/errors.hpp"

namespace stokeskit {

namespace {

constexpr double kTau = 6.28318530717958647692528676655900577;

std::vector<ExponentialFactor> factor_list(const FormalType& formal) {
    std::vector<ExponentialFactor> fs;
    for (const auto& item : formal.items) fs.push_back(item.factor);
    return fs;
}

// The overlap arc between consecutive cover sectors, written with the lift that
// continues counterclockwise past the last line for the seam overlap.
Sector overlap_between(const StokesDiagram& d, std::size_t k) {
    std::size_t ns = d.cover.size();
    if (k + 1 < ns) return {d.cover[k + 1].lo, d.cover[k].hi, d.rho_max};
    Direction lifted = d.cover[0].lo + Direction::exact(Rational(2));
    return {lifted, d.cover[ns - 1].hi, d.rho_max};
}

} // namespace

// Matrices are listed counterclockwise starting at the base sector; position k
// (0-based) glues across the geometric overlap (base-1+k) mod N.
Sector overlap_sector(const StokesDiagram& d, int base_index, std::size_t k) {
    if (d.cover.size() != d.lines.size()) {
        // Single-line cover: two sectors; the per-line matrix is validated against
        // the line-side overlap (both overlaps carry the same dominance pattern).
        return {d.cover[1].lo, d.cover[0].hi, d.rho_max};
    }
    std::size_t n = d.lines.size();
    return overlap_between(d, (static_cast<std::size_t>(base_index) - 1 + k) % n);
}

std::vector<int> block_offsets(const FormalType& formal) {
    std::vector<int> off = {0};
    for (const auto& item : formal.items) off.push_back(off.back() + item.rank);
    return off;
}

CMatrix canonical_formal_monodromy(const FormalType& formal) {
    auto sigma = deck_permutation(formal);
    auto off = block_offsets(formal);
    int n = formal.total_rank();
    CMatrix mf(n, n);
    for (std::size_t i = 0; i < formal.items.size(); ++i) {
        int target = sigma[i];
        if (formal.items[target].rank != formal.items[i].rank)
            throw math_error("deck-paired items have mismatched ranks");
        for (int k = 0; k < formal.items[i].rank; ++k) {
            std::complex<double> lambda = formal.items[i].exponents[k];
            mf.at(off[target] + k, off[i] + k) =
                std::exp(std::complex<double>(0.0, kTau) * lambda);
        }
    }
    return mf;
}

StokesStructure make_structure(const FormalType& formal, std::vector<CMatrix> matrices,
                               double rho_max) {
    StokesStructure s;
    s.formal = formal_type(ConnectionSpec(formal)); // normalized passthrough
    s.diagram = build_diagram(factor_list(s.formal), rho_max);
    s.matrices = std::move(matrices);
    s.formal_monodromy = canonical_formal_monodromy(s.formal);
    s.base_index = 1;
    return s;
}

std::vector<Violation> validate(const StokesStructure& s, bool require_unit_diagonal,
                                double tol) {
    std::vector<Violation> out;
    const auto off = block_offsets(s.formal);
    int n = s.formal.total_rank();
    int p = static_cast<int>(s.formal.items.size());

    if (s.matrices.size() != s.diagram.lines.size()) {
        out.push_back({0, 0, 0, "expected one matrix per Stokes line (" +
                                    std::to_string(s.diagram.lines.size()) + ", got " +
                                    std::to_string(s.matrices.size()) + ")"});
        return out;
    }

    for (std::size_t k = 0; k < s.matrices.size(); ++k) {
        const CMatrix& a = s.matrices[k];
        int idx = static_cast<int>(k) + 1;
        if (a.rows() != n || a.cols() != n) {
            out.push_back({idx, 0, 0, "matrix size does not match total rank"});
            continue;
        }
        if (std::abs(a.det()) < 1e-12) out.push_back({idx, 0, 0, "matrix is singular"});

        HomShape shape =
            hom_shape(factor_list(s.formal), overlap_sector(s.diagram, s.base_index, k));
        for (int bi = 0; bi < p; ++bi)
            for (int bj = 0; bj < p; ++bj) {
                if (shape.allowed.count({bi + 1, bj + 1})) continue;
                double mx = 0.0;
                for (int r = off[bi]; r < off[bi + 1]; ++r)
                    for (int c = off[bj]; c < off[bj + 1]; ++c)
                        mx = std::max(mx, std::abs(a.at(r, c)));
                if (mx > tol)
                    out.push_back({idx, bi + 1, bj + 1,
                                   "block not allowed by the overlap Hom shape"});
            }
        if (require_unit_diagonal)
            for (int bi = 0; bi < p; ++bi) {
                double mx = 0.0;
                for (int r = off[bi]; r < off[bi + 1]; ++r)
                    for (int c = off[bi]; c < off[bi + 1]; ++c)
                        mx = std::max(mx, std::abs(a.at(r, c) - (r == c ? 1.0 : 0.0)));
                if (mx > std::max(tol, 1e-12))
                    out.push_back({idx, bi + 1, bi + 1, "diagonal block is not the identity"});
            }
    }
    return out;
}

namespace {

void require_valid(const StokesStructure& s, const char* where) {
    auto v = validate(s);
    if (!v.empty())
        throw validation_error(std::string(where) + ": " + v.front().what + " (matrix " +
                               std::to_string(v.front().matrix_index) + ", block " +
                               std::to_string(v.front().block_i) + "," +
                               std::to_string(v.front().block_j) + ")");
}

} // namespace

CMatrix glue_monodromy(const StokesStructure& s) {
    require_valid(s, "glue_monodromy");
    CMatrix m = s.formal_monodromy;
    for (std::size_t k = s.matrices.size(); k-- > 0;) m = m * s.matrices[k];
    return m;
}

StokesStructure extract_from_cover(const FormalType& formal,
                                   const std::vector<Trivialization>& trivializations,
                                   double rho_max) {
    FormalType ft = formal_type(ConnectionSpec(formal));
    StokesDiagram diagram = build_diagram(factor_list(ft), rho_max);
    std::size_t nsec = diagram.cover.size();
    if (trivializations.size() != nsec + 1)
        throw math_error("need one trivialization per cover sector plus the re-read of "
                         "sector 1 across the seam (" +
                         std::to_string(nsec + 1) + " total)");

    std::vector<CMatrix> alphas(trivializations.size());
    for (const auto& t : trivializations) {
        if (t.sector < 1 || t.sector > static_cast<int>(trivializations.size()))
            throw math_error("trivialization sector index out of range");
        alphas[t.sector - 1] = t.alpha;
    }

    std::vector<CMatrix> transitions;
    for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
        transitions.push_back(alphas[i + 1].inverse() * alphas[i]);

    std::vector<CMatrix> matrices;
    if (diagram.lines.size() == nsec) {
        matrices = std::move(transitions);
    } else {
        // Single-line cover: fold the line-free transition into the per-line matrix.
        CMatrix a = transitions[0];
        for (std::size_t i = 1; i < transitions.size(); ++i) a = transitions[i] * a;
        matrices.push_back(a);
    }

    StokesStructure s = make_structure(ft, std::move(matrices), rho_max);

    // Inversion round-off lands in forbidden blocks; scrub it before judging.
    // Long trivialization chains condition the products, so the bound is loose;
    // genuinely inconsistent data sits orders of magnitude above it.
    auto off = block_offsets(s.formal);
    std::vector<ExponentialFactor> fs = factor_list(s.formal);
    for (std::size_t k = 0; k < s.matrices.size(); ++k) {
        double noise = 1e-8 * std::max(1.0, s.matrices[k].norm_inf());
        HomShape shape = hom_shape(fs, overlap_sector(s.diagram, 1, k));
        for (std::size_t bi = 0; bi + 1 < off.size(); ++bi)
            for (std::size_t bj = 0; bj + 1 < off.size(); ++bj) {
                if (shape.allowed.count({static_cast<int>(bi) + 1, static_cast<int>(bj) + 1}))
                    continue;
                for (int r = off[bi]; r < off[bi + 1]; ++r)
                    for (int c = off[bj]; c < off[bj + 1]; ++c)
                        if (std::abs(s.matrices[k].at(r, c)) < noise)
                            s.matrices[k].at(r, c) = 0.0;
            }
    }
    require_valid(s, "extract_from_cover");
    return s;
}

namespace {

CMatrix diagonal_blocks(const CMatrix& a, const std::vector<int>& off) {
    CMatrix d(a.rows(), a.cols());
    for (std::size_t b = 0; b + 1 < off.size(); ++b)
        for (int r = off[b]; r < off[b + 1]; ++r)
            for (int c = off[b]; c < off[b + 1]; ++c) d.at(r, c) = a.at(r, c);
    return d;
}

} // namespace

StokesStructure rebase(const StokesStructure& s, int shift) {
    int nm = static_cast<int>(s.matrices.size());
    StokesStructure out = s;
    if (nm == 0 || shift % nm == 0) return out;
    shift = ((shift % nm) + nm) % nm;
    CMatrix mf_inv = s.formal_monodromy.inverse();
    for (int k = 0; k < nm; ++k) {
        int src = k + shift;
        // matrices wrapped past the seam pick up the Mf twist: A_{j+N} = Mf^-1 A_j Mf
        out.matrices[k] = src < nm
                              ? s.matrices[src]
                              : mf_inv * s.matrices[src - nm] * s.formal_monodromy;
    }
    out.base_index = (s.base_index - 1 + shift) % nm + 1;
    return out;
}

StokesStructure normal_form(const StokesStructure& s) {
    int nm = static_cast<int>(s.matrices.size());
    StokesStructure out = s;
    if (s.base_index != 1 && nm > 0) out = rebase(s, nm - (s.base_index - 1) % nm);
    out.base_index = 1;
    require_valid(out, "normal_form");
    const auto off = block_offsets(out.formal);
    int n = out.formal.total_rank();
    CMatrix b = CMatrix::identity(n);
    for (auto& a : out.matrices) {
        CMatrix bnext = diagonal_blocks(a, off) * b;
        a = bnext.inverse() * a * b;
        b = std::move(bnext);
    }
    out.formal_monodromy = out.formal_monodromy * b;
    out.base_index = 1;
    return out;
}

namespace {

// Solve D X_k = Y_k D for block-diagonal D in least squares via normal equations
// and inverse power iteration on the smallest eigenvector.
bool conjugation_solve(const std::vector<CMatrix>& xs, const std::vector<CMatrix>& ys,
                       const std::vector<int>& off, double tol) {
    int n = off.back();
    // Enumerate unknown block entries of D.
    std::vector<std::pair<int, int>> slots;
    for (std::size_t b = 0; b + 1 < off.size(); ++b)
        for (int r = off[b]; r < off[b + 1]; ++r)
            for (int c = off[b]; c < off[b + 1]; ++c) slots.emplace_back(r, c);
    int p = static_cast<int>(slots.size());

    // Rows of K: equations (D X - Y D)(r, c) = 0 for every matrix pair.
    std::vector<std::vector<std::complex<double>>> krows;
    for (std::size_t m = 0; m < xs.size(); ++m)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                std::vector<std::complex<double>> row(p);
                for (int s = 0; s < p; ++s) {
                    auto [dr, dc] = slots[s];
                    std::complex<double> v = 0.0;
                    if (dr == r) v += xs[m].at(dc, c);
                    if (dc == c) v -= ys[m].at(r, dr);
                    row[s] = v;
                }
                krows.push_back(std::move(row));
            }

    CMatrix g(p, p); // K^H K
    for (const auto& row : krows)
        for (int a = 0; a < p; ++a)
            for (int bcol = 0; bcol < p; ++bcol)
                g.at(a, bcol) += std::conj(row[a]) * row[bcol];

    double scale = std::max(g.norm_inf(), 1e-30);
    for (int i = 0; i < p; ++i) g.at(i, i) += scale * 1e-14;
    CMatrix ginv;
    try {
        ginv = g.inverse();
    } catch (const math_error&) {
        return false;
    }
    CMatrix v(p, 1);
    for (int i = 0; i < p; ++i) v.at(i, 0) = 1.0 / std::sqrt(static_cast<double>(p));
    for (int it = 0; it < 60; ++it) {
        v = ginv * v;
        double nv = 0.0;
        for (int i = 0; i < p; ++i) nv += std::norm(v.at(i, 0));
        nv = std::sqrt(nv);
        if (nv < 1e-290) return false;
        for (int i = 0; i < p; ++i) v.at(i, 0) /= nv;
    }

    CMatrix d(n, n);
    for (int s = 0; s < p; ++s) d.at(slots[s].first, slots[s].second) = v.at(s, 0);
    if (std::abs(d.det()) < 1e-9) return false;
    CMatrix dinv = d.inverse();
    for (std::size_t m = 0; m < xs.size(); ++m) {
        CMatrix resid = d * xs[m] - ys[m] * d;
        double ref = std::max(1.0, xs[m].norm_inf()) * std::max(1.0, d.norm_inf());
        if (resid.norm_inf() > tol * ref * 10.0) return false;
        CMatrix check = dinv * ys[m] * d - xs[m];
        if (check.norm_inf() > tol * std::max(1.0, xs[m].norm_inf()) * 100.0) return false;
    }
    return true;
}

bool phases_match(const std::vector<std::complex<double>>& a,
                  const std::vector<std::complex<double>>& b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& la : a) {
        std::complex<double> pa = std::exp(std::complex<double>(0.0, kTau) * la);
        bool ok = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            std::complex<double> pb = std::exp(std::complex<double>(0.0, kTau) * b[j]);
            if (std::abs(pa - pb) < tol) {
                used[j] = true;
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

} // namespace

bool equivalent(const StokesStructure& a, const StokesStructure& b, double tol) {
    if (a.diagram.lines.size() != b.diagram.lines.size())
        throw validation_error("equivalent: mismatched diagrams");
    for (std::size_t k = 0; k < a.diagram.lines.size(); ++k)
        if (std::abs(a.diagram.lines[k].radians - b.diagram.lines[k].radians) > 1e-9)
            throw validation_error("equivalent: mismatched diagrams");

    // Items are canonically sorted and factors are pairwise distinct, so the
    // matching permutation is forced by factor equality.
    if (a.formal.items.size() != b.formal.items.size()) return false;
    for (std::size_t i = 0; i < a.formal.items.size(); ++i) {
        const auto& x = a.formal.items[i];
        const auto& y = b.formal.items[i];
        if (x.factor != y.factor || x.rank != y.rank) return false;
        if (!phases_match(x.exponents, y.exponents, tol * 10)) return false;
    }

    StokesStructure na = normal_form(a);
    StokesStructure nb = normal_form(b);
    const auto off = block_offsets(na.formal);
    int nm = static_cast<int>(na.matrices.size());

    // Cyclic re-basing is only shape-consistent when the wrap twist preserves
    // block patterns, so the rotation search is limited to unramified types.
    int shifts = na.formal.ramification == 1 ? std::max(nm, 1) : 1;
    for (int shift = 0; shift < shifts; ++shift) {
        StokesStructure nbs = shift == 0 ? nb : rebase(nb, shift);
        std::vector<CMatrix> xs = na.matrices;
        std::vector<CMatrix> ys = nbs.matrices;
        xs.push_back(na.formal_monodromy);
        ys.push_back(nbs.formal_monodromy);
        if (conjugation_solve(xs, ys, off, tol)) return true;
    }
    return false;
}

} // namespace stokeskit
