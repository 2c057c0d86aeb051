#include "stokeskit/formal.hpp"

#include <algorithm>
#include <cmath>

#include "stokeskit/errors.hpp"

namespace stokeskit {

namespace {

std::complex<double> normalize_exponent(std::complex<double> lambda) {
    double shift = std::floor(lambda.real());
    return {lambda.real() - shift, lambda.imag()};
}

QComplex normalize_exponent(const QComplex& lambda) {
    return {lambda.re - Rational(lambda.re.floor()), lambda.im};
}

// Laurent-series expansion of num/den around 0, coefficients for exponents
// v .. upto (inclusive), by long division against the lowest term of den.
std::map<long long, QComplex> series_quotient(const LaurentPoly& num, const LaurentPoly& den,
                                              long long upto) {
    long long vd = den.valuation();
    QComplex lead = den.coefficient(vd);
    std::map<long long, QComplex> rem(num.coeffs().begin(), num.coeffs().end());
    std::map<long long, QComplex> q;
    while (!rem.empty() && rem.begin()->first - vd <= upto) {
        long long k = rem.begin()->first - vd;
        QComplex c = rem.begin()->second / lead;
        q[k] = c;
        for (const auto& [j, d] : den.coeffs()) {
            auto it = rem.find(k + j);
            QComplex v = (it == rem.end() ? QComplex() : it->second) - c * d;
            if (v.is_zero()) {
                if (it != rem.end()) rem.erase(it);
            } else {
                rem[k + j] = v;
            }
        }
    }
    return q;
}

// Rank-1 piece of a_1 y' + a_0 y = 0: integrate the pole part of -a_0/a_1
// exactly; the x^-1 coefficient becomes the regular exponent.
FormalItem rank_one_item(const LaurentPoly& a1, const LaurentPoly& a0) {
    std::map<long long, QComplex> s = series_quotient(-a0, a1, -1);
    std::map<long long, QComplex> phi;
    QComplex lambda;
    for (const auto& [k, c] : s) {
        if (k == -1)
            lambda = c;
        else if (k < -1)
            phi[k + 1] = c / QComplex(Rational(k + 1));
    }
    FormalItem item;
    item.factor = ExponentialFactor(1, std::move(phi));
    item.rank = 1;
    QComplex nl = normalize_exponent(lambda);
    item.exponents = {nl.to_complex()};
    item.exact_exponents = {nl};
    return item;
}

// Characteristic/indicial data of one polygon edge: coefficients of
// sum_i c_i gamma^(i - ilo) for integer i on the edge segment.
std::vector<QComplex> edge_coefficients(const DifferentialOperator& op, long long ilo,
                                        long long ihi, long long hlo, const Rational& slope) {
    std::vector<QComplex> cs;
    for (long long i = ilo; i <= ihi; ++i) {
        Rational h = Rational(hlo) + slope * Rational(i - ilo);
        if (!h.is_integer()) {
            cs.push_back(QComplex());
            continue;
        }
        cs.push_back(op.coefficient(static_cast<int>(i)).coefficient(h.floor() + i));
    }
    return cs;
}

// Roots of c0 + c1 t + c2 t^2 (degree <= 2) with exact coefficients. Exact
// rational roots are preferred; irrational quadratics fall back to doubles.
struct EdgeRoot {
    bool exact = false;
    QComplex exact_value;
    std::complex<double> value;
    int multiplicity = 1;
};

std::vector<EdgeRoot> poly_roots(const std::vector<QComplex>& cs) {
    std::vector<EdgeRoot> roots;
    if (cs.size() == 2) {
        EdgeRoot r;
        r.exact = true;
        r.exact_value = -cs[0] / cs[1];
        r.value = r.exact_value.to_complex();
        roots.push_back(r);
        return roots;
    }
    if (cs.size() != 3) throw math_error("edge equation degree exceeds 2");
    const QComplex &a = cs[2], &b = cs[1], &c = cs[0];
    QComplex disc = b * b - QComplex(4) * a * c;
    QComplex sq;
    if (disc.is_zero()) {
        EdgeRoot r;
        r.exact = true;
        r.exact_value = -b / (QComplex(2) * a);
        r.value = r.exact_value.to_complex();
        r.multiplicity = 2;
        roots.push_back(r);
    } else if (qcomplex_sqrt(disc, sq)) {
        for (int s : {1, -1}) {
            EdgeRoot r;
            r.exact = true;
            r.exact_value = (-b + (s > 0 ? sq : -sq)) / (QComplex(2) * a);
            r.value = r.exact_value.to_complex();
            roots.push_back(r);
        }
    } else {
        std::complex<double> sd = std::sqrt(disc.to_complex());
        for (int s : {1, -1}) {
            EdgeRoot r;
            r.value = (-b.to_complex() + (s > 0 ? sd : -sd)) / (2.0 * a.to_complex());
            roots.push_back(r);
        }
    }
    return roots;
}

struct IndicialRoots {
    std::vector<std::complex<double>> values;
    std::vector<QComplex> exact; // empty when any root left the rationals
};

// Exponents of the regular part: roots of the indicial polynomial
// sum c_i * lambda (lambda-1) ... (lambda-i+1) over the points attaining the
// hull minimum.
IndicialRoots indicial_exponents(const DifferentialOperator& op, long long regular_len) {
    long long hmin = 0;
    bool first = true;
    for (const auto& [i, a] : op.coeffs()) {
        long long h = a.valuation() - i;
        if (first || h < hmin) hmin = h, first = false;
    }
    // Expand the falling-factorial combination into monomial coefficients.
    std::vector<QComplex> poly(static_cast<std::size_t>(regular_len) + 1);
    for (const auto& [i, a] : op.coeffs()) {
        if (a.valuation() - i != hmin || i > regular_len) continue;
        QComplex ci = a.coefficient(hmin + i);
        // lambda (lambda-1) ... (lambda-i+1)
        std::vector<QComplex> ff = {QComplex(1)};
        for (int j = 0; j < i; ++j) {
            std::vector<QComplex> next(ff.size() + 1);
            for (std::size_t d = 0; d < ff.size(); ++d) {
                next[d + 1] += ff[d];
                next[d] += ff[d] * QComplex(Rational(-j));
            }
            ff = std::move(next);
        }
        for (std::size_t d = 0; d < ff.size(); ++d) poly[d] += ci * ff[d];
    }
    while (poly.size() > 1 && poly.back().is_zero()) poly.pop_back();
    if (poly.size() - 1 != static_cast<std::size_t>(regular_len))
        throw math_error("indicial polynomial degree mismatch");
    IndicialRoots out;
    bool all_exact = true;
    std::vector<std::pair<std::complex<double>, QComplex>> pairs;
    for (const auto& r : poly_roots(poly))
        for (int k = 0; k < r.multiplicity; ++k) {
            if (r.exact) {
                QComplex e = normalize_exponent(r.exact_value);
                pairs.emplace_back(e.to_complex(), e);
            } else {
                all_exact = false;
                pairs.emplace_back(normalize_exponent(r.value), QComplex());
            }
        }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                                : a.first.imag() < b.first.imag();
    });
    for (const auto& [v, e] : pairs) {
        out.values.push_back(v);
        if (all_exact) out.exact.push_back(e);
    }
    return out;
}

// Collects the formal pieces of P (ramified coordinate, integral slopes) whose
// residual pole order is strictly below bound. Factors come back relative to the
// current twist prefix.
std::vector<FormalItem> follow_branches(const DifferentialOperator& P, const Rational& bound,
                                        int depth) {
    if (depth > 64) throw math_error("twist loop did not converge");
    NewtonPolygon np = newton_polygon(P);
    std::vector<FormalItem> out;

    for (const auto& s : np.slopes) {
        if (!(s.slope < bound)) continue;
        if (s.slope.is_zero()) {
            FormalItem reg;
            reg.factor = ExponentialFactor();
            reg.rank = static_cast<int>(s.length.num());
            IndicialRoots roots = indicial_exponents(P, s.length.num());
            reg.exponents = std::move(roots.values);
            reg.exact_exponents = std::move(roots.exact);
            out.push_back(std::move(reg));
            continue;
        }
        if (!s.slope.is_integer())
            throw math_error("non-integral slope after ramification");
        long long r = s.slope.num();

        // Locate the edge of this slope on the hull.
        long long ilo = -1, ihi = -1, hlo = 0;
        for (std::size_t k = 0; k + 1 < np.vertices.size(); ++k) {
            Rational di = np.vertices[k + 1].first - np.vertices[k].first;
            Rational dh = np.vertices[k + 1].second - np.vertices[k].second;
            if (dh / di == s.slope) {
                ilo = np.vertices[k].first.num();
                ihi = np.vertices[k + 1].first.num();
                hlo = np.vertices[k].second.num();
                break;
            }
        }
        if (ilo < 0) throw math_error("polygon edge lookup failed");

        auto roots = poly_roots(edge_coefficients(P, ilo, ihi, hlo, s.slope));
        for (const auto& root : roots) {
            if (!root.exact)
                throw math_error("irrational characteristic root; not representable with "
                                 "exact rational factor coefficients");
            // Leading factor term c x^-r from the log-derivative root gamma.
            QComplex c = -root.exact_value / QComplex(Rational(r));
            ExponentialFactor lead = ExponentialFactor::monomial(c, Rational(-r));
            DifferentialOperator twisted = P.twist(LaurentPoly(c, -r));
            auto sub = follow_branches(twisted, s.slope, depth + 1);
            int got = 0;
            for (auto& item : sub) {
                got += item.rank;
                item.factor = combine(item.factor, lead, +1);
                out.push_back(std::move(item));
            }
            if (got != root.multiplicity)
                throw math_error("twist loop did not isolate a branch (turning point?)");
        }
    }
    return out;
}

// Pull a decomposition computed in the cover coordinate y (x = y^m) back to x.
FormalItem descend_item(const FormalItem& item, long long m) {
    FormalItem out;
    std::map<long long, QComplex> terms(item.factor.terms().begin(), item.factor.terms().end());
    if (item.factor.ram() != 1) throw math_error("cover factor should be unramified");
    out.factor = ExponentialFactor(m, std::move(terms));
    out.rank = item.rank;
    for (const auto& l : item.exponents)
        out.exponents.push_back(normalize_exponent(l / static_cast<double>(m)));
    for (const auto& l : item.exact_exponents) {
        QComplex scaled(l.re / Rational(m), l.im / Rational(m));
        out.exact_exponents.push_back(normalize_exponent(scaled));
    }
    if (!out.exact_exponents.empty()) {
        out.exponents.clear();
        for (const auto& e : out.exact_exponents) out.exponents.push_back(e.to_complex());
    }
    return out;
}

FormalType normalize_formal(FormalType type) {
    for (auto& item : type.items) {
        item.factor = item.factor.pole_part();
        for (auto& l : item.exponents) l = normalize_exponent(l);
        for (auto& l : item.exact_exponents) l = normalize_exponent(l);
        if (static_cast<int>(item.exponents.size()) != item.rank)
            throw math_error("formal item rank does not match its exponent count");
        if (!item.exact_exponents.empty() &&
            item.exact_exponents.size() != item.exponents.size())
            throw math_error("exact exponent list length mismatch");
    }
    // Merge equal pole parts.
    std::vector<FormalItem> merged;
    for (auto& item : type.items) {
        bool found = false;
        for (auto& m : merged)
            if (m.factor == item.factor) {
                m.rank += item.rank;
                m.exponents.insert(m.exponents.end(), item.exponents.begin(),
                                   item.exponents.end());
                if (!m.exact_exponents.empty() && !item.exact_exponents.empty())
                    m.exact_exponents.insert(m.exact_exponents.end(),
                                             item.exact_exponents.begin(),
                                             item.exact_exponents.end());
                else
                    m.exact_exponents.clear();
                found = true;
                break;
            }
        if (!found) merged.push_back(std::move(item));
    }
    type.items = std::move(merged);
    sort_formal_items(type.items);
    return type;
}

FormalType formal_type_of_operator(const DifferentialOperator& op) {
    int n = op.order();
    if (n < 1) throw math_error("operator of order 0 has no connection attached");
    if (n > 2) throw math_error("automatic decomposition is limited to rank <= 2");

    NewtonPolygon np = newton_polygon(op);
    long long m = ramification_order(np.slopes);

    FormalType type;
    type.ramification = m;
    if (n == 1) {
        if (m != 1) throw math_error("rank-1 slopes are always integral");
        type.items = {rank_one_item(op.coefficient(1), op.coefficient(0))};
        return normalize_formal(std::move(type));
    }

    DifferentialOperator cover_op = m == 1 ? op : op.pullback(m);
    Rational bound = newton_polygon(cover_op).max_slope() + Rational(1);
    auto items = follow_branches(cover_op, bound, 0);
    int total = 0;
    for (const auto& item : items) total += item.rank;
    if (total != n) throw math_error("formal decomposition lost rank (turning point?)");
    for (const auto& item : items) type.items.push_back(descend_item(item, m));
    return normalize_formal(std::move(type));
}

} // namespace

DifferentialOperator cyclic_operator(const SystemSpec& sys, int& pivot) {
    if (sys.size() != 2) throw math_error("cyclic reduction expects a 2x2 system");
    // With u = (y, z), y' = A00 y + A01 z: eliminate z when A01 != 0, else work
    // from the second coordinate.
    int i = 0, j = 1;
    if (sys.entries[0][1].is_zero()) {
        i = 1;
        j = 0;
        if (sys.entries[1][0].is_zero()) throw math_error("system is diagonal");
    }
    const LaurentPoly& aii = sys.entries[i][i];
    const LaurentPoly& aij = sys.entries[i][j];
    const LaurentPoly& aji = sys.entries[j][i];
    const LaurentPoly& ajj = sys.entries[j][j];
    pivot = i;
    std::map<int, LaurentPoly> c;
    c[2] = aij;
    c[1] = -(aij * (aii + ajj) + aij.derivative());
    c[0] = aii * aij.derivative() - aii.derivative() * aij - aij * aij * aji + aii * ajj * aij;
    return DifferentialOperator(std::move(c));
}

FormalType formal_type(const ConnectionSpec& spec) {
    if (const auto* ft = std::get_if<FormalType>(&spec)) return normalize_formal(*ft);
    if (const auto* op = std::get_if<DifferentialOperator>(&spec))
        return formal_type_of_operator(*op);

    const auto& sys = std::get<SystemSpec>(spec);
    if (sys.size() < 1 || sys.size() > 2)
        throw math_error("automatic decomposition is limited to rank <= 2");
    FormalType type;
    type.ramification = 1;
    if (sys.size() == 1 || sys.is_diagonal()) {
        for (int i = 0; i < sys.size(); ++i)
            type.items.push_back(rank_one_item(LaurentPoly(1), -sys.entries[i][i]));
        return normalize_formal(std::move(type));
    }
    int pivot = 0;
    return formal_type(ConnectionSpec(cyclic_operator(sys, pivot)));
}

SystemSpec diagonal_system(const FormalType& type) {
    auto to_rational = [](double v) {
        for (long long den = 1; den <= 1 << 20; den *= 2) {
            double scaled = v * static_cast<double>(den);
            double r = std::round(scaled);
            if (std::abs(scaled - r) < 1e-9 && std::abs(r) < 9e15)
                return Rational(static_cast<long long>(r), den);
        }
        throw math_error("exponent is not recognizable as a dyadic rational");
    };
    SystemSpec sys;
    int n = type.total_rank();
    sys.entries.assign(n, std::vector<LaurentPoly>(n));
    int row = 0;
    for (const auto& item : type.items) {
        if (item.factor.ram() != 1)
            throw math_error("diagonal system needs unramified factors");
        ExponentialFactor dphi = item.factor.derivative();
        LaurentPoly base{std::map<long long, QComplex>(dphi.terms().begin(),
                                                       dphi.terms().end())};
        for (int k = 0; k < item.rank; ++k) {
            QComplex lam = !item.exact_exponents.empty()
                               ? item.exact_exponents[k]
                               : QComplex(to_rational(item.exponents[k].real()),
                                          to_rational(item.exponents[k].imag()));
            sys.entries[row][row] = base + LaurentPoly(lam, -1);
            ++row;
        }
    }
    return sys;
}

std::vector<int> deck_permutation(const FormalType& type) {
    std::vector<int> sigma(type.items.size());
    for (std::size_t i = 0; i < type.items.size(); ++i) {
        ExponentialFactor image = type.items[i].factor.deck_image();
        bool found = false;
        for (std::size_t j = 0; j < type.items.size(); ++j)
            if (type.items[j].factor == image) {
                sigma[i] = static_cast<int>(j);
                found = true;
                break;
            }
        if (!found) throw math_error("formal type is not closed under the deck action");
    }
    return sigma;
}

void sort_formal_items(std::vector<FormalItem>& items) {
    std::sort(items.begin(), items.end(), [](const FormalItem& a, const FormalItem& b) {
        if (a.factor.order() != b.factor.order()) return b.factor.order() < a.factor.order();
        return a.factor.render() < b.factor.render();
    });
}

bool formal_types_close(const FormalType& a, const FormalType& b, double tol) {
    if (a.items.size() != b.items.size()) return false;
    for (std::size_t i = 0; i < a.items.size(); ++i) {
        const auto& x = a.items[i];
        const auto& y = b.items[i];
        if (x.factor != y.factor || x.rank != y.rank) return false;
        auto ex = x.exponents, ey = y.exponents;
        auto lt = [](const auto& p, const auto& q) {
            return p.real() != q.real() ? p.real() < q.real() : p.imag() < q.imag();
        };
        std::sort(ex.begin(), ex.end(), lt);
        std::sort(ey.begin(), ey.end(), lt);
        for (std::size_t k = 0; k < ex.size(); ++k)
            if (std::abs(ex[k] - ey[k]) > tol) return false;
    }
    return true;
}

} // namespace stokeskit
