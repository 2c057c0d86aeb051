#include "stokeskit/numstokes.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "stokeskit/errors.hpp"
#include "stokeskit/formal.hpp"
#include "stokeskit/newton.hpp"

namespace stokeskit {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Right-hand side du = A(x) u for every ConnectionSpec shape.

class RhsEval {
public:
    explicit RhsEval(const ConnectionSpec& spec) {
        if (const auto* op = std::get_if<DifferentialOperator>(&spec)) {
            op_ = *op;
            size_ = op_->order();
            if (size_ < 1) throw math_error("operator of order 0 cannot be integrated");
        } else if (const auto* sys = std::get_if<SystemSpec>(&spec)) {
            sys_ = *sys;
            size_ = sys_->size();
        } else {
            throw math_error("FormalSum inputs carry no analytic connection to integrate");
        }
    }

    int size() const { return size_; }

    CMatrix eval(std::complex<double> x) const {
        CMatrix a(size_, size_);
        if (sys_) {
            for (int i = 0; i < size_; ++i)
                for (int j = 0; j < size_; ++j) a.at(i, j) = sys_->entries[i][j].evaluate(x);
            return a;
        }
        int n = size_;
        std::complex<double> top = op_->coefficient(n).evaluate(x);
        if (std::abs(top) < 1e-280) throw math_error("leading coefficient vanished on the path");
        for (int i = 0; i + 1 < n; ++i) a.at(i, i + 1) = 1.0;
        for (int j = 0; j < n; ++j) a.at(n - 1, j) = -op_->coefficient(j).evaluate(x) / top;
        return a;
    }

private:
    std::optional<DifferentialOperator> op_;
    std::optional<SystemSpec> sys_;
    int size_ = 0;
};

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) over one straight segment.

CMatrix add_scaled(CMatrix base,
                   std::initializer_list<std::pair<double, const CMatrix*>> terms) {
    for (const auto& [w, m] : terms)
        for (int i = 0; i < base.rows(); ++i)
            for (int j = 0; j < base.cols(); ++j) base.at(i, j) += w * m->at(i, j);
    return base;
}

void rk_segment(const RhsEval& rhs, std::complex<double> from, std::complex<double> to,
                CMatrix& y, const IntegrationConfig& cfg) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    std::complex<double> dir = to - from;
    auto f = [&](double s, const CMatrix& v) { return rhs.eval(from + s * dir) * v * dir; };

    double s = 0.0, h = std::min(0.1, cfg.max_step);
    while (s < 1.0) {
        h = std::min({h, 1.0 - s, cfg.max_step});
        CMatrix k1 = f(s, y);
        bool accepted = false;
        while (!accepted) {
            CMatrix k2 = f(s + c2 * h, add_scaled(y, {{a21 * h, &k1}}));
            CMatrix k3 = f(s + c3 * h, add_scaled(y, {{a31 * h, &k1}, {a32 * h, &k2}}));
            CMatrix k4 =
                f(s + c4 * h, add_scaled(y, {{a41 * h, &k1}, {a42 * h, &k2}, {a43 * h, &k3}}));
            CMatrix k5 = f(s + c5 * h, add_scaled(y, {{a51 * h, &k1},
                                                      {a52 * h, &k2},
                                                      {a53 * h, &k3},
                                                      {a54 * h, &k4}}));
            CMatrix k6 = f(s + h, add_scaled(y, {{a61 * h, &k1},
                                                 {a62 * h, &k2},
                                                 {a63 * h, &k3},
                                                 {a64 * h, &k4},
                                                 {a65 * h, &k5}}));
            CMatrix y5 = add_scaled(y, {{b1 * h, &k1},
                                        {b3 * h, &k3},
                                        {b4 * h, &k4},
                                        {b5 * h, &k5},
                                        {b6 * h, &k6}});
            CMatrix k7 = f(s + h, y5);
            CMatrix err = add_scaled(CMatrix(y.rows(), y.cols()), {{e1 * h, &k1},
                                                                   {e3 * h, &k3},
                                                                   {e4 * h, &k4},
                                                                   {e5 * h, &k5},
                                                                   {e6 * h, &k6},
                                                                   {e7 * h, &k7}});
            double scale = cfg.tol_abs + cfg.tol * std::max(y.norm_inf(), y5.norm_inf());
            double enorm = err.norm_inf() / scale;
            if (enorm <= 1.0) {
                s += h;
                y = std::move(y5);
                accepted = true;
                double grow = enorm < 1e-12 ? 5.0 : 0.9 * std::pow(enorm, -0.2);
                h *= std::clamp(grow, 0.2, 5.0);
            } else {
                h *= std::clamp(0.9 * std::pow(enorm, -0.2), 0.1, 0.9);
                if (h < cfg.min_step)
                    throw math_error("integration step underflow at arclength " +
                                     std::to_string(s) + " of a segment");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Exact formal-solution series: one column per (factor, exponent slot) pair.

struct SeedColumn {
    ExponentialFactor phi;              // x-coordinate factor of this branch
    QComplex lambda;                    // exact x-exponent
    std::vector<QComplex> u;            // w-series 1 + u_1 w + ... (w^m = x)
    long long m = 1;                    // cover degree
    int item = 0;                       // formal item this column belongs to
};

LaurentPoly lift_factor(const ExponentialFactor& f, long long m) {
    if (m % f.ram() != 0) throw math_error("factor ramification does not divide the cover");
    long long scale = m / f.ram();
    std::map<long long, QComplex> c;
    for (const auto& [k, v] : f.terms()) c.emplace(k * scale, v);
    return LaurentPoly(std::move(c));
}

// Power-series coefficients of the twisted equation's flat solution, solving
// sum_k u_k f(k, s-k) = 0 level by level. The exponents carried by the formal
// type are normalized mod 1, so the series may start at a positive power w^K;
// K is the first root of the leading symbol.
std::vector<QComplex> flat_series(const DifferentialOperator& q, int n_terms,
                                  const std::string& label, std::vector<std::string>* notes) {
    long long dmin = 0;
    bool first = true;
    for (const auto& [j, b] : q.coeffs()) {
        long long d = b.valuation() - j;
        if (first || d < dmin) dmin = d, first = false;
    }
    auto f = [&](long long k, long long d) {
        QComplex sum;
        for (const auto& [j, b] : q.coeffs()) {
            QComplex fall(1);
            for (int t = 0; t < j; ++t) fall *= QComplex(Rational(k - t));
            sum += fall * b.coefficient(d + j);
        }
        return sum;
    };
    long long lead = -1;
    for (long long k = 0; k <= 128; ++k)
        if (f(k, dmin).is_zero()) {
            lead = k;
            break;
        }
    if (lead < 0)
        throw math_error("asymptotic seed: chosen (phi, lambda) is not a formal branch");

    std::vector<QComplex> u(static_cast<std::size_t>(lead) + 1);
    u.back() = QComplex(1);
    for (long long k = lead + 1; k <= lead + n_terms; ++k) {
        try {
            QComplex rest;
            for (long long kp = lead; kp < k; ++kp) rest += u[kp] * f(kp, dmin + k - kp);
            QComplex head = f(k, dmin);
            if (head.is_zero()) {
                if (rest.is_zero()) {
                    u.push_back(QComplex()); // undetermined slot, take 0
                    continue;
                }
                if (notes)
                    notes->push_back("resonance in the recursion for " + label +
                                     "; column truncated to its leading term");
                u.resize(static_cast<std::size_t>(lead) + 1);
                return u;
            }
            u.push_back(-(rest / head));
        } catch (const std::overflow_error&) {
            if (notes)
                notes->push_back("series coefficients outgrew 64-bit rationals for " + label +
                                 " at order " + std::to_string(k) + "; truncated there");
            break;
        }
    }
    return u;
}

struct SeedPlan {
    std::vector<SeedColumn> columns; // in block order
    long long m = 1;
    // System column assembly: pivot row carries the scalar solution y, the other
    // row is (y' - a_pp y)/a_pq.
    bool from_system = false;
    int pivot = 0;
    SystemSpec system;
    bool diagonal = false;
    std::vector<int> diag_row; // row carrying each diagonal column
};

SeedColumn build_column(const DifferentialOperator& cover_op, const ExponentialFactor& phi,
                        const QComplex& lambda, long long m, int item, int n_terms,
                        std::vector<std::string>* notes) {
    SeedColumn col;
    col.phi = phi;
    col.lambda = lambda;
    col.m = m;
    col.item = item;
    LaurentPoly g = lift_factor(phi, m).derivative() +
                    LaurentPoly(QComplex(lambda.re * Rational(m), lambda.im * Rational(m)), -1);
    DifferentialOperator q = cover_op.twist_log(g);
    col.u = flat_series(q, n_terms, phi.is_zero() ? "regular branch" : phi.render(), notes);
    return col;
}

SeedPlan build_plan(const ConnectionSpec& spec, const FormalType& formal, int n_terms,
                    std::vector<std::string>* notes) {
    SeedPlan plan;
    plan.m = formal.ramification;
    for (const auto& item : formal.items)
        if (item.exact_exponents.empty())
            throw math_error("asymptotic seeding needs exact exponents "
                             "(irrational indicial roots are outside the exact class)");

    if (const auto* sys = std::get_if<SystemSpec>(&spec)) {
        if (sys->size() == 1 || sys->is_diagonal()) {
            plan.diagonal = true;
            plan.system = *sys;
            // Build one rank-1 column per diagonal entry, then place it at the
            // block slot its formal item occupies.
            std::vector<bool> taken(formal.total_rank(), false);
            plan.columns.resize(formal.total_rank());
            plan.diag_row.resize(formal.total_rank(), 0);
            auto off = [&formal](int item_idx) {
                int o = 0;
                for (int t = 0; t < item_idx; ++t) o += formal.items[t].rank;
                return o;
            };
            for (int row = 0; row < sys->size(); ++row) {
                std::map<int, LaurentPoly> c;
                c[1] = LaurentPoly(1);
                c[0] = -sys->entries[row][row];
                DifferentialOperator op1(std::move(c));
                FormalType ft = formal_type(ConnectionSpec(op1));
                const FormalItem& it = ft.items.front();
                // locate the matching item/slot
                bool placed = false;
                for (std::size_t i = 0; i < formal.items.size() && !placed; ++i) {
                    if (formal.items[i].factor != it.factor) continue;
                    for (int k = 0; k < formal.items[i].rank && !placed; ++k) {
                        int slot = off(static_cast<int>(i)) + k;
                        if (taken[slot]) continue;
                        if (formal.items[i].exact_exponents[k] != it.exact_exponents[0])
                            continue;
                        taken[slot] = true;
                        plan.columns[slot] =
                            build_column(op1, it.factor, it.exact_exponents[0], 1,
                                         static_cast<int>(i), n_terms, notes);
                        plan.diag_row[slot] = row;
                        placed = true;
                    }
                }
                if (!placed)
                    throw math_error("diagonal entry does not match the formal type");
            }
            return plan;
        }
        plan.from_system = true;
        plan.system = *sys;
        DifferentialOperator op = cyclic_operator(*sys, plan.pivot);
        FormalType ft = formal_type(ConnectionSpec(op));
        DifferentialOperator cover = ft.ramification == 1 ? op : op.pullback(ft.ramification);
        plan.m = ft.ramification;
        for (std::size_t i = 0; i < ft.items.size(); ++i)
            for (int k = 0; k < ft.items[i].rank; ++k)
                plan.columns.push_back(build_column(cover, ft.items[i].factor,
                                                    ft.items[i].exact_exponents[k],
                                                    plan.m, static_cast<int>(i), n_terms,
                                                    notes));
        return plan;
    }

    const auto& op = std::get<DifferentialOperator>(spec);
    DifferentialOperator cover =
        formal.ramification == 1 ? op : op.pullback(formal.ramification);
    for (std::size_t i = 0; i < formal.items.size(); ++i)
        for (int k = 0; k < formal.items[i].rank; ++k)
            plan.columns.push_back(build_column(cover, formal.items[i].factor,
                                                formal.items[i].exact_exponents[k], plan.m,
                                                static_cast<int>(i), n_terms, notes));
    return plan;
}

// Scalar value and log-derivative of one truncated formal solution at (rho, theta).
void eval_column(const SeedColumn& col, double rho, double theta, std::complex<double>& y,
                 std::complex<double>& dy) {
    std::complex<double> x = std::polar(rho, theta);
    double wr = std::pow(rho, 1.0 / static_cast<double>(col.m));
    std::complex<double> w = std::polar(wr, theta / static_cast<double>(col.m));
    std::complex<double> useries = 0.0, duseries = 0.0;
    for (std::size_t k = col.u.size(); k-- > 0;) {
        std::complex<double> ck = col.u[k].to_complex();
        useries = useries * w + ck;
        if (k > 0) duseries = duseries * w + static_cast<double>(k) * ck;
    }
    // u' wrt x = (du/dw) / (m w^(m-1))
    std::complex<double> dwdx =
        1.0 / (static_cast<double>(col.m) * std::pow(w, static_cast<double>(col.m - 1)));
    std::complex<double> lam = col.lambda.to_complex();
    std::complex<double> expphi = std::exp(col.phi.evaluate(CoverPoint{rho, theta}));
    std::complex<double> xpow = std::exp(lam * std::complex<double>(std::log(rho), theta));
    y = expphi * xpow * useries;
    std::complex<double> dlog = col.phi.derivative().evaluate(CoverPoint{rho, theta}) +
                                lam / x + duseries * dwdx / useries;
    dy = y * dlog;
}

CMatrix seed_matrix(const SeedPlan& plan, double rho, double theta) {
    int n = static_cast<int>(plan.columns.size());
    CMatrix out(plan.diagonal || plan.from_system ? plan.system.size() : n, n);
    for (int c = 0; c < n; ++c) {
        std::complex<double> y, dy;
        eval_column(plan.columns[c], rho, theta, y, dy);
        if (plan.diagonal) {
            out.at(plan.diag_row[c], c) = y;
        } else if (plan.from_system) {
            std::complex<double> x = std::polar(rho, theta);
            int p = plan.pivot, q = 1 - plan.pivot;
            std::complex<double> app = plan.system.entries[p][p].evaluate(x);
            std::complex<double> apq = plan.system.entries[p][q].evaluate(x);
            out.at(p, c) = y;
            out.at(q, c) = (dy - app * y) / apq;
        } else {
            out.at(0, c) = y;
            if (out.rows() > 1) out.at(1, c) = dy;
        }
    }
    return out;
}

std::vector<std::complex<double>> arc_path(double rho, double from, double to) {
    std::vector<std::complex<double>> pts;
    int steps = std::max(2, static_cast<int>(std::ceil(std::abs(to - from) / (kPi / 16))));
    for (int i = 0; i <= steps; ++i) {
        double t = from + (to - from) * static_cast<double>(i) / steps;
        pts.push_back(std::polar(rho, t));
    }
    return pts;
}

} // namespace

void IntegrationConfig::resolve(const FormalType& formal) {
    if (rho_seed <= 0.0) {
        double best = disc_radius / 4.0;
        double target = std::log(std::max(separation, 10.0));
        for (std::size_t i = 0; i < formal.items.size(); ++i)
            for (std::size_t j = i + 1; j < formal.items.size(); ++j) {
                ExponentialFactor delta =
                    combine(formal.items[i].factor, formal.items[j].factor, -1);
                if (delta.order().is_zero()) continue;
                double c = std::abs(delta.leading_coefficient().to_complex());
                double r = delta.order().to_double();
                best = std::min(best, std::pow(c / target, 1.0 / r));
            }
        rho_seed = best;
    }
    if (rho_match <= 0.0) rho_match = std::min(10.0 * rho_seed, 0.9 * disc_radius);
    if (!(rho_seed < rho_match && rho_match <= disc_radius))
        throw math_error("integration radii must satisfy 0 < rho_seed < rho_match <= disc");
}

CMatrix asymptotic_seed(const ConnectionSpec& C, const FormalType& formal, double theta,
                        double rho, int n_terms, std::vector<std::string>* notes) {
    SeedPlan plan = build_plan(C, formal, n_terms, notes);
    return seed_matrix(plan, rho, theta);
}

CMatrix integrate(const ConnectionSpec& C, const std::vector<std::complex<double>>& path,
                  const CMatrix& y0, const IntegrationConfig& cfg) {
    if (path.size() < 2) return y0;
    RhsEval rhs(C);
    CMatrix y = y0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) rk_segment(rhs, path[i], path[i + 1], y, cfg);
    return y;
}

CMatrix numeric_monodromy(const ConnectionSpec& C, double rho, const IntegrationConfig& cfg) {
    RhsEval rhs(C);
    std::vector<std::complex<double>> loop;
    int steps = 32;
    for (int i = 0; i <= steps; ++i)
        loop.push_back(std::polar(rho, 2 * kPi * static_cast<double>(i) / steps));
    return integrate(C, loop, CMatrix::identity(rhs.size()), cfg);
}

StokesComputation stokes_matrices(const ConnectionSpec& C, IntegrationConfig cfg) {
    StokesComputation out;
    FormalType formal = formal_type(C);
    cfg.resolve(formal);

    if (formal.items.size() < 2) {
        out.structure = make_structure(formal, {}, cfg.disc_radius);
        return out;
    }

    // The truncation order must reach the optimal-truncation region of the
    // divergent series at the chosen seeding depth, which scales with the log
    // of the dominance separation there; a declared n_asym below that estimate
    // leaves off-shape junk above the 1e3*tol triangularity bound.
    int n_eff = cfg.n_asym;
    {
        double sep_log = 0.0;
        for (std::size_t i = 0; i < formal.items.size(); ++i)
            for (std::size_t j = i + 1; j < formal.items.size(); ++j) {
                ExponentialFactor delta =
                    combine(formal.items[i].factor, formal.items[j].factor, -1);
                if (delta.order().is_zero()) continue;
                double c = std::abs(delta.leading_coefficient().to_complex());
                sep_log = std::max(sep_log,
                                   c * std::pow(cfg.rho_seed, -delta.order().to_double()));
            }
        n_eff = std::clamp(static_cast<int>(std::ceil(sep_log)) + 4, cfg.n_asym, 40);
    }

    SeedPlan plan = build_plan(C, formal, n_eff, &out.notes);
    StokesDiagram diagram =
        build_diagram([&] {
            std::vector<ExponentialFactor> fs;
            for (const auto& item : formal.items) fs.push_back(item.factor);
            return fs;
        }(), cfg.disc_radius);

    std::size_t nsec = diagram.cover.size();
    // Tighter transport tolerance: the radial leg crosses the full dominance
    // separation and injected error is amplified by it.
    IntegrationConfig tcfg = cfg;
    tcfg.tol = std::min(cfg.tol, 1e-10) * 1e-3;
    tcfg.tol_abs = std::min(cfg.tol_abs, 1e-13);

    // Job j: seed sector j (j == nsec re-seeds sector 1 past the seam), move out
    // radially, then along the matching circle into both neighbouring overlaps.
    std::vector<CMatrix> ccw(nsec + 1), cw(nsec + 1);
    std::vector<double> mids(nsec);
    for (std::size_t k = 0; k < nsec; ++k) {
        Sector ov = k + 1 < nsec
                        ? Sector{diagram.cover[k + 1].lo, diagram.cover[k].hi, cfg.disc_radius}
                        : Sector{diagram.cover[0].lo + Direction::exact(Rational(2)),
                                 diagram.cover[nsec - 1].hi, cfg.disc_radius};
        mids[k] = ov.bisector().radians;
    }

    std::exception_ptr err;
    out.seeds.resize(nsec + 1);
#pragma omp parallel for schedule(dynamic)
    for (long long j = 0; j <= static_cast<long long>(nsec); ++j) {
        try {
            double bis = j < static_cast<long long>(nsec)
                             ? diagram.cover[j].bisector().radians
                             : diagram.cover[0].bisector().radians + 2 * kPi;
            CMatrix y = seed_matrix(plan, cfg.rho_seed, bis);
            out.seeds[j] = {static_cast<int>(j % nsec) + 1, cfg.rho_seed, bis, y};
            std::vector<std::complex<double>> radial = {std::polar(cfg.rho_seed, bis),
                                                        std::polar(cfg.rho_match, bis)};
            y = integrate(C, radial, y, tcfg);
            if (j < static_cast<long long>(nsec))
                ccw[j] = integrate(C, arc_path(cfg.rho_match, bis, mids[j]), y, tcfg);
            if (j > 0)
                cw[j] = integrate(C, arc_path(cfg.rho_match, bis, mids[j - 1]), y, tcfg);
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    std::vector<CMatrix> transitions;
    for (std::size_t k = 0; k < nsec; ++k) transitions.push_back(cw[k + 1].inverse() * ccw[k]);

    std::vector<CMatrix> per_line;
    if (diagram.lines.size() == nsec) {
        per_line = transitions;
    } else {
        CMatrix a = transitions[0];
        for (std::size_t i = 1; i < transitions.size(); ++i) a = transitions[i] * a;
        per_line.push_back(a);
    }
    out.raw = per_line;

    // Clean: zero everything below 10*tol; off-shape positions are numerical
    // noise up to 1e3*tol and are zeroed at that bound instead.
    double threshold = 10.0 * cfg.tol;
    double off_shape_bound = 1e3 * cfg.tol;
    std::vector<CMatrix> cleaned = per_line;
    for (auto& a : cleaned)
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c)
                if (std::abs(a.at(r, c)) < threshold) a.at(r, c) = 0.0;

    StokesStructure s = make_structure(formal, cleaned, cfg.disc_radius);
    const auto off = block_offsets(s.formal);
    std::vector<ExponentialFactor> fs;
    for (const auto& item : s.formal.items) fs.push_back(item.factor);
    for (std::size_t k = 0; k < s.matrices.size(); ++k) {
        HomShape shape = hom_shape(fs, overlap_sector(s.diagram, 1, k));
        double resid = 0.0;
        for (std::size_t bi = 0; bi + 1 < off.size(); ++bi)
            for (std::size_t bj = 0; bj + 1 < off.size(); ++bj) {
                if (shape.allowed.count({static_cast<int>(bi) + 1, static_cast<int>(bj) + 1}))
                    continue;
                for (int r = off[bi]; r < off[bi + 1]; ++r)
                    for (int c = off[bj]; c < off[bj + 1]; ++c) {
                        resid = std::max(resid, std::abs(per_line[k].at(r, c)));
                        if (std::abs(s.matrices[k].at(r, c)) < off_shape_bound)
                            s.matrices[k].at(r, c) = 0.0;
                    }
            }
        out.residuals.push_back(resid);
    }
    out.violations = validate(s);
    if (out.violations.empty()) {
        out.structure = normal_form(s);
    } else {
        out.structure = s;
        out.notes.push_back("validation failed after cleaning; raw matrices reported");
    }
    return out;
}

} // namespace stokeskit
