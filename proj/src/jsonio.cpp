#include "stokeskit/jsonio.hpp"

#include <cmath>

#include "stokeskit/errors.hpp"

namespace stokeskit {

json to_json(const Rational& r) { return r.str(); }

json to_json(const QComplex& c) { return json{{"re", c.re.str()}, {"im", c.im.str()}}; }

json to_json(const ExponentialFactor& f) {
    json terms = json::array();
    for (const auto& [k, c] : f.terms())
        terms.push_back(json::array({k, c.re.str(), c.im.str()}));
    return json{{"ram", f.ram()}, {"terms", terms}, {"text", f.render()}};
}

json to_json(const Direction& d) {
    json j{{"radians", d.radians}};
    if (d.is_exact()) j["exact"] = d.exact_str();
    return j;
}

json directions_json(const std::vector<Direction>& dirs) {
    json vals = json::array(), exact = json::array();
    bool all_exact = true;
    for (const auto& d : dirs) {
        vals.push_back(d.radians);
        if (d.is_exact())
            exact.push_back(d.exact_str());
        else
            all_exact = false;
    }
    json out{{"directions", vals}};
    if (all_exact && !dirs.empty()) out["exact"] = exact;
    return out;
}

json to_json(const Sector& s) {
    json j{{"lo", s.lo.radians}, {"hi", s.hi.radians}, {"rho_max", s.rho_max}};
    if (s.lo.is_exact()) j["lo_exact"] = s.lo.exact_str();
    if (s.hi.is_exact()) j["hi_exact"] = s.hi.exact_str();
    return j;
}

json to_json(const StokesDiagram& d) {
    json pairs = json::array();
    for (const auto& p : d.pairs) {
        json pj = directions_json(p.directions);
        pj["i"] = p.i;
        pj["j"] = p.j;
        pj["delta"] = p.delta.render();
        pairs.push_back(pj);
    }
    json sectors = json::array();
    for (const auto& s : d.cover) sectors.push_back(to_json(s));
    json out = directions_json(d.lines);
    out["lines"] = out["directions"];
    out.erase("directions");
    if (out.contains("exact")) {
        out["lines_exact"] = out["exact"];
        out.erase("exact");
    }
    out["pairs"] = pairs;
    out["sectors"] = sectors;
    return out;
}

json to_json(const NewtonPolygon& np) {
    json verts = json::array();
    for (const auto& [i, h] : np.vertices) verts.push_back(json::array({i.str(), h.str()}));
    json slopes = json::array();
    for (const auto& s : np.slopes)
        slopes.push_back(json{{"slope", s.slope.str()}, {"length", s.length.str()}});
    return json{{"vertices", verts}, {"slopes", slopes}};
}

json to_json(const FormalType& f) {
    json items = json::array();
    for (const auto& item : f.items) {
        json expo = json::array();
        for (std::size_t k = 0; k < item.exponents.size(); ++k) {
            if (!item.exact_exponents.empty())
                expo.push_back(to_json(item.exact_exponents[k]));
            else
                expo.push_back(json::array(
                    {item.exponents[k].real(), item.exponents[k].imag()}));
        }
        items.push_back(json{{"factor", to_json(item.factor)},
                             {"rank", item.rank},
                             {"exponents", expo}});
    }
    return json{{"ramification", f.ramification}, {"items", items}};
}

json to_json(const HomShape& h) {
    json allowed = json::array();
    for (const auto& [i, j] : h.allowed) allowed.push_back(json::array({i, j}));
    return json{{"n", h.n}, {"allowed", allowed}, {"tag", hom_tag_name(h.tag)}};
}

json to_json(const ConstructibleDescription& d) {
    json entries = json::array();
    for (const auto& e : d) {
        json ej{{"degree", e.degree}, {"stratum", stratum_name(e.stratum)}, {"rank", e.rank}};
        if (e.stratum == Stratum::SublevelFamily) ej["factor"] = to_json(e.factor);
        entries.push_back(ej);
    }
    return json{{"entries", entries}, {"otherwise", 0}};
}

json to_json(const CMatrix& m) {
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            entries.push_back(json::array({m.at(i, j).real(), m.at(i, j).imag()}));
    return entries;
}

json to_json(const StokesStructure& s) {
    json lines = json::array();
    for (const auto& l : s.diagram.lines) lines.push_back(l.radians);
    json mats = json::array();
    for (const auto& a : s.matrices) mats.push_back(to_json(a));
    return json{{"formal", to_json(s.formal)},
                {"lines", lines},
                {"matrices", mats},
                {"base", s.base_index},
                {"formal_monodromy", to_json(s.formal_monodromy)}};
}

json to_json(const StokesComputation& c) {
    json raw = json::array();
    for (const auto& a : c.raw) raw.push_back(to_json(a));
    json viol = json::array();
    for (const auto& v : c.violations)
        viol.push_back(json{{"matrix", v.matrix_index},
                            {"block", json::array({v.block_i, v.block_j})},
                            {"what", v.what}});
    json seeds = json::array();
    for (const auto& s : c.seeds)
        seeds.push_back(json{{"sector", s.sector},
                             {"rho", s.rho},
                             {"theta", s.theta},
                             {"matrix", to_json(s.matrix)}});
    return json{{"structure", to_json(c.structure)},
                {"diagnostics", json{{"raw_matrices", raw},
                                     {"residuals", c.residuals},
                                     {"seeds", seeds},
                                     {"violations", viol},
                                     {"notes", c.notes}}}};
}

// ---------------------------------------------------------------------------

namespace {

Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw parse_error("expected a rational as \"p/q\" or integer", 0);
}

QComplex qcomplex_from_json(const json& j) {
    if (j.is_string()) return parse_qcomplex(j.get<std::string>());
    if (j.is_object()) return {rational_from_json(j.at("re")), rational_from_json(j.at("im"))};
    if (j.is_array() && j.size() == 2 && j[0].is_string())
        return {rational_from_json(j[0]), rational_from_json(j[1])};
    throw parse_error("expected a complex rational", 0);
}

} // namespace

ExponentialFactor factor_from_json(const json& j) {
    if (j.is_string()) return parse_factor(j.get<std::string>());
    long long ram = j.at("ram").get<long long>();
    std::map<long long, QComplex> terms;
    for (const auto& t : j.at("terms")) {
        long long k = t.at(0).get<long long>();
        terms[k] += QComplex(rational_from_json(t.at(1)), rational_from_json(t.at(2)));
    }
    return ExponentialFactor(ram, std::move(terms));
}

FormalType formal_from_json(const json& j) {
    FormalType f;
    f.ramification = j.value("ramification", 1);
    for (const auto& ij : j.at("items")) {
        FormalItem item;
        item.factor = factor_from_json(ij.at("factor"));
        item.rank = ij.at("rank").get<int>();
        for (const auto& ej : ij.at("exponents")) {
            if (ej.is_array() && ej.size() == 2 && ej[0].is_number_float()) {
                item.exponents.emplace_back(ej[0].get<double>(), ej[1].get<double>());
            } else {
                QComplex q = qcomplex_from_json(ej);
                item.exact_exponents.push_back(q);
                item.exponents.push_back(q.to_complex());
            }
        }
        if (item.exact_exponents.size() != item.exponents.size()) item.exact_exponents.clear();
        f.items.push_back(std::move(item));
    }
    return f;
}

ConnectionSpec connection_from_json(const json& j) {
    if (j.contains("operator")) {
        std::map<int, LaurentPoly> coeffs;
        for (const auto& [key, val] : j.at("operator").items())
            coeffs[std::stoi(key)] = LaurentPoly::parse(val.get<std::string>());
        return DifferentialOperator(std::move(coeffs));
    }
    if (j.contains("system")) {
        SystemSpec sys;
        for (const auto& row : j.at("system")) {
            std::vector<LaurentPoly> r;
            for (const auto& e : row) r.push_back(LaurentPoly::parse(e.get<std::string>()));
            sys.entries.push_back(std::move(r));
        }
        for (const auto& row : sys.entries)
            if (row.size() != sys.entries.size())
                throw parse_error("system matrix must be square", 0);
        return sys;
    }
    if (j.contains("formal")) return formal_from_json(j.at("formal"));
    if (j.contains("items")) return formal_from_json(j);
    throw parse_error("connection JSON needs \"operator\", \"system\", or \"formal\"", 0);
}

CMatrix matrix_from_json(const json& j, int n) {
    if (static_cast<int>(j.size()) != n * n)
        throw parse_error("matrix entry count does not match the expected size", 0);
    CMatrix m(n, n);
    int idx = 0;
    for (const auto& e : j) {
        m.at(idx / n, idx % n) = {e.at(0).get<double>(), e.at(1).get<double>()};
        ++idx;
    }
    return m;
}

StokesStructure structure_from_json(const json& j) {
    FormalType f = formal_from_json(j.at("formal"));
    int n = f.total_rank();
    std::vector<CMatrix> mats;
    for (const auto& mj : j.at("matrices")) mats.push_back(matrix_from_json(mj, n));
    StokesStructure s = make_structure(f, std::move(mats));
    s.base_index = j.value("base", 1);
    if (j.contains("formal_monodromy"))
        s.formal_monodromy = matrix_from_json(j.at("formal_monodromy"), n);
    return s;
}

std::vector<Trivialization> trivializations_from_json(const json& j, int n) {
    std::vector<Trivialization> out;
    int idx = 1;
    for (const auto& tj : j) {
        Trivialization t;
        if (tj.is_object()) {
            t.sector = tj.at("sector").get<int>();
            t.alpha = matrix_from_json(tj.at("alpha"), n);
        } else {
            t.sector = idx;
            t.alpha = matrix_from_json(tj, n);
        }
        out.push_back(std::move(t));
        ++idx;
    }
    return out;
}

} // namespace stokeskit
