// Command-line front end: parses factor/operator expressions, runs the
// pipelines, and emits JSON reports on stdout (human messages go to stderr).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stokeskit/errors.hpp"
#include "stokeskit/formal.hpp"
#include "stokeskit/jsonio.hpp"
#include "stokeskit/newton.hpp"
#include "stokeskit/parallel.hpp"
#include "stokeskit/svg.hpp"
#include "stokeskit/version.hpp"

using namespace stokeskit;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

json g_inputs;
long long g_seed = 0;

void emit(const std::string& command, const json& results, const json& diagnostics = json::object()) {
    json report{{"command", command},
                {"inputs", g_inputs},
                {"results", results},
                {"diagnostics", diagnostics},
                {"version", kVersion}};
    report["inputs"]["seed"] = g_seed;
    std::cout << report.dump(2) << "\n";
}

std::string slurp(const std::string& arg) {
    if (arg == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream f(arg.substr(1));
        if (!f) throw parse_error("cannot open file " + arg.substr(1), 0);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
    return arg;
}

json load_json(const std::string& arg) {
    try {
        return json::parse(slurp(arg));
    } catch (const json::parse_error& e) {
        throw parse_error(std::string("bad JSON: ") + e.what(), 0);
    }
}

double parse_angle(const std::string& text) {
    auto pos = text.find("pi");
    if (pos == std::string::npos) return std::stod(text);
    std::string pre = text.substr(0, pos);
    std::string post = text.substr(pos + 2);
    double num = pre.empty() ? 1.0 : (pre == "-" ? -1.0 : std::stod(pre));
    double den = 1.0;
    if (!post.empty()) {
        if (post[0] != '/') throw parse_error("bad angle " + text, pos + 2);
        den = std::stod(post.substr(1));
    }
    return num * kPi / den;
}

std::vector<ExponentialFactor> parse_factor_list(const std::string& text) {
    std::vector<ExponentialFactor> out;
    std::string cur;
    std::istringstream ss(text);
    while (std::getline(ss, cur, ',')) out.push_back(parse_factor(cur));
    if (out.empty()) throw parse_error("empty factor list", 0);
    return out;
}

ConnectionSpec connection_from_flags(const std::string& op, const std::string& system) {
    if (!op.empty() && !system.empty())
        throw parse_error("give either --op or --system, not both", 0);
    if (!op.empty()) return DifferentialOperator::parse(op);
    if (!system.empty()) {
        json j = load_json(system);
        if (!j.contains("system") && !j.contains("operator") && !j.contains("formal") &&
            !j.contains("items"))
            j = json{{"system", j}};
        return connection_from_json(j);
    }
    throw parse_error("missing --op or --system", 0);
}

IntegrationConfig cfg_from_flags(double tol, double rho_seed, double rho_match, int n_asym) {
    IntegrationConfig cfg;
    if (tol > 0) cfg.tol = tol;
    if (rho_seed > 0) cfg.rho_seed = rho_seed;
    if (rho_match > 0) cfg.rho_match = rho_match;
    if (n_asym > 0) cfg.n_asym = n_asym;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap_from_env();
    CLI::App app{"Stokes geometry and Stokes data of meromorphic connections"};
    app.require_subcommand(1);
    app.add_option("--seed", g_seed, "echoed into the report for reproducibility");

    std::string delta, factors_text, sector_text, op_text, system_text, factor_text;
    std::string structure_text, cover_text, svg_path;
    double rho_min = 1e-3, rho_max = 1.0, rho = 0.5;
    int steps = 64;
    double tol = 0, rho_seed = 0, rho_match = 0;
    int n_asym = 0;

    auto* lines = app.add_subcommand("lines", "Stokes directions of a factor difference");
    lines->add_option("--delta", delta)->required();

    auto* curves = app.add_subcommand("curves", "track the Stokes curves Re delta = 0");
    curves->add_option("--delta", delta)->required();
    curves->add_option("--rho-min", rho_min);
    curves->add_option("--rho-max", rho_max);
    curves->add_option("--steps", steps);
    curves->add_option("--svg", svg_path);

    auto* sectors = app.add_subcommand("sectors", "diagram and sector cover of a factor family");
    sectors->add_option("--factors", factors_text)->required();

    auto* homshape = app.add_subcommand("homshape", "allowed morphism pattern on a sector");
    homshape->add_option("--factors", factors_text)->required();
    homshape->add_option("--sector", sector_text)->required();

    auto* formal = app.add_subcommand("formal", "Newton polygon, slopes, and formal type");
    formal->add_option("--op", op_text);
    formal->add_option("--system", system_text);

    auto* phi = app.add_subcommand("phi", "constructible description attached to e^phi");
    phi->add_option("--factor", factor_text)->required();

    auto* glue = app.add_subcommand("glue", "validate a structure and glue its monodromy");
    glue->add_option("--structure", structure_text)->required();

    auto* extract = app.add_subcommand("extract", "Stokes matrices from sector trivializations");
    extract->add_option("--cover", cover_text)->required();

    auto* stokes = app.add_subcommand("stokes", "numeric Stokes matrices of a connection");
    stokes->add_option("--op", op_text);
    stokes->add_option("--system", system_text);
    stokes->add_option("--tol", tol);
    stokes->add_option("--rho-seed", rho_seed);
    stokes->add_option("--rho-match", rho_match);
    stokes->add_option("--n-asym", n_asym);

    auto* monodromy = app.add_subcommand("monodromy", "numeric monodromy around the circle");
    monodromy->add_option("--op", op_text);
    monodromy->add_option("--system", system_text);
    monodromy->add_option("--rho", rho);
    monodromy->add_option("--tol", tol);

    for (auto* sub : {lines, curves, sectors, homshape, formal, phi, glue, extract, stokes,
                      monodromy})
        sub->fallthrough(); // app-level flags like --seed may follow the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 2;
    }

    try {
        if (lines->parsed()) {
            g_inputs = {{"delta", delta}};
            auto f = parse_factor(delta);
            g_inputs["delta_normalized"] = f.render();
            auto dirs = stokes_directions(f);
            json res = directions_json(dirs);
            if (f.ram() > 1) {
                // ramified data lives on the m-fold cover: report both readings
                json cover = json::array();
                for (long long sheet = 0; sheet < f.ram(); ++sheet)
                    for (const auto& d : dirs)
                        cover.push_back(d.radians + 2 * kPi * static_cast<double>(sheet));
                res["base"] = res["directions"];
                res["cover"] = cover;
                res["cover_turns"] = f.ram();
            }
            emit("lines", res);
        } else if (curves->parsed()) {
            g_inputs = {{"delta", delta}, {"rho_min", rho_min}, {"rho_max", rho_max},
                        {"steps", steps}};
            auto f = parse_factor(delta);
            if (steps < 2 || rho_min <= 0 || rho_min >= rho_max)
                throw parse_error("curves needs steps >= 2 and 0 < rho_min < rho_max", 0);
            std::vector<double> grid;
            for (int i = 0; i < steps; ++i)
                grid.push_back(rho_max * std::pow(rho_min / rho_max,
                                                  static_cast<double>(i) / (steps - 1)));
            auto cs = stokes_curves(f, grid);
            json jc = json::array();
            for (const auto& c : cs) {
                json pts = json::array();
                for (const auto& p : c.points) pts.push_back(json::array({p.rho, p.theta}));
                jc.push_back(json{{"line", to_json(c.line)}, {"points", pts}});
            }
            json res{{"curves", jc}};
            auto ls = stokes_directions(f);
            res.update(directions_json(ls));
            if (!svg_path.empty()) {
                std::ofstream out(svg_path);
                out << render_svg(cs, ls, rho_max);
                res["svg"] = svg_path;
            }
            emit("curves", res);
        } else if (sectors->parsed()) {
            g_inputs = {{"factors", factors_text}};
            auto fs = parse_factor_list(factors_text);
            emit("sectors", to_json(build_diagram(fs)));
        } else if (homshape->parsed()) {
            g_inputs = {{"factors", factors_text}, {"sector", sector_text}};
            auto fs = parse_factor_list(factors_text);
            auto comma = sector_text.find(',');
            if (comma == std::string::npos)
                throw parse_error("--sector wants lo,hi", 0);
            Sector s{Direction::numeric(parse_angle(sector_text.substr(0, comma))),
                     Direction::numeric(parse_angle(sector_text.substr(comma + 1))), 1.0};
            if (s.lo.radians >= s.hi.radians)
                throw parse_error("sector lo must be below hi", 0);
            emit("homshape", to_json(hom_shape(fs, s)));
        } else if (formal->parsed()) {
            g_inputs = {{"op", op_text}, {"system", system_text}};
            ConnectionSpec spec = connection_from_flags(op_text, system_text);
            json res;
            if (const auto* op = std::get_if<DifferentialOperator>(&spec)) {
                NewtonPolygon np = newton_polygon(*op);
                res["newton"] = to_json(np);
                res["ramification"] = ramification_order(np.slopes);
            }
            res["formal_type"] = to_json(formal_type(spec));
            emit("formal", res);
        } else if (phi->parsed()) {
            g_inputs = {{"factor", factor_text}};
            auto f = parse_factor(factor_text);
            g_inputs["factor_normalized"] = f.render();
            emit("phi", to_json(phi_exponential(f)));
        } else if (glue->parsed()) {
            g_inputs = {{"structure", "(json)"}};
            StokesStructure s = structure_from_json(load_json(structure_text));
            auto violations = validate(s);
            json vj = json::array();
            for (const auto& v : violations)
                vj.push_back(json{{"matrix", v.matrix_index},
                                  {"block", json::array({v.block_i, v.block_j})},
                                  {"what", v.what}});
            if (!violations.empty()) {
                emit("glue", json{{"valid", false}, {"violations", vj}});
                return 4;
            }
            CMatrix m = glue_monodromy(s);
            json cp = json::array();
            for (const auto& c : m.char_poly()) cp.push_back(json::array({c.real(), c.imag()}));
            emit("glue", json{{"valid", true},
                              {"monodromy", to_json(m)},
                              {"char_poly", cp}});
        } else if (extract->parsed()) {
            g_inputs = {{"cover", "(json)"}};
            json j = load_json(cover_text);
            FormalType f = formal_from_json(j.at("formal"));
            auto trivs = trivializations_from_json(j.at("trivializations"), f.total_rank());
            StokesStructure s = extract_from_cover(f, trivs);
            emit("extract", to_json(s));
        } else if (stokes->parsed()) {
            g_inputs = {{"op", op_text}, {"system", system_text}};
            ConnectionSpec spec = connection_from_flags(op_text, system_text);
            StokesComputation c =
                stokes_matrices(spec, cfg_from_flags(tol, rho_seed, rho_match, n_asym));
            json full = to_json(c);
            emit("stokes", full["structure"], full["diagnostics"]);
            if (!c.violations.empty()) return 4;
        } else if (monodromy->parsed()) {
            g_inputs = {{"op", op_text}, {"system", system_text}, {"rho", rho}};
            ConnectionSpec spec = connection_from_flags(op_text, system_text);
            IntegrationConfig cfg = cfg_from_flags(tol, 0, 0, 0);
            CMatrix m = numeric_monodromy(spec, rho, cfg);
            json cp = json::array();
            for (const auto& c : m.char_poly()) cp.push_back(json::array({c.real(), c.imag()}));
            emit("monodromy", json{{"matrix", to_json(m)}, {"char_poly", cp}});
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 4;
    } catch (const math_error& e) {
        std::cerr << "math error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
