#include "stokeskit/factor.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

#include "stokeskit/errors.hpp"

namespace stokeskit {

ExponentialFactor::ExponentialFactor(long long ram, std::map<long long, QComplex> terms)
    : ram_(ram), terms_(std::move(terms)) {
    if (ram_ < 1) throw math_error("ramification must be positive");
    normalize();
}

void ExponentialFactor::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    if (terms_.empty()) {
        ram_ = 1;
        return;
    }
    long long g = ram_;
    for (const auto& [k, c] : terms_) g = std::gcd(g, k < 0 ? -k : k);
    if (g > 1) {
        std::map<long long, QComplex> reduced;
        for (const auto& [k, c] : terms_) reduced.emplace(k / g, c);
        terms_ = std::move(reduced);
        ram_ /= g;
    }
}

ExponentialFactor ExponentialFactor::monomial(const QComplex& c, const Rational& e) {
    if (c.is_zero()) return {};
    return ExponentialFactor(e.den(), {{e.num(), c}});
}

Rational ExponentialFactor::order() const {
    if (terms_.empty() || terms_.begin()->first >= 0) return Rational(0);
    return Rational(-terms_.begin()->first, ram_);
}

QComplex ExponentialFactor::leading_coefficient() const {
    if (terms_.empty() || terms_.begin()->first >= 0) return QComplex();
    return terms_.begin()->second;
}

ExponentialFactor ExponentialFactor::pole_part() const {
    std::map<long long, QComplex> neg;
    for (const auto& [k, c] : terms_)
        if (k < 0) neg.emplace(k, c);
    return ExponentialFactor(ram_, std::move(neg));
}

ExponentialFactor ExponentialFactor::holomorphic_part() const {
    std::map<long long, QComplex> pos;
    for (const auto& [k, c] : terms_)
        if (k >= 0) pos.emplace(k, c);
    return ExponentialFactor(ram_, std::move(pos));
}

ExponentialFactor ExponentialFactor::derivative() const {
    std::map<long long, QComplex> out;
    for (const auto& [k, c] : terms_) {
        if (k == 0) continue;
        out.emplace(k - ram_, c * QComplex(Rational(k, ram_)));
    }
    return ExponentialFactor(ram_, std::move(out));
}

ExponentialFactor ExponentialFactor::deck_image() const {
    std::map<long long, QComplex> out;
    for (const auto& [k, c] : terms_) {
        long long r = ((k % ram_) + ram_) % ram_; // e^(2 pi i k / ram) by residue
        QComplex rot;
        if (ram_ == 1 || r == 0)
            rot = QComplex(1);
        else if (ram_ == 2)
            rot = QComplex(-1);
        else if (ram_ == 4 && r == 2)
            rot = QComplex(-1);
        else if (ram_ == 4)
            rot = QComplex(Rational(0), Rational(r == 1 ? 1 : -1));
        else
            throw math_error("deck image not exactly representable for ramification " +
                             std::to_string(ram_));
        out.emplace(k, c * rot);
    }
    return ExponentialFactor(ram_, std::move(out));
}

std::complex<double> ExponentialFactor::evaluate(const CoverPoint& x) const {
    if (x.rho == 0.0) {
        if (!order().is_zero()) throw math_error("factor evaluated at its pole");
        auto it = terms_.find(0);
        return it == terms_.end() ? std::complex<double>(0.0) : it->second.to_complex();
    }
    std::complex<double> sum = 0.0;
    double m = static_cast<double>(ram_);
    for (const auto& [k, c] : terms_) {
        double e = static_cast<double>(k) / m;
        sum += c.to_complex() * std::polar(std::pow(x.rho, e), e * x.theta);
    }
    return sum;
}

std::complex<double> ExponentialFactor::evaluate(std::complex<double> x) const {
    return evaluate(CoverPoint::from_complex(x));
}

bool operator<(const ExponentialFactor& a, const ExponentialFactor& b) {
    if (a.ram_ != b.ram_) return a.ram_ < b.ram_;
    auto key = [](const ExponentialFactor& f) {
        std::string s;
        for (const auto& [k, c] : f.terms_)
            s += std::to_string(k) + ":" + c.str() + ";";
        return s;
    };
    return key(a) < key(b);
}

ExponentialFactor combine(const ExponentialFactor& a, const ExponentialFactor& b, int sign) {
    long long m = std::lcm(a.ram(), b.ram());
    std::map<long long, QComplex> terms;
    for (const auto& [k, c] : a.terms()) terms[k * (m / a.ram())] += c;
    for (const auto& [k, c] : b.terms()) {
        QComplex v = sign < 0 ? -c : c;
        terms[k * (m / b.ram())] += v;
    }
    return ExponentialFactor(m, std::move(terms));
}

PrincipalPart principal_part(const ExponentialFactor& phi) {
    return {phi.order(), phi.leading_coefficient(), phi.pole_part()};
}

ExponentialFactor ramify_pullback(const ExponentialFactor& phi, long long m) {
    if (m < 1) throw math_error("ramification exponent must be positive");
    std::map<long long, QComplex> terms;
    for (const auto& [k, c] : phi.terms()) terms.emplace(k * m, c);
    return ExponentialFactor(phi.ram(), std::move(terms));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class FactorParser {
public:
    explicit FactorParser(const std::string& text) : text_(text) {}

    ExponentialFactor parse_expr() {
        std::map<Rational, QComplex> acc;
        int sign = 1;
        skip_ws();
        if (peek() == '+' || peek() == '-') sign = (get() == '-') ? -1 : 1;
        parse_term(acc, sign);
        skip_ws();
        while (pos_ < text_.size()) {
            char op = get();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            parse_term(acc, op == '-' ? -1 : 1);
            skip_ws();
        }
        return build(acc);
    }

    QComplex parse_literal() {
        skip_ws();
        QComplex v = parse_complex_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input after complex literal");
        return v;
    }

private:
    static ExponentialFactor build(const std::map<Rational, QComplex>& acc) {
        long long m = 1;
        for (const auto& [e, c] : acc) m = std::lcm(m, e.den());
        std::map<long long, QComplex> terms;
        for (const auto& [e, c] : acc) terms[e.num() * (m / e.den())] += c;
        return ExponentialFactor(m, std::move(terms));
    }

    // term := coeff ('*' 'x' ('^' exponent)?)? | 'x' ('^' exponent)? | '1/x'
    void parse_term(std::map<Rational, QComplex>& acc, int sign) {
        skip_ws();
        QComplex coeff{Rational(sign)};
        bool have_coeff = false;
        if (peek() == '(') {
            get();
            coeff *= parse_complex_sum();
            skip_ws();
            if (get() != ')') fail("expected ')'");
            have_coeff = true;
        } else if (peek() == 'i') {
            get();
            coeff *= QComplex(Rational(0), Rational(1));
            have_coeff = true;
        } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
            Rational r = parse_unsigned_rational(true);
            if (matched_one_over_x_) {
                matched_one_over_x_ = false;
                acc[Rational(-1)] += coeff * QComplex(r);
                return;
            }
            coeff *= QComplex(r);
            have_coeff = true;
        } else if (peek() != 'x') {
            fail("expected a coefficient, 'x', or 'i'");
        }

        skip_ws();
        if (have_coeff) {
            if (peek() != '*') {
                acc[Rational(0)] += coeff;
                return;
            }
            get();
            skip_ws();
            if (peek() == 'i') { // rational '*' i ('*' x ...)?
                get();
                coeff *= QComplex(Rational(0), Rational(1));
                skip_ws();
                if (peek() != '*') {
                    acc[Rational(0)] += coeff;
                    return;
                }
                get();
                skip_ws();
            }
        }
        if (get() != 'x') fail("expected 'x'");
        Rational e(1);
        skip_ws();
        if (peek() == '^') {
            get();
            e = parse_exponent();
        }
        acc[e] += coeff;
    }

    Rational parse_exponent() {
        skip_ws();
        if (peek() == '(') {
            get();
            skip_ws();
            long long num = parse_integer();
            skip_ws();
            long long den = 1;
            if (peek() == '/') {
                get();
                skip_ws();
                den = parse_integer();
                if (den <= 0) fail("exponent denominator must be positive");
            }
            skip_ws();
            if (get() != ')') fail("expected ')' closing exponent");
            return Rational(num, den);
        }
        return Rational(parse_integer());
    }

    // complex-sum := signed-part (('+'|'-') signed-part)*  within parentheses or a literal
    QComplex parse_complex_sum() {
        QComplex total;
        int sign = 1;
        skip_ws();
        if (peek() == '+' || peek() == '-') sign = (get() == '-') ? -1 : 1;
        total += parse_complex_part(sign);
        skip_ws();
        while (peek() == '+' || peek() == '-') {
            int s = (get() == '-') ? -1 : 1;
            total += parse_complex_part(s);
            skip_ws();
        }
        return total;
    }

    QComplex parse_complex_part(int sign) {
        skip_ws();
        if (peek() == 'i') {
            get();
            return QComplex(Rational(0), Rational(sign));
        }
        Rational r = parse_unsigned_rational(false);
        skip_ws();
        if (peek() == '*') {
            std::size_t mark = pos_;
            get();
            skip_ws();
            if (peek() == 'i') {
                get();
                return QComplex(Rational(0), r * Rational(sign));
            }
            pos_ = mark;
        }
        return QComplex(r * Rational(sign));
    }

    Rational parse_unsigned_rational(bool allow_one_over_x) {
        long long num = parse_unsigned_integer();
        skip_ws();
        if (peek() == '/') {
            std::size_t mark = pos_;
            get();
            skip_ws();
            if (allow_one_over_x && peek() == 'x') {
                get();
                matched_one_over_x_ = true;
                return Rational(num);
            }
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                pos_ = mark;
                return Rational(num);
            }
            long long den = parse_unsigned_integer();
            if (den == 0) fail("zero denominator");
            return Rational(num, den);
        }
        return Rational(num);
    }

    long long parse_integer() {
        skip_ws();
        int sign = 1;
        if (peek() == '-') {
            get();
            sign = -1;
        } else if (peek() == '+') {
            get();
        }
        return sign * parse_unsigned_integer();
    }

    long long parse_unsigned_integer() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a digit");
        long long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v < 0) fail("integer literal overflow");
            ++pos_;
        }
        return v;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() {
        if (pos_ >= text_.size()) fail("unexpected end of input");
        return text_[pos_++];
    }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    const std::string& text_;
    std::size_t pos_ = 0;
    bool matched_one_over_x_ = false;
};

std::string render_coeff(const QComplex& c, bool with_power) {
    std::string s = c.str();
    if (!with_power) return s;
    bool needs_parens = !c.re.is_zero() && !c.im.is_zero();
    return needs_parens ? "(" + s + ")" : s;
}

} // namespace

std::string ExponentialFactor::render() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
        // Pure-negative coefficients are folded into the joining sign so the
        // output re-parses under the term grammar.
        bool lead_minus = (c.im.is_zero() && c.re.is_negative()) ||
                          (c.re.is_zero() && c.im.is_negative());
        QComplex cc = lead_minus ? -c : c;
        if (out.empty())
            out += lead_minus ? "-" : "";
        else
            out += lead_minus ? " - " : " + ";
        Rational e(k, ram_);
        if (e.is_zero()) {
            out += render_coeff(cc, true);
            continue;
        }
        std::string power = "x";
        if (e != Rational(1)) {
            power += "^";
            power += e.is_integer() ? e.str() : "(" + e.str() + ")";
        }
        if (cc == QComplex(1))
            out += power;
        else
            out += render_coeff(cc, true) + "*" + power;
    }
    return out;
}

ExponentialFactor parse_factor(const std::string& text) {
    return FactorParser(text).parse_expr();
}

QComplex parse_qcomplex(const std::string& text) {
    return FactorParser(text).parse_literal();
}

} // namespace stokeskit
