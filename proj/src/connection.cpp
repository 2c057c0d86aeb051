#include "stokeskit/connection.hpp"

#include <cctype>

#include "stokeskit/errors.hpp"

namespace stokeskit {

DifferentialOperator::DifferentialOperator(std::map<int, LaurentPoly> coeffs)
    : coeffs_(std::move(coeffs)) {
    prune();
}

void DifferentialOperator::prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
}

int DifferentialOperator::order() const {
    if (coeffs_.empty()) throw math_error("zero operator");
    return coeffs_.rbegin()->first;
}

LaurentPoly DifferentialOperator::coefficient(int i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? LaurentPoly() : it->second;
}

DifferentialOperator DifferentialOperator::pullback(long long m) const {
    if (m < 1) throw math_error("ramification exponent must be positive");
    // Powers of f*D with f = (1/m) y^(1-m), built once up to the operator order.
    LaurentPoly f(QComplex(Rational(1, m)), 1 - m);
    int n = order();
    std::vector<std::map<int, LaurentPoly>> powers(n + 1);
    powers[0][0] = LaurentPoly(1);
    for (int i = 1; i <= n; ++i)
        for (const auto& [j, b] : powers[i - 1]) {
            powers[i][j + 1] += f * b;
            powers[i][j] += f * b.derivative();
        }
    std::map<int, LaurentPoly> out;
    for (const auto& [i, a] : coeffs_) {
        LaurentPoly ai = a.pullback(m);
        for (const auto& [j, b] : powers[i]) out[j] += ai * b;
    }
    return DifferentialOperator(std::move(out));
}

DifferentialOperator DifferentialOperator::twist(const LaurentPoly& psi) const {
    return twist_log(psi.derivative());
}

DifferentialOperator DifferentialOperator::twist_log(const LaurentPoly& g) const {
    int n = order();
    std::vector<std::map<int, LaurentPoly>> powers(n + 1); // (D + g)^i
    powers[0][0] = LaurentPoly(1);
    for (int i = 1; i <= n; ++i)
        for (const auto& [j, b] : powers[i - 1]) {
            powers[i][j + 1] += b;
            powers[i][j] += b.derivative() + g * b;
        }
    std::map<int, LaurentPoly> out;
    for (const auto& [i, a] : coeffs_)
        for (const auto& [j, b] : powers[i]) out[j] += a * b;
    return DifferentialOperator(std::move(out));
}

std::string DifferentialOperator::render() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        if (!out.empty()) out += " + ";
        std::string a = it->second.render();
        if (it->first == 0) {
            out += a;
            continue;
        }
        std::string d = it->first == 1 ? "D" : "D^" + std::to_string(it->first);
        if (a == "1")
            out += d;
        else if (a.find(' ') != std::string::npos || a.find('+', 1) != std::string::npos)
            out += "(" + a + ")*" + d;
        else
            out += a + "*" + d;
    }
    return out;
}

bool SystemSpec::is_diagonal() const {
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (i != j && !entries[i][j].is_zero()) return false;
    return true;
}

SystemSpec SystemSpec::negated() const {
    SystemSpec out = *this;
    for (auto& row : out.entries)
        for (auto& e : row) e = -e;
    return out;
}

int FormalType::total_rank() const {
    int r = 0;
    for (const auto& item : items) r += item.rank;
    return r;
}

int rank_of(const ConnectionSpec& spec) {
    if (const auto* op = std::get_if<DifferentialOperator>(&spec)) return op->order();
    if (const auto* sys = std::get_if<SystemSpec>(&spec)) return sys->size();
    return std::get<FormalType>(spec).total_rank();
}

// ---------------------------------------------------------------------------
// Operator parser

namespace {

class OperatorParser {
public:
    explicit OperatorParser(const std::string& text) : text_(text) {}

    DifferentialOperator parse() {
        std::map<int, LaurentPoly> acc;
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
        return DifferentialOperator(std::move(acc));
    }

private:
    // term := factor ('*' factor)* with factors coeff | x[^k] | D[^k]; all x parts
    // must precede D parts (operators are written in normal order).
    void parse_term(std::map<int, LaurentPoly>& acc, int sign) {
        QComplex coeff{Rational(sign)};
        long long xdeg = 0;
        int ddeg = 0;
        bool saw_d = false;
        bool first = true;
        for (;;) {
            skip_ws();
            if (peek() == '(') {
                get();
                coeff = coeff * parse_complex_sum();
                skip_ws();
                if (get() != ')') fail("expected ')'");
            } else if (peek() == 'x') {
                if (saw_d) fail("x must precede D in an operator term");
                get();
                xdeg += parse_power();
            } else if (peek() == 'D') {
                get();
                long long p = parse_power();
                if (p < 0) fail("negative power of D");
                ddeg += static_cast<int>(p);
                saw_d = true;
            } else if (peek() == 'i') {
                get();
                coeff = coeff * QComplex(Rational(0), Rational(1));
            } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
                coeff = coeff * QComplex(parse_rational());
            } else if (first) {
                fail("expected an operator term");
            } else {
                fail("unexpected character in operator term");
            }
            first = false;
            skip_ws();
            if (peek() != '*') break;
            get();
        }
        acc[ddeg] += LaurentPoly(coeff, xdeg);
    }

    long long parse_power() {
        skip_ws();
        if (peek() != '^') return 1;
        get();
        skip_ws();
        bool parens = peek() == '(';
        if (parens) get();
        long long v = parse_integer();
        if (parens) {
            skip_ws();
            if (get() != ')') fail("expected ')'");
        }
        return v;
    }

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
        Rational r = parse_rational();
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

    Rational parse_rational() {
        long long num = parse_unsigned_integer();
        skip_ws();
        if (peek() == '/') {
            std::size_t mark = pos_;
            get();
            skip_ws();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) {
                pos_ = mark;
                return Rational(num);
            }
            return Rational(num, parse_unsigned_integer());
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
};

} // namespace

DifferentialOperator DifferentialOperator::parse(const std::string& text) {
    return OperatorParser(text).parse();
}

} // namespace stokeskit
