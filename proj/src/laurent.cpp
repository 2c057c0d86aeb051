#include "stokeskit/laurent.hpp"

#include "stokeskit/errors.hpp"
#include "stokeskit/factor.hpp"

namespace stokeskit {

LaurentPoly::LaurentPoly(std::map<long long, QComplex> coeffs) : coeffs_(std::move(coeffs)) {
    prune();
}

LaurentPoly::LaurentPoly(const QComplex& c, long long degree) {
    if (!c.is_zero()) coeffs_.emplace(degree, c);
}

void LaurentPoly::prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
}

LaurentPoly LaurentPoly::parse(const std::string& text) {
    ExponentialFactor f = parse_factor(text);
    if (f.ram() != 1)
        throw parse_error("fractional exponents are not allowed in Laurent polynomials", 0);
    std::map<long long, QComplex> coeffs(f.terms().begin(), f.terms().end());
    return LaurentPoly(std::move(coeffs));
}

long long LaurentPoly::valuation() const {
    if (coeffs_.empty()) throw math_error("valuation of the zero polynomial");
    return coeffs_.begin()->first;
}

long long LaurentPoly::degree() const {
    if (coeffs_.empty()) throw math_error("degree of the zero polynomial");
    return coeffs_.rbegin()->first;
}

QComplex LaurentPoly::coefficient(long long k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? QComplex() : it->second;
}

LaurentPoly LaurentPoly::pullback(long long m) const {
    std::map<long long, QComplex> out;
    for (const auto& [k, c] : coeffs_) out.emplace(k * m, c);
    return LaurentPoly(std::move(out));
}

LaurentPoly LaurentPoly::derivative() const {
    std::map<long long, QComplex> out;
    for (const auto& [k, c] : coeffs_)
        if (k != 0) out.emplace(k - 1, c * QComplex(Rational(k)));
    return LaurentPoly(std::move(out));
}

std::complex<double> LaurentPoly::evaluate(std::complex<double> x) const {
    std::complex<double> sum = 0.0;
    for (const auto& [k, c] : coeffs_) sum += c.to_complex() * std::pow(x, static_cast<double>(k));
    return sum;
}

LaurentPoly LaurentPoly::operator-() const {
    std::map<long long, QComplex> out;
    for (const auto& [k, c] : coeffs_) out.emplace(k, -c);
    return LaurentPoly(std::move(out));
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.coeffs_) coeffs_[k] += c;
    prune();
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.coeffs_) coeffs_[k] -= c;
    prune();
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    std::map<long long, QComplex> out;
    for (const auto& [ka, ca] : a.coeffs_)
        for (const auto& [kb, cb] : b.coeffs_) out[ka + kb] += ca * cb;
    return LaurentPoly(std::move(out));
}

std::string LaurentPoly::render() const {
    std::map<long long, QComplex> terms(coeffs_.begin(), coeffs_.end());
    return ExponentialFactor(1, std::move(terms)).render();
}

} // namespace stokeskit
