#pragma once

#include <complex>
#include <map>
#include <string>

#include "stokeskit/qcomplex.hpp"

namespace stokeskit {

// Finite Laurent polynomial sum c_k x^k with exact complex-rational coefficients.
class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(std::map<long long, QComplex> coeffs);
    LaurentPoly(long long k) : LaurentPoly(QComplex(Rational(k)), 0) {} // constant
    LaurentPoly(const QComplex& c, long long degree);                   // monomial

    static LaurentPoly parse(const std::string& text);

    const std::map<long long, QComplex>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    // Valuation: smallest exponent present. Throws on the zero polynomial.
    long long valuation() const;
    long long degree() const;

    QComplex coefficient(long long k) const;

    // x -> y^m (exponents scale by m).
    LaurentPoly pullback(long long m) const;

    LaurentPoly derivative() const;

    std::complex<double> evaluate(std::complex<double> x) const;

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    std::string render() const;

private:
    void prune();

    std::map<long long, QComplex> coeffs_;
};

} // namespace stokeskit
