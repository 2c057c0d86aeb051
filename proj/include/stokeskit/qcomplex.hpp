#pragma once

#include <complex>
#include <string>

#include "stokeskit/rational.hpp"

namespace stokeskit {

// Complex number with exact rational real and imaginary parts.
struct QComplex {
    Rational re;
    Rational im;

    QComplex() = default;
    QComplex(Rational r) : re(r) {}
    QComplex(Rational r, Rational i) : re(r), im(i) {}
    QComplex(long long r) : re(r) {}

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

    QComplex conj() const { return {re, -im}; }

    QComplex operator-() const { return {-re, -im}; }
    QComplex& operator+=(const QComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    QComplex& operator-=(const QComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    QComplex& operator*=(const QComplex& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = r;
        im = i;
        return *this;
    }
    QComplex& operator/=(const QComplex& o);

    friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
    friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
    friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
    friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
    friend bool operator==(const QComplex& a, const QComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const QComplex& a, const QComplex& b) { return !(a == b); }

    // "2", "-1/2", "1/2+1/3*i", "-i" style; the factor-grammar complex literal.
    std::string str() const;
};

// Exact complex square root when both components stay rational; used when reading
// characteristic roots off Newton-polygon edges.
bool qcomplex_sqrt(const QComplex& value, QComplex& root);

} // namespace stokeskit
