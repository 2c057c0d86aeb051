#pragma once

#include <complex>
#include <map>
#include <string>

#include "stokeskit/qcomplex.hpp"

namespace stokeskit {

// A point of the punctured disc carried with its angle on the universal cover.
// theta is never reduced mod 2*pi; ramified branches read x^(k/m) as
// rho^(k/m) * exp(i*k*theta/m).
struct CoverPoint {
    double rho = 0.0;
    double theta = 0.0;

    std::complex<double> to_complex() const { return std::polar(rho, theta); }
    static CoverPoint from_complex(std::complex<double> z) { return {std::abs(z), std::arg(z)}; }
};

// phi(x) = sum_k c_k * x^(k/ram), finitely many exact complex-rational c_k,
// k possibly negative. Kept normalized: no zero coefficients, ram minimal
// (gcd(ram, gcd of keys) = 1), empty sum has ram 1.
class ExponentialFactor {
public:
    ExponentialFactor() = default;
    ExponentialFactor(long long ram, std::map<long long, QComplex> terms);

    // Single monomial c * x^e.
    static ExponentialFactor monomial(const QComplex& c, const Rational& e);

    long long ram() const { return ram_; }
    const std::map<long long, QComplex>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    // Pole order max(0, -min k / ram); a nonnegative rational.
    Rational order() const;

    // Exponent of a stored key as a rational.
    Rational exponent(long long key) const { return Rational(key, ram_); }

    // Coefficient of the most negative exponent, 0 when holomorphic.
    QComplex leading_coefficient() const;

    // Sum of the strictly negative-exponent terms.
    ExponentialFactor pole_part() const;

    // Terms of exponent >= 0.
    ExponentialFactor holomorphic_part() const;

    // d/dx.
    ExponentialFactor derivative() const;

    // Coefficient-wise image under theta -> theta + 2*pi (x^(k/m) picks e^(2*pi*i*k/m)).
    // Exact for ram in {1, 2, 4}; throws math_error otherwise.
    ExponentialFactor deck_image() const;

    std::complex<double> evaluate(const CoverPoint& x) const;
    std::complex<double> evaluate(std::complex<double> x) const;

    std::string render() const;

    friend bool operator==(const ExponentialFactor& a, const ExponentialFactor& b) {
        return a.ram_ == b.ram_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const ExponentialFactor& a, const ExponentialFactor& b) {
        return !(a == b);
    }
    friend bool operator<(const ExponentialFactor& a, const ExponentialFactor& b);

private:
    void normalize();

    long long ram_ = 1;
    std::map<long long, QComplex> terms_;
};

// a + sign*b over the lcm of the two ramifications, re-minimized.
ExponentialFactor combine(const ExponentialFactor& a, const ExponentialFactor& b, int sign);

struct PrincipalPart {
    Rational order;             // ord(phi)
    QComplex leading;           // coefficient of the deepest pole, 0 if none
    ExponentialFactor pole_terms;
};

PrincipalPart principal_part(const ExponentialFactor& phi);

// phi(y^m) as a factor in y; ord multiplies by m.
ExponentialFactor ramify_pullback(const ExponentialFactor& phi, long long m);

// Parses the factor grammar:
//   expr  := term (('+'|'-') term)*
//   term  := coeff ('*' 'x' ('^' exponent)?)? | 'x' ('^' exponent)? | '1/x'
//   coeff := "a" | "a+b*i" | "(a+b*i)" with exact rational a, b
//   exponent := integer | '(' integer '/' positive-integer ')'
ExponentialFactor parse_factor(const std::string& text);

// Complex-rational literal ("1/2", "1/2+1/3*i", "-i", "(2+1*i)").
QComplex parse_qcomplex(const std::string& text);

} // namespace stokeskit
