#include "stokeskit/qcomplex.hpp"

namespace stokeskit {

QComplex& QComplex::operator/=(const QComplex& o) {
    Rational n2 = o.re * o.re + o.im * o.im;
    if (n2.is_zero()) throw std::domain_error("complex division by zero");
    QComplex num = *this * o.conj();
    re = num.re / n2;
    im = num.im / n2;
    return *this;
}

std::string QComplex::str() const {
    if (im.is_zero()) return re.str();
    std::string istr = (im == Rational(1)) ? "i" : (im == Rational(-1)) ? "-i" : im.str() + "*i";
    if (re.is_zero()) return istr;
    if (im.is_negative()) return re.str() + istr.insert(0, istr[0] == '-' ? "" : "-");
    return re.str() + "+" + istr;
}

bool qcomplex_sqrt(const QComplex& value, QComplex& root) {
    if (value.im.is_zero()) {
        Rational r;
        if (!value.re.is_negative() && rational_sqrt(value.re, r)) {
            root = QComplex(r);
            return true;
        }
        if (value.re.is_negative() && rational_sqrt(-value.re, r)) {
            root = QComplex(Rational(0), r);
            return true;
        }
        return false;
    }
    // (u+vi)^2 = a+bi  =>  u^2 = (a + |a+bi|)/2, v = b/(2u); all must stay rational.
    Rational a = value.re, b = value.im;
    Rational mod2 = a * a + b * b;
    Rational mod;
    if (!rational_sqrt(mod2, mod)) return false;
    Rational u2 = (a + mod) / Rational(2);
    Rational u;
    if (!rational_sqrt(u2, u) || u.is_zero()) return false;
    root = QComplex(u, b / (Rational(2) * u));
    return true;
}

} // namespace stokeskit
