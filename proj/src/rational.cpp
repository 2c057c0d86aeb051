#include "stokeskit/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace stokeskit {

namespace {

using i128 = __int128;

long long checked(i128 v) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
        throw std::overflow_error("rational arithmetic overflow");
    return static_cast<long long>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(long long n, long long d) : num_(n), den_(d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = checked(-i128(num_));
        den_ = checked(-i128(den_));
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
    if (num_ == 0) den_ = 1;
}

Rational Rational::parse(const std::string& text) {
    std::size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(text));
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw std::domain_error("bad rational literal: " + text);
    } catch (const std::out_of_range&) {
        throw std::overflow_error("rational literal out of range: " + text);
    }
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

long long Rational::floor() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

Rational& Rational::operator+=(const Rational& o) {
    i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
    i128 d = i128(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = checked(n);
    den_ = checked(d);
    if (num_ == 0) den_ = 1;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += Rational(-o.num_, o.den_); }

Rational& Rational::operator*=(const Rational& o) {
    i128 n = i128(num_) * o.num_;
    i128 d = i128(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = checked(n);
    den_ = checked(d);
    if (num_ == 0) den_ = 1;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    return *this *= Rational(o.den_, o.num_);
}

bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

namespace {

bool perfect_square(long long v, long long& root) {
    if (v < 0) return false;
    long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(v))));
    for (long long c = r > 1 ? r - 1 : 0; c <= r + 1; ++c)
        if (c * c == v) {
            root = c;
            return true;
        }
    return false;
}

} // namespace

bool rational_sqrt(const Rational& value, Rational& root) {
    if (value.is_negative()) return false;
    long long rn = 0, rd = 0;
    if (!perfect_square(value.num(), rn) || !perfect_square(value.den(), rd)) return false;
    root = Rational(rn, rd);
    return true;
}

} // namespace stokeskit
