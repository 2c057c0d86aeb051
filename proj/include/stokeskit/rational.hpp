#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stokeskit {

// Exact rational on 64-bit numerator/denominator, always reduced, den > 0.
// Intermediate products go through __int128 and overflow raises std::overflow_error
// instead of wrapping silently.
class Rational {
public:
    constexpr Rational() = default;
    Rational(long long n) : num_(n) {}
    Rational(long long n, long long d);

    static Rational parse(const std::string& text); // "p" or "p/q"

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    // Largest integer <= value.
    long long floor() const;

    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    void normalize();

    long long num_ = 0;
    long long den_ = 1;
};

// Exact square root of a nonnegative rational, if it exists.
bool rational_sqrt(const Rational& value, Rational& root);

} // namespace stokeskit
