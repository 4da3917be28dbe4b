#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace betsim {

// Exact rational arithmetic for money and accuracy bookkeeping. Pay-out
// identities (e.g. the Pick 'em swing times a count) must hold algebraically,
// so no floating point on the money path. Values are kept reduced with a
// positive denominator; intermediates run through 128-bit integers and the
// reduced result throws if it no longer fits 64 bits.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}

    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        assign(num, den);
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 num = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 den = i128(a.den_) * b.den_;
        return make(num, den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    // Canonical form makes fieldwise equality exact equality.
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // Fixed-point display, rounding half away from zero. Internal values stay
    // exact; this is the only place money or accuracies get rounded.
    std::string to_string(int decimals) const {
        __int128 scale = 1;
        for (int i = 0; i < decimals; ++i) scale *= 10;
        bool negative = num_ < 0;
        __int128 n = negative ? -i128(num_) : i128(num_);
        __int128 scaled = n * scale;
        __int128 q = scaled / den_;
        __int128 r = scaled % den_;
        if (2 * r >= den_) ++q;
        __int128 whole = q / scale;
        __int128 frac = q % scale;
        std::string out = negative && q != 0 ? "-" : "";
        out += u128_to_string(whole);
        if (decimals > 0) {
            std::string f = u128_to_string(frac);
            out += '.';
            out += std::string(static_cast<std::size_t>(decimals) - f.size(), '0');
            out += f;
        }
        return out;
    }

private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static std::int64_t narrow(__int128 v) {
        if (v > std::numeric_limits<std::int64_t>::max() ||
            v < std::numeric_limits<std::int64_t>::min())
            throw std::overflow_error("Rational: value exceeds 64-bit range after reduction");
        return static_cast<std::int64_t>(v);
    }

    static Rational make(__int128 num, __int128 den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        Rational r;
        r.num_ = narrow(num);
        r.den_ = num == 0 ? 1 : narrow(den);
        return r;
    }

    static std::string u128_to_string(__int128 v) {
        if (v == 0) return "0";
        std::string s;
        while (v > 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        return s;
    }

    void assign(std::int64_t num, std::int64_t den) { *this = make(num, den); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace betsim
