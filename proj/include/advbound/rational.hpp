#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace advbound {

// Exact rational arithmetic for transition probabilities, residuals and
// cross entries. Always normalized with a positive denominator; operations
// that would leave the 64-bit range throw instead of silently wrapping.
class Rat {
public:
    constexpr Rat() = default;
    constexpr Rat(long long n) : num_(n) {}
    Rat(long long n, long long d) { *this = make(n, d); }

    constexpr long long numerator() const { return num_; }
    constexpr long long denominator() const { return den_; }

    Rat& operator+=(const Rat& o) {
        return *this = make(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    }
    Rat& operator-=(const Rat& o) {
        return *this = make(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    }
    Rat& operator*=(const Rat& o) {
        return *this = make(i128(num_) * o.num_, i128(den_) * o.den_);
    }
    Rat& operator/=(const Rat& o) {
        return *this = make(i128(num_) * o.den_, i128(den_) * o.num_);
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    constexpr Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend constexpr bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend constexpr bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend constexpr bool operator<(const Rat& a, const Rat& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend constexpr bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend constexpr bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend constexpr bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

private:
    using i128 = __int128;
    long long num_ = 0;
    long long den_ = 1;

    static Rat make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 a = n < 0 ? -n : n, b = d;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr i128 lo = -i128(0x7fffffffffffffffLL) - 1, hi = 0x7fffffffffffffffLL;
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("rational overflows 64-bit storage");
        Rat r;
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }
};

inline double to_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline nlohmann::json rat_to_json(const Rat& r) {
    return nlohmann::json{{"num", r.numerator()}, {"den", r.denominator()}};
}

inline Rat rat_from_json(const nlohmann::json& j) {
    return Rat(j.at("num").get<long long>(), j.at("den").get<long long>());
}

inline std::string rat_to_string(const Rat& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline long long checked_mul(long long a, long long b) {
    long long out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("integer overflow in exact arithmetic");
    return out;
}

long long binomial(int n, int k);

// Number of ways to pick disjoint labeled subsets of the given sizes from n.
long long multinomial(int n, const std::vector<int>& parts);

// Arc weight stored through its exact square; the value itself is often
// irrational and only enters diagonal (floating point) computations.
struct WeightSq {
    Rat sq{0};

    WeightSq() = default;
    explicit WeightSq(Rat s) : sq(s) {
        if (sq < Rat(0)) throw std::invalid_argument("weight square must be nonnegative");
    }

    double value() const;
    bool zero() const { return sq == Rat(0); }

    // Serialized as num/den * sqrt(sqrtFactor).
    nlohmann::json to_json() const;
    static WeightSq from_json(const nlohmann::json&);
};

}  // namespace advbound
