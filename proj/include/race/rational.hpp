#pragma once

#include "race/bigint.hpp"

#include <compare>
#include <string>

namespace race {

// Exact rational, always reduced, denominator > 0.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long v) : num_(v), den_(1) {}
    Rat(long long num, long long den) : num_(num), den_(den) { normalize(); }
    Rat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    explicit Rat(BigInt num) : num_(std::move(num)), den_(1) {}

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_.is_one(); }
    int sign() const { return num_.sign(); }

    Rat operator-() const;
    Rat& operator+=(const Rat& r);
    Rat& operator-=(const Rat& r);
    Rat& operator*=(const Rat& r);
    Rat& operator/=(const Rat& r);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

    Rat abs() const { return num_.is_negative() ? -*this : *this; }

    double to_double() const;
    std::string to_string() const;  // "p/q", or "p" when integral
    static Rat from_string(const std::string& s);

private:
    BigInt num_, den_;
    void normalize();
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace race
