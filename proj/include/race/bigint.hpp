#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace race {

// Arbitrary-precision signed integer. Base 2^32, little-endian magnitude.
// Covers what exact rational arithmetic needs: ring ops, divmod, gcd, I/O.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);

    static BigInt from_string(const std::string& s);

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    bool is_negative() const { return sign_ < 0; }
    bool is_one() const { return sign_ == 1 && limbs_.size() == 1 && limbs_[0] == 1; }

    BigInt operator-() const;
    BigInt abs() const;

    BigInt& operator+=(const BigInt& rhs);
    BigInt& operator-=(const BigInt& rhs);
    BigInt& operator*=(const BigInt& rhs);
    BigInt& operator/=(const BigInt& rhs);
    BigInt& operator%=(const BigInt& rhs);

    friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
    friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
    friend BigInt operator*(BigInt a, const BigInt& b) { return a *= b; }
    friend BigInt operator/(BigInt a, const BigInt& b) { return a /= b; }
    friend BigInt operator%(BigInt a, const BigInt& b) { return a %= b; }

    // Truncated division: q = trunc(a/b), r = a - q*b (sign of r follows a).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

    static BigInt gcd(BigInt a, BigInt b);  // non-negative

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b);

    double to_double() const;
    // value ~= mantissa * 2^exponent with mantissa in [0.5, 1); 0 -> (0, 0)
    void frexp_approx(double& mantissa, long& exponent) const;
    bool fits_int64() const;
    long long to_int64() const;  // throws std::overflow_error when unrepresentable
    std::string to_string() const;
    size_t bit_length() const;

private:
    int sign_ = 0;
    std::vector<uint32_t> limbs_;  // empty iff zero; no leading-zero limbs

    void trim();
    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    // requires |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    static void divmod_mag(const std::vector<uint32_t>& u, const std::vector<uint32_t>& v,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r);
};

}  // namespace race
