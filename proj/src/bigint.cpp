#include "race/bigint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace race {

namespace {
constexpr uint64_t kBase = uint64_t(1) << 32;
}

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    // avoid UB on LLONG_MIN
    uint64_t mag = v < 0 ? ~static_cast<uint64_t>(v) + 1 : static_cast<uint64_t>(v);
    limbs_.push_back(static_cast<uint32_t>(mag & 0xffffffffu));
    if (mag >> 32) limbs_.push_back(static_cast<uint32_t>(mag >> 32));
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    const auto& lo = a.size() >= b.size() ? b : a;
    const auto& hi = a.size() >= b.size() ? a : b;
    std::vector<uint32_t> out(hi.size() + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < hi.size(); ++i) {
        uint64_t s = carry + hi[i] + (i < lo.size() ? lo[i] : 0);
        out[i] = static_cast<uint32_t>(s & 0xffffffffu);
        carry = s >> 32;
    }
    out[hi.size()] = static_cast<uint32_t>(carry);
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out(a.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t d = int64_t(a[i]) - borrow - (i < b.size() ? int64_t(b[i]) : 0);
        if (d < 0) {
            d += int64_t(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        out[i] = static_cast<uint32_t>(d);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<uint32_t> BigInt::mul_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<uint32_t> out(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t carry = 0;
        uint64_t ai = a[i];
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t cur = uint64_t(out[i + j]) + ai * b[j] + carry;
            out[i + j] = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        size_t k = i + b.size();
        while (carry) {
            uint64_t cur = uint64_t(out[k]) + carry;
            out[k] = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
            ++k;
        }
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

// Knuth TAOCP vol 2, Algorithm D, base 2^32.
void BigInt::divmod_mag(const std::vector<uint32_t>& u_in, const std::vector<uint32_t>& v_in,
                        std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
    if (v_in.empty()) throw std::domain_error("BigInt: division by zero");
    if (cmp_mag(u_in, v_in) < 0) {
        q.clear();
        r = u_in;
        return;
    }
    if (v_in.size() == 1) {
        uint64_t d = v_in[0];
        q.assign(u_in.size(), 0);
        uint64_t rem = 0;
        for (size_t i = u_in.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | u_in[i];
            q[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        r.clear();
        if (rem) r.push_back(static_cast<uint32_t>(rem));
        return;
    }

    const size_t n = v_in.size();
    const size_t m = u_in.size() - n;
    const int shift = std::countl_zero(v_in.back());

    // normalized copies: v.back() has its top bit set
    std::vector<uint32_t> v(n), u(u_in.size() + 1, 0);
    for (size_t i = n; i-- > 0;) {
        uint64_t cur = uint64_t(v_in[i]) << shift;
        if (i > 0 && shift) cur |= uint64_t(v_in[i - 1]) >> (32 - shift);
        v[i] = static_cast<uint32_t>(cur & 0xffffffffu);
    }
    for (size_t i = u_in.size(); i-- > 0;) {
        uint64_t cur = uint64_t(u_in[i]) << shift;
        if (i > 0 && shift) cur |= uint64_t(u_in[i - 1]) >> (32 - shift);
        u[i] = static_cast<uint32_t>(cur & 0xffffffffu);
    }
    if (shift) u[u_in.size()] = static_cast<uint32_t>(uint64_t(u_in.back()) >> (32 - shift));

    q.assign(m + 1, 0);
    const uint64_t vtop = v[n - 1], vsecond = v[n - 2];
    for (size_t j = m + 1; j-- > 0;) {
        uint64_t num = (uint64_t(u[j + n]) << 32) | u[j + n - 1];
        uint64_t qhat = num / vtop;
        uint64_t rhat = num % vtop;
        while (qhat >= kBase || qhat * vsecond > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += vtop;
            if (rhat >= kBase) break;
        }
        // multiply-subtract qhat*v from u[j .. j+n]
        int64_t borrow = 0;
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            int64_t d = int64_t(u[i + j]) - int64_t(p & 0xffffffffu) - borrow;
            if (d < 0) {
                d += int64_t(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u[i + j] = static_cast<uint32_t>(d);
        }
        int64_t d = int64_t(u[j + n]) - int64_t(carry) - borrow;
        if (d < 0) {
            // qhat was one too large; add v back
            d += int64_t(kBase);
            --qhat;
            uint64_t c = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t s = uint64_t(u[i + j]) + v[i] + c;
                u[i + j] = static_cast<uint32_t>(s & 0xffffffffu);
                c = s >> 32;
            }
            d += int64_t(c);
            d &= int64_t(kBase - 1);
        }
        u[j + n] = static_cast<uint32_t>(d);
        q[j] = static_cast<uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();

    // denormalize remainder
    r.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        uint64_t cur = uint64_t(u[i]) >> shift;
        if (shift && i + 1 < u.size()) cur |= (uint64_t(u[i + 1]) << (32 - shift)) & 0xffffffffu;
        r[i] = static_cast<uint32_t>(cur);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt BigInt::operator-() const {
    BigInt out = *this;
    out.sign_ = -out.sign_;
    return out;
}

BigInt BigInt::abs() const {
    BigInt out = *this;
    if (out.sign_ < 0) out.sign_ = 1;
    return out;
}

BigInt& BigInt::operator+=(const BigInt& rhs) {
    if (rhs.sign_ == 0) return *this;
    if (sign_ == 0) return *this = rhs;
    if (sign_ == rhs.sign_) {
        limbs_ = add_mag(limbs_, rhs.limbs_);
    } else {
        int c = cmp_mag(limbs_, rhs.limbs_);
        if (c == 0) {
            limbs_.clear();
            sign_ = 0;
        } else if (c > 0) {
            limbs_ = sub_mag(limbs_, rhs.limbs_);
        } else {
            limbs_ = sub_mag(rhs.limbs_, limbs_);
            sign_ = rhs.sign_;
        }
    }
    trim();
    return *this;
}

BigInt& BigInt::operator-=(const BigInt& rhs) { return *this += -rhs; }

BigInt& BigInt::operator*=(const BigInt& rhs) {
    if (sign_ == 0 || rhs.sign_ == 0) {
        limbs_.clear();
        sign_ = 0;
        return *this;
    }
    limbs_ = mul_mag(limbs_, rhs.limbs_);
    sign_ *= rhs.sign_;
    trim();
    return *this;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    std::vector<uint32_t> qm, rm;
    divmod_mag(a.limbs_, b.limbs_, qm, rm);
    q.limbs_ = std::move(qm);
    q.sign_ = q.limbs_.empty() ? 0 : a.sign_ * b.sign_;
    r.limbs_ = std::move(rm);
    r.sign_ = r.limbs_.empty() ? 0 : a.sign_;
}

BigInt& BigInt::operator/=(const BigInt& rhs) {
    BigInt q, r;
    divmod(*this, rhs, q, r);
    return *this = std::move(q);
}

BigInt& BigInt::operator%=(const BigInt& rhs) {
    BigInt q, r;
    divmod(*this, rhs, q, r);
    return *this = std::move(r);
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.sign_ = a.limbs_.empty() ? 0 : 1;
    b.sign_ = b.limbs_.empty() ? 0 : 1;
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.limbs_ == b.limbs_;
}

std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    int c = BigInt::cmp_mag(a.limbs_, b.limbs_) * (a.sign_ < 0 ? -1 : 1);
    return c <=> 0;
}

double BigInt::to_double() const {
    double m;
    long e;
    frexp_approx(m, e);
    return std::ldexp(m, static_cast<int>(std::min<long>(e, 40000)));
}

void BigInt::frexp_approx(double& mantissa, long& exponent) const {
    if (sign_ == 0) {
        mantissa = 0.0;
        exponent = 0;
        return;
    }
    // top 64 bits of the magnitude
    size_t nbits = bit_length();
    uint64_t top = 0;
    for (size_t got = 0; got < 64;) {
        long bit = long(nbits) - 1 - long(got);
        if (bit < 0) {
            top <<= (64 - got);
            break;
        }
        size_t limb = size_t(bit) / 32;
        top = (top << 1) | ((limbs_[limb] >> (bit % 32)) & 1u);
        ++got;
    }
    mantissa = std::ldexp(double(top), -64) * sign_;
    exponent = long(nbits);
}

size_t BigInt::bit_length() const {
    if (limbs_.empty()) return 0;
    return 32 * (limbs_.size() - 1) + (32 - std::countl_zero(limbs_.back()));
}

bool BigInt::fits_int64() const {
    if (limbs_.size() > 2) return false;
    if (limbs_.size() < 2) return true;
    uint64_t mag = (uint64_t(limbs_[1]) << 32) | limbs_[0];
    if (sign_ < 0) return mag <= (uint64_t(1) << 63);
    return mag < (uint64_t(1) << 63);
}

long long BigInt::to_int64() const {
    if (!fits_int64()) throw std::overflow_error("BigInt: value does not fit int64");
    if (limbs_.empty()) return 0;
    uint64_t mag = limbs_[0];
    if (limbs_.size() == 2) mag |= uint64_t(limbs_[1]) << 32;
    return sign_ < 0 ? -static_cast<long long>(mag) : static_cast<long long>(mag);
}

std::string BigInt::to_string() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> mag = limbs_;
    std::string digits;
    while (!mag.empty()) {
        uint64_t rem = 0;
        for (size_t i = mag.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | mag[i];
            mag[i] = static_cast<uint32_t>(cur / 1000000000u);
            rem = cur % 1000000000u;
        }
        while (!mag.empty() && mag.back() == 0) mag.pop_back();
        for (int d = 0; d < 9; ++d) {
            digits.push_back(char('0' + rem % 10));
            rem /= 10;
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (sign_ < 0) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

BigInt BigInt::from_string(const std::string& s) {
    BigInt out;
    size_t i = 0;
    int sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') sign = -1;
        ++i;
    }
    if (i == s.size()) throw std::invalid_argument("BigInt: empty numeral");
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
        out *= BigInt(10);
        out += BigInt(s[i] - '0');
    }
    if (!out.is_zero()) out.sign_ = sign;
    return out;
}

}  // namespace race
