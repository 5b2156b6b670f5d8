#include "race/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace race {

void Rat::normalize() {
    if (den_.is_zero()) throw std::domain_error("Rat: zero denominator");
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
        num_ /= g;
        den_ /= g;
    }
}

Rat Rat::operator-() const {
    Rat out = *this;
    out.num_ = -out.num_;
    return out;
}

Rat& Rat::operator+=(const Rat& r) {
    num_ = num_ * r.den_ + r.num_ * den_;
    den_ *= r.den_;
    normalize();
    return *this;
}

Rat& Rat::operator-=(const Rat& r) {
    num_ = num_ * r.den_ - r.num_ * den_;
    den_ *= r.den_;
    normalize();
    return *this;
}

Rat& Rat::operator*=(const Rat& r) {
    num_ *= r.num_;
    den_ *= r.den_;
    normalize();
    return *this;
}

Rat& Rat::operator/=(const Rat& r) {
    if (r.is_zero()) throw std::domain_error("Rat: division by zero");
    num_ *= r.den_;
    den_ *= r.num_;
    normalize();
    return *this;
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    return (a.num_ * b.den_) <=> (b.num_ * a.den_);
}

double Rat::to_double() const {
    double mn, md;
    long en, ed;
    num_.frexp_approx(mn, en);
    den_.frexp_approx(md, ed);
    if (mn == 0.0) return 0.0;
    long e = en - ed;
    if (e > 2000) return mn > 0 ? HUGE_VAL : -HUGE_VAL;
    if (e < -2000) return 0.0;
    return std::ldexp(mn / md, static_cast<int>(e));
}

std::string Rat::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

Rat Rat::from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(BigInt::from_string(s));
    return Rat(BigInt::from_string(s.substr(0, slash)),
               BigInt::from_string(s.substr(slash + 1)));
}

}  // namespace race
