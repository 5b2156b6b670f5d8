#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "race/bigint.hpp"
#include "race/rational.hpp"
#include "race/rng.hpp"

#include <cmath>

using race::BigInt;
using race::Rat;

namespace {

long long rand_ll(race::SplitMix64& rng, int bits) {
    const uint64_t mask = bits >= 64 ? ~0ull : ((1ull << bits) - 1);
    auto v = static_cast<long long>(rng.next() & mask);
    return (rng.next() & 1) ? -v : v;
}

}  // namespace

TEST_CASE("small integer arithmetic round-trips") {
    CHECK(BigInt(0).to_string() == "0");
    CHECK(BigInt(-1).to_string() == "-1");
    CHECK((BigInt(7) * BigInt(-6)).to_int64() == -42);
    CHECK((BigInt(1) - BigInt(100)).to_int64() == -99);
    CHECK(BigInt::from_string("-123456789012345678901234567890").to_string() ==
          "-123456789012345678901234567890");
}

TEST_CASE("ring ops agree with int128 on random 60-bit operands") {
    race::SplitMix64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        const long long a = rand_ll(rng, 60), b = rand_ll(rng, 60);
        CHECK((BigInt(a) + BigInt(b)).to_string() ==
              BigInt(static_cast<long long>(a + b)).to_string());
        CHECK((BigInt(a) - BigInt(b)).to_string() ==
              BigInt(static_cast<long long>(a - b)).to_string());
        const __int128 p = static_cast<__int128>(a) * b;
        const BigInt prod = BigInt(a) * BigInt(b);
        // rebuild the 120-bit product from 30-bit chunks
        const __int128 chunk = __int128(1) << 30;
        const auto r0 = static_cast<long long>(p % chunk);
        const auto r1 = static_cast<long long>((p / chunk) % chunk);
        const auto r2 = static_cast<long long>(p / chunk / chunk);
        const BigInt expect =
            (BigInt(r2) * BigInt(1ll << 30) + BigInt(r1)) * BigInt(1ll << 30) + BigInt(r0);
        CHECK(prod == expect);
    }
}

TEST_CASE("divmod satisfies a = qb + r with |r| < |b| and sign(r) = sign(a)") {
    race::SplitMix64 rng(7);
    for (int i = 0; i < 3000; ++i) {
        BigInt a = BigInt(rand_ll(rng, 62)) * BigInt(rand_ll(rng, 62)) + BigInt(rand_ll(rng, 40));
        BigInt b = BigInt(rand_ll(rng, i % 2 ? 61 : 18));
        if (b.is_zero()) continue;
        BigInt q, r;
        BigInt::divmod(a, b, q, r);
        CHECK(q * b + r == a);
        CHECK(r.abs() < b.abs());
        if (!r.is_zero()) CHECK(r.sign() == a.sign());
    }
}

TEST_CASE("divmod exercises the add-back branch sizes") {
    // quotient limbs near the base boundary
    BigInt base32 = BigInt(1ll << 32);
    BigInt u = (base32 * base32 * base32) - BigInt(1);
    BigInt v = base32 * base32 - BigInt(1);
    BigInt q, r;
    BigInt::divmod(u, v, q, r);
    CHECK(q * v + r == u);
    CHECK(r.abs() < v.abs());

    // vectors where the trial digit overshoots and must be corrected; random
    // operands essentially never reach this branch
    struct Vec {
        const char *u, *v, *q, *r;
    };
    const Vec vecs[] = {
        {"39614081257132168796771975171", "9223372036854775809", "4294967295",
         "9223372032559808516"},
        {"39614081275578912861891592192", "9223372041149743103", "4294967295",
         "9223372036854775807"},
        {"1461501636990620551282746369243685040191604523008", "18446744069414584325",
         "79228162514264337572069113850", "9223372122754121758"},
        {"170141183460469231731687303715884105727", "9223372039002259457",
         "18446744069414584319", "6442450944"},
    };
    for (const Vec& t : vecs) {
        BigInt::divmod(BigInt::from_string(t.u), BigInt::from_string(t.v), q, r);
        CHECK(q.to_string() == t.q);
        CHECK(r.to_string() == t.r);
    }
}

TEST_CASE("pair index decoding is exact across the triangle") {
    race::SplitMix64 rng(123);
    for (int rep = 0; rep < 5000; ++rep) {
        const int n = 3 + int(rng.next_below(4000));
        const uint64_t pairs = uint64_t(n) * (n - 1) / 2;
        const uint64_t u = rng.next_below(pairs);
        const auto [i, j] = race::pair_from_index(u, n);
        CHECK(0 <= i);
        CHECK(i < j);
        CHECK(j < n);
        CHECK(uint64_t(j) * (j - 1) / 2 + uint64_t(i) == u);
    }
    // boundary indices of a large triangle
    for (int n : {3, 4, 1000, 4000}) {
        const uint64_t pairs = uint64_t(n) * (n - 1) / 2;
        for (uint64_t u : {uint64_t(0), pairs / 2, pairs - 1}) {
            const auto [i, j] = race::pair_from_index(u, n);
            CHECK(uint64_t(j) * (j - 1) / 2 + uint64_t(i) == u);
            CHECK(i < j);
            CHECK(j < n);
        }
    }
}

TEST_CASE("gcd and comparisons") {
    CHECK(BigInt::gcd(BigInt(12), BigInt(-18)).to_int64() == 6);
    CHECK(BigInt::gcd(BigInt(0), BigInt(-5)).to_int64() == 5);
    CHECK(BigInt(-3) < BigInt(2));
    CHECK(BigInt(-3) < BigInt(-2));
    race::SplitMix64 rng(3);
    for (int i = 0; i < 500; ++i) {
        const long long a = rand_ll(rng, 40), b = rand_ll(rng, 40);
        const long long g = std::__gcd(std::abs(a), std::abs(b));
        CHECK(BigInt::gcd(BigInt(a), BigInt(b)).to_int64() == g);
    }
}

TEST_CASE("rationals reduce and order correctly") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-2, -4) == Rat(1, 2));
    CHECK(Rat(2, -4) == Rat(-1, 2));
    CHECK(Rat(0, 7) == Rat(0));
    CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
    CHECK(Rat(1, 3) - Rat(1, 2) == Rat(-1, 6));
    CHECK(Rat(3, 7) * Rat(7, 3) == Rat(1));
    CHECK(Rat(3, 7) / Rat(6, 7) == Rat(1, 2));
    CHECK(Rat(1, 3) < Rat(2, 5));
    CHECK(Rat(-1, 3) > Rat(-2, 5));
    CHECK(Rat(22, 7).to_string() == "22/7");
    CHECK(Rat::from_string("-22/7") == Rat(-22, 7));
}

TEST_CASE("rational field axioms on random operands") {
    race::SplitMix64 rng(11);
    for (int i = 0; i < 800; ++i) {
        Rat a(rand_ll(rng, 30), 1 + (rng.next() & 0xffff));
        Rat b(rand_ll(rng, 30), 1 + (rng.next() & 0xffff));
        Rat c(rand_ll(rng, 30), 1 + (rng.next() & 0xffff));
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
}

TEST_CASE("to_double is accurate for moderate and huge values") {
    CHECK(Rat(1, 3).to_double() == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(Rat(-355, 113).to_double() == doctest::Approx(-355.0 / 113).epsilon(1e-15));
    BigInt big = BigInt::from_string("1");
    for (int i = 0; i < 30; ++i) big *= BigInt(1000000007);
    const Rat huge_ratio(big * BigInt(3), big);
    CHECK(huge_ratio.to_double() == doctest::Approx(3.0).epsilon(1e-12));
    const double d = Rat(BigInt(1), big).to_double();
    CHECK(d >= 0);
    CHECK(d < 1e-200);
}
