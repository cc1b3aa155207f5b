#pragma once

// Exact modular-arithmetic kernel shared by the other modules.
// All public operations are exact for operands up to 2^63; internal
// products go through 128-bit intermediates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "essieve/errors.hpp"

namespace ess {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    char buf[40];
    int pos = 0;
    while (v > 0) {
        buf[pos++] = static_cast<char>('0' + static_cast<unsigned>(v % 10));
        v /= 10;
    }
    return std::string(std::make_reverse_iterator(buf + pos),
                       std::make_reverse_iterator(buf));
}

inline u128 mul_checked(u128 a, u128 b) {
    if (a != 0 && b > ~static_cast<u128>(0) / a)
        throw std::overflow_error("128-bit product overflow");
    return a * b;
}

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

inline u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline u64 lcm(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd(a, b) * b;
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) % m * (static_cast<u128>(b) % m) % m);
}

/// Floor of the square root, exact for the full u64 range.
inline u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Root of n when n is a perfect square, empty otherwise.
inline std::optional<u64> perfect_square_root(u64 n) {
    // squares end in 0,1,4,5,6,9 mod 16 -> quick reject for the sieve hot path
    static constexpr bool kSquareMod16[16] = {true,  true,  false, false,
                                              true,  false, false, false,
                                              false, true,  false, false,
                                              false, false, false, false};
    if (!kSquareMod16[n & 15]) return std::nullopt;
    u64 r = isqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

inline bool is_perfect_square(u64 n) { return perfect_square_root(n).has_value(); }

// Residue class b (mod m); the progression m*t + b.
struct ResidueClass {
    u64 modulus = 1;
    u64 residue = 0;

    ResidueClass() = default;
    ResidueClass(u64 m, u64 r) : modulus(m), residue(r % (m == 0 ? 1 : m)) {
        if (m == 0) throw InvalidModulus("residue class modulus must be >= 1");
    }

    bool operator==(const ResidueClass&) const = default;
    auto operator<=>(const ResidueClass&) const = default;

    bool contains(u64 n) const { return n % modulus == residue; }
};

/// Inverse of x modulo m (extended Euclid); throws NotInvertible when gcd(x,m) != 1.
inline u64 mod_inverse(i64 x, u64 m) {
    if (m == 0) throw InvalidModulus("mod_inverse: modulus must be >= 1");
    if (m == 1) return 0;
    i64 mm = static_cast<i64>(m);
    i64 a = x % mm;
    if (a < 0) a += mm;
    i64 r0 = mm, r1 = a;
    i64 t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        i64 t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (r0 != 1) throw NotInvertible("mod_inverse: arguments are not coprime");
    if (t0 < 0) t0 += mm;
    return static_cast<u64>(t0);
}

/// Combines two residue classes by the Chinese remainder theorem.
/// Moduli need not be coprime; empty result means the classes are incompatible.
inline std::optional<ResidueClass> crt_combine(const ResidueClass& c1, const ResidueClass& c2) {
    u64 m1 = c1.modulus, m2 = c2.modulus;
    u64 g = gcd(m1, m2);
    u64 r1 = c1.residue, r2 = c2.residue;
    u64 diff = r2 >= r1 ? r2 - r1 : r1 - r2;
    if (diff % g != 0) return std::nullopt;
    u128 l128 = static_cast<u128>(m1 / g) * m2;
    if (l128 > ~static_cast<u64>(0))
        throw std::overflow_error("crt_combine: lcm exceeds 64 bits");
    u64 l = static_cast<u64>(l128);
    // x = r1 + m1 * k, with k = (r2 - r1)/g * inv(m1/g) mod (m2/g)
    u64 m2g = m2 / g;
    if (m2g == 1) return ResidueClass(l, r1 % l);
    u64 d = (diff / g) % m2g;
    if (r2 < r1 && d != 0) d = m2g - d;
    u64 k = mulmod(d, mod_inverse(static_cast<i64>((m1 / g) % m2g), m2g), m2g);
    u64 x = static_cast<u64>((static_cast<u128>(m1) * k + r1) % l);
    return ResidueClass(l, x);
}

/// Jacobi symbol (a/n) for odd n >= 1.
inline int jacobi(i64 a, u64 n) {
    if (n % 2 == 0) throw InvalidModulus("jacobi: modulus must be odd");
    u64 x;
    int sign = 1;
    if (a < 0) {
        // (-1/n) = (-1)^((n-1)/2)
        if (n % 4 == 3) sign = -sign;
        x = static_cast<u64>(-a) % n;
    } else {
        x = static_cast<u64>(a) % n;
    }
    u64 y = n;
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            u64 y8 = y % 8;
            if (y8 == 3 || y8 == 5) sign = -sign;
        }
        std::swap(x, y);
        if (x % 4 == 3 && y % 4 == 3) sign = -sign;
        x %= y;
    }
    return y == 1 ? sign : 0;
}

/// All divisors of n (or only the odd ones), ascending. Trial division.
inline std::vector<u64> divisors(u64 n, bool odd_only = false) {
    if (n == 0) throw InvalidModulus("divisors: n must be >= 1");
    if (odd_only)
        while (n % 2 == 0) n /= 2;
    std::vector<u64> out;
    u64 r = isqrt(n);
    for (u64 d = 1; d <= r; ++d) {
        if (n % d != 0) continue;
        out.push_back(d);
        if (d != n / d) out.push_back(n / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline const std::vector<u32>& small_primes() {
    static const std::vector<u32> primes = [] {
        constexpr u32 kLimit = 1 << 20;
        std::vector<bool> composite(kLimit, false);
        std::vector<u32> ps;
        for (u32 i = 2; i < kLimit; ++i) {
            if (composite[i]) continue;
            ps.push_back(i);
            for (u64 j = static_cast<u64>(i) * i; j < kLimit; j += i) composite[j] = true;
        }
        return ps;
    }();
    return primes;
}

} // namespace detail

/// Prime factorization (p, multiplicity) by trial division; exact for n
/// up to the square of the internal prime table limit (~2^40).
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> out;
    if (n <= 1) return out;
    for (u32 p : detail::small_primes()) {
        if (static_cast<u64>(p) * p > n) break;
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u32 p : detail::small_primes()) {
        if (static_cast<u64>(p) * p > n) return true;
        if (n % p == 0) return n == p;
    }
    return true;
}

/// Calls fn(d) for every divisor d of the number with the given factorization.
template <typename Fn>
void for_each_divisor(const std::vector<std::pair<u64, int>>& factors, Fn&& fn) {
    std::vector<u64> divs{1};
    for (const auto& [p, e] : factors) {
        std::size_t count = divs.size();
        u64 pk = 1;
        for (int i = 0; i < e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < count; ++j) divs.push_back(divs[j] * pk);
        }
    }
    for (u64 d : divs) fn(d);
}

/// Quadratic-residue test modulo a for gcd(b, a) = 1, via the prime-power
/// factorization of a.
inline bool is_quadratic_residue(u64 b, u64 a) {
    if (a == 0) throw InvalidModulus("is_quadratic_residue: modulus must be >= 1");
    b %= a;
    if (a == 1) return true;
    for (const auto& [p, e] : factorize(a)) {
        if (p == 2) {
            if (e >= 3) {
                if (b % 8 != 1) return false;
            } else if (e == 2) {
                if (b % 4 != 1) return false;
            }
        } else {
            if (jacobi(static_cast<i64>(b % p), p) != 1) return false;
        }
    }
    return true;
}

} // namespace ess
