#pragma once

// Decompositions of 4/n into three distinct unit fractions: closed forms,
// Rosati quadruples, triple reconstruction and an independent brute-force
// search.

#include <optional>
#include <tuple>
#include <vector>

#include "essieve/arith.hpp"

namespace ess {

// 4/n = 1/x1 + 1/x2 + 1/x3 with x1 < x2 < x3. Denominators are 128-bit:
// the quadratic families produce values beyond 2^64 well inside the
// tested parameter ranges.
struct UnitFractionTriple {
    u64 n = 0;
    u128 x1 = 0, x2 = 0, x3 = 0;

    bool operator==(const UnitFractionTriple&) const = default;
    auto operator<=>(const UnitFractionTriple&) const = default;
};

inline UnitFractionTriple make_triple(u64 n, u128 a, u128 b, u128 c) {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return UnitFractionTriple{n, a, b, c};
}

namespace detail {

// Exact reduced fraction with stepwise unit-fraction subtraction.
struct Fraction {
    u128 num, den;

    void reduce() {
        u128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    // this -= 1/x; false when the result would go negative. A reduced 1/x
    // minus 1/x short-circuits to zero, so valid triples never blow up the
    // denominator product.
    bool subtract_unit(u128 x) {
        u128 nx = mul_checked(num, x);
        if (nx < den) return false;
        if (nx == den) {
            num = 0;
            den = 1;
            return true;
        }
        num = nx - den;
        den = mul_checked(den, x);
        reduce();
        return true;
    }
};

} // namespace detail

/// Exact check of 1/x1 + 1/x2 + 1/x3 = 4/n with strict ordering x1 < x2 < x3.
inline bool verify_triple(const UnitFractionTriple& t) {
    if (t.n == 0 || t.x1 == 0) return false;
    if (!(t.x1 < t.x2 && t.x2 < t.x3)) return false;
    detail::Fraction r{4, t.n};
    r.reduce();
    if (!r.subtract_unit(t.x1)) return false;
    if (!r.subtract_unit(t.x2)) return false;
    if (!r.subtract_unit(t.x3)) return false;
    return r.num == 0;
}

/// 1/t = 1/(t+1) + 1/(t(t+1)); t = 1 would duplicate the denominators.
inline std::pair<u64, u64> split_unit_fraction(u64 t) {
    if (t <= 1) throw DegenerateSplit("split_unit_fraction: t must be >= 2");
    u128 prod = static_cast<u128>(t) * (t + 1);
    if (prod > ~static_cast<u64>(0))
        throw std::overflow_error("split_unit_fraction: t(t+1) exceeds 64 bits");
    return {t + 1, static_cast<u64>(prod)};
}

/// Closed-form decomposition for n = -1 (mod 3), n = -1 (mod 4) and
/// n = -3 (mod 8); empty for every other class (notably n = 1 mod 24).
inline std::optional<UnitFractionTriple> closed_form_decompose(u64 n) {
    if (n < 3) return std::nullopt;
    if (n % 3 == 2) {
        u64 t = (n + 1) / 3;
        return make_triple(n, t, n, static_cast<u128>(t) * n);
    }
    if (n % 4 == 3) {
        // 4/n = 1/t + 1/(tn); the larger term is split to get three
        // distinct denominators.
        u64 t = (n + 1) / 4;
        u128 tn = static_cast<u128>(t) * n;
        return make_triple(n, t, tn + 1, mul_checked(tn, tn + 1));
    }
    if (n % 8 == 5) {
        u64 t = (n + 3) / 8;
        u128 tn = static_cast<u128>(t) * n;
        return make_triple(n, 2 * static_cast<u128>(t), tn, 2 * tn);
    }
    return std::nullopt;
}

/// Triple for 4/(k*n) from a triple for 4/n.
inline UnitFractionTriple scale_decomposition(const UnitFractionTriple& t, u64 k) {
    if (k == 0) throw InvalidModulus("scale_decomposition: k must be >= 1");
    u128 kn = static_cast<u128>(t.n) * k;
    if (kn > ~static_cast<u64>(0))
        throw std::overflow_error("scale_decomposition: k*n exceeds 64 bits");
    return UnitFractionTriple{static_cast<u64>(kn), mul_checked(t.x1, k), mul_checked(t.x2, k),
                              mul_checked(t.x3, k)};
}

enum class RosatiKind { RelationOne, RelationTwo };

// Positive (A,B,C,D) with 4ABCD = A+B+pC (relation one) or
// 4ABCD = p(A+B)+C (relation two), together with the derived values
//   E = (A+B)/C            (so CE = A+B)
//   F = 4BCD - 1           (relation one)
//   F = 4BCD - p, FE = 4B^2*D + 1   (relation two)
// E is 0 when C does not divide A+B (possible for composite p only).
struct RosatiQuadruple {
    RosatiKind kind = RosatiKind::RelationOne;
    u64 A = 0, B = 0, C = 0, D = 0;
    u64 E = 0;
    u64 F = 0;

    bool operator==(const RosatiQuadruple&) const = default;
};

/// True iff the relation of q.kind holds for p together with the
/// coprimality side condition ((ABD,p)=1 resp. (ABCD,p)=1).
inline bool verify_quadruple(const RosatiQuadruple& q, u64 p) {
    if (q.A == 0 || q.B == 0 || q.C == 0 || q.D == 0 || p == 0) return false;
    u128 lhs = mul_checked(mul_checked(static_cast<u128>(4) * q.A, q.B),
                           mul_checked(static_cast<u128>(q.C), q.D));
    if (q.kind == RosatiKind::RelationOne) {
        u128 rhs = static_cast<u128>(q.A) + q.B + mul_checked(static_cast<u128>(p), q.C);
        return lhs == rhs && gcd(q.A, p) == 1 && gcd(q.B, p) == 1 && gcd(q.D, p) == 1;
    }
    u128 rhs = mul_checked(static_cast<u128>(p), static_cast<u128>(q.A) + q.B) + q.C;
    return lhs == rhs && gcd(q.A, p) == 1 && gcd(q.B, p) == 1 && gcd(q.C, p) == 1 &&
           gcd(q.D, p) == 1;
}

/// Builds a quadruple for p, checking the relation and deriving E and F.
inline RosatiQuadruple make_quadruple(RosatiKind kind, u64 A, u64 B, u64 C, u64 D, u64 p) {
    RosatiQuadruple q{kind, A, B, C, D, 0, 0};
    if (!verify_quadruple(q, p))
        throw InvalidQuadruple("make_quadruple: relation or side condition fails");
    u64 sum = A + B;
    q.E = sum % C == 0 ? sum / C : 0;
    u128 bcd4 = static_cast<u128>(4) * B * C * D;
    u128 f = kind == RosatiKind::RelationOne ? bcd4 - 1 : bcd4 - p;
    if (f > ~static_cast<u64>(0))
        throw InvalidQuadruple("make_quadruple: F exceeds 64 bits");
    q.F = static_cast<u64>(f);
    if (q.E != 0) {
        // FE = 4B^2*D + p (relation one) resp. 4B^2*D + 1 (relation two)
        u128 fe = mul_checked(f, q.E);
        u128 want = static_cast<u128>(4) * B * B * D +
                    (kind == RosatiKind::RelationOne ? p : 1);
        if (fe != want) throw InvalidQuadruple("make_quadruple: FE invariant fails");
    }
    return q;
}

/// Denominators of 4/p from a verified quadruple:
/// relation one -> {pBCD, pACD, ABD}, relation two -> {BCD, ACD, pABD}.
inline UnitFractionTriple quadruple_to_triple(const RosatiQuadruple& q, u64 p) {
    if (!verify_quadruple(q, p))
        throw InvalidQuadruple("quadruple_to_triple: relation or side condition fails");
    u128 cd = static_cast<u128>(q.C) * q.D;
    u128 x1, x2, x3;
    if (q.kind == RosatiKind::RelationOne) {
        x1 = mul_checked(mul_checked(cd, q.B), p);
        x2 = mul_checked(mul_checked(cd, q.A), p);
        x3 = static_cast<u128>(q.A) * q.B * q.D;
    } else {
        x1 = mul_checked(cd, q.B);
        x2 = mul_checked(cd, q.A);
        x3 = mul_checked(static_cast<u128>(q.A) * q.B * q.D, p);
    }
    if (x1 == x2 || x1 == x3 || x2 == x3)
        throw DuplicateDenominators("quadruple_to_triple: coinciding denominators");
    return make_triple(p, x1, x2, x3);
}

// largest n the brute-force oracle accepts; keeps n * x1 inside 64 bits
inline constexpr u64 kBruteForceOracleLimit = 4'000'000'000ull;

/// Independent brute-force oracle: enumerates x1 in (n/4, 3n/4], then all
/// (x2, x3) solving the remainder exactly via the divisor identity
/// (a*x2 - b)(a*x3 - b) = b^2 for the reduced remainder a/b.
/// Returns the lexicographically smallest triple, or all of them.
inline std::vector<UnitFractionTriple> brute_force_decompose(u64 n, bool want_all = false) {
    std::vector<UnitFractionTriple> out;
    if (n < 2) return out;
    if (n > kBruteForceOracleLimit)
        throw std::invalid_argument("brute_force_decompose: n exceeds the oracle's exact range");
    auto n_factors = factorize(n);
    for (u64 x1 = n / 4 + 1; 4 * x1 <= 3 * n; ++x1) {
        u64 a = 4 * x1 - n;
        u64 b = n * x1;
        u64 g = gcd(a, b);
        a /= g;
        b /= g;
        // divisors of b^2 from the factorizations of n, x1 and g
        std::vector<std::pair<u64, int>> bf = n_factors;
        for (const auto& [p, e] : factorize(x1)) {
            bool found = false;
            for (auto& [q, f] : bf)
                if (q == p) {
                    f += e;
                    found = true;
                }
            if (!found) bf.emplace_back(p, e);
        }
        for (const auto& [p, e] : factorize(g)) {
            for (auto& [q, f] : bf)
                if (q == p) f -= e;
        }
        std::erase_if(bf, [](const auto& pe) { return pe.second == 0; });
        for (auto& [p, e] : bf) e *= 2; // b^2
        std::optional<UnitFractionTriple> best;
        for_each_divisor(bf, [&](u64 d) {
            if (d == 0 || d >= b) return; // x2 < x3 requires d < b
            if (static_cast<u128>(b) * b % d != 0) return; // divisor enum can wrap past 2^64
            u128 db = static_cast<u128>(d) + b;
            if (db % a != 0) return;
            u64 x2 = static_cast<u64>(db / a);
            if (x2 <= x1) return;
            u128 x3 = (static_cast<u128>(b) * b / d + b) / a;
            UnitFractionTriple t{n, x1, x2, x3};
            if (want_all)
                out.push_back(t);
            else if (!best || t.x2 < best->x2)
                best = t;
        });
        if (!want_all && best) {
            out.push_back(*best);
            return out;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace ess
