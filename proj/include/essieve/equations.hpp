#pragma once

// The seven reference modular equations. Each one certifies integers and
// whole residue classes a*t + b; together they are complete for odd primes:
// 4/p is a sum of three distinct unit fractions iff one of them holds.
//
//   6a:  B + pC = 0           (mod 4BCD-1)                    constants B,C,D
//   6b:  p + E = 0 (mod 4AB)  and  A + B = 0 (mod E)          constants A,B,E
//   6c:  p + E + 4B^2*D = 0   (mod 4BDE)                      constants B,D,E
//   7a:  pE + 1 = 0 (mod 4AB) and  A + B = 0 (mod E)          constants A,B,E
//   7b:  p + F = 0 (mod 4BC)  and  pB + C = 0 (mod F)         constants B,C,F
//   7c:  p + F = 0 (mod 4BD)  and  4B^2*D + 1 = 0 (mod F)     constants B,D,F
//   7d:  p + F = 0 (mod 4CD)  and  p^2 + 4C^2*D = 0 (mod F)   constants C,D,F
//
// The 6x equations reconstruct relation-one quadruples, the 7x equations
// relation-two ones.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "essieve/decomp.hpp"

namespace ess {

enum class EquationId { E6a, E6b, E6c, E7a, E7b, E7c, E7d };

inline constexpr std::array<EquationId, 7> kAllEquations = {
    EquationId::E6a, EquationId::E6b, EquationId::E6c, EquationId::E7a,
    EquationId::E7b, EquationId::E7c, EquationId::E7d};

inline const char* equation_name(EquationId id) {
    switch (id) {
        case EquationId::E6a: return "6a";
        case EquationId::E6b: return "6b";
        case EquationId::E6c: return "6c";
        case EquationId::E7a: return "7a";
        case EquationId::E7b: return "7b";
        case EquationId::E7c: return "7c";
        case EquationId::E7d: return "7d";
    }
    return "?";
}

inline std::array<const char*, 3> equation_param_names(EquationId id) {
    switch (id) {
        case EquationId::E6a: return {"B", "C", "D"};
        case EquationId::E6b: return {"A", "B", "E"};
        case EquationId::E6c: return {"B", "D", "E"};
        case EquationId::E7a: return {"A", "B", "E"};
        case EquationId::E7b: return {"B", "C", "F"};
        case EquationId::E7c: return {"B", "D", "F"};
        case EquationId::E7d: return {"C", "D", "F"};
    }
    return {"?", "?", "?"};
}

// Concrete constants for one template, in the name order above.
struct EquationParams {
    EquationId id = EquationId::E6a;
    u64 v0 = 0, v1 = 0, v2 = 0;

    bool operator==(const EquationParams&) const = default;
    auto operator<=>(const EquationParams&) const = default;
};

enum class ClosedFormCase { Mod3, Mod4, Mod8 };

// Proof object for "4/n decomposes for every n in the progression":
// either a reference equation with constant parameters, a scaled copy of a
// certificate for the progression divided by k, or one of the closed forms.
struct Certificate {
    enum class Kind { Equation, Scaled, ClosedForm };

    Kind kind = Kind::ClosedForm;
    EquationParams equation;                    // Kind::Equation
    u64 scale = 0;                              // Kind::Scaled
    std::shared_ptr<const Certificate> inner;   // Kind::Scaled
    ClosedFormCase closed_case = ClosedFormCase::Mod3;

    static Certificate make_equation(EquationParams ep) {
        Certificate c;
        c.kind = Kind::Equation;
        c.equation = ep;
        return c;
    }
    static Certificate make_scaled(u64 k, Certificate in) {
        Certificate c;
        c.kind = Kind::Scaled;
        c.scale = k;
        c.inner = std::make_shared<const Certificate>(std::move(in));
        return c;
    }
    static Certificate make_closed_form(ClosedFormCase cc) {
        Certificate c;
        c.kind = Kind::ClosedForm;
        c.closed_case = cc;
        return c;
    }
};

inline std::string describe(const Certificate& c) {
    switch (c.kind) {
        case Certificate::Kind::Equation: {
            auto names = equation_param_names(c.equation.id);
            std::string s = "equation ";
            s += equation_name(c.equation.id);
            s += " (";
            const u64 vals[3] = {c.equation.v0, c.equation.v1, c.equation.v2};
            for (int i = 0; i < 3; ++i) {
                if (i) s += ", ";
                s += names[i];
                s += "=";
                s += std::to_string(vals[i]);
            }
            s += ")";
            return s;
        }
        case Certificate::Kind::Scaled:
            return "scale k=" + std::to_string(c.scale) + " of [" + describe(*c.inner) + "]";
        case Certificate::Kind::ClosedForm:
            switch (c.closed_case) {
                case ClosedFormCase::Mod3: return "closed form n = -1 mod 3";
                case ClosedFormCase::Mod4: return "closed form n = -1 mod 4";
                case ClosedFormCase::Mod8: return "closed form n = -3 mod 8";
            }
    }
    return "?";
}

/// Re-derives whether a certificate genuinely proves the progression a*t+b:
/// closed-form and equation conditions are checked identically in t, scaling
/// recurses. Used by tests and the wheel coverage check.
inline bool certificate_valid_for(const Certificate& cert, u64 a, u64 b) {
    if (a == 0) return false;
    b %= a;
    switch (cert.kind) {
        case Certificate::Kind::ClosedForm:
            switch (cert.closed_case) {
                case ClosedFormCase::Mod3: return a % 3 == 0 && b % 3 == 2;
                case ClosedFormCase::Mod4: return a % 4 == 0 && b % 4 == 3;
                case ClosedFormCase::Mod8: return a % 8 == 0 && b % 8 == 5;
            }
            return false;
        case Certificate::Kind::Scaled: {
            u64 k = cert.scale;
            if (k <= 1 || a % k != 0 || b % k != 0 || !cert.inner) return false;
            return certificate_valid_for(*cert.inner, a / k, b / k);
        }
        case Certificate::Kind::Equation: {
            const u64 x = cert.equation.v0, y = cert.equation.v1, z = cert.equation.v2;
            if (x == 0 || y == 0 || z == 0) return false;
            switch (cert.equation.id) {
                case EquationId::E6a: { // B,C,D
                    u128 q = static_cast<u128>(4) * x * y * z - 1;
                    return a % q == 0 && (x + static_cast<u128>(b) * y) % q == 0;
                }
                case EquationId::E6b: // A,B,E
                    return a % (4 * x * y) == 0 && (b + z) % (4 * x * y) == 0 &&
                           (x + y) % z == 0;
                case EquationId::E6c: { // B,D,E
                    u128 m = static_cast<u128>(4) * x * y * z;
                    return a % m == 0 &&
                           (b + z + static_cast<u128>(4) * x * x * y) % m == 0;
                }
                case EquationId::E7a: // A,B,E
                    return a % (4 * x * y) == 0 &&
                           (static_cast<u128>(b) * z + 1) % (4 * x * y) == 0 &&
                           (x + y) % z == 0;
                case EquationId::E7b: // B,C,F
                    return a % (4 * x * y) == 0 && (b + z) % (4 * x * y) == 0 &&
                           (static_cast<u128>(a) * x) % z == 0 &&
                           (static_cast<u128>(b) * x + y) % z == 0;
                case EquationId::E7c: // B,D,F
                    return a % (4 * x * y) == 0 && (b + z) % (4 * x * y) == 0 &&
                           (static_cast<u128>(4) * x * x * y + 1) % z == 0;
                case EquationId::E7d: { // C,D,F
                    u64 m = 4 * x * y;
                    if (a % m != 0 || (b + z) % m != 0) return false;
                    u128 q = static_cast<u128>(m) * z;
                    return (static_cast<u128>(a) * a) % q == 0 &&
                           (static_cast<u128>(a) * (2 * static_cast<u128>(b) + z)) % q == 0 &&
                           (static_cast<u128>(b) * (b + z) + static_cast<u128>(4) * x * x * y) % q == 0;
                }
            }
            return false;
        }
    }
    return false;
}

/// Tests the template congruences for p = n and reconstructs the quadruple
/// on success. Failure (including a failed coprimality side condition) is
/// an empty result.
inline std::optional<RosatiQuadruple> check_certifies(const EquationParams& ep, u64 n) {
    if (n < 3 || n % 2 == 0) return std::nullopt;
    const u64 x = ep.v0, y = ep.v1, z = ep.v2;
    if (x == 0 || y == 0 || z == 0) return std::nullopt;
    u64 A = 0, B = 0, C = 0, D = 0;
    RosatiKind kind = RosatiKind::RelationOne;
    auto fits = [](u128 v) { return v > 0 && v <= ~static_cast<u64>(0); };
    switch (ep.id) {
        case EquationId::E6a: { // x=B, y=C, z=D
            u128 q = static_cast<u128>(4) * x * y * z - 1;
            u128 t = x + static_cast<u128>(n) * y;
            if (t % q != 0 || !fits(t / q)) return std::nullopt;
            B = x; C = y; D = z;
            A = static_cast<u64>(t / q);
            break;
        }
        case EquationId::E6b: { // x=A, y=B, z=E
            u128 m = static_cast<u128>(4) * x * y;
            u128 t = static_cast<u128>(n) + z;
            if (t % m != 0 || (x + y) % z != 0 || !fits(t / m)) return std::nullopt;
            A = x; B = y;
            D = static_cast<u64>(t / m);
            C = (x + y) / z;
            break;
        }
        case EquationId::E6c: { // x=B, y=D, z=E
            u128 m = static_cast<u128>(4) * x * y * z;
            u128 t = static_cast<u128>(n) + z + static_cast<u128>(4) * x * x * y;
            if (t % m != 0 || !fits(t / m)) return std::nullopt;
            B = x; D = y;
            C = static_cast<u64>(t / m);
            u128 a = static_cast<u128>(C) * z - x; // CE - B
            if (!fits(a)) return std::nullopt;
            A = static_cast<u64>(a);
            break;
        }
        case EquationId::E7a: { // x=A, y=B, z=E
            kind = RosatiKind::RelationTwo;
            u128 m = static_cast<u128>(4) * x * y;
            u128 t = static_cast<u128>(n) * z + 1;
            if (t % m != 0 || (x + y) % z != 0 || !fits(t / m)) return std::nullopt;
            A = x; B = y;
            D = static_cast<u64>(t / m);
            C = (x + y) / z;
            break;
        }
        case EquationId::E7b: { // x=B, y=C, z=F
            kind = RosatiKind::RelationTwo;
            u128 m = static_cast<u128>(4) * x * y;
            u128 s = static_cast<u128>(n) + z;
            if (s % m != 0 || !fits(s / m)) return std::nullopt;
            u128 t = static_cast<u128>(n) * x + y;
            if (t % z != 0 || !fits(t / z)) return std::nullopt;
            B = x; C = y;
            D = static_cast<u64>(s / m);
            A = static_cast<u64>(t / z);
            break;
        }
        case EquationId::E7c: { // x=B, y=D, z=F
            kind = RosatiKind::RelationTwo;
            u128 m = static_cast<u128>(4) * x * y;
            u128 s = static_cast<u128>(n) + z;
            if (s % m != 0 || !fits(s / m)) return std::nullopt;
            u128 t = static_cast<u128>(4) * x * x * y + 1;
            if (t % z != 0) return std::nullopt;
            B = x; D = y;
            C = static_cast<u64>(s / m);
            u128 a = t / z * C;
            if (a <= x || !fits(a - x)) return std::nullopt; // A = CE - B
            A = static_cast<u64>(a - x);
            break;
        }
        case EquationId::E7d: { // x=C, y=D, z=F
            kind = RosatiKind::RelationTwo;
            u128 m = static_cast<u128>(4) * x * y;
            u128 s = static_cast<u128>(n) + z;
            if (s % m != 0 || !fits(s / m)) return std::nullopt;
            B = static_cast<u64>(s / m);
            u128 t = static_cast<u128>(n) * B + x;
            if (t % z != 0 || !fits(t / z)) return std::nullopt;
            C = x; D = y;
            A = static_cast<u64>(t / z);
            break;
        }
    }
    RosatiQuadruple probe{kind, A, B, C, D};
    if (!verify_quadruple(probe, n)) return std::nullopt;
    return make_quadruple(kind, A, B, C, D, n);
}

namespace detail {

inline std::vector<std::pair<u64, int>> merge_factorizations(
    std::vector<std::pair<u64, int>> f1, const std::vector<std::pair<u64, int>>& f2) {
    for (const auto& [p, e] : f2) {
        bool found = false;
        for (auto& [q, g] : f1)
            if (q == p) {
                g += e;
                found = true;
                break;
            }
        if (!found) f1.emplace_back(p, e);
    }
    return f1;
}

inline std::vector<std::pair<u64, int>> odd_part(std::vector<std::pair<u64, int>> f) {
    std::erase_if(f, [](const auto& pe) { return pe.first == 2; });
    return f;
}

// Enumerates the residue classes b (mod something) such that the progression
// a*t + b is certified by the template with constant parameters. The callback
// returns false to stop early; the function reports whether it was stopped.
template <typename Fn>
bool enumerate_template_classes(EquationId id, u64 a, const std::vector<std::pair<u64, int>>& a_fac,
                                Fn&& fn) {
    switch (id) {
        case EquationId::E6a: {
            // q | a with q = 3 (mod 4); classes b = -B * C^{-1} (mod q) for
            // every factorization 4BCD = q + 1.
            for (u64 q : divisors(a)) {
                if (q % 4 != 3) continue;
                u64 m4 = (q + 1) / 4;
                for (u64 B : divisors(m4))
                    for (u64 C : divisors(m4 / B)) {
                        u64 D = m4 / (B * C);
                        u64 r = (q - mulmod(B % q, mod_inverse(static_cast<i64>(C % q), q), q)) % q;
                        if (!fn(ResidueClass(q, r), EquationParams{id, B, C, D})) return true;
                    }
            }
            return false;
        }
        case EquationId::E6b: {
            if (a % 4 != 0) return false;
            for (u64 d : divisors(a / 4))
                for (u64 A : divisors(d)) {
                    u64 B = d / A;
                    u64 M = 4 * d;
                    for (u64 E : divisors(A + B)) {
                        u64 r = (M - E % M) % M;
                        if (!fn(ResidueClass(M, r), EquationParams{id, A, B, E})) return true;
                    }
                }
            return false;
        }
        case EquationId::E6c: {
            if (a % 4 != 0) return false;
            for (u64 d : divisors(a / 4))
                for (u64 B : divisors(d))
                    for (u64 D : divisors(d / B)) {
                        u64 E = d / (B * D);
                        u64 M = 4 * d;
                        u64 b2d = static_cast<u64>(static_cast<u128>(4) * B * B * D % M);
                        u64 r = (M - (E % M + b2d) % M) % M;
                        if (!fn(ResidueClass(M, r), EquationParams{id, B, D, E})) return true;
                    }
            return false;
        }
        case EquationId::E7a: {
            if (a % 4 != 0) return false;
            for (u64 d : divisors(a / 4))
                for (u64 A : divisors(d)) {
                    u64 B = d / A;
                    u64 M = 4 * d;
                    for (u64 E : divisors(A + B)) {
                        if (gcd(E, M) != 1) continue;
                        u64 r = (M - mod_inverse(static_cast<i64>(E % M), M)) % M;
                        if (!fn(ResidueClass(M, r), EquationParams{id, A, B, E})) return true;
                    }
                }
            return false;
        }
        case EquationId::E7b: {
            if (a % 4 != 0) return false;
            for (u64 d : divisors(a / 4))
                for (u64 B : divisors(d)) {
                    u64 C = d / B;
                    u64 M = 4 * d;
                    auto ab_fac = odd_part(merge_factorizations(a_fac, factorize(B)));
                    bool stopped = false;
                    for_each_divisor(ab_fac, [&](u64 F) {
                        if (stopped) return;
                        ResidueClass c1(M, (M - F % M) % M);
                        // solve B*x = -C (mod F)
                        u64 g = gcd(B % F, F);
                        if (C % g != 0) return;
                        u64 M2 = F / g;
                        std::optional<ResidueClass> cls;
                        if (M2 == 1) {
                            cls = c1;
                        } else {
                            u64 c = (C / g) % M2;
                            u64 x0 = (M2 - mulmod(c, mod_inverse(static_cast<i64>((B / g) % M2), M2), M2)) % M2;
                            cls = crt_combine(c1, ResidueClass(M2, x0));
                        }
                        if (!cls) return;
                        if (!fn(*cls, EquationParams{id, B, C, F})) stopped = true;
                    });
                    if (stopped) return true;
                }
            return false;
        }
        case EquationId::E7c: {
            if (a % 4 != 0) return false;
            for (u64 d : divisors(a / 4))
                for (u64 B : divisors(d)) {
                    u64 D = d / B;
                    u64 M = 4 * d;
                    u64 nc = 4 * B * B * D + 1;
                    for (u64 F : divisors(nc)) {
                        u64 r = (M - F % M) % M;
                        if (!fn(ResidueClass(M, r), EquationParams{id, B, D, F})) return true;
                    }
                }
            return false;
        }
        case EquationId::E7d: {
            // Constants C, D, F. B = (p+F)/(4CD) and A = (pB+C)/F must be
            // integral identically in t, which coefficient-wise means
            //   4CDF | a^2,  4CDF | a(2b+F),  4CDF | b(b+F) + 4C^2*D.
            // The linear conditions pin b to a class; the quadratic one is
            // checked per candidate residue.
            if (a % 4 != 0) return false;
            for (u64 d : divisors(a / 4))
                for (u64 C : divisors(d)) {
                    u64 D = d / C;
                    u64 M1 = 4 * d;
                    u64 n7 = a / M1; // a^2 / 4CD = a * n7
                    auto f_fac = odd_part(merge_factorizations(a_fac, factorize(n7)));
                    bool stopped = false;
                    for_each_divisor(f_fac, [&](u64 F) {
                        if (stopped) return;
                        u128 Q = static_cast<u128>(M1) * F;
                        ResidueClass c1(M1, (M1 - F % M1) % M1);
                        // a(2b + F) = 0 (mod Q): linear class for b
                        u128 A2 = (2 * static_cast<u128>(a)) % Q;
                        u128 R2 = (Q - static_cast<u128>(a) % Q * (F % Q) % Q) % Q;
                        u128 g2 = gcd128(A2 == 0 ? Q : A2, Q);
                        if (R2 % g2 != 0) return;
                        u64 M2 = static_cast<u64>(Q / g2);
                        std::optional<ResidueClass> cls = c1;
                        if (M2 > 1) {
                            u64 r2 = static_cast<u64>(R2 / g2 % M2);
                            u64 a2 = static_cast<u64>(A2 / g2 % M2);
                            u64 x0 = mulmod(r2, mod_inverse(static_cast<i64>(a2), M2), M2);
                            cls = crt_combine(c1, ResidueClass(M2, x0));
                        }
                        if (!cls) return;
                        u64 stride = cls->modulus;
                        u128 c2d4 = static_cast<u128>(4) * C * C * D;
                        for (u64 b = cls->residue; b < a; b += stride) {
                            u128 quad = static_cast<u128>(b) * (b + F) + c2d4;
                            if (quad % Q != 0) continue;
                            if (!fn(ResidueClass(a, b), EquationParams{id, C, D, F})) {
                                stopped = true;
                                return;
                            }
                            if (stride >= a) break;
                        }
                    });
                    if (stopped) return true;
                }
            return false;
        }
    }
    return false;
}

} // namespace detail

/// The residue classes certified by one template over progressions with
/// gap a (every member of a returned class belongs to Omega_a).
inline std::vector<ResidueClass> certified_classes(EquationId id, u64 a) {
    if (a == 0 || a % 4 != 0)
        throw InvalidModulus("certified_classes: a must be a positive multiple of 4");
    std::vector<ResidueClass> out;
    auto a_fac = factorize(a);
    detail::enumerate_template_classes(id, a, a_fac, [&](const ResidueClass& c, const EquationParams&) {
        out.push_back(c);
        return true;
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace detail {

// Per-gap certification cache: a bitmap of certified residues plus, for
// small gaps, the class list used to reconstruct certificates.
class CertEngine {
  public:
    static CertEngine& instance() {
        static CertEngine engine;
        return engine;
    }

    bool certified(u64 a, u64 b) {
        const Level& lv = level(a);
        return lv.certified[b % a] != 0;
    }

    std::optional<Certificate> certificate(u64 a, u64 b);

  private:
    static constexpr u64 kClassListLimit = 20000;

    struct ClassRec {
        ResidueClass cls;
        EquationParams params;
    };

    struct Level {
        u64 a = 0;
        std::vector<std::uint8_t> certified;
        std::vector<ClassRec> classes; // populated only when a <= kClassListLimit
        bool has_classes = false;
        std::vector<u64> prime_divisors;
        std::once_flag built;
    };

    Level& level_entry(u64 a) {
        std::lock_guard<std::mutex> lock(mu_);
        auto& slot = levels_[a];
        if (!slot) slot = std::make_unique<Level>();
        return *slot;
    }

    const Level& level(u64 a) {
        if (a == 0) throw InvalidModulus("certification gap must be >= 1");
        Level& lv = level_entry(a);
        std::call_once(lv.built, [&] { build(a, lv); });
        return lv;
    }

    void build(u64 a, Level& lv) {
        lv.a = a;
        lv.certified.assign(a, 0);
        auto a_fac = factorize(a);
        for (const auto& [p, e] : a_fac) lv.prime_divisors.push_back(p);

        auto mark = [&](u64 start, u64 step) {
            for (u64 b = start; b < a; b += step) {
                lv.certified[b] = 1;
                if (step >= a) break;
            }
        };
        if (a % 3 == 0) mark(2, 3);
        if (a % 4 == 0) mark(3, 4);
        if (a % 8 == 0) mark(5, 8);

        lv.has_classes = a <= kClassListLimit;
        for (EquationId id : kAllEquations) {
            enumerate_template_classes(id, a, a_fac, [&](const ResidueClass& c, const EquationParams& ep) {
                if (c.residue < a) mark(c.residue, c.modulus);
                if (lv.has_classes) lv.classes.push_back({c, ep});
                return true;
            });
        }

        // scaling rule: b = k * b' certified whenever b' is for gap a/k
        for (u64 k : lv.prime_divisors) {
            const Level& sub = level(a / k);
            for (u64 b2 = 0; b2 < a / k; ++b2)
                if (sub.certified[b2]) lv.certified[k * b2] = 1;
        }
    }

    std::mutex mu_;
    std::map<u64, std::unique_ptr<Level>> levels_;
};

inline std::optional<Certificate> CertEngine::certificate(u64 a, u64 b) {
    const Level& lv = level(a);
    b %= a;
    if (!lv.certified[b]) return std::nullopt;

    if (a % 3 == 0 && b % 3 == 2) return Certificate::make_closed_form(ClosedFormCase::Mod3);
    if (a % 4 == 0 && b % 4 == 3) return Certificate::make_closed_form(ClosedFormCase::Mod4);
    if (a % 8 == 0 && b % 8 == 5) return Certificate::make_closed_form(ClosedFormCase::Mod8);

    for (u64 k : lv.prime_divisors) {
        if (b % k != 0) continue;
        if (auto inner = certificate(a / k, b / k))
            return Certificate::make_scaled(k, std::move(*inner));
    }

    std::optional<Certificate> found;
    if (lv.has_classes) {
        for (const auto& rec : lv.classes)
            if (rec.cls.contains(b)) {
                found = Certificate::make_equation(rec.params);
                break;
            }
    } else {
        auto a_fac = factorize(a);
        for (EquationId id : kAllEquations) {
            bool stopped = enumerate_template_classes(
                id, a, a_fac, [&](const ResidueClass& c, const EquationParams& ep) {
                    if (c.contains(b)) {
                        found = Certificate::make_equation(ep);
                        return false;
                    }
                    return true;
                });
            if (stopped) break;
        }
    }
    return found;
}

} // namespace detail

/// Membership of b in Omega_a (sufficiency direction): a proof object when
/// the progression a*t + b is certified, empty otherwise.
inline std::optional<Certificate> progression_certified(u64 a, u64 b) {
    if (a == 0) throw InvalidModulus("progression_certified: a must be >= 1");
    return detail::CertEngine::instance().certificate(a, b % a);
}

/// Fast membership-only variant of progression_certified.
inline bool progression_is_certified(u64 a, u64 b) {
    if (a == 0) throw InvalidModulus("progression_is_certified: a must be >= 1");
    return detail::CertEngine::instance().certified(a, b % a);
}

/// Self-check of the quadratic-non-residue constraint: a coprime class that
/// is a quadratic residue must never be certified.
inline bool is_qnr_certified_consistent(u64 a, u64 b) {
    return !(is_quadratic_residue(b, a) && progression_is_certified(a, b));
}

struct EquationSolution {
    Certificate cert;
    RosatiQuadruple quad;
    UnitFractionTriple triple;
};

namespace detail {

// Complete quadruple enumeration for odd p. Relation one: C is determined
// by (A, B, D). Relation two is covered by two scans: (B, D) pairs with a
// bounded C range (every solution with BCD <= 3p/4), and (A, C, D) triples
// with B determined (every solution with ACD <= 3p/4); one of the two
// always applies because the two p-free denominators cannot both exceed
// 3p/4.
template <typename Fn>
void enumerate_quadruples(u64 p, Fn&& fn) {
    // relation one: 4ABCD = A + B + pC
    for (u64 D = 1; 4 * D <= p + 2; ++D) {
        for (u64 B = 1; B * (4 * D - 1) <= p + 1; ++B) {
            u64 q0 = 4 * B * D - 1;
            for (u64 A = 1; A * q0 <= B + p; ++A) {
                u128 s = static_cast<u128>(4) * A * B * D;
                if (s <= p) continue;
                u64 sd = static_cast<u64>(s - p);
                if ((A + B) % sd != 0) continue;
                u64 C = (A + B) / sd;
                if (!fn(RosatiKind::RelationOne, A, B, C, D)) return;
            }
        }
    }
    // relation two, scan (a): constants (B, D), C in the window where
    // F = 4BCD - p divides 4B^2*D + 1
    u64 cap = 3 * p / 4;
    for (u64 B = 1; B <= cap; ++B) {
        for (u64 D = 1; B * D <= cap; ++D) {
            u64 bd4 = 4 * B * D;
            u64 nc = 4 * B * B * D + 1;
            u64 cmin = p / bd4 + 1; // smallest C with F = 4BCD - p >= 1
            u64 cmax = B + (p + 1) / bd4 + 1;
            for (u64 C = cmin; C <= cmax; ++C) {
                u128 f = static_cast<u128>(bd4) * C;
                if (f <= p) continue;
                u64 F = static_cast<u64>(f - p);
                if (F > nc || nc % F != 0) continue;
                u64 E = nc / F;
                u128 a128 = static_cast<u128>(C) * E;
                if (a128 <= B) continue;
                a128 -= B;
                if (a128 > ~static_cast<u64>(0)) continue;
                if (!fn(RosatiKind::RelationTwo, static_cast<u64>(a128), B, C, D)) return;
            }
        }
    }
    // relation two, scan (b): constants (C, D), B determined by (A, C, D)
    for (u64 A = 1; A <= cap; ++A) {
        for (u64 C = 1; A * C <= cap; ++C) {
            for (u64 D = 1; A * C * D <= cap; ++D) {
                u128 s = static_cast<u128>(4) * A * C * D;
                if (s <= p) continue;
                u64 sd = static_cast<u64>(s - p);
                u128 num = static_cast<u128>(p) * A + C;
                if (num % sd != 0) continue;
                u128 b128 = num / sd;
                if (b128 == 0 || b128 > ~static_cast<u64>(0)) continue;
                if (!fn(RosatiKind::RelationTwo, A, static_cast<u64>(b128), C, D)) return;
            }
        }
    }
}

inline std::optional<EquationSolution> solution_from_quadruple(RosatiKind kind, u64 A, u64 B,
                                                               u64 C, u64 D, u64 p) {
    RosatiQuadruple probe{kind, A, B, C, D};
    if (!verify_quadruple(probe, p)) return std::nullopt; // side condition may fail for composite p
    RosatiQuadruple q = make_quadruple(kind, A, B, C, D, p);
    UnitFractionTriple t;
    try {
        t = quadruple_to_triple(q, p);
    } catch (const DuplicateDenominators&) {
        return std::nullopt;
    }
    EquationParams ep = kind == RosatiKind::RelationOne
                            ? EquationParams{EquationId::E6a, q.B, q.C, q.D}
                            : EquationParams{EquationId::E7b, q.B, q.C, q.F};
    return EquationSolution{Certificate::make_equation(ep), q, t};
}

} // namespace detail

/// Every decomposition of 4/p reachable through the reference equations,
/// deduplicated by triple and sorted. For odd prime p this is the full set
/// of decompositions of 4/p into three distinct unit fractions.
inline std::vector<EquationSolution> decompose_all_via_equations(u64 p) {
    if (p < 3 || p % 2 == 0)
        throw std::invalid_argument("decompose_all_via_equations: p must be odd and >= 3");
    std::map<UnitFractionTriple, EquationSolution> by_triple;
    detail::enumerate_quadruples(p, [&](RosatiKind kind, u64 A, u64 B, u64 C, u64 D) {
        if (auto sol = detail::solution_from_quadruple(kind, A, B, C, D, p))
            by_triple.emplace(sol->triple, std::move(*sol));
        return true;
    });
    std::vector<EquationSolution> out;
    out.reserve(by_triple.size());
    for (auto& [t, sol] : by_triple) out.push_back(std::move(sol));
    return out;
}

/// First decomposition found through the reference equations, if any.
inline std::optional<EquationSolution> decompose_first_via_equations(u64 p) {
    if (p < 3 || p % 2 == 0) return std::nullopt;
    std::optional<EquationSolution> found;
    detail::enumerate_quadruples(p, [&](RosatiKind kind, u64 A, u64 B, u64 C, u64 D) {
        if (auto sol = detail::solution_from_quadruple(kind, A, B, C, D, p)) {
            found = std::move(*sol);
            return false;
        }
        return true;
    });
    return found;
}

} // namespace ess
