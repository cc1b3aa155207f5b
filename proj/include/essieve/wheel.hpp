#pragma once

// The progression wheel (G, R): G = 24 * product of chosen odd primes,
// R the residues r = 1 (mod 24) surviving the construction-time filters.
// Candidates are the integers r + k*G.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "essieve/filters.hpp"

namespace ess {

struct Rational {
    u64 num = 0, den = 1;

    Rational() = default;
    Rational(u64 n, u64 d) : num(n), den(d) {
        u64 g = gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    bool operator==(const Rational&) const = default;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct ReductionPolicy {
    enum class Kind { Primes, AllOddDivisors, Custom };

    Kind kind = Kind::Primes;
    std::vector<u64> custom;

    static ReductionPolicy primes() { return {Kind::Primes, {}}; }
    static ReductionPolicy all_odd_divisors() { return {Kind::AllOddDivisors, {}}; }
    static ReductionPolicy custom_list(std::vector<u64> qs) {
        return {Kind::Custom, std::move(qs)};
    }

    std::vector<u64> resolve(u64 G, const std::vector<u64>& wheel_primes) const {
        std::vector<u64> out;
        switch (kind) {
            case Kind::Primes:
                out = wheel_primes;
                break;
            case Kind::AllOddDivisors:
                for (u64 d : divisors(G, true))
                    if (d > 1) out.push_back(d);
                break;
            case Kind::Custom:
                out = custom;
                break;
        }
        for (u64 q : out)
            if (q <= 1 || q % 2 == 0 || G % q != 0)
                throw PolicyModulusInvalid("policy modulus " + std::to_string(q) +
                                           " is not an odd divisor > 1 of G=" + std::to_string(G));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::Primes: return "primes";
            case Kind::AllOddDivisors: return "all-odd-divisors";
            case Kind::Custom: {
                std::string s = "custom:";
                for (std::size_t i = 0; i < custom.size(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(custom[i]);
                }
                return s;
            }
        }
        return "?";
    }

    static ReductionPolicy parse(const std::string& s) {
        if (s == "primes") return primes();
        if (s == "all-odd-divisors") return all_odd_divisors();
        if (s.rfind("custom:", 0) == 0) {
            std::vector<u64> qs;
            std::stringstream ss(s.substr(7));
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) qs.push_back(std::stoull(tok));
            return custom_list(std::move(qs));
        }
        throw FormatError("unknown reduction policy: " + s);
    }
};

struct Wheel {
    std::vector<u64> primes;      // the odd wheel primes, ascending
    u64 G = 24;                   // 24 * product(primes)
    ReductionPolicy policy;       // which filters reduced R
    std::vector<u64> policy_divisors;
    std::vector<u64> residues;    // sorted, every r = 1 (mod 24)
};

/// Builds the wheel by striking every residue r = 1 (mod 24) trapped by a
/// policy filter.
inline Wheel build_wheel(std::vector<u64> primes, const ReductionPolicy& policy,
                         const FilterSet& filters) {
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] < 3 || primes[i] % 2 == 0 || !is_prime(primes[i]))
            throw PolicyModulusInvalid("wheel modulus " + std::to_string(primes[i]) +
                                       " is not an odd prime");
        if (i > 0 && primes[i] == primes[i - 1])
            throw PolicyModulusInvalid("duplicate wheel prime " + std::to_string(primes[i]));
    }
    Wheel w;
    w.primes = std::move(primes);
    u128 g = 24;
    for (u64 p : w.primes) g = mul_checked(g, p);
    if (g > ~static_cast<u64>(0)) throw PolicyModulusInvalid("wheel gap exceeds 64 bits");
    w.G = static_cast<u64>(g);
    w.policy = policy;
    w.policy_divisors = policy.resolve(w.G, w.primes);

    // densest filters first so most strikes exit early
    std::vector<const Filter*> fs;
    fs.reserve(w.policy_divisors.size());
    for (u64 q : w.policy_divisors) fs.push_back(&filters.get(q));
    std::sort(fs.begin(), fs.end(), [](const Filter* a, const Filter* b) {
        return static_cast<double>(a->residues.size()) / static_cast<double>(a->m) >
               static_cast<double>(b->residues.size()) / static_cast<double>(b->m);
    });

    for (u64 r = 1; r < w.G; r += 24) {
        bool trapped = false;
        for (const Filter* f : fs)
            if (f->contains(r)) {
                trapped = true;
                break;
            }
        if (!trapped) w.residues.push_back(r);
    }
    return w;
}

/// G / #R as an exact rational; the mean distance between candidates.
inline Rational mean_gap(const Wheel& w) {
    if (w.residues.empty()) throw EmptyWheel("mean_gap: wheel has no residues");
    return Rational(w.G, static_cast<u64>(w.residues.size()));
}

struct KRange {
    u64 begin = 0, end = 0; // half-open

    u64 length() const { return end > begin ? end - begin : 0; }
};

/// Ascending stream of candidates r + k*G over k in [range.begin, range.end).
class CandidateRange {
  public:
    CandidateRange(const Wheel& w, KRange range) : wheel_(&w), range_(range) {}

    class iterator {
      public:
        iterator(const Wheel* w, u64 k, std::size_t idx) : wheel_(w), k_(k), idx_(idx) {}

        u64 operator*() const { return wheel_->residues[idx_] + k_ * wheel_->G; }
        iterator& operator++() {
            if (++idx_ == wheel_->residues.size()) {
                idx_ = 0;
                ++k_;
            }
            return *this;
        }
        bool operator==(const iterator& o) const { return k_ == o.k_ && idx_ == o.idx_; }

      private:
        const Wheel* wheel_;
        u64 k_;
        std::size_t idx_;
    };

    iterator begin() const {
        return wheel_->residues.empty() ? end() : iterator(wheel_, range_.begin, 0);
    }
    iterator end() const { return iterator(wheel_, range_.end, 0); }
    u64 size() const { return range_.length() * wheel_->residues.size(); }

  private:
    const Wheel* wheel_;
    KRange range_;
};

inline CandidateRange candidates(const Wheel& w, KRange range) {
    if (range.end < range.begin) range.end = range.begin;
    return CandidateRange(w, range);
}

// Wheel file: header "G=<int> primes=<p1,p2,...> policy=<...>", then one
// residue per line, ascending, decimal.

inline void save_wheel(const std::string& path, const Wheel& w) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "G=" << w.G << " primes=";
    for (std::size_t i = 0; i < w.primes.size(); ++i) out << (i ? "," : "") << w.primes[i];
    out << " policy=" << w.policy.to_string() << "\n";
    for (u64 r : w.residues) out << r << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline Wheel load_wheel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string header;
    if (!std::getline(in, header)) throw FormatError(path + ": missing header");
    Wheel w;
    std::stringstream hs(header);
    std::string field;
    bool got_g = false, got_primes = false, got_policy = false;
    while (hs >> field) {
        if (field.rfind("G=", 0) == 0) {
            w.G = std::stoull(field.substr(2));
            got_g = true;
        } else if (field.rfind("primes=", 0) == 0) {
            std::stringstream ps(field.substr(7));
            std::string tok;
            while (std::getline(ps, tok, ','))
                if (!tok.empty()) w.primes.push_back(std::stoull(tok));
            got_primes = true;
        } else if (field.rfind("policy=", 0) == 0) {
            w.policy = ReductionPolicy::parse(field.substr(7));
            got_policy = true;
        } else {
            throw FormatError(path + ": unknown header field '" + field + "'");
        }
    }
    if (!got_g || !got_primes || !got_policy) throw FormatError(path + ": incomplete header");
    u128 g = 24;
    for (u64 p : w.primes) g = mul_checked(g, p);
    if (g != w.G) throw FormatError(path + ": G does not match primes");
    w.policy_divisors = w.policy.resolve(w.G, w.primes);
    std::string line;
    u64 prev = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        u64 r = 0;
        try {
            r = std::stoull(line);
        } catch (const std::exception&) {
            throw FormatError(path + ": bad residue line '" + line + "'");
        }
        if (r >= w.G || r % 24 != 1) throw FormatError(path + ": residue out of range");
        if (!first && r <= prev) throw FormatError(path + ": residues not ascending");
        w.residues.push_back(r);
        prev = r;
        first = false;
    }
    return w;
}

} // namespace ess
