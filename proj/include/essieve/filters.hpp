#pragma once

// Modular filters S_m and shortened filters S*_m. A filter traps n = 1
// (mod 24) when n % m lies in its residue set, which proves that 4/n is a
// sum of three distinct unit fractions.

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "essieve/equations.hpp"

namespace ess {

struct Filter {
    u64 m = 0;                 // odd modulus
    u64 a = 0;                 // lcm(m, 24), the certification gap
    std::vector<u64> residues; // sorted residue set S_m, values in [0, m)

    // dense membership table; kept for every modulus the sieve can use
    std::vector<std::uint8_t> table;

    void rebuild_table() {
        table.assign(m <= kTableLimit ? m : 0, 0);
        if (table.empty()) return;
        for (u64 r : residues) table[r] = 1;
    }

    bool contains(u64 n) const {
        u64 r = n % m;
        if (!table.empty()) return table[r] != 0;
        return std::binary_search(residues.begin(), residues.end(), r);
    }

    static constexpr u64 kTableLimit = 1 << 22;
};

struct ShortenedFilter {
    u64 m = 0;
    std::vector<u64> residues;
};

/// S_m = residues mod m of the certified classes b = 1 (mod 24) at gap
/// lcm(m, 24).
inline Filter compute_filter(u64 m) {
    if (m == 0 || m % 2 == 0) throw EvenModulus("compute_filter: modulus must be odd");
    Filter f;
    f.m = m;
    f.a = lcm(m, 24);
    std::vector<std::uint8_t> seen(m, 0);
    for (u64 b = 1; b < f.a; b += 24)
        if (progression_is_certified(f.a, b)) seen[b % m] = 1;
    for (u64 r = 0; r < m; ++r)
        if (seen[r]) f.residues.push_back(r);
    f.rebuild_table();
    return f;
}

/// True iff n % m is trapped; meaningful for n = 1 (mod 24).
inline bool filter_contains(const Filter& f, u64 n) { return f.contains(n); }

/// Caching filter provider, safe for concurrent use.
class FilterSet {
  public:
    const Filter& get(u64 m) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = filters_.find(m);
            if (it != filters_.end()) return *it->second;
        }
        auto computed = std::make_shared<const Filter>(compute_filter(m));
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = filters_.emplace(m, std::move(computed));
        return *it->second;
    }

    void put(Filter f) {
        auto ptr = std::make_shared<const Filter>(std::move(f));
        std::lock_guard<std::mutex> lock(mu_);
        filters_[ptr->m] = std::move(ptr);
    }

    std::vector<u64> moduli() const {
        std::lock_guard<std::mutex> lock(mu_);
        std::vector<u64> out;
        for (const auto& [m, f] : filters_) out.push_back(m);
        return out;
    }

  private:
    mutable std::mutex mu_;
    mutable std::map<u64, std::shared_ptr<const Filter>> filters_;
};

/// S*_m: the residues of S_m not already trapped by a proper divisor's
/// filter. For prime m, S*_m = S_m.
inline ShortenedFilter shorten(u64 m, const std::function<const Filter&(u64)>& provider) {
    const Filter& full = provider(m);
    std::vector<u64> keep;
    std::vector<u64> qs;
    for (u64 q : divisors(m))
        if (q > 1 && q < m) qs.push_back(q);
    for (u64 r : full.residues) {
        bool excluded = false;
        for (u64 q : qs)
            if (provider(q).contains(r)) {
                excluded = true;
                break;
            }
        if (!excluded) keep.push_back(r);
    }
    return ShortenedFilter{m, std::move(keep)};
}

inline ShortenedFilter shorten(u64 m) {
    FilterSet fs;
    return shorten(m, [&](u64 q) -> const Filter& { return fs.get(q); });
}

namespace detail {

inline std::string format_filter_line(u64 m, const std::vector<u64>& residues) {
    std::string line = std::to_string(m) + ":";
    for (std::size_t i = 0; i < residues.size(); ++i) {
        line += i == 0 ? " " : ",";
        line += std::to_string(residues[i]);
    }
    return line;
}

} // namespace detail

// File format: one filter per line, "m: r1,r2,...,rk" with residues
// ascending; '#' starts a comment; blank lines are ignored. Shortened
// filters use the same format in files suffixed ".star".

inline void save_filters(const std::string& path, const std::vector<Filter>& filters) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const auto& f : filters) out << detail::format_filter_line(f.m, f.residues) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline void save_shortened_filters(const std::string& path,
                                   const std::vector<ShortenedFilter>& filters) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const auto& f : filters) out << detail::format_filter_line(f.m, f.residues) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

inline std::vector<Filter> parse_filters(std::istream& in, const std::string& what) {
    std::vector<Filter> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw FormatError(what + ":" + std::to_string(lineno) + ": missing ':'");
        u64 m = 0;
        try {
            std::size_t used = 0;
            m = std::stoull(line.substr(pos, colon - pos), &used);
        } catch (const std::exception&) {
            throw FormatError(what + ":" + std::to_string(lineno) + ": bad modulus");
        }
        if (m == 0 || m % 2 == 0)
            throw FormatError(what + ":" + std::to_string(lineno) + ": even modulus");
        Filter f;
        f.m = m;
        f.a = lcm(m, 24);
        std::string rest = line.substr(colon + 1);
        std::stringstream ss(rest);
        std::string tok;
        u64 prev = 0;
        bool first = true;
        while (std::getline(ss, tok, ',')) {
            std::size_t b = tok.find_first_not_of(" \t\r");
            if (b == std::string::npos) {
                if (first) continue; // "m:" with no residues
                throw FormatError(what + ":" + std::to_string(lineno) + ": empty residue");
            }
            u64 r = 0;
            try {
                r = std::stoull(tok.substr(b));
            } catch (const std::exception&) {
                throw FormatError(what + ":" + std::to_string(lineno) + ": bad residue");
            }
            if (r >= m)
                throw FormatError(what + ":" + std::to_string(lineno) + ": residue >= modulus");
            if (!first && r <= prev)
                throw FormatError(what + ":" + std::to_string(lineno) + ": residues not ascending");
            f.residues.push_back(r);
            prev = r;
            first = false;
        }
        f.rebuild_table();
        out.push_back(std::move(f));
    }
    return out;
}

inline std::vector<Filter> load_filters(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    return parse_filters(in, path);
}

} // namespace ess
