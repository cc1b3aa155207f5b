#pragma once

// The verification engine: streams wheel candidates, certifies each against
// the ordered filter list, counts squares and per-filter traps, proves
// anything left over through the fallback decomposers, and supports
// checkpoint/resume and chunked parallel execution.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <span>
#include <thread>
#include <unordered_set>

#include "essieve/mod_list.hpp"
#include "essieve/wheel.hpp"

namespace ess {

/// First modulus in mods order whose filter traps n, if any.
inline std::optional<u64> certify(u64 n, std::span<const u64> mods, const FilterSet& filters) {
    for (u64 m : mods)
        if (filters.get(m).contains(n)) return m;
    return std::nullopt;
}

enum class FallbackKind {
    DecomposedByEquations,
    DecomposedByBruteForce,
    CounterexampleCandidate,
};

inline const char* fallback_kind_name(FallbackKind k) {
    switch (k) {
        case FallbackKind::DecomposedByEquations: return "equations";
        case FallbackKind::DecomposedByBruteForce: return "brute-force";
        case FallbackKind::CounterexampleCandidate: return "counterexample-candidate";
    }
    return "?";
}

struct FallbackOutcome {
    FallbackKind kind = FallbackKind::CounterexampleCandidate;
    std::optional<UnitFractionTriple> triple;
};

namespace detail {

inline constexpr u64 kEquationSearchLimit = 2'000'000;

// Closed forms with denominators bounded by ~n^2: for n = 3 (mod 4) the
// smaller term of the two-term identity is split, so scaling chains stay
// inside 128 bits for any 64-bit n. (The public closed_form_decompose
// splits the larger term, which is quartic in n.)
inline std::optional<UnitFractionTriple> closed_form_bounded(u64 n) {
    if (n < 3) return std::nullopt;
    if (n % 3 == 2 || n % 8 == 5 || n == 3) return closed_form_decompose(n);
    if (n % 4 == 3) {
        u64 t = (n + 1) / 4; // >= 2 here
        return make_triple(n, t + 1, static_cast<u128>(t) * (t + 1), static_cast<u128>(t) * n);
    }
    return std::nullopt;
}

// Turns a progression certificate for b (mod a) into a concrete triple for
// the member n. Empty when a degenerate instantiation (coinciding
// denominators) or a width overflow blocks this particular route.
inline std::optional<UnitFractionTriple> certificate_to_triple(const Certificate& cert, u64 n) {
    try {
        switch (cert.kind) {
            case Certificate::Kind::ClosedForm:
                return closed_form_bounded(n);
            case Certificate::Kind::Scaled: {
                if (!cert.inner || cert.scale == 0 || n % cert.scale != 0) return std::nullopt;
                if (auto t = certificate_to_triple(*cert.inner, n / cert.scale))
                    return scale_decomposition(*t, cert.scale);
                return std::nullopt;
            }
            case Certificate::Kind::Equation: {
                auto q = check_certifies(cert.equation, n);
                if (!q) return std::nullopt;
                return quadruple_to_triple(*q, n);
            }
        }
    } catch (const DuplicateDenominators&) {
    } catch (const std::overflow_error&) {
    }
    return std::nullopt;
}

// Closed forms, scaling through prime factors (largest first, shrinking the
// remaining core fastest), the reference-equation search for moderate n,
// and finally a certificate search over the default modulus universe for
// the n = 1 (mod 24) cores. Covers every square the sieve can meet.
inline std::optional<UnitFractionTriple> decompose_via_certificates(u64 n, int depth = 0) {
    if (n < 3 || depth > 64) return std::nullopt;
    if (auto t = closed_form_bounded(n)) return t;
    auto factors = factorize(n);
    if (factors.size() > 1 || factors[0].second > 1) {
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
            u64 rest = n / it->first;
            if (rest < 3) continue;
            if (auto t = decompose_via_certificates(rest, depth + 1)) {
                try {
                    return scale_decomposition(*t, it->first);
                } catch (const std::overflow_error&) {
                }
            }
        }
    }
    if (n % 2 == 1 && n <= kEquationSearchLimit) {
        if (auto s = decompose_first_via_equations(n)) return s->triple;
    }
    if (n % 24 == 1) {
        for (u64 m : kDefaultModList) {
            u64 a = lcm(m, 24);
            auto cert = progression_certified(a, n % a);
            if (!cert) continue;
            if (auto t = certificate_to_triple(*cert, n)) return t;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Proves 4/n decomposes when no filter certified n: equation-derived
/// routes first, the bounded brute-force oracle second. A counterexample
/// candidate means both searches came back empty.
inline FallbackOutcome fallback_check(u64 n) {
    if (n >= 3) {
        if (auto t = detail::decompose_via_certificates(n))
            return {FallbackKind::DecomposedByEquations, t};
        if (n <= kBruteForceOracleLimit) {
            auto v = brute_force_decompose(n);
            if (!v.empty()) return {FallbackKind::DecomposedByBruteForce, v[0]};
        }
    }
    return {FallbackKind::CounterexampleCandidate, std::nullopt};
}

struct SieveLimit {
    enum class Kind { MaxN, KCount };
    Kind kind = Kind::KCount;
    u64 value = 0;

    static SieveLimit max_n(u64 n) { return {Kind::MaxN, n}; }
    static SieveLimit k_count(u64 k) { return {Kind::KCount, k}; }
};

struct SieveConfig {
    Wheel wheel;
    std::vector<u64> mods;
    std::shared_ptr<FilterSet> filters = std::make_shared<FilterSet>();
    SieveLimit limit;
    unsigned threads = 1;
    u64 chunk_size = 64;
    std::string checkpoint_path; // empty: no checkpointing
    std::function<void(u64 k_done, u64 k_total)> progress; // optional, ~2s cadence
};

struct FailureRecord {
    u64 n = 0;
    FallbackKind outcome = FallbackKind::CounterexampleCandidate;

    bool operator==(const FailureRecord&) const = default;
};

struct RunReport {
    // config echo
    u64 wheel_gap = 0;
    u64 residue_count = 0;
    u64 k_count = 0;
    u64 max_n = 0;
    unsigned threads = 1;
    u64 chunk_size = 0;
    std::vector<u64> mods;

    // accounting
    u64 checked = 0;
    u64 squares = 0;
    std::vector<u64> per_mod_counts;
    std::vector<FailureRecord> failures; // uncertified non-squares, with outcome
    std::vector<u64> square_failures;    // squares the fallback could not prove
    double wall_seconds = 0;

    u64 trapped_total() const {
        u64 s = 0;
        for (u64 c : per_mod_counts) s += c;
        return s;
    }
    bool accounting_ok() const {
        return trapped_total() + squares + failures.size() == checked;
    }
    u64 counterexample_count() const {
        u64 c = square_failures.size();
        for (const auto& f : failures)
            if (f.outcome == FallbackKind::CounterexampleCandidate) ++c;
        return c;
    }
};

namespace detail {

inline u64 fnv1a64(u64 h, u64 v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline u64 sieve_config_hash(const Wheel& w, const std::vector<u64>& mods,
                             const std::vector<const Filter*>& filters) {
    u64 h = 0xcbf29ce484222325ull;
    h = fnv1a64(h, w.G);
    h = fnv1a64(h, w.residues.size());
    for (u64 r : w.residues) h = fnv1a64(h, r);
    h = fnv1a64(h, mods.size());
    for (u64 m : mods) h = fnv1a64(h, m);
    for (const Filter* f : filters) {
        h = fnv1a64(h, f->m);
        h = fnv1a64(h, f->residues.size());
        for (u64 r : f->residues) h = fnv1a64(h, r);
    }
    return h;
}

inline u32 crc32(const void* data, std::size_t size, u32 crc = 0) {
    static const auto table = [] {
        std::array<u32, 256> t{};
        for (u32 i = 0; i < 256; ++i) {
            u32 c = i;
            for (int k = 0; k < 8; ++k) c = (c >> 1) ^ (0xedb88320u & (~(c & 1) + 1));
            t[i] = c;
        }
        return t;
    }();
    const auto* p = static_cast<const unsigned char*>(data);
    crc = ~crc;
    for (std::size_t i = 0; i < size; ++i) crc = (crc >> 8) ^ table[(crc ^ p[i]) & 0xff];
    return ~crc;
}

} // namespace detail

struct Checkpoint {
    u64 config_hash = 0;
    u64 k_done = 0;
    u64 checked = 0;
    u64 squares = 0;
    std::vector<u64> per_mod;
    std::vector<FailureRecord> failures;
    std::vector<u64> square_failures;
};

// Checkpoint file: magic "ESSV1", then little-endian 64-bit words
// (config hash, k prefix, counters), then a CRC32 of everything before it.

inline void save_checkpoint(const std::string& path, const Checkpoint& ck) {
    std::string buf;
    buf.append("ESSV1", 5);
    auto put = [&](u64 v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    put(ck.config_hash);
    put(ck.k_done);
    put(ck.checked);
    put(ck.squares);
    put(ck.per_mod.size());
    for (u64 c : ck.per_mod) put(c);
    put(ck.failures.size());
    for (const auto& f : ck.failures) {
        put(f.n);
        put(static_cast<u64>(f.outcome));
    }
    put(ck.square_failures.size());
    for (u64 n : ck.square_failures) put(n);
    u32 crc = detail::crc32(buf.data(), buf.size());
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((crc >> (8 * i)) & 0xff));

    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path + ": " + ec.message());
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 5 + 4 || std::memcmp(buf.data(), "ESSV1", 5) != 0)
        throw CheckpointCorrupt(path + ": bad magic or truncated");
    u32 want = 0;
    std::memcpy(&want, buf.data() + buf.size() - 4, 4);
    if (detail::crc32(buf.data(), buf.size() - 4) != want)
        throw CheckpointCorrupt(path + ": CRC mismatch");

    std::size_t pos = 5;
    std::size_t end = buf.size() - 4;
    auto get = [&]() -> u64 {
        if (pos + 8 > end) throw CheckpointCorrupt(path + ": truncated payload");
        u64 v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<u64>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 8;
        return v;
    };
    Checkpoint ck;
    ck.config_hash = get();
    ck.k_done = get();
    ck.checked = get();
    ck.squares = get();
    ck.per_mod.resize(get());
    for (auto& c : ck.per_mod) c = get();
    ck.failures.resize(get());
    for (auto& f : ck.failures) {
        f.n = get();
        u64 kind = get();
        if (kind > 2) throw CheckpointCorrupt(path + ": bad outcome tag");
        f.outcome = static_cast<FallbackKind>(kind);
    }
    ck.square_failures.resize(get());
    for (auto& n : ck.square_failures) n = get();
    if (pos != end) throw CheckpointCorrupt(path + ": trailing bytes");
    return ck;
}

namespace detail {

struct ModData {
    u64 m = 0;
    u64 g_mod_m = 0;
    const Filter* filter = nullptr;
};

struct ChunkResult {
    u64 checked = 0;
    u64 squares = 0;
    std::vector<u64> per_mod;
    std::vector<FailureRecord> failures;
    std::vector<u64> square_failures;
};

// Workspace for the incremental residue updates: n % m is advanced by
// adding G % m per k step, with per-row epochs instead of clearing.
struct CertifyWorkspace {
    std::vector<u64> cur;
    std::vector<u64> last_k;
    std::vector<u64> stamp;
    u64 epoch = 0;

    explicit CertifyWorkspace(std::size_t nmods)
        : cur(nmods, 0), last_k(nmods, 0), stamp(nmods, 0) {}
};

class SquareProofCache {
  public:
    // returns true when n still needs its one-time proof
    bool claim(u64 n) {
        std::lock_guard<std::mutex> lock(mu_);
        return proven_.insert(n).second;
    }

  private:
    std::mutex mu_;
    std::unordered_set<u64> proven_;
};

inline ChunkResult process_chunk(const Wheel& w, const std::vector<ModData>& mods, u64 ka,
                                 u64 kb, CertifyWorkspace& ws, SquareProofCache& squares_seen) {
    ChunkResult res;
    res.per_mod.assign(mods.size(), 0);
    const u64 G = w.G;
    for (u64 r : w.residues) {
        ++ws.epoch;
        for (u64 k = ka; k < kb; ++k) {
            u64 n = r + k * G;
            ++res.checked;
            if (is_perfect_square(n)) {
                ++res.squares;
                // n = 1 is counted but lies outside the conjecture's domain:
                // three unit fractions sum to less than 4
                if (n > 1 && squares_seen.claim(n)) {
                    FallbackOutcome fo = fallback_check(n);
                    if (fo.kind == FallbackKind::CounterexampleCandidate)
                        res.square_failures.push_back(n);
                }
                continue;
            }
            bool trapped = false;
            for (std::size_t i = 0; i < mods.size(); ++i) {
                const ModData& md = mods[i];
                u64 cur;
                if (ws.stamp[i] != ws.epoch) {
                    cur = n % md.m;
                    ws.stamp[i] = ws.epoch;
                } else {
                    u64 gap = k - ws.last_k[i];
                    cur = ws.cur[i];
                    if (gap == 1)
                        cur += md.g_mod_m;
                    else if (gap > 1)
                        cur += mulmod(gap, md.g_mod_m, md.m);
                    if (cur >= md.m) cur -= md.m;
                }
                ws.cur[i] = cur;
                ws.last_k[i] = k;
                bool in = md.filter->table.empty() ? md.filter->contains(cur)
                                                   : md.filter->table[cur] != 0;
                if (in) {
                    ++res.per_mod[i];
                    trapped = true;
                    break;
                }
            }
            if (!trapped) {
                FallbackOutcome fo = fallback_check(n);
                res.failures.push_back({n, fo.kind});
            }
        }
    }
    return res;
}

} // namespace detail

/// Runs the sieve over k in [0, K). With a MaxN limit, K = ceil(N / G):
/// whole k blocks are checked, covering every candidate below N and a
/// little beyond, the way the production runs count.
inline RunReport verify_range(const SieveConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    if (cfg.wheel.residues.empty()) throw EmptyWheel("verify_range: wheel has no residues");
    if (cfg.mods.empty()) throw InvalidModulus("verify_range: mods must be non-empty");

    u64 K = cfg.limit.kind == SieveLimit::Kind::KCount
                ? cfg.limit.value
                : (cfg.limit.value + cfg.wheel.G - 1) / cfg.wheel.G;

    std::vector<detail::ModData> mods;
    std::vector<const Filter*> filter_ptrs;
    mods.reserve(cfg.mods.size());
    for (u64 m : cfg.mods) {
        const Filter& f = cfg.filters->get(m);
        mods.push_back({m, cfg.wheel.G % m, &f});
        filter_ptrs.push_back(&f);
    }
    u64 hash = detail::sieve_config_hash(cfg.wheel, cfg.mods, filter_ptrs);

    Checkpoint acc;
    acc.config_hash = hash;
    acc.per_mod.assign(cfg.mods.size(), 0);
    bool use_ck = !cfg.checkpoint_path.empty();
    if (use_ck && std::filesystem::exists(cfg.checkpoint_path)) {
        Checkpoint loaded = load_checkpoint(cfg.checkpoint_path);
        if (loaded.config_hash != hash)
            throw ConfigMismatch(cfg.checkpoint_path + ": checkpoint belongs to another config");
        if (loaded.per_mod.size() != cfg.mods.size())
            throw ConfigMismatch(cfg.checkpoint_path + ": mod count changed");
        if (loaded.k_done > K)
            throw ConfigMismatch(cfg.checkpoint_path + ": checkpoint is ahead of the range");
        acc = std::move(loaded);
    }

    u64 k_start = std::min(acc.k_done, K);
    u64 chunk = std::max<u64>(1, cfg.chunk_size);
    u64 nchunks = (K - k_start + chunk - 1) / chunk;

    detail::SquareProofCache squares_seen;
    std::mutex mu;
    std::condition_variable cv;
    std::map<u64, detail::ChunkResult> pending;
    std::atomic<u64> next{0};
    std::exception_ptr worker_error;

    unsigned nthreads = std::max(1u, cfg.threads);
    if (nchunks < nthreads) nthreads = nchunks ? static_cast<unsigned>(nchunks) : 1;

    auto worker = [&] {
        detail::CertifyWorkspace ws(mods.size());
        try {
            for (;;) {
                u64 c = next.fetch_add(1);
                if (c >= nchunks) return;
                u64 ka = k_start + c * chunk;
                u64 kb = std::min(ka + chunk, K);
                auto res = detail::process_chunk(cfg.wheel, mods, ka, kb, ws, squares_seen);
                {
                    std::lock_guard<std::mutex> lock(mu);
                    pending.emplace(c, std::move(res));
                }
                cv.notify_all();
            }
        } catch (...) {
            {
                std::lock_guard<std::mutex> lock(mu);
                if (!worker_error) worker_error = std::current_exception();
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nthreads && nchunks > 0; ++i) pool.emplace_back(worker);

    auto last_save = std::chrono::steady_clock::now();
    auto last_progress = last_save;
    u64 merged = 0;
    if (nchunks > 0) {
        // the calling thread merges completed chunks in order
        std::unique_lock<std::mutex> lock(mu);
        while (merged < nchunks) {
            cv.wait(lock, [&] { return worker_error || pending.count(merged) > 0; });
            if (worker_error) break;
            auto it = pending.find(merged);
            detail::ChunkResult res = std::move(it->second);
            pending.erase(it);
            lock.unlock();

            acc.checked += res.checked;
            acc.squares += res.squares;
            for (std::size_t i = 0; i < acc.per_mod.size(); ++i) acc.per_mod[i] += res.per_mod[i];
            acc.failures.insert(acc.failures.end(), res.failures.begin(), res.failures.end());
            acc.square_failures.insert(acc.square_failures.end(), res.square_failures.begin(),
                                       res.square_failures.end());
            ++merged;
            acc.k_done = std::min(k_start + merged * chunk, K);
            auto now = std::chrono::steady_clock::now();
            if (use_ck && (merged == nchunks || now - last_save > std::chrono::seconds(1))) {
                save_checkpoint(cfg.checkpoint_path, acc);
                last_save = now;
            }
            if (cfg.progress && (merged == nchunks || now - last_progress > std::chrono::seconds(2))) {
                cfg.progress(acc.k_done, K);
                last_progress = now;
            }
            lock.lock();
        }
    } else {
        acc.k_done = K;
        if (use_ck) save_checkpoint(cfg.checkpoint_path, acc);
    }
    for (auto& t : pool) t.join();
    if (worker_error) std::rethrow_exception(worker_error);

    RunReport report;
    report.wheel_gap = cfg.wheel.G;
    report.residue_count = cfg.wheel.residues.size();
    report.k_count = K;
    report.max_n = K == 0 ? 0 : cfg.wheel.residues.back() + (K - 1) * cfg.wheel.G;
    report.threads = cfg.threads;
    report.chunk_size = chunk;
    report.mods = cfg.mods;
    report.checked = acc.checked;
    report.squares = acc.squares;
    report.per_mod_counts = acc.per_mod;
    report.failures = std::move(acc.failures);
    report.square_failures = std::move(acc.square_failures);
    std::sort(report.failures.begin(), report.failures.end(),
              [](const FailureRecord& a, const FailureRecord& b) { return a.n < b.n; });
    std::sort(report.square_failures.begin(), report.square_failures.end());
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

/// Greedy filter ordering over a sample of wheel candidates: repeatedly
/// pick the modulus trapping the most not-yet-trapped candidates, drop
/// moduli that trap nothing, break ties toward the smaller modulus.
inline std::vector<u64> order_mods(const std::vector<u64>& candidate_mods, KRange sample,
                                   const Wheel& wheel, const FilterSet& filters) {
    std::vector<u64> ns;
    for (u64 n : candidates(wheel, sample))
        if (!is_perfect_square(n)) ns.push_back(n);
    if (ns.empty()) throw std::invalid_argument("order_mods: empty candidate sample");

    std::size_t words = (ns.size() + 63) / 64;
    struct Entry {
        u64 m;
        std::vector<u64> bits;
    };
    std::vector<Entry> entries;
    entries.reserve(candidate_mods.size());
    std::vector<u64> sorted_mods = candidate_mods;
    std::sort(sorted_mods.begin(), sorted_mods.end());
    sorted_mods.erase(std::unique(sorted_mods.begin(), sorted_mods.end()), sorted_mods.end());
    for (u64 m : sorted_mods) {
        Entry e{m, std::vector<u64>(words, 0)};
        const Filter& f = filters.get(m);
        for (std::size_t i = 0; i < ns.size(); ++i)
            if (f.contains(ns[i])) e.bits[i / 64] |= 1ull << (i % 64);
        entries.push_back(std::move(e));
    }

    std::vector<u64> remaining(words, ~0ull);
    if (ns.size() % 64 != 0) remaining.back() = (1ull << (ns.size() % 64)) - 1;

    std::vector<u64> out;
    std::vector<bool> used(entries.size(), false);
    for (;;) {
        u64 best_count = 0;
        std::size_t best = entries.size();
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (used[i]) continue;
            u64 c = 0;
            for (std::size_t wd = 0; wd < words; ++wd)
                c += static_cast<u64>(__builtin_popcountll(entries[i].bits[wd] & remaining[wd]));
            if (c > best_count) { // ties resolve to the smaller m (entries ascend)
                best_count = c;
                best = i;
            }
        }
        if (best == entries.size() || best_count == 0) break;
        used[best] = true;
        out.push_back(entries[best].m);
        for (std::size_t wd = 0; wd < words; ++wd) remaining[wd] &= ~entries[best].bits[wd];
    }
    return out;
}

/// Odd divisors of the 7-prime wheel gap below 5000: the default
/// construction-time reduction. The full odd-divisor set is impractical
/// here (divisors reach ~3.7e7) and the published run demonstrably used a
/// partial set, so the default mirrors the published modulus universe.
inline std::vector<u64> default_policy_divisors() {
    u64 odd = 3;
    for (u64 p : kDefaultWheelPrimes) odd *= p;
    std::vector<u64> out;
    for_each_divisor(factorize(odd), [&](u64 d) {
        if (d > 1 && d < 5000) out.push_back(d);
    });
    std::sort(out.begin(), out.end());
    return out;
}

inline Wheel build_default_wheel(const FilterSet& filters) {
    std::vector<u64> primes(kDefaultWheelPrimes.begin(), kDefaultWheelPrimes.end());
    return build_wheel(primes, ReductionPolicy::custom_list(default_policy_divisors()), filters);
}

inline std::vector<u64> default_mod_list() {
    return std::vector<u64>(kDefaultModList.begin(), kDefaultModList.end());
}

inline void print_report(std::ostream& out, const RunReport& r) {
    out << "wheel: G=" << r.wheel_gap << " residues=" << r.residue_count << "\n";
    out << "range: K=" << r.k_count << " max_n=" << r.max_n << "\n";
    out << "run:   threads=" << r.threads << " chunk=" << r.chunk_size << " wall="
        << r.wall_seconds << "s\n";
    out << "certified per modulus (filter order):\n{ ";
    for (std::size_t i = 0; i < r.per_mod_counts.size(); ++i)
        out << (i ? ", " : "") << r.per_mod_counts[i];
    out << " }\n";
    out << "checked  = " << r.checked << "\n";
    out << "trapped  = " << r.trapped_total() << "\n";
    out << "squares  = " << r.squares << "\n";
    out << "failures = " << r.failures.size() << "\n";
    for (const auto& f : r.failures)
        out << "  uncertified n=" << f.n << " -> " << fallback_kind_name(f.outcome) << "\n";
    for (u64 n : r.square_failures) out << "  unproven square n=" << n << "\n";
    out << "accounting identity (trapped + squares + failures == checked): "
        << (r.accounting_ok() ? "ok" : "VIOLATED") << "\n";
}

inline std::string report_kv(const RunReport& r) {
    std::string s;
    s += "G=" + std::to_string(r.wheel_gap) + "\n";
    s += "residues=" + std::to_string(r.residue_count) + "\n";
    s += "k=" + std::to_string(r.k_count) + "\n";
    s += "max_n=" + std::to_string(r.max_n) + "\n";
    s += "threads=" + std::to_string(r.threads) + "\n";
    s += "chunk=" + std::to_string(r.chunk_size) + "\n";
    s += "checked=" + std::to_string(r.checked) + "\n";
    s += "trapped=" + std::to_string(r.trapped_total()) + "\n";
    s += "squares=" + std::to_string(r.squares) + "\n";
    s += "failures=" + std::to_string(r.failures.size()) + "\n";
    s += "counterexample_candidates=" + std::to_string(r.counterexample_count()) + "\n";
    s += "accounting_ok=" + std::string(r.accounting_ok() ? "1" : "0") + "\n";
    s += "wall_seconds=" + std::to_string(r.wall_seconds) + "\n";
    s += "mods=";
    for (std::size_t i = 0; i < r.mods.size(); ++i)
        s += (i ? "," : "") + std::to_string(r.mods[i]);
    s += "\ncounts=";
    for (std::size_t i = 0; i < r.per_mod_counts.size(); ++i)
        s += (i ? "," : "") + std::to_string(r.per_mod_counts[i]);
    s += "\n";
    return s;
}

} // namespace ess
