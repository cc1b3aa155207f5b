#include "essieve/sieve.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

using namespace ess;

namespace {

SieveConfig small_config(std::vector<u64> primes, std::vector<u64> policy,
                         std::vector<u64> mods, u64 k_count) {
    SieveConfig cfg;
    cfg.filters = std::make_shared<FilterSet>();
    cfg.wheel = build_wheel(std::move(primes), ReductionPolicy::custom_list(std::move(policy)),
                            *cfg.filters);
    cfg.mods = std::move(mods);
    cfg.limit = SieveLimit::k_count(k_count);
    return cfg;
}

std::string temp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST(Certify, KnownValues) {
    FilterSet fs;
    std::vector<u64> mods{5, 7};
    auto got = certify(97, mods, fs);
    ASSERT_TRUE(got);
    EXPECT_EQ(*got, 5u);
    EXPECT_FALSE(certify(1009, mods, fs).has_value());
    std::vector<u64> mods2{7, 5};
    got = certify(97, mods2, fs);
    ASSERT_TRUE(got); // first in mods order
    EXPECT_EQ(*got, 7u);
    EXPECT_TRUE(filter_contains(fs.get(7), 97));
}

TEST(Fallback, KnownValues) {
    auto fo = fallback_check(25);
    EXPECT_NE(fo.kind, FallbackKind::CounterexampleCandidate);
    ASSERT_TRUE(fo.triple);
    EXPECT_TRUE(verify_triple(*fo.triple));
    EXPECT_EQ(fo.triple->n, 25u);

    fo = fallback_check(49); // scales the 4/7 closed form by 7
    EXPECT_EQ(fo.kind, FallbackKind::DecomposedByEquations);
    ASSERT_TRUE(fo.triple);
    EXPECT_TRUE(verify_triple(*fo.triple));

    fo = fallback_check(2);
    EXPECT_EQ(fo.kind, FallbackKind::CounterexampleCandidate);
    EXPECT_FALSE(fo.triple.has_value());
}

TEST(Fallback, SquaresUpTo10to8SampleDecompose) {
    for (u64 k = 1; k <= 10000; k += 97) {
        u64 n = k * k;
        if (n % 24 != 1 || n < 3) continue;
        auto fo = fallback_check(n);
        EXPECT_NE(fo.kind, FallbackKind::CounterexampleCandidate) << "n=" << n;
        ASSERT_TRUE(fo.triple);
        EXPECT_TRUE(verify_triple(*fo.triple)) << "n=" << n;
    }
}

TEST(VerifyRange, KZeroIsEmpty) {
    auto cfg = small_config({5}, {5}, {5, 7}, 0);
    auto rep = verify_range(cfg);
    EXPECT_EQ(rep.checked, 0u);
    EXPECT_EQ(rep.squares, 0u);
    EXPECT_TRUE(rep.failures.empty());
    EXPECT_TRUE(rep.accounting_ok());
}

TEST(VerifyRange, WheelFilterInterplay) {
    // the wheel already strips S_5 residues, so a lone 5-filter traps
    // nothing: every non-square candidate goes to the fallback and passes
    auto cfg = small_config({5}, {5}, {5}, 10);
    auto rep = verify_range(cfg);
    EXPECT_EQ(rep.checked, 20u);
    EXPECT_EQ(rep.per_mod_counts[0], 0u);
    EXPECT_TRUE(rep.accounting_ok());
    EXPECT_EQ(rep.counterexample_count(), 0u);
    EXPECT_EQ(rep.checked, rep.squares + rep.failures.size());
    for (const auto& f : rep.failures)
        EXPECT_NE(f.outcome, FallbackKind::CounterexampleCandidate) << f.n;
    // squares below 1200 in the two residue classes: 1,49,121,169,289,361,529,841,961
    EXPECT_EQ(rep.squares, 9u);
}

TEST(VerifyRange, DeskRunZeroFailures) {
    SieveConfig cfg;
    cfg.filters = std::make_shared<FilterSet>();
    cfg.wheel = build_wheel({5, 7}, ReductionPolicy::custom_list({5, 7, 35}), *cfg.filters);
    cfg.mods = default_mod_list();
    cfg.limit = SieveLimit::max_n(10000000);
    cfg.threads = 2;
    auto rep = verify_range(cfg);
    EXPECT_EQ(rep.checked, rep.k_count * 6);
    EXPECT_GE(rep.k_count * cfg.wheel.G, 10000000u); // whole blocks cover all n < N
    EXPECT_TRUE(rep.accounting_ok());
    EXPECT_TRUE(rep.failures.empty());
    EXPECT_TRUE(rep.square_failures.empty());
}

TEST(VerifyRange, MaxNLimitCoversWholeBlocks) {
    auto cfg = small_config({5}, {5}, {7, 11, 13, 17, 19, 23, 4495}, 0);
    cfg.limit = SieveLimit::max_n(1000);
    auto rep = verify_range(cfg);
    // K = ceil(1000 / 120) = 9
    EXPECT_EQ(rep.k_count, 9u);
    EXPECT_EQ(rep.checked, 18u);
    EXPECT_GE(rep.max_n, 1000u);
}

TEST(VerifyRange, ThreadCountInvariance) {
    for (unsigned threads : {1u, 2u, 5u}) {
        auto cfg = small_config({5, 7}, {5, 7}, {11, 13, 17, 19, 23, 4495}, 500);
        cfg.threads = threads;
        cfg.chunk_size = 17;
        auto rep = verify_range(cfg);
        static std::optional<RunReport> first;
        if (!first) {
            first = rep;
        } else {
            EXPECT_EQ(rep.checked, first->checked);
            EXPECT_EQ(rep.squares, first->squares);
            EXPECT_EQ(rep.per_mod_counts, first->per_mod_counts);
            EXPECT_EQ(rep.failures, first->failures);
        }
    }
}

TEST(VerifyRange, ModOrderPermutationInvariance) {
    std::vector<std::vector<u64>> orders = {
        {11, 13, 17, 19, 23, 4495}, {4495, 23, 19, 17, 13, 11}, {17, 4495, 11, 23, 13, 19}};
    std::optional<u64> checked, squares, failures;
    for (auto& mods : orders) {
        auto cfg = small_config({5, 7}, {5, 7}, mods, 300);
        auto rep = verify_range(cfg);
        EXPECT_TRUE(rep.accounting_ok());
        if (!checked) {
            checked = rep.checked;
            squares = rep.squares;
            failures = rep.failures.size();
        } else {
            EXPECT_EQ(rep.checked, *checked);
            EXPECT_EQ(rep.squares, *squares);
            EXPECT_EQ(rep.failures.size(), *failures);
        }
    }
}

TEST(Checkpoint, SaveLoadRoundTrip) {
    Checkpoint ck;
    ck.config_hash = 0x1234567890abcdefull;
    ck.k_done = 600;
    ck.checked = 1200;
    ck.squares = 9;
    ck.per_mod = {5, 0, 7};
    ck.failures = {{49, FallbackKind::DecomposedByEquations}};
    ck.square_failures = {};
    std::string path = temp_path("essieve_ck_test.bin");
    save_checkpoint(path, ck);
    auto back = load_checkpoint(path);
    EXPECT_EQ(back.config_hash, ck.config_hash);
    EXPECT_EQ(back.k_done, ck.k_done);
    EXPECT_EQ(back.checked, ck.checked);
    EXPECT_EQ(back.squares, ck.squares);
    EXPECT_EQ(back.per_mod, ck.per_mod);
    EXPECT_EQ(back.failures, ck.failures);
    std::remove(path.c_str());
}

TEST(Checkpoint, CorruptionDetected) {
    Checkpoint ck;
    ck.per_mod = {1, 2, 3};
    std::string path = temp_path("essieve_ck_bad.bin");
    save_checkpoint(path, ck);

    // truncate
    auto data = [&] {
        std::ifstream in(path, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }();
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(data.data(), static_cast<std::streamsize>(data.size() - 6));
    }
    EXPECT_THROW(load_checkpoint(path), CheckpointCorrupt);

    // flip a byte
    {
        std::string bad = data;
        bad[7] ^= 0x40;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(bad.data(), static_cast<std::streamsize>(bad.size()));
    }
    EXPECT_THROW(load_checkpoint(path), CheckpointCorrupt);
    std::remove(path.c_str());
    EXPECT_THROW(load_checkpoint(path), IoError);
}

TEST(Checkpoint, ResumeBitExact) {
    std::string path = temp_path("essieve_resume_test.bin");
    std::remove(path.c_str());

    auto make = [&](u64 k) {
        auto cfg = small_config({5, 7}, {5, 7}, {11, 13, 17, 19, 23, 4495}, k);
        cfg.chunk_size = 37;
        cfg.checkpoint_path = path;
        return cfg;
    };
    auto split = make(600);
    auto rep600 = verify_range(split);
    EXPECT_EQ(rep600.k_count, 600u);

    auto resumed = verify_range(make(1000));
    std::remove(path.c_str());
    auto straight = verify_range([&] {
        auto cfg = make(1000);
        cfg.checkpoint_path.clear();
        return cfg;
    }());
    std::remove(path.c_str());

    EXPECT_EQ(resumed.checked, straight.checked);
    EXPECT_EQ(resumed.squares, straight.squares);
    EXPECT_EQ(resumed.per_mod_counts, straight.per_mod_counts);
    EXPECT_EQ(resumed.failures, straight.failures);
}

TEST(Checkpoint, ConfigMismatchDetected) {
    std::string path = temp_path("essieve_mismatch_test.bin");
    std::remove(path.c_str());
    auto cfg = small_config({5, 7}, {5, 7}, {11, 13}, 50);
    cfg.checkpoint_path = path;
    verify_range(cfg);

    auto altered = small_config({5, 7}, {5, 7}, {11, 17}, 80);
    altered.checkpoint_path = path;
    EXPECT_THROW(verify_range(altered), ConfigMismatch);
    std::remove(path.c_str());
}

TEST(OrderMods, GreedyMatchesReference) {
    FilterSet fs;
    Wheel w = build_wheel({}, ReductionPolicy::custom_list({}), fs);
    std::vector<u64> cands{5, 7, 11, 13, 3};
    KRange sample{0, 400};
    auto got = order_mods(cands, sample, w, fs);

    // reference greedy on the same sample
    std::vector<u64> ns;
    for (u64 n : candidates(w, sample))
        if (!is_perfect_square(n)) ns.push_back(n);
    std::vector<u64> sorted_cands = cands;
    std::sort(sorted_cands.begin(), sorted_cands.end());
    std::vector<u64> want;
    std::vector<bool> trapped(ns.size(), false);
    for (;;) {
        u64 best_m = 0, best_c = 0;
        for (u64 m : sorted_cands) {
            if (std::find(want.begin(), want.end(), m) != want.end()) continue;
            const Filter& f = fs.get(m);
            u64 c = 0;
            for (std::size_t i = 0; i < ns.size(); ++i)
                if (!trapped[i] && f.contains(ns[i])) ++c;
            if (c > best_c) {
                best_c = c;
                best_m = m;
            }
        }
        if (best_c == 0) break;
        want.push_back(best_m);
        const Filter& f = fs.get(best_m);
        for (std::size_t i = 0; i < ns.size(); ++i)
            if (f.contains(ns[i])) trapped[i] = true;
    }
    EXPECT_EQ(got, want);
    // 3 traps nothing in this progression and must be dropped
    EXPECT_TRUE(std::find(got.begin(), got.end(), 3) == got.end());
}

TEST(OrderMods, TieBreaksTowardSmallerModulus) {
    // two hand-made filters trapping exactly the same candidates
    FilterSet fs;
    Filter small;
    small.m = 9;
    small.a = lcm(9, 24);
    small.residues = {1};
    small.rebuild_table();
    fs.put(std::move(small));
    Filter large;
    large.m = 27;
    large.a = lcm(27, 24);
    large.residues = {1, 10, 19};
    large.rebuild_table();
    fs.put(std::move(large));

    Wheel w = build_wheel({}, ReductionPolicy::custom_list({}), fs);
    auto got = order_mods({27, 9}, {0, 300}, w, fs);
    ASSERT_FALSE(got.empty());
    EXPECT_EQ(got.front(), 9u);             // equal counts resolve to the smaller m
    EXPECT_EQ(got, (std::vector<u64>{9}));  // the other then traps nothing new
}

TEST(Certify, NonCoprimeSquareIsHonestlyTrapped) {
    // 25 = 1 (mod 24) and 25 % 5 = 0 lies in S_5: the class is certified by
    // scaling (4/25 = 1/10 + 1/20 + 1/100), so certify reports the trap.
    // Verification runs count squares before consulting filters.
    FilterSet fs;
    std::vector<u64> mods{5};
    auto got = certify(25, mods, fs);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, 5u);
    EXPECT_TRUE(verify_triple({25, 10, 20, 100}));
}

TEST(Filters, ConcurrentConstructionMatchesSerial) {
    FilterSet serial;
    std::vector<u64> ms{3, 5, 7, 9, 11, 13, 15, 21, 33, 35, 55, 65, 77, 85, 95, 99, 117, 119};
    std::vector<std::vector<u64>> want;
    for (u64 m : ms) want.push_back(serial.get(m).residues);

    FilterSet shared;
    std::vector<std::thread> threads;
    std::vector<std::vector<std::vector<u64>>> got(4);
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&, t] {
            for (u64 m : ms) got[t].push_back(shared.get(m).residues);
        });
    for (auto& th : threads) th.join();
    for (int t = 0; t < 4; ++t) EXPECT_EQ(got[t], want);
}

TEST(OrderMods, SingleAndEmpty) {
    FilterSet fs;
    Wheel w = build_wheel({}, ReductionPolicy::custom_list({}), fs);
    auto got = order_mods({5}, {0, 50}, w, fs);
    EXPECT_EQ(got, (std::vector<u64>{5}));
    got = order_mods({3}, {0, 50}, w, fs); // S_3 is empty: traps nothing
    EXPECT_TRUE(got.empty());
    EXPECT_THROW(order_mods({5}, {0, 0}, w, fs), std::invalid_argument);
}

TEST(Report, PrintAndKv) {
    auto cfg = small_config({5}, {5}, {7, 11, 13, 4495}, 20);
    auto rep = verify_range(cfg);
    std::ostringstream os;
    print_report(os, rep);
    EXPECT_NE(os.str().find("accounting identity"), std::string::npos);
    auto kv = report_kv(rep);
    EXPECT_NE(kv.find("accounting_ok=1"), std::string::npos);
    EXPECT_NE(kv.find("checked=40"), std::string::npos);
}

TEST(Defaults, AssetsSane) {
    auto mods = default_mod_list();
    EXPECT_EQ(mods.size(), 583u);
    EXPECT_EQ(mods[0], 3u);
    EXPECT_EQ(mods[8], 4495u);
    EXPECT_EQ(mods.back(), 4999u);
    auto divs = default_policy_divisors();
    EXPECT_TRUE(std::binary_search(divs.begin(), divs.end(), 3));
    EXPECT_TRUE(std::binary_search(divs.begin(), divs.end(), 4199)); // 13*17*19
    for (u64 q : divs) EXPECT_LT(q, 5000u);
}
