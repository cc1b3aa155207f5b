#include "essieve/wheel.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

using namespace ess;

TEST(BuildWheel, SingleFive) {
    FilterSet fs;
    Wheel w = build_wheel({5}, ReductionPolicy::custom_list({5}), fs);
    EXPECT_EQ(w.G, 120u);
    EXPECT_EQ(w.residues, (std::vector<u64>{1, 49}));
}

TEST(BuildWheel, FiveSeven) {
    FilterSet fs;
    Wheel w = build_wheel({5, 7}, ReductionPolicy::custom_list({5, 7}), fs);
    EXPECT_EQ(w.G, 840u);
    EXPECT_EQ(w.residues, (std::vector<u64>{1, 121, 169, 289, 361, 529}));
    EXPECT_EQ(mean_gap(w), Rational(140, 1));

    // adding the composite divisor 35 must not remove anything here
    Wheel w2 = build_wheel({5, 7}, ReductionPolicy::custom_list({5, 7, 35}), fs);
    EXPECT_EQ(w2.residues, w.residues);
    // every residue of this wheel is a perfect square
    for (u64 r : w2.residues) EXPECT_TRUE(is_perfect_square(r));
}

TEST(BuildWheel, BaseProgression) {
    FilterSet fs;
    Wheel w = build_wheel({}, ReductionPolicy::custom_list({}), fs);
    EXPECT_EQ(w.G, 24u);
    EXPECT_EQ(w.residues, (std::vector<u64>{1}));
    EXPECT_EQ(mean_gap(w), Rational(24, 1));
}

TEST(BuildWheel, PolicyPresets) {
    FilterSet fs;
    Wheel a = build_wheel({5}, ReductionPolicy::primes(), fs);
    Wheel b = build_wheel({5}, ReductionPolicy::all_odd_divisors(), fs);
    EXPECT_EQ(a.residues, (std::vector<u64>{1, 49}));
    EXPECT_EQ(b.residues, (std::vector<u64>{1, 49}));
    EXPECT_EQ(b.policy_divisors, (std::vector<u64>{3, 5, 15}));
}

TEST(BuildWheel, Errors) {
    FilterSet fs;
    EXPECT_THROW(build_wheel({5}, ReductionPolicy::custom_list({7}), fs), PolicyModulusInvalid);
    EXPECT_THROW(build_wheel({5}, ReductionPolicy::custom_list({2}), fs), PolicyModulusInvalid);
    EXPECT_THROW(build_wheel({9}, ReductionPolicy::primes(), fs), PolicyModulusInvalid);
    EXPECT_THROW(build_wheel({5, 5}, ReductionPolicy::primes(), fs), PolicyModulusInvalid);
    Wheel empty;
    EXPECT_THROW(mean_gap(empty), EmptyWheel);
}

TEST(MeanGap, SingleFive) {
    FilterSet fs;
    Wheel w = build_wheel({5}, ReductionPolicy::primes(), fs);
    EXPECT_EQ(mean_gap(w), Rational(60, 1));
}

TEST(Candidates, Streams) {
    FilterSet fs;
    Wheel w5 = build_wheel({5}, ReductionPolicy::primes(), fs);
    std::vector<u64> got;
    for (u64 n : candidates(w5, {0, 1})) got.push_back(n);
    EXPECT_EQ(got, (std::vector<u64>{1, 49}));

    got.clear();
    for (u64 n : candidates(w5, {0, 2})) got.push_back(n);
    EXPECT_EQ(got, (std::vector<u64>{1, 49, 121, 169}));

    Wheel w57 = build_wheel({5, 7}, ReductionPolicy::primes(), fs);
    got.clear();
    for (u64 n : candidates(w57, {0, 1})) got.push_back(n);
    EXPECT_EQ(got, w57.residues);
    EXPECT_EQ(candidates(w57, {3, 7}).size(), 24u);

    // ascending within and across blocks
    got.clear();
    for (u64 n : candidates(w57, {0, 5})) got.push_back(n);
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
}

TEST(Wheel, ExcludedResiduesAreCertified) {
    FilterSet fs;
    Wheel w = build_wheel({5, 7, 11}, ReductionPolicy::all_odd_divisors(), fs);
    std::vector<const Filter*> policy_filters;
    for (u64 q : w.policy_divisors) policy_filters.push_back(&fs.get(q));

    std::mt19937_64 rng(23);
    int excluded_seen = 0;
    while (excluded_seen < 20000) {
        u64 n = (rng() % 1000000000) * 24 + 1;
        if (std::binary_search(w.residues.begin(), w.residues.end(), n % w.G)) continue;
        ++excluded_seen;
        bool trapped = false;
        for (const Filter* f : policy_filters)
            if (f->contains(n)) {
                trapped = true;
                break;
            }
        ASSERT_TRUE(trapped) << "n=" << n;
    }
}

TEST(Wheel, CoprimeSquaresRetained) {
    FilterSet fs;
    Wheel w = build_wheel({5, 7, 11}, ReductionPolicy::all_odd_divisors(), fs);
    for (u64 k = 1; k * k < w.G; k += 2) {
        u64 sq = k * k;
        if (sq % 24 != 1 || gcd(sq, w.G) != 1) continue;
        EXPECT_TRUE(std::binary_search(w.residues.begin(), w.residues.end(), sq)) << sq;
    }
}

TEST(WheelFile, RoundTrip) {
    FilterSet fs;
    Wheel w = build_wheel({5, 7}, ReductionPolicy::custom_list({5, 7, 35}), fs);
    std::string path = std::filesystem::temp_directory_path() / "essieve_wheel_test.txt";
    save_wheel(path, w);
    Wheel r = load_wheel(path);
    EXPECT_EQ(r.G, w.G);
    EXPECT_EQ(r.primes, w.primes);
    EXPECT_EQ(r.residues, w.residues);
    EXPECT_EQ(r.policy.to_string(), w.policy.to_string());
    std::remove(path.c_str());
}

TEST(WheelFile, FormatErrors) {
    auto write_and_load = [](const std::string& content) {
        std::string path = std::filesystem::temp_directory_path() / "essieve_wheel_bad.txt";
        std::ofstream out(path);
        out << content;
        out.close();
        struct Cleanup {
            std::string p;
            ~Cleanup() { std::remove(p.c_str()); }
        } cleanup{path};
        return load_wheel(path);
    };
    EXPECT_THROW(write_and_load("G=100 primes=5 policy=primes\n1\n"), FormatError);
    EXPECT_THROW(write_and_load("G=120 primes=5 policy=primes\n2\n"), FormatError);
    EXPECT_THROW(write_and_load("G=120 primes=5 policy=primes\n49\n1\n"), FormatError);
    EXPECT_THROW(write_and_load("G=120 primes=5 policy=bogus\n1\n"), FormatError);
    EXPECT_THROW(write_and_load("primes=5 policy=primes\n"), FormatError);
    EXPECT_THROW(load_wheel("/nonexistent/essieve_wheel"), IoError);
}
