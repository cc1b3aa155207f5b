#include "essieve/filters.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

using namespace ess;

namespace {

std::vector<u64> residues_of(u64 m) { return compute_filter(m).residues; }

} // namespace

TEST(ComputeFilter, PrimeTables) {
    EXPECT_EQ(residues_of(5), (std::vector<u64>{0, 2, 3}));
    EXPECT_EQ(residues_of(7), (std::vector<u64>{0, 3, 5, 6}));
    EXPECT_EQ(residues_of(11), (std::vector<u64>{0, 7, 8, 10}));
    EXPECT_EQ(residues_of(13), (std::vector<u64>{0, 5, 6, 8, 11}));
}

TEST(ComputeFilter, CompositeTables) {
    EXPECT_EQ(residues_of(15), (std::vector<u64>{7, 10, 13}));
    EXPECT_EQ(residues_of(3), (std::vector<u64>{}));
}

TEST(ComputeFilter, Errors) {
    EXPECT_THROW(compute_filter(4), EvenModulus);
    EXPECT_THROW(compute_filter(0), EvenModulus);
}

TEST(FilterContains, KnownValues) {
    Filter s5 = compute_filter(5);
    EXPECT_TRUE(filter_contains(s5, 97));
    EXPECT_FALSE(filter_contains(s5, 49));
    Filter s7 = compute_filter(7);
    EXPECT_FALSE(filter_contains(s7, 1009));
    EXPECT_TRUE(filter_contains(s7, 601));
}

TEST(Shorten, KnownValues) {
    EXPECT_EQ(shorten(55).residues, (std::vector<u64>{24, 39}));
    EXPECT_TRUE(shorten(15).residues.empty());
    // prime m keeps its filter unchanged
    for (u64 m : {5ull, 7ull, 23ull, 37ull}) EXPECT_EQ(shorten(m).residues, residues_of(m));
}

TEST(Shorten, SharedProvider) {
    FilterSet fs;
    auto provider = [&](u64 q) -> const Filter& { return fs.get(q); };
    EXPECT_EQ(shorten(55, provider).residues, (std::vector<u64>{24, 39}));
    EXPECT_EQ(shorten(65, provider).residues, (std::vector<u64>{54, 59}));
}

TEST(FilterSet, CachesAndAccepts) {
    FilterSet fs;
    const Filter& a = fs.get(5);
    const Filter& b = fs.get(5);
    EXPECT_EQ(&a, &b);
    Filter custom;
    custom.m = 9;
    custom.a = lcm(9, 24);
    custom.residues = {1, 2};
    custom.rebuild_table();
    fs.put(std::move(custom));
    EXPECT_EQ(fs.get(9).residues, (std::vector<u64>{1, 2}));
}

TEST(SaveLoad, RoundTrip) {
    std::vector<Filter> filters{compute_filter(5), compute_filter(7), compute_filter(3)};
    std::string path = std::filesystem::temp_directory_path() / "essieve_filters_test.txt";
    save_filters(path, filters);
    auto loaded = load_filters(path);
    ASSERT_EQ(loaded.size(), filters.size());
    for (std::size_t i = 0; i < filters.size(); ++i) {
        EXPECT_EQ(loaded[i].m, filters[i].m);
        EXPECT_EQ(loaded[i].residues, filters[i].residues);
    }
    std::remove(path.c_str());
}

TEST(SaveLoad, ParseAndErrors) {
    std::stringstream good("# comment\n\n5: 0,2,3\n3:\n");
    auto filters = parse_filters(good, "good");
    ASSERT_EQ(filters.size(), 2u);
    EXPECT_EQ(filters[0].m, 5u);
    EXPECT_EQ(filters[0].residues, (std::vector<u64>{0, 2, 3}));
    EXPECT_TRUE(filters[1].residues.empty());

    std::stringstream even("4: 1\n");
    EXPECT_THROW(parse_filters(even, "even"), FormatError);
    std::stringstream big("5: 0,7\n");
    EXPECT_THROW(parse_filters(big, "big"), FormatError);
    std::stringstream order("5: 3,2\n");
    EXPECT_THROW(parse_filters(order, "order"), FormatError);
    std::stringstream nocolon("5 0,2\n");
    EXPECT_THROW(parse_filters(nocolon, "nocolon"), FormatError);
    EXPECT_THROW(load_filters("/nonexistent/essieve"), IoError);
}

TEST(Filters, LiftPropertySample) {
    // q | m: anything trapped by S_q is trapped by S_m  (n = 1 mod 24)
    FilterSet fs;
    for (u64 m = 3; m <= 255; m += 2) {
        const Filter& fm = fs.get(m);
        for (u64 q : divisors(m)) {
            if (q < 3 || q == m) continue;
            const Filter& fq = fs.get(q);
            u64 a = lcm(m, 24);
            for (u64 n = 1; n < a + 1; n += 24)
                if (fq.contains(n)) {
                    EXPECT_TRUE(fm.contains(n)) << "m=" << m << " q=" << q;
                }
        }
    }
}
