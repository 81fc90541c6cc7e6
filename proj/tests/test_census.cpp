#include <gtest/gtest.h>

#include <functional>

#include "gen.hpp"

using namespace relframe;
using namespace relframe::testgen;

namespace {

long long pow2(long long e) { return 1LL << e; }

bool tables_equal(const Frame& a, const Frame& b) { return a.n == b.n && a.star == b.star && a.table == b.table; }

bool isomorphic(const Frame& a, const Frame& b) {
    if (a.n != b.n) return false;
    for (const auto& pi : star_isomorphisms(a.star, b.star))
        if (permute_frame(a, pi).table == b.table) return true;
    return false;
}

Skeleton random_skeleton(Rng& rng, int max_n) {
    for (;;) {
        int n = 1 + pick(rng, max_n);
        int s = 1 + pick(rng, n);
        if ((n - s) % 2 == 0) return make_skeleton(n, s);
    }
}

}  // namespace

TEST(Skeleton, Shapes) {
    auto sk = make_skeleton(5, 3);
    EXPECT_EQ(sk.star, (std::vector<int>{0, 1, 2, 4, 3}));
    EXPECT_THROW(make_skeleton(4, 3), std::invalid_argument);
    EXPECT_THROW(make_skeleton(3, 0), std::invalid_argument);
    EXPECT_EQ(valid_skeleton_shapes(5), (std::vector<std::pair<int, int>>{{5, 5}, {5, 3}, {5, 1}}));
}

TEST(BaseTriples, Examples) {
    auto r = base_triples(make_skeleton(2, 2));
    EXPECT_EQ(r, (std::vector<Triple>{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
    EXPECT_EQ(base_triples(make_skeleton(1, 1)), (std::vector<Triple>{{0, 0, 0}}));
    EXPECT_EQ(base_triples(make_skeleton(3, 1)).size(), 7u);
}

TEST(Cycles, Examples) {
    auto c44 = cycles(make_skeleton(4, 4));
    EXPECT_EQ(c44.size(), 10u);
    std::map<int, int> by_type;
    for (const auto& c : c44) ++by_type[c.type];
    EXPECT_EQ(by_type, (std::map<int, int>{{1, 3}, {2, 6}, {3, 1}}));
    auto c31 = cycles(make_skeleton(3, 1));
    ASSERT_EQ(c31.size(), 2u);
    std::set<int> types = {c31[0].type, c31[1].type};
    EXPECT_EQ(types, (std::set<int>{9, 10}));
    auto c22 = cycles(make_skeleton(2, 2));
    ASSERT_EQ(c22.size(), 1u);
    EXPECT_EQ(c22[0].triples, (std::vector<Triple>{{1, 1, 1}}));
}

TEST(CountFormulas, Examples) {
    auto c = count_formulas(4, 4);
    EXPECT_EQ(c.F, 10);
    EXPECT_EQ(c.G, 7);
    EXPECT_EQ(c.P, 6);
    auto d = count_formulas(5, 5);
    EXPECT_EQ(d.G, 16);
    EXPECT_EQ(d.P, 24);
    for (int n = 1; n <= 12; ++n) EXPECT_EQ(count_formulas(n, n).F, (n - 1) * n * (n + 1) / 6);
    EXPECT_THROW(count_formulas(4, 3), std::invalid_argument);
}

TEST(Enumerate, Examples) {
    std::size_t all = 0, dense = 0, d31 = 0;
    enumerate_frames(make_skeleton(4, 4), {}, [&](const Frame&) { ++all; });
    enumerate_frames(make_skeleton(4, 4), {true, false}, [&](const Frame&) { ++dense; });
    enumerate_frames(make_skeleton(3, 1), {true, false}, [&](const Frame&) { ++d31; });
    EXPECT_EQ(all, 1024u);
    EXPECT_EQ(dense, 128u);
    EXPECT_EQ(count_formulas(3, 1).G, 1);
    EXPECT_EQ(d31, 2u);
}

TEST(Enumerate, Budget) {
    CycleSpace space(make_skeleton(7, 7));
    EXPECT_THROW(space.enumerate({}, [](std::uint64_t) {}, 24), ResourceError);
}

TEST(Enumerate, FramesSatisfyConditions) {
    for (int n = 1; n <= 5; ++n)
        for (auto [nn, s] : valid_skeleton_shapes(n)) {
            for (bool dense : {false, true}) {
                std::size_t seen = 0;
                enumerate_frames(make_skeleton(n, s), {dense, false}, [&](const Frame& f) {
                    if (seen++ % 7 != 0) return;
                    auto r = classify(f);
                    for (Condition c : {Condition::left_rotation, Condition::right_rotation,
                                        Condition::center_reflection, Condition::left_reflection,
                                        Condition::right_reflection, Condition::identity, Condition::comm})
                        ASSERT_TRUE(r.get(c)) << to_string(c) << "\n" << format_frame(f);
                    if (dense) ASSERT_TRUE(r.get(Condition::dense));
                    if (s == n) ASSERT_TRUE(r.get(Condition::symm));
                });
            }
        }
}

TEST(Canonical, Examples) {
    Frame k5 = builtin_frame("k5");
    Frame k1 = builtin_frame("k1");
    EXPECT_EQ(canonical_form(k5), canonical_form(permute_frame(k5, {0, 2, 3, 1})));
    EXPECT_NE(canonical_form(k1), canonical_form(k5));
    EXPECT_THROW(canonical_form(make_pair_frame(2)), std::invalid_argument);
}

TEST(Canonical, OrbitStabilizerOverSymmetricFour) {
    auto sk = make_skeleton(4, 4);
    auto autos = star_isomorphisms(sk.star, sk.star);
    ASSERT_EQ(autos.size(), 6u);
    std::map<std::string, Frame> reps;
    enumerate_frames(sk, {}, [&](const Frame& f) { reps.emplace(canonical_form(f), f); });
    std::size_t total = 0;
    for (const auto& [k, f] : reps) {
        std::size_t stab = 0;
        for (const auto& pi : autos) stab += tables_equal(permute_frame(f, pi), f);
        total += autos.size() / stab;
    }
    EXPECT_EQ(total, 1024u);
}

TEST(Census, FourElementKr) {
    auto r = census(4, CensusClass::kr, true);
    EXPECT_EQ(r.iso_class_count, 14u);
    EXPECT_EQ(r.representatives.size(), 14u);
    for (const auto& f : r.representatives) EXPECT_TRUE(classify(f).kr) << format_frame(f);
}

TEST(Census, FiveElementCounts) {
    EXPECT_EQ(census(5, CensusClass::kr).iso_class_count, 390u);
    auto tr = census(5, CensusClass::tr);
    EXPECT_EQ(tr.iso_class_count, 594u);
    ASSERT_EQ(tr.per_s.size(), 3u);
    std::uint64_t sum = 0;
    for (const auto& row : tr.per_s) sum += row.iso;
    EXPECT_EQ(sum, 594u);
}

TEST(Census, ClassNames) {
    for (auto c : {CensusClass::comm_na, CensusClass::sym_na, CensusClass::dense_comm_na, CensusClass::dense_sym_na,
                   CensusClass::kr, CensusClass::tr})
        EXPECT_EQ(census_class_from_string(to_string(c)), c);
    EXPECT_THROW(census_class_from_string("ra"), std::invalid_argument);
}

TEST(Census, LabeledCountsMatchFormulas) {
    for (int n = 1; n <= 5; ++n) {
        auto comm = census(n, CensusClass::comm_na);
        auto dense = census(n, CensusClass::dense_comm_na);
        long long want = 0, want_dense = 0;
        for (auto [nn, s] : valid_skeleton_shapes(n)) {
            want += pow2(count_formulas(n, s).F);
            want_dense += pow2(count_formulas(n, s).G);
        }
        EXPECT_EQ(comm.labeled_count, std::uint64_t(want)) << n;
        EXPECT_EQ(dense.labeled_count, std::uint64_t(want_dense)) << n;
        EXPECT_EQ(census(n, CensusClass::sym_na).labeled_count, std::uint64_t(pow2(count_formulas(n, n).F)));
        EXPECT_EQ(census(n, CensusClass::dense_sym_na).labeled_count, std::uint64_t(pow2(count_formulas(n, n).G)));
    }
}

TEST(Census, CycleCountsAndAutomorphisms) {
    auto sizes = cycle_type_sizes();
    for (int n = 1; n <= 7; ++n)
        for (auto [nn, s] : valid_skeleton_shapes(n)) {
            auto sk = make_skeleton(n, s);
            auto cs = cycles(sk);
            std::vector<long long> got(14, 0);
            for (const auto& c : cs) {
                ++got[c.type];
                EXPECT_EQ(int(c.triples.size()), sizes[c.type]) << n << "," << s << " type " << c.type;
            }
            auto want = cycle_type_counts(n, s);
            for (int t = 1; t <= 13; ++t) EXPECT_EQ(got[t], want[t]) << n << "," << s << " type " << t;
            EXPECT_EQ(cs.size(), std::size_t(count_formulas(n, s).F));
            EXPECT_EQ(brute_force_automorphisms(sk), std::uint64_t(count_formulas(n, s).P)) << n << "," << s;
        }
}

TEST(Census, CyclesPartitionNonzeroTriples) {
    for (int n = 1; n <= 7; ++n)
        for (auto [nn, s] : valid_skeleton_shapes(n)) {
            auto sk = make_skeleton(n, s);
            auto cs = cycles(sk);
            std::set<Triple> seen;
            std::set<Triple> base;
            for (const auto& t : base_triples(sk)) base.insert(t);
            for (const auto& c : cs)
                for (const auto& t : c.triples) {
                    EXPECT_TRUE(t[0] && t[1] && t[2]);
                    EXPECT_TRUE(seen.insert(t).second) << "overlap";
                    EXPECT_EQ(cycle_closure(sk.star, t), c.triples);
                }
            std::size_t nonzero = 0;
            for (int x = 1; x < n; ++x)
                for (int y = 1; y < n; ++y)
                    for (int z = 1; z < n; ++z) nonzero += !base.count({x, y, z});
            EXPECT_EQ(seen.size(), nonzero);
            Frame full = frame_from_cycles(sk, cs, (cs.size() >= 64 ? ~0ull : (1ull << cs.size()) - 1));
            auto r = classify(full);
            EXPECT_TRUE(r.na && r.get(Condition::comm)) << n << "," << s;
        }
}

int sample_frequency(int n, const std::function<bool(const Frame&)>& pred) {
    CycleSpace space(make_skeleton(n, n));
    int hits = 0;
    for (int seed = 0; seed < 200; ++seed) hits += pred(space.sample(true, std::uint64_t(seed)));
    return hits;
}

TEST(Sample, Deterministic) {
    auto sk = make_skeleton(6, 4);
    EXPECT_EQ(sample_random(sk, true, 5).table, sample_random(sk, true, 5).table);
    EXPECT_NE(sample_random(sk, false, 5).table, sample_random(sk, false, 6).table);
    Frame big = sample_random(make_skeleton(9, 9), true, 1);
    EXPECT_TRUE(check_condition(big, Condition::dense));
    EXPECT_TRUE(classify(big).na);
}

TEST(Sample, DiamondFrequencyTrend) {
    auto d1 = [](const Frame& f) { return diamond(f, 1); };
    EXPECT_GT(sample_frequency(9, d1), sample_frequency(5, d1));
}

TEST(Sample, PaschFrequencyTrend) {
    auto pasch = [](const Frame& f) { return check_condition(f, Condition::pasch); };
    EXPECT_GE(sample_frequency(9, pasch), sample_frequency(5, pasch));
}

TEST(Property, CanonicalFormIsomorphismInvariant) {
    Rng rng(51);
    for (int i = 0; i < 1000; ++i) {
        auto sk = random_skeleton(rng, 6);
        Frame f = sample_random(sk, pick(rng, 2), rng());
        std::vector<int> pi(f.n);
        for (int k = 0; k < f.n; ++k) pi[k] = k;
        std::shuffle(pi.begin() + 1, pi.end(), rng);
        Frame g = permute_frame(f, pi);
        ASSERT_EQ(canonical_form(f), canonical_form(g)) << format_frame(f);
        Assignment h = random_assignment(rng, f, {"A", "B"}), gh;
        for (const auto& [k, v] : h) gh[k] = permute_mask(v, pi);
        Term p = random_predicate(rng, 3, {"A", "B"});
        ASSERT_EQ(permute_mask(eval(f, h, p), pi), eval(g, gh, p));
    }
}

TEST(Property, CanonicalFormSeparatesClasses) {
    Rng rng(52);
    int equal = 0;
    for (int i = 0; i < 1000; ++i) {
        int n = 3 + pick(rng, 2);
        int s = n - 2 * pick(rng, (n + 1) / 2);
        auto sk = make_skeleton(n, s);
        Frame a = sample_random(sk, true, rng()), b = sample_random(sk, true, rng());
        bool same = canonical_form(a) == canonical_form(b);
        equal += same;
        ASSERT_EQ(same, isomorphic(a, b)) << format_frame(a) << format_frame(b);
    }
    EXPECT_GT(equal, 10);
}
