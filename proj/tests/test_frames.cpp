#include <gtest/gtest.h>

#include <sstream>

#include "gen.hpp"

using namespace relframe;
using namespace relframe::testgen;

namespace {

bool subset_dense(const Frame& f) {
    for (Mask X = 0; X <= f.all(); ++X)
        if ((X & f.compose(X, X)) != X) return false;
    return true;
}

bool subset_comm(const Frame& f) {
    for (Mask X = 0; X <= f.all(); ++X)
        for (Mask Y = 0; Y <= f.all(); ++Y)
            if (f.compose(X, Y) != f.compose(Y, X)) return false;
    return true;
}

bool subset_symm(const Frame& f) {
    for (Mask X = 0; X <= f.all(); ++X)
        if (f.converse(X) != X) return false;
    return true;
}

// Fixes element 0, which the CR conditions name explicitly.
std::vector<int> random_permutation(Rng& rng, int n) {
    std::vector<int> pi(n);
    for (int i = 0; i < n; ++i) pi[i] = i;
    std::shuffle(pi.begin() + 1, pi.end(), rng);
    return pi;
}

const std::vector<Condition> kLeftRotationThroughPasch = {
    Condition::left_rotation, Condition::right_rotation, Condition::center_reflection,
    Condition::left_reflection, Condition::right_reflection, Condition::identity,
    Condition::involution, Condition::semi_pasch, Condition::pasch};

}  // namespace

TEST(Builtin, CompositionExamples) {
    Frame k2 = builtin_frame("k2");
    EXPECT_EQ(k2.compose(bit(1), bit(2)), bit(1) | bit(2));
    EXPECT_EQ(k2.compose(bit(2), bit(1)), bit(1));
    Frame k1 = builtin_frame("k1");
    EXPECT_EQ(k1.compose(bit(1), bit(1)), bit(0) | bit(1));
    EXPECT_EQ(k1.compose(bit(1), 0), 0u);
    EXPECT_EQ(k1.compose(0, bit(2)), 0u);
}

TEST(Builtin, ElementNames) {
    EXPECT_EQ(builtin_frame("k2").format_set(0b1111), "{0,a,b,b*}");
    EXPECT_EQ(builtin_frame("k5").format_set(0b0011), "{1',a}");
    EXPECT_EQ(builtin_frame("k4").converse(bit(1)), bit(2));
    EXPECT_THROW(builtin_frame("k9"), std::invalid_argument);
}

TEST(Classify, BuiltinExamples) {
    auto k5 = classify(builtin_frame("k5"));
    EXPECT_TRUE(k5.kr);
    EXPECT_TRUE(k5.tr);
    auto k4 = classify(builtin_frame("k4"));
    EXPECT_TRUE(k4.cr);
    EXPECT_FALSE(k4.sa);
    auto k2 = classify(builtin_frame("k2"));
    EXPECT_TRUE(k2.ra);
    EXPECT_FALSE(k2.get(Condition::comm));
    auto k1 = classify(builtin_frame("k1"));
    EXPECT_FALSE(k1.get(Condition::pasch));
    EXPECT_TRUE(k1.get(Condition::semi_pasch));
    EXPECT_TRUE(k1.sa);
    EXPECT_FALSE(k1.ra);
}

TEST(Conditions, BuiltinProperties) {
    Frame k1 = builtin_frame("k1"), k2 = builtin_frame("k2"), k3 = builtin_frame("k3");
    EXPECT_TRUE(check_condition(k1, Condition::dense));
    EXPECT_TRUE(check_condition(k1, Condition::comm));
    EXPECT_TRUE(check_condition(k1, Condition::symm));
    EXPECT_TRUE(check_condition(k2, Condition::dense));
    EXPECT_FALSE(check_condition(k2, Condition::comm));
    EXPECT_FALSE(check_condition(k3, Condition::dense));
}

TEST(Conditions, StringForms) {
    EXPECT_STREQ(to_string(Condition::left_rotation), "left-rotation");
    EXPECT_EQ(condition_from_string("semi-pasch"), Condition::semi_pasch);
    for (Condition c : all_conditions()) EXPECT_EQ(condition_from_string(to_string(c)), c);
    EXPECT_THROW(condition_from_string("nope"), std::invalid_argument);
}

TEST(PairFrame, SmallFacts) {
    Frame p1 = make_pair_frame(1);
    EXPECT_EQ(p1.n, 1);
    EXPECT_TRUE(p1.has(0, 0, 0));
    Frame p3 = make_pair_frame(3);
    EXPECT_EQ(p3.n, 9);
    EXPECT_EQ(p3.triple_count(), 27u);
}

TEST(PairFrame, ConditionsHoldUpToFour) {
    for (int m = 1; m <= 4; ++m) {
        Frame f = make_pair_frame(m);
        for (Condition c : kLeftRotationThroughPasch) EXPECT_TRUE(check_condition(f, c)) << m << " " << to_string(c);
    }
}

TEST(GroupFrame, ConditionsHoldUpToTwelve) {
    for (int m = 1; m <= 12; ++m) {
        Frame f = make_cyclic_group_frame(m);
        for (Condition c : kLeftRotationThroughPasch) EXPECT_TRUE(check_condition(f, c)) << m << " " << to_string(c);
        EXPECT_TRUE(check_condition(f, Condition::comm));
    }
}

TEST(MakeFrame, Validation) {
    EXPECT_THROW(make_frame(0, {}, 1, {}, "x"), ResourceError);
    EXPECT_THROW(make_frame(2, {0}, 1, {}, "x"), std::invalid_argument);
    EXPECT_THROW(make_frame(2, {0, 1}, 1, {{0, 0, 2}}, "x"), std::invalid_argument);
    EXPECT_THROW(make_frame(2, {0, 2}, 1, {}, "x"), std::invalid_argument);
    EXPECT_THROW(make_frame(2, {0, 1}, 4, {}, "x"), std::invalid_argument);
}

TEST(FrameFile, RoundTrip) {
    for (const auto& name : builtin_frame_names()) {
        Frame f = builtin_frame(name);
        std::istringstream in(format_frame(f));
        Frame g = parse_frame(in);
        EXPECT_EQ(g.n, f.n);
        EXPECT_EQ(g.star, f.star);
        EXPECT_EQ(g.identity, f.identity);
        EXPECT_EQ(g.table, f.table);
    }
}

TEST(FrameFile, Errors) {
    std::istringstream missing("frame x\nstar 0\n");
    EXPECT_THROW(parse_frame(missing), std::invalid_argument);
    std::istringstream bad("elements 2\ntriples\n0 0\nend\n");
    EXPECT_THROW(parse_frame(bad), std::invalid_argument);
    std::istringstream unknown("elements 2\nbogus 1\n");
    EXPECT_THROW(parse_frame(unknown), std::invalid_argument);
}

TEST(FrameFile, DefaultsAndComments) {
    std::istringstream in("# two elements\nframe g2\nelements 2\ntriples\n0 0 0\n0 1 1\n1 0 1\n1 1 0\nend\n");
    Frame f = parse_frame(in);
    EXPECT_EQ(f.identity, 1u);
    EXPECT_EQ(f.star, (std::vector<int>{0, 1}));
    EXPECT_EQ(f.table, make_cyclic_group_frame(2).table);
}

TEST(FrameTable, ListsCells) {
    std::string t = format_table(builtin_frame("k2"));
    EXPECT_NE(t.find("{a,b}"), std::string::npos);
}

TEST(CycleClosure, ContainsAllImages) {
    std::vector<int> star = {0, 2, 1};
    auto c = cycle_closure(star, {1, 1, 2});
    EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
    EXPECT_NE(std::find(c.begin(), c.end(), Triple{1, 1, 2}), c.end());
    for (const auto& t : c) {
        auto d = cycle_closure(star, t);
        EXPECT_EQ(d, c);
    }
}

TEST(Property, ConditionsMatchSubsetLaws) {
    Rng rng(11);
    for (int i = 0; i < 1500; ++i) {
        Frame f = random_frame(rng, 1 + pick(rng, 4));
        f.accelerate();
        ASSERT_EQ(check_condition(f, Condition::dense), subset_dense(f)) << format_frame(f);
        ASSERT_EQ(check_condition(f, Condition::comm), subset_comm(f)) << format_frame(f);
        ASSERT_EQ(check_condition(f, Condition::symm), subset_symm(f)) << format_frame(f);
    }
}

TEST(Property, NaFramesFromClosures) {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        Frame f = random_na_frame(rng, 1 + pick(rng, 5));
        auto r = classify(f);
        ASSERT_TRUE(r.na) << format_frame(f);
        for (Condition c : {Condition::left_rotation, Condition::right_rotation, Condition::center_reflection,
                            Condition::involution})
            ASSERT_TRUE(r.get(c)) << to_string(c) << "\n" << format_frame(f);
    }
}

TEST(Property, SymmetricNaIsCommutative) {
    Rng rng(13);
    int na = 0;
    for (int i = 0; i < 3000; ++i) {
        Frame f = pick(rng, 2) ? random_symmetric_reflection_frame(rng, 1 + pick(rng, 5)) : random_frame(rng, 1 + pick(rng, 3));
        auto r = classify(f);
        if (!(r.na && r.get(Condition::symm))) continue;
        ++na;
        ASSERT_TRUE(r.get(Condition::comm)) << format_frame(f);
    }
    EXPECT_GE(na, 1000);
}

TEST(Property, SymmetricNaIsCommutativeExhaustiveThree) {
    // Symmetric three-element frames with identity {0}: Rx0y iff x = y, the rest free.
    std::vector<Triple> fixed, free;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z) {
                if (y != 0) free.push_back({x, y, z});
                else if (x == z) fixed.push_back({x, y, z});
            }
    std::vector<int> star = {0, 1, 2};
    std::size_t na = 0;
    for (std::uint32_t m = 0; m < (1u << free.size()); ++m) {
        std::vector<Triple> tr = fixed;
        for (std::size_t k = 0; k < free.size(); ++k)
            if ((m >> k) & 1u) tr.push_back(free[k]);
        Frame f = make_frame(3, star, 1, tr, "s3");
        auto r = classify(f);
        if (!r.na) continue;
        ++na;
        ASSERT_TRUE(r.get(Condition::comm)) << format_frame(f);
    }
    EXPECT_GT(na, 0u);
}

TEST(Property, PermutationPreservesClassification) {
    Rng rng(14);
    for (int i = 0; i < 1000; ++i) {
        Frame f = pick(rng, 2) ? random_frame(rng, 1 + pick(rng, 4)) : random_na_frame(rng, 1 + pick(rng, 5));
        auto pi = random_permutation(rng, f.n);
        Frame g = permute_frame(f, pi);
        auto a = classify(f), b = classify(g);
        ASSERT_EQ(a.conditions, b.conditions) << format_frame(f);
        ASSERT_EQ(a.na, b.na);
        ASSERT_EQ(a.kr, b.kr);
        Mask X = Mask(rng()) & f.all(), Y = Mask(rng()) & f.all();
        ASSERT_EQ(permute_mask(f.compose(X, Y), pi), g.compose(permute_mask(X, pi), permute_mask(Y, pi)));
        ASSERT_EQ(permute_mask(f.converse(X), pi), g.converse(permute_mask(X, pi)));
    }
}

TEST(Property, AcceleratedCompositionAgrees) {
    Rng rng(15);
    for (int i = 0; i < 1000; ++i) {
        Frame f = random_frame(rng, 1 + pick(rng, 5));
        Frame g = f;
        g.accelerate();
        Mask X = Mask(rng()) & f.all(), Y = Mask(rng()) & f.all();
        ASSERT_EQ(f.compose(X, Y), g.compose(X, Y));
        ASSERT_EQ(f.converse(X), g.converse(X));
    }
}
