#include <gtest/gtest.h>

#include "gen.hpp"

using namespace relframe;
using namespace relframe::testgen;

namespace {

bool axioms_hold(const Frame& f, std::initializer_list<Axiom> as) {
    for (Axiom a : as)
        if (!check_axiom(f, a)) return false;
    return true;
}

const std::initializer_list<Axiom> kNaAxioms = {Axiom::R1, Axiom::R2, Axiom::R3, Axiom::R5, Axiom::R6,
                                                Axiom::R7, Axiom::R8, Axiom::R9, Axiom::R10};

Frame random_any_na(Rng& rng, int n) {
    switch (pick(rng, 3)) {
    case 0: return random_na_frame(rng, n);
    case 1: return random_noncomm_na_frame(rng, n);
    default: return random_frame(rng, n);
    }
}

}  // namespace

TEST(Axioms, Names) {
    for (Axiom a : all_axioms()) EXPECT_EQ(axiom_from_string(to_string(a)), a);
    EXPECT_EQ(axiom_from_string("R4p"), Axiom::R4p);
    EXPECT_THROW(axiom_from_string("R11"), std::invalid_argument);
    EXPECT_THROW(axiom_equation(Axiom::integral), std::invalid_argument);
}

TEST(Axioms, BuiltinExamples) {
    EXPECT_FALSE(check_axiom(builtin_frame("k4"), Axiom::R9));
    EXPECT_FALSE(check_axiom(builtin_frame("k1"), Axiom::R4));
    EXPECT_TRUE(check_axiom(builtin_frame("k1"), Axiom::R4p));
    EXPECT_FALSE(check_axiom(builtin_frame("k2"), Axiom::commutative));
    for (Axiom a : all_axioms()) EXPECT_TRUE(check_axiom(builtin_frame("k5"), a)) << to_string(a);
}

TEST(Axioms, Properties) {
    auto k1 = properties(builtin_frame("k1"));
    EXPECT_TRUE(k1.dense && k1.commutative && k1.symmetric && k1.integral);
    auto k2 = properties(builtin_frame("k2"));
    EXPECT_TRUE(k2.dense);
    EXPECT_FALSE(k2.commutative);
    EXPECT_FALSE(properties(builtin_frame("k3")).dense);
}

TEST(Axioms, BudgetExceeded) {
    EXPECT_THROW(check_axiom(make_pair_frame(3), Axiom::R4, 20), ResourceError);
}

TEST(Basis, Examples) {
    EXPECT_TRUE(relational_basis_exists(builtin_frame("k1"), 3).exists);
    EXPECT_FALSE(relational_basis_exists(builtin_frame("k1"), 4).exists);
    EXPECT_FALSE(relational_basis_exists(builtin_frame("k5"), 5).exists);
    EXPECT_TRUE(relational_basis_exists(builtin_frame("k5"), 4).exists);
}

TEST(Basis, Preconditions) {
    EXPECT_THROW(relational_basis_exists(builtin_frame("k4"), 3), PreconditionError);
    EXPECT_THROW(relational_basis_exists(builtin_frame("k1"), 2), std::invalid_argument);
    EXPECT_THROW(relational_basis_exists(builtin_frame("k1"), 7), std::invalid_argument);
    EXPECT_NO_THROW(relational_basis_exists(builtin_frame("k4"), 3, false));
}

TEST(Basis, ReportsRounds) {
    auto r = relational_basis_exists(builtin_frame("k1"), 4);
    EXPECT_GT(r.initial, 0u);
    EXPECT_FALSE(r.rounds.empty());
    EXPECT_TRUE(r.basis.empty() || !r.uncovered.empty());
}

TEST(Diamond, Examples) {
    EXPECT_TRUE(diamond(builtin_frame("k5"), 1));
    EXPECT_FALSE(diamond(make_cyclic_group_frame(1), 1));
    EXPECT_FALSE(diamond(builtin_frame("k3"), 1));
    EXPECT_FALSE(diamond(make_cyclic_group_frame(3), 1));
    EXPECT_THROW(diamond(builtin_frame("k1"), 0), std::invalid_argument);
}

TEST(Property, ClassifyMatchesAxioms) {
    Rng rng(21);
    int na = 0, sa = 0, ra = 0;
    for (int i = 0; i < 1100; ++i) {
        int n = i < 1000 ? 1 + pick(rng, 4) : 5;
        Frame f = random_any_na(rng, n);
        f.accelerate();
        auto r = classify(f);
        bool base = axioms_hold(f, kNaAxioms);
        ASSERT_EQ(r.na, base) << format_frame(f);
        ASSERT_EQ(r.sa, base && check_axiom(f, Axiom::R4p)) << format_frame(f);
        ASSERT_EQ(r.ra, base && check_axiom(f, Axiom::R4)) << format_frame(f);
        na += r.na;
        sa += r.sa;
        ra += r.ra;
    }
    EXPECT_GT(na, 300);
    EXPECT_GT(sa, 100);
    EXPECT_GT(ra, 50);
}

TEST(Property, ConditionsMatchAxioms) {
    Rng rng(22);
    for (int i = 0; i < 1000; ++i) {
        Frame f = random_any_na(rng, 1 + pick(rng, 4));
        auto r = classify(f);
        auto p = properties(f);
        ASSERT_EQ(r.get(Condition::dense), p.dense) << format_frame(f);
        ASSERT_EQ(r.get(Condition::comm), p.commutative) << format_frame(f);
        ASSERT_EQ(r.get(Condition::symm), p.symmetric) << format_frame(f);
    }
}

TEST(Property, BasisThreeOnSaFrames) {
    Rng rng(23);
    int seen = 0;
    for (int i = 0; seen < 1000; ++i) {
        Frame f = pick(rng, 2) ? random_na_frame(rng, 1 + pick(rng, 4)) : random_noncomm_na_frame(rng, 1 + pick(rng, 4));
        if (!classify(f).sa) continue;
        ++seen;
        ASSERT_TRUE(relational_basis_exists(f, 3).exists) << format_frame(f);
    }
}

TEST(Property, BasisFourIffPasch) {
    Rng rng(24);
    int seen = 0, pasch = 0;
    for (int i = 0; seen < 1000; ++i) {
        Frame f = pick(rng, 2) ? random_na_frame(rng, 1 + pick(rng, 4)) : random_noncomm_na_frame(rng, 1 + pick(rng, 4));
        auto r = classify(f);
        if (!r.sa) continue;
        ++seen;
        pasch += r.ra;
        ASSERT_EQ(relational_basis_exists(f, 4).exists, r.get(Condition::pasch)) << format_frame(f);
    }
    EXPECT_GT(pasch, 50);
    EXPECT_LT(pasch, 950);
}

TEST(Property, DiamondImpliesBasis) {
    Rng rng(25);
    int seen = 0, implied = 0;
    for (int i = 0; seen < 1000; ++i) {
        Frame f = pick(rng, 2) ? random_na_frame(rng, 1 + pick(rng, 4)) : random_noncomm_na_frame(rng, 1 + pick(rng, 4));
        if (!classify(f).sa) continue;
        ++seen;
        int d = 3 + pick(rng, 2);
        if (!diamond(f, d - 2)) continue;
        ++implied;
        ASSERT_TRUE(relational_basis_exists(f, d).exists) << d << "\n" << format_frame(f);
    }
    EXPECT_GT(implied, 50);
}

TEST(Property, DiamondImpliesBasisFive) {
    for (const auto& f : {builtin_frame("k1"), builtin_frame("k3"), make_cyclic_group_frame(3), make_pair_frame(2)}) {
        if (!classify(f).sa || !diamond(f, 3)) continue;
        EXPECT_TRUE(relational_basis_exists(f, 5).exists) << f.name;
    }
}
