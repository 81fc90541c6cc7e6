#include <gtest/gtest.h>

#include "gen.hpp"

using namespace relframe;
using namespace relframe::testgen;

namespace {

bool core_only(const Term& p) {
    switch (p->op) {
    case Op::Atom: case Op::Identity: return true;
    case Op::Join: case Op::RelProd: return core_only(p->l) && core_only(p->r);
    case Op::Complement: case Op::Converse: return core_only(p->l);
    default: return false;
    }
}

}  // namespace

TEST(Parse, Join) { EXPECT_TRUE(equal(parse_predicate("A + B"), join(atom("A"), atom("B")))); }

TEST(Parse, Implies) { EXPECT_TRUE(equal(parse_predicate("A -> B"), implies(atom("A"), atom("B")))); }

TEST(Parse, FusionBindsTighterThanAnd) {
    EXPECT_TRUE(equal(parse_predicate("(A o B) & C"), land(fusion(atom("A"), atom("B")), atom("C"))));
    EXPECT_TRUE(equal(parse_predicate("A o B & C"), land(fusion(atom("A"), atom("B")), atom("C"))));
}

TEST(Parse, Precedence) {
    EXPECT_TRUE(equal(parse_predicate("A + B ; C"), join(atom("A"), relprod(atom("B"), atom("C")))));
    EXPECT_TRUE(equal(parse_predicate("A ! B + C"), join(dagger(atom("A"), atom("B")), atom("C"))));
    EXPECT_TRUE(equal(parse_predicate("A & B ! C"), dagger(land(atom("A"), atom("B")), atom("C"))));
    EXPECT_TRUE(equal(parse_predicate("A | B -> C"), implies(lor(atom("A"), atom("B")), atom("C"))));
    EXPECT_TRUE(equal(parse_predicate("-A^"), complement(converse(atom("A")))));
    EXPECT_TRUE(equal(parse_predicate("~A*"), dmneg(star(atom("A")))));
    EXPECT_TRUE(equal(parse_predicate("not A . B"), meet(boolneg(atom("A")), atom("B"))));
}

TEST(Parse, Constants) {
    EXPECT_EQ(parse_predicate("1'")->op, Op::Identity);
    EXPECT_EQ(parse_predicate("0'")->op, Op::Diversity);
    EXPECT_EQ(parse_predicate("0")->op, Op::Zero);
    EXPECT_EQ(parse_predicate("1")->op, Op::One);
    EXPECT_EQ(parse_predicate("t")->op, Op::Truth);
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse_predicate(""), SyntaxError);
    EXPECT_THROW(parse_predicate("A +"), SyntaxError);
    EXPECT_THROW(parse_predicate("(A"), SyntaxError);
    EXPECT_THROW(parse_predicate("A B"), SyntaxError);
    EXPECT_THROW(parse_predicate("A $ B"), SyntaxError);
}

TEST(Parse, ErrorCarriesPosition) {
    try {
        parse_predicate("A + $");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.pos, 4u);
    }
}

TEST(Desugar, Implies) {
    EXPECT_TRUE(equal(desugar(implies(atom("A"), atom("B"))),
                      complement(relprod(converse(atom("A")), complement(atom("B"))))));
}

TEST(Desugar, FusionReverses) { EXPECT_TRUE(equal(desugar(fusion(atom("A"), atom("B"))), relprod(atom("B"), atom("A")))); }

TEST(Desugar, TruthIsIdentity) { EXPECT_TRUE(equal(desugar(truth()), identity())); }

TEST(Print, Basic) {
    EXPECT_EQ(print_predicate(join(atom("A"), atom("B"))), "A + B");
    EXPECT_EQ(print_predicate(identity()), "1'");
    EXPECT_EQ(print_predicate(converse(atom("A"))), "A^");
}

TEST(Vocabulary, Classes) {
    EXPECT_EQ(vocabulary_class(implies(atom("A"), fusion(atom("B"), atom("C")))), VocabularyClass::relevance_only);
    EXPECT_EQ(vocabulary_class(boolneg(atom("A"))), VocabularyClass::classical_relevant);
    EXPECT_EQ(vocabulary_class(relprod(atom("A"), atom("B"))), VocabularyClass::core);
}

TEST(Variables, CatalogPredicates) {
    EXPECT_EQ(variables_of(named("L''")), (std::set<std::string>{"A", "B", "C", "D", "E", "F"}));
    EXPECT_EQ(variables_of(named("M''")), (std::set<std::string>{"A", "B", "C", "D", "E", "F", "G"}));
    EXPECT_TRUE(variables_of(truth()).empty());
    EXPECT_EQ(variables_in_order(parse_predicate("C + A;C + B")), (std::vector<std::string>{"C", "A", "B"}));
}

TEST(Catalog, EveryEntryParses) {
    for (const auto& p : predicate_catalog()) EXPECT_NO_THROW(parse_predicate(p.text)) << p.name;
    EXPECT_TRUE(find_predicate("(perm)").has_value());
    EXPECT_FALSE(find_predicate("nonexistent").has_value());
    EXPECT_THROW(named("nonexistent"), std::invalid_argument);
}

TEST(Property, RoundTrip) {
    Rng rng(1);
    const std::vector<std::string> atoms = {"A", "B", "C", "x_1"};
    for (int i = 0; i < 2000; ++i) {
        Term p = random_predicate(rng, 5, atoms);
        std::string s = print_predicate(p);
        ASSERT_TRUE(equal(parse_predicate(s), p)) << s;
    }
}

TEST(Property, DesugarIdempotentAndCore) {
    Rng rng(2);
    const std::vector<std::string> atoms = {"A", "B", "C"};
    for (int i = 0; i < 2000; ++i) {
        Term p = random_predicate(rng, 5, atoms);
        Term d = desugar(p);
        ASSERT_TRUE(core_only(d)) << print_predicate(p);
        ASSERT_TRUE(equal(desugar(d), d)) << print_predicate(p);
        ASSERT_EQ(variables_of(d), variables_of(p));
    }
}

TEST(Property, DesugarSemanticSoundness) {
    Rng rng(3);
    const std::vector<std::string> atoms = {"A", "B", "C"};
    std::vector<Frame> frames;
    for (const auto& n : builtin_frame_names()) frames.push_back(builtin_frame(n));
    frames.push_back(make_pair_frame(2));
    frames.push_back(make_cyclic_group_frame(3));
    for (int i = 0; i < 2000; ++i) {
        const Frame& f = frames[pick(rng, int(frames.size()))];
        Term p = random_predicate(rng, 5, atoms);
        Assignment h = random_assignment(rng, f, atoms);
        ASSERT_EQ(eval(f, h, p), eval(f, h, desugar(p))) << f.name << " " << print_predicate(p);
    }
}
