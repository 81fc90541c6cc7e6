#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relframe/syntax.hpp"

namespace relframe {

struct NamedPredicate {
    std::string name;
    std::string text;
    int provable_vars = 0;           // 0 when no proof is recorded
    std::vector<std::string> assume; // assumption kinds used by the recorded proof
};

inline const std::vector<NamedPredicate>& predicate_catalog() {
    static const std::vector<NamedPredicate> cat = {
        {"ttt", "t", 1, {}},
        {"lem", "A | not A", 1, {}},
        {"lem1", "A | ~A", 1, {}},
        {"self", "A -> A", 2, {}},
        {"E-ax", "((A -> A) -> B) -> B", 2, {}},
        {"or1", "A | A -> A", 0, {}},
        {"or2", "A -> A | B", 0, {}},
        {"or3", "B -> A | B", 0, {}},
        {"or-comm", "A | B -> B | A", 0, {}},
        {"and1", "A -> A & A", 0, {}},
        {"and2", "A & B -> A", 0, {}},
        {"and3", "A & B -> B", 0, {}},
        {"and-comm", "A & B -> B & A", 0, {}},
        {"or-assoc", "(A | B) | C -> A | (B | C)", 0, {}},
        {"and-assoc", "(A & B) & C -> A & (B & C)", 0, {}},
        {"dist-or-and", "(A | B) & C -> (A & C) | (B & C)", 0, {}},
        {"dist-and-or", "(A & B) | C -> (A | C) & (B | C)", 0, {}},
        {"doubleDM1", "~~A -> A", 0, {}},
        {"doubleDM2", "A -> ~~A", 0, {}},
        {"DeM1", "~(A | B) -> ~A & ~B", 0, {}},
        {"DeM2", "~(A & B) -> ~A | ~B", 0, {}},
        {"DeM3", "~A & ~B -> ~(A | B)", 0, {}},
        {"DeM4", "~A | ~B -> ~(A & B)", 0, {}},
        {"doubleBA1", "not not A -> A", 0, {}},
        {"doubleBA2", "A -> not not A", 0, {}},
        {"DeM5", "not (A | B) -> not A & not B", 0, {}},
        {"DeM6", "not (A & B) -> not A | not B", 0, {}},
        {"DeM7", "not A & not B -> not (A | B)", 0, {}},
        {"DeM8", "not A | not B -> not (A & B)", 0, {}},
        {"top", "A -> B | not B", 2, {}},
        {"explosion", "not A & A -> B", 2, {}},
        {"to1", "(A -> B) & (A -> C) -> (A -> B & C)", 0, {}},
        {"to2", "(A -> C) & (B -> C) -> (A | B -> C)", 0, {}},
        {"to3", "(A -> B) & (C -> D) -> (A & C -> B & D)", 0, {}},
        {"to4", "(A -> B) & (C -> D) -> (A | C -> B | D)", 3, {}},
        {"to5", "(A -> B) | (C -> D) -> (A & C -> B | D)", 0, {}},
        {"fus1", "A o B -> ~(A -> ~B)", 0, {}},
        {"fus2", "~(A -> ~B) -> A o B", 0, {}},
        {"fus3", "(A -> B) o A -> B", 0, {}},
        {"fus4", "A -> (B -> A o B)", 3, {}},
        {"mp-what", "A -> ((B -> ~A) -> ~B)", 3, {}},
        {"reflection1", "A o B & C -> A o (B & ~D) | (A & C o D) o B", 3, {}},
        {"reflection1a", "A o B & C -> (A & ~D) o B | A o (B & D o C)", 0, {}},
        {"dedekind", "A o B & C -> (A & C o B*) o (B & A* o C)", 0, {}},
        {"right-id", "t o A -> A", 3, {}},
        {"left-id", "A o t -> A", 3, {}},
        {"A->Aot*", "A -> A o t*", 3, {}},
        {"t->t*", "t -> t*", 3, {}},
        {"t*->t", "t* -> t", 3, {}},
        {"min-th", "t & ~t -> A", 3, {}},
        {"no.1", "(A -> B) -> ((C -> A) -> (C -> B))", 4, {}},
        {"no.2", "(A -> (B -> C)) -> (A o B -> C)", 4, {}},
        {"no.3", "(A o B -> C) -> (A -> (B -> C))", 4, {}},
        {"no.4", "(A -> B) -> (A o C -> B o C)", 4, {}},
        {"no.5", "(A o B) o C -> A o (B o C)", 4, {}},
        {"no.6", "A o (B o C) -> (A o B) o C", 4, {}},
        {"reductio", "(A -> ~A) -> ~A", 3, {"density"}},
        {"contract5", "A & B -> A o B", 3, {"density"}},
        {"contract4", "(A -> B) -> ~A | B", 3, {"density"}},
        {"contract2", "(A -> (A -> B)) -> (A -> B)", 4, {"density"}},
        {"contract3", "(A -> (B -> C)) -> (A & B -> C)", 4, {"density"}},
        {"mp", "A -> ((A -> B) -> B)", 3, {"commutativity"}},
        {"contra", "(A -> ~B) -> (B -> ~A)", 3, {"commutativity"}},
        {"perm", "(A -> (B -> C)) -> (B -> (A -> C))", 4, {"commutativity"}},
        {"suff", "(A -> B) -> ((B -> C) -> (A -> C))", 4, {"commutativity"}},
        {"self-dist", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))", 4, {"density", "commutativity"}},
        {"symm-ax", "A & ~A -> B", 2, {"symmetry"}},
        {"comm-ax", "A o B -> B o A", 3, {"symmetry"}},
        {"L''",
         "A;B & C;D & E;F -> ((A & ~A);B & C;D & E;F) | (A;B & C;(D & ~D) & E;F)"
         " | (A;B & C;D & (E & ~E);F) | (A;B & C;D & E;(F & ~F))"
         " | A;(A;C & B;D & (A;E & B;F);(E;C & F;D));D",
         0,
         {}},
        {"M''",
         "A & (B & C;D);(E & F;G) -> (A & (B & (C & ~C);D);(E & F;G))"
         " | (A & (B & C;D);(E & F;(G & ~G)))"
         " | C;((C;A & D;E);G & D;F & C;(A;G & B;F));G",
         0,
         {}},
    };
    return cat;
}

inline std::optional<NamedPredicate> find_predicate(std::string_view name) {
    std::string key(name);
    if (key.size() > 2 && key.front() == '(' && key.back() == ')') key = key.substr(1, key.size() - 2);
    for (const auto& p : predicate_catalog())
        if (p.name == key) return p;
    return std::nullopt;
}

// Looks the text up in the catalog first, then parses it as a predicate.
inline Term resolve_predicate(std::string_view text) {
    if (auto p = find_predicate(text)) return parse_predicate(p->text);
    return parse_predicate(text);
}

inline Term named(std::string_view name) {
    auto p = find_predicate(name);
    if (!p) throw std::invalid_argument("unknown predicate name '" + std::string(name) + "'");
    return parse_predicate(p->text);
}

}  // namespace relframe
