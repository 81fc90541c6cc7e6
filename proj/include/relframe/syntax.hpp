#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relframe {

enum class Op {
    Atom,
    Identity,
    Join,
    Complement,
    RelProd,
    Converse,
    Meet,
    Dagger,
    Zero,
    One,
    Diversity,
    Or,
    And,
    BoolNeg,
    DeMorganNeg,
    Implies,
    Fusion,
    Star,
    Truth
};

struct Node;
using Term = std::shared_ptr<const Node>;

struct Node {
    Op op;
    std::string name;
    Term l;
    Term r;
};

enum class VocabularyClass { core, classical_relevant, relevance_only };

struct SyntaxError : std::runtime_error {
    std::size_t pos;
    SyntaxError(const std::string& msg, std::size_t p)
        : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};

inline int arity(Op op) {
    switch (op) {
    case Op::Atom: case Op::Identity: case Op::Zero: case Op::One:
    case Op::Diversity: case Op::Truth:
        return 0;
    case Op::Complement: case Op::Converse: case Op::BoolNeg:
    case Op::DeMorganNeg: case Op::Star:
        return 1;
    default:
        return 2;
    }
}

inline Term mk(Op op, Term l = nullptr, Term r = nullptr) {
    return std::make_shared<const Node>(Node{op, {}, std::move(l), std::move(r)});
}

inline Term atom(std::string name) {
    return std::make_shared<const Node>(Node{Op::Atom, std::move(name), nullptr, nullptr});
}

inline Term identity() { return mk(Op::Identity); }
inline Term truth() { return mk(Op::Truth); }
inline Term zero() { return mk(Op::Zero); }
inline Term one() { return mk(Op::One); }
inline Term diversity() { return mk(Op::Diversity); }
inline Term join(Term a, Term b) { return mk(Op::Join, std::move(a), std::move(b)); }
inline Term meet(Term a, Term b) { return mk(Op::Meet, std::move(a), std::move(b)); }
inline Term relprod(Term a, Term b) { return mk(Op::RelProd, std::move(a), std::move(b)); }
inline Term dagger(Term a, Term b) { return mk(Op::Dagger, std::move(a), std::move(b)); }
inline Term complement(Term a) { return mk(Op::Complement, std::move(a)); }
inline Term converse(Term a) { return mk(Op::Converse, std::move(a)); }
inline Term lor(Term a, Term b) { return mk(Op::Or, std::move(a), std::move(b)); }
inline Term land(Term a, Term b) { return mk(Op::And, std::move(a), std::move(b)); }
inline Term boolneg(Term a) { return mk(Op::BoolNeg, std::move(a)); }
inline Term dmneg(Term a) { return mk(Op::DeMorganNeg, std::move(a)); }
inline Term implies(Term a, Term b) { return mk(Op::Implies, std::move(a), std::move(b)); }
inline Term fusion(Term a, Term b) { return mk(Op::Fusion, std::move(a), std::move(b)); }
inline Term star(Term a) { return mk(Op::Star, std::move(a)); }

inline bool equal(const Term& a, const Term& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->name != b->name) return false;
    return equal(a->l, b->l) && equal(a->r, b->r);
}

inline std::size_t term_size(const Term& p) {
    if (!p) return 0;
    return 1 + term_size(p->l) + term_size(p->r);
}

// Rewrites every derived constructor into Atom/Identity/Join/Complement/RelProd/Converse.
inline Term desugar(const Term& p) {
    switch (p->op) {
    case Op::Atom:
    case Op::Identity:
        return p;
    case Op::Truth:
        return identity();
    case Op::Diversity:
        return complement(identity());
    case Op::One:
        return join(identity(), complement(identity()));
    case Op::Zero:
        return complement(join(identity(), complement(identity())));
    case Op::Join:
    case Op::Or:
        return join(desugar(p->l), desugar(p->r));
    case Op::Complement:
    case Op::BoolNeg:
        return complement(desugar(p->l));
    case Op::RelProd:
        return relprod(desugar(p->l), desugar(p->r));
    case Op::Converse:
    case Op::Star:
        return converse(desugar(p->l));
    case Op::Meet:
    case Op::And:
        return complement(join(complement(desugar(p->l)), complement(desugar(p->r))));
    case Op::Dagger:
        return complement(relprod(complement(desugar(p->l)), complement(desugar(p->r))));
    case Op::DeMorganNeg:
        return complement(converse(desugar(p->l)));
    case Op::Implies:
        return complement(relprod(converse(desugar(p->l)), complement(desugar(p->r))));
    case Op::Fusion:
        return relprod(desugar(p->r), desugar(p->l));
    }
    return p;
}

inline VocabularyClass vocabulary_class(const Term& p) {
    bool classical = false;
    bool core = false;
    auto walk = [&](auto&& self, const Term& t) -> void {
        switch (t->op) {
        case Op::Atom: case Op::Or: case Op::And: case Op::DeMorganNeg:
        case Op::Implies: case Op::Fusion: case Op::Truth:
            break;
        case Op::BoolNeg: case Op::Star:
            classical = true;
            break;
        default:
            core = true;
        }
        if (t->l) self(self, t->l);
        if (t->r) self(self, t->r);
    };
    walk(walk, p);
    if (core) return VocabularyClass::core;
    return classical ? VocabularyClass::classical_relevant : VocabularyClass::relevance_only;
}

inline const char* to_string(VocabularyClass c) {
    switch (c) {
    case VocabularyClass::core: return "core";
    case VocabularyClass::classical_relevant: return "classical-relevant";
    case VocabularyClass::relevance_only: return "relevance-only";
    }
    return "?";
}

inline void collect_variables(const Term& p, std::vector<std::string>& out) {
    if (p->op == Op::Atom) {
        for (const auto& s : out)
            if (s == p->name) return;
        out.push_back(p->name);
        return;
    }
    if (p->l) collect_variables(p->l, out);
    if (p->r) collect_variables(p->r, out);
}

// Atom names in order of first occurrence.
inline std::vector<std::string> variables_in_order(const Term& p) {
    std::vector<std::string> out;
    collect_variables(p, out);
    return out;
}

inline std::set<std::string> variables_of(const Term& p) {
    auto v = variables_in_order(p);
    return {v.begin(), v.end()};
}

// ---------------------------------------------------------------------------
// Lexer shared by the predicate, formula and proof-script languages.

enum class Tok {
    End, Ident, Var, LParen, RParen, Identity, Diversity, Zero, One, Truth,
    Conv, Star, Minus, Tilde, Not, Semi, Fuse, Amp, Dot, Bang, Plus, Bar, Arrow,
    AndAnd, OrOr, Implies2, Iff, EqEq, Forall, Exists, Comma, Colon
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

inline bool is_var_name(std::string_view s) {
    if (s.size() < 2 || s[0] != 'v') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

// formula_mode turns v<digits> into variable tokens and enables formula keywords.
inline std::vector<Token> tokenize(std::string_view s, bool formula_mode = false) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(s.substr(i, len)), i});
        i += len;
    };
    auto starts = [&](std::string_view w) { return s.substr(i, w.size()) == w; };
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) { ++i; continue; }
        if (std::isalpha(c)) {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            std::string w(s.substr(i, j - i));
            Tok k = Tok::Ident;
            if (w == "t") k = Tok::Truth;
            else if (w == "o") k = Tok::Fuse;
            else if (w == "not") k = Tok::Not;
            else if (formula_mode && w == "forall") k = Tok::Forall;
            else if (formula_mode && w == "exists") k = Tok::Exists;
            else if (formula_mode && is_var_name(w)) k = Tok::Var;
            push(k, j - i);
            continue;
        }
        if (starts("<=>")) { push(Tok::Iff, 3); continue; }
        if (starts("->")) { push(Tok::Arrow, 2); continue; }
        if (starts("=>")) { push(Tok::Implies2, 2); continue; }
        if (starts("==")) { push(Tok::EqEq, 2); continue; }
        if (starts("&&")) { push(Tok::AndAnd, 2); continue; }
        if (starts("||")) { push(Tok::OrOr, 2); continue; }
        if (starts("1'")) { push(Tok::Identity, 2); continue; }
        if (starts("0'")) { push(Tok::Diversity, 2); continue; }
        if (starts("\xC2\xB7")) { push(Tok::Dot, 2); continue; }
        switch (c) {
        case '0': push(Tok::Zero, 1); continue;
        case '1': push(Tok::One, 1); continue;
        case '(': push(Tok::LParen, 1); continue;
        case ')': push(Tok::RParen, 1); continue;
        case '^': push(Tok::Conv, 1); continue;
        case '*': push(Tok::Star, 1); continue;
        case '-': push(Tok::Minus, 1); continue;
        case '~': push(Tok::Tilde, 1); continue;
        case ';': push(Tok::Semi, 1); continue;
        case '&': push(Tok::Amp, 1); continue;
        case '.': push(Tok::Dot, 1); continue;
        case '!': push(Tok::Bang, 1); continue;
        case '+': push(Tok::Plus, 1); continue;
        case '|': push(Tok::Bar, 1); continue;
        case ',': push(Tok::Comma, 1); continue;
        case ':': push(Tok::Colon, 1); continue;
        default:
            throw SyntaxError(std::string("unexpected character '") + s[i] + "'", i);
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

// Precedence-climbing parser over a token vector. Stops at the first token
// that cannot continue a predicate, so callers can embed predicates.
class PredicateParser {
public:
    PredicateParser(const std::vector<Token>& toks, std::size_t& pos) : toks_(toks), pos_(pos) {}

    Term parse(int min_level = 0) {
        Term lhs = parse_prefix();
        for (;;) {
            int lvl = binary_level(peek().kind);
            if (lvl < 0 || lvl < min_level) break;
            Tok k = next().kind;
            Term rhs = parse(lvl + 1);
            lhs = make_binary(k, lhs, rhs);
        }
        return lhs;
    }

    static int binary_level(Tok k) {
        switch (k) {
        case Tok::Arrow: return 0;
        case Tok::Plus: case Tok::Bar: return 1;
        case Tok::Bang: return 2;
        case Tok::Amp: case Tok::Dot: return 3;
        case Tok::Semi: case Tok::Fuse: return 4;
        default: return -1;
        }
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    static Term make_binary(Tok k, Term a, Term b) {
        switch (k) {
        case Tok::Arrow: return implies(a, b);
        case Tok::Plus: return join(a, b);
        case Tok::Bar: return lor(a, b);
        case Tok::Bang: return dagger(a, b);
        case Tok::Amp: return land(a, b);
        case Tok::Dot: return meet(a, b);
        case Tok::Semi: return relprod(a, b);
        case Tok::Fuse: return fusion(a, b);
        default: return nullptr;
        }
    }

    Term parse_prefix() {
        switch (peek().kind) {
        case Tok::Minus: next(); return complement(parse_prefix());
        case Tok::Tilde: next(); return dmneg(parse_prefix());
        case Tok::Not: next(); return boolneg(parse_prefix());
        default: return parse_postfix();
        }
    }

    Term parse_postfix() {
        Term t = parse_primary();
        for (;;) {
            if (peek().kind == Tok::Conv) { next(); t = converse(t); }
            else if (peek().kind == Tok::Star) { next(); t = star(t); }
            else break;
        }
        return t;
    }

    Term parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Ident: next(); return atom(t.text);
        case Tok::Identity: next(); return identity();
        case Tok::Diversity: next(); return diversity();
        case Tok::Zero: next(); return zero();
        case Tok::One: next(); return one();
        case Tok::Truth: next(); return truth();
        case Tok::LParen: {
            next();
            Term inner = parse(0);
            if (peek().kind != Tok::RParen) throw SyntaxError("expected ')'", peek().pos);
            next();
            return inner;
        }
        case Tok::End:
            throw SyntaxError("unexpected end of input", t.pos);
        default:
            throw SyntaxError("unexpected token '" + t.text + "'", t.pos);
        }
    }

    const std::vector<Token>& toks_;
    std::size_t& pos_;
};

inline Term parse_predicate(std::string_view text) {
    auto toks = tokenize(text);
    std::size_t pos = 0;
    PredicateParser p(toks, pos);
    Term t = p.parse();
    if (toks[pos].kind != Tok::End) throw SyntaxError("unexpected token '" + toks[pos].text + "'", toks[pos].pos);
    return t;
}

namespace detail {

inline int level_of(Op op) {
    switch (op) {
    case Op::Implies: return 0;
    case Op::Join: case Op::Or: return 1;
    case Op::Dagger: return 2;
    case Op::And: case Op::Meet: return 3;
    case Op::RelProd: case Op::Fusion: return 4;
    case Op::Complement: case Op::DeMorganNeg: case Op::BoolNeg: return 5;
    case Op::Converse: case Op::Star: return 6;
    default: return 7;
    }
}

inline const char* infix_text(Op op) {
    switch (op) {
    case Op::Implies: return " -> ";
    case Op::Join: return " + ";
    case Op::Or: return " | ";
    case Op::Dagger: return " ! ";
    case Op::And: return " & ";
    case Op::Meet: return " . ";
    case Op::RelProd: return ";";
    case Op::Fusion: return " o ";
    default: return "?";
    }
}

inline void print_into(const Term& p, int ctx, std::string& out) {
    int lvl = level_of(p->op);
    bool paren = lvl < ctx;
    if (paren) out += '(';
    switch (p->op) {
    case Op::Atom: out += p->name; break;
    case Op::Identity: out += "1'"; break;
    case Op::Diversity: out += "0'"; break;
    case Op::Zero: out += "0"; break;
    case Op::One: out += "1"; break;
    case Op::Truth: out += "t"; break;
    case Op::Complement: out += '-'; print_into(p->l, 5, out); break;
    case Op::DeMorganNeg: out += '~'; print_into(p->l, 5, out); break;
    case Op::BoolNeg: out += "not "; print_into(p->l, 5, out); break;
    case Op::Converse: print_into(p->l, 6, out); out += '^'; break;
    case Op::Star: print_into(p->l, 6, out); out += '*'; break;
    default:
        print_into(p->l, lvl, out);
        out += infix_text(p->op);
        print_into(p->r, lvl + 1, out);
    }
    if (paren) out += ')';
}

}  // namespace detail

inline std::string print_predicate(const Term& p) {
    std::string out;
    detail::print_into(p, 0, out);
    return out;
}

// Canonical key used to compare predicates modulo desugaring.
inline std::string core_key(const Term& p) { return print_predicate(desugar(p)); }

}  // namespace relframe
