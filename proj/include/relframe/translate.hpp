#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "relframe/frames.hpp"
#include "relframe/syntax.hpp"

namespace relframe {

// ---------------------------------------------------------------------------
// Formulas over indexed variables v0, v1, ...

enum class FKind { Atom, Equation, Implies, Not, ForAll };

struct FNode;
using Formula = std::shared_ptr<const FNode>;

struct FNode {
    FKind kind;
    int x = 0;  // left variable of an atom, bound variable of ForAll
    int y = 0;  // right variable of an atom
    Term p;     // atom predicate, or left side of an equation
    Term q;     // right side of an equation
    Formula a;
    Formula b;
};

inline constexpr int kMaxFormulaVar = 63;

inline Formula fatom(int x, Term p, int y) {
    if (x < 0 || y < 0 || x > kMaxFormulaVar || y > kMaxFormulaVar) throw std::invalid_argument("variable index out of range");
    return std::make_shared<const FNode>(FNode{FKind::Atom, x, y, std::move(p), nullptr, nullptr, nullptr});
}
inline Formula fequation(Term a, Term b) {
    return std::make_shared<const FNode>(FNode{FKind::Equation, 0, 0, std::move(a), std::move(b), nullptr, nullptr});
}
inline Formula fimplies(Formula a, Formula b) {
    return std::make_shared<const FNode>(FNode{FKind::Implies, 0, 0, nullptr, nullptr, std::move(a), std::move(b)});
}
inline Formula fnot(Formula a) {
    return std::make_shared<const FNode>(FNode{FKind::Not, 0, 0, nullptr, nullptr, std::move(a), nullptr});
}
inline Formula fforall(int v, Formula a) {
    if (v < 0 || v > kMaxFormulaVar) throw std::invalid_argument("variable index out of range");
    return std::make_shared<const FNode>(FNode{FKind::ForAll, v, 0, nullptr, nullptr, std::move(a), nullptr});
}
inline Formula f_or(Formula a, Formula b) { return fimplies(fnot(std::move(a)), std::move(b)); }
inline Formula f_and(Formula a, Formula b) { return fnot(fimplies(std::move(a), fnot(std::move(b)))); }
inline Formula f_iff(Formula a, Formula b) { return fnot(fimplies(fimplies(a, b), fnot(fimplies(b, a)))); }
inline Formula fexists(int v, Formula a) { return fnot(fforall(v, fnot(std::move(a)))); }

inline bool fequal(const Formula& a, const Formula& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case FKind::Atom: return a->x == b->x && a->y == b->y && equal(a->p, b->p);
    case FKind::Equation: return equal(a->p, b->p) && equal(a->q, b->q);
    case FKind::Implies: return fequal(a->a, b->a) && fequal(a->b, b->b);
    case FKind::Not: return fequal(a->a, b->a);
    case FKind::ForAll: return a->x == b->x && fequal(a->a, b->a);
    }
    return false;
}

inline std::uint64_t free_vars(const Formula& f) {
    switch (f->kind) {
    case FKind::Atom: return (std::uint64_t{1} << f->x) | (std::uint64_t{1} << f->y);
    case FKind::Equation: return 0;
    case FKind::Implies: return free_vars(f->a) | free_vars(f->b);
    case FKind::Not: return free_vars(f->a);
    case FKind::ForAll: return free_vars(f->a) & ~(std::uint64_t{1} << f->x);
    }
    return 0;
}

inline int max_var(const Formula& f) {
    switch (f->kind) {
    case FKind::Atom: return std::max(f->x, f->y);
    case FKind::Equation: return -1;
    case FKind::Implies: return std::max(max_var(f->a), max_var(f->b));
    case FKind::Not: return max_var(f->a);
    case FKind::ForAll: return std::max(f->x, max_var(f->a));
    }
    return -1;
}

inline bool is_sentence(const Formula& f) { return free_vars(f) == 0; }

inline Formula closure(Formula f) {
    for (std::uint64_t fv = free_vars(f); fv; fv = free_vars(f)) {
        int last = 63 - __builtin_clzll(fv);
        f = fforall(last, f);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Printing and parsing.

namespace detail {

inline std::string pred_operand(const Term& p) {
    std::string s = print_predicate(p);
    switch (p->op) {
    case Op::Atom: case Op::Identity: case Op::Truth: case Op::Zero: case Op::One: case Op::Diversity:
        return s;
    default:
        return "(" + s + ")";
    }
}

}  // namespace detail

inline std::string print_formula(const Formula& f) {
    switch (f->kind) {
    case FKind::Atom:
        return "v" + std::to_string(f->x) + " " + detail::pred_operand(f->p) + " v" + std::to_string(f->y);
    case FKind::Equation:
        return print_predicate(f->p) + " == " + print_predicate(f->q);
    case FKind::Implies:
        return "(" + print_formula(f->a) + " => " + print_formula(f->b) + ")";
    case FKind::Not:
        return "!" + (f->a->kind == FKind::Equation ? "(" + print_formula(f->a) + ")" : print_formula(f->a));
    case FKind::ForAll:
        return "forall v" + std::to_string(f->x) + " " +
               (f->a->kind == FKind::Implies ? print_formula(f->a) : "(" + print_formula(f->a) + ")");
    }
    return "";
}

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : toks_(tokenize(text, true)) {}

    Formula parse_all() {
        Formula f = iff();
        if (peek().kind != Tok::End) throw SyntaxError("unexpected token '" + peek().text + "'", peek().pos);
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) throw SyntaxError(std::string("expected ") + what, peek().pos);
        next();
    }
    int var() {
        if (peek().kind != Tok::Var) throw SyntaxError("expected a variable v<i>", peek().pos);
        int v = std::stoi(next().text.substr(1));
        if (v > kMaxFormulaVar) throw SyntaxError("variable index too large", toks_[pos_ - 1].pos);
        return v;
    }
    Term predicate() {
        PredicateParser pp(toks_, pos_);
        return pp.parse();
    }

    Formula iff() {
        Formula f = impl();
        while (peek().kind == Tok::Iff) {
            next();
            f = f_iff(f, impl());
        }
        return f;
    }
    Formula impl() {
        Formula f = disj();
        if (peek().kind == Tok::Implies2) {
            next();
            return fimplies(f, impl());
        }
        return f;
    }
    Formula disj() {
        Formula f = conj();
        while (peek().kind == Tok::OrOr) {
            next();
            f = f_or(f, conj());
        }
        return f;
    }
    Formula conj() {
        Formula f = unary();
        while (peek().kind == Tok::AndAnd) {
            next();
            f = f_and(f, unary());
        }
        return f;
    }
    Formula unary() {
        switch (peek().kind) {
        case Tok::Bang: next(); return fnot(unary());
        case Tok::Forall: { next(); int v = var(); return fforall(v, unary()); }
        case Tok::Exists: { next(); int v = var(); return fexists(v, unary()); }
        default: return primary();
        }
    }
    Formula primary() {
        if (peek().kind == Tok::Var) {
            int x = var();
            Term p = predicate();
            int y = var();
            return fatom(x, p, y);
        }
        if (peek().kind == Tok::LParen) {
            std::size_t save = pos_;
            try {
                Term a = predicate();
                if (peek().kind == Tok::EqEq) {
                    next();
                    return fequation(a, predicate());
                }
            } catch (const SyntaxError&) {
            }
            pos_ = save;
            next();
            Formula f = iff();
            expect(Tok::RParen, "')'");
            return f;
        }
        Term a = predicate();
        expect(Tok::EqEq, "'=='");
        return fequation(a, predicate());
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

inline Formula parse_formula(std::string_view text) { return FormulaParser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Translation mapping G.

namespace detail {

inline int first_var_distinct(int x, int y) {
    int z = 0;
    while (z == x || z == y) ++z;
    return z;
}

inline Formula g_atom(int x, const Term& p, int y) {
    switch (p->op) {
    case Op::Atom:
    case Op::Identity: return fatom(x, p, y);
    case Op::Join: return f_or(g_atom(x, p->l, y), g_atom(x, p->r, y));
    case Op::Complement: return fnot(g_atom(x, p->l, y));
    case Op::RelProd: {
        int z = first_var_distinct(x, y);
        return fexists(z, f_and(g_atom(x, p->l, z), g_atom(z, p->r, y)));
    }
    case Op::Converse: return g_atom(y, p->l, x);
    default: return g_atom(x, desugar(p), y);
    }
}

}  // namespace detail

inline Formula translate_G(const Formula& f) {
    switch (f->kind) {
    case FKind::Atom: return detail::g_atom(f->x, desugar(f->p), f->y);
    case FKind::Equation:
        return closure(f_iff(detail::g_atom(0, desugar(f->p), 1), detail::g_atom(0, desugar(f->q), 1)));
    case FKind::Implies: return fimplies(translate_G(f->a), translate_G(f->b));
    case FKind::Not: return fnot(translate_G(f->a));
    case FKind::ForAll: return fforall(f->x, translate_G(f->a));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Mapping J into clause form and the mapping H.

struct Clause {
    Term r;  // 0 R 2
    Term s;  // 2 S 1
    Term t;  // 0 T 1
};

using ClauseForm = std::vector<Clause>;

inline std::size_t clause_cap = 20000;

namespace detail {

inline Term sum_of(const std::vector<Term>& ts) {
    if (ts.empty()) return zero();
    Term acc = ts[0];
    for (std::size_t i = 1; i < ts.size(); ++i) acc = join(acc, ts[i]);
    return acc;
}

inline ClauseForm j_atom(int x, const Term& a, int y) {
    auto z = zero;
    auto t = [&](Term r, Term s, Term tt) { return ClauseForm{{std::move(r), std::move(s), std::move(tt)}}; };
    if (x == 0 && y == 1) return t(z(), z(), a);
    if (x == 1 && y == 0) return t(z(), z(), converse(a));
    if (x == 1 && y == 2) return t(z(), converse(a), z());
    if (x == 2 && y == 1) return t(z(), a, z());
    if (x == 0 && y == 2) return t(a, z(), z());
    if (x == 2 && y == 0) return t(converse(a), z(), z());
    if (x == 0 && y == 0) return t(z(), z(), relprod(meet(a, identity()), one()));
    if (x == 1 && y == 1) return t(z(), z(), relprod(one(), meet(a, identity())));
    if (x == 2 && y == 2) return t(relprod(one(), meet(a, identity())), z(), z());
    throw std::invalid_argument("J needs variable indices below 3");
}

// Enumerates f in 3^k as digit vectors.
template <class F>
void for_each_choice(std::size_t k, F&& fn) {
    std::vector<int> f(k, 0);
    for (;;) {
        fn(f);
        std::size_t i = 0;
        while (i < k && ++f[i] == 3) f[i++] = 0;
        if (i == k) return;
    }
}

inline void check_cap(double n) {
    if (n > double(clause_cap)) throw ResourceError("J clause count exceeds cap");
}

}  // namespace detail

inline ClauseForm translate_J(const Formula& f) {
    switch (f->kind) {
    case FKind::Atom: return detail::j_atom(f->x, f->p, f->y);
    case FKind::Equation: {
        Term e = dagger(dagger(zero(), join(meet(f->p, f->q), meet(complement(f->p), complement(f->q)))), zero());
        return {{zero(), zero(), e}};
    }
    case FKind::Not: {
        ClauseForm c = translate_J(f->a);
        detail::check_cap(std::pow(3.0, double(c.size())));
        ClauseForm out;
        detail::for_each_choice(c.size(), [&](const std::vector<int>& ch) {
            std::vector<Term> slot[3];
            for (std::size_t i = 0; i < c.size(); ++i) {
                const Term& src = ch[i] == 0 ? c[i].r : ch[i] == 1 ? c[i].s : c[i].t;
                slot[ch[i]].push_back(complement(src));
            }
            out.push_back({detail::sum_of(slot[0]), detail::sum_of(slot[1]), detail::sum_of(slot[2])});
        });
        return out;
    }
    case FKind::Implies: {
        ClauseForm c = translate_J(f->a);
        ClauseForm d = translate_J(f->b);
        detail::check_cap(std::pow(3.0, double(c.size())) * double(d.size()));
        ClauseForm out;
        detail::for_each_choice(c.size(), [&](const std::vector<int>& ch) {
            std::vector<Term> slot[3];
            for (std::size_t i = 0; i < c.size(); ++i) {
                const Term& src = ch[i] == 0 ? c[i].r : ch[i] == 1 ? c[i].s : c[i].t;
                slot[ch[i]].push_back(complement(src));
            }
            for (const auto& cl : d) {
                auto r = slot[0], s = slot[1], t = slot[2];
                r.push_back(cl.r);
                s.push_back(cl.s);
                t.push_back(cl.t);
                out.push_back({detail::sum_of(r), detail::sum_of(s), detail::sum_of(t)});
            }
        });
        return out;
    }
    case FKind::ForAll: {
        ClauseForm c = translate_J(f->a);
        ClauseForm out;
        for (const auto& cl : c) {
            switch (f->x) {
            case 0: out.push_back({zero(), join(dagger(converse(cl.r), cl.t), cl.s), zero()}); break;
            case 1: out.push_back({join(dagger(cl.t, converse(cl.s)), cl.r), zero(), zero()}); break;
            case 2: out.push_back({zero(), zero(), join(dagger(cl.r, cl.s), cl.t)}); break;
            default: throw std::invalid_argument("J needs variable indices below 3");
            }
        }
        return out;
    }
    }
    return {};
}

inline Formula clause_formula(const ClauseForm& cf) {
    if (cf.empty()) throw std::invalid_argument("empty clause form");
    Formula acc;
    for (const auto& c : cf) {
        Formula d = f_or(f_or(fatom(0, c.r, 2), fatom(2, c.s, 1)), fatom(0, c.t, 1));
        acc = acc ? f_and(acc, d) : d;
    }
    return acc;
}

inline std::string print_clauses(const ClauseForm& cf) {
    std::string s;
    for (const auto& c : cf) {
        if (!s.empty()) s += "\n";
        s += "(" + print_predicate(c.r) + ", " + print_predicate(c.s) + ", " + print_predicate(c.t) + ")";
    }
    return s;
}

inline Formula translate_H(const Formula& f) {
    if (!is_sentence(f)) throw std::invalid_argument("H is defined on sentences only");
    if (max_var(f) >= 3) throw std::invalid_argument("H needs variable indices below 3");
    ClauseForm c = translate_J(fforall(2, f));
    std::vector<Term> factors;
    for (const auto& cl : c) factors.push_back(join(dagger(cl.r, cl.s), cl.t));
    if (factors.empty()) return fequation(one(), one());
    while (factors.size() > 1) {
        std::vector<Term> next;
        for (std::size_t i = 0; i + 1 < factors.size(); i += 2) next.push_back(meet(factors[i], factors[i + 1]));
        if (factors.size() % 2) next.push_back(factors.back());
        factors = std::move(next);
    }
    return fequation(one(), factors[0]);
}

// ---------------------------------------------------------------------------
// Finite structures, denotation and satisfaction.

using Rel = std::uint64_t;

inline constexpr int kMaxStructure = 6;

struct Structure {
    int m = 1;
    std::map<std::string, Rel> interp;

    Rel all() const { return m * m >= 64 ? ~Rel{0} : (Rel{1} << (m * m)) - 1; }
    Rel pair(int a, int b) const { return Rel{1} << (a * m + b); }
    Rel diagonal() const {
        Rel r = 0;
        for (int a = 0; a < m; ++a) r |= pair(a, a);
        return r;
    }
    Rel converse(Rel x) const {
        Rel r = 0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                if (x & pair(a, b)) r |= pair(b, a);
        return r;
    }
    Rel compose(Rel x, Rel y) const {
        const Rel row = (Rel{1} << m) - 1;
        Rel r = 0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                if (x & pair(a, b)) r |= ((y >> (b * m)) & row) << (a * m);
        return r;
    }
};

inline Structure make_structure(int m) {
    if (m < 1 || m > kMaxStructure) throw ResourceError("structure size must be between 1 and 6");
    Structure s;
    s.m = m;
    return s;
}

struct UninterpretedAtom : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DenoteCache {
    std::unordered_map<const Node*, Rel> value;
    std::vector<Term> keep;
};

inline Rel denote_core(const Structure& S, const Term& p, DenoteCache& memo) {
    if (auto it = memo.value.find(p.get()); it != memo.value.end()) return it->second;
    Rel r = 0;
    switch (p->op) {
    case Op::Atom: {
        auto it = S.interp.find(p->name);
        if (it == S.interp.end()) throw UninterpretedAtom("uninterpreted atom '" + p->name + "'");
        r = it->second & S.all();
        break;
    }
    case Op::Identity: r = S.diagonal(); break;
    case Op::Join: r = denote_core(S, p->l, memo) | denote_core(S, p->r, memo); break;
    case Op::Complement: r = ~denote_core(S, p->l, memo) & S.all(); break;
    case Op::RelProd: r = S.compose(denote_core(S, p->l, memo), denote_core(S, p->r, memo)); break;
    case Op::Converse: r = S.converse(denote_core(S, p->l, memo)); break;
    default: {
        Term d = desugar(p);
        r = denote_core(S, d, memo);
        memo.keep.push_back(std::move(d));
        break;
    }
    }
    memo.keep.push_back(p);
    memo.value.emplace(p.get(), r);
    return r;
}

inline Rel denote(const Structure& S, const Term& p) {
    DenoteCache memo;
    return denote_core(S, p, memo);
}

struct UnassignedVariable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Assignment of variables to elements; -1 marks an unassigned variable.
using VarAssignment = std::vector<int>;

class Satisfier {
public:
    explicit Satisfier(const Structure& S) : S_(S) {}

    bool operator()(const Formula& f, VarAssignment& s) {
        switch (f->kind) {
        case FKind::Atom: {
            int a = get(s, f->x), b = get(s, f->y);
            return (rel(f->p) & S_.pair(a, b)) != 0;
        }
        case FKind::Equation: return rel(f->p) == rel(f->q);
        case FKind::Implies: return !(*this)(f->a, s) || (*this)(f->b, s);
        case FKind::Not: return !(*this)(f->a, s);
        case FKind::ForAll: {
            if (int(s.size()) <= f->x) s.resize(f->x + 1, -1);
            int saved = s[f->x];
            bool ok = true;
            for (int u = 0; u < S_.m && ok; ++u) {
                s[f->x] = u;
                ok = (*this)(f->a, s);
            }
            s[f->x] = saved;
            return ok;
        }
        }
        return false;
    }

    Rel rel(const Term& p) { return denote_core(S_, p, memo_); }

private:
    int get(const VarAssignment& s, int v) const {
        if (v >= int(s.size()) || s[v] < 0) throw UnassignedVariable("unassigned variable v" + std::to_string(v));
        return s[v];
    }

    const Structure& S_;
    DenoteCache memo_;
};

inline bool satisfies(const Structure& S, const Formula& f, VarAssignment s = {}) {
    Satisfier sat(S);
    return sat(f, s);
}

inline bool satisfies_clauses(const Structure& S, const ClauseForm& cf, int v0, int v1, int v2) {
    Satisfier sat(S);
    for (const auto& c : cf) {
        bool any = (sat.rel(c.r) & S.pair(v0, v2)) || (sat.rel(c.s) & S.pair(v2, v1)) || (sat.rel(c.t) & S.pair(v0, v1));
        if (!any) return false;
    }
    return true;
}

// Calls fn for every assignment of the variables in mask to elements of S.
inline void for_each_assignment(const Structure& S, std::uint64_t mask, int width,
                                const std::function<void(VarAssignment&)>& fn) {
    VarAssignment s(std::max(width, 1), -1);
    std::vector<int> vs;
    for (int v = 0; v < width; ++v)
        if (mask >> v & 1) vs.push_back(v);
    for (int v : vs) s[v] = 0;
    for (;;) {
        fn(s);
        std::size_t i = 0;
        while (i < vs.size() && ++s[vs[i]] == S.m) s[vs[i++]] = 0;
        if (i == vs.size()) return;
    }
}

inline std::string format_relation(const Structure& S, Rel r) {
    std::string out;
    for (int a = 0; a < S.m; ++a)
        for (int b = 0; b < S.m; ++b)
            if (r & S.pair(a, b)) {
                if (!out.empty()) out += ' ';
                out += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
            }
    return out;
}

inline Structure parse_structure(std::istream& in) {
    Structure S;
    bool have_base = false;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto h = raw.find('#');
        std::string line = h == std::string::npos ? raw : raw.substr(0, h);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        auto fail = [&](const std::string& msg) {
            throw std::invalid_argument("structure line " + std::to_string(lineno) + ": " + msg);
        };
        if (kw == "base") {
            int m = 0;
            if (!(ls >> m) || m < 1 || m > kMaxStructure) fail("base must be between 1 and 6");
            S.m = m;
            have_base = true;
        } else if (kw == "rel") {
            if (!have_base) fail("rel before base");
            std::string rest;
            std::getline(ls, rest);
            auto colon = rest.find(':');
            if (colon == std::string::npos) fail("expected 'rel <Atom>: (i,j) ...'");
            std::string name = rest.substr(0, colon);
            name.erase(0, name.find_first_not_of(" \t"));
            name.erase(name.find_last_not_of(" \t") + 1);
            if (name.empty()) fail("missing relation name");
            Rel r = 0;
            std::string pairs = rest.substr(colon + 1);
            std::size_t i = 0;
            while ((i = pairs.find('(', i)) != std::string::npos) {
                auto j = pairs.find(')', i);
                if (j == std::string::npos) fail("unterminated pair");
                int a = -1, b = -1;
                char comma = 0;
                std::istringstream ps(pairs.substr(i + 1, j - i - 1));
                if (!(ps >> a >> comma >> b) || comma != ',' || a < 0 || b < 0 || a >= S.m || b >= S.m)
                    fail("bad pair");
                r |= S.pair(a, b);
                i = j + 1;
            }
            S.interp[name] = r;
        } else {
            fail("unknown directive '" + kw + "'");
        }
    }
    if (!have_base) throw std::invalid_argument("structure has no base line");
    return S;
}

inline Structure load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_structure(in);
}

inline std::string format_structure(const Structure& S) {
    std::string out = "base " + std::to_string(S.m) + "\n";
    for (const auto& [k, v] : S.interp) out += "rel " + k + ": " + format_relation(S, v) + "\n";
    return out;
}

}  // namespace relframe
