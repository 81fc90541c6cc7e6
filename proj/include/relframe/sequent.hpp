#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relframe/syntax.hpp"

namespace relframe {

enum class AssumptionKind { density, commutativity, symmetry };

inline const char* to_string(AssumptionKind k) {
    switch (k) {
    case AssumptionKind::density: return "density";
    case AssumptionKind::commutativity: return "commutativity";
    case AssumptionKind::symmetry: return "symmetry";
    }
    return "?";
}

inline std::optional<AssumptionKind> assumption_from_string(std::string_view s) {
    if (s == "density") return AssumptionKind::density;
    if (s == "commutativity") return AssumptionKind::commutativity;
    if (s == "symmetry") return AssumptionKind::symmetry;
    return std::nullopt;
}

// Sequent normal form: derived operators are expanded but Meet stays primitive.
inline Term seq_normal(const Term& p) {
    switch (p->op) {
    case Op::Meet:
    case Op::And:
        return meet(seq_normal(p->l), seq_normal(p->r));
    case Op::Atom:
    case Op::Identity:
        return p;
    case Op::Join:
    case Op::Or:
        return join(seq_normal(p->l), seq_normal(p->r));
    case Op::Complement:
    case Op::BoolNeg:
        return complement(seq_normal(p->l));
    case Op::RelProd:
        return relprod(seq_normal(p->l), seq_normal(p->r));
    case Op::Converse:
    case Op::Star:
        return converse(seq_normal(p->l));
    case Op::DeMorganNeg:
        return complement(converse(seq_normal(p->l)));
    case Op::Implies:
        return complement(relprod(converse(seq_normal(p->l)), complement(seq_normal(p->r))));
    case Op::Fusion:
        return relprod(seq_normal(p->r), seq_normal(p->l));
    default:
        return desugar(p);
    }
}

struct SequentLit {
    int left_var = 0;
    Term pred;
    int right_var = 0;
    Term norm;
    std::string key;
};

inline SequentLit make_lit(int i, Term pred, int j) {
    SequentLit l;
    l.left_var = i;
    l.right_var = j;
    l.norm = seq_normal(pred);
    l.key = print_predicate(l.norm);
    l.pred = std::move(pred);
    return l;
}

inline bool lit_less(const SequentLit& a, const SequentLit& b) {
    if (a.left_var != b.left_var) return a.left_var < b.left_var;
    if (a.right_var != b.right_var) return a.right_var < b.right_var;
    return a.key < b.key;
}

inline bool lit_same(const SequentLit& a, const SequentLit& b) {
    return a.left_var == b.left_var && a.right_var == b.right_var && a.key == b.key;
}

inline std::string format_lit(const SequentLit& l) {
    return std::to_string(l.left_var) + ":" + print_predicate(l.pred) + ":" + std::to_string(l.right_var);
}

struct Sequent {
    std::vector<SequentLit> left;
    std::vector<SequentLit> right;

    void normalize() {
        for (auto* side : {&left, &right}) {
            std::stable_sort(side->begin(), side->end(), lit_less);
            side->erase(std::unique(side->begin(), side->end(), lit_same), side->end());
        }
    }
    static bool side_contains(const std::vector<SequentLit>& v, const SequentLit& l) {
        auto it = std::lower_bound(v.begin(), v.end(), l, lit_less);
        return it != v.end() && lit_same(*it, l);
    }
    bool has_left(const SequentLit& l) const { return side_contains(left, l); }
    bool has_right(const SequentLit& l) const { return side_contains(right, l); }
    void add_left(SequentLit l) {
        auto it = std::lower_bound(left.begin(), left.end(), l, lit_less);
        if (it == left.end() || !lit_same(*it, l)) left.insert(it, std::move(l));
    }
    void add_right(SequentLit l) {
        auto it = std::lower_bound(right.begin(), right.end(), l, lit_less);
        if (it == right.end() || !lit_same(*it, l)) right.insert(it, std::move(l));
    }
    void erase_left(const SequentLit& l) {
        auto it = std::lower_bound(left.begin(), left.end(), l, lit_less);
        if (it != left.end() && lit_same(*it, l)) left.erase(it);
    }
    void erase_right(const SequentLit& l) {
        auto it = std::lower_bound(right.begin(), right.end(), l, lit_less);
        if (it != right.end() && lit_same(*it, l)) right.erase(it);
    }
    std::uint32_t vars() const {
        std::uint32_t m = 0;
        for (const auto* side : {&left, &right})
            for (const auto& l : *side) m |= (1u << l.left_var) | (1u << l.right_var);
        return m;
    }
    int max_var() const {
        int m = -1;
        for (const auto* side : {&left, &right})
            for (const auto& l : *side) m = std::max({m, l.left_var, l.right_var});
        return m;
    }
    std::string key() const {
        std::string k;
        for (const auto& l : left) k += std::to_string(l.left_var) + ":" + l.key + ":" + std::to_string(l.right_var) + ",";
        k += "|";
        for (const auto& l : right) k += std::to_string(l.left_var) + ":" + l.key + ":" + std::to_string(l.right_var) + ",";
        return k;
    }
};

inline bool same_sequent(const Sequent& a, const Sequent& b) {
    auto eq = [](const std::vector<SequentLit>& x, const std::vector<SequentLit>& y) {
        return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), lit_same);
    };
    return eq(a.left, b.left) && eq(a.right, b.right);
}

inline bool subsequent(const Sequent& a, const Sequent& b) {
    for (const auto& l : a.left)
        if (!b.has_left(l)) return false;
    for (const auto& l : a.right)
        if (!b.has_right(l)) return false;
    return true;
}

inline std::string format_sequent(const Sequent& s) {
    std::string out;
    for (std::size_t i = 0; i < s.left.size(); ++i) out += (i ? ", " : "") + format_lit(s.left[i]);
    out += out.empty() ? "|-" : " |-";
    for (std::size_t i = 0; i < s.right.size(); ++i) out += (i ? ", " : " ") + format_lit(s.right[i]);
    return out;
}

struct ScriptSyntaxError : std::runtime_error {
    int line;
    ScriptSyntaxError(const std::string& msg, int l)
        : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

inline int parse_index(const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw std::invalid_argument("bad variable index '" + s + "'");
    return std::stoi(s);
}

inline SequentLit parse_lit(const std::string& text) {
    auto a = text.find(':');
    auto b = text.rfind(':');
    if (a == std::string::npos || a == b) throw std::invalid_argument("literal '" + text + "' is not of the form i:pred:j");
    int i = parse_index(trim(text.substr(0, a)));
    int j = parse_index(trim(text.substr(b + 1)));
    return make_lit(i, parse_predicate(trim(text.substr(a + 1, b - a - 1))), j);
}

inline std::vector<SequentLit> parse_side(std::string_view s) {
    std::vector<SequentLit> out;
    if (trim(s).empty()) return out;
    for (const auto& part : split(s, ',')) out.push_back(parse_lit(part));
    return out;
}

inline std::size_t find_turnstile(std::string_view s) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] != '|' || s[i + 1] != '-') continue;
        bool before = i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]));
        bool after = i + 2 == s.size() || std::isspace(static_cast<unsigned char>(s[i + 2]));
        if (before && after) return i;
    }
    return std::string_view::npos;
}

}  // namespace detail

inline Sequent parse_sequent(std::string_view text) {
    auto t = detail::find_turnstile(text);
    if (t == std::string_view::npos) throw std::invalid_argument("missing turnstile |-");
    Sequent s;
    s.left = detail::parse_side(text.substr(0, t));
    s.right = detail::parse_side(text.substr(t + 2));
    s.normalize();
    return s;
}

inline bool is_identity_norm(const Term& t) { return t->op == Op::Identity; }

inline bool is_axiom(const Sequent& s) {
    for (const auto& l : s.left)
        if (s.has_right(l)) return true;
    for (const auto& r : s.right)
        if (r.left_var == r.right_var && is_identity_norm(r.norm)) return true;
    return false;
}

inline bool assumption_matches(const Sequent& s, AssumptionKind k) {
    for (const auto& x : s.left) {
        for (const auto& y : s.right) {
            if (x.left_var != y.left_var || x.right_var != y.right_var) continue;
            const Term& X = x.norm;
            const Term& Y = y.norm;
            switch (k) {
            case AssumptionKind::density:
                if (Y->op == Op::RelProd && print_predicate(Y->l) == x.key && print_predicate(Y->r) == x.key) return true;
                break;
            case AssumptionKind::commutativity:
                if (X->op == Op::RelProd && Y->op == Op::RelProd && print_predicate(X->l) == print_predicate(Y->r) &&
                    print_predicate(X->r) == print_predicate(Y->l))
                    return true;
                break;
            case AssumptionKind::symmetry:
                if (Y->op == Op::Converse && print_predicate(Y->l) == x.key) return true;
                if (X->op == Op::Converse && print_predicate(X->l) == y.key) return true;
                break;
            }
        }
    }
    return false;
}

struct Step {
    std::string rule;
    int fresh = -1;
};

struct Justification {
    std::vector<Step> steps;
    std::vector<int> premises;
};

struct ProofLine {
    int number = 0;
    Sequent sequent;
    Justification just;
};

struct ProofScript {
    std::string name;
    int n = 1;
    std::vector<AssumptionKind> assumptions;
    std::vector<ProofLine> lines;
    int goal = 0;

    bool assumes(AssumptionKind k) const {
        return std::find(assumptions.begin(), assumptions.end(), k) != assumptions.end();
    }
    const ProofLine* line(int number) const {
        for (const auto& l : lines)
            if (l.number == number) return &l;
        return nullptr;
    }
    bool has_premises() const {
        for (const auto& l : lines)
            for (const auto& s : l.just.steps)
                if (s.rule == "premise") return true;
        return false;
    }
};

inline const std::vector<std::string>& macro_names() {
    static const std::vector<std::string> names = {"imp-intro", "imp-elim", "id-shift", "diag-shift",
                                                   "flip", "diag-close", "diag-transfer"};
    return names;
}

inline bool is_nullary_rule(const std::string& r) {
    return r == "axiom" || r == "id-axiom" || r == "idR" || r == "premise" || r == "density" ||
           r == "commutativity" || r == "symmetry";
}

inline bool is_binary_rule(const std::string& r) {
    return r == "cut" || r == "compR" || r == "dotR" || r == "plusL";
}

inline bool is_unary_rule(const std::string& r) {
    static const std::set<std::string> u = {"idL", "plusR", "dotL", "negL", "negR", "compL",
                                            "convL", "convR", "weaken", "def"};
    if (u.count(r)) return true;
    if (r.rfind("macro:", 0) == 0) {
        auto m = r.substr(6);
        return std::find(macro_names().begin(), macro_names().end(), m) != macro_names().end();
    }
    return false;
}

inline std::string format_justification(const Justification& j) {
    std::string out = "[";
    for (std::size_t i = 0; i < j.steps.size(); ++i) {
        if (i) out += ", ";
        out += j.steps[i].rule;
        if (j.steps[i].rule == "compL" && j.steps[i].fresh >= 0) out += " no v" + std::to_string(j.steps[i].fresh);
    }
    if (!j.premises.empty()) {
        out += " from ";
        for (std::size_t i = 0; i < j.premises.size(); ++i) out += (i ? ", " : "") + std::to_string(j.premises[i]);
    }
    return out + "]";
}

inline Justification parse_justification(const std::string& text) {
    Justification j;
    std::string body = text;
    auto f = body.find(" from ");
    std::string steps = f == std::string::npos ? body : body.substr(0, f);
    if (f != std::string::npos) {
        for (const auto& p : detail::split(body.substr(f + 6), ',')) j.premises.push_back(detail::parse_index(p));
    }
    for (const auto& s : detail::split(steps, ',')) {
        Step st;
        auto sp = s.find(' ');
        st.rule = s.substr(0, sp);
        if (sp != std::string::npos) {
            std::string rest = detail::trim(s.substr(sp));
            if (st.rule != "compL" || rest.rfind("no v", 0) != 0)
                throw std::invalid_argument("unexpected text '" + rest + "' after rule " + st.rule);
            st.fresh = detail::parse_index(rest.substr(4));
        }
        if (!is_nullary_rule(st.rule) && !is_unary_rule(st.rule) && !is_binary_rule(st.rule))
            throw std::invalid_argument("unknown rule '" + st.rule + "'");
        j.steps.push_back(st);
    }
    if (j.steps.empty()) throw std::invalid_argument("empty justification");
    return j;
}

inline ProofScript parse_script(std::string_view text) {
    ProofScript p;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    bool have_name = false, have_vars = false, have_qed = false;
    while (std::getline(in, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        try {
            if (line.rfind("proof ", 0) == 0) {
                p.name = detail::trim(line.substr(6));
                have_name = true;
            } else if (line.rfind("vars ", 0) == 0) {
                p.n = detail::parse_index(detail::trim(line.substr(5)));
                if (p.n < 1 || p.n > 30) throw std::invalid_argument("vars must be between 1 and 30");
                have_vars = true;
            } else if (line.rfind("assume ", 0) == 0) {
                for (const auto& w : detail::split(detail::trim(line.substr(7)), ' ')) {
                    if (w.empty()) continue;
                    auto k = assumption_from_string(w);
                    if (!k) throw std::invalid_argument("unknown assumption '" + w + "'");
                    if (!p.assumes(*k)) p.assumptions.push_back(*k);
                }
            } else if (line.rfind("qed ", 0) == 0) {
                p.goal = detail::parse_index(detail::trim(line.substr(4)));
                have_qed = true;
            } else {
                auto dot = line.find('.');
                if (dot == std::string::npos) throw std::invalid_argument("expected a numbered line");
                ProofLine pl;
                pl.number = detail::parse_index(detail::trim(line.substr(0, dot)));
                auto lb = line.rfind('[');
                auto rb = line.rfind(']');
                if (lb == std::string::npos || rb == std::string::npos || rb < lb)
                    throw std::invalid_argument("missing [justification]");
                pl.just = parse_justification(detail::trim(line.substr(lb + 1, rb - lb - 1)));
                pl.sequent = parse_sequent(line.substr(dot + 1, lb - dot - 1));
                if (p.line(pl.number)) throw std::invalid_argument("duplicate line number " + std::to_string(pl.number));
                p.lines.push_back(std::move(pl));
            }
        } catch (const ScriptSyntaxError&) {
            throw;
        } catch (const std::exception& e) {
            throw ScriptSyntaxError(e.what(), lineno);
        }
    }
    if (!have_name) throw ScriptSyntaxError("missing 'proof <name>' header", lineno);
    if (!have_vars) throw ScriptSyntaxError("missing 'vars <n>' header", lineno);
    if (!have_qed) {
        if (p.lines.empty()) throw ScriptSyntaxError("script has no lines", lineno);
        p.goal = p.lines.back().number;
    }
    return p;
}

inline std::string format_script(const ProofScript& p) {
    std::string out = "proof " + p.name + "\nvars " + std::to_string(p.n) + "\n";
    for (auto k : p.assumptions) out += std::string("assume ") + to_string(k) + "\n";
    for (const auto& l : p.lines)
        out += std::to_string(l.number) + ". " + format_sequent(l.sequent) + "  " + format_justification(l.just) + "\n";
    out += "qed " + std::to_string(p.goal) + "\n";
    return out;
}

inline ProofScript load_script_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_script(ss.str());
}

// Forward rule application. Each function returns every conclusion the rule can produce.
namespace rules {

inline SequentLit lit_norm(int i, Term t, int j) {
    SequentLit l;
    l.left_var = i;
    l.right_var = j;
    l.key = print_predicate(t);
    l.norm = t;
    l.pred = std::move(t);
    return l;
}

inline std::vector<Sequent> neg_l(const Sequent& s) {
    std::vector<Sequent> out;
    for (const auto& r : s.right) {
        Sequent t = s;
        t.erase_right(r);
        t.add_left(lit_norm(r.left_var, complement(r.norm), r.right_var));
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Sequent> neg_r(const Sequent& s) {
    std::vector<Sequent> out;
    for (const auto& l : s.left) {
        Sequent t = s;
        t.erase_left(l);
        t.add_right(lit_norm(l.left_var, complement(l.norm), l.right_var));
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Sequent> conv_l(const Sequent& s) {
    std::vector<Sequent> out;
    for (const auto& l : s.left) {
        Sequent t = s;
        t.erase_left(l);
        t.add_left(lit_norm(l.right_var, converse(l.norm), l.left_var));
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Sequent> conv_r(const Sequent& s) {
    std::vector<Sequent> out;
    for (const auto& r : s.right) {
        Sequent t = s;
        t.erase_right(r);
        t.add_right(lit_norm(r.right_var, converse(r.norm), r.left_var));
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Sequent> dot_l(const Sequent& s) {
    std::vector<Sequent> out;
    for (const auto& a : s.left)
        for (const auto& b : s.left) {
            if (a.left_var != b.left_var || a.right_var != b.right_var) continue;
            Sequent t = s;
            t.erase_left(a);
            t.erase_left(b);
            t.add_left(lit_norm(a.left_var, meet(a.norm, b.norm), a.right_var));
            out.push_back(std::move(t));
        }
    return out;
}

inline std::vector<Sequent> plus_r(const Sequent& s) {
    std::vector<Sequent> out;
    for (const auto& a : s.right)
        for (const auto& b : s.right) {
            if (a.left_var != b.left_var || a.right_var != b.right_var) continue;
            Sequent t = s;
            t.erase_right(a);
            t.erase_right(b);
            t.add_right(lit_norm(a.left_var, join(a.norm, b.norm), a.right_var));
            out.push_back(std::move(t));
        }
    return out;
}

inline std::vector<Sequent> comp_l(const Sequent& s, int fresh) {
    std::vector<Sequent> out;
    for (const auto& a : s.left)
        for (const auto& b : s.left) {
            int y = a.right_var;
            if (b.left_var != y || (fresh >= 0 && y != fresh)) continue;
            if (y == a.left_var || y == b.right_var) continue;
            Sequent t = s;
            t.erase_left(a);
            t.erase_left(b);
            t.add_left(lit_norm(a.left_var, relprod(a.norm, b.norm), b.right_var));
            if (t.vars() & (1u << y)) continue;
            out.push_back(std::move(t));
        }
    return out;
}

inline std::vector<Sequent> id_l(const Sequent& s, int n) {
    std::vector<Sequent> out;
    for (const auto& a : s.left)
        for (int z = 0; z < n; ++z) {
            Sequent t = s;
            t.erase_left(a);
            t.add_left(lit_norm(a.left_var, a.norm, z));
            t.add_left(lit_norm(z, identity(), a.right_var));
            out.push_back(std::move(t));
        }
    return out;
}

inline void merge_into(Sequent& t, const Sequent& other) {
    for (const auto& l : other.left) t.add_left(l);
    for (const auto& r : other.right) t.add_right(r);
}

inline std::vector<Sequent> cut(const Sequent& a, const Sequent& b) {
    std::vector<Sequent> out;
    for (const auto& r : a.right) {
        if (!b.has_left(r)) continue;
        Sequent t = a;
        t.erase_right(r);
        Sequent u = b;
        u.erase_left(r);
        merge_into(t, u);
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<Sequent> comp_r(const Sequent& a, const Sequent& b) {
    std::vector<Sequent> out;
    for (const auto& x : a.right)
        for (const auto& y : b.right) {
            if (x.right_var != y.left_var) continue;
            Sequent t = a;
            t.erase_right(x);
            Sequent u = b;
            u.erase_right(y);
            merge_into(t, u);
            t.add_right(lit_norm(x.left_var, relprod(x.norm, y.norm), y.right_var));
            out.push_back(std::move(t));
        }
    return out;
}

inline std::vector<Sequent> dot_r(const Sequent& a, const Sequent& b) {
    std::vector<Sequent> out;
    for (const auto& x : a.right)
        for (const auto& y : b.right) {
            if (x.left_var != y.left_var || x.right_var != y.right_var) continue;
            Sequent t = a;
            t.erase_right(x);
            Sequent u = b;
            u.erase_right(y);
            merge_into(t, u);
            t.add_right(lit_norm(x.left_var, meet(x.norm, y.norm), x.right_var));
            out.push_back(std::move(t));
        }
    return out;
}

inline std::vector<Sequent> plus_l(const Sequent& a, const Sequent& b) {
    std::vector<Sequent> out;
    for (const auto& x : a.left)
        for (const auto& y : b.left) {
            if (x.left_var != y.left_var || x.right_var != y.right_var) continue;
            Sequent t = a;
            t.erase_left(x);
            Sequent u = b;
            u.erase_left(y);
            merge_into(t, u);
            t.add_left(lit_norm(x.left_var, join(x.norm, y.norm), x.right_var));
            out.push_back(std::move(t));
        }
    return out;
}

inline Term implies_norm(const Term& a, const Term& b) { return complement(relprod(converse(a), complement(b))); }

inline bool implies_parts(const Term& t, Term& a, Term& b) {
    if (t->op != Op::Complement || t->l->op != Op::RelProd) return false;
    const Term& rp = t->l;
    if (rp->l->op != Op::Converse || rp->r->op != Op::Complement) return false;
    a = rp->l->l;
    b = rp->r->l;
    return true;
}

// Derived rules; premises must have exactly the displayed shape.
inline std::vector<Sequent> macro(const std::string& name, const Sequent& s, int n) {
    std::vector<Sequent> out;
    auto one_one = s.left.size() == 1 && s.right.size() == 1 && s.left[0].left_var == s.right[0].left_var &&
                   s.left[0].right_var == s.right[0].right_var;
    auto only_right = s.left.empty() && s.right.size() == 1;
    if (name == "imp-intro") {
        if (!one_one) return out;
        int i = s.left[0].left_var, j = s.left[0].right_var;
        if (i == j) return out;
        Sequent t;
        t.add_right(lit_norm(j, implies_norm(s.left[0].norm, s.right[0].norm), j));
        out.push_back(t);
    } else if (name == "imp-elim") {
        if (!only_right || s.right[0].left_var != s.right[0].right_var) return out;
        Term a, b;
        if (!implies_parts(s.right[0].norm, a, b)) return out;
        int j = s.right[0].left_var;
        for (int i = 0; i < n; ++i) {
            Sequent t;
            t.add_left(lit_norm(i, a, j));
            t.add_right(lit_norm(i, b, j));
            out.push_back(t);
        }
    } else if (name == "id-shift") {
        if (!only_right || s.right[0].left_var != s.right[0].right_var) return out;
        int i = s.right[0].left_var;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (j == i || k == i) continue;
                Sequent t;
                t.add_left(lit_norm(j, identity(), k));
                t.add_right(lit_norm(j, s.right[0].norm, k));
                out.push_back(t);
            }
    } else if (name == "diag-shift") {
        if (!only_right || s.right[0].left_var != s.right[0].right_var) return out;
        for (int j = 0; j < n; ++j) {
            Sequent t;
            t.add_right(lit_norm(j, s.right[0].norm, j));
            out.push_back(t);
        }
    } else if (name == "flip") {
        if (!one_one) return out;
        int i = s.left[0].left_var, j = s.left[0].right_var;
        Sequent t;
        t.add_left(lit_norm(j, s.left[0].norm, i));
        t.add_right(lit_norm(j, s.right[0].norm, i));
        out.push_back(t);
    } else if (name == "diag-close") {
        if (!one_one || !is_identity_norm(s.left[0].norm)) return out;
        int i = s.left[0].left_var, j = s.left[0].right_var;
        if (i == j) return out;
        Sequent t;
        t.add_right(lit_norm(i, s.right[0].norm, i));
        out.push_back(t);
    } else if (name == "diag-transfer") {
        if (!one_one) return out;
        int i = s.left[0].left_var;
        Sequent t;
        t.add_left(lit_norm(i, s.left[0].norm, i));
        t.add_right(lit_norm(i, s.right[0].norm, i));
        out.push_back(t);
    }
    return out;
}

inline std::vector<Sequent> unary(const Step& st, const Sequent& s, int n) {
    const auto& r = st.rule;
    if (r == "negL") return neg_l(s);
    if (r == "negR") return neg_r(s);
    if (r == "convL") return conv_l(s);
    if (r == "convR") return conv_r(s);
    if (r == "dotL") return dot_l(s);
    if (r == "plusR") return plus_r(s);
    if (r == "compL") return comp_l(s, st.fresh);
    if (r == "idL") return id_l(s, n);
    if (r == "weaken" || r == "def") return {s};
    if (r.rfind("macro:", 0) == 0) return macro(r.substr(6), s, n);
    return {};
}

inline std::vector<Sequent> binary(const std::string& r, const Sequent& a, const Sequent& b) {
    if (r == "cut") return cut(a, b);
    if (r == "compR") return comp_r(a, b);
    if (r == "dotR") return dot_r(a, b);
    if (r == "plusL") return plus_l(a, b);
    return {};
}

}  // namespace rules

struct TraceStep {
    Step step;
    int other_line = -1;
    bool other_first = false;
    Sequent out;
};

struct LineTrace {
    Sequent start;
    std::vector<TraceStep> steps;
};

struct CheckOptions {
    bool allow_macros = true;
    bool allow_premises = true;
    std::size_t candidate_cap = 20000;
};

struct CheckResult {
    bool ok = false;
    int line = 0;
    std::string reason;
    std::map<int, LineTrace> traces;
    explicit operator bool() const { return ok; }
};

namespace detail {

struct ChainNode {
    Sequent s;
    int parent;
    int other_line;
    bool other_first;
};

inline std::optional<LineTrace> run_chain(const std::vector<Step>& steps, const std::vector<int>& premise_order,
                                          const std::map<int, const Sequent*>& proven, const Sequent& target, int n,
                                          std::size_t cap) {
    std::vector<std::vector<ChainNode>> levels(steps.size() + 1);
    levels[0].push_back({*proven.at(premise_order[0]), -1, -1, false});
    std::size_t next_premise = 1;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const Step& st = steps[k];
        bool last = k + 1 == steps.size();
        std::set<std::string> seen;
        int other = -1;
        if (is_binary_rule(st.rule)) {
            if (next_premise >= premise_order.size()) return std::nullopt;
            other = premise_order[next_premise++];
        }
        for (std::size_t idx = 0; idx < levels[k].size(); ++idx) {
            const Sequent& cur = levels[k][idx].s;
            auto push = [&](Sequent&& out, int oline, bool ofirst) {
                if (last && !subsequent(out, target)) return;
                auto key = out.key();
                if (!seen.insert(key).second) return;
                levels[k + 1].push_back({std::move(out), static_cast<int>(idx), oline, ofirst});
            };
            if (other >= 0) {
                const Sequent& o = *proven.at(other);
                for (auto& out : rules::binary(st.rule, cur, o)) push(std::move(out), other, false);
                for (auto& out : rules::binary(st.rule, o, cur)) push(std::move(out), other, true);
            } else {
                for (auto& out : rules::unary(st, cur, n)) push(std::move(out), -1, false);
            }
            if (levels[k + 1].size() > cap) break;
        }
        if (levels[k + 1].empty()) return std::nullopt;
    }
    if (next_premise != premise_order.size()) return std::nullopt;
    LineTrace tr;
    int idx = 0;
    std::vector<TraceStep> rev;
    for (std::size_t k = steps.size(); k > 0; --k) {
        const ChainNode& node = levels[k][idx];
        rev.push_back({steps[k - 1], node.other_line, node.other_first, node.s});
        idx = node.parent;
    }
    tr.start = levels[0][0].s;
    tr.steps.assign(rev.rbegin(), rev.rend());
    return tr;
}

}  // namespace detail

inline CheckResult check_script(const ProofScript& p, const CheckOptions& opt = {}) {
    CheckResult res;
    auto fail = [&](int line, std::string reason) {
        res.ok = false;
        res.line = line;
        res.reason = std::move(reason);
        return res;
    };
    std::map<int, const Sequent*> proven;
    for (const auto& line : p.lines) {
        const Sequent& c = line.sequent;
        if (c.max_var() >= p.n)
            return fail(line.number, "variable index " + std::to_string(c.max_var()) + " is not below vars " +
                                         std::to_string(p.n));
        const auto& j = line.just;
        for (int pr : j.premises)
            if (!proven.count(pr)) return fail(line.number, "premise " + std::to_string(pr) + " is not an earlier line");
        if (j.steps.size() == 1 && is_nullary_rule(j.steps[0].rule)) {
            const auto& r = j.steps[0].rule;
            if (!j.premises.empty()) return fail(line.number, r + " takes no premises");
            if (r == "axiom" || r == "id-axiom" || r == "idR") {
                if (!is_axiom(c)) return fail(line.number, "not an axiom");
            } else if (r == "premise") {
                if (!opt.allow_premises) return fail(line.number, "premise lines are not allowed");
            } else {
                auto k = *assumption_from_string(r);
                if (!p.assumes(k)) return fail(line.number, r + " is not among the script's assumptions");
                if (!assumption_matches(c, k)) return fail(line.number, "sequent does not match " + r);
            }
            proven[line.number] = &c;
            continue;
        }
        std::size_t binaries = 0;
        for (const auto& st : j.steps) {
            if (is_nullary_rule(st.rule)) return fail(line.number, st.rule + " cannot be chained");
            if (!opt.allow_macros && st.rule.rfind("macro:", 0) == 0)
                return fail(line.number, "macros are disabled");
            if (is_binary_rule(st.rule)) ++binaries;
            if (st.fresh >= p.n) return fail(line.number, "fresh variable index is not below vars");
        }
        if (j.premises.size() != binaries + 1)
            return fail(line.number, "expected " + std::to_string(binaries + 1) + " premises, got " +
                                         std::to_string(j.premises.size()));
        std::optional<LineTrace> tr;
        auto order = j.premises;
        auto steps = j.steps;
        tr = detail::run_chain(steps, order, proven, c, p.n, opt.candidate_cap);
        if (!tr && order.size() > 1) {
            std::sort(order.begin(), order.end());
            do {
                tr = detail::run_chain(steps, order, proven, c, p.n, opt.candidate_cap);
            } while (!tr && std::next_permutation(order.begin(), order.end()));
        }
        if (!tr && steps.size() > 1 && steps.size() <= 6) {
            std::vector<int> perm(steps.size());
            for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
            while (!tr && std::next_permutation(perm.begin(), perm.end())) {
                std::vector<Step> s2;
                for (int i : perm) s2.push_back(j.steps[i]);
                auto ord = j.premises;
                std::sort(ord.begin(), ord.end());
                do {
                    tr = detail::run_chain(s2, ord, proven, c, p.n, opt.candidate_cap);
                } while (!tr && std::next_permutation(ord.begin(), ord.end()));
            }
        }
        if (!tr) return fail(line.number, "does not follow from the cited premises by " + format_justification(j));
        res.traces[line.number] = std::move(*tr);
        proven[line.number] = &c;
    }
    if (!proven.count(p.goal)) return fail(p.goal, "goal line " + std::to_string(p.goal) + " is not present");
    res.ok = true;
    return res;
}

// Builds scripts line by line with automatic numbering.
class ScriptBuilder {
public:
    int add(Sequent s, std::vector<Step> steps, std::vector<int> premises = {}) {
        ProofLine l;
        l.number = static_cast<int>(lines_.size()) + 1;
        l.sequent = std::move(s);
        l.sequent.normalize();
        l.just.steps = std::move(steps);
        l.just.premises = std::move(premises);
        lines_.push_back(std::move(l));
        return lines_.back().number;
    }
    int add(Sequent s, const std::string& rule, std::vector<int> premises = {}, int fresh = -1) {
        return add(std::move(s), std::vector<Step>{{rule, fresh}}, std::move(premises));
    }
    const Sequent& sequent(int number) const { return lines_[number - 1].sequent; }
    std::vector<ProofLine>& lines() { return lines_; }

private:
    std::vector<ProofLine> lines_;
};

namespace detail {

inline Sequent seq(std::initializer_list<SequentLit> l, std::initializer_list<SequentLit> r) {
    Sequent s;
    for (const auto& x : l) s.add_left(x);
    for (const auto& x : r) s.add_right(x);
    return s;
}

inline SequentLit L(int i, const Term& t, int j) { return rules::lit_norm(i, t, j); }

// Emits the published derivation of a derived rule. `from` is the premise line.
inline int emit_macro(ScriptBuilder& b, const std::string& name, int from, const Sequent& out, int n);

inline int emit_imp_intro(ScriptBuilder& b, int from, const Term& A, const Term& B, int i, int j) {
    Term nb = complement(B);
    int l2 = b.add(seq({L(j, converse(A), i)}, {L(i, B, j)}), "convL", {from});
    int l3 = b.add(seq({L(j, converse(A), i), L(i, nb, j)}, {}), "negL", {l2});
    Term rp = relprod(converse(A), nb);
    int l4 = b.add(seq({L(j, rp, j)}, {}), "compL", {l3}, i);
    int l5 = b.add(seq({}, {L(j, complement(rp), j)}), "negR", {l4});
    Sequent fin;
    fin.add_right(make_lit(j, implies(A, B), j));
    return b.add(fin, "def", {l5});
}

inline int emit_imp_elim(ScriptBuilder& b, int from, const Term& A, const Term& B, int i, int j) {
    Term rp = relprod(converse(A), complement(B));
    int l2 = b.add(seq({}, {L(j, complement(rp), j)}), "def", {from});
    int l3 = b.add(seq({L(j, rp, j)}, {L(j, rp, j)}), "axiom");
    int l4 = b.add(seq({L(j, rp, j), L(j, complement(rp), j)}, {}), "negL", {l3});
    int l5 = b.add(seq({L(j, rp, j)}, {}), "cut", {l2, l4});
    int l6 = b.add(seq({L(i, A, j)}, {L(i, A, j)}), "axiom");
    int l7 = b.add(seq({L(i, A, j)}, {L(j, converse(A), i)}), "convR", {l6});
    int l8 = b.add(seq({L(i, B, j)}, {L(i, B, j)}), "axiom");
    int l9 = b.add(seq({}, {L(i, B, j), L(i, complement(B), j)}), "negR", {l8});
    int l10 = b.add(seq({L(i, A, j)}, {L(i, B, j), L(j, rp, j)}), "compR", {l7, l9});
    return b.add(seq({L(i, A, j)}, {L(i, B, j)}), "cut", {l10, l5});
}

inline int emit_id_shift(ScriptBuilder& b, int from, const Term& A, int i, int j, int k) {
    Term id = identity();
    int l2 = b.add(seq({}, {L(i, converse(A), i)}), "convR", {from});
    int l3 = b.add(seq({L(j, A, k)}, {L(j, A, k)}), "axiom");
    int l4 = b.add(seq({L(j, A, i), L(i, id, k)}, {L(j, A, k)}), "idL", {l3});
    int l5 = b.add(seq({L(i, converse(A), j), L(i, id, k)}, {L(j, A, k)}), "convL", {l4});
    int l6 = b.add(seq({L(i, converse(A), i), L(i, id, j), L(i, id, k)}, {L(j, A, k)}), "idL", {l5});
    int l7 = b.add(seq({L(i, id, j), L(i, id, k)}, {L(j, A, k)}), "cut", {l2, l6});
    int l8 = b.add(seq({L(j, converse(id), i), L(i, id, k)}, {L(j, A, k)}), "convL", {l7});
    Term ci = relprod(converse(id), id);
    int l9 = b.add(seq({L(j, ci, k)}, {L(j, A, k)}), "compL", {l8}, i);
    int l10 = b.add(seq({L(j, id, k)}, {L(j, id, k)}), "axiom");
    int l11 = b.add(seq({}, {L(j, id, j)}), "id-axiom");
    int l12 = b.add(seq({}, {L(j, converse(id), j)}), "convR", {l11});
    int l13 = b.add(seq({L(j, id, k)}, {L(j, ci, k)}), "compR", {l12, l10});
    return b.add(seq({L(j, id, k)}, {L(j, A, k)}), "cut", {l13, l9});
}

inline int emit_diag_shift(ScriptBuilder& b, int from, const Term& A, int i, int j) {
    if (i == j) return b.add(seq({}, {L(j, A, j)}), "def", {from});
    int l2 = emit_id_shift(b, from, A, i, j, j);
    int l3 = b.add(seq({}, {L(j, identity(), j)}), "id-axiom");
    return b.add(seq({}, {L(j, A, j)}), "cut", {l3, l2});
}

inline int emit_flip(ScriptBuilder& b, int from, const Term& A, const Term& B, int i, int j) {
    if (i == j) return b.add(seq({L(j, A, i)}, {L(j, B, i)}), "def", {from});
    int l2 = emit_imp_intro(b, from, A, B, i, j);
    int l3 = emit_diag_shift(b, l2, rules::implies_norm(A, B), j, i);
    return emit_imp_elim(b, l3, A, B, j, i);
}

inline int emit_diag_close(ScriptBuilder& b, int from, const Term& A, int i, int j) {
    Term id = identity();
    Term ii = relprod(id, id);
    Term ai = relprod(A, id);
    int l2 = b.add(seq({L(j, id, i)}, {L(j, id, i)}), "axiom");
    int l3 = b.add(seq({L(i, id, j), L(j, id, i)}, {L(i, ai, i)}), "compR", {from, l2});
    int l4 = b.add(seq({L(i, ii, i)}, {L(i, ai, i)}), "compL", {l3}, j);
    int l5 = b.add(seq({}, {L(i, id, i)}), "id-axiom");
    int l6 = b.add(seq({}, {L(i, ii, i)}), "compR", {l5, l5});
    int l7 = b.add(seq({}, {L(i, ai, i)}), "cut", {l6, l4});
    int l8 = b.add(seq({L(i, A, i)}, {L(i, A, i)}), "axiom");
    int l9 = b.add(seq({L(i, A, j), L(j, id, i)}, {L(i, A, i)}), "idL", {l8});
    int l10 = b.add(seq({L(i, ai, i)}, {L(i, A, i)}), "compL", {l9}, j);
    return b.add(seq({}, {L(i, A, i)}), "cut", {l7, l10});
}

inline int emit_diag_transfer(ScriptBuilder& b, int from, const Term& A, const Term& B, int i, int j) {
    if (i == j) return b.add(seq({L(i, A, i)}, {L(i, B, i)}), "def", {from});
    Term id = identity();
    Term ii = relprod(id, id);
    Term bi = relprod(B, id);
    int l2 = b.add(seq({L(i, A, i), L(i, id, j)}, {L(i, B, j)}), "idL", {from});
    int l3 = b.add(seq({L(j, id, i)}, {L(j, id, i)}), "axiom");
    int l4 = b.add(seq({L(i, A, i), L(i, id, j), L(j, id, i)}, {L(i, bi, i)}), "compR", {l2, l3});
    int l5 = b.add(seq({L(i, A, i), L(i, ii, i)}, {L(i, bi, i)}), "compL", {l4}, j);
    int l6 = b.add(seq({}, {L(i, id, i)}), "id-axiom");
    int l7 = b.add(seq({}, {L(i, ii, i)}), "compR", {l6, l6});
    int l8 = b.add(seq({L(i, A, i)}, {L(i, bi, i)}), "cut", {l7, l5});
    int l9 = b.add(seq({L(i, B, i)}, {L(i, B, i)}), "axiom");
    int l10 = b.add(seq({L(i, B, j), L(j, id, i)}, {L(i, B, i)}), "idL", {l9});
    int l11 = b.add(seq({L(i, bi, i)}, {L(i, B, i)}), "compL", {l10}, j);
    return b.add(seq({L(i, A, i)}, {L(i, B, i)}), "cut", {l8, l11});
}

inline int emit_macro(ScriptBuilder& b, const std::string& name, int from, const Sequent& out, int) {
    const Sequent& in = b.sequent(from);
    if (name == "imp-intro") {
        const auto& a = in.left[0];
        return emit_imp_intro(b, from, a.norm, in.right[0].norm, a.left_var, a.right_var);
    }
    if (name == "imp-elim") {
        Term A, B;
        rules::implies_parts(in.right[0].norm, A, B);
        return emit_imp_elim(b, from, A, B, out.left[0].left_var, out.left[0].right_var);
    }
    if (name == "id-shift")
        return emit_id_shift(b, from, in.right[0].norm, in.right[0].left_var, out.left[0].left_var,
                             out.left[0].right_var);
    if (name == "diag-shift")
        return emit_diag_shift(b, from, in.right[0].norm, in.right[0].left_var, out.right[0].left_var);
    if (name == "flip")
        return emit_flip(b, from, in.left[0].norm, in.right[0].norm, in.left[0].left_var, in.left[0].right_var);
    if (name == "diag-close")
        return emit_diag_close(b, from, in.right[0].norm, in.left[0].left_var, in.left[0].right_var);
    if (name == "diag-transfer")
        return emit_diag_transfer(b, from, in.left[0].norm, in.right[0].norm, in.left[0].left_var,
                                  in.left[0].right_var);
    throw std::invalid_argument("unknown macro " + name);
}

}  // namespace detail

// The published derivation of a derived rule as a standalone script whose line 1 is the premise.
inline ProofScript expand_macro(const std::string& name, const Sequent& premise, const Sequent& conclusion, int n) {
    auto outs = rules::macro(name, premise, n);
    bool shaped = std::any_of(outs.begin(), outs.end(), [&](const Sequent& s) { return subsequent(s, conclusion); });
    if (!shaped) throw std::invalid_argument("premise shape does not match " + name);
    Sequent target;
    for (const auto& s : outs)
        if (subsequent(s, conclusion)) {
            target = s;
            break;
        }
    ScriptBuilder b;
    int p = b.add(premise, "premise");
    int last = detail::emit_macro(b, name, p, target, n);
    if (!same_sequent(b.sequent(last), conclusion)) last = b.add(conclusion, "weaken", {last});
    ProofScript s;
    s.name = name;
    s.n = n;
    s.lines = std::move(b.lines());
    s.goal = last;
    return s;
}

// Rewrites every line into single-rule primitive lines, expanding macros.
inline ProofScript expand(const ProofScript& p) {
    auto res = check_script(p);
    if (!res.ok) throw std::invalid_argument("cannot expand an unchecked script: line " + std::to_string(res.line) +
                                             ": " + res.reason);
    ScriptBuilder b;
    std::map<int, int> renum;
    for (const auto& line : p.lines) {
        const auto& j = line.just;
        if (j.steps.size() == 1 && is_nullary_rule(j.steps[0].rule)) {
            renum[line.number] = b.add(line.sequent, j.steps[0].rule);
            continue;
        }
        const LineTrace& tr = res.traces.at(line.number);
        int cur = -1;
        int first = j.premises[0];
        for (int pr : j.premises)
            if (same_sequent(p.line(pr)->sequent, tr.start)) {
                first = pr;
                break;
            }
        cur = renum.at(first);
        for (const auto& ts : tr.steps) {
            const auto& r = ts.step.rule;
            if (r.rfind("macro:", 0) == 0) {
                cur = detail::emit_macro(b, r.substr(6), cur, ts.out, p.n);
            } else if (is_binary_rule(r)) {
                int other = renum.at(ts.other_line);
                std::vector<int> prem = ts.other_first ? std::vector<int>{other, cur} : std::vector<int>{cur, other};
                cur = b.add(ts.out, r, prem);
            } else if (r == "weaken" || r == "def") {
                continue;
            } else {
                int fresh = ts.step.fresh;
                if (r == "compL" && fresh < 0) {
                    std::uint32_t before = b.sequent(cur).vars();
                    std::uint32_t after = ts.out.vars();
                    std::uint32_t gone = before & ~after;
                    for (int v = 0; v < 32; ++v)
                        if (gone & (1u << v)) fresh = v;
                }
                cur = b.add(ts.out, r, {cur}, fresh);
            }
        }
        if (!same_sequent(b.sequent(cur), line.sequent)) cur = b.add(line.sequent, "weaken", {cur});
        renum[line.number] = cur;
    }
    ProofScript out;
    out.name = p.name;
    out.n = p.n;
    out.assumptions = p.assumptions;
    out.lines = std::move(b.lines());
    out.goal = renum.at(p.goal);
    return out;
}

inline ProofScript renumber(const ProofScript& p) {
    ProofScript out = p;
    std::map<int, int> m;
    for (std::size_t i = 0; i < out.lines.size(); ++i) m[out.lines[i].number] = static_cast<int>(i) + 1;
    for (auto& l : out.lines) {
        l.number = m.at(l.number);
        for (auto& pr : l.just.premises) pr = m.count(pr) ? m.at(pr) : pr;
    }
    out.goal = m.count(p.goal) ? m.at(p.goal) : p.goal;
    return out;
}

// Inserts `Γ,extra ⊢ Δ,extra'` derived by weakening directly after line `after`.
inline ProofScript insert_weakening(const ProofScript& p, int after, const std::vector<SequentLit>& extra_left,
                                    const std::vector<SequentLit>& extra_right) {
    ProofScript out = p;
    auto it = std::find_if(out.lines.begin(), out.lines.end(), [&](const ProofLine& l) { return l.number == after; });
    if (it == out.lines.end()) throw std::invalid_argument("no such line");
    ProofLine w;
    int maxn = 0;
    for (const auto& l : out.lines) maxn = std::max(maxn, l.number);
    w.number = maxn + 1;
    w.sequent = it->sequent;
    for (const auto& l : extra_left) w.sequent.add_left(l);
    for (const auto& r : extra_right) w.sequent.add_right(r);
    w.just.steps = {{"weaken", -1}};
    w.just.premises = {after};
    out.lines.insert(it + 1, w);
    return renumber(out);
}

inline SequentLit swap_lit(const SequentLit& l, int a, int b) {
    auto sw = [&](int v) { return v == a ? b : v == b ? a : v; };
    SequentLit r = l;
    r.left_var = sw(l.left_var);
    r.right_var = sw(l.right_var);
    return r;
}

inline ProofScript swap_variables(const ProofScript& p, int a, int b) {
    ProofScript out = p;
    auto sw = [&](int v) { return v == a ? b : v == b ? a : v; };
    for (auto& line : out.lines) {
        Sequent s;
        for (const auto& l : line.sequent.left) s.add_left(swap_lit(l, a, b));
        for (const auto& r : line.sequent.right) s.add_right(swap_lit(r, a, b));
        line.sequent = std::move(s);
        for (auto& st : line.just.steps)
            if (st.fresh >= 0) st.fresh = sw(st.fresh);
    }
    return out;
}

// Goal predicate of a premise-free script whose goal line is `⊢ P(i,i)`.
inline std::optional<Term> goal_predicate(const ProofScript& p) {
    const ProofLine* g = p.line(p.goal);
    if (!g || p.has_premises()) return std::nullopt;
    const Sequent& s = g->sequent;
    if (!s.left.empty() || s.right.size() != 1 || s.right[0].left_var != s.right[0].right_var) return std::nullopt;
    return s.right[0].pred;
}

enum class SearchStatus { found, not_found, budget_exhausted, depth_exhausted };

inline const char* to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::not_found: return "not-found";
    case SearchStatus::budget_exhausted: return "budget-exhausted";
    case SearchStatus::depth_exhausted: return "depth-exhausted";
    }
    return "?";
}

struct SearchResult {
    SearchStatus status = SearchStatus::not_found;
    std::optional<ProofScript> script;
    std::size_t nodes = 0;
};

namespace detail {

struct SearchNode {
    Sequent s;
    std::string rule;
    int fresh = -1;
    std::vector<SearchNode> kids;
};

class Searcher {
public:
    Searcher(int n, std::vector<AssumptionKind> as, std::size_t budget) : n_(n), as_(std::move(as)), budget_(budget) {}

    std::optional<SearchNode> prove(const Sequent& s, int depth) {
        if (++nodes_ > budget_) {
            over_budget_ = true;
            return std::nullopt;
        }
        if (is_axiom(s)) return SearchNode{s, "axiom", -1, {}};
        for (auto k : as_)
            if (mentions_comp_or_conv(s) && assumption_matches(s, k)) return SearchNode{s, to_string(k), -1, {}};
        if (depth == 0) {
            depth_cut_ = true;
            return std::nullopt;
        }
        bool applied = false;
        auto inv = invertible(s, depth, applied);
        if (applied || over_budget_) return inv;
        for (const auto& r : s.right) {
            if (r.norm->op != Op::RelProd) continue;
            for (int y = 0; y < n_; ++y) {
                Sequent a = s, b = s;
                a.add_right(rules::lit_norm(r.left_var, r.norm->l, y));
                b.add_right(rules::lit_norm(y, r.norm->r, r.right_var));
                if (same_sequent(a, s) && same_sequent(b, s)) continue;
                auto ka = prove(a, depth - 1);
                if (over_budget_) return std::nullopt;
                if (!ka) continue;
                auto kb = prove(b, depth - 1);
                if (over_budget_) return std::nullopt;
                if (!kb) continue;
                return SearchNode{s, "compR", -1, {std::move(*ka), std::move(*kb)}};
            }
        }
        for (const auto& a : s.left)
            for (const auto& id : s.left) {
                if (id.norm->op != Op::Identity || id.left_var != a.right_var) continue;
                Sequent t = s;
                t.add_left(rules::lit_norm(a.left_var, a.norm, id.right_var));
                if (same_sequent(t, s)) continue;
                auto k = prove(t, depth - 1);
                if (over_budget_) return std::nullopt;
                if (k) return SearchNode{s, "idL", -1, {std::move(*k)}};
            }
        return std::nullopt;
    }

    std::size_t nodes() const { return nodes_; }
    bool over_budget() const { return over_budget_; }
    bool depth_cut() const { return depth_cut_; }
    void reset_depth_flag() { depth_cut_ = false; }

private:
    static bool mentions_comp_or_conv(const Sequent& s) {
        auto has = [](const Term& t, auto&& self) -> bool {
            if (t->op == Op::RelProd || t->op == Op::Converse) return true;
            return (t->l && self(t->l, self)) || (t->r && self(t->r, self));
        };
        for (const auto* side : {&s.left, &s.right})
            for (const auto& l : *side)
                if (has(l.norm, has)) return true;
        return false;
    }

    std::optional<SearchNode> unary_child(const Sequent& s, Sequent t, const std::string& rule, int depth, int fresh = -1) {
        auto k = prove(t, depth - 1);
        if (!k) return std::nullopt;
        return SearchNode{s, rule, fresh, {std::move(*k)}};
    }

    std::optional<SearchNode> binary_child(const Sequent& s, Sequent a, Sequent b, const std::string& rule, int depth) {
        auto ka = prove(a, depth - 1);
        if (!ka) return std::nullopt;
        auto kb = prove(b, depth - 1);
        if (!kb) return std::nullopt;
        return SearchNode{s, rule, -1, {std::move(*ka), std::move(*kb)}};
    }

    std::optional<SearchNode> invertible(const Sequent& s, int depth, bool& applied) {
        applied = true;
        for (const auto& l : s.left) {
            const Term& t = l.norm;
            int x = l.left_var, y = l.right_var;
            Sequent base = s;
            base.erase_left(l);
            switch (t->op) {
            case Op::Complement: {
                Sequent u = base;
                u.add_right(rules::lit_norm(x, t->l, y));
                return unary_child(s, u, "negL", depth);
            }
            case Op::Converse: {
                Sequent u = base;
                u.add_left(rules::lit_norm(y, t->l, x));
                return unary_child(s, u, "convL", depth);
            }
            case Op::Meet: {
                Sequent u = base;
                u.add_left(rules::lit_norm(x, t->l, y));
                u.add_left(rules::lit_norm(x, t->r, y));
                return unary_child(s, u, "dotL", depth);
            }
            case Op::Join: {
                Sequent a = base, b = base;
                a.add_left(rules::lit_norm(x, t->l, y));
                b.add_left(rules::lit_norm(x, t->r, y));
                return binary_child(s, a, b, "plusL", depth);
            }
            case Op::RelProd: {
                std::uint32_t used = s.vars();
                for (int z = 0; z < n_; ++z) {
                    if (used & (1u << z)) continue;
                    Sequent u = base;
                    u.add_left(rules::lit_norm(x, t->l, z));
                    u.add_left(rules::lit_norm(z, t->r, y));
                    return unary_child(s, u, "compL", depth, z);
                }
                break;
            }
            default:
                break;
            }
        }
        for (const auto& r : s.right) {
            const Term& t = r.norm;
            int x = r.left_var, y = r.right_var;
            Sequent base = s;
            base.erase_right(r);
            switch (t->op) {
            case Op::Complement: {
                Sequent u = base;
                u.add_left(rules::lit_norm(x, t->l, y));
                return unary_child(s, u, "negR", depth);
            }
            case Op::Converse: {
                Sequent u = base;
                u.add_right(rules::lit_norm(y, t->l, x));
                return unary_child(s, u, "convR", depth);
            }
            case Op::Join: {
                Sequent u = base;
                u.add_right(rules::lit_norm(x, t->l, y));
                u.add_right(rules::lit_norm(x, t->r, y));
                return unary_child(s, u, "plusR", depth);
            }
            case Op::Meet: {
                Sequent a = base, b = base;
                a.add_right(rules::lit_norm(x, t->l, y));
                b.add_right(rules::lit_norm(x, t->r, y));
                return binary_child(s, a, b, "dotR", depth);
            }
            default:
                break;
            }
        }
        applied = false;
        return std::nullopt;
    }

    int n_;
    std::vector<AssumptionKind> as_;
    std::size_t budget_;
    std::size_t nodes_ = 0;
    bool over_budget_ = false;
    bool depth_cut_ = false;
};

inline int emit_search_tree(ScriptBuilder& b, const SearchNode& node) {
    std::vector<int> kids;
    for (const auto& k : node.kids) kids.push_back(emit_search_tree(b, k));
    return b.add(node.s, node.rule, kids, node.fresh);
}

}  // namespace detail

inline SearchResult search_proof(const Sequent& goal, int n, int depth, const std::vector<AssumptionKind>& assumptions,
                                 std::size_t node_budget = 2'000'000) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (goal.max_var() >= n) throw std::invalid_argument("goal uses a variable index not below n");
    SearchResult res;
    detail::Searcher s(n, assumptions, node_budget);
    for (int d = 1; d <= depth; ++d) {
        s.reset_depth_flag();
        auto tree = s.prove(goal, d);
        res.nodes = s.nodes();
        if (s.over_budget()) {
            res.status = SearchStatus::budget_exhausted;
            return res;
        }
        if (tree) {
            ScriptBuilder b;
            int last = detail::emit_search_tree(b, *tree);
            ProofScript p;
            p.name = "search";
            p.n = n;
            p.assumptions = assumptions;
            p.lines = std::move(b.lines());
            p.lines.back().sequent = goal;
            p.goal = last;
            res.status = SearchStatus::found;
            res.script = std::move(p);
            return res;
        }
        if (!s.depth_cut()) {
            res.status = SearchStatus::not_found;
            return res;
        }
    }
    res.status = SearchStatus::depth_exhausted;
    return res;
}

}  // namespace relframe
