#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "relframe/census.hpp"
#include "relframe/frames.hpp"
#include "relframe/predicates.hpp"
#include "relframe/validity.hpp"

namespace relframe {

// ---------------------------------------------------------------------------
// Tables and golden-file comparison.

struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::string to_tsv(const Table& t) {
    std::string out;
    for (const auto& c : t.comments) out += "# " + c + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "\t" : "") + cells[i];
        out += "\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

inline std::string to_text(const Table& t) {
    std::vector<std::size_t> w(t.header.size(), 0);
    auto widen = [&](const std::vector<std::string>& r) {
        if (r.size() > w.size()) w.resize(r.size(), 0);
        for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    };
    widen(t.header);
    for (const auto& r : t.rows) widen(r);
    std::string out;
    for (const auto& c : t.comments) out += "# " + c + "\n";
    auto line = [&](const std::vector<std::string>& r) {
        std::string l;
        for (std::size_t i = 0; i < r.size(); ++i) {
            l += r[i];
            if (i + 1 < r.size()) l += std::string(w[i] - r[i].size() + 2, ' ');
        }
        out += l + "\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

inline std::vector<std::string> split_tabs(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline Table parse_table(std::istream& in) {
    Table t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        if (!have_header) {
            t.header = split_tabs(line);
            have_header = true;
        } else {
            t.rows.push_back(split_tabs(line));
        }
    }
    return t;
}

inline Table load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_table(in);
}

// Cell-level differences between an expected and an actual table.
inline std::vector<std::string> diff_tables(const Table& expected, const Table& actual) {
    std::vector<std::string> out;
    if (expected.header != actual.header) {
        std::size_t n = std::max(expected.header.size(), actual.header.size());
        for (std::size_t i = 0; i < n; ++i) {
            std::string e = i < expected.header.size() ? expected.header[i] : "<none>";
            std::string a = i < actual.header.size() ? actual.header[i] : "<none>";
            if (e != a) out.push_back("header column " + std::to_string(i + 1) + ": expected '" + e + "', got '" + a + "'");
        }
    }
    std::size_t n = std::max(expected.rows.size(), actual.rows.size());
    for (std::size_t r = 0; r < n; ++r) {
        if (r >= expected.rows.size()) {
            out.push_back("row " + std::to_string(r + 1) + ": unexpected extra row");
            continue;
        }
        if (r >= actual.rows.size()) {
            out.push_back("row " + std::to_string(r + 1) + ": missing row");
            continue;
        }
        const auto& e = expected.rows[r];
        const auto& a = actual.rows[r];
        std::size_t m = std::max(e.size(), a.size());
        for (std::size_t c = 0; c < m; ++c) {
            std::string ev = c < e.size() ? e[c] : "<none>";
            std::string av = c < a.size() ? a[c] : "<none>";
            if (ev == av) continue;
            std::string col = c < expected.header.size() ? expected.header[c] : std::to_string(c + 1);
            std::string row = e.empty() ? std::to_string(r + 1) : e[0];
            out.push_back("row " + row + ", column " + col + ": expected '" + ev + "', got '" + av + "'");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Assignments written with element names, e.g. "A={a} B={0,b}".

inline Mask parse_set(const Frame& f, const std::string& text) {
    std::string s = text;
    if (s.size() < 2 || s.front() != '{' || s.back() != '}') throw std::invalid_argument("expected {..}: " + text);
    s = s.substr(1, s.size() - 2);
    Mask m = 0;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (item.empty()) continue;
        int found = -1;
        for (int i = 0; i < f.n; ++i)
            if (f.element_name(i) == item) found = i;
        if (found < 0) throw std::invalid_argument("unknown element '" + item + "' in " + f.name);
        m |= bit(found);
    }
    return m;
}

inline Assignment parse_assignment(const Frame& f, const std::string& text) {
    Assignment h;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("expected NAME={..}: " + tok);
        h[tok.substr(0, eq)] = parse_set(f, tok.substr(eq + 1));
    }
    return h;
}

// ---------------------------------------------------------------------------
// Reproduction targets.

inline const std::vector<std::string>& reproduce_targets() {
    static const std::vector<std::string> t = {"k1-grid", "k2-table", "k3-density", "four-element", "counts"};
    return t;
}

struct K1Assignment {
    std::string name;
    std::string text;
};

inline const std::vector<K1Assignment>& k1_assignments() {
    static const std::vector<K1Assignment> v = {
        {"h1", "A={a} B={b} C={0,b}"}, {"h2", "A={a} B={a,b} C={0,a,b}"}, {"h3", "A={a} B={b} C={a,b}"},
        {"h4", "A={a} B={b} C={a,c}"},  {"h5", "A={a} B={b} C={b}"},          {"h6", "A={a} B={b,c} C={b}"},
    };
    return v;
}

inline const std::vector<std::string>& k1_grid_predicates() {
    static const std::vector<std::string> v = {"no.1", "no.2", "no.3", "no.4", "no.5", "no.6",
                                               "perm", "suff", "contract2", "contract3", "self-dist"};
    return v;
}

inline Table reproduce_k1_grid() {
    Frame f = builtin_frame("k1");
    Table t;
    t.comments = {"Invalidation grid on the complex algebra of k1", "o: predicate holds, x: invalidated"};
    t.header = {"assignment"};
    for (const auto& p : k1_grid_predicates()) t.header.push_back(p);
    for (const auto& a : k1_assignments()) {
        Assignment h = parse_assignment(f, a.text);
        std::vector<std::string> row = {a.name};
        for (const auto& p : k1_grid_predicates()) row.push_back(holds(f, h, named(p)) ? "o" : "x");
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline const std::vector<std::string>& k2_table_predicates() {
    static const std::vector<std::string> v = {"mp", "contra", "perm", "suff"};
    return v;
}

inline Table reproduce_k2_table() {
    Frame f = builtin_frame("k2");
    Table t;
    t.comments = {"Singleton assignments on the complex algebra of k2 sending each predicate to the empty set"};
    t.header = {"predicate", "assignment"};
    for (const auto& p : k2_table_predicates())
        for (const auto& h : singleton_invalidators(f, named(p), true)) t.rows.push_back({p, format_assignment(f, h)});
    return t;
}

struct DensityCase {
    std::string predicate;
    std::string assignment;
    std::string text;
};

inline const std::vector<DensityCase>& k3_density_cases() {
    static const std::vector<DensityCase> v = {
        {"reductio", "h1", "A={a}"},
        {"contract5", "h2", "A={a} B={a}"},
        {"contract4", "h3", "A={a} B={0}"},
        {"contract2", "h4", "A={a} B={0}"},
        {"contract3", "h5", "A={a} B={a} C={0}"},
        {"self-dist", "h6", "A={a} B={0} C={0}"},
    };
    return v;
}

inline Table reproduce_k3_density() {
    Frame f = builtin_frame("k3");
    Table t;
    t.comments = {"Density predicates under the listed assignments on the complex algebra of k3"};
    t.header = {"predicate", "assignment", "value", "verdict"};
    for (const auto& c : k3_density_cases()) {
        Assignment h = parse_assignment(f, c.text);
        Mask v = eval(f, h, named(c.predicate));
        bool ok = (v & f.identity) == f.identity;
        t.rows.push_back({c.predicate, c.assignment, f.format_set(v), ok ? "holds" : "invalid"});
    }
    return t;
}

struct FourElementReport {
    std::size_t frames = 0;
    std::vector<std::size_t> invalidate_l;
    std::vector<std::size_t> invalidate_both;
    std::vector<Frame> representatives;
    bool witness_is_k5 = false;
    std::size_t witness_triples = 0;
};

inline FourElementReport four_element_kr(unsigned jobs = 0, const std::function<void(const std::string&)>& progress = {}) {
    FourElementReport r;
    CountReport rep = census(4, CensusClass::kr, true);
    r.representatives = rep.representatives;
    r.frames = rep.representatives.size();
    Term l = named("L''"), m = named("M''");
    SweepOptions opt;
    opt.bit_budget = 30;
    opt.jobs = jobs;
    for (std::size_t i = 0; i < rep.representatives.size(); ++i) {
        const Frame& f = rep.representatives[i];
        auto vl = decide_valid(Program(f, l), opt);
        if (progress) progress(f.name + " L'' " + to_string(vl.kind));
        if (!vl.invalid()) continue;
        r.invalidate_l.push_back(i);
        auto vm = decide_valid(Program(f, m), opt);
        if (progress) progress(f.name + " M'' " + to_string(vm.kind));
        if (vm.invalid()) r.invalidate_both.push_back(i);
    }
    if (r.invalidate_both.size() == 1) {
        const Frame& w = rep.representatives[r.invalidate_both[0]];
        r.witness_triples = w.triple_count();
        r.witness_is_k5 = canonical_form(w) == canonical_form(builtin_frame("k5"));
    }
    return r;
}

inline Table four_element_table(const FourElementReport& r) {
    Table t;
    t.comments = {"Four-element KR-frames and the predicates L'' and M''"};
    t.header = {"quantity", "value"};
    t.rows = {{"kr-frames", std::to_string(r.frames)},
              {"invalidate-L''", std::to_string(r.invalidate_l.size())},
              {"invalidate-L''-and-M''", std::to_string(r.invalidate_both.size())},
              {"witness-isomorphic-to-k5", r.witness_is_k5 ? "yes" : "no"},
              {"witness-triples", std::to_string(r.witness_triples)}};
    return t;
}

inline Table reproduce_counts(std::vector<CountReport>* reports = nullptr) {
    Table t;
    t.comments = {"Isomorphism classes of KR-frames and TR-frames"};
    t.header = {"class", "n", "iso"};
    for (auto [n, cls] : std::vector<std::pair<int, CensusClass>>{{4, CensusClass::kr}, {5, CensusClass::kr}, {5, CensusClass::tr}}) {
        CountReport rep = census(n, cls);
        t.rows.push_back({to_string(cls), std::to_string(n), std::to_string(rep.iso_class_count)});
        if (reports) reports->push_back(std::move(rep));
    }
    return t;
}

}  // namespace relframe
