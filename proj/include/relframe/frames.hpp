#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace relframe {

using Mask = std::uint32_t;

constexpr int kMaxElements = 30;

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : ((Mask{1} << n) - 1); }
inline Mask bit(int i) { return Mask{1} << i; }

using Triple = std::array<int, 3>;

// Lookup tables for fast complex-algebra evaluation.
struct Accel {
    std::vector<Mask> conv;  // conv[X], n <= 12
    std::vector<Mask> row;   // row[(x << n) | Y] = {x};Y, n <= 12
    std::vector<Mask> full;  // full[(X << n) | Y] = X;Y, n <= 8
};

struct Frame {
    std::string name;
    int n = 0;
    std::vector<std::string> names;
    std::vector<int> star;
    Mask identity = 0;
    std::vector<Mask> table;  // table[x*n+y] = {z : Rxyz}
    std::shared_ptr<const Accel> accel;

    bool has(int x, int y, int z) const { return (table[x * n + y] >> z) & 1u; }
    Mask all() const { return full_mask(n); }

    std::size_t triple_count() const {
        std::size_t c = 0;
        for (Mask m : table) c += std::popcount(m);
        return c;
    }

    std::vector<Triple> triples() const {
        std::vector<Triple> out;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z)
                    if (has(x, y, z)) out.push_back({x, y, z});
        return out;
    }

    Mask compose(Mask X, Mask Y) const {
        if (accel) {
            if (!accel->full.empty()) return accel->full[(std::size_t(X) << n) | Y];
            if (!accel->row.empty()) {
                Mask out = 0;
                for (Mask xs = X; xs; xs &= xs - 1)
                    out |= accel->row[(std::size_t(std::countr_zero(xs)) << n) | Y];
                return out;
            }
        }
        Mask out = 0;
        for (Mask xs = X; xs; xs &= xs - 1) {
            int x = std::countr_zero(xs);
            for (Mask ys = Y; ys; ys &= ys - 1) out |= table[x * n + std::countr_zero(ys)];
        }
        return out;
    }

    Mask converse(Mask X) const {
        if (accel && !accel->conv.empty()) return accel->conv[X];
        Mask out = 0;
        for (Mask xs = X; xs; xs &= xs - 1) out |= bit(star[std::countr_zero(xs)]);
        return out;
    }

    Mask complement(Mask X) const { return ~X & all(); }
    static Mask unite(Mask X, Mask Y) { return X | Y; }
    Mask identity_value() const { return identity; }

    // Builds lookup tables once; later copies share them.
    void accelerate() {
        if (accel || n > 12) return;
        auto a = std::make_shared<Accel>();
        std::size_t sz = std::size_t{1} << n;
        a->conv.resize(sz);
        for (std::size_t X = 0; X < sz; ++X) {
            Mask out = 0;
            for (Mask xs = Mask(X); xs; xs &= xs - 1) out |= bit(star[std::countr_zero(xs)]);
            a->conv[X] = out;
        }
        a->row.assign(std::size_t(n) * sz, 0);
        for (int x = 0; x < n; ++x) {
            Mask* r = &a->row[std::size_t(x) << n];
            for (std::size_t Y = 1; Y < sz; ++Y) {
                int y = std::countr_zero(Mask(Y));
                r[Y] = r[Y & (Y - 1)] | table[x * n + y];
            }
        }
        if (n <= 8) {
            a->full.assign(sz * sz, 0);
            for (std::size_t X = 1; X < sz; ++X) {
                int x = std::countr_zero(Mask(X));
                std::size_t rest = X & (X - 1);
                for (std::size_t Y = 0; Y < sz; ++Y)
                    a->full[(X << n) | Y] = a->full[(rest << n) | Y] | a->row[(std::size_t(x) << n) | Y];
            }
        }
        accel = std::move(a);
    }

    std::string element_name(int i) const {
        if (i < int(names.size()) && !names[i].empty()) return names[i];
        return std::to_string(i);
    }

    std::string format_set(Mask X) const {
        std::string s = "{";
        bool first = true;
        for (int i = 0; i < n; ++i)
            if ((X >> i) & 1u) {
                if (!first) s += ",";
                s += element_name(i);
                first = false;
            }
        return s + "}";
    }
};

inline Frame make_frame(int n, std::vector<int> star, Mask identity, const std::vector<Triple>& triples,
                        std::string name = {}, std::vector<std::string> names = {}) {
    if (n < 1 || n > kMaxElements) throw ResourceError("carrier size exceeds word width");
    if (int(star.size()) != n) throw std::invalid_argument("star has wrong length");
    for (int s : star)
        if (s < 0 || s >= n) throw std::invalid_argument("star image out of range");
    if (identity & ~full_mask(n)) throw std::invalid_argument("identity element out of range");
    Frame f;
    f.name = std::move(name);
    f.n = n;
    f.star = std::move(star);
    f.identity = identity;
    f.names = std::move(names);
    f.table.assign(std::size_t(n) * n, 0);
    for (const auto& t : triples) {
        for (int c : t)
            if (c < 0 || c >= n) throw std::invalid_argument("triple coordinate out of range");
        f.table[t[0] * n + t[1]] |= bit(t[2]);
    }
    return f;
}

inline Frame make_pair_frame(int m) {
    if (m < 1) throw std::invalid_argument("pair frame needs m >= 1");
    if (m * m > kMaxElements) throw ResourceError("pair frame carrier exceeds word width");
    int n = m * m;
    std::vector<int> star(n);
    std::vector<std::string> names(n);
    Mask id = 0;
    std::vector<Triple> tr;
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            star[x * m + y] = y * m + x;
            names[x * m + y] = "(" + std::to_string(x) + "," + std::to_string(y) + ")";
            if (x == y) id |= bit(x * m + y);
            for (int z = 0; z < m; ++z) tr.push_back({x * m + y, y * m + z, x * m + z});
        }
    return make_frame(n, star, id, tr, "pair" + std::to_string(m), names);
}

inline Frame make_cyclic_group_frame(int m) {
    if (m < 1) throw std::invalid_argument("group frame needs m >= 1");
    if (m > kMaxElements) throw ResourceError("group carrier exceeds word width");
    std::vector<int> star(m);
    std::vector<Triple> tr;
    for (int x = 0; x < m; ++x) {
        star[x] = (m - x) % m;
        for (int y = 0; y < m; ++y) tr.push_back({x, y, (x + y) % m});
    }
    return make_frame(m, star, 1, tr, "Z" + std::to_string(m));
}

namespace detail {

// Builds a frame from a composition table given as rows of result sets.
inline Frame from_table(std::string name, std::vector<std::string> names, std::vector<int> star,
                        const std::vector<std::vector<std::vector<int>>>& rows) {
    int n = int(names.size());
    std::vector<Triple> tr;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z : rows[x][y]) tr.push_back({x, y, z});
    return make_frame(n, std::move(star), 1, tr, std::move(name), std::move(names));
}

}  // namespace detail

inline std::vector<std::string> builtin_frame_names() { return {"k1", "k2", "k3", "k4", "k5"}; }

inline Frame builtin_frame(const std::string& name) {
    if (name == "k1") {
        // 0 a b c
        return detail::from_table("k1", {"0", "a", "b", "c"}, {0, 1, 2, 3},
                                  {{{0}, {1}, {2}, {3}},
                                   {{1}, {0, 1}, {3}, {2}},
                                   {{2}, {3}, {0, 2}, {1}},
                                   {{3}, {2}, {1}, {0, 3}}});
    }
    if (name == "k2") {
        // 0 a b b*
        return detail::from_table("k2", {"0", "a", "b", "b*"}, {0, 1, 3, 2},
                                  {{{0}, {1}, {2}, {3}},
                                   {{1}, {0, 1, 2, 3}, {1, 2}, {1}},
                                   {{2}, {1}, {2}, {0, 1, 2, 3}},
                                   {{3}, {1, 3}, {0, 2, 3}, {3}}});
    }
    if (name == "k3") {
        Frame f = make_cyclic_group_frame(2);
        f.name = "k3";
        f.names = {"0", "a"};
        return f;
    }
    if (name == "k4") {
        // 0 a a*
        return detail::from_table("k4", {"0", "a", "a*"}, {0, 2, 1},
                                  {{{0}, {1}, {2}},
                                   {{1}, {1, 2}, {0, 1, 2}},
                                   {{2}, {0, 1, 2}, {2}}});
    }
    if (name == "k5") {
        // 1' a b c
        return detail::from_table("k5", {"1'", "a", "b", "c"}, {0, 1, 2, 3},
                                  {{{0}, {1}, {2}, {3}},
                                   {{1}, {0, 1, 3}, {2, 3}, {1, 2}},
                                   {{2}, {2, 3}, {0, 1, 2}, {1, 3}},
                                   {{3}, {1, 2}, {1, 3}, {0, 2, 3}}});
    }
    throw std::invalid_argument("unknown builtin frame '" + name + "'");
}

// ---------------------------------------------------------------------------
// Frame conditions.

enum class Condition {
    left_rotation, right_rotation, center_reflection, left_reflection, right_reflection,
    identity, involution, semi_pasch, pasch, dense, comm, symm, p1, p2, p3, p4, p5
};

inline const std::vector<Condition>& all_conditions() {
    static const std::vector<Condition> v = {
        Condition::left_rotation, Condition::right_rotation, Condition::center_reflection,
        Condition::left_reflection, Condition::right_reflection, Condition::identity,
        Condition::involution, Condition::semi_pasch, Condition::pasch, Condition::dense,
        Condition::comm, Condition::symm, Condition::p1, Condition::p2, Condition::p3,
        Condition::p4, Condition::p5};
    return v;
}

inline const char* to_string(Condition c) {
    switch (c) {
    case Condition::left_rotation: return "left-rotation";
    case Condition::right_rotation: return "right-rotation";
    case Condition::center_reflection: return "center-reflection";
    case Condition::left_reflection: return "left-reflection";
    case Condition::right_reflection: return "right-reflection";
    case Condition::identity: return "identity";
    case Condition::involution: return "involution";
    case Condition::semi_pasch: return "semi-pasch";
    case Condition::pasch: return "pasch";
    case Condition::dense: return "dense";
    case Condition::comm: return "comm";
    case Condition::symm: return "symm";
    case Condition::p1: return "p1";
    case Condition::p2: return "p2";
    case Condition::p3: return "p3";
    case Condition::p4: return "p4";
    case Condition::p5: return "p5";
    }
    return "?";
}

inline Condition condition_from_string(const std::string& s) {
    for (Condition c : all_conditions())
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown condition '" + s + "'");
}

namespace detail {

template <class F>
bool all_triples(const Frame& f, F&& pred) {
    for (int x = 0; x < f.n; ++x)
        for (int y = 0; y < f.n; ++y)
            for (Mask zs = f.table[x * f.n + y]; zs; zs &= zs - 1)
                if (!pred(x, y, std::countr_zero(zs))) return false;
    return true;
}

}  // namespace detail

inline bool check_condition(const Frame& f, Condition c) {
    const int n = f.n;
    const auto& s = f.star;
    switch (c) {
    case Condition::left_rotation:
        return detail::all_triples(f, [&](int x, int y, int z) { return f.has(y, s[z], s[x]); });
    case Condition::right_rotation:
        return detail::all_triples(f, [&](int x, int y, int z) { return f.has(s[z], x, s[y]); });
    case Condition::center_reflection:
        return detail::all_triples(f, [&](int x, int y, int z) { return f.has(s[y], s[x], s[z]); });
    case Condition::left_reflection:
        return detail::all_triples(f, [&](int x, int y, int z) { return f.has(s[x], z, y); });
    case Condition::right_reflection:
        return detail::all_triples(f, [&](int x, int y, int z) { return f.has(z, s[y], x); });
    case Condition::identity:
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                bool ex = false;
                for (Mask us = f.identity; us && !ex; us &= us - 1) ex = f.has(x, std::countr_zero(us), y);
                if (ex != (x == y)) return false;
            }
        return true;
    case Condition::involution:
        for (int x = 0; x < n; ++x)
            if (s[s[x]] != x) return false;
        return true;
    case Condition::semi_pasch:
    case Condition::pasch: {
        // col[v*n+z] = {u : Rvuz}
        std::vector<Mask> col(std::size_t(n) * n, 0);
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u)
                for (Mask zs = f.table[v * n + u]; zs; zs &= zs - 1) col[v * n + std::countr_zero(zs)] |= bit(u);
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w)
                for (Mask xs = f.table[v * n + w]; xs; xs &= xs - 1) {
                    int x = std::countr_zero(xs);
                    for (int y = 0; y < n; ++y)
                        for (Mask zs = f.table[x * n + y]; zs; zs &= zs - 1) {
                            Mask us = col[v * n + std::countr_zero(zs)];
                            if (c == Condition::pasch) us &= f.table[w * n + y];
                            if (!us) return false;
                        }
                }
        return true;
    }
    case Condition::dense:
        for (int x = 0; x < n; ++x)
            if (!f.has(x, x, x)) return false;
        return true;
    case Condition::comm:
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (f.table[x * n + y] != f.table[y * n + x]) return false;
        return true;
    case Condition::symm:
        for (int x = 0; x < n; ++x)
            if (s[x] != x) return false;
        return true;
    case Condition::p1:
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (f.has(0, a, b) != (a == b)) return false;
        return true;
    case Condition::p2:
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cc = 0; cc < n; ++cc) {
                    Mask lhs = f.compose(f.table[a * n + b], bit(cc));
                    Mask rhs = f.compose(f.table[a * n + cc], bit(b));
                    if (lhs != rhs) return false;
                }
        return true;
    case Condition::p3:
        return check_condition(f, Condition::dense);
    case Condition::p4:
        return check_condition(f, Condition::involution);
    case Condition::p5:
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cc = 0; cc < n; ++cc)
                    if (f.has(a, b, cc) != f.has(a, s[cc], s[b])) return false;
        return true;
    }
    return false;
}

struct ClassReport {
    bool na = false, sa = false, ra = false, cr = false, kr = false, tr = false;
    std::vector<std::pair<Condition, bool>> conditions;

    bool get(Condition c) const {
        for (auto& [k, v] : conditions)
            if (k == c) return v;
        return false;
    }
};

inline ClassReport classify(const Frame& f) {
    ClassReport r;
    for (Condition c : all_conditions()) r.conditions.emplace_back(c, check_condition(f, c));
    r.na = r.get(Condition::left_reflection) && r.get(Condition::right_reflection) && r.get(Condition::identity);
    r.sa = r.na && r.get(Condition::semi_pasch);
    r.ra = r.na && r.get(Condition::pasch);
    r.cr = f.identity == 1u && r.get(Condition::p1) && r.get(Condition::p2) && r.get(Condition::p3) &&
           r.get(Condition::p4) && r.get(Condition::p5);
    r.kr = r.ra && r.get(Condition::dense) && r.get(Condition::symm) && std::popcount(f.identity) == 1;
    r.tr = r.ra && r.get(Condition::dense) && r.get(Condition::comm);
    return r;
}

// ---------------------------------------------------------------------------
// Isomorphic images.

inline Frame permute_frame(const Frame& f, const std::vector<int>& pi) {
    int n = f.n;
    std::vector<int> star(n);
    std::vector<std::string> names(n);
    Mask id = 0;
    for (int x = 0; x < n; ++x) {
        star[pi[x]] = pi[f.star[x]];
        if ((f.identity >> x) & 1u) id |= bit(pi[x]);
        names[pi[x]] = f.element_name(x);
    }
    std::vector<Triple> tr;
    for (const auto& t : f.triples()) tr.push_back({pi[t[0]], pi[t[1]], pi[t[2]]});
    return make_frame(n, star, id, tr, f.name, names);
}

inline Mask permute_mask(Mask X, const std::vector<int>& pi) {
    Mask out = 0;
    for (Mask xs = X; xs; xs &= xs - 1) out |= bit(pi[std::countr_zero(xs)]);
    return out;
}

// ---------------------------------------------------------------------------
// Cycle closure: the smallest triple set containing t that is closed under the
// rotations, the three reflections and commutation.

inline std::vector<Triple> cycle_closure(const std::vector<int>& star, Triple t) {
    std::vector<Triple> out{t};
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto [x, y, z] = out[i];
        const Triple next[6] = {
            {y, star[z], star[x]}, {star[z], x, star[y]}, {star[y], star[x], star[z]},
            {star[x], z, y},       {z, star[y], x},       {y, x, z}};
        for (const auto& u : next)
            if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Text formats.

inline std::string strip_comment(const std::string& line) {
    auto p = line.find('#');
    std::string s = p == std::string::npos ? line : line.substr(0, p);
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline Frame parse_frame(std::istream& in) {
    std::string name;
    int n = -1;
    std::vector<int> star;
    Mask id = 0;
    bool have_id = false;
    std::vector<Triple> tr;
    bool in_triples = false;
    std::string raw;
    int lineno = 0;
    auto fail = [&](const std::string& m) {
        throw std::invalid_argument("frame file line " + std::to_string(lineno) + ": " + m);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_comment(raw);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "end") break;
        if (in_triples) {
            Triple t{};
            std::istringstream ts(line);
            if (!(ts >> t[0] >> t[1] >> t[2])) fail("bad triple");
            tr.push_back(t);
            continue;
        }
        if (kw == "frame") ls >> name;
        else if (kw == "elements") {
            if (!(ls >> n) || n < 1) fail("bad element count");
        } else if (kw == "star") {
            int v;
            while (ls >> v) star.push_back(v);
        } else if (kw == "identity") {
            int v;
            while (ls >> v) {
                if (v < 0 || v >= kMaxElements) fail("identity element out of range");
                id |= bit(v);
            }
            have_id = true;
        } else if (kw == "triples") in_triples = true;
        else fail("unknown directive '" + kw + "'");
    }
    if (n < 0) fail("missing elements");
    if (star.empty()) {
        star.resize(n);
        for (int i = 0; i < n; ++i) star[i] = i;
    }
    if (!have_id) id = 1;
    return make_frame(n, star, id, tr, name);
}

inline std::string format_frame(const Frame& f) {
    std::ostringstream os;
    os << "frame " << (f.name.empty() ? "unnamed" : f.name) << "\n";
    os << "elements " << f.n << "\n";
    if (!f.names.empty()) {
        os << "# names";
        for (int i = 0; i < f.n; ++i) os << " " << i << "=" << f.element_name(i);
        os << "\n";
    }
    os << "star";
    for (int s : f.star) os << " " << s;
    os << "\nidentity";
    for (int i = 0; i < f.n; ++i)
        if ((f.identity >> i) & 1u) os << " " << i;
    os << "\ntriples\n";
    for (const auto& t : f.triples()) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    os << "end\n";
    return os.str();
}

// Composition table: cell (x,y) lists {x};{y}.
inline std::string format_table(const Frame& f) {
    std::vector<std::string> cells;
    std::size_t w = 1;
    for (int x = 0; x < f.n; ++x) w = std::max(w, f.element_name(x).size());
    for (int x = 0; x < f.n; ++x)
        for (int y = 0; y < f.n; ++y) {
            cells.push_back(f.format_set(f.table[x * f.n + y]));
            w = std::max(w, cells.back().size());
        }
    auto pad = [&](const std::string& s) { return s + std::string(w + 1 - s.size(), ' '); };
    std::ostringstream os;
    os << pad(";");
    for (int y = 0; y < f.n; ++y) os << pad(f.element_name(y));
    os << "\n";
    for (int x = 0; x < f.n; ++x) {
        os << pad(f.element_name(x));
        for (int y = 0; y < f.n; ++y) os << pad(cells[x * f.n + y]);
        os << "\n";
    }
    os << "star:";
    for (int x = 0; x < f.n; ++x) os << " " << f.element_name(x) << "->" << f.element_name(f.star[x]);
    os << "\nidentity: " << f.format_set(f.identity) << "\n";
    return os.str();
}

}  // namespace relframe
