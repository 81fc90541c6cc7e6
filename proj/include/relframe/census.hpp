#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "frames.hpp"

namespace relframe {

struct Skeleton {
    int n = 1;
    int s = 1;
    std::vector<int> star;
};

// Elements 1..s-1 are fixed by the star; the rest are paired consecutively.
inline Skeleton make_skeleton(int n, int s) {
    if (n < 1 || s < 1 || s > n) throw std::invalid_argument("skeleton needs 1 <= s <= n");
    if ((n - s) % 2 != 0) throw std::invalid_argument("skeleton needs n - s even");
    if (n > kMaxElements) throw ResourceError("skeleton exceeds word width");
    Skeleton sk{n, s, std::vector<int>(n)};
    for (int x = 0; x < s; ++x) sk.star[x] = x;
    for (int x = s; x < n; x += 2) {
        sk.star[x] = x + 1;
        sk.star[x + 1] = x;
    }
    return sk;
}

inline std::vector<std::pair<int, int>> valid_skeleton_shapes(int n) {
    std::vector<std::pair<int, int>> out;
    for (int s = n; s >= 1; --s)
        if ((n - s) % 2 == 0) out.push_back({n, s});
    return out;
}

inline std::vector<Triple> base_triples(const Skeleton& sk) {
    std::set<Triple> r{{0, 0, 0}};
    for (int x = 0; x < sk.n; ++x) {
        int sx = sk.star[x];
        r.insert({0, x, x});
        r.insert({x, sx, 0});
        r.insert({sx, 0, sx});
        r.insert({x, 0, x});
        r.insert({sx, x, 0});
        r.insert({0, sx, sx});
    }
    return {r.begin(), r.end()};
}

struct Cycle {
    std::vector<Triple> triples;
    int type = 0;
};

namespace detail {

inline int cycle_type(const Skeleton& sk, const std::vector<Triple>& tr) {
    auto sym = [&](int x) { return sk.star[x] == x; };
    const Triple& t = tr.front();
    int nsym = int(sym(t[0])) + int(sym(t[1])) + int(sym(t[2]));
    auto pair_id = [&](int x) { return std::min(x, sk.star[x]); };
    if (nsym == 3) {
        std::set<int> d(t.begin(), t.end());
        return int(d.size());  // 1, 2 or 3
    }
    if (nsym == 2) {
        std::vector<int> a;
        for (int c : t)
            if (sym(c)) a.push_back(c);
        return a[0] == a[1] ? 6 : 7;
    }
    if (nsym == 1) {
        std::vector<int> p;
        for (int c : t)
            if (!sym(c)) p.push_back(c);
        if (pair_id(p[0]) != pair_id(p[1])) return 8;
        for (const auto& u : tr)
            if (sym(u[0]) && u[1] == u[2]) return 4;
        return 5;
    }
    std::set<int> pairs{pair_id(t[0]), pair_id(t[1]), pair_id(t[2])};
    if (pairs.size() == 1) {
        for (const auto& u : tr)
            if (u[0] == u[1] && u[1] == u[2]) return 9;
        return 10;
    }
    if (pairs.size() == 2) return tr.size() == 6 ? 11 : 12;
    return 13;
}

}  // namespace detail

// Orbits of the all-nonzero triples under the given closure.
inline std::vector<std::vector<Triple>> triple_orbits(int n, const std::function<std::vector<Triple>(Triple)>& close) {
    std::vector<std::vector<Triple>> out;
    std::vector<char> seen(std::size_t(n) * n * n, 0);
    for (int x = 1; x < n; ++x)
        for (int y = 1; y < n; ++y)
            for (int z = 1; z < n; ++z) {
                if (seen[(x * n + y) * n + z]) continue;
                auto orb = close({x, y, z});
                for (const auto& t : orb) seen[(t[0] * n + t[1]) * n + t[2]] = 1;
                out.push_back(std::move(orb));
            }
    return out;
}

inline std::vector<Cycle> cycles(const Skeleton& sk) {
    std::vector<Cycle> out;
    for (auto& orb : triple_orbits(sk.n, [&](Triple t) { return cycle_closure(sk.star, t); })) {
        Cycle c;
        c.type = detail::cycle_type(sk, orb);
        c.triples = std::move(orb);
        out.push_back(std::move(c));
    }
    return out;
}

// Per-type cycle counts from the closed forms.
inline std::vector<long long> cycle_type_counts(int n, int s) {
    long long a = s - 1, b = n - s;
    return {0,
            a,
            a * (a - 1),
            a * (a - 1) * (a - 2) / 6,
            a * b / 2,
            a * b / 2,
            a * b / 2,
            a * (a - 1) * b / 4,
            a * b * (b - 2) / 4,
            b / 2,
            b / 2,
            b * (b - 2) / 2,
            b * (b - 2) / 4,
            b * (b - 2) * (b - 4) / 12};
}

inline std::vector<int> cycle_type_sizes() { return {0, 1, 3, 6, 6, 6, 6, 12, 12, 6, 2, 6, 12, 12}; }

struct CountFormulas {
    long long F = 0, G = 0, P = 0;
};

inline CountFormulas count_formulas(int n, int s) {
    if (s < 1 || s > n || (n - s) % 2 != 0) throw std::invalid_argument("count formulas need 1 <= s <= n, n - s even");
    long long N = n, S = s, d = n - s;
    CountFormulas c;
    c.F = (S - 1) * S * (S + 1) / 6 + d * (d + 1) * (d + 2) / 12 + (S - 1) * d * (N + 2) / 4;
    c.G = (S - 1) * (S - 2) * (S + 3) / 6 + d * (d - 1) * (d + 4) / 12 + (S - 1) * d * (N + 2) / 4;
    long long p = 1;
    for (long long i = 2; i <= S - 1; ++i) p *= i;
    for (long long i = 2; i <= d / 2; ++i) p *= i;
    p <<= (d / 2);
    c.P = p;
    return c;
}

// Permutations fixing 0 with pi∘from_star = to_star∘pi.
inline std::vector<std::vector<int>> star_isomorphisms(const std::vector<int>& from_star, const std::vector<int>& to_star) {
    const int n = int(from_star.size());
    std::vector<std::vector<int>> out;
    if (int(to_star.size()) != n || from_star[0] != 0 || to_star[0] != 0) return out;
    std::vector<int> pi(n, -1), inv(n, -1);
    pi[0] = inv[0] = 0;
    auto rec = [&](auto&& self, int x) -> void {
        while (x < n && pi[x] >= 0) ++x;
        if (x == n) {
            out.push_back(pi);
            return;
        }
        for (int y = 1; y < n; ++y) {
            if (inv[y] >= 0) continue;
            int sx = from_star[x], sy = to_star[y];
            bool fx = sx == x, fy = sy == y;
            if (fx != fy) continue;
            if (!fx && inv[sy] >= 0) continue;
            pi[x] = y;
            inv[y] = x;
            if (!fx) {
                pi[sx] = sy;
                inv[sy] = sx;
            }
            self(self, x + 1);
            pi[x] = inv[y] = -1;
            if (!fx) pi[sx] = inv[sy] = -1;
        }
    };
    rec(rec, 1);
    return out;
}

inline std::uint64_t brute_force_automorphisms(const Skeleton& sk) {
    std::vector<int> p(sk.n);
    for (int i = 0; i < sk.n; ++i) p[i] = i;
    std::uint64_t count = 0;
    do {
        if (p[0] != 0) continue;
        bool ok = true;
        for (int x = 0; x < sk.n && ok; ++x) ok = p[sk.star[x]] == sk.star[p[x]];
        if (ok) ++count;
    } while (std::next_permutation(p.begin(), p.end()));
    return count;
}

inline Frame frame_from_cycles(const Skeleton& sk, const std::vector<Cycle>& cs, std::uint64_t mask,
                               std::string name = {}) {
    std::vector<Triple> tr = base_triples(sk);
    for (std::size_t i = 0; i < cs.size(); ++i)
        if ((mask >> i) & 1u) tr.insert(tr.end(), cs[i].triples.begin(), cs[i].triples.end());
    return make_frame(sk.n, sk.star, 1, tr, std::move(name));
}

// Canonical key: minimal triple-cube encoding over star-respecting relabelings
// onto the normalized skeleton star.
inline std::string canonical_form(const Frame& f) {
    if (f.identity != 1u) throw std::invalid_argument("canonical_form needs identity set {0}");
    if (f.star[0] != 0) throw std::invalid_argument("canonical_form needs star(0) = 0");
    int s = 0;
    for (int x = 0; x < f.n; ++x) s += f.star[x] == x;
    Skeleton target = make_skeleton(f.n, s);
    auto perms = star_isomorphisms(f.star, target.star);
    const int n = f.n;
    auto tr = f.triples();
    std::string best;
    for (const auto& pi : perms) {
        std::string key(std::size_t(n) * n * n, '0');
        for (const auto& t : tr) key[(std::size_t(pi[t[0]]) * n + pi[t[1]]) * n + pi[t[2]]] = '1';
        if (best.empty() || key < best) best = key;
    }
    return std::to_string(n) + ":" + std::to_string(s) + ":" + best;
}

// ---------------------------------------------------------------------------
// Enumeration over cycle subsets.

struct EnumFilters {
    bool dense = false;
    bool pasch = false;
};

class CycleSpace {
public:
    explicit CycleSpace(Skeleton sk) : sk_(std::move(sk)), cycles_(cycles(sk_)) {
        if (cycles_.size() > 63) return;
        const int n = sk_.n;
        where_.assign(std::size_t(n) * n * n, -1);
        for (std::size_t i = 0; i < cycles_.size(); ++i)
            for (const auto& t : cycles_[i].triples) where_[(t[0] * n + t[1]) * n + t[2]] = int(i);
        for (const auto& pi : star_isomorphisms(sk_.star, sk_.star)) {
            std::vector<int> cp(cycles_.size());
            for (std::size_t i = 0; i < cycles_.size(); ++i) {
                const auto& t = cycles_[i].triples.front();
                cp[i] = where_[(pi[t[0]] * n + pi[t[1]]) * n + pi[t[2]]];
            }
            cycle_perms_.push_back(std::move(cp));
        }
    }

    const Skeleton& skeleton() const { return sk_; }
    const std::vector<Cycle>& all_cycles() const { return cycles_; }
    std::size_t automorphism_count() const { return cycle_perms_.size(); }

    bool fits_mask() const { return cycles_.size() <= 63; }

    std::uint64_t forced_mask(bool dense) const {
        require_mask();
        std::uint64_t m = 0;
        if (dense)
            for (std::size_t i = 0; i < cycles_.size(); ++i)
                if (cycles_[i].type == 1 || cycles_[i].type == 9) m |= std::uint64_t{1} << i;
        return m;
    }

    bool forced(std::size_t i, bool dense) const { return dense && (cycles_[i].type == 1 || cycles_[i].type == 9); }

    std::vector<int> free_cycles(bool dense) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < cycles_.size(); ++i)
            if (!forced(i, dense)) out.push_back(int(i));
        return out;
    }

    Frame frame(std::uint64_t mask) const { return frame_from_cycles(sk_, cycles_, mask); }

    std::uint64_t canonical_mask(std::uint64_t mask) const {
        require_mask();
        std::uint64_t best = ~std::uint64_t{0};
        for (const auto& cp : cycle_perms_) {
            std::uint64_t img = 0;
            for (std::uint64_t m = mask; m; m &= m - 1) img |= std::uint64_t{1} << cp[std::countr_zero(m)];
            best = std::min(best, img);
        }
        return best;
    }

    // Calls fn(mask) for every admissible cycle subset passing the filters.
    void enumerate(const EnumFilters& flt, const std::function<void(std::uint64_t)>& fn,
                   int budget_bits = 24) const {
        auto freec = free_cycles(flt.dense);
        if (int(freec.size()) > budget_bits) throw ResourceError("enumeration exceeds budget");
        const std::uint64_t forced = forced_mask(flt.dense);
        const std::uint64_t total = std::uint64_t{1} << freec.size();
        for (std::uint64_t sub = 0; sub < total; ++sub) {
            std::uint64_t mask = forced;
            for (std::uint64_t m = sub; m; m &= m - 1) mask |= std::uint64_t{1} << freec[std::countr_zero(m)];
            if (flt.pasch && !check_condition(frame(mask), Condition::pasch)) continue;
            fn(mask);
        }
    }

    Frame sample(bool dense, std::uint64_t seed) const {
        std::mt19937_64 rng(seed);
        std::vector<Triple> tr = base_triples(sk_);
        for (std::size_t i = 0; i < cycles_.size(); ++i) {
            bool take = forced(i, dense) || (rng() & 1u);
            if (take) tr.insert(tr.end(), cycles_[i].triples.begin(), cycles_[i].triples.end());
        }
        return make_frame(sk_.n, sk_.star, 1, tr);
    }

private:
    void require_mask() const {
        if (!fits_mask()) throw ResourceError("too many cycles for a 64-bit subset mask");
    }

    Skeleton sk_;
    std::vector<Cycle> cycles_;
    std::vector<int> where_;
    std::vector<std::vector<int>> cycle_perms_;
};

inline void enumerate_frames(const Skeleton& sk, const EnumFilters& flt, const std::function<void(const Frame&)>& fn) {
    CycleSpace space(sk);
    space.enumerate(flt, [&](std::uint64_t m) { fn(space.frame(m)); });
}

inline Frame sample_random(const Skeleton& sk, bool dense, std::uint64_t seed) {
    return CycleSpace(sk).sample(dense, seed);
}

// ---------------------------------------------------------------------------
// Censuses.

enum class CensusClass { comm_na, sym_na, dense_comm_na, dense_sym_na, kr, tr };

inline const char* to_string(CensusClass c) {
    switch (c) {
    case CensusClass::comm_na: return "comm-na";
    case CensusClass::sym_na: return "sym-na";
    case CensusClass::dense_comm_na: return "dense-comm-na";
    case CensusClass::dense_sym_na: return "dense-sym-na";
    case CensusClass::kr: return "kr";
    case CensusClass::tr: return "tr";
    }
    return "?";
}

inline CensusClass census_class_from_string(const std::string& s) {
    for (CensusClass c : {CensusClass::comm_na, CensusClass::sym_na, CensusClass::dense_comm_na,
                          CensusClass::dense_sym_na, CensusClass::kr, CensusClass::tr})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown census class '" + s + "'");
}

struct CensusRow {
    int s = 0;
    std::uint64_t labeled = 0;
    std::uint64_t iso = 0;
};

struct CountReport {
    int n = 0;
    CensusClass cls = CensusClass::kr;
    std::uint64_t labeled_count = 0;
    std::uint64_t iso_class_count = 0;
    std::vector<CensusRow> per_s;
    std::vector<Frame> representatives;  // one frame per isomorphism class
};

inline bool census_symmetric_only(CensusClass c) {
    return c == CensusClass::sym_na || c == CensusClass::dense_sym_na || c == CensusClass::kr;
}

inline EnumFilters census_filters(CensusClass c) {
    EnumFilters f;
    f.dense = c == CensusClass::dense_comm_na || c == CensusClass::dense_sym_na || c == CensusClass::kr ||
              c == CensusClass::tr;
    f.pasch = c == CensusClass::kr || c == CensusClass::tr;
    return f;
}

inline CountReport census(int n, CensusClass cls, bool keep_representatives = false, int budget_bits = 24) {
    CountReport rep;
    rep.n = n;
    rep.cls = cls;
    for (auto [nn, s] : valid_skeleton_shapes(n)) {
        if (census_symmetric_only(cls) && s != n) continue;
        CycleSpace space(make_skeleton(n, s));
        CensusRow row;
        row.s = s;
        std::map<std::uint64_t, std::uint64_t> classes;
        space.enumerate(
            census_filters(cls),
            [&](std::uint64_t m) {
                ++row.labeled;
                std::uint64_t c = space.canonical_mask(m);
                classes.emplace(c, c);
            },
            budget_bits);
        row.iso = classes.size();
        if (keep_representatives) {
            int k = 0;
            for (auto& [c, m] : classes) {
                Frame f = space.frame(m);
                f.name = std::string(to_string(cls)) + "-" + std::to_string(n) + "-s" + std::to_string(s) + "-" +
                         std::to_string(k++);
                rep.representatives.push_back(std::move(f));
            }
        }
        rep.labeled_count += row.labeled;
        rep.iso_class_count += row.iso;
        rep.per_s.push_back(row);
    }
    return rep;
}

}  // namespace relframe
