#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "frames.hpp"
#include "syntax.hpp"
#include "validity.hpp"

namespace relframe {

enum class Axiom { R1, R2, R3, R4, R4p, R5, R6, R7, R8, R9, R10, dense, commutative, symmetric, integral };

inline const std::vector<Axiom>& all_axioms() {
    static const std::vector<Axiom> v = {Axiom::R1, Axiom::R2, Axiom::R3, Axiom::R4, Axiom::R4p,
                                         Axiom::R5, Axiom::R6, Axiom::R7, Axiom::R8, Axiom::R9,
                                         Axiom::R10, Axiom::dense, Axiom::commutative, Axiom::symmetric,
                                         Axiom::integral};
    return v;
}

inline const char* to_string(Axiom a) {
    switch (a) {
    case Axiom::R1: return "R1";
    case Axiom::R2: return "R2";
    case Axiom::R3: return "R3";
    case Axiom::R4: return "R4";
    case Axiom::R4p: return "R4'";
    case Axiom::R5: return "R5";
    case Axiom::R6: return "R6";
    case Axiom::R7: return "R7";
    case Axiom::R8: return "R8";
    case Axiom::R9: return "R9";
    case Axiom::R10: return "R10";
    case Axiom::dense: return "dense";
    case Axiom::commutative: return "commutative";
    case Axiom::symmetric: return "symmetric";
    case Axiom::integral: return "integral";
    }
    return "?";
}

inline Axiom axiom_from_string(const std::string& s) {
    for (Axiom a : all_axioms())
        if (s == to_string(a)) return a;
    if (s == "R4p") return Axiom::R4p;
    throw std::invalid_argument("unknown axiom '" + s + "'");
}

struct Equation {
    std::string lhs;
    std::string rhs;
};

// Equations of the relation-algebra axioms; dense is stated as x + x;x = x;x.
inline Equation axiom_equation(Axiom a) {
    switch (a) {
    case Axiom::R1: return {"A + B", "B + A"};
    case Axiom::R2: return {"A + (B + C)", "(A + B) + C"};
    case Axiom::R3: return {"-(-A + -B) + -(-A + B)", "A"};
    case Axiom::R4: return {"A;(B;C)", "(A;B);C"};
    case Axiom::R4p: return {"A;(B;1)", "(A;B);1"};
    case Axiom::R5: return {"(A + B);C", "A;C + B;C"};
    case Axiom::R6: return {"A;1'", "A"};
    case Axiom::R7: return {"A^^", "A"};
    case Axiom::R8: return {"(A + B)^", "A^ + B^"};
    case Axiom::R9: return {"(A;B)^", "B^;A^"};
    case Axiom::R10: return {"A^;-(A;B) + -B", "-B"};
    case Axiom::dense: return {"A + A;A", "A;A"};
    case Axiom::commutative: return {"A;B", "B;A"};
    case Axiom::symmetric: return {"A^", "A"};
    case Axiom::integral: break;
    }
    throw std::invalid_argument("integral is not an equation");
}

// True iff lhs = rhs under every assignment of subsets of the carrier.
inline bool equation_holds(const Frame& f, const Term& lhs, const Term& rhs, int bit_budget = 30) {
    auto vars = variables_in_order(join(lhs, rhs));
    const int m = int(vars.size());
    if (f.n * m > bit_budget) throw ResourceError("equation check exceeds bit budget");
    Program pl(f, lhs, vars), pr(f, rhs, vars);
    auto sl = pl.make_state(), sr = pr.make_state();
    const std::uint64_t total = std::uint64_t{1} << (f.n * m);
    const Mask vm = f.all();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        for (int k = 0; k < m; ++k) sl.env[k] = sr.env[k] = Mask((idx >> (f.n * (m - 1 - k))) & vm);
        pl.run_from(sl, 0);
        pr.run_from(sr, 0);
        if (pl.result(sl) != pr.result(sr)) return false;
    }
    return true;
}

inline bool check_axiom(const Frame& f, Axiom a, int bit_budget = 30) {
    if (a == Axiom::integral) {
        if (f.n == 0) return false;
        Frame g = f;
        g.accelerate();
        const std::uint64_t total = std::uint64_t{1} << f.n;
        for (std::uint64_t X = 1; X < total; ++X)
            for (std::uint64_t Y = 1; Y < total; ++Y)
                if (g.compose(Mask(X), Mask(Y)) == 0) return false;
        return true;
    }
    Equation e = axiom_equation(a);
    return equation_holds(f, parse_predicate(e.lhs), parse_predicate(e.rhs), bit_budget);
}

struct Properties {
    bool dense = false, commutative = false, symmetric = false, integral = false;
};

inline Properties properties(const Frame& f) {
    return {check_axiom(f, Axiom::dense), check_axiom(f, Axiom::commutative), check_axiom(f, Axiom::symmetric),
            check_axiom(f, Axiom::integral)};
}

// ---------------------------------------------------------------------------
// Relational bases.

constexpr int kMaxBasisDim = 6;

struct BasisMatrix {
    int d = 0;
    std::array<std::uint8_t, kMaxBasisDim * kMaxBasisDim> x{};

    int at(int i, int j) const { return x[i * kMaxBasisDim + j]; }
    void set(int i, int j, int v) { x[i * kMaxBasisDim + j] = std::uint8_t(v); }
};

struct BasisResult {
    bool exists = false;
    std::size_t initial = 0;                 // matrices satisfying condition (1)
    std::vector<std::size_t> rounds;         // survivors after each deletion round
    std::vector<BasisMatrix> basis;          // surviving fixpoint
    std::vector<int> uncovered;              // atoms missing at position (0,1)
};

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::vector<BasisMatrix> basis_candidates(const Frame& f, int d) {
    std::vector<BasisMatrix> out;
    std::vector<std::pair<int, int>> cells;
    for (int k = 1; k < d; ++k)
        for (int i = 0; i < k; ++i) cells.push_back({i, k});
    std::vector<int> ids;
    for (int e = 0; e < f.n; ++e)
        if ((f.identity >> e) & 1u) ids.push_back(e);
    BasisMatrix m;
    m.d = d;
    // Checks every triangle (i,j,k) whose cells are all assigned; assigned(i,j)
    // holds for the diagonal and for cells up to position `upto`.
    std::vector<std::vector<int>> pos(d, std::vector<int>(d, -1));
    for (std::size_t c = 0; c < cells.size(); ++c) {
        pos[cells[c].first][cells[c].second] = int(c);
        pos[cells[c].second][cells[c].first] = int(c);
    }
    auto assigned = [&](int i, int j, int upto) { return i == j || pos[i][j] <= upto; };
    auto ok_triangles = [&](int upto, int a, int b) {
        for (int t = 0; t < d; ++t) {
            const int trip[3][3] = {{a, b, t}, {a, t, b}, {t, a, b}};
            for (auto& tri : trip) {
                int i = tri[0], j = tri[1], k = tri[2];
                // Every ordered triangle mentioning the new cell in any of its three positions.
                const int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
                for (auto& p : perms) {
                    int u = p[0], v = p[1], w = p[2];
                    if (!assigned(u, v, upto) || !assigned(v, w, upto) || !assigned(u, w, upto)) continue;
                    if (!f.has(m.at(u, v), m.at(v, w), m.at(u, w))) return false;
                }
            }
        }
        return true;
    };
    auto fill = [&](auto&& self, std::size_t c) -> void {
        if (c == cells.size()) {
            out.push_back(m);
            return;
        }
        auto [a, b] = cells[c];
        for (int v = 0; v < f.n; ++v) {
            m.set(a, b, v);
            m.set(b, a, f.star[v]);
            if (ok_triangles(int(c), a, b)) self(self, c + 1);
        }
    };
    auto diag = [&](auto&& self, int i) -> void {
        if (i == d) {
            bool ok = true;
            for (int u = 0; u < d && ok; ++u) ok = f.has(m.at(u, u), m.at(u, u), m.at(u, u));
            if (ok) fill(fill, 0);
            return;
        }
        for (int e : ids) {
            m.set(i, i, e);
            self(self, i + 1);
        }
    };
    diag(diag, 0);
    return out;
}

inline BasisResult relational_basis_exists(const Frame& f, int d, bool require_sa = true) {
    if (d < 3 || d > kMaxBasisDim) throw std::invalid_argument("basis dimension must be in 3..6");
    if (require_sa && !classify(f).sa) throw PreconditionError("frame is not an SA-frame");
    BasisResult res;
    std::vector<BasisMatrix> cand = basis_candidates(f, d);
    res.initial = cand.size();
    const int n = f.n;
    // pre[z] lists pairs (a,b) with z in a;b.
    std::vector<std::vector<std::pair<int, int>>> pre(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (Mask zs = f.table[a * n + b]; zs; zs &= zs - 1) pre[std::countr_zero(zs)].push_back({a, b});
    std::vector<char> alive(cand.size(), 1);
    std::size_t live = cand.size();
    auto slot = [&](int i, int j, int a, int b) { return ((std::size_t(i) * d + j) * n + a) * n + b; };
    bool changed = true;
    while (changed && live > 0) {
        changed = false;
        for (int k = 0; k < d; ++k) {
            std::unordered_map<std::string, std::vector<std::size_t>> groups;
            for (std::size_t c = 0; c < cand.size(); ++c) {
                if (!alive[c]) continue;
                std::string key;
                for (int l = 0; l < d; ++l)
                    for (int mm = 0; mm < d; ++mm)
                        if (l != k && mm != k) key.push_back(char(cand[c].at(l, mm)));
                groups[key].push_back(c);
            }
            for (auto& [key, members] : groups) {
                std::vector<char> avail(std::size_t(d) * d * n * n, 0);
                for (std::size_t c : members)
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j)
                            if (i != k && j != k) avail[slot(i, j, cand[c].at(i, k), cand[c].at(k, j))] = 1;
                for (std::size_t c : members) {
                    bool ok = true;
                    for (int i = 0; i < d && ok; ++i)
                        for (int j = 0; j < d && ok; ++j) {
                            if (i == k || j == k) continue;
                            for (auto [a, b] : pre[cand[c].at(i, j)])
                                if (!avail[slot(i, j, a, b)]) { ok = false; break; }
                        }
                    if (!ok) {
                        alive[c] = 0;
                        --live;
                        changed = true;
                    }
                }
            }
        }
        res.rounds.push_back(live);
    }
    for (std::size_t c = 0; c < cand.size(); ++c)
        if (alive[c]) res.basis.push_back(cand[c]);
    Mask covered = 0;
    for (const auto& m : res.basis) covered |= bit(m.at(0, 1));
    for (int a = 0; a < n; ++a)
        if (!((covered >> a) & 1u)) res.uncovered.push_back(a);
    res.exists = !res.basis.empty() && res.uncovered.empty();
    return res;
}

// ---------------------------------------------------------------------------
// Diamond property D(t).

inline bool cycle_in(const Frame& f, int x, int y, int z) {
    for (const auto& t : cycle_closure(f.star, {x, y, z}))
        if (!f.has(t[0], t[1], t[2])) return false;
    return true;
}

inline bool diamond(const Frame& f, int t) {
    if (t < 1) throw std::invalid_argument("diamond needs t >= 1");
    std::vector<int> nz;
    for (int e = 0; e < f.n; ++e)
        if (!((f.identity >> e) & 1u)) nz.push_back(e);
    if (nz.empty()) return false;
    const int q = int(nz.size());
    // ok[x][y] = set of nonzero z with C(x,y,z) inside R.
    std::vector<Mask> ok(std::size_t(f.n) * f.n, 0);
    for (int x : nz)
        for (int y : nz)
            for (int z : nz)
                if (cycle_in(f, x, y, z)) ok[x * f.n + y] |= bit(z);
    std::vector<int> idx(2 * t, 0);
    for (;;) {
        Mask common = ~Mask{0};
        for (int i = 0; i < t; ++i) common &= ok[nz[idx[2 * i]] * f.n + nz[idx[2 * i + 1]]];
        if (common == 0) return false;
        int k = 2 * t - 1;
        while (k >= 0 && ++idx[k] == q) idx[k--] = 0;
        if (k < 0) return true;
    }
}

}  // namespace relframe
