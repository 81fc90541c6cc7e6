#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "frames.hpp"
#include "syntax.hpp"

namespace relframe {

using Assignment = std::map<std::string, Mask>;

struct MissingAssignment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Mask eval(const Frame& f, const Assignment& h, const Term& p) {
    switch (p->op) {
    case Op::Atom: {
        auto it = h.find(p->name);
        if (it == h.end()) throw MissingAssignment("no value for atom '" + p->name + "'");
        return it->second & f.all();
    }
    case Op::Identity: case Op::Truth: return f.identity;
    case Op::Diversity: return f.complement(f.identity);
    case Op::Zero: return 0;
    case Op::One: return f.all();
    case Op::Join: case Op::Or: return eval(f, h, p->l) | eval(f, h, p->r);
    case Op::Meet: case Op::And: return eval(f, h, p->l) & eval(f, h, p->r);
    case Op::Complement: case Op::BoolNeg: return f.complement(eval(f, h, p->l));
    case Op::Converse: case Op::Star: return f.converse(eval(f, h, p->l));
    case Op::DeMorganNeg: return f.complement(f.converse(eval(f, h, p->l)));
    case Op::RelProd: return f.compose(eval(f, h, p->l), eval(f, h, p->r));
    case Op::Fusion: return f.compose(eval(f, h, p->r), eval(f, h, p->l));
    case Op::Dagger:
        return f.complement(f.compose(f.complement(eval(f, h, p->l)), f.complement(eval(f, h, p->r))));
    case Op::Implies:
        return f.complement(f.compose(f.converse(eval(f, h, p->l)), f.complement(eval(f, h, p->r))));
    }
    return 0;
}

inline bool holds(const Frame& f, const Assignment& h, const Term& p) {
    return (eval(f, h, p) & f.identity) == f.identity;
}

// ---------------------------------------------------------------------------
// Compiled evaluation with incremental recomputation.

class Program {
public:
    enum Code : std::uint8_t { Var, Const, Join, Meet, Comp, Rel, Conv };
    struct Ins {
        Code code;
        int a = -1, b = -1;
        int level = -1;
        Mask constant = 0;
    };

    Program(const Frame& f, const Term& p, std::vector<std::string> vars = {}) : frame_(f) {
        frame_.accelerate();
        vars_ = vars.empty() ? variables_in_order(p) : std::move(vars);
        std::vector<Ins> raw;
        std::map<std::tuple<int, int, int, Mask>, int> cse;
        auto add = [&](Ins ins) {
            auto key = std::make_tuple(int(ins.code), ins.a, ins.b, ins.constant);
            auto it = cse.find(key);
            if (it != cse.end()) return it->second;
            if (ins.code == Var) ins.level = ins.a;
            else if (ins.code == Const) ins.level = -1;
            else ins.level = std::max(raw[ins.a].level, ins.b >= 0 ? raw[ins.b].level : -1);
            raw.push_back(ins);
            cse[key] = int(raw.size()) - 1;
            return int(raw.size()) - 1;
        };
        const Mask all = frame_.all();
        auto cst = [&](Mask m) { return add({Const, -1, -1, -1, m}); };
        auto comp = [&](int x) { return add({Comp, x}); };
        auto conv = [&](int x) { return add({Conv, x}); };
        auto rel = [&](int x, int y) { return add({Rel, x, y}); };
        auto build = [&](auto&& self, const Term& t) -> int {
            switch (t->op) {
            case Op::Atom: {
                auto it = std::find(vars_.begin(), vars_.end(), t->name);
                if (it == vars_.end()) throw MissingAssignment("no variable slot for atom '" + t->name + "'");
                return add({Var, int(it - vars_.begin())});
            }
            case Op::Identity: case Op::Truth: return cst(frame_.identity);
            case Op::Diversity: return cst(~frame_.identity & all);
            case Op::Zero: return cst(0);
            case Op::One: return cst(all);
            case Op::Join: case Op::Or: {
                int x = self(self, t->l), y = self(self, t->r);
                return add({Join, std::min(x, y), std::max(x, y)});
            }
            case Op::Meet: case Op::And: {
                int x = self(self, t->l), y = self(self, t->r);
                return add({Meet, std::min(x, y), std::max(x, y)});
            }
            case Op::Complement: case Op::BoolNeg: return comp(self(self, t->l));
            case Op::Converse: case Op::Star: return conv(self(self, t->l));
            case Op::DeMorganNeg: return comp(conv(self(self, t->l)));
            case Op::RelProd: { int x = self(self, t->l); return rel(x, self(self, t->r)); }
            case Op::Fusion: { int x = self(self, t->l); return rel(self(self, t->r), x); }
            case Op::Dagger: {
                int x = self(self, t->l), y = self(self, t->r);
                return comp(rel(comp(x), comp(y)));
            }
            case Op::Implies: {
                int x = self(self, t->l), y = self(self, t->r);
                return comp(rel(conv(x), comp(y)));
            }
            }
            return -1;
        };
        int res = build(build, p);
        // Stable sort by level keeps arguments ahead of their users.
        std::vector<int> order(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) order[i] = int(i);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return raw[x].level < raw[y].level; });
        std::vector<int> where(raw.size());
        for (std::size_t i = 0; i < order.size(); ++i) where[order[i]] = int(i);
        for (int idx : order) {
            Ins ins = raw[idx];
            if (ins.code != Var && ins.code != Const) {
                ins.a = where[ins.a];
                if (ins.b >= 0) ins.b = where[ins.b];
            }
            code_.push_back(ins);
        }
        result_ = where[res];
        int m = int(vars_.size());
        start_.assign(m + 1, int(code_.size()));
        for (int k = m - 1; k >= 0; --k) {
            int s = start_[k + 1];
            while (s > 0 && code_[s - 1].level >= k) --s;
            start_[k] = s;
        }
        first_nonconst_ = 0;
        while (first_nonconst_ < int(code_.size()) && code_[first_nonconst_].level < 0) ++first_nonconst_;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    const Frame& frame() const { return frame_; }
    std::size_t size() const { return code_.size(); }

    struct State {
        std::vector<Mask> vals;
        std::vector<Mask> env;
    };

    State make_state() const {
        State s;
        s.vals.assign(code_.size(), 0);
        s.env.assign(vars_.size(), 0);
        for (int i = 0; i < first_nonconst_; ++i) step(s, i);
        return s;
    }

    void step(State& s, int i) const {
        const Ins& ins = code_[i];
        Mask* v = s.vals.data();
        switch (ins.code) {
        case Var: v[i] = s.env[ins.a]; break;
        case Const: v[i] = ins.constant; break;
        case Join: v[i] = v[ins.a] | v[ins.b]; break;
        case Meet: v[i] = v[ins.a] & v[ins.b]; break;
        case Comp: v[i] = ~v[ins.a] & frame_.all(); break;
        case Rel: v[i] = frame_.compose(v[ins.a], v[ins.b]); break;
        case Conv: v[i] = frame_.converse(v[ins.a]); break;
        }
    }

    // Recomputes every instruction depending on variables with index >= k.
    void run_from(State& s, int k) const {
        const int end = int(code_.size());
        for (int i = std::max(start_[k], first_nonconst_); i < end; ++i) step(s, i);
    }

    Mask evaluate(const std::vector<Mask>& env) const {
        State s = make_state();
        s.env = env;
        run_from(s, 0);
        return s.vals[result_];
    }

    Mask result(const State& s) const { return s.vals[result_]; }

    bool holds_at(const State& s) const {
        return (s.vals[result_] & frame_.identity) == frame_.identity;
    }

    // Sweeps assignment indices [lo, hi); each variable takes n bits, the last
    // variable varies fastest. Returns the first failing index or nullopt.
    std::optional<std::uint64_t> sweep(std::uint64_t lo, std::uint64_t hi,
                                       const std::atomic<bool>* cancel = nullptr) const {
        const int n = frame_.n;
        const int m = int(vars_.size());
        if (lo >= hi) return std::nullopt;
        State s = make_state();
        const Mask vm = full_mask(n);
        auto load = [&](std::uint64_t idx) {
            for (int k = 0; k < m; ++k) s.env[k] = Mask((idx >> (n * (m - 1 - k))) & vm);
        };
        load(lo);
        run_from(s, 0);
        if (!holds_at(s)) return lo;
        const Mask id = frame_.identity;
        const Mask* res = &s.vals[result_];
        for (std::uint64_t idx = lo + 1; idx < hi; ++idx) {
            std::uint64_t diff = idx ^ (idx - 1);
            int top = 63 - std::countl_zero(diff);
            int k = m - 1 - top / n;
            for (int j = k; j < m; ++j) s.env[j] = Mask((idx >> (n * (m - 1 - j))) & vm);
            run_from(s, k);
            if ((*res & id) != id) return idx;
            if (cancel && (idx & 0xFFFF) == 0 && cancel->load(std::memory_order_relaxed)) return std::nullopt;
        }
        return std::nullopt;
    }

    Assignment decode(std::uint64_t idx) const {
        Assignment h;
        const int n = frame_.n;
        const int m = int(vars_.size());
        for (int k = 0; k < m; ++k) h[vars_[k]] = Mask((idx >> (n * (m - 1 - k))) & full_mask(n));
        return h;
    }

private:
    Frame frame_;
    std::vector<std::string> vars_;
    std::vector<Ins> code_;
    std::vector<int> start_;
    int result_ = 0;
    int first_nonconst_ = 0;
};

// ---------------------------------------------------------------------------
// Verdicts.

enum class VerdictKind { Valid, Invalid, BudgetExceeded };

struct ValidityVerdict {
    VerdictKind kind = VerdictKind::Valid;
    Assignment witness;
    std::uint64_t checked = 0;

    bool valid() const { return kind == VerdictKind::Valid; }
    bool invalid() const { return kind == VerdictKind::Invalid; }
};

inline const char* to_string(VerdictKind k) {
    switch (k) {
    case VerdictKind::Valid: return "VALID";
    case VerdictKind::Invalid: return "INVALID";
    case VerdictKind::BudgetExceeded: return "BUDGET";
    }
    return "?";
}

inline std::string format_assignment(const Frame& f, const Assignment& h) {
    std::string s;
    for (const auto& [k, v] : h) {
        if (!s.empty()) s += ' ';
        s += k + "=" + f.format_set(v);
    }
    return s;
}

inline unsigned default_jobs() {
    unsigned j = std::thread::hardware_concurrency();
    return j == 0 ? 1 : j;
}

struct SweepOptions {
    int bit_budget = 30;
    unsigned jobs = 0;
    // Chunks already known to hold everywhere (resume support).
    std::function<bool(std::uint64_t)> chunk_done;
    // Called after a chunk completes with no failure.
    std::function<void(std::uint64_t)> on_chunk;
    int chunk_bits = 0;  // 0 picks a default
};

inline ValidityVerdict decide_valid(const Program& prog, const SweepOptions& opt = {}) {
    ValidityVerdict v;
    const int n = prog.frame().n;
    const int m = int(prog.vars().size());
    if (n * m > opt.bit_budget || n * m > 62) {
        v.kind = VerdictKind::BudgetExceeded;
        return v;
    }
    const std::uint64_t total = std::uint64_t{1} << (n * m);
    int cb = opt.chunk_bits > 0 ? opt.chunk_bits : std::min(n * m, 20);
    cb = std::min(cb, n * m);
    const std::uint64_t chunk = std::uint64_t{1} << cb;
    const std::uint64_t nchunks = total / chunk;
    unsigned jobs = opt.jobs ? opt.jobs : default_jobs();
    jobs = unsigned(std::min<std::uint64_t>(jobs, nchunks));
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> best{~std::uint64_t{0}};
    std::atomic<bool> cancel{false};
    std::atomic<std::uint64_t> checked{0};
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= nchunks) return;
            if (c * chunk > best.load()) return;
            if (opt.chunk_done && opt.chunk_done(c)) {
                checked += chunk;
                continue;
            }
            auto r = prog.sweep(c * chunk, (c + 1) * chunk, &cancel);
            if (r) {
                std::uint64_t cur = best.load();
                while (*r < cur && !best.compare_exchange_weak(cur, *r)) {}
                checked += *r - c * chunk + 1;
                cancel = true;
                return;
            }
            if (cancel.load()) {
                // A later chunk may have been cut short; rerun it without cancellation
                // only if it precedes the best witness.
                if (c * chunk < best.load()) {
                    auto r2 = prog.sweep(c * chunk, (c + 1) * chunk, nullptr);
                    if (r2) {
                        std::uint64_t cur = best.load();
                        while (*r2 < cur && !best.compare_exchange_weak(cur, *r2)) {}
                    }
                }
                return;
            }
            checked += chunk;
            if (opt.on_chunk) {
                std::lock_guard<std::mutex> lk(mu);
                opt.on_chunk(c);
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> ts;
        for (unsigned i = 0; i < jobs; ++i) ts.emplace_back(worker);
        for (auto& t : ts) t.join();
    }
    v.checked = checked.load();
    if (best.load() != ~std::uint64_t{0}) {
        v.kind = VerdictKind::Invalid;
        v.witness = prog.decode(best.load());
    }
    return v;
}

inline ValidityVerdict decide_valid(const Frame& f, const Term& p, int bit_budget = 30, unsigned jobs = 0) {
    auto vars = variables_in_order(p);
    if (f.n * int(vars.size()) > bit_budget) {
        ValidityVerdict v;
        v.kind = VerdictKind::BudgetExceeded;
        return v;
    }
    Program prog(f, p, vars);
    SweepOptions opt;
    opt.bit_budget = bit_budget;
    opt.jobs = jobs;
    return decide_valid(prog, opt);
}

// ---------------------------------------------------------------------------
// Invalidating-assignment search.

enum class StrategyKind { singletons, exhaustive, random };

struct Strategy {
    StrategyKind kind = StrategyKind::singletons;
    std::uint64_t seed = 1;
    std::uint64_t tries = 10000;
    int bit_budget = 30;

    static Strategy singletons() { return {}; }
    static Strategy exhaustive(int budget = 30) { return {StrategyKind::exhaustive, 1, 0, budget}; }
    static Strategy random(std::uint64_t seed, std::uint64_t tries) {
        return {StrategyKind::random, seed, tries, 30};
    }
};

namespace detail {

template <class F>
void for_each_singleton(int n, int m, F&& fn) {
    std::vector<int> idx(m, 0);
    for (;;) {
        if (!fn(idx)) return;
        int k = m - 1;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) return;
    }
}

}  // namespace detail

inline std::optional<Assignment> find_invalidating(const Frame& f, const Term& p, const Strategy& st) {
    Program prog(f, p);
    const int n = f.n;
    const int m = int(prog.vars().size());
    switch (st.kind) {
    case StrategyKind::singletons: {
        std::optional<Assignment> out;
        detail::for_each_singleton(n, m, [&](const std::vector<int>& idx) {
            std::vector<Mask> env(m);
            for (int k = 0; k < m; ++k) env[k] = bit(idx[k]);
            if ((prog.evaluate(env) & f.identity) != f.identity) {
                Assignment h;
                for (int k = 0; k < m; ++k) h[prog.vars()[k]] = env[k];
                out = h;
                return false;
            }
            return true;
        });
        return out;
    }
    case StrategyKind::exhaustive: {
        if (n * m > st.bit_budget) throw ResourceError("exhaustive search exceeds bit budget");
        SweepOptions opt;
        opt.bit_budget = st.bit_budget;
        auto v = decide_valid(prog, opt);
        if (v.invalid()) return v.witness;
        return std::nullopt;
    }
    case StrategyKind::random: {
        std::mt19937_64 rng(st.seed);
        std::vector<Mask> env(m);
        for (std::uint64_t t = 0; t < st.tries; ++t) {
            for (int k = 0; k < m; ++k) env[k] = Mask(rng()) & f.all();
            if ((prog.evaluate(env) & f.identity) != f.identity) {
                Assignment h;
                for (int k = 0; k < m; ++k) h[prog.vars()[k]] = env[k];
                return h;
            }
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

// Every singleton assignment that invalidates p; with require_empty only those
// sending p to the empty set.
inline std::vector<Assignment> singleton_invalidators(const Frame& f, const Term& p, bool require_empty = false,
                                                      std::vector<std::string> vars = {}) {
    Program prog(f, p, std::move(vars));
    const int m = int(prog.vars().size());
    std::vector<Assignment> out;
    detail::for_each_singleton(f.n, m, [&](const std::vector<int>& idx) {
        std::vector<Mask> env(m);
        for (int k = 0; k < m; ++k) env[k] = bit(idx[k]);
        Mask val = prog.evaluate(env);
        bool bad = require_empty ? val == 0 : (val & f.identity) != f.identity;
        if (bad) {
            Assignment h;
            for (int k = 0; k < m; ++k) h[prog.vars()[k]] = env[k];
            out.push_back(std::move(h));
        }
        return true;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Grid of verdicts over frames and predicates.

struct CensusCell {
    std::size_t frame = 0;
    std::size_t predicate = 0;
    ValidityVerdict verdict;
};

struct CensusOptions {
    int bit_budget = 30;
    unsigned jobs = 0;
    std::function<std::optional<VerdictKind>(std::size_t, std::size_t)> lookup;  // resume
    std::function<void(const CensusCell&)> on_cell;
    std::function<bool(std::size_t, std::size_t, std::uint64_t)> chunk_done;
    std::function<void(std::size_t, std::size_t, std::uint64_t)> on_chunk;
    int chunk_bits = 0;
};

inline std::vector<std::vector<ValidityVerdict>> census_validity(const std::vector<Frame>& fs,
                                                                  const std::vector<Term>& ps,
                                                                  const CensusOptions& opt = {}) {
    std::vector<std::vector<ValidityVerdict>> grid(fs.size(), std::vector<ValidityVerdict>(ps.size()));
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (opt.lookup) {
                if (auto k = opt.lookup(i, j)) {
                    grid[i][j].kind = *k;
                    continue;
                }
            }
            auto vars = variables_in_order(ps[j]);
            ValidityVerdict v;
            if (fs[i].n * int(vars.size()) > opt.bit_budget) {
                v.kind = VerdictKind::BudgetExceeded;
            } else {
                Program prog(fs[i], ps[j], vars);
                SweepOptions so;
                so.bit_budget = opt.bit_budget;
                so.jobs = opt.jobs;
                so.chunk_bits = opt.chunk_bits;
                if (opt.chunk_done) so.chunk_done = [&](std::uint64_t c) { return opt.chunk_done(i, j, c); };
                if (opt.on_chunk) so.on_chunk = [&](std::uint64_t c) { opt.on_chunk(i, j, c); };
                v = decide_valid(prog, so);
            }
            grid[i][j] = v;
            if (opt.on_cell) opt.on_cell({i, j, v});
        }
    return grid;
}

}  // namespace relframe
