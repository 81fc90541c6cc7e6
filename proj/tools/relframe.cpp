#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "relframe/relframe.hpp"

using namespace relframe;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct Global {
    unsigned jobs = 0;
    std::string format = "text";
};

Global g;

void emit(const Table& t) { std::cout << (g.format == "tsv" ? to_tsv(t) : to_text(t)); }

Frame load_frame(const std::string& spec) {
    for (const auto& n : builtin_frame_names())
        if (spec == n) return builtin_frame(spec);
    if (spec.rfind("pair", 0) == 0 && spec.size() > 4) return make_pair_frame(std::stoi(spec.substr(4)));
    if (spec.rfind("group", 0) == 0 && spec.size() > 5) return make_cyclic_group_frame(std::stoi(spec.substr(5)));
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("no builtin frame or readable file named '" + spec + "'");
    return parse_frame(in);
}

std::string golden_dir() {
    if (const char* d = std::getenv("RELFRAME_GOLDEN_DIR")) return d;
    return std::string(RELFRAME_SOURCE_DIR) + "/golden";
}

// Checkpoint file of completed work units, one key per line.
class Checkpoint {
public:
    explicit Checkpoint(std::string path) : path_(std::move(path)) {
        if (path_.empty()) return;
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) done_.insert(line);
    }
    bool enabled() const { return !path_.empty(); }
    bool has(const std::string& key) const { return done_.count(key) > 0; }
    std::optional<std::string> find_prefix(const std::string& prefix) const {
        auto it = done_.lower_bound(prefix);
        if (it != done_.end() && it->rfind(prefix, 0) == 0) return it->substr(prefix.size());
        return std::nullopt;
    }
    void add(const std::string& key) {
        if (path_.empty()) return;
        std::lock_guard<std::mutex> lk(mu_);
        if (!done_.insert(key).second) return;
        std::ofstream out(path_, std::ios::app);
        out << key << "\n";
    }

private:
    std::string path_;
    std::set<std::string> done_;
    std::mutex mu_;
};

// ---------------------------------------------------------------------------

int cmd_parse(const std::string& text, bool show_core) {
    Term p = resolve_predicate(text);
    std::cout << "predicate: " << print_predicate(p) << "\n";
    std::cout << "class: " << to_string(vocabulary_class(p)) << "\n";
    std::cout << "variables:";
    for (const auto& v : variables_in_order(p)) std::cout << " " << v;
    std::cout << "\nsize: " << term_size(p) << "\n";
    if (show_core) std::cout << "core: " << print_predicate(desugar(p)) << "\n";
    return kOk;
}

int cmd_frame_check(const std::string& spec, const std::vector<std::string>& conds) {
    Frame f = load_frame(spec);
    ClassReport r = classify(f);
    Table t;
    t.header = {"condition", "holds"};
    for (auto [c, v] : r.conditions) t.rows.push_back({to_string(c), v ? "yes" : "no"});
    for (auto [name, v] : std::vector<std::pair<std::string, bool>>{
             {"NA", r.na}, {"SA", r.sa}, {"RA", r.ra}, {"CR", r.cr}, {"KR", r.kr}, {"TR", r.tr}})
        t.rows.push_back({"class " + name, v ? "yes" : "no"});
    emit(t);
    for (const auto& c : conds)
        if (!r.get(condition_from_string(c))) return kFail;
    return kOk;
}

int cmd_frame_table(const std::string& spec) {
    std::cout << format_table(load_frame(spec));
    return kOk;
}

int cmd_frame_builtin(const std::string& name) {
    if (name.empty()) {
        for (const auto& n : builtin_frame_names()) std::cout << n << "\n";
        return kOk;
    }
    std::cout << format_frame(builtin_frame(name));
    return kOk;
}

int cmd_validate(const std::string& spec, const std::string& text, const std::string& strategy, int budget,
                 std::uint64_t seed, std::uint64_t tries, bool empty, const std::string& ckpt) {
    Frame f = load_frame(spec);
    Term p = resolve_predicate(text);
    if (strategy == "singletons") {
        auto hs = singleton_invalidators(f, p, empty);
        for (const auto& h : hs) std::cout << format_assignment(f, h) << "\n";
        std::cout << (hs.empty() ? "no singleton invalidator" : std::to_string(hs.size()) + " singleton invalidators")
                  << "\n";
        return hs.empty() ? kOk : kFail;
    }
    if (strategy == "random") {
        auto h = find_invalidating(f, p, Strategy::random(seed, tries));
        if (!h) {
            std::cout << "no invalidator in " << tries << " random assignments\n";
            return kOk;
        }
        std::cout << "INVALID\nwitness: " << format_assignment(f, *h) << "\nvalue: " << f.format_set(eval(f, *h, p))
                  << "\n";
        return kFail;
    }
    if (strategy != "exhaustive") throw std::invalid_argument("unknown strategy '" + strategy + "'");
    Program prog(f, p);
    Checkpoint cp(ckpt);
    std::string key = "validate " + f.name + " " + core_key(p) + " ";
    SweepOptions opt;
    opt.bit_budget = budget;
    opt.jobs = g.jobs;
    if (cp.enabled()) {
        opt.chunk_done = [&](std::uint64_t c) { return cp.has(key + std::to_string(c)); };
        opt.on_chunk = [&](std::uint64_t c) { cp.add(key + std::to_string(c)); };
    }
    ValidityVerdict v = decide_valid(prog, opt);
    std::cout << to_string(v.kind) << "\n";
    if (v.kind == VerdictKind::BudgetExceeded) {
        std::cout << "assignment space 2^" << f.n * int(prog.vars().size()) << " exceeds budget 2^" << budget << "\n";
        return kBudget;
    }
    std::cout << "checked: " << v.checked << "\n";
    if (v.invalid()) {
        std::cout << "witness: " << format_assignment(f, v.witness) << "\nvalue: " << f.format_set(eval(f, v.witness, p))
                  << "\n";
        return kFail;
    }
    return kOk;
}

int cmd_axioms(const std::string& spec, const std::vector<std::string>& names, int budget) {
    Frame f = load_frame(spec);
    std::vector<Axiom> sel;
    for (const auto& n : names) sel.push_back(axiom_from_string(n));
    bool explicit_sel = !sel.empty();
    if (!explicit_sel)
        for (Axiom a : all_axioms()) sel.push_back(a);
    Table t;
    t.header = {"axiom", "holds"};
    bool ok = true;
    for (Axiom a : sel) {
        bool h = check_axiom(f, a, budget);
        t.rows.push_back({to_string(a), h ? "yes" : "no"});
        bool counts = explicit_sel || !(a == Axiom::dense || a == Axiom::commutative || a == Axiom::symmetric ||
                                        a == Axiom::integral || a == Axiom::R4p);
        if (counts && !h) ok = false;
    }
    emit(t);
    return ok ? kOk : kFail;
}

int cmd_basis(const std::string& spec, int d, bool skip_sa) {
    Frame f = load_frame(spec);
    BasisResult r = relational_basis_exists(f, d, !skip_sa);
    std::cout << "basis " << d << ": " << (r.exists ? "exists" : "none") << "\n";
    std::cout << "candidates: " << r.initial << "\n";
    std::cout << "rounds:";
    for (auto x : r.rounds) std::cout << " " << x;
    std::cout << "\nsurvivors: " << r.basis.size() << "\n";
    if (!r.uncovered.empty()) {
        std::cout << "uncovered:";
        for (int a : r.uncovered) std::cout << " " << f.element_name(a);
        std::cout << "\n";
    }
    return r.exists ? kOk : kFail;
}

int cmd_diamond(const std::string& spec, int t) {
    Frame f = load_frame(spec);
    bool d = diamond(f, t);
    std::cout << "D(" << t << "): " << (d ? "yes" : "no") << "\n";
    return d ? kOk : kFail;
}

int cmd_census(int n, const std::string& cls_name, const std::vector<std::string>& preds, bool extended,
               const std::string& ckpt, int budget_bits, bool list) {
    CensusClass cls = census_class_from_string(cls_name);
    bool need_reps = list || !preds.empty();
    CountReport rep = census(n, cls, need_reps, budget_bits);
    Table t;
    t.header = {"class", "n", "s", "labeled", "iso"};
    for (const auto& r : rep.per_s)
        t.rows.push_back({to_string(cls), std::to_string(n), std::to_string(r.s), std::to_string(r.labeled),
                          std::to_string(r.iso)});
    t.rows.push_back({to_string(cls), std::to_string(n), "all", std::to_string(rep.labeled_count),
                      std::to_string(rep.iso_class_count)});
    if (cls == CensusClass::tr && rep.per_s.size() > 1)
        t.comments.push_back("per-s rows are derived data");
    emit(t);
    std::cout << "iso: " << rep.iso_class_count << "\n";
    if (!need_reps) return kOk;

    std::vector<Term> ps;
    for (const auto& p : preds) ps.push_back(resolve_predicate(p));
    const int default_limit = 28;
    int widest = 0;
    for (const auto& p : ps) widest = std::max(widest, n * int(variables_in_order(p).size()));
    if (widest > default_limit && !extended) {
        std::cerr << "sweep of 2^" << widest << " assignments per frame needs --extended\n";
        return kBudget;
    }
    Checkpoint cp(ckpt);
    auto cell_key = [&](std::size_t i, std::size_t j) {
        return "census " + std::to_string(n) + " " + to_string(cls) + " " + core_key(ps[j]) + " frame " +
               std::to_string(i) + " verdict ";
    };
    auto chunk_key = [&](std::size_t i, std::size_t j, std::uint64_t c) {
        return "census " + std::to_string(n) + " " + to_string(cls) + " " + core_key(ps[j]) + " frame " +
               std::to_string(i) + " chunk " + std::to_string(c);
    };
    CensusOptions opt;
    opt.bit_budget = extended ? 62 : default_limit;
    opt.jobs = g.jobs;
    std::mutex out_mu;
    auto started = std::chrono::steady_clock::now();
    if (cp.enabled()) {
        opt.lookup = [&](std::size_t i, std::size_t j) -> std::optional<VerdictKind> {
            auto v = cp.find_prefix(cell_key(i, j));
            if (!v) return std::nullopt;
            if (*v == "VALID") return VerdictKind::Valid;
            if (*v == "INVALID") return VerdictKind::Invalid;
            return std::nullopt;
        };
        opt.chunk_done = [&](std::size_t i, std::size_t j, std::uint64_t c) { return cp.has(chunk_key(i, j, c)); };
        opt.on_chunk = [&](std::size_t i, std::size_t j, std::uint64_t c) {
            cp.add(chunk_key(i, j, c));
            if (extended) {
                std::lock_guard<std::mutex> lk(out_mu);
                auto secs = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - started);
                std::cerr << "checkpoint frame " << i << " predicate " << j << " chunk " << c << " (" << secs.count()
                          << "s)\n";
            }
        };
    }
    opt.on_cell = [&](const CensusCell& c) {
        if (c.verdict.kind != VerdictKind::BudgetExceeded) cp.add(cell_key(c.frame, c.predicate) + to_string(c.verdict.kind));
        if (extended) {
            std::lock_guard<std::mutex> lk(out_mu);
            std::cerr << "frame " << c.frame << " predicate " << c.predicate << ": " << to_string(c.verdict.kind) << "\n";
        }
    };
    auto grid = census_validity(rep.representatives, ps, opt);
    Table ft;
    ft.header = {"frame", "triples"};
    for (const auto& p : preds) ft.header.push_back(p);
    std::vector<std::size_t> invalid(ps.size(), 0);
    bool budget = false;
    for (std::size_t i = 0; i < rep.representatives.size(); ++i) {
        std::vector<std::string> row = {rep.representatives[i].name, std::to_string(rep.representatives[i].triple_count())};
        for (std::size_t j = 0; j < ps.size(); ++j) {
            row.push_back(to_string(grid[i][j].kind));
            if (grid[i][j].invalid()) ++invalid[j];
            if (grid[i][j].kind == VerdictKind::BudgetExceeded) budget = true;
        }
        ft.rows.push_back(std::move(row));
    }
    emit(ft);
    for (std::size_t j = 0; j < ps.size(); ++j)
        std::cout << "invalidate " << preds[j] << ": " << invalid[j] << " of " << rep.representatives.size() << "\n";
    return budget ? kBudget : kOk;
}

int cmd_count(int n, int s_only) {
    Table t;
    t.header = {"n", "s", "F", "G", "P", "P-brute", "cycles"};
    if (s_only > 0) count_formulas(n, s_only);
    for (auto [nn, s] : valid_skeleton_shapes(n)) {
        if (s_only > 0 && s != s_only) continue;
        CountFormulas c = count_formulas(n, s);
        Skeleton sk = make_skeleton(n, s);
        std::string brute = n <= 8 ? std::to_string(brute_force_automorphisms(sk)) : "-";
        t.rows.push_back({std::to_string(n), std::to_string(s), std::to_string(c.F), std::to_string(c.G),
                          std::to_string(c.P), brute, std::to_string(cycles(sk).size())});
    }
    emit(t);
    return kOk;
}

int cmd_prove_check(const std::vector<std::string>& targets, bool all, bool no_macros, bool expand_first) {
    std::vector<std::pair<std::string, ProofScript>> scripts;
    if (all)
        for (const auto& s : builtin_scripts()) scripts.push_back({s.file, parse_script(s.text)});
    for (const auto& t : targets) {
        if (std::filesystem::exists(t)) scripts.push_back({t, load_script_file(t)});
        else scripts.push_back({t, builtin_script(t)});
    }
    if (scripts.empty()) throw std::invalid_argument("nothing to check");
    CheckOptions opt;
    opt.allow_macros = !no_macros;
    bool ok = true;
    for (auto& [label, p] : scripts) {
        ProofScript q = expand_first ? expand(p) : p;
        CheckResult r = check_script(q, opt);
        std::cout << label << ": ";
        if (r.ok) {
            std::cout << "ok (" << q.name << ", n=" << q.n;
            for (auto a : q.assumptions) std::cout << ", " << to_string(a);
            std::cout << ", " << q.lines.size() << " lines)\n";
        } else {
            std::cout << "FAILED at line " << r.line << ": " << r.reason << "\n";
            ok = false;
        }
    }
    return ok ? kOk : kFail;
}

int cmd_prove_search(const std::string& goal, const std::string& pred, int n, int depth,
                     const std::vector<std::string>& assume, std::size_t budget) {
    Sequent s;
    if (!goal.empty()) {
        s = parse_sequent(goal);
    } else if (!pred.empty()) {
        s = parse_sequent("|- 0:" + print_predicate(resolve_predicate(pred)) + ":0");
    } else {
        throw std::invalid_argument("prove-search needs --goal or --pred");
    }
    std::vector<AssumptionKind> as;
    for (const auto& a : assume) {
        auto k = assumption_from_string(a);
        if (!k) throw std::invalid_argument("unknown assumption '" + a + "'");
        as.push_back(*k);
    }
    SearchResult r = search_proof(s, n, depth, as, budget);
    std::cout << "status: " << to_string(r.status) << "\nnodes: " << r.nodes << "\n";
    if (r.script) std::cout << format_script(*r.script);
    switch (r.status) {
    case SearchStatus::found: return kOk;
    case SearchStatus::budget_exhausted: return kBudget;
    default: return kFail;
    }
}

int cmd_translate(const std::string& text, const std::string& to, bool close) {
    Formula f = parse_formula(text);
    if (close) f = closure(f);
    if (to == "G") {
        std::cout << print_formula(translate_G(f)) << "\n";
    } else if (to == "J") {
        ClauseForm c = translate_J(f);
        std::cout << "clauses: " << c.size() << "\n" << print_clauses(c) << "\n";
    } else if (to == "H") {
        std::cout << print_formula(translate_H(f)) << "\n";
    } else if (to == "closure") {
        std::cout << print_formula(closure(f)) << "\n";
    } else {
        throw std::invalid_argument("unknown target '" + to + "' (G, J, H or closure)");
    }
    return kOk;
}

int cmd_modelcheck(const std::string& path, const std::string& text, const std::string& assign) {
    Structure S = load_structure(path);
    Formula f = parse_formula(text);
    if (!assign.empty()) {
        VarAssignment s;
        std::stringstream ss(assign);
        std::string item;
        while (std::getline(ss, item, ',')) {
            int u = std::stoi(item);
            if (u < 0 || u >= S.m) throw std::invalid_argument("assignment value out of range");
            s.push_back(u);
        }
        bool sat = satisfies(S, f, s);
        std::cout << (sat ? "satisfied" : "not satisfied") << "\n";
        return sat ? kOk : kFail;
    }
    std::uint64_t fv = free_vars(f);
    if (fv == 0) {
        bool sat = satisfies(S, f);
        std::cout << (sat ? "satisfied" : "not satisfied") << "\n";
        return sat ? kOk : kFail;
    }
    std::size_t total = 0, good = 0;
    std::string first_bad;
    for_each_assignment(S, fv, max_var(f) + 1, [&](VarAssignment& s) {
        ++total;
        if (satisfies(S, f, s)) {
            ++good;
        } else if (first_bad.empty()) {
            for (int v = 0; v < int(s.size()); ++v)
                if (fv >> v & 1) first_bad += (first_bad.empty() ? "v" : " v") + std::to_string(v) + "=" + std::to_string(s[v]);
        }
    });
    std::cout << "satisfied by " << good << " of " << total << " assignments\n";
    if (!first_bad.empty()) std::cout << "first failing: " << first_bad << "\n";
    return good == total ? kOk : kFail;
}

int cmd_reproduce(const std::string& target) {
    Table t;
    if (target == "k1-grid") {
        t = reproduce_k1_grid();
    } else if (target == "k2-table") {
        t = reproduce_k2_table();
    } else if (target == "k3-density") {
        t = reproduce_k3_density();
    } else if (target == "four-element") {
        t = four_element_table(four_element_kr(g.jobs, [](const std::string& s) { std::cerr << s << "\n"; }));
    } else if (target == "counts") {
        std::vector<CountReport> reps;
        t = reproduce_counts(&reps);
        emit(t);
        for (const auto& r : reps)
            if (r.cls == CensusClass::tr)
                for (const auto& row : r.per_s)
                    std::cout << "derived: tr n=" << r.n << " s=" << row.s << " iso=" << row.iso << "\n";
        Table golden = load_table(golden_dir() + "/counts.tsv");
        auto d = diff_tables(golden, t);
        for (const auto& x : d) std::cout << "diff: " << x << "\n";
        std::cout << (d.empty() ? "match" : "MISMATCH") << "\n";
        return d.empty() ? kOk : kFail;
    } else {
        std::string known;
        for (const auto& n : reproduce_targets()) known += " " + n;
        throw std::invalid_argument("unknown target '" + target + "'; known:" + known);
    }
    emit(t);
    Table golden = load_table(golden_dir() + "/" + target + ".tsv");
    auto d = diff_tables(golden, t);
    for (const auto& x : d) std::cout << "diff: " << x << "\n";
    std::cout << (d.empty() ? "match" : "MISMATCH") << "\n";
    return d.empty() ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relframe: finite frames, relation algebras and relevance logic"};
    app.require_subcommand(1);
    app.add_option("--jobs", g.jobs, "worker threads (0 = available parallelism)");
    app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"text", "tsv"}));

    int rc = kOk;

    std::string pred, frame, strategy = "exhaustive", ckpt, cls, goal, formula, to = "G", structure, assign, target;
    std::vector<std::string> conds, axioms, preds, targets, assume;
    int budget = 30, d = 3, t = 1, n = 4, s = 0, depth = 8, vars = 3, census_budget = 24;
    std::uint64_t seed = 1, tries = 10000;
    std::size_t node_budget = 2'000'000;
    bool core = false, empty = false, skip_sa = false, extended = false, list = false, all = false, no_macros = false,
         expand_first = false, close = false;

    auto* parse = app.add_subcommand("parse", "parse and print a predicate");
    parse->add_option("predicate", pred, "predicate text or catalog name")->required();
    parse->add_flag("--core", core, "also print the core-vocabulary form");
    parse->callback([&] { rc = cmd_parse(pred, core); });

    auto* fcheck = app.add_subcommand("frame-check", "check frame conditions and classes");
    fcheck->add_option("--frame", frame, "builtin name, pairM, groupM, or frame file")->required();
    fcheck->add_option("--condition", conds, "conditions that must hold");
    fcheck->callback([&] { rc = cmd_frame_check(frame, conds); });

    auto* ftable = app.add_subcommand("frame-table", "print the composition table of a frame");
    ftable->add_option("--frame", frame)->required();
    ftable->callback([&] { rc = cmd_frame_table(frame); });

    auto* fbuiltin = app.add_subcommand("frame-builtin", "list builtin frames or print one in file format");
    fbuiltin->add_option("name", frame);
    fbuiltin->callback([&] { rc = cmd_frame_builtin(frame); });

    auto* validate = app.add_subcommand("validate", "decide validity of a predicate in a frame");
    validate->add_option("--frame", frame)->required();
    validate->add_option("--pred", pred, "predicate text or catalog name")->required();
    validate->add_option("--strategy", strategy)->check(CLI::IsMember({"exhaustive", "singletons", "random"}));
    validate->add_option("--budget", budget, "bit budget for exhaustive sweeps");
    validate->add_option("--seed", seed);
    validate->add_option("--tries", tries);
    validate->add_flag("--empty", empty, "singletons: only assignments sending the predicate to the empty set");
    validate->add_option("--checkpoint", ckpt, "resumable checkpoint file");
    validate->callback([&] { rc = cmd_validate(frame, pred, strategy, budget, seed, tries, empty, ckpt); });

    auto* ax = app.add_subcommand("axioms", "check relation-algebra axioms in the complex algebra");
    ax->add_option("--frame", frame)->required();
    ax->add_option("--axiom", axioms, "axioms to check (default all)");
    ax->add_option("--budget", budget);
    ax->callback([&] { rc = cmd_axioms(frame, axioms, budget); });

    auto* basis = app.add_subcommand("basis", "decide existence of a d-dimensional relational basis");
    basis->add_option("--frame", frame)->required();
    basis->add_option("--d", d)->check(CLI::Range(3, 6));
    basis->add_flag("--skip-sa-check", skip_sa);
    basis->callback([&] { rc = cmd_basis(frame, d, skip_sa); });

    auto* dia = app.add_subcommand("diamond", "check the diamond property D(t)");
    dia->add_option("--frame", frame)->required();
    dia->add_option("--t", t)->check(CLI::PositiveNumber);
    dia->callback([&] { rc = cmd_diamond(frame, t); });

    auto* cen = app.add_subcommand("census", "enumerate frames up to isomorphism");
    cen->add_option("--n", n)->required()->check(CLI::Range(1, 9));
    cen->add_option("--class", cls)->required();
    cen->add_option("--check-pred", preds, "predicates to decide in every representative");
    cen->add_flag("--extended", extended, "allow long sweeps with progress checkpoints");
    cen->add_option("--checkpoint", ckpt, "resumable checkpoint file");
    cen->add_option("--budget", census_budget, "free-cycle bit budget");
    cen->add_flag("--list", list, "list representatives");
    cen->callback([&] { rc = cmd_census(n, cls, preds, extended, ckpt, census_budget, list); });

    auto* cnt = app.add_subcommand("count", "closed-form counts F, G, P per skeleton");
    cnt->add_option("--n", n)->required()->check(CLI::Range(1, 12));
    cnt->add_option("--s", s);
    cnt->callback([&] { rc = cmd_count(n, s); });

    auto* pc = app.add_subcommand("prove-check", "check proof scripts");
    pc->add_option("scripts", targets, "script files or builtin proof names");
    pc->add_flag("--all", all, "check every builtin proof");
    pc->add_flag("--no-macros", no_macros);
    pc->add_flag("--expand", expand_first, "expand macros before checking");
    pc->callback([&] { rc = cmd_prove_check(targets, all, no_macros, expand_first); });

    auto* ps = app.add_subcommand("prove-search", "bounded backward proof search");
    ps->add_option("--goal", goal, "sequent, e.g. '0:A:1 |- 0:A:1'");
    ps->add_option("--pred", pred, "predicate; goal becomes |- 0:P:0");
    ps->add_option("--n", vars)->check(CLI::Range(1, 30));
    ps->add_option("--depth", depth);
    ps->add_option("--assume", assume);
    ps->add_option("--nodes", node_budget);
    ps->callback([&] { rc = cmd_prove_search(goal, pred, vars, depth, assume, node_budget); });

    auto* tr = app.add_subcommand("translate", "apply the translation mappings");
    tr->add_option("--formula", formula)->required();
    tr->add_option("--to", to)->check(CLI::IsMember({"G", "J", "H", "closure"}));
    tr->add_flag("--closure", close, "close the formula first");
    tr->callback([&] { rc = cmd_translate(formula, to, close); });

    auto* mc = app.add_subcommand("modelcheck", "satisfaction in a finite structure");
    mc->add_option("--structure", structure)->required();
    mc->add_option("--formula", formula)->required();
    mc->add_option("--assign", assign, "values of v0,v1,... separated by commas");
    mc->callback([&] { rc = cmd_modelcheck(structure, formula, assign); });

    auto* rep = app.add_subcommand("reproduce", "recompute a table and diff it against its golden file");
    rep->add_option("target", target)->required()->check(CLI::IsMember(reproduce_targets()));
    rep->callback([&] { rc = cmd_reproduce(target); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    } catch (const ResourceError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return kUsage;
    } catch (const ScriptSyntaxError& e) {
        std::cerr << "script error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return rc;
}
