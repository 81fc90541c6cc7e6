#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "gen.hpp"

using namespace relframe;
using namespace relframe::testgen;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << (o.pass ? "PASS" : "FAIL") << " " << id << " " << title << ": " << o.detail << " (" << secs << " s)";
    std::cout << os.str() << std::endl;
}

std::string golden(const std::string& name) { return std::string(RELFRAME_SOURCE_DIR) + "/golden/" + name; }

Outcome compare_golden(const Table& actual, const std::string& file) {
    Table expected = load_table(golden(file));
    auto diffs = diff_tables(expected, actual);
    if (diffs.empty()) return {true, "matches " + file};
    std::string d = std::to_string(diffs.size()) + " cell(s) differ from " + file + ":";
    for (const auto& x : diffs) d += " [" + x + "]";
    return {false, d};
}

// Criterion 1.
Outcome proof_corpus() {
    std::size_t n = 0;
    for (const auto& s : builtin_scripts()) {
        ProofScript p = parse_script(s.text);
        auto r = check_script(p);
        if (!r.ok) return {false, s.file + " line " + std::to_string(r.line) + ": " + r.reason};
        ++n;
    }
    auto perm = builtin_script("perm");
    auto c2 = builtin_script("contract2");
    auto r1 = builtin_script("reflection1");
    if (perm.n != 4 || perm.assumptions != std::vector<AssumptionKind>{AssumptionKind::commutativity})
        return {false, "perm has the wrong bound or assumptions"};
    if (c2.n != 4 || c2.assumptions != std::vector<AssumptionKind>{AssumptionKind::density})
        return {false, "contract2 has the wrong bound or assumptions"};
    if (r1.n != 3 || !r1.assumptions.empty()) return {false, "reflection1 has the wrong bound or assumptions"};
    if (n < 40) return {false, "only " + std::to_string(n) + " scripts"};
    return {true, std::to_string(n) + " scripts checked"};
}

// Criterion 5.
struct FrameFamily {
    std::vector<Frame> with_lr;
    std::vector<Frame> without_lr;
};

FrameFamily reflection_family() {
    FrameFamily fam;
    std::vector<Frame> base;
    for (int s : {4, 2}) enumerate_frames(make_skeleton(4, s), {}, [&](const Frame& f) { base.push_back(f); });
    base.push_back(make_pair_frame(2));
    Rng rng(2024);
    std::set<std::string> seen;
    auto add = [&](const Frame& f) {
        if (!check_condition(f, Condition::identity)) return;
        std::string key = format_frame(f);
        if (!seen.insert(key).second) return;
        (check_condition(f, Condition::left_reflection) ? fam.with_lr : fam.without_lr).push_back(f);
    };
    for (const auto& f : base) {
        add(f);
        for (int k = 0; k < 3; ++k) {
            auto tr = f.triples();
            for (int j = 1 + pick(rng, 3); j > 0; --j) {
                Triple t{1 + pick(rng, 3), 1 + pick(rng, 3), 1 + pick(rng, 3)};
                auto it = std::find(tr.begin(), tr.end(), t);
                if (it == tr.end()) tr.push_back(t);
                else tr.erase(it);
            }
            add(make_frame(4, f.star, f.identity, tr, "toggled"));
        }
    }
    return fam;
}

Outcome reflection_criterion() {
    Frame k4 = builtin_frame("k4");
    for (const char* p : {"reflection1", "reflection1a", "dedekind"})
        if (!decide_valid(k4, named(p)).invalid()) return {false, std::string(p) + " is not invalid in k4"};
    Term r1 = named("reflection1");
    if (decide_valid(builtin_frame("k1"), r1).kind != VerdictKind::Valid) return {false, "reflection1 fails in k1"};
    FrameFamily fam = reflection_family();
    for (const auto& f : fam.with_lr)
        if (decide_valid(f, r1).kind != VerdictKind::Valid) return {false, "not valid in\n" + format_frame(f)};
    for (const auto& f : fam.without_lr)
        if (!decide_valid(f, r1).invalid()) return {false, "not invalid in\n" + format_frame(f)};
    return {true, "k4 invalidates all three; reflection1 valid in k1 and " + std::to_string(fam.with_lr.size()) +
                      " frames with left reflection, invalid in " + std::to_string(fam.without_lr.size()) +
                      " frames without"};
}

// Criterion 7.
Outcome counts_criterion() {
    Outcome o = compare_golden(reproduce_counts(), "counts.tsv");
    if (!o.pass) return o;
    for (int n = 1; n <= 5; ++n) {
        std::uint64_t want_f = 0, want_g = 0;
        for (auto [nn, s] : valid_skeleton_shapes(n)) {
            want_f += std::uint64_t{1} << count_formulas(n, s).F;
            want_g += std::uint64_t{1} << count_formulas(n, s).G;
        }
        if (census(n, CensusClass::comm_na).labeled_count != want_f) return {false, "labeled 2^F mismatch at n=" + std::to_string(n)};
        if (census(n, CensusClass::dense_comm_na).labeled_count != want_g) return {false, "labeled 2^G mismatch at n=" + std::to_string(n)};
    }
    for (int n = 1; n <= 7; ++n)
        for (auto [nn, s] : valid_skeleton_shapes(n))
            if (brute_force_automorphisms(make_skeleton(n, s)) != std::uint64_t(count_formulas(n, s).P))
                return {false, "P mismatch at n=" + std::to_string(n) + " s=" + std::to_string(s)};
    return {true, "kr4=14 kr5=390 tr5=594; labeled counts 2^F, 2^G for n<=5; P brute force for n<=7"};
}

// Criterion 8: resumable sweeps over the five-element KR- and TR-frames.
class Checkpoint {
public:
    explicit Checkpoint(std::string path) : path_(std::move(path)) {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) done_.insert(line);
    }
    bool has(const std::string& k) const {
        std::lock_guard<std::mutex> l(mu_);
        return done_.count(k) > 0;
    }
    void add(const std::string& k) {
        std::lock_guard<std::mutex> l(mu_);
        if (!done_.insert(k).second) return;
        std::ofstream(path_, std::ios::app) << k << "\n";
    }
    std::optional<std::string> verdict(const std::string& prefix) const {
        std::lock_guard<std::mutex> l(mu_);
        for (const char* v : {"VALID", "INVALID"})
            if (done_.count(prefix + " " + v)) return std::string(v);
        return std::nullopt;
    }

private:
    std::string path_;
    std::set<std::string> done_;
    mutable std::mutex mu_;
};

bool sweep_invalid(const Frame& f, const std::string& key, const Term& p, Checkpoint& ck) {
    if (auto v = ck.verdict(key)) return *v == "INVALID";
    SweepOptions opt;
    opt.bit_budget = 35;
    opt.chunk_bits = 24;
    opt.chunk_done = [&](std::uint64_t c) { return ck.has(key + " chunk " + std::to_string(c)); };
    opt.on_chunk = [&](std::uint64_t c) {
        ck.add(key + " chunk " + std::to_string(c));
        std::cerr << key << " chunk " << c << std::endl;
    };
    auto v = decide_valid(Program(f, p), opt);
    ck.add(key + " " + to_string(v.kind));
    std::cerr << "checkpoint " << key << " " << to_string(v.kind) << std::endl;
    return v.invalid();
}

Outcome extended_criterion(const std::string& ckpt_path) {
    Checkpoint ck(ckpt_path);
    Term l = named("L''"), m = named("M''");
    auto kr = census(5, CensusClass::kr, true).representatives;
    auto tr = census(5, CensusClass::tr, true).representatives;
    int kr_both = 0;
    for (std::size_t i = 0; i < kr.size(); ++i) {
        std::string k = "kr5 " + std::to_string(i);
        bool li = sweep_invalid(kr[i], k + " L''", l, ck);
        bool mi = sweep_invalid(kr[i], k + " M''", m, ck);
        kr_both += li && mi;
    }
    int tr_l = 0, tr_m = 0;
    bool implication = true;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        std::string k = "tr5 " + std::to_string(i);
        bool li = sweep_invalid(tr[i], k + " L''", l, ck);
        bool mi = sweep_invalid(tr[i], k + " M''", m, ck);
        tr_l += li;
        tr_m += mi;
        if (li && !mi) implication = false;
    }
    std::string d = "kr5 both=" + std::to_string(kr_both) + " tr5 L''=" + std::to_string(tr_l) +
                    " M''=" + std::to_string(tr_m) + (implication ? " implication holds" : " implication fails");
    return {kr_both == 58 && tr_l == 73 && tr_m == 286 && implication, d};
}

// Criterion 9.
template <class F>
std::string property(const std::string& name, int cases, F&& body) {
    int ok = 0;
    for (int i = 0; i < cases; ++i) {
        std::string why = body(i);
        if (!why.empty()) throw std::runtime_error(name + ": " + why);
        ++ok;
    }
    return name + " " + std::to_string(ok);
}

Outcome property_suites() {
    const std::vector<std::string> atoms = {"A", "B", "C"};
    const std::vector<std::string> fatoms = {"A", "B"};
    std::vector<std::string> done;
    Rng rng(9);

    std::vector<Frame> small = {builtin_frame("k1"), builtin_frame("k2"), builtin_frame("k3"), builtin_frame("k4"),
                                builtin_frame("k5"), make_pair_frame(2), make_cyclic_group_frame(3)};
    done.push_back(property("desugar", 1000, [&](int) -> std::string {
        const Frame& f = small[pick(rng, int(small.size()))];
        Term p = random_predicate(rng, 5, atoms);
        Assignment h = random_assignment(rng, f, atoms);
        return eval(f, h, p) == eval(f, h, desugar(p)) ? "" : print_predicate(p);
    }));

    done.push_back(property("G", 1000, [&](int) -> std::string {
        Formula f = random_formula(rng, 4, 3, fatoms);
        Formula g = translate_G(f);
        Structure S = random_structure(rng, 1 + pick(rng, 4), fatoms);
        bool ok = true;
        for_each_assignment(S, 7, 3, [&](VarAssignment& s) { ok = ok && satisfies(S, f, s) == satisfies(S, g, s); });
        return ok ? "" : print_formula(f);
    }));

    done.push_back(property("J", 1000, [&](int) -> std::string {
        for (;;) {
            Formula f = random_formula(rng, 3, 3, fatoms, 1);
            ClauseForm c;
            try {
                c = translate_J(f);
            } catch (const ResourceError&) {
                continue;
            }
            Structure S = random_structure(rng, 1 + pick(rng, 3), fatoms);
            bool ok = true;
            for_each_assignment(S, 7, 3, [&](VarAssignment& s) {
                ok = ok && satisfies(S, f, s) == satisfies_clauses(S, c, s[0], s[1], s[2]);
            });
            return ok ? "" : print_formula(f);
        }
    }));

    done.push_back(property("H", 1000, [&](int) -> std::string {
        for (;;) {
            Formula f = closure(random_formula(rng, 3, 3, fatoms, 1));
            Formula h;
            try {
                h = translate_H(f);
            } catch (const ResourceError&) {
                continue;
            }
            Structure S = random_structure(rng, 1 + pick(rng, 3), fatoms);
            return satisfies(S, f) == satisfies(S, h) ? "" : print_formula(f);
        }
    }));

    auto any_frame = [&](int n) {
        switch (pick(rng, 3)) {
        case 0: return random_na_frame(rng, n);
        case 1: return random_noncomm_na_frame(rng, n);
        default: return random_frame(rng, n);
        }
    };
    done.push_back(property("condition-axiom", 1000, [&](int i) -> std::string {
        Frame f = any_frame(i % 10 == 0 ? 5 : 1 + pick(rng, 4));
        f.accelerate();
        auto r = classify(f);
        bool base = true;
        for (Axiom a : {Axiom::R1, Axiom::R2, Axiom::R3, Axiom::R5, Axiom::R6, Axiom::R7, Axiom::R8, Axiom::R9,
                        Axiom::R10})
            base = base && check_axiom(f, a);
        auto p = properties(f);
        bool ok = r.na == base && r.sa == (base && check_axiom(f, Axiom::R4p)) &&
                  r.ra == (base && check_axiom(f, Axiom::R4)) && r.get(Condition::dense) == p.dense &&
                  r.get(Condition::comm) == p.commutative && r.get(Condition::symm) == p.symmetric;
        return ok ? "" : format_frame(f);
    }));

    done.push_back(property("symmetric-na-commutative", 1000, [&](int) -> std::string {
        for (;;) {
            Frame f = random_symmetric_reflection_frame(rng, 1 + pick(rng, 5));
            auto r = classify(f);
            if (!r.na) continue;
            return r.get(Condition::comm) ? "" : format_frame(f);
        }
    }));

    done.push_back(property("iso-invariance", 1000, [&](int) -> std::string {
        Skeleton sk;
        for (;;) {
            int n = 1 + pick(rng, 6), s = 1 + pick(rng, n);
            if ((n - s) % 2 == 0) {
                sk = make_skeleton(n, s);
                break;
            }
        }
        Frame f = sample_random(sk, pick(rng, 2), rng());
        std::vector<int> pi(f.n);
        for (int k = 0; k < f.n; ++k) pi[k] = k;
        std::shuffle(pi.begin() + 1, pi.end(), rng);
        Frame g = permute_frame(f, pi);
        if (canonical_form(f) != canonical_form(g)) return "canonical_form\n" + format_frame(f);
        Term p = random_predicate(rng, 4, atoms);
        Assignment h = random_assignment(rng, f, atoms), gh;
        for (const auto& [k, v] : h) gh[k] = permute_mask(v, pi);
        return permute_mask(eval(f, h, p), pi) == eval(g, gh, p) ? "" : "eval " + print_predicate(p);
    }));

    std::vector<Frame> four;
    for (auto [nn, s] : valid_skeleton_shapes(4))
        enumerate_frames(make_skeleton(4, s), {}, [&](const Frame& f) { four.push_back(f); });
    int sa_frames = 0;
    done.push_back(property("basis-sa-pasch", int(four.size()), [&](int i) -> std::string {
        const Frame& f = four[i];
        auto r = classify(f);
        sa_frames += r.sa;
        if (relational_basis_exists(f, 3, false).exists != r.sa) return "basis 3\n" + format_frame(f);
        if (r.sa && relational_basis_exists(f, 4).exists != r.get(Condition::pasch)) return "basis 4\n" + format_frame(f);
        return "";
    }));

    std::vector<Frame> enumerated;
    for (int n = 1; n <= 4; ++n)
        for (auto [nn, s] : valid_skeleton_shapes(n))
            enumerate_frames(make_skeleton(n, s), {}, [&](const Frame& f) { enumerated.push_back(f); });
    int implied = 0;
    done.push_back(property("diamond-basis", int(enumerated.size()), [&](int i) -> std::string {
        const Frame& f = enumerated[i];
        for (int d : {3, 4}) {
            if (!diamond(f, d - 2)) continue;
            ++implied;
            if (!relational_basis_exists(f, d, false).exists) return "d=" + std::to_string(d) + "\n" + format_frame(f);
        }
        return "";
    }));
    if (four.size() < 1000) return {false, "only " + std::to_string(four.size()) + " four-element frames"};

    std::string d;
    for (const auto& s : done) d += (d.empty() ? "" : ", ") + s;
    return {true, d + " cases (" + std::to_string(implied) + " diamond hits, " + std::to_string(sa_frames) + " SA-frames)"};
}

}  // namespace

int main(int argc, char** argv) {
    bool extended = false;
    std::string ckpt = "acceptance-extended.ckpt";
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--extended")) extended = true;
        else if (!std::strcmp(argv[i], "--checkpoint") && i + 1 < argc) ckpt = argv[++i];
        else {
            std::cerr << "usage: acceptance [--extended] [--checkpoint FILE]\n";
            return 2;
        }
    }

    report(1, "proof corpus", proof_corpus);
    report(2, "k1 invalidation grid", [] { return compare_golden(reproduce_k1_grid(), "k1-grid.tsv"); });
    report(3, "k2 singleton assignments", [] { return compare_golden(reproduce_k2_table(), "k2-table.tsv"); });
    report(4, "k3 density predicates", [] {
        Outcome o = compare_golden(reproduce_k3_density(), "k3-density.tsv");
        Table t = reproduce_k3_density();
        for (const auto& r : t.rows)
            if (r.back() != "invalid") return Outcome{false, r[0] + " is not invalid"};
        return o;
    });
    report(5, "reflection predicates", reflection_criterion);
    report(6, "four-element KR census", [] {
        FourElementReport r = four_element_kr(0, [](const std::string& m) { std::cerr << m << std::endl; });
        Outcome o = compare_golden(four_element_table(r), "four-element.tsv");
        if (o.pass)
            o.detail = "14 frames, 3 invalidate L'', 1 also M'', isomorphic to k5 with " +
                       std::to_string(r.witness_triples) + " triples";
        return o;
    });
    report(7, "frame counts", counts_criterion);
    if (extended) report(8, "five-element classification", [&] { return extended_criterion(ckpt); });
    else std::cout << "SKIP 8 five-element classification: long-running, pass --extended to run" << std::endl;
    report(9, "property suites", property_suites);

    std::cout << (failures ? std::to_string(failures) + " criterion/criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
