// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "indescent/certificate.hpp"
#include "indescent/fuzz.hpp"
#include "indescent/herbrand.hpp"
#include "indescent/parser.hpp"
#include "indescent/restrictions.hpp"
#include "indescent/seplog.hpp"

#include "mutation_suite.hpp"

using namespace indescent;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "CRITERION " << criterion << ": " << (pass ? "PASS" : "FAIL") << " -- " << detail << "\n";
    if (!pass) ++failures;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParsedFile load(const std::string& name) { return parse_system(slurp(std::string(TEST_DATA_DIR) + "/" + name)); }

int64_t ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

struct Outcomes {
    std::vector<std::pair<std::string, QueryOutcome>> proved;
    std::vector<std::pair<std::string, QueryOutcome>> disproved;
};

Term tt(const char* f, std::vector<Term> args) { return Term::app(f, "T", std::move(args)); }

} // namespace

int main() {
    Strategy strat(Strategy::default_regex());
    QueryOptions qopt;
    Outcomes acc;

    // ---- criterion 1: first-order verdict reproduction ----
    {
        auto pq = load("fol_pq.sys");
        auto t0 = Clock::now();
        auto out1 = prove_query(pq.system, pq.queries[0], strat, qopt);
        int64_t ms1 = ms_since(t0);
        bool proved = out1.kind == QueryOutcome::Kind::Proved;
        bool cert_ok = false;
        if (proved) {
            auto cert = make_certificate(pq.system, pq.queries[0], strat.source(), *out1.proof);
            cert_ok = check_proof(pq.system, read_certificate(pq.system, write_certificate(cert))).valid();
        }

        auto qp = load("fol_qp.sys");
        t0 = Clock::now();
        auto out2 = prove_query(qp.system, qp.queries[0], strat, qopt);
        int64_t ms2 = ms_since(t0);
        bool disproved = out2.kind == QueryOutcome::Kind::Disproved && out2.cex && out2.cex->verified;

        bool pass = proved && cert_ok && disproved && ms1 < 5000 && ms2 < 5000;
        std::string witness = disproved && !out2.cex->tuple.empty() ? out2.cex->tuple[0].str() : "-";
        report(1, pass,
               "p |= q proved (" + std::to_string(ms1) + " ms, certificate " + (cert_ok ? "Valid" : "invalid") +
                   "), q |= p disproved with verified witness " + witness + " (" + std::to_string(ms2) + " ms)");
        if (proved) acc.proved.emplace_back("fol_pq", std::move(out1));
        if (disproved) acc.disproved.emplace_back("fol_qp", std::move(out2));
    }

    // ---- criterion 2: separation-logic verdict reproduction ----
    {
        auto d1 = load("sl_ls.sys");
        auto t0 = Clock::now();
        auto out1 = prove_query(d1.system, d1.queries[0], strat, qopt);
        int64_t ms1 = ms_since(t0);
        bool first = out1.kind == QueryOutcome::Kind::Proved && ms1 < 5000;

        auto d2 = load("sl_ls_rev.sys");
        t0 = Clock::now();
        auto out2 = prove_query(d2.system, d2.queries[0], strat, qopt);
        int64_t ms2 = ms_since(t0);
        bool second = out2.kind == QueryOutcome::Kind::Proved && ms2 < 5000;

        std::string second_str;
        if (second) {
            second_str = "lsphat |= lsp proved (" + std::to_string(ms2) + " ms)";
        } else if (out2.kind == QueryOutcome::Kind::Disproved) {
            second_str =
                "lsphat |= lsp NOT provable: the calculus refutes it and the unfolding-tree counterexample "
                "verifies (see the decisions ledger; this half of the criterion is unattainable as stated)";
        } else {
            second_str = "lsphat |= lsp returned unknown";
        }
        report(2, first && second,
               "lsp |= lsphat " + std::string(first ? "proved" : "FAILED") + " (" + std::to_string(ms1) +
                   " ms); " + second_str);
        if (out1.kind == QueryOutcome::Kind::Proved) acc.proved.emplace_back("sl_ls", std::move(out1));
        if (out2.kind == QueryOutcome::Kind::Disproved) acc.disproved.emplace_back("sl_ls_rev", std::move(out2));
    }

    // ---- criterion 3: restriction reports ----
    {
        auto t0 = Clock::now();
        auto fol = check_restrictions(load("fol_pq.sys").system);
        auto sl = check_restrictions(load("sl_ls.sys").system);
        auto bad = check_restrictions(load("fol_nonfilter.sys").system);
        int64_t ms = ms_since(t0);
        bool pass = fol.all_pass() && sl.all_pass() && bad.non_filtering.verdict == Verdict::Fail && ms < 10000;
        report(3, pass,
               std::string("tree-automata system all Pass: ") + (fol.all_pass() ? "yes" : "no") +
                   ", list system all Pass: " + (sl.all_pass() ? "yes" : "no") +
                   ", augmented system non-filtering Fail: " +
                   (bad.non_filtering.verdict == Verdict::Fail ? "yes" : "no") + " (" + std::to_string(ms) + " ms)");
    }

    // ---- criterion 4: differential fuzzing ----
    FuzzReport fuzz_rep;
    {
        FuzzOptions fopt;
        fuzz_rep = run_fuzz_campaign(1, 200, fopt);
        bool pass = fuzz_rep.all_agree() && fuzz_rep.elapsed_ms < 120000;
        report(4, pass,
               std::to_string(fuzz_rep.agreed) + "/" + std::to_string(fuzz_rep.instances.size()) +
                   " instances agree across antichain oracle, proof engine and weight-4 membership (" +
                   std::to_string(fuzz_rep.elapsed_ms) + " ms)");
    }

    // ---- criterion 5: empirical soundness over criteria 1-4 ----
    {
        bool pass = true;
        std::string detail;
        {
            auto pq = load("fol_pq.sys");
            auto lhs = h_enumerate(pq.system, "p", 4);
            auto rhs = h_enumerate(pq.system, "q", 4);
            size_t missed = 0;
            for (const auto& t : lhs)
                if (!rhs.count(t)) ++missed;
            if (missed) pass = false;
            detail += "herbrand depth-4 misses: " + std::to_string(missed);
        }
        {
            auto sl = load("sl_ls.sys");
            auto lhs = sh_enumerate(sl.system, "lsp", 4, 4);
            auto rhs = sh_enumerate(sl.system, "lsphat", 4, 4);
            size_t missed = 0;
            for (const auto& m : lhs) {
                bool covered = false;
                for (const auto& r : rhs)
                    if (r.tuple == m.tuple && r.heap == m.heap) { covered = true; break; }
                if (!covered) ++missed;
            }
            if (missed) pass = false;
            detail += ", separation 4-unfold misses: " + std::to_string(missed);
        }
        size_t unverified = 0;
        for (const auto& [name, out] : acc.disproved)
            if (!out.cex || !out.cex->verified) ++unverified;
        for (const auto& inst : fuzz_rep.instances)
            if (!inst.witness_ok) ++unverified;
        if (unverified) pass = false;
        detail += ", unverified witnesses: " + std::to_string(unverified);
        report(5, pass, detail);
    }

    // ---- criterion 6: strategy and structure properties ----
    {
        size_t violations = 0, proofs = 0;
        auto check_shape = [&](const ProofNode& p) {
            ++proofs;
            violations += validate_proof_shape(p, strat).size();
        };
        for (const auto& [name, out] : acc.proved)
            if (out.proof) check_shape(*out.proof);
        for (uint64_t seed = 1; seed <= 40; ++seed) {
            FuzzOptions fopt;
            Nfta a = random_nfta(seed, fopt.max_states, fopt.max_rank, fopt.max_symbols);
            std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc909ULL);
            std::vector<std::string> states(a.states.begin(), a.states.end());
            std::string lhs = states[rng() % states.size()];
            std::set<std::string> rhs;
            for (const auto& q : states)
                if (rng() & 1) rhs.insert(q);
            if (rhs.empty()) rhs.insert(states[rng() % states.size()]);
            InductiveSystem sys = nfta_to_system(a);
            EntailmentQuery q{lhs, std::vector<std::string>(rhs.begin(), rhs.end())};
            auto out = prove_query(sys, q, strat, qopt);
            if (out.kind == QueryOutcome::Kind::Proved) check_shape(*out.proof);
        }
        report(6, violations == 0,
               std::to_string(proofs) + " proofs checked for strategy conformance, backlink legality and " +
                   "reduction-between-unfoldings; violations: " + std::to_string(violations));
    }

    // ---- criterion 7: certificate mutation resistance ----
    {
        size_t applied = 0, rejected = 0;
        for (const char* name : {"fol_pq.sys", "sl_ls.sys"}) {
            auto pf = load(name);
            auto out = prove_query(pf.system, pf.queries[0], strat, qopt);
            if (out.kind != QueryOutcome::Kind::Proved) continue;
            auto cert = make_certificate(pf.system, pf.queries[0], strat.source(), *out.proof);
            for (const auto& [label, mutate] : indescent::testing::standard_mutations()) {
                ProofCertificate m = cert;
                if (!mutate(m)) continue;
                ++applied;
                auto res = check_proof(pf.system, m);
                if (!res.valid()) ++rejected;
                else std::cout << "  accepted mutation: " << label << " on " << name << "\n";
            }
        }
        report(7, applied >= 20 && rejected == applied,
               std::to_string(rejected) + "/" + std::to_string(applied) + " mutations rejected with a pinpointed node");
    }

    // ---- criterion 8: theory unit properties ----
    {
        auto t0 = Clock::now();
        bool pass = true;
        std::string detail;

        {
            std::mt19937_64 rng(99);
            auto rnd = [&](auto&& self, int d) -> Term {
                switch (rng() % (d <= 0 ? 3 : 5)) {
                    case 0: return tt("a", {});
                    case 1: return tt("b", {});
                    case 2: return Term::var("v" + std::to_string(rng() % 4), "T");
                    case 3: return tt("g", {self(self, d - 1)});
                    default: return tt("f", {self(self, d - 1), self(self, d - 1)});
                }
            };
            size_t bad = 0;
            for (int i = 0; i < 1000; ++i) {
                Term s = rnd(rnd, 3), t = rnd(rnd, 3);
                auto mgu = unify({{s, t}});
                if (!mgu) continue;
                if (!(mgu->apply(s) == mgu->apply(t))) ++bad;
                Term probe = tt("f", {s, t});
                if (!(mgu->apply(mgu->apply(probe)) == mgu->apply(probe))) ++bad;
            }
            if (bad) pass = false;
            detail += "unification violations: " + std::to_string(bad);
        }

        {
            auto pq = load("fol_pq.sys");
            size_t mismatches = 0;
            for (const auto& r1 : pq.system.rules) {
                for (const auto& r2 : pq.system.rules) {
                    const auto& phi = std::get<LiteralConstraint>(r1.constraint);
                    auto sorts1 = pq.system.rule_var_sorts(r1);
                    auto sorts2 = pq.system.rule_var_sorts(r2);
                    std::map<std::string, std::string> ren;
                    for (size_t i = 0; i < r2.goal.args.size(); ++i) ren[r2.goal.args[i]] = r1.goal.args[i];
                    int fresh = 0;
                    for (const auto& s : r2.subgoals)
                        for (const auto& v : s.args) ren.emplace(v, "_e" + std::to_string(fresh++));
                    Substitution sub;
                    const auto& lc2 = std::get<LiteralConstraint>(r2.constraint);
                    for (const auto& v : lc2.free_vars())
                        if (ren.count(v.name())) sub.bind(v, Term::var(ren.at(v.name()), v.sort()));
                    WitnessRequest req;
                    req.phi = phi;
                    for (const auto& s : r1.subgoals)
                        for (const auto& v : s.args) req.image_vars.push_back(Term::var(v, sorts1.at(v)));
                    for (const auto& v : r1.goal.args) req.image_vars.push_back(Term::var(v, sorts1.at(v)));
                    std::vector<Term> ex;
                    for (const auto& s : r2.subgoals)
                        for (const auto& v : s.args) ex.push_back(Term::var(ren.at(v), sorts2.at(v)));
                    req.ex_tuples = {ex};
                    req.psi = lc2.substituted(sub);
                    auto flat = h_witnesses(pq.system.signature, req, WitnessMode::Flat);
                    auto oracle = h_witnesses(pq.system.signature, req, WitnessMode::SubtermBounded);
                    std::vector<Substitution> oracle_flat;
                    for (const auto& th : oracle.witnesses) {
                        bool is_flat = true;
                        for (const auto& [k, t] : th.entries())
                            if (!t.is_var()) is_flat = false;
                        if (is_flat) oracle_flat.push_back(th);
                    }
                    if (!(oracle_flat == flat.witnesses)) ++mismatches;
                }
            }
            if (mismatches) pass = false;
            detail += ", witness-mode mismatches: " + std::to_string(mismatches);
        }

        {
            std::mt19937_64 rng(2024);
            static const std::vector<std::string> pool{"x", "y", "z", "w"};
            auto random_heap = [&]() {
                SymbolicHeap h;
                size_t npure = rng() % 3;
                for (size_t i = 0; i < npure; ++i)
                    h.pure.push_back(PureLit{(rng() & 1) != 0, pool[rng() % pool.size()], pool[rng() % pool.size()]});
                size_t nsp = rng() % 3;
                for (size_t i = 0; i < nsp; ++i)
                    h.spatial.push_back(PtoAtom{pool[rng() % pool.size()], {pool[rng() % pool.size()]}});
                h.normalize();
                return h;
            };
            size_t disagreements = 0;
            for (int i = 0; i < 500; ++i) {
                SymbolicHeap phi = random_heap(), psi = random_heap();
                if (sh_entails(phi, psi) != sm_entails(phi, psi, 4)) ++disagreements;
            }
            if (disagreements) pass = false;
            detail += ", small-model disagreements: " + std::to_string(disagreements);
        }

        int64_t ms = ms_since(t0);
        if (ms >= 60000) pass = false;
        report(8, pass, detail + " (" + std::to_string(ms) + " ms)");
    }

    std::cout << (failures == 0 ? "all acceptance criteria pass"
                                : std::to_string(failures) + " acceptance criterion(s) fail")
              << "\n";
    return failures == 0 ? 0 : 1;
}
