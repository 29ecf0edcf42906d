#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "indescent/parser.hpp"
#include "indescent/seplog.hpp"

using namespace indescent;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const InductiveSystem& ls_system() {
    static ParsedFile pf = parse_system(slurp(std::string(TEST_DATA_DIR) + "/sl_ls.sys"));
    return pf.system;
}

SymbolicHeap sh(std::vector<PureLit> pure, std::vector<PtoAtom> spatial) {
    SymbolicHeap h;
    h.pure = std::move(pure);
    h.spatial = std::move(spatial);
    h.normalize();
    return h;
}

PtoAtom pto(const std::string& s, const std::string& t) { return PtoAtom{s, {t}}; }

// random symbolic heap over a small variable pool
SymbolicHeap random_heap(std::mt19937_64& rng) {
    static const std::vector<std::string> pool{"x", "y", "z", "w"};
    SymbolicHeap h;
    size_t npure = rng() % 3;
    for (size_t i = 0; i < npure; ++i)
        h.pure.push_back(PureLit{(rng() & 1) != 0, pool[rng() % pool.size()], pool[rng() % pool.size()]});
    size_t nsp = rng() % 3;
    for (size_t i = 0; i < nsp; ++i) h.spatial.push_back(pto(pool[rng() % pool.size()], pool[rng() % pool.size()]));
    h.normalize();
    return h;
}

} // namespace

TEST_CASE("symbolic heap satisfiability") {
    CHECK(sh_sat(sh({{true, "y", "yp"}}, {pto("x", "z")})) == ShSat::Sat);
    CHECK(sh_sat(sh({{true, "x", "xp"}}, {pto("x", "y"), pto("xp", "z")})) == ShSat::Unsat); // double allocation
    CHECK(sh_sat(sh({{true, "x", "y"}, {false, "x", "y"}}, {})) == ShSat::Unsat);
}

TEST_CASE("precise entailment on the worked pairs") {
    SymbolicHeap phi = sh({}, {pto("x", "y")});
    SymbolicHeap psi = sh({{true, "y", "yp"}}, {pto("x", "z")});
    std::map<std::string, std::string> th{{"yp", "y"}, {"z", "y"}};
    CHECK(sh_entails(phi, psi, th));
    CHECK(sh_entails(phi, phi));
    CHECK_FALSE(sh_entails(phi, sh({}, {}))); // one cell does not entail emp
}

TEST_CASE("empty-heap possibility") {
    CHECK(sh_empty_possible(sh({{true, "x", "y"}}, {})));
    CHECK_FALSE(sh_empty_possible(sh({{true, "y", "yp"}}, {pto("x", "z")})));
    CHECK_FALSE(sh_empty_possible(sh({{true, "x", "y"}, {false, "x", "y"}}, {})));
}

TEST_CASE("witnesses on the fvi example pair") {
    ShWitnessRequest req;
    req.phi = sh({{true, "y", "y1"}}, {pto("x", "z1")});
    req.image_vars = {"z1", "y1", "x", "y"};
    req.ex_tuples = {{"z2", "y2"}};
    req.psi = sh({{true, "y", "y2"}}, {pto("x", "z2")});
    auto ws = sh_witnesses(req, ShWitnessMode::Flat);
    REQUIRE(ws.witnesses.size() == 1);
    CHECK(ws.witnesses[0].at("z2") == "z1");
    CHECK(ws.witnesses[0].at("y2") == "y1");

    // the small-model oracle agrees
    auto orc = sh_witnesses(req, ShWitnessMode::SmallModelOracle);
    CHECK(orc.witnesses == ws.witnesses);
}

TEST_CASE("no witness maps a nonempty spatial part onto emp") {
    ShWitnessRequest req;
    req.phi = sh({}, {pto("x", "y")});
    req.image_vars = {"x", "y"};
    req.ex_tuples = {{"u"}};
    req.psi = sh({{true, "u", "u"}}, {});
    CHECK(sh_witnesses(req, ShWitnessMode::Flat).witnesses.empty());
}

TEST_CASE("sh-entails agrees with the small-model oracle on random pairs") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        SymbolicHeap phi = random_heap(rng);
        SymbolicHeap psi = random_heap(rng);
        bool fast = sh_entails(phi, psi);
        bool slow = sm_entails(phi, psi, 4);
        CHECK(fast == slow);
        ++checked;
    }
    CHECK(checked == 500);
}

TEST_CASE("sh-sat has the small-model property") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 300; ++i) {
        SymbolicHeap phi = random_heap(rng);
        bool fast = sh_sat(phi) == ShSat::Sat;
        bool slow = sm_sat(phi, static_cast<int>(phi.vars().size()) + 1);
        CHECK(fast == slow);
    }
}

TEST_CASE("abstract least fixpoint on the list system") {
    const auto& sys = ls_system();
    auto lfp = sh_abstract_lfp(sys);

    // lsp: head allocated, head and tail may differ
    bool found_alloc_head = false;
    for (const auto& ap : lfp.at("lsp"))
        if (ap.allocated.count(0) && !ap.eq.count({0, 1})) found_alloc_head = true;
    CHECK(found_alloc_head);

    // lse: the empty segment forces equality of the two arguments
    bool found_empty = false;
    for (const auto& ap : lfp.at("lse"))
        if (ap.allocated.empty() && ap.eq.count({0, 1})) found_empty = true;
    CHECK(found_empty);

    // soundness: every enumerated model induces a pair in the fixpoint
    for (const auto& pred : {"lsp", "lse", "lso", "lsphat"}) {
        for (const auto& m : sh_enumerate(sys, pred, 3, 3)) {
            AbstractPair ap;
            auto dom = m.heap.dom();
            for (size_t i = 0; i < m.tuple.size(); ++i) {
                if (dom.count(m.tuple[i])) ap.allocated.insert(static_cast<int>(i));
                for (size_t j = 0; j < m.tuple.size(); ++j)
                    if (m.tuple[i] == m.tuple[j]) ap.eq.insert({static_cast<int>(i), static_cast<int>(j)});
            }
            CHECK(lfp.at(pred).count(ap) == 1);
        }
    }
}

TEST_CASE("bounded enumeration of list segments") {
    const auto& sys = ls_system();
    // one unfolding: exactly the one-cell lists
    auto lsp1 = sh_enumerate(sys, "lsp", 3, 1);
    for (const auto& m : lsp1) CHECK(m.heap.size() == 1);
    CHECK_FALSE(lsp1.empty());

    auto lso1 = sh_enumerate(sys, "lso", 3, 1);
    for (const auto& m : lso1) CHECK(m.heap.size() == 1);
    CHECK_FALSE(lso1.empty());

    // two unfoldings add the two-cell lists
    auto lsp2 = sh_enumerate(sys, "lsp", 4, 2);
    std::set<size_t> sizes;
    for (const auto& m : lsp2) sizes.insert(m.heap.size());
    CHECK(sizes == std::set<size_t>{1, 2});

    CHECK(sh_enumerate(sys, "lsp", 3, 0).empty());

    // unfolding trees partition the heap
    for (const auto& m : lsp2) {
        REQUIRE(m.tree);
        CHECK(m.tree->total() == m.heap);
    }
}

TEST_CASE("the even segment admits the empty model, the odd one does not") {
    const auto& sys = ls_system();
    bool lse_empty = false;
    for (const auto& m : sh_enumerate(sys, "lse", 3, 2))
        if (m.heap.size() == 0) lse_empty = true;
    CHECK(lse_empty);
    for (const auto& m : sh_enumerate(sys, "lso", 3, 3)) CHECK(m.heap.size() % 2 == 1);
}

TEST_CASE("the non-filtering abstraction accepts the list system") {
    CHECK_FALSE(sl_non_filtering_violation(ls_system()).has_value());
}

TEST_CASE("a constraint rejecting its subgoal footprint is caught") {
    // the rule q(x,y) <- x = z & pto(x, y), q'(z, y) forces the subgoal head
    // to equal the already-allocated goal head
    std::string text = R"(
(theory seplog)
(pred q (Loc Loc))
(pred qp (Loc Loc))
(rule (qp (x y)) (constraint (pto x (y))) (subgoals ()))
(rule (q (x y)) (constraint (and (= x z) (pto x (y)))) (subgoals ((qp z w))))
(rule (q (x y)) (constraint (pto x (y))) (subgoals ()))
)";
    auto pf = parse_system(text);
    auto viol = sl_non_filtering_violation(pf.system);
    REQUIRE(viol.has_value());
    CHECK(pf.system.rules[viol->rule_index].goal.pred == "q");
}
