#include <doctest.h>

#include <fstream>
#include <sstream>

#include "indescent/certificate.hpp"
#include "indescent/herbrand.hpp"
#include "indescent/parser.hpp"
#include "indescent/search.hpp"

using namespace indescent;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParsedFile load(const std::string& name) { return parse_system(slurp(std::string(TEST_DATA_DIR) + "/" + name)); }

const Strategy& default_strategy() {
    static Strategy s(Strategy::default_regex());
    return s;
}

size_t count_rule(const ProofNode& n, RuleLabel l) {
    size_t c = n.rule == l ? 1 : 0;
    for (const auto& ch : n.children) c += count_rule(*ch, l);
    return c;
}

} // namespace

TEST_CASE("strategy automaton accepts exactly the intended words") {
    const Strategy& s = default_strategy();
    using L = RuleLabel;
    CHECK(s.accepts_word({L::AX}));
    CHECK(s.accepts_word({L::LU, L::RU, L::AX}));
    CHECK(s.accepts_word({L::LU, L::RU, L::RU, L::RD, L::ID}));
    CHECK(s.accepts_word({L::LU, L::RU, L::RD, L::SP, L::LU, L::RU, L::RU, L::RD, L::ID}));
    CHECK(s.accepts_word({L::LU, L::RU, L::RD, L::AR, L::AR, L::SP, L::LU, L::AX}));
    CHECK(s.accepts_word({L::LU, L::RU, L::RD, L::RU, L::RU, L::AX})); // tail unfolds after the loop

    CHECK_FALSE(s.accepts_word({L::LU, L::LU, L::AX}));      // two unfolds without a reduction
    CHECK_FALSE(s.accepts_word({L::RU, L::LU, L::AX}));      // unfold after the tail started
    CHECK_FALSE(s.accepts_word({L::LU, L::RU, L::RD}));      // open path
    CHECK_FALSE(s.accepts_word({L::SP, L::AX}));             // split before any reduction
    CHECK_FALSE(s.accepts_word({L::LU, L::AR, L::AX}));      // weakening outside the reduction block

    CHECK_THROWS_AS(Strategy("(LU"), StrategyParseError);
    CHECK_THROWS_AS(Strategy("XY"), StrategyParseError);
}

TEST_CASE("left unfolding on the example root") {
    auto pf = load("fol_pq.sys");
    Sequent root = make_root_sequent(pf.system, pf.queries[0]);
    VarGen vg;
    auto lu = apply_lu(pf.system, root, vg);
    REQUIRE(lu.has_value());
    REQUIRE(lu->antecedents.size() == 1); // p has one rule
    const Sequent& a = lu->antecedents[0];
    CHECK(a.lhs_constraints.size() == 1);
    CHECK(a.lhs_atoms.size() == 2); // p1 and p2 subgoals
    CHECK(a.rhs.size() == 1);       // q(x) untouched

    // unfolding p1 on a basic sequent yields two antecedents
    Sequent basic;
    basic.theory = Theory::Herbrand;
    basic.lhs_atoms = {PredAtom{"p1", {"x1"}}};
    RightMember m1, m2;
    m1.atoms = {PredAtom{"q1", {"x1"}}};
    m2.atoms = {PredAtom{"q2", {"x1"}}};
    basic.rhs = {m1, m2};
    basic.normalize(pf.system.signature);
    auto lu2 = apply_lu(pf.system, basic, vg);
    REQUIRE(lu2.has_value());
    CHECK(lu2->antecedents.size() == 2);
}

TEST_CASE("right unfolding replaces the atom by quantified members") {
    auto pf = load("fol_pq.sys");
    Sequent root = make_root_sequent(pf.system, pf.queries[0]);
    VarGen vg;
    auto lu = apply_lu(pf.system, root, vg);
    REQUIRE(lu.has_value());
    auto ru = apply_ru(pf.system, lu->antecedents[0], vg);
    REQUIRE(ru.has_value());
    const Sequent& s = ru->antecedent;
    CHECK(s.rhs.size() == 2); // both f-rules of q
    for (const auto& m : s.rhs) {
        CHECK(m.is_quantified());
        CHECK(m.ex_vars.size() == 2);
        CHECK(m.atoms.size() == 2);
    }
    // no bare atom left, so a second application is not possible
    CHECK_FALSE(apply_ru(pf.system, s, vg).has_value());
}

TEST_CASE("reduction matches the example step exactly") {
    auto pf = load("fol_pq.sys");
    Sequent root = make_root_sequent(pf.system, pf.queries[0]);
    VarGen vg;
    auto lu = apply_lu(pf.system, root, vg);
    auto ru = apply_ru(pf.system, lu->antecedents[0], vg);
    REQUIRE(ru.has_value());
    auto rd = apply_rd(pf.system, ru->antecedent);
    REQUIRE(rd.has_value());
    // both unfoldings of q are entailed, each with a single witness
    CHECK(rd->witness.entailed == std::vector<bool>{true, true});
    CHECK(rd->witness.witnesses[0].size() == 1);
    CHECK(rd->witness.witnesses[1].size() == 1);
    const Sequent& a = rd->antecedent;
    CHECK(a.lhs_constraints.empty());
    CHECK(a.lhs_atoms.size() == 2);
    REQUIRE(a.rhs.size() == 2);
    for (const auto& m : a.rhs) {
        CHECK_FALSE(m.is_quantified());
        CHECK(m.atoms.size() == 2); // q_i(x1) & q_j(x2)
    }
}

TEST_CASE("reduction drops non-entailed members") {
    auto pf = load("fol_pq.sys");
    // x = g(x1), p1(x1) |- x = a, exists y1 . x = g(y1) & q1(y1),
    //                       x = b, exists y1 . x = g(y1) & q2(y1)
    Sequent s;
    s.theory = Theory::Herbrand;
    Term x = Term::var("x", "T"), x1 = Term::var("x1", "T"), y1 = Term::var("y1", "T");
    LiteralConstraint xg;
    xg.add(Literal{true, x, Term::app("g", "T", {x1})});
    xg.normalize();
    s.lhs_constraints = {xg};
    s.lhs_atoms = {PredAtom{"p1", {"x1"}}};
    auto leaf = [&](const char* c) {
        RightMember m;
        LiteralConstraint lc;
        lc.add(Literal{true, x, Term::app(c, "T", {})});
        lc.normalize();
        m.constraint = lc;
        return m;
    };
    auto gmem = [&](const char* q) {
        RightMember m;
        m.ex_vars = {"y1"};
        LiteralConstraint lc;
        lc.add(Literal{true, x, Term::app("g", "T", {y1})});
        lc.normalize();
        m.constraint = lc;
        m.atoms = {PredAtom{q, {"y1"}}};
        return m;
    };
    s.rhs = {leaf("a"), gmem("q1"), leaf("b"), gmem("q2")};
    s.normalize(pf.system.signature);

    auto rd = apply_rd(pf.system, s);
    REQUIRE(rd.has_value());
    int kept = 0;
    for (bool e : rd->witness.entailed)
        if (e) ++kept;
    CHECK(kept == 2); // the two g-members survive, the constants drop
    const Sequent& a = rd->antecedent;
    CHECK(a.lhs_atoms == std::vector<PredAtom>{PredAtom{"p1", {"x1"}}});
    REQUIRE(a.rhs.size() == 2);
    for (const auto& m : a.rhs) CHECK(m.is_bare_atom()); // q1(x1) and q2(x1)
}

TEST_CASE("reduction with nothing entailed produces the dead sequent") {
    auto pf = load("fol_pq.sys");
    Sequent s;
    s.theory = Theory::Herbrand;
    Term x = Term::var("x", "T");
    LiteralConstraint xb;
    xb.add(Literal{true, x, Term::app("b", "T", {})});
    xb.normalize();
    s.lhs_constraints = {xb};
    RightMember m;
    LiteralConstraint xa;
    xa.add(Literal{true, x, Term::app("a", "T", {})});
    xa.normalize();
    m.constraint = xa;
    s.rhs = {m};
    s.normalize(pf.system.signature);
    auto rd = apply_rd(pf.system, s);
    REQUIRE(rd.has_value());
    CHECK(rd->antecedent.rhs.empty());
}

TEST_CASE("the split rule produces the expected components for some choice") {
    auto pf = load("fol_pq.sys");
    Sequent root = make_root_sequent(pf.system, pf.queries[0]);
    VarGen vg;
    auto lu = apply_lu(pf.system, root, vg);
    auto ru = apply_ru(pf.system, lu->antecedents[0], vg);
    auto rd = apply_rd(pf.system, ru->antecedent);
    REQUIRE(rd.has_value());
    auto shape = sp_shape(pf.system, rd->antecedent);
    REQUIRE(shape.has_value());
    CHECK(shape->n == 2);
    CHECK(shape->k == 2);

    bool found = false;
    for (int c0 = 0; c0 < 2 && !found; ++c0)
        for (int c1 = 0; c1 < 2 && !found; ++c1)
            for (int c2 = 0; c2 < 2 && !found; ++c2)
                for (int c3 = 0; c3 < 2 && !found; ++c3) {
                    auto antes = apply_sp(pf.system, rd->antecedent, *shape, {c0, c1, c2, c3});
                    if (antes.size() < 3) continue;
                    bool good = true;
                    for (const auto& sq : antes) good = good && !sq.rhs.empty() && sq.is_basic();
                    found = good;
                }
    CHECK(found);
}

TEST_CASE("axiom closes the constant leaf of the example") {
    auto pf = load("fol_pq.sys");
    Sequent s;
    s.theory = Theory::Herbrand;
    LiteralConstraint xa;
    xa.add(Literal{true, Term::var("x", "T"), Term::app("a", "T", {})});
    xa.normalize();
    s.lhs_constraints = {xa};
    RightMember m1;
    m1.constraint = xa;
    RightMember m2;
    m2.ex_vars = {"y1"};
    LiteralConstraint xg;
    xg.add(Literal{true, Term::var("x", "T"), Term::app("g", "T", {Term::var("y1", "T")})});
    xg.normalize();
    m2.constraint = xg;
    m2.atoms = {PredAtom{"q1", {"y1"}}};
    RightMember m3;
    m3.atoms = {PredAtom{"q2", {"x"}}};
    s.rhs = {m1, m2, m3};
    s.normalize(pf.system.signature);

    auto ax = try_ax(pf.system, s);
    REQUIRE(ax.has_value());
    CHECK(verify_ax(pf.system, s, *ax));

    Sequent pp;
    pp.theory = Theory::Herbrand;
    pp.lhs_atoms = {PredAtom{"p", {"x"}}};
    RightMember mp;
    mp.atoms = {PredAtom{"p", {"x"}}};
    pp.rhs = {mp};
    pp.normalize(pf.system.signature);
    CHECK(try_ax(pf.system, pp).has_value());

    Sequent pq = make_root_sequent(pf.system, pf.queries[0]);
    CHECK_FALSE(try_ax(pf.system, pq).has_value());
}

TEST_CASE("a universal member closes any sequent") {
    auto pf = load("fol_pq.sys");
    Sequent s;
    s.theory = Theory::Herbrand;
    s.lhs_atoms = {PredAtom{"p", {"x"}}};
    RightMember m;
    m.atoms = {PredAtom{InductiveSystem::universal_name(1), {"x"}}};
    s.rhs = {m};
    s.normalize(pf.system.signature);
    CHECK(try_ax(pf.system, s).has_value());
}

TEST_CASE("backlinks need a left unfolding on the direct path") {
    auto pf = load("fol_pq.sys");
    Sequent basic;
    basic.theory = Theory::Herbrand;
    basic.lhs_atoms = {PredAtom{"p1", {"x"}}};
    RightMember m1, m2;
    m1.atoms = {PredAtom{"q1", {"x"}}};
    m2.atoms = {PredAtom{"q2", {"x"}}};
    basic.rhs = {m1, m2};
    basic.normalize(pf.system.signature);

    Sequent renamed;
    renamed.theory = Theory::Herbrand;
    renamed.lhs_atoms = {PredAtom{"p1", {"z"}}};
    RightMember n1, n2;
    n1.atoms = {PredAtom{"q1", {"z"}}};
    n2.atoms = {PredAtom{"q2", {"z"}}};
    renamed.rhs = {n1, n2};
    renamed.normalize(pf.system.signature);

    std::vector<PathFrame> with_lu{{&basic, RuleLabel::LU}, {&renamed, RuleLabel::RU}};
    auto id = try_id(pf.system, renamed, with_lu);
    REQUIRE(id.has_value());
    CHECK(id->steps_up == 2);
    CHECK(verify_id(pf.system, renamed, basic, id->theta));

    std::vector<PathFrame> without_lu{{&basic, RuleLabel::RU}, {&renamed, RuleLabel::RU}};
    CHECK_FALSE(try_id(pf.system, renamed, without_lu).has_value());

    // a smaller right-hand side may not subsume a larger pivot
    Sequent smaller = renamed;
    smaller.rhs.pop_back();
    smaller.normalize(pf.system.signature);
    std::vector<PathFrame> path2{{&basic, RuleLabel::LU}};
    CHECK_FALSE(try_id(pf.system, smaller, path2).has_value());
}

TEST_CASE("search proves the inclusion direction and refutes the converse") {
    auto pf = load("fol_pq.sys");
    QueryOptions opt;
    auto out = prove_query(pf.system, pf.queries[0], default_strategy(), opt);
    REQUIRE(out.kind == QueryOutcome::Kind::Proved);
    CHECK(validate_proof_shape(*out.proof, default_strategy()).empty());
    CHECK(count_rule(*out.proof, RuleLabel::SP) >= 1);
    CHECK(count_rule(*out.proof, RuleLabel::ID) >= 1);

    auto qp = load("fol_qp.sys");
    auto out2 = prove_query(qp.system, qp.queries[0], default_strategy(), opt);
    REQUIRE(out2.kind == QueryOutcome::Kind::Disproved);
    REQUIRE(out2.cex.has_value());
    CHECK(out2.cex->verified);
    REQUIRE(out2.cex->tuple.size() == 1);
    CHECK(out2.cex->tuple[0] == Term::app("f", "T", {Term::app("b", "T", {}), Term::app("a", "T", {})}));
}

TEST_CASE("search proves the list-segment entailment and refutes its converse") {
    auto pf = load("sl_ls.sys");
    QueryOptions opt;
    auto out = prove_query(pf.system, pf.queries[0], default_strategy(), opt);
    REQUIRE(out.kind == QueryOutcome::Kind::Proved);
    CHECK(validate_proof_shape(*out.proof, default_strategy()).empty());
    CHECK(count_rule(*out.proof, RuleLabel::ID) >= 1);

    auto rev = load("sl_ls_rev.sys");
    auto out2 = prove_query(rev.system, rev.queries[0], default_strategy(), opt);
    REQUIRE(out2.kind == QueryOutcome::Kind::Disproved);
    REQUIRE(out2.cex.has_value());
    CHECK(out2.cex->verified);
    REQUIRE(out2.cex->sl_model.has_value());
    // the unfolding-tree semantics separates them, the plain one does not
    CHECK_FALSE(out2.cex->sl_plain_semantics_too);
}

TEST_CASE("a plainly false separation entailment yields a heap counterexample") {
    std::string text = slurp(std::string(TEST_DATA_DIR) + "/sl_ls.sys");
    text = text.substr(0, text.find("(entails")) + "(entails lse (lso))\n";
    auto pf = parse_system(text);
    QueryOptions opt;
    auto out = prove_query(pf.system, pf.queries[0], default_strategy(), opt);
    REQUIRE(out.kind == QueryOutcome::Kind::Disproved);
    REQUIRE(out.cex.has_value());
    CHECK(out.cex->verified);
    CHECK(out.cex->sl_plain_semantics_too); // the empty even segment is no odd segment
    CHECK(out.cex->sl_model->heap.size() == 0);
}

TEST_CASE("identical runs produce identical proofs") {
    auto pf = load("fol_pq.sys");
    QueryOptions opt;
    auto o1 = prove_query(pf.system, pf.queries[0], default_strategy(), opt);
    auto o2 = prove_query(pf.system, pf.queries[0], default_strategy(), opt);
    REQUIRE(o1.kind == QueryOutcome::Kind::Proved);
    REQUIRE(o2.kind == QueryOutcome::Kind::Proved);
    auto c1 = make_certificate(pf.system, pf.queries[0], default_strategy().source(), *o1.proof);
    auto c2 = make_certificate(pf.system, pf.queries[0], default_strategy().source(), *o2.proof);
    CHECK(write_certificate(c1) == write_certificate(c2));
}

TEST_CASE("node budget exhaustion reports unknown") {
    auto pf = load("fol_pq.sys");
    QueryOptions opt;
    opt.limits.max_nodes = 3;
    auto out = prove_query(pf.system, pf.queries[0], default_strategy(), opt);
    CHECK(out.kind == QueryOutcome::Kind::Unknown);
}

TEST_CASE("proved queries never contradict the bounded enumeration") {
    auto pf = load("fol_pq.sys");
    QueryOptions opt;
    auto out = prove_query(pf.system, pf.queries[0], default_strategy(), opt);
    REQUIRE(out.kind == QueryOutcome::Kind::Proved);
    auto lhs = h_enumerate(pf.system, "p", 4);
    auto rhs = h_enumerate(pf.system, "q", 4);
    for (const auto& t : lhs) CHECK(rhs.count(t) == 1);
}

TEST_CASE("padding, weakening and the universal axiom on the merged branch") {
    // The added rule x = f(x1,x2) & x1 = x2 breaks non-filtering, so
    // completeness is forfeit: its branch reduces to a semantically false
    // antecedent and the honest overall outcome is unknown, never a
    // fabricated counterexample (p |= q still holds).
    auto pf = load("fol_nonfilter.sys");
    QueryOptions opt;
    auto out = prove_query(pf.system, pf.queries[0], default_strategy(), opt);
    CHECK(out.kind == QueryOutcome::Kind::Unknown);

    // unit level: the reduction pads the orphaned tuple with a universal
    // atom, the weakening rule splits the collapsed duplicates, and the
    // universal component closes by the axiom
    Sequent root = make_root_sequent(pf.system, pf.queries[0]);
    VarGen vg;
    auto lu = apply_lu(pf.system, root, vg);
    REQUIRE(lu.has_value());
    REQUIRE(lu->antecedents.size() == 2);
    auto ru = apply_ru(pf.system, lu->antecedents[1], vg);
    REQUIRE(ru.has_value());
    auto rd = apply_rd(pf.system, ru->antecedent);
    REQUIRE(rd.has_value());
    REQUIRE(rd->antecedent.rhs.size() == 1); // both unfoldings collapse onto x1
    bool padded = false;
    for (const auto& a : rd->antecedent.rhs[0].atoms)
        if (InductiveSystem::is_universal(a.pred)) padded = true;
    CHECK(padded);

    auto ar = apply_ar(pf.system, rd->antecedent);
    REQUIRE(ar.has_value());
    REQUIRE(ar->antecedents.size() == 2);
    for (const auto& ante : ar->antecedents) {
        auto shape = sp_shape(pf.system, ante);
        REQUIRE(shape.has_value());
        // the universal column closes by the axiom
        for (size_t cf = 0; cf < shape->n; ++cf)
            for (size_t i = 0; i < shape->n; ++i) {
                Sequent pair = sp_pair_sequent(pf.system, ante, *shape, cf, i);
                if (pair.rhs.size() == 1 && pair.rhs[0].is_bare_atom() &&
                    InductiveSystem::is_universal(pair.rhs[0].atoms[0].pred))
                    CHECK(try_ax(pf.system, pair).has_value());
            }
    }
}
