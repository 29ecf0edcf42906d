#include <doctest.h>

#include <fstream>
#include <sstream>

#include "indescent/herbrand.hpp"
#include "indescent/parser.hpp"
#include "indescent/restrictions.hpp"

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

} // namespace

TEST_CASE("the tree-automata system passes all four checks") {
    auto pf = load("fol_pq.sys");
    RestrictionReport rep = check_restrictions(pf.system);
    CHECK(rep.non_filtering.verdict == Verdict::Pass);
    CHECK(rep.ranked.verdict == Verdict::Pass);
    CHECK(rep.fvi.verdict == Verdict::Pass);
    CHECK(rep.non_overlapping.verdict == Verdict::Pass);
}

TEST_CASE("the list-segment system passes all four checks") {
    auto pf = load("sl_ls.sys");
    RestrictionReport rep = check_restrictions(pf.system);
    CHECK(rep.non_filtering.verdict == Verdict::Pass);
    CHECK(rep.ranked.verdict == Verdict::Pass);
    CHECK(rep.fvi.verdict == Verdict::Pass);
    CHECK(rep.non_overlapping.verdict == Verdict::Pass);
}

TEST_CASE("the filtering rule is rejected with a replayable witness") {
    auto pf = load("fol_nonfilter.sys");
    auto res = check_non_filtering(pf.system);
    REQUIRE(res.verdict == Verdict::Fail);
    // replay: the failing rule's forall-exists check must reproduce Invalid
    bool replayed = false;
    for (size_t i = 0; i < pf.system.rules.size(); ++i) {
        const auto& d = res.details[i];
        if (d.verdict != Verdict::Fail) continue;
        const auto& r = pf.system.rules[i];
        auto sorts = pf.system.rule_var_sorts(r);
        std::vector<Term> goal, sub;
        for (const auto& v : r.goal.args) goal.push_back(Term::var(v, sorts.at(v)));
        for (const auto& s : r.subgoals)
            for (const auto& v : s.args) sub.push_back(Term::var(v, sorts.at(v)));
        auto fe = h_exists_forall(pf.system.signature, std::get<LiteralConstraint>(r.constraint), goal, sub, 3);
        CHECK(fe.verdict == ForallExistsVerdict::Invalid);
        replayed = true;
    }
    CHECK(replayed);
}

TEST_CASE("a rule equating goal and subgoal values is not ranked") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun g (T) T)
(fun a () T)
(pred p (T))
(rule (p (x)) (constraint (= x x1)) (subgoals ((p x1))))
(rule (p (x)) (constraint (= x a)) (subgoals ()))
)";
    auto pf = parse_system(text);
    auto res = check_ranked(pf.system);
    CHECK(res.verdict == Verdict::Fail);
}

TEST_CASE("a separation rule with an empty-heap constraint and a subgoal is not ranked") {
    std::string text = R"(
(theory seplog)
(pred p (Loc Loc))
(rule (p (x y)) (constraint (and (= x u) (= y w))) (subgoals ((p u w))))
(rule (p (x y)) (constraint (pto x (y))) (subgoals ()))
)";
    auto pf = parse_system(text);
    auto res = check_ranked(pf.system);
    CHECK(res.verdict == Verdict::Fail);
}

TEST_CASE("fvi fails when a witness maps a tuple onto repeated variables") {
    // phi has one unary subgoal; psi has one binary subgoal whose tuple can
    // only map onto (x1, x1)
    std::string text = R"(
(theory herbrand)
(sort T)
(fun f (T T) T)
(fun a () T)
(pred u (T))
(pred w (T T))
(pred p (T))
(pred r (T))
(rule (u (x)) (constraint (= x a)) (subgoals ()))
(rule (w (x y)) (constraint (and (= x a) (= y a))) (subgoals ()))
(rule (p (x)) (constraint (= x (f x1 x1))) (subgoals ((u x1))))
(rule (r (x)) (constraint (= x (f y1 y2))) (subgoals ((w y1 y2))))
)";
    auto pf = parse_system(text);
    auto res = check_fvi(pf.system);
    CHECK(res.verdict == Verdict::Fail);
}

TEST_CASE("fvi fails on a non-flat witness") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun f (T T) T)
(fun g (T) T)
(fun a () T)
(pred u (T))
(pred p (T))
(pred r (T))
(rule (u (x)) (constraint (= x a)) (subgoals ()))
(rule (p (x)) (constraint (= x (f (g x1) x2))) (subgoals ((u x1) (u x2))))
(rule (r (x)) (constraint (= x (f y1 y2))) (subgoals ((u y1) (u y2))))
)";
    auto pf = parse_system(text);
    auto res = check_fvi(pf.system);
    CHECK(res.verdict == Verdict::Fail);
}

TEST_CASE("overlap without entailment fails the non-overlapping check") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun f (T T) T)
(fun a () T)
(pred u (T))
(pred p (T))
(pred r (T))
(rule (u (x)) (constraint (= x a)) (subgoals ()))
(rule (p (x)) (constraint (= x (f x1 x2))) (subgoals ((u x1) (u x2))))
(rule (r (x)) (constraint (= x (f a y1))) (subgoals ((u y1))))
)";
    auto pf = parse_system(text);
    auto res = check_non_overlapping(pf.system);
    CHECK(res.verdict == Verdict::Fail);
}

TEST_CASE("verdicts are deterministic across runs") {
    auto pf = load("sl_ls.sys");
    auto r1 = check_restrictions(pf.system);
    auto r2 = check_restrictions(pf.system);
    CHECK(r1.render() == r2.render());
}

TEST_CASE("ranked systems strictly shrink the measure on enumerated models") {
    auto pf = load("fol_pq.sys");
    REQUIRE(check_ranked(pf.system).verdict == Verdict::Pass);
    // cross-check: on every rule firing reconstructible from the depth-3
    // enumeration, each subgoal value is a strict subterm of a goal value
    for (const auto& r : pf.system.rules) {
        if (r.subgoals.empty()) continue;
        const auto& lc = std::get<LiteralConstraint>(r.constraint);
        auto sorts = pf.system.rule_var_sorts(r);
        auto sub_models = h_enumerate(pf.system, r.subgoals[0].pred, 2);
        for (const auto& tuple : sub_models) {
            Substitution th;
            for (size_t j = 0; j < r.subgoals[0].args.size(); ++j)
                th.bind(Term::var(r.subgoals[0].args[j], sorts.at(r.subgoals[0].args[j])), tuple[j]);
            auto mu = unify(lc.substituted(th).equality_pairs());
            if (!mu) continue;
            for (const auto& garg : r.goal.args) {
                Term gv = mu->apply(Term::var(garg, sorts.at(garg)));
                if (!gv.is_ground()) continue;
                for (size_t j = 0; j < tuple.size(); ++j)
                    CHECK(subterm(tuple[j], gv) == SubtermRelation::StrictSubterm);
            }
        }
    }
}
