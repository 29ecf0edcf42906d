#include <doctest.h>

#include <fstream>
#include <sstream>

#include "indescent/parser.hpp"

using namespace indescent;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("the example system parses to eleven rules") {
    // six predicate definitions, alternatives written as separate rules
    auto pf = parse_system(slurp(std::string(TEST_DATA_DIR) + "/fol_pq.sys"));
    CHECK(pf.system.rules.size() == 11);
    CHECK(pf.system.predicates.size() == 6);
    CHECK(pf.queries.size() == 1);
    CHECK(pf.queries[0].lhs == "p");

    CHECK(pf.system.rules_of("p1").size() == 2);
    const auto* r0 = pf.system.rules_of("p1")[0];
    CHECK(r0->subgoals.size() == 1); // source order: the g-rule first
    CHECK(pf.system.rules_of("p1")[1]->subgoals.empty());
    CHECK_THROWS_AS((void)pf.system.rules_of("nosuch"), UnknownPredicate);
}

TEST_CASE("parse-print-parse round trip") {
    auto pf = parse_system(slurp(std::string(TEST_DATA_DIR) + "/fol_pq.sys"));
    std::string printed = pf.system.print();
    auto again = parse_system(printed + "\n(entails p (q))\n");
    CHECK(again.system.print() == printed);
    CHECK(again.system.rules.size() == pf.system.rules.size());

    auto sl = parse_system(slurp(std::string(TEST_DATA_DIR) + "/sl_ls.sys"));
    auto sl2 = parse_system(sl.system.print());
    CHECK(sl2.system.print() == sl.system.print());
}

TEST_CASE("disjunctive constraints are split into one rule per disjunct") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun g (T) T)
(fun a () T)
(fun b () T)
(pred p (T))
(rule (p (x)) (constraint (or (= x a) (= x b))) (subgoals ()))
)";
    auto pf = parse_system(text);
    CHECK(pf.system.rules.size() == 2);
    for (const auto& r : pf.system.rules) {
        const auto& lc = std::get<LiteralConstraint>(r.constraint);
        CHECK(lc.literals().size() == 1); // no disjunction survives
    }
}

TEST_CASE("validation rejects a predicate that is never a goal") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun a () T)
(pred p (T))
(pred q (T))
(rule (p (x)) (constraint (= x a)) (subgoals ((q x1))))
)";
    CHECK_THROWS_AS(parse_system(text), ValidationError);
}

TEST_CASE("validation rejects shared goal and subgoal variables") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun a () T)
(pred p (T))
(rule (p (x)) (constraint (= x a)) (subgoals ((p x))))
)";
    CHECK_THROWS_AS(parse_system(text), ValidationError);
}

TEST_CASE("validation rejects differing goal tuples for one predicate") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun a () T)
(pred p (T))
(rule (p (x)) (constraint (= x a)) (subgoals ()))
(rule (p (y)) (constraint (= y a)) (subgoals ()))
)";
    CHECK_THROWS_AS(parse_system(text), ValidationError);
}

TEST_CASE("reserved variable prefixes are rejected") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun a () T)
(pred p (T))
(rule (p (_v0)) (constraint (= _v0 a)) (subgoals ()))
)";
    CHECK_THROWS(parse_system(text));
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_system("(theory herbrand)\n(sort");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_system("(theory weird)"), ParseError);
    CHECK_THROWS_AS(parse_system("(sort T)"), ParseError); // missing theory
}

TEST_CASE("separation logic systems fix the record width") {
    auto sl = parse_system(slurp(std::string(TEST_DATA_DIR) + "/sl_ls.sys"));
    CHECK(sl.system.theory == Theory::SeparationLogic);
    CHECK(sl.system.record_width == 1);

    std::string text = R"(
(theory seplog)
(pred p (Loc Loc))
(rule (p (x y)) (constraint (pto x (y y))) (subgoals ()))
(rule (p (x y)) (constraint (pto x (y))) (subgoals ()))
)";
    CHECK_THROWS(parse_system(text)); // width 2 then width 1
}

TEST_CASE("entailment queries must agree on argument sorts") {
    std::string text = R"(
(theory herbrand)
(sort T)
(sort U)
(fun a () T)
(fun u () U)
(pred p (T))
(pred r (U))
(rule (p (x)) (constraint (= x a)) (subgoals ()))
(rule (r (x)) (constraint (= x u)) (subgoals ()))
(entails p (r))
)";
    CHECK_THROWS_AS(parse_system(text), ParseError);
}

TEST_CASE("universal rules carry a trivial constraint and no subgoals") {
    std::string text = R"(
(theory herbrand)
(sort T)
(fun a () T)
(pred p (T))
(rule (p (x)) (constraint (= x a)) (subgoals ()))
)";
    auto pf = parse_system(text);
    auto r = pf.system.universal_rule(2, {"T", "T"});
    CHECK(r.goal.pred == InductiveSystem::universal_name(2));
    CHECK(r.goal.args.size() == 2);
    CHECK(r.subgoals.empty());
    CHECK(std::get<LiteralConstraint>(r.constraint).trivially_true());
    CHECK(InductiveSystem::is_universal(r.goal.pred));
}
