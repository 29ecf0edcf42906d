#include <doctest.h>

#include <random>

#include "indescent/term.hpp"

using namespace indescent;

namespace {

Signature example_sig() {
    Signature sig;
    sig.add_sort("T");
    sig.add_function("f", {"T", "T"}, "T");
    sig.add_function("g", {"T"}, "T");
    sig.add_function("a", {}, "T");
    sig.add_function("b", {}, "T");
    return sig;
}

Term v(const std::string& n) { return Term::var(n, "T"); }
Term a() { return Term::app("a", "T", {}); }
Term b() { return Term::app("b", "T", {}); }
Term g(Term t) { return Term::app("g", "T", {std::move(t)}); }
Term f(Term s, Term t) { return Term::app("f", "T", {std::move(s), std::move(t)}); }

// weight-bounded random term generator for property tests
Term random_term(std::mt19937_64& rng, int depth) {
    switch (rng() % (depth <= 0 ? 3 : 5)) {
        case 0: return a();
        case 1: return b();
        case 2: return v("v" + std::to_string(rng() % 4));
        case 3: return g(random_term(rng, depth - 1));
        default: return f(random_term(rng, depth - 1), random_term(rng, depth - 1));
    }
}

} // namespace

TEST_CASE("subterm relation on the worked examples") {
    CHECK(subterm(a(), f(g(a()), b())) == SubtermRelation::StrictSubterm);
    Term t = f(g(a()), b());
    CHECK(subterm(t, t) == SubtermRelation::Equal);
    CHECK(subterm(g(b()), f(g(a()), b())) == SubtermRelation::NotSubterm);
}

TEST_CASE("subterm is a strict partial order on random ground terms") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        Term x = random_term(rng, 3);
        CHECK(subterm(x, x) == SubtermRelation::Equal); // never strict on equal terms
        Term y = random_term(rng, 3);
        Term z = random_term(rng, 3);
        if (subterm(x, y) == SubtermRelation::StrictSubterm && subterm(y, z) == SubtermRelation::StrictSubterm)
            CHECK(subterm(x, z) == SubtermRelation::StrictSubterm);
    }
}

TEST_CASE("substitution application") {
    Substitution th;
    th.bind(v("x"), a());
    CHECK(th.apply(f(v("x"), v("y"))) == f(a(), v("y")));
    Substitution id;
    Term t = f(g(v("x")), v("y"));
    CHECK(id.apply(t) == t);
    Substitution sim;
    sim.bind(v("x"), g(v("x1")));
    CHECK(sim.apply(f(v("x"), v("x"))) == f(g(v("x1")), g(v("x1"))));
}

TEST_CASE("unification basics") {
    auto r1 = unify({{v("x"), f(v("y"), b())}});
    REQUIRE(r1.has_value());
    CHECK(r1->apply(v("x")) == f(v("y"), b()));

    CHECK_FALSE(unify({{v("x"), f(v("x"), b())}}).has_value()); // occurs check

    auto r2 = unify({{f(v("x"), g(v("y"))), f(a(), v("z"))}});
    REQUIRE(r2.has_value());
    CHECK(r2->apply(f(v("x"), g(v("y")))) == r2->apply(f(a(), v("z"))));
}

TEST_CASE("unifier soundness, idempotence and most-generality on random instances") {
    std::mt19937_64 rng(42);
    int solved = 0;
    for (int i = 0; i < 1000; ++i) {
        Term s = random_term(rng, 3);
        Term t = random_term(rng, 3);
        auto mgu = unify({{s, t}});
        if (!mgu) continue;
        ++solved;
        CHECK(mgu->apply(s) == mgu->apply(t));
        // idempotence on a probe term mentioning all variables
        Term probe = f(s, t);
        CHECK(mgu->apply(mgu->apply(probe)) == mgu->apply(probe));
        // most-generality: a ground unifier must factor through the mgu
        Substitution ground;
        std::set<Term> vars = probe.vars();
        for (const auto& x : vars) ground.bind(x, a());
        if (ground.apply(s) == ground.apply(t)) {
            auto delta = unify({{ground.apply(probe), ground.apply(mgu->apply(probe))}});
            CHECK(delta.has_value());
        }
    }
    CHECK(solved > 100); // the generator must actually exercise the solver
}

TEST_CASE("ground term enumeration counts constructor applications") {
    Signature sig = example_sig();
    auto w0 = ground_terms(sig, "T", 0);
    CHECK(w0.size() == 2); // a, b
    auto w1 = ground_terms(sig, "T", 1);
    // a, b, g(a), g(b), f(a,a), f(a,b), f(b,a), f(b,b)
    CHECK(w1.size() == 8);
    for (const auto& t : w1) CHECK(t.weight() <= 1);
}

TEST_CASE("infinite-sort certification") {
    Signature sig = example_sig();
    CHECK(sig.infinite_sorts().count("T") == 1);

    Signature fin;
    fin.add_sort("E");
    fin.add_function("c", {}, "E");
    CHECK(fin.inhabited_sorts().count("E") == 1);
    CHECK(fin.infinite_sorts().count("E") == 0);

    Signature empty_sort;
    empty_sort.add_sort("N");
    empty_sort.add_function("s", {"N"}, "N"); // no constant: uninhabited
    CHECK(empty_sort.inhabited_sorts().count("N") == 0);
    CHECK(empty_sort.infinite_sorts().count("N") == 0);
}

TEST_CASE("term sexpr round trip") {
    Signature sig = example_sig();
    std::map<std::string, SortName> sorts{{"x", "T"}};
    Term t = f(g(v("x")), a());
    auto back = parse_term_sexpr(sig, sorts, term_sexpr(t));
    REQUIRE(back.has_value());
    CHECK(*back == t);
}
