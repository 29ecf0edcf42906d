#include "indescent/parser.hpp"

#include <algorithm>

#include "indescent/sexpr.hpp"

namespace indescent {

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& msg) {
    throw ParseError(msg, at.line, at.col);
}

// One atomic conjunct of a constraint before theory assembly.
struct AtomicF {
    enum Kind { Eq, Diseq, Pto, Emp, True } kind;
    SExpr payload;
};

// Expands (and ...), (sep ...) and positive (or ...) into a disjunction of
// conjunctions of atomic formulas.
std::vector<std::vector<AtomicF>> to_dnf(const SExpr& e) {
    if (e.is_atom) {
        if (e.atom == "true") return {{AtomicF{AtomicF::True, e}}};
        if (e.atom == "emp") return {{AtomicF{AtomicF::Emp, e}}};
        fail(e, "expected a constraint expression, got '" + e.atom + "'");
    }
    if (e.items.empty() || !e.items[0].is_atom) fail(e, "malformed constraint expression");
    const std::string& head = e.items[0].atom;
    if (head == "=" || head == "distinct") {
        if (e.size() != 3) fail(e, "'" + head + "' takes exactly two arguments");
        return {{AtomicF{head == "=" ? AtomicF::Eq : AtomicF::Diseq, e}}};
    }
    if (head == "pto") {
        if (e.size() != 3) fail(e, "'pto' takes a source and a target tuple");
        return {{AtomicF{AtomicF::Pto, e}}};
    }
    if (head == "and" || head == "sep") {
        std::vector<std::vector<AtomicF>> acc{{}};
        for (size_t i = 1; i < e.size(); ++i) {
            auto sub = to_dnf(e.at(i));
            std::vector<std::vector<AtomicF>> next;
            for (const auto& a : acc)
                for (const auto& b : sub) {
                    auto merged = a;
                    merged.insert(merged.end(), b.begin(), b.end());
                    next.push_back(std::move(merged));
                }
            acc = std::move(next);
        }
        return acc;
    }
    if (head == "or") {
        std::vector<std::vector<AtomicF>> acc;
        for (size_t i = 1; i < e.size(); ++i) {
            auto sub = to_dnf(e.at(i));
            acc.insert(acc.end(), sub.begin(), sub.end());
        }
        if (acc.empty()) fail(e, "'or' needs at least one disjunct");
        return acc;
    }
    fail(e, "unknown constraint operator '" + head + "'");
}

struct Builder {
    InductiveSystem sys;
    std::vector<EntailmentQuery> queries;
    bool saw_theory = false;
    std::optional<int> width;

    Term parse_term(const SExpr& e, const std::map<std::string, SortName>& var_sorts) {
        if (e.is_atom) {
            const auto* prof = sys.signature.find(e.atom);
            if (prof) {
                if (!prof->arg_sorts.empty()) fail(e, "function '" + e.atom + "' expects arguments");
                return Term::app(e.atom, prof->result_sort, {});
            }
            auto it = var_sorts.find(e.atom);
            if (it == var_sorts.end())
                fail(e, "'" + e.atom + "' is neither a declared constant nor a goal/subgoal variable");
            return Term::var(e.atom, it->second);
        }
        if (e.items.empty() || !e.items[0].is_atom) fail(e, "malformed term");
        const auto* prof = sys.signature.find(e.items[0].atom);
        if (!prof) fail(e, "unknown function '" + e.items[0].atom + "'");
        if (prof->arg_sorts.size() != e.size() - 1)
            fail(e, "function '" + e.items[0].atom + "' expects " + std::to_string(prof->arg_sorts.size()) +
                        " arguments");
        std::vector<Term> args;
        for (size_t i = 1; i < e.size(); ++i) {
            args.push_back(parse_term(e.at(i), var_sorts));
            if (args.back().sort() != prof->arg_sorts[i - 1])
                fail(e.at(i), "argument sort mismatch for '" + e.items[0].atom + "'");
        }
        return Term::app(e.items[0].atom, prof->result_sort, std::move(args));
    }

    std::string require_var(const SExpr& e) {
        if (!e.is_atom) fail(e, "expected a variable name");
        return e.atom;
    }

    PredAtom parse_atom(const SExpr& e) {
        if (!e.is_list() || e.items.empty() || !e.items[0].is_atom) fail(e, "malformed predicate atom");
        PredAtom a;
        a.pred = e.items[0].atom;
        for (size_t i = 1; i < e.size(); ++i) a.args.push_back(require_var(e.at(i)));
        return a;
    }

    Constraint assemble(const std::vector<AtomicF>& conj, const std::map<std::string, SortName>& var_sorts,
                        const SExpr& at) {
        if (sys.theory == Theory::Herbrand) {
            LiteralConstraint lc;
            for (const auto& a : conj) {
                switch (a.kind) {
                    case AtomicF::True:
                        break;
                    case AtomicF::Eq:
                    case AtomicF::Diseq: {
                        Term l = parse_term(a.payload.at(1), var_sorts);
                        Term r = parse_term(a.payload.at(2), var_sorts);
                        if (l.sort() != r.sort()) fail(a.payload, "literal relates terms of different sorts");
                        lc.add(Literal{a.kind == AtomicF::Eq, l, r});
                        break;
                    }
                    default:
                        fail(a.payload, "spatial atom in a Herbrand constraint");
                }
            }
            lc.normalize();
            return lc;
        }
        SymbolicHeap sh;
        for (const auto& a : conj) {
            switch (a.kind) {
                case AtomicF::True:
                case AtomicF::Emp:
                    break;
                case AtomicF::Eq:
                case AtomicF::Diseq: {
                    if (!a.payload.at(1).is_atom || !a.payload.at(2).is_atom)
                        fail(a.payload, "separation-logic terms are variables");
                    sh.pure.push_back(PureLit{a.kind == AtomicF::Eq, a.payload.at(1).atom, a.payload.at(2).atom});
                    break;
                }
                case AtomicF::Pto: {
                    PtoAtom pto;
                    if (!a.payload.at(1).is_atom) fail(a.payload, "points-to source must be a variable");
                    pto.src = a.payload.at(1).atom;
                    const SExpr& tgts = a.payload.at(2);
                    if (!tgts.is_list() || tgts.items.empty()) fail(tgts, "points-to target tuple must be a non-empty list");
                    for (const auto& t : tgts.items) {
                        if (!t.is_atom) fail(t, "points-to target must be a variable");
                        pto.targets.push_back(t.atom);
                    }
                    if (!width) width = static_cast<int>(pto.targets.size());
                    if (static_cast<int>(pto.targets.size()) != *width)
                        fail(a.payload, "points-to record width differs from earlier atoms");
                    sh.spatial.push_back(std::move(pto));
                    break;
                }
            }
        }
        sh.normalize();
        (void)at;
        return sh;
    }

    void handle(const SExpr& e) {
        if (!e.is_list() || e.items.empty() || !e.items[0].is_atom) fail(e, "expected a top-level form");
        const std::string& head = e.items[0].atom;
        if (head == "theory") {
            if (e.size() != 2 || !e.at(1).is_atom) fail(e, "usage: (theory herbrand|seplog)");
            if (saw_theory) fail(e, "duplicate theory declaration");
            saw_theory = true;
            if (e.at(1).atom == "herbrand") {
                sys.theory = Theory::Herbrand;
            } else if (e.at(1).atom == "seplog") {
                sys.theory = Theory::SeparationLogic;
                sys.signature.add_sort(kLocSort);
            } else {
                fail(e.at(1), "theory must be 'herbrand' or 'seplog'");
            }
        } else if (head == "sort") {
            if (e.size() != 2 || !e.at(1).is_atom) fail(e, "usage: (sort NAME)");
            sys.signature.add_sort(e.at(1).atom);
        } else if (head == "fun") {
            if (e.size() != 4 || !e.at(1).is_atom || !e.at(2).is_list() || !e.at(3).is_atom)
                fail(e, "usage: (fun NAME (SORT*) SORT)");
            if (VarGen::is_reserved(e.at(1).atom)) fail(e.at(1), "function name uses a reserved prefix");
            std::vector<SortName> args;
            for (const auto& a : e.at(2).items) {
                if (!a.is_atom) fail(a, "expected a sort name");
                args.push_back(a.atom);
            }
            try {
                sys.signature.add_function(e.at(1).atom, std::move(args), e.at(3).atom);
            } catch (const std::runtime_error& ex) {
                fail(e, ex.what());
            }
        } else if (head == "pred") {
            if (e.size() != 3 || !e.at(1).is_atom || !e.at(2).is_list()) fail(e, "usage: (pred NAME (SORT*))");
            if (VarGen::is_reserved(e.at(1).atom)) fail(e.at(1), "predicate name uses a reserved prefix");
            Predicate p;
            p.name = e.at(1).atom;
            for (const auto& a : e.at(2).items) {
                if (!a.is_atom) fail(a, "expected a sort name");
                if (!sys.signature.has_sort(a.atom)) fail(a, "undeclared sort '" + a.atom + "'");
                p.arg_sorts.push_back(a.atom);
            }
            if (sys.predicates.count(p.name)) fail(e, "duplicate predicate '" + p.name + "'");
            sys.predicates[p.name] = std::move(p);
        } else if (head == "rule") {
            if (e.size() != 4) fail(e, "usage: (rule (GOAL (VAR*)) (constraint EXPR) (subgoals (ATOM*)))");
            const SExpr& goal = e.at(1);
            if (!goal.is_list() || goal.size() != 2 || !goal.at(0).is_atom || !goal.at(1).is_list())
                fail(goal, "usage: (GOAL (VAR*))");
            PredAtom g;
            g.pred = goal.at(0).atom;
            for (const auto& v : goal.at(1).items) g.args.push_back(require_var(v));
            if (!e.at(2).headed("constraint") || e.at(2).size() != 2) fail(e.at(2), "usage: (constraint EXPR)");
            if (!e.at(3).headed("subgoals") || e.at(3).size() != 2 || !e.at(3).at(1).is_list())
                fail(e.at(3), "usage: (subgoals (ATOM*))");
            std::vector<PredAtom> subs;
            for (const auto& s : e.at(3).at(1).items) subs.push_back(parse_atom(s));

            if (!sys.predicates.count(g.pred)) fail(goal, "undeclared predicate '" + g.pred + "'");
            std::map<std::string, SortName> var_sorts;
            const Predicate& gp = sys.predicates.at(g.pred);
            if (gp.arity() != g.args.size()) fail(goal, "arity mismatch in goal of '" + g.pred + "'");
            for (size_t i = 0; i < g.args.size(); ++i) var_sorts[g.args[i]] = gp.arg_sorts[i];
            for (const auto& s : subs) {
                auto it = sys.predicates.find(s.pred);
                if (it == sys.predicates.end()) fail(e.at(3), "undeclared predicate '" + s.pred + "'");
                if (it->second.arity() != s.args.size()) fail(e.at(3), "arity mismatch in subgoal '" + s.pred + "'");
                for (size_t i = 0; i < s.args.size(); ++i) var_sorts[s.args[i]] = it->second.arg_sorts[i];
            }

            for (const auto& disjunct : to_dnf(e.at(2).at(1))) {
                PredicateRule r;
                r.goal = g;
                r.subgoals = subs;
                r.constraint = assemble(disjunct, var_sorts, e.at(2));
                sys.rules.push_back(std::move(r));
            }
        } else if (head == "entails") {
            if (e.size() != 3 || !e.at(1).is_atom || !e.at(2).is_list()) fail(e, "usage: (entails P (Q*))");
            EntailmentQuery q;
            q.lhs = e.at(1).atom;
            for (const auto& r : e.at(2).items) {
                if (!r.is_atom) fail(r, "expected a predicate name");
                q.rhs.push_back(r.atom);
            }
            if (q.rhs.empty()) fail(e, "entailment needs at least one right-hand predicate");
            queries.push_back(std::move(q));
        } else {
            fail(e, "unknown top-level form '" + head + "'");
        }
    }
};

} // namespace

ParsedFile parse_system(const std::string& text) {
    std::vector<SExpr> forms;
    try {
        forms = parse_sexprs(text);
    } catch (const SExprError& e) {
        throw ParseError(e.what(), e.line, e.col);
    }
    Builder b;
    for (const auto& f : forms) b.handle(f);
    if (!b.saw_theory) throw ParseError("missing (theory ...) declaration", 1, 1);
    if (b.width) b.sys.record_width = *b.width;
    b.sys.validate();
    for (const auto& q : b.queries) {
        if (!b.sys.has_predicate(q.lhs)) throw ParseError("entailment uses undeclared predicate '" + q.lhs + "'", 1, 1);
        const auto& lp = b.sys.predicate(q.lhs);
        for (const auto& r : q.rhs) {
            if (!b.sys.has_predicate(r)) throw ParseError("entailment uses undeclared predicate '" + r + "'", 1, 1);
            if (!(b.sys.predicate(r).arg_sorts == lp.arg_sorts))
                throw ParseError("entailment arguments of '" + r + "' do not match '" + q.lhs + "'", 1, 1);
        }
    }
    ParsedFile out;
    out.system = std::move(b.sys);
    out.queries = std::move(b.queries);
    return out;
}

} // namespace indescent
