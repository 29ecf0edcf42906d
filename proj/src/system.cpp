#include "indescent/system.hpp"

#include <algorithm>
#include <set>

namespace indescent {

std::string constraint_str(const Constraint& c) {
    if (std::holds_alternative<LiteralConstraint>(c)) return std::get<LiteralConstraint>(c).str();
    return std::get<SymbolicHeap>(c).str();
}

std::set<std::string> constraint_vars(const Constraint& c) {
    std::set<std::string> out;
    if (std::holds_alternative<LiteralConstraint>(c)) {
        for (const auto& v : std::get<LiteralConstraint>(c).free_vars()) out.insert(v.name());
    } else {
        out = std::get<SymbolicHeap>(c).vars();
    }
    return out;
}

Constraint rename_constraint(const Constraint& c, const std::map<std::string, std::string>& theta,
                             const Signature& sig) {
    if (std::holds_alternative<SymbolicHeap>(c)) return std::get<SymbolicHeap>(c).renamed(theta);
    const auto& lc = std::get<LiteralConstraint>(c);
    Substitution sub;
    for (const auto& v : lc.free_vars()) {
        auto it = theta.find(v.name());
        if (it != theta.end()) sub.bind(v, Term::var(it->second, v.sort()));
    }
    (void)sig;
    return lc.substituted(sub);
}

std::vector<const PredicateRule*> InductiveSystem::rules_of(const std::string& pred) const {
    if (!has_predicate(pred) && !is_universal(pred))
        throw UnknownPredicate("unknown predicate '" + pred + "'");
    std::vector<const PredicateRule*> out;
    for (const auto& r : rules)
        if (r.goal.pred == pred) out.push_back(&r);
    return out;
}

const Predicate& InductiveSystem::predicate(const std::string& name) const {
    auto it = predicates.find(name);
    if (it == predicates.end()) throw UnknownPredicate("unknown predicate '" + name + "'");
    return it->second;
}

PredicateRule InductiveSystem::universal_rule(size_t k, const std::vector<SortName>& sorts) const {
    PredicateRule r;
    r.goal.pred = universal_name(k);
    for (size_t i = 0; i < k; ++i) r.goal.args.push_back("x" + std::to_string(i + 1));
    if (theory == Theory::Herbrand)
        r.constraint = LiteralConstraint{};
    else
        r.constraint = SymbolicHeap{};
    (void)sorts;
    return r;
}

std::map<std::string, SortName> InductiveSystem::rule_var_sorts(const PredicateRule& r) const {
    std::map<std::string, SortName> out;
    auto add_atom = [&](const PredAtom& a) {
        const Predicate& p = predicate(a.pred);
        for (size_t i = 0; i < a.args.size(); ++i) out[a.args[i]] = p.arg_sorts[i];
    };
    add_atom(r.goal);
    for (const auto& s : r.subgoals) add_atom(s);
    return out;
}

void InductiveSystem::validate() const {
    std::set<std::string> with_rule;
    std::map<std::string, std::vector<std::string>> goal_tuple;
    for (const auto& r : rules) {
        if (!has_predicate(r.goal.pred)) throw ValidationError("rule goal uses undeclared predicate '" + r.goal.pred + "'");
        const Predicate& gp = predicate(r.goal.pred);
        if (gp.arity() != r.goal.args.size())
            throw ValidationError("arity mismatch in goal of '" + r.goal.pred + "'");
        with_rule.insert(r.goal.pred);

        auto it = goal_tuple.find(r.goal.pred);
        if (it == goal_tuple.end())
            goal_tuple[r.goal.pred] = r.goal.args;
        else if (it->second != r.goal.args)
            throw ValidationError("all rules of '" + r.goal.pred + "' must use the same goal variable tuple");

        std::set<std::string> seen(r.goal.args.begin(), r.goal.args.end());
        if (seen.size() != r.goal.args.size())
            throw ValidationError("repeated goal variable in '" + r.goal.pred + "'");
        for (const auto& s : r.subgoals) {
            if (!has_predicate(s.pred))
                throw ValidationError("subgoal uses undeclared predicate '" + s.pred + "'");
            if (predicate(s.pred).arity() != s.args.size())
                throw ValidationError("arity mismatch in subgoal '" + s.pred + "'");
            for (const auto& v : s.args)
                if (!seen.insert(v).second)
                    throw ValidationError("goal and subgoal variable tuples must be pairwise disjoint ('" + v +
                                          "' in rule of '" + r.goal.pred + "')");
        }
        for (const auto& v : seen)
            if (VarGen::is_reserved(v))
                throw ValidationError("variable name '" + v + "' uses a reserved prefix");

        for (const auto& v : constraint_vars(r.constraint))
            if (!seen.count(v))
                throw ValidationError("constraint variable '" + v + "' of a rule of '" + r.goal.pred +
                                      "' is neither a goal nor a subgoal variable");

        if (theory == Theory::SeparationLogic) {
            const auto* sh = std::get_if<SymbolicHeap>(&r.constraint);
            if (!sh) throw ValidationError("separation-logic system contains a first-order constraint");
            for (const auto& a : sh->spatial)
                if (static_cast<int>(a.targets.size()) != record_width)
                    throw ValidationError("points-to record width mismatch in rule of '" + r.goal.pred + "'");
        } else {
            if (!std::holds_alternative<LiteralConstraint>(r.constraint))
                throw ValidationError("Herbrand system contains a separation-logic constraint");
            const auto& lc = std::get<LiteralConstraint>(r.constraint);
            auto sorts = rule_var_sorts(r);
            for (const auto& l : lc.literals()) {
                if (l.lhs.sort() != l.rhs.sort())
                    throw ValidationError("literal relates terms of different sorts in rule of '" + r.goal.pred + "'");
                for (const auto& v : Term(l.lhs).vars()) {
                    auto st = sorts.find(v.name());
                    if (st != sorts.end() && st->second != v.sort())
                        throw ValidationError("variable '" + v.name() + "' used at two sorts");
                }
            }
        }
    }
    for (const auto& [name, p] : predicates)
        if (!with_rule.count(name))
            throw ValidationError("predicate '" + name + "' is not the goal of any rule");
}

std::string InductiveSystem::print() const {
    std::string out;
    out += "(theory ";
    out += theory == Theory::Herbrand ? "herbrand" : "seplog";
    out += ")\n";
    for (const auto& s : signature.sorts) {
        if (s == kBoolSort) continue;
        out += "(sort " + s + ")\n";
    }
    for (const auto& [name, prof] : signature.functions) {
        out += "(fun " + name + " (";
        for (size_t i = 0; i < prof.arg_sorts.size(); ++i) {
            if (i) out += " ";
            out += prof.arg_sorts[i];
        }
        out += ") " + prof.result_sort + ")\n";
    }
    for (const auto& [name, p] : predicates) {
        out += "(pred " + name + " (";
        for (size_t i = 0; i < p.arg_sorts.size(); ++i) {
            if (i) out += " ";
            out += p.arg_sorts[i];
        }
        out += "))\n";
    }
    auto term_sexpr = [](const Term& t, auto&& self) -> std::string {
        if (t.is_var() || t.args().empty()) return t.name();
        std::string s = "(" + t.name();
        for (const auto& a : t.args()) s += " " + self(a, self);
        return s + ")";
    };
    for (const auto& r : rules) {
        out += "(rule (" + r.goal.pred + " (";
        for (size_t i = 0; i < r.goal.args.size(); ++i) {
            if (i) out += " ";
            out += r.goal.args[i];
        }
        out += ")) (constraint ";
        if (const auto* lc = std::get_if<LiteralConstraint>(&r.constraint)) {
            if (lc->literals().empty()) {
                out += "true";
            } else {
                std::string body;
                for (const auto& l : lc->literals()) {
                    std::string lit = l.positive ? "(= " : "(distinct ";
                    lit += term_sexpr(l.lhs, term_sexpr) + " " + term_sexpr(l.rhs, term_sexpr) + ")";
                    body += body.empty() ? lit : " " + lit;
                }
                out += lc->literals().size() == 1 ? body : "(and " + body + ")";
            }
        } else {
            const auto& sh = std::get<SymbolicHeap>(r.constraint);
            std::vector<std::string> parts;
            for (const auto& l : sh.pure)
                parts.push_back((l.positive ? "(= " : "(distinct ") + l.lhs + " " + l.rhs + ")");
            for (const auto& a : sh.spatial) {
                std::string p = "(pto " + a.src + " (";
                for (size_t i = 0; i < a.targets.size(); ++i) {
                    if (i) p += " ";
                    p += a.targets[i];
                }
                parts.push_back(p + "))");
            }
            if (parts.empty()) {
                out += "emp";
            } else if (parts.size() == 1) {
                out += parts[0];
            } else {
                out += "(and";
                for (const auto& p : parts) out += " " + p;
                out += ")";
            }
        }
        out += ") (subgoals (";
        for (size_t i = 0; i < r.subgoals.size(); ++i) {
            if (i) out += " ";
            out += "(" + r.subgoals[i].pred;
            for (const auto& a : r.subgoals[i].args) out += " " + a;
            out += ")";
        }
        out += ")))\n";
    }
    return out;
}

} // namespace indescent
