#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "indescent/constraint.hpp"
#include "indescent/symheap.hpp"
#include "indescent/term.hpp"

namespace indescent {

enum class Theory { Herbrand, SeparationLogic };

using Constraint = std::variant<LiteralConstraint, SymbolicHeap>;

std::string constraint_str(const Constraint& c);
std::set<std::string> constraint_vars(const Constraint& c);
Constraint rename_constraint(const Constraint& c, const std::map<std::string, std::string>& theta,
                             const Signature& sig);

struct Predicate {
    std::string name;
    std::vector<SortName> arg_sorts;

    size_t arity() const { return arg_sorts.size(); }
    bool operator==(const Predicate& o) const { return name == o.name && arg_sorts == o.arg_sorts; }
};

// One predicate atom with variable arguments, as used in rules and sequents.
struct PredAtom {
    std::string pred;
    std::vector<std::string> args;

    bool operator==(const PredAtom& o) const { return pred == o.pred && args == o.args; }
    bool operator<(const PredAtom& o) const {
        if (pred != o.pred) return pred < o.pred;
        return args < o.args;
    }
    std::string str() const {
        std::string s = pred + "(";
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) s += ",";
            s += args[i];
        }
        return s + ")";
    }
};

struct PredicateRule {
    PredAtom goal;
    Constraint constraint;
    std::vector<PredAtom> subgoals;

    std::vector<std::vector<std::string>> subgoal_tuples() const {
        std::vector<std::vector<std::string>> out;
        for (const auto& s : subgoals) out.push_back(s.args);
        return out;
    }
    std::vector<std::string> subgoal_vars_flat() const {
        std::vector<std::string> out;
        for (const auto& s : subgoals) out.insert(out.end(), s.args.begin(), s.args.end());
        return out;
    }
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownPredicate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EntailmentQuery {
    std::string lhs;
    std::vector<std::string> rhs;
};

class InductiveSystem {
public:
    Theory theory = Theory::Herbrand;
    Signature signature;
    std::map<std::string, Predicate> predicates;
    std::vector<PredicateRule> rules; // source order
    int record_width = 1;             // SL only; inferred from the first points-to atom

    // Rules with the given goal predicate, in source order.
    std::vector<const PredicateRule*> rules_of(const std::string& pred) const;
    const Predicate& predicate(const std::string& name) const;
    bool has_predicate(const std::string& name) const { return predicates.count(name) > 0; }

    // Universal predicates `_u<k>` are implicit members of every system.
    static bool is_universal(const std::string& pred) { return pred.rfind("_u", 0) == 0; }
    static std::string universal_name(size_t k) { return "_u" + std::to_string(k); }
    PredicateRule universal_rule(size_t k, const std::vector<SortName>& sorts) const;

    // Sort of a rule variable, looked up through goal/subgoal positions.
    std::map<std::string, SortName> rule_var_sorts(const PredicateRule& r) const;

    void validate() const;
    std::string print() const;
};

struct ParsedFile {
    InductiveSystem system;
    std::vector<EntailmentQuery> queries;
};

} // namespace indescent
