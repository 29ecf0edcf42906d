#pragma once

#include <optional>
#include <string>
#include <vector>

#include "indescent/system.hpp"

namespace indescent {

// One right-hand disjunct: existentially quantified constraint joined with a
// conjunction of predicate atoms (boolean or separating, by theory). A bare
// atom is the member with no constraint, no existentials and one atom; no
// constraint reads as the empty conjunction (top for Herbrand, emp for SL).
struct RightMember {
    std::vector<std::string> ex_vars;
    std::optional<Constraint> constraint;
    std::vector<PredAtom> atoms;

    bool is_bare_atom() const { return !constraint && ex_vars.empty() && atoms.size() == 1; }
    bool is_quantified() const { return constraint.has_value(); }

    bool operator==(const RightMember& o) const;
    bool operator<(const RightMember& o) const;
    std::string str() const;

    // Renames bound variables to the lexicographically least `_b<i>`
    // assignment so alpha-equivalent members compare equal.
    void canonicalize(const Signature& sig);
    RightMember renamed_free(const std::map<std::string, std::string>& theta, const Signature& sig) const;
};

struct Sequent {
    Theory theory = Theory::Herbrand;
    std::vector<Constraint> lhs_constraints;
    std::vector<PredAtom> lhs_atoms;
    std::vector<RightMember> rhs;

    void normalize(const Signature& sig);
    bool is_basic() const;
    std::set<std::string> free_vars() const;
    std::map<std::string, SortName> var_sorts(const InductiveSystem& sys) const;

    bool operator==(const Sequent& o) const;
    bool operator<(const Sequent& o) const;
    std::string str() const;
};

// Sort lookup for sequent variables has to survive variables that only occur
// in constraints; the system supplies predicate argument sorts.
SortName sequent_var_sort(const InductiveSystem& sys, const Sequent& s, const std::string& var);

// Structural invariant of reachable left-hand sides: at most one constraint
// and pairwise disjoint atom tuples. Checked by the engine in debug builds.
bool sequent_tree_shaped(const Sequent& s);

} // namespace indescent
