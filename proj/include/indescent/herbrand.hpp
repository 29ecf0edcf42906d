#pragma once

#include <optional>
#include <set>
#include <vector>

#include "indescent/constraint.hpp"
#include "indescent/system.hpp"

namespace indescent {

enum class SatResult { Sat, Unsat, UnknownFiniteSort };

// Satisfiability of a literal conjunction under the Herbrand interpretation.
// Equalities are unified; a residual disequality kills the formula only when
// its sides collapse syntactically. With every relevant sort infinite the
// residue is always satisfiable; finite sorts are flagged instead of guessed.
SatResult h_sat(const Signature& sig, const LiteralConstraint& phi);

// phi |= psi for quantifier-free psi sharing phi's variables. An equality
// must be forced by phi's mgu; a disequality s != t holds iff phi & s = t is
// unsatisfiable. UnknownFiniteSort propagates as a conservative false.
bool h_entails(const Signature& sig, const LiteralConstraint& phi, const LiteralConstraint& psi);

enum class WitnessMode { Flat, SubtermBounded };

// Enumeration request for substitutions theta with phi |= psi(theta).
struct WitnessRequest {
    LiteralConstraint phi;
    std::vector<Term> image_vars;             // candidate variable images, priority order
    std::vector<std::vector<Term>> ex_tuples; // existential tuples of psi
    LiteralConstraint psi;
};

struct WitnessSet {
    std::vector<Substitution> witnesses; // canonicalized, deterministic order
    bool flat_only = true;
};

// Flat mode maps every existential variable to a candidate variable;
// SubtermBounded additionally ranges over subterms of phi's terms and of
// psi's existential-free terms (the brute-force oracle). Results are
// quotiented by phi-forced equality, keeping one canonical representative.
WitnessSet h_witnesses(const Signature& sig, const WitnessRequest& req, WitnessMode mode);

// Bounded decision of phi |= exists ex_vars . psi.
bool h_exists_entailed(const Signature& sig, const LiteralConstraint& phi, const std::set<Term>& ex_vars,
                       const LiteralConstraint& psi, const std::vector<Term>& image_vars);

enum class ForallExistsVerdict { Valid, Invalid, Unknown };

struct ForallExistsResult {
    ForallExistsVerdict verdict = ForallExistsVerdict::Unknown;
    std::map<Term, Term> failing_valuation; // set when Invalid
};

// Checks forall subgoal-vars exists goal-vars . phi by bounded enumeration of
// subgoal valuations; Valid additionally needs the syntactic sufficient
// pattern or an exhausted finite universe.
ForallExistsResult h_exists_forall(const Signature& sig, const LiteralConstraint& phi,
                                   const std::vector<Term>& goal_vars, const std::vector<Term>& subgoal_vars,
                                   int depth);

// All tuples of the least solution of `pred` whose terms weigh at most
// `bound`, by Kleene iteration of the rule operator.
std::set<std::vector<Term>> h_enumerate(const InductiveSystem& sys, const std::string& pred, int bound,
                                        size_t cap = 100000);

// Canonical representative map for variables modulo phi-forced equalities.
// Variables earlier in `priority` win the representative election.
std::map<Term, Term> h_canonical_reps(const LiteralConstraint& phi, const std::vector<Term>& priority);

} // namespace indescent
