#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "indescent/symheap.hpp"
#include "indescent/system.hpp"

namespace indescent {

enum class ShSat { Sat, Unsat };

// Pure part consistent and no two points-to sources in one equality class.
ShSat sh_sat(const SymbolicHeap& phi);

// Precise-heap entailment phi |= psi for closed psi: points-to atoms match
// bijectively modulo phi's equalities and psi's pure part is entailed. Exact
// for predicate-free symbolic heaps; not a general SL entailment procedure.
bool sh_entails(const SymbolicHeap& phi, const SymbolicHeap& psi);
bool sh_entails(const SymbolicHeap& phi, const SymbolicHeap& psi,
                const std::map<std::string, std::string>& theta);

// True iff the spatial part has no points-to atom and the pure part is
// consistent, i.e. phi & emp is satisfiable.
bool sh_empty_possible(const SymbolicHeap& phi);

// Sub-heap variant: psi's pure part is entailed and psi's atoms match an
// injective sub-multiset of phi's atoms modulo phi's equalities. Used when a
// universal predicate absorbs the remaining heap.
bool sh_entails_sub(const SymbolicHeap& phi, const SymbolicHeap& psi);

// Exhaustive small-model check of phi |= psi with valuations over at most
// max_locs locations; the independent oracle for sh_entails.
bool sm_entails(const SymbolicHeap& phi, const SymbolicHeap& psi, int max_locs);
bool sm_sat(const SymbolicHeap& phi, int max_locs);

struct ShWitnessRequest {
    SymbolicHeap phi;
    std::vector<std::string> image_vars;                  // candidate images, priority order
    std::vector<std::vector<std::string>> ex_tuples;      // existential tuples of psi
    SymbolicHeap psi;
};

enum class ShWitnessMode { Flat, SmallModelOracle };

struct ShWitnessSet {
    std::vector<std::map<std::string, std::string>> witnesses;
};

// Flat substitutions validated by sh_entails; the oracle mode revalidates
// through the small-model semantics instead. Results are quotiented by
// phi-forced equality with a canonical representative.
ShWitnessSet sh_witnesses(const ShWitnessRequest& req, ShWitnessMode mode);

// Bounded decision of phi |= exists ex_vars . psi over variable images plus
// fresh values for disequality-only existentials.
bool sh_exists_entailed(const SymbolicHeap& phi, const std::set<std::string>& ex_vars, const SymbolicHeap& psi,
                        const std::vector<std::string>& image_vars);

// Abstract least fixpoint of allocation/equality pairs per predicate, the
// engine of the SL non-filtering check.
std::map<std::string, std::set<AbstractPair>> sh_abstract_lfp(const InductiveSystem& sys);

struct SlNonFilterWitness {
    size_t rule_index = 0;
    std::vector<AbstractPair> subgoal_pairs;
    std::vector<std::vector<std::string>> subgoal_classes; // offending partition of subgoal variables
};

// Checks that every realizable abstract subgoal configuration extends to a
// model of the rule constraint.
std::optional<SlNonFilterWitness> sl_non_filtering_violation(const InductiveSystem& sys);

// Bounded concrete least-solution enumeration over locations 0..max_locs-1,
// recording unfolding trees; results are canonically renamed.
std::set<SlModel> sh_enumerate(const InductiveSystem& sys, const std::string& pred, int max_locs, int max_unfold,
                               size_t cap = 200000);

// Canonical representatives of phi's variables modulo forced equalities.
std::map<std::string, std::string> sh_canonical_reps(const SymbolicHeap& phi,
                                                     const std::vector<std::string>& priority);

} // namespace indescent
