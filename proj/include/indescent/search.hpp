#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "indescent/proof.hpp"
#include "indescent/symheap.hpp"

namespace indescent {

struct SearchLimits {
    size_t max_nodes = 50000;
    int max_depth = 300;
    int64_t wall_ms = 60000;
};

enum class SearchStatus { Proved, Refuted, Exhausted };

// Herbrand dead-leaf trail: constraints instantiated along the branch plus
// the atoms whose models are still owed; enough to solve for a ground
// counterexample of the root tuple.
struct DeadLeafTrail {
    std::vector<LiteralConstraint> constraints;
    std::vector<PredAtom> pending_atoms;
};

struct SearchResult {
    SearchStatus status = SearchStatus::Exhausted;
    std::unique_ptr<ProofNode> proof;
    bool saw_dead_leaf = false;
    std::optional<DeadLeafTrail> trail; // first dead leaf, Herbrand only
    size_t nodes = 0;
    std::string limit_reason;
};

SearchResult search_sequent(const InductiveSystem& sys, const Sequent& root, const Strategy& strat,
                            const SearchLimits& limits);

// --- whole-query pipeline --------------------------------------------------

struct Counterexample {
    // Herbrand witness tuple or SL model (with its unfolding tree)
    std::vector<Term> tuple;
    std::optional<SlModel> sl_model;
    bool verified = false;
    bool sl_plain_semantics_too = false; // SL: tuple/heap pair also separates the plain semantics
    std::string transcript;
};

struct QueryOutcome {
    enum class Kind { Proved, Disproved, Unknown } kind = Kind::Unknown;
    std::unique_ptr<ProofNode> proof;
    std::optional<Counterexample> cex;
    std::string reason;
    size_t nodes = 0;
};

struct QueryOptions {
    SearchLimits limits;
    int enum_depth = 4;    // Herbrand enumeration weight bound
    int sl_max_locs = 4;   // SL enumeration location bound
    int sl_max_unfold = 4; // SL enumeration unfolding bound
};

Sequent make_root_sequent(const InductiveSystem& sys, const EntailmentQuery& q);

QueryOutcome prove_query(const InductiveSystem& sys, const EntailmentQuery& q, const Strategy& strat,
                         const QueryOptions& opt);

// --- proof-shape validators (strategy & structure properties) --------------

struct ProofCheckIssue {
    std::string where;
    std::string what;
};

// Strategy conformance, backlink legality (strict ancestor + LU on the direct
// path) and the structured-derivation property (an RD between consecutive
// LUs on every path).
std::vector<ProofCheckIssue> validate_proof_shape(const ProofNode& root, const Strategy& strat);

} // namespace indescent
