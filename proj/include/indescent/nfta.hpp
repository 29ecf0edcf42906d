#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "indescent/system.hpp"

namespace indescent {

// Top-down nondeterministic finite tree automaton with transition rules
// q -f-> (q1,...,qn).
struct NftaTransition {
    std::string state;
    std::string symbol;
    std::vector<std::string> children;

    bool operator<(const NftaTransition& o) const {
        if (state != o.state) return state < o.state;
        if (symbol != o.symbol) return symbol < o.symbol;
        return children < o.children;
    }
    bool operator==(const NftaTransition& o) const {
        return state == o.state && symbol == o.symbol && children == o.children;
    }
};

struct Nfta {
    std::set<std::string> states;
    std::map<std::string, size_t> alphabet; // symbol -> rank
    std::vector<NftaTransition> transitions;

    std::vector<const NftaTransition*> from(const std::string& state) const;
    std::vector<const NftaTransition*> from(const std::string& state, const std::string& symbol) const;

    // Drops states with no leaf-reaching run and transitions using them.
    void trim();
    std::string print() const;
};

// Each transition becomes a rule <{x = f(x1..xn), q1(x1)..qn(xn)}, q(x)>.
InductiveSystem nfta_to_system(const Nfta& a);

// Inverse view for automata-shaped Herbrand systems: every rule must be a
// single equality x = f(x1..xn) whose variables are exactly the subgoal
// tuple, one per position.
std::optional<Nfta> system_to_nfta(const InductiveSystem& sys);

// Standard top-down acceptance by memoized recursion.
bool nfta_membership(const Nfta& a, const std::string& state, const Term& t);

struct InclusionOutcome {
    bool included = false;
    std::optional<Term> witness; // accepted by lhs, rejected by every rhs state
};

struct InclusionOptions {
    bool subsumption = true; // prune pairs below a predecessor with a smaller rhs set
};

// Downward antichain language-inclusion check with transition and split
// moves; reconstructs a witness term on failure.
InclusionOutcome antichain_inclusion(const Nfta& a, const std::string& lhs, const std::set<std::string>& rhs,
                                     const InclusionOptions& opt = {});

// Reproducible generator; the result has every state productive and at least
// one constant symbol.
Nfta random_nfta(uint64_t seed, int max_states, int max_rank, int max_symbols);

// `.nfta` shorthand: one transition per line `q f q1 q2`; an optional line
// `? p <= q1 q2 ...` carries the inclusion query.
struct NftaFile {
    Nfta automaton;
    std::optional<std::pair<std::string, std::set<std::string>>> query;
};
NftaFile parse_nfta(const std::string& text);

// All ground terms over the automaton's alphabet weighing at most `bound`.
std::vector<Term> nfta_terms(const Nfta& a, int bound);

} // namespace indescent
