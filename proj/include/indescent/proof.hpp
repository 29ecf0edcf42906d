#pragma once

#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "indescent/sequent.hpp"
#include "indescent/strategy.hpp"

namespace indescent {

// Per-rule witness data carried by derivation nodes; certificates store it
// and the checker re-derives every instance from it.

struct LuWitness {
    PredAtom atom;
    std::vector<size_t> rule_indices; // global indices into system rules
    std::vector<std::vector<std::string>> fresh_vars;
};

struct RuWitness {
    PredAtom atom;
    std::vector<size_t> rule_indices;
    std::vector<std::vector<std::string>> fresh_vars;
};

struct RdWitness {
    // per consequent rhs member, in canonical order
    std::vector<bool> entailed;
    std::vector<std::vector<std::map<std::string, std::string>>> witnesses; // S_j: bound var -> lhs var
};

struct ArWitness {
    size_t member_index = 0;
    size_t atom_a = 0, atom_b = 0;
};

struct SpWitness {
    std::vector<int> choice_vector; // 0-based coordinate per choice function, canonical order
};

struct AxWitness {
    int member_index = -1;                   // -1: left-hand side unsatisfiable
    std::map<std::string, std::string> theta; // bound var -> term rendering
};

struct IdWitness {
    int steps_up = 0; // pivot distance along the path
    std::map<std::string, std::string> theta; // pivot var -> node var, flat injective
};

using RuleWitness =
    std::variant<std::monostate, LuWitness, RuWitness, RdWitness, ArWitness, SpWitness, AxWitness, IdWitness>;

struct ProofNode {
    Sequent sequent;
    RuleLabel rule = RuleLabel::AX;
    RuleWitness witness;
    std::vector<std::unique_ptr<ProofNode>> children;

    std::unique_ptr<ProofNode> clone() const;
    size_t size() const;
};

// --- rule applications ---------------------------------------------------
// The engine picks instances deterministically; the *_with variants rebuild
// an instance from stored witness data (used by the certificate checker).

struct LuResult {
    std::vector<Sequent> antecedents;
    LuWitness witness;
};
std::optional<LuResult> apply_lu(const InductiveSystem& sys, const Sequent& seq, VarGen& vg);
std::optional<LuResult> apply_lu_with(const InductiveSystem& sys, const Sequent& seq, const LuWitness& w);

struct RuResult {
    Sequent antecedent;
    RuWitness witness;
};
std::optional<RuResult> apply_ru(const InductiveSystem& sys, const Sequent& seq, VarGen& vg);
std::optional<RuResult> apply_ru_with(const InductiveSystem& sys, const Sequent& seq, const RuWitness& w);

struct RdResult {
    Sequent antecedent;
    RdWitness witness;
};
std::optional<RdResult> apply_rd(const InductiveSystem& sys, const Sequent& seq);

struct ArResult {
    std::vector<Sequent> antecedents;
    ArWitness witness;
};
std::optional<ArResult> apply_ar(const InductiveSystem& sys, const Sequent& seq);

// SP shape data shared by engine and checker.
struct SpShape {
    size_t n = 0; // lhs atoms
    size_t k = 0; // rhs members
    // preds[l][i]: predicate of member l at lhs tuple i
    std::vector<std::vector<std::string>> preds;
};
std::optional<SpShape> sp_shape(const InductiveSystem& sys, const Sequent& seq);

// Antecedent for one choice function index under a chosen coordinate.
Sequent sp_pair_sequent(const InductiveSystem& sys, const Sequent& seq, const SpShape& shape, size_t cf_index,
                        size_t coord);
// All antecedents for a full choice vector, deduplicated in first-occurrence order.
std::vector<Sequent> apply_sp(const InductiveSystem& sys, const Sequent& seq, const SpShape& shape,
                              const std::vector<int>& choice_vector);

std::optional<AxWitness> try_ax(const InductiveSystem& sys, const Sequent& seq);
bool verify_ax(const InductiveSystem& sys, const Sequent& seq, const AxWitness& w, std::string* why = nullptr);

struct PathFrame {
    const Sequent* sequent;
    RuleLabel rule; // rule applied at this ancestor
};

struct IdMatch {
    int steps_up = 0;
    std::map<std::string, std::string> theta;
};
std::optional<IdMatch> try_id(const InductiveSystem& sys, const Sequent& seq, const std::vector<PathFrame>& path);

// Validity conditions of a stored backlink against an explicit pivot.
bool verify_id(const InductiveSystem& sys, const Sequent& node, const Sequent& pivot,
               const std::map<std::string, std::string>& theta, std::string* why = nullptr);

} // namespace indescent
