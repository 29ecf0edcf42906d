#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace indescent {

// Sorted first-order terms over a user signature. Terms are immutable and
// structurally hashable; sequents and derivation nodes are deduplicated by
// hashing, so the hash is cached per node.

using SortName = std::string;

inline const SortName kBoolSort = "Bool";

struct FunctionProfile {
    std::vector<SortName> arg_sorts;
    SortName result_sort;
};

struct Signature {
    std::set<SortName> sorts;
    std::map<std::string, FunctionProfile> functions;

    Signature() { sorts.insert(kBoolSort); }

    void add_sort(const SortName& s) { sorts.insert(s); }
    void add_function(const std::string& name, std::vector<SortName> args, SortName result);

    bool has_sort(const SortName& s) const { return sorts.count(s) > 0; }
    const FunctionProfile* find(const std::string& name) const;

    // A sort is inhabited when it has at least one ground term. It is
    // certified infinite when a positive-arity constructor cycle reaches it
    // from an inhabited sort.
    std::set<SortName> inhabited_sorts() const;
    std::set<SortName> infinite_sorts() const;
};

class Term {
public:
    Term() = default;

    static Term var(const std::string& name, const SortName& sort);
    static Term app(const std::string& fn, const SortName& result_sort, std::vector<Term> args);

    bool valid() const { return node_ != nullptr; }
    bool is_var() const { return node_->is_var; }
    const std::string& name() const { return node_->name; } // variable name or function symbol
    const SortName& sort() const { return node_->sort; }
    const std::vector<Term>& args() const { return node_->args; }
    size_t hash() const { return node_->hash; }

    // Number of positive-arity constructor applications; constants and
    // variables weigh 0. This is the bound used by all depth-bounded
    // enumerators.
    int weight() const { return node_->weight; }

    bool operator==(const Term& o) const;
    bool operator!=(const Term& o) const { return !(*this == o); }
    bool operator<(const Term& o) const; // total order for canonical containers

    bool is_ground() const { return node_->ground; }
    void collect_vars(std::set<Term>& out) const;
    std::set<Term> vars() const;
    void collect_subterms(std::set<Term>& out) const;

    std::string str() const;

private:
    struct Node {
        bool is_var;
        std::string name;
        SortName sort;
        std::vector<Term> args;
        size_t hash;
        int weight;
        bool ground;
    };
    std::shared_ptr<const Node> node_;
};

enum class SubtermRelation { Equal, StrictSubterm, NotSubterm };

// Reports whether u occurs inside t (the subtree order of the Herbrand
// interpretation, applied syntactically on open terms).
SubtermRelation subterm(const Term& u, const Term& t);

// Sort-preserving finite map from variables to terms, checked at insertion.
class Substitution {
public:
    Substitution() = default;

    // Returns false on a sort mismatch or when binding a non-variable.
    bool bind(const Term& var, const Term& value);
    const Term* lookup(const Term& var) const;
    bool contains(const Term& var) const { return lookup(var) != nullptr; }
    bool empty() const { return map_.empty(); }
    size_t size() const { return map_.size(); }
    const std::map<Term, Term>& entries() const { return map_; }

    Term apply(const Term& t) const;

    // Every bound value is itself a variable.
    bool is_flat() const;
    // Flat and no two variables share an image.
    bool is_injective() const;

    bool operator==(const Substitution& o) const { return map_ == o.map_; }
    bool operator<(const Substitution& o) const { return map_ < o.map_; }

    std::string str() const;

private:
    std::map<Term, Term> map_;
};

// Syntactic unification with occurs check; returns the idempotent mgu of the
// given pairs or nullopt on clash/occurs failure.
std::optional<Substitution> unify(const std::vector<std::pair<Term, Term>>& pairs);

// Fresh variable source for one proof-search instance. The `_v` prefix is
// reserved; the system validator rejects user names that use it.
class VarGen {
public:
    Term fresh(const SortName& sort) { return Term::var("_v" + std::to_string(counter_++), sort); }
    static bool is_reserved(const std::string& name) { return name.rfind("_v", 0) == 0 || name.rfind("_u", 0) == 0; }

private:
    uint64_t counter_ = 0;
};

// All ground terms of the given sort whose weight is <= bound, in a
// deterministic order. `cap` guards degenerate signatures.
std::vector<Term> ground_terms(const Signature& sig, const SortName& sort, int bound, size_t cap = 200000);

// s-expression rendering `(f a (g x))` and its inverse; variables resolve
// their sorts through `var_sorts`.
std::string term_sexpr(const Term& t);
std::optional<Term> parse_term_sexpr(const Signature& sig, const std::map<std::string, SortName>& var_sorts,
                                     const std::string& text);

} // namespace indescent
