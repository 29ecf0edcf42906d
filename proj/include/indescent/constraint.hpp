#pragma once

#include <string>
#include <vector>

#include "indescent/term.hpp"

namespace indescent {

// One (dis)equality between same-sort terms.
struct Literal {
    bool positive = true; // t ~ u vs not (t ~ u)
    Term lhs, rhs;

    bool operator==(const Literal& o) const {
        return positive == o.positive && lhs == o.lhs && rhs == o.rhs;
    }
    bool operator<(const Literal& o) const {
        if (positive != o.positive) return positive && !o.positive;
        if (lhs < o.lhs || o.lhs < lhs) return lhs < o.lhs;
        return rhs < o.rhs;
    }
    std::string str() const {
        return positive ? lhs.str() + " = " + rhs.str() : lhs.str() + " != " + rhs.str();
    }
};

// Conjunction of literals. Disjunction never occurs positively and
// conjunction never occurs negatively: the parser splits rules until this
// shape holds, so the type cannot express anything else.
class LiteralConstraint {
public:
    LiteralConstraint() = default;
    explicit LiteralConstraint(std::vector<Literal> lits) { for (auto& l : lits) add(std::move(l)); }

    void add(Literal l);
    const std::vector<Literal>& literals() const { return lits_; }
    const std::set<Term>& free_vars() const { return fv_; }
    bool trivially_true() const { return lits_.empty(); }

    std::vector<std::pair<Term, Term>> equality_pairs() const;
    std::vector<Literal> disequalities() const;

    LiteralConstraint substituted(const Substitution& theta) const;
    LiteralConstraint conjoined(const LiteralConstraint& other) const;

    // canonical: sorted, deduplicated
    void normalize();

    bool operator==(const LiteralConstraint& o) const { return lits_ == o.lits_; }
    bool operator<(const LiteralConstraint& o) const { return lits_ < o.lits_; }

    std::set<Term> all_subterms() const;
    std::string str() const;

private:
    std::vector<Literal> lits_;
    std::set<Term> fv_;
};

} // namespace indescent
