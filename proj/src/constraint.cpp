#include "indescent/constraint.hpp"

#include <algorithm>

namespace indescent {

void LiteralConstraint::add(Literal l) {
    l.lhs.collect_vars(fv_);
    l.rhs.collect_vars(fv_);
    lits_.push_back(std::move(l));
}

std::vector<std::pair<Term, Term>> LiteralConstraint::equality_pairs() const {
    std::vector<std::pair<Term, Term>> out;
    for (const auto& l : lits_)
        if (l.positive) out.emplace_back(l.lhs, l.rhs);
    return out;
}

std::vector<Literal> LiteralConstraint::disequalities() const {
    std::vector<Literal> out;
    for (const auto& l : lits_)
        if (!l.positive) out.push_back(l);
    return out;
}

LiteralConstraint LiteralConstraint::substituted(const Substitution& theta) const {
    LiteralConstraint out;
    for (const auto& l : lits_) out.add(Literal{l.positive, theta.apply(l.lhs), theta.apply(l.rhs)});
    out.normalize();
    return out;
}

LiteralConstraint LiteralConstraint::conjoined(const LiteralConstraint& other) const {
    LiteralConstraint out = *this;
    for (const auto& l : other.lits_) out.add(l);
    out.normalize();
    return out;
}

void LiteralConstraint::normalize() {
    for (auto& l : lits_)
        if (l.rhs < l.lhs) std::swap(l.lhs, l.rhs);
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

std::set<Term> LiteralConstraint::all_subterms() const {
    std::set<Term> out;
    for (const auto& l : lits_) {
        l.lhs.collect_subterms(out);
        l.rhs.collect_subterms(out);
    }
    return out;
}

std::string LiteralConstraint::str() const {
    if (lits_.empty()) return "true";
    std::string s;
    for (size_t i = 0; i < lits_.size(); ++i) {
        if (i) s += " & ";
        s += lits_[i].str();
    }
    return s;
}

} // namespace indescent
