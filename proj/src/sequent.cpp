#include "indescent/sequent.hpp"

#include <algorithm>

namespace indescent {

namespace {

int cmp_constraint(const std::optional<Constraint>& a, const std::optional<Constraint>& b) {
    if (a.has_value() != b.has_value()) return a.has_value() ? 1 : -1;
    if (!a) return 0;
    if (std::holds_alternative<LiteralConstraint>(*a)) {
        const auto& x = std::get<LiteralConstraint>(*a);
        const auto& y = std::get<LiteralConstraint>(*b);
        if (x == y) return 0;
        return x < y ? -1 : 1;
    }
    const auto& x = std::get<SymbolicHeap>(*a);
    const auto& y = std::get<SymbolicHeap>(*b);
    if (x == y) return 0;
    return x < y ? -1 : 1;
}

} // namespace

bool RightMember::operator==(const RightMember& o) const {
    return ex_vars.size() == o.ex_vars.size() && cmp_constraint(constraint, o.constraint) == 0 && atoms == o.atoms &&
           ex_vars == o.ex_vars;
}

bool RightMember::operator<(const RightMember& o) const {
    if (atoms != o.atoms) return atoms < o.atoms;
    int c = cmp_constraint(constraint, o.constraint);
    if (c != 0) return c < 0;
    return ex_vars < o.ex_vars;
}

std::string RightMember::str() const {
    std::string s;
    if (!ex_vars.empty()) {
        s += "exists";
        for (const auto& v : ex_vars) s += " " + v;
        s += " . ";
    }
    if (constraint) s += constraint_str(*constraint);
    if (constraint && !atoms.empty()) s += " & ";
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) s += " & ";
        s += atoms[i].str();
    }
    if (!constraint && atoms.empty()) s += "top";
    return s;
}

RightMember RightMember::renamed_free(const std::map<std::string, std::string>& theta, const Signature& sig) const {
    std::map<std::string, std::string> shadowed = theta;
    for (const auto& v : ex_vars) shadowed.erase(v);
    RightMember out = *this;
    if (constraint) out.constraint = rename_constraint(*constraint, shadowed, sig);
    for (auto& a : out.atoms)
        for (auto& arg : a.args) {
            auto it = shadowed.find(arg);
            if (it != shadowed.end()) arg = it->second;
        }
    return out;
}

void RightMember::canonicalize(const Signature& sig) {
    // drop unused bound variables first
    std::set<std::string> used;
    if (constraint)
        for (const auto& v : constraint_vars(*constraint)) used.insert(v);
    for (const auto& a : atoms) used.insert(a.args.begin(), a.args.end());
    std::vector<std::string> kept;
    for (const auto& v : ex_vars)
        if (used.count(v)) kept.push_back(v);
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    ex_vars = kept;
    if (ex_vars.empty()) return;
    if (ex_vars.size() > 6) return; // degenerate, keep as-is

    std::vector<size_t> perm(ex_vars.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::optional<RightMember> best;
    do {
        std::map<std::string, std::string> ren;
        for (size_t i = 0; i < perm.size(); ++i) ren[ex_vars[i]] = "_b" + std::to_string(perm[i]);
        RightMember cand;
        cand.ex_vars.resize(ex_vars.size());
        for (size_t i = 0; i < perm.size(); ++i) cand.ex_vars[perm[i]] = "_b" + std::to_string(perm[i]);
        if (constraint) cand.constraint = rename_constraint(*constraint, ren, sig);
        cand.atoms = atoms;
        for (auto& a : cand.atoms)
            for (auto& arg : a.args) {
                auto it = ren.find(arg);
                if (it != ren.end()) arg = it->second;
            }
        std::sort(cand.atoms.begin(), cand.atoms.end());
        if (!best || cand < *best) best = std::move(cand);
    } while (std::next_permutation(perm.begin(), perm.end()));
    *this = *best;
}

void Sequent::normalize(const Signature& sig) {
    for (auto& m : rhs) {
        m.canonicalize(sig);
        std::sort(m.atoms.begin(), m.atoms.end());
        if (theory == Theory::Herbrand)
            m.atoms.erase(std::unique(m.atoms.begin(), m.atoms.end()), m.atoms.end());
        // an unquantified trivial constraint folds into the empty-conjunction
        // reading (top for Herbrand, emp for separation logic)
        if (m.constraint && m.ex_vars.empty()) {
            bool trivial = std::holds_alternative<LiteralConstraint>(*m.constraint)
                               ? std::get<LiteralConstraint>(*m.constraint).trivially_true()
                               : std::get<SymbolicHeap>(*m.constraint).empty_formula();
            if (trivial) m.constraint.reset();
        }
    }
    std::sort(rhs.begin(), rhs.end());
    rhs.erase(std::unique(rhs.begin(), rhs.end()), rhs.end());
    std::sort(lhs_atoms.begin(), lhs_atoms.end());
    lhs_atoms.erase(std::unique(lhs_atoms.begin(), lhs_atoms.end()), lhs_atoms.end());
    std::sort(lhs_constraints.begin(), lhs_constraints.end(), [](const Constraint& a, const Constraint& b) {
        return cmp_constraint(a, b) < 0;
    });
}

bool Sequent::is_basic() const {
    if (!lhs_constraints.empty() || lhs_atoms.size() != 1) return false;
    for (const auto& m : rhs) {
        if (!m.is_bare_atom()) return false;
        if (m.atoms[0].args != lhs_atoms[0].args) return false;
    }
    return true;
}

std::set<std::string> Sequent::free_vars() const {
    std::set<std::string> out;
    for (const auto& c : lhs_constraints)
        for (const auto& v : constraint_vars(c)) out.insert(v);
    for (const auto& a : lhs_atoms) out.insert(a.args.begin(), a.args.end());
    for (const auto& m : rhs) {
        std::set<std::string> bound(m.ex_vars.begin(), m.ex_vars.end());
        if (m.constraint)
            for (const auto& v : constraint_vars(*m.constraint))
                if (!bound.count(v)) out.insert(v);
        for (const auto& a : m.atoms)
            for (const auto& v : a.args)
                if (!bound.count(v)) out.insert(v);
    }
    return out;
}

std::map<std::string, SortName> Sequent::var_sorts(const InductiveSystem& sys) const {
    std::map<std::string, SortName> out;
    auto note_atom = [&](const PredAtom& a) {
        if (InductiveSystem::is_universal(a.pred)) {
            for (const auto& v : a.args) out.emplace(v, sys.theory == Theory::SeparationLogic ? kLocSort : SortName{});
            return;
        }
        const auto& p = sys.predicate(a.pred);
        for (size_t i = 0; i < a.args.size(); ++i) out.emplace(a.args[i], p.arg_sorts[i]);
    };
    for (const auto& a : lhs_atoms) note_atom(a);
    for (const auto& m : rhs)
        for (const auto& a : m.atoms) note_atom(a);
    auto note_constraint = [&](const Constraint& c) {
        if (std::holds_alternative<LiteralConstraint>(c)) {
            for (const auto& v : std::get<LiteralConstraint>(c).free_vars()) out.emplace(v.name(), v.sort());
        } else {
            for (const auto& v : std::get<SymbolicHeap>(c).vars()) out.emplace(v, kLocSort);
        }
    };
    for (const auto& c : lhs_constraints) note_constraint(c);
    for (const auto& m : rhs)
        if (m.constraint) note_constraint(*m.constraint);
    return out;
}

bool Sequent::operator==(const Sequent& o) const {
    if (lhs_atoms != o.lhs_atoms || !(rhs == o.rhs)) return false;
    if (lhs_constraints.size() != o.lhs_constraints.size()) return false;
    for (size_t i = 0; i < lhs_constraints.size(); ++i)
        if (cmp_constraint(lhs_constraints[i], o.lhs_constraints[i]) != 0) return false;
    return true;
}

bool Sequent::operator<(const Sequent& o) const {
    if (lhs_atoms != o.lhs_atoms) return lhs_atoms < o.lhs_atoms;
    if (lhs_constraints.size() != o.lhs_constraints.size())
        return lhs_constraints.size() < o.lhs_constraints.size();
    for (size_t i = 0; i < lhs_constraints.size(); ++i) {
        int c = cmp_constraint(lhs_constraints[i], o.lhs_constraints[i]);
        if (c != 0) return c < 0;
    }
    return rhs < o.rhs;
}

std::string Sequent::str() const {
    std::string s;
    bool first = true;
    for (const auto& c : lhs_constraints) {
        if (!first) s += ", ";
        first = false;
        s += constraint_str(c);
    }
    for (const auto& a : lhs_atoms) {
        if (!first) s += ", ";
        first = false;
        s += a.str();
    }
    s += " |- ";
    if (rhs.empty()) s += "<empty>";
    for (size_t i = 0; i < rhs.size(); ++i) {
        if (i) s += ", ";
        s += rhs[i].str();
    }
    return s;
}

SortName sequent_var_sort(const InductiveSystem& sys, const Sequent& s, const std::string& var) {
    auto sorts = s.var_sorts(sys);
    auto it = sorts.find(var);
    if (it != sorts.end() && !it->second.empty()) return it->second;
    if (sys.theory == Theory::SeparationLogic) return kLocSort;
    // fall back to the only non-bool sort when unambiguous
    SortName found;
    for (const auto& so : sys.signature.sorts) {
        if (so == kBoolSort) continue;
        if (!found.empty()) return found; // ambiguous, first wins deterministically
        found = so;
    }
    return found;
}

bool sequent_tree_shaped(const Sequent& s) {
    if (s.lhs_constraints.size() > 1) return false;
    std::set<std::string> seen;
    for (const auto& a : s.lhs_atoms)
        for (const auto& v : a.args)
            if (!seen.insert(v).second) return false;
    return true;
}

} // namespace indescent
