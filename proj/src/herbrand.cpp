#include "indescent/herbrand.hpp"

#include <algorithm>
#include <functional>

namespace indescent {

namespace {

std::optional<Substitution> phi_mgu(const LiteralConstraint& phi) { return unify(phi.equality_pairs()); }

std::set<Term> residual_vars(const LiteralConstraint& phi, const Substitution& mu) {
    std::set<Term> vars;
    for (const auto& l : phi.literals()) {
        mu.apply(l.lhs).collect_vars(vars);
        mu.apply(l.rhs).collect_vars(vars);
    }
    return vars;
}

} // namespace

SatResult h_sat(const Signature& sig, const LiteralConstraint& phi) {
    auto mu = phi_mgu(phi);
    if (!mu) return SatResult::Unsat;
    auto inhabited = sig.inhabited_sorts();
    auto infinite = sig.infinite_sorts();

    for (const auto& v : residual_vars(phi, *mu))
        if (!inhabited.count(v.sort())) return SatResult::Unsat;

    for (const auto& l : phi.disequalities()) {
        Term s = mu->apply(l.lhs);
        Term t = mu->apply(l.rhs);
        if (s == t) return SatResult::Unsat;
        std::set<Term> vs = s.vars();
        t.collect_vars(vs);
        // ground residues are genuinely distinct; open ones need a variable
        // of an infinite sort to escape finitely many equational constraints
        for (const auto& v : vs)
            if (!infinite.count(v.sort())) return SatResult::UnknownFiniteSort;
    }
    return SatResult::Sat;
}

bool h_entails(const Signature& sig, const LiteralConstraint& phi, const LiteralConstraint& psi) {
    if (h_sat(sig, phi) == SatResult::Unsat) return true;
    auto mu = phi_mgu(phi);
    if (!mu) return true;
    for (const auto& l : psi.literals()) {
        if (l.positive) {
            if (!(mu->apply(l.lhs) == mu->apply(l.rhs))) return false;
        } else {
            LiteralConstraint merged = phi;
            merged.add(Literal{true, l.lhs, l.rhs});
            merged.normalize();
            if (h_sat(sig, merged) != SatResult::Unsat) return false;
        }
    }
    return true;
}

std::map<Term, Term> h_canonical_reps(const LiteralConstraint& phi, const std::vector<Term>& priority) {
    std::map<Term, Term> reps;
    auto mu = phi_mgu(phi);
    if (!mu) {
        for (const auto& v : priority) reps[v] = v;
        return reps;
    }
    // group priority variables by their mgu image
    std::map<Term, Term> image_to_rep;
    for (const auto& v : priority) {
        Term img = mu->apply(v);
        auto it = image_to_rep.find(img);
        if (it == image_to_rep.end()) image_to_rep[img] = v;
    }
    for (const auto& v : priority) reps[v] = image_to_rep.at(mu->apply(v));
    return reps;
}

WitnessSet h_witnesses(const Signature& sig, const WitnessRequest& req, WitnessMode mode) {
    WitnessSet out;
    std::vector<Term> ex_vars;
    for (const auto& tup : req.ex_tuples) ex_vars.insert(ex_vars.end(), tup.begin(), tup.end());
    if (ex_vars.empty()) {
        if (h_entails(sig, req.phi, req.psi)) out.witnesses.push_back(Substitution{});
        return out;
    }

    std::set<Term> ex_set(ex_vars.begin(), ex_vars.end());
    std::vector<Term> candidates;
    if (mode == WitnessMode::Flat) {
        candidates = req.image_vars;
    } else {
        std::set<Term> subs = req.phi.all_subterms();
        for (const auto& t : req.psi.all_subterms()) {
            bool has_ex = false;
            for (const auto& v : t.vars())
                if (ex_set.count(v)) { has_ex = true; break; }
            if (!has_ex) subs.insert(t);
        }
        for (const auto& v : req.image_vars) subs.insert(v);
        candidates.assign(subs.begin(), subs.end());
    }

    auto reps = h_canonical_reps(req.phi, req.image_vars);
    auto canonical_term = [&](const Term& t) -> Term {
        if (t.is_var()) {
            auto it = reps.find(t);
            return it == reps.end() ? t : it->second;
        }
        return t;
    };

    std::set<Substitution> seen;
    std::vector<size_t> idx(ex_vars.size(), 0);
    const size_t kCap = 2000000;
    size_t tried = 0;
    while (true) {
        Substitution theta;
        bool ok = true;
        for (size_t i = 0; i < ex_vars.size() && ok; ++i) {
            const Term& img = candidates.empty() ? ex_vars[i] : candidates[idx[i]];
            ok = !candidates.empty() && theta.bind(ex_vars[i], img);
        }
        if (ok && h_entails(sig, req.phi, req.psi.substituted(theta))) {
            Substitution canon;
            bool flat = true;
            for (const auto& [v, t] : theta.entries()) {
                Term ct = canonical_term(t);
                canon.bind(v, ct);
                if (!ct.is_var()) flat = false;
            }
            if (seen.insert(canon).second) {
                out.witnesses.push_back(canon);
                if (!flat) out.flat_only = false;
            }
        }
        if (candidates.empty()) break;
        // advance mixed-radix counter
        size_t k = ex_vars.size();
        while (k > 0) {
            --k;
            if (++idx[k] < candidates.size()) break;
            idx[k] = 0;
            if (k == 0) { k = SIZE_MAX; break; }
        }
        if (k == SIZE_MAX) break;
        if (++tried > kCap) break;
    }
    std::sort(out.witnesses.begin(), out.witnesses.end());
    return out;
}

bool h_exists_entailed(const Signature& sig, const LiteralConstraint& phi, const std::set<Term>& ex_vars,
                       const LiteralConstraint& psi, const std::vector<Term>& image_vars) {
    if (ex_vars.empty()) return h_entails(sig, phi, psi);

    // Existential variables that occur only as bare sides of disequalities
    // can always pick a value distinct from everything when their sort is
    // infinite; those literals drop out.
    auto infinite = sig.infinite_sorts();
    std::set<Term> diseq_only = ex_vars;
    for (const auto& l : psi.literals()) {
        if (l.positive) {
            std::set<Term> vs = l.lhs.vars();
            l.rhs.collect_vars(vs);
            for (const auto& v : vs) diseq_only.erase(v);
            continue;
        }
        // compound occurrences disqualify
        if (!l.lhs.is_var())
            for (const auto& v : l.lhs.vars()) diseq_only.erase(v);
        if (!l.rhs.is_var())
            for (const auto& v : l.rhs.vars()) diseq_only.erase(v);
    }
    LiteralConstraint reduced;
    std::set<Term> remaining = ex_vars;
    for (const auto& l : psi.literals()) {
        if (!l.positive) {
            Term v, other;
            if (l.lhs.is_var() && ex_vars.count(l.lhs)) { v = l.lhs; other = l.rhs; }
            else if (l.rhs.is_var() && ex_vars.count(l.rhs)) { v = l.rhs; other = l.lhs; }
            if (v.valid() && diseq_only.count(v) && infinite.count(v.sort())) {
                bool other_ex_free = true;
                for (const auto& w : other.vars())
                    if (ex_vars.count(w)) { other_ex_free = false; break; }
                if (other_ex_free) {
                    remaining.erase(v);
                    continue; // literal holds for a suitably fresh value
                }
            }
        }
        reduced.add(l);
    }
    reduced.normalize();

    if (remaining.empty()) return h_entails(sig, phi, reduced);

    std::vector<Term> ex(remaining.begin(), remaining.end());
    WitnessRequest req;
    req.phi = phi;
    req.image_vars = image_vars;
    req.ex_tuples = {ex};
    req.psi = reduced;
    return !h_witnesses(sig, req, WitnessMode::SubtermBounded).witnesses.empty();
}

namespace {

// Decides exists goal-vars . phi for a constraint whose subgoal variables
// were grounded already.
bool decide_exists_ground(const Signature& sig, const LiteralConstraint& phi) {
    SatResult r = h_sat(sig, phi);
    if (r == SatResult::Sat) return true;
    if (r == SatResult::Unsat) return false;
    // finite-sort residue: enumerate the finite universes exhaustively
    auto mu = phi_mgu(phi);
    if (!mu) return false;
    std::set<Term> vars = residual_vars(phi, *mu);
    std::vector<Term> vs(vars.begin(), vars.end());
    std::vector<std::vector<Term>> domains;
    for (const auto& v : vs) {
        // a finite universe saturates: grow the bound until no new terms
        int bound = 1;
        std::vector<Term> prev = ground_terms(sig, v.sort(), 0);
        while (bound < 12) {
            std::vector<Term> cur = ground_terms(sig, v.sort(), bound);
            if (cur.size() == prev.size()) break;
            prev = std::move(cur);
            ++bound;
        }
        domains.push_back(prev);
    }
    std::vector<size_t> idx(vs.size(), 0);
    while (true) {
        Substitution theta = *mu;
        bool ok = true;
        for (size_t i = 0; i < vs.size() && ok; ++i) ok = theta.bind(vs[i], domains[i][idx[i]]);
        if (ok) {
            bool holds = true;
            for (const auto& l : phi.literals()) {
                Term a = theta.apply(mu->apply(l.lhs));
                Term b = theta.apply(mu->apply(l.rhs));
                if (l.positive != (a == b)) { holds = false; break; }
            }
            if (holds) return true;
        }
        size_t k = vs.size();
        while (k > 0) {
            --k;
            if (++idx[k] < domains[k].size()) break;
            idx[k] = 0;
            if (k == 0) return false;
        }
        if (vs.empty()) return false;
    }
}

} // namespace

ForallExistsResult h_exists_forall(const Signature& sig, const LiteralConstraint& phi,
                                   const std::vector<Term>& goal_vars, const std::vector<Term>& subgoal_vars,
                                   int depth) {
    ForallExistsResult res;
    if (subgoal_vars.empty()) {
        res.verdict = decide_exists_ground(sig, phi) ? ForallExistsVerdict::Valid : ForallExistsVerdict::Invalid;
        return res;
    }

    std::vector<std::vector<Term>> domains;
    bool exhausted_all = true;
    for (const auto& v : subgoal_vars) {
        auto dom = ground_terms(sig, v.sort(), depth);
        auto next = ground_terms(sig, v.sort(), depth + 1);
        if (next.size() != dom.size()) exhausted_all = false;
        if (dom.empty()) {
            // uninhabited subgoal sort: quantification is vacuous
            res.verdict = ForallExistsVerdict::Valid;
            return res;
        }
        domains.push_back(std::move(dom));
    }

    std::vector<size_t> idx(subgoal_vars.size(), 0);
    size_t guard = 0;
    const size_t kCap = 500000;
    while (true) {
        Substitution theta;
        for (size_t i = 0; i < subgoal_vars.size(); ++i) theta.bind(subgoal_vars[i], domains[i][idx[i]]);
        LiteralConstraint grounded = phi.substituted(theta);
        if (!decide_exists_ground(sig, grounded)) {
            res.verdict = ForallExistsVerdict::Invalid;
            for (const auto& [v, t] : theta.entries()) res.failing_valuation[v] = t;
            return res;
        }
        size_t k = subgoal_vars.size();
        bool done = false;
        while (k > 0) {
            --k;
            if (++idx[k] < domains[k].size()) break;
            idx[k] = 0;
            if (k == 0) { done = true; break; }
        }
        if (done) break;
        if (++guard > kCap) {
            res.verdict = ForallExistsVerdict::Unknown;
            return res;
        }
    }

    if (exhausted_all) {
        res.verdict = ForallExistsVerdict::Valid;
        return res;
    }

    // Syntactic sufficient pattern: every equality defines a goal variable
    // once, from subgoal-variable terms; disequalities only constrain the
    // remaining free goal variables, whose sorts must be infinite.
    std::set<Term> goal_set(goal_vars.begin(), goal_vars.end());
    std::set<Term> sub_set(subgoal_vars.begin(), subgoal_vars.end());
    std::set<Term> defined;
    bool pattern = true;
    for (const auto& l : phi.literals()) {
        if (!l.positive) continue;
        Term x = l.lhs, t = l.rhs;
        if (!x.is_var() || !goal_set.count(x)) std::swap(x, t);
        if (!x.is_var() || !goal_set.count(x)) { pattern = false; break; }
        bool sub_only = true;
        for (const auto& v : t.vars())
            if (!sub_set.count(v)) { sub_only = false; break; }
        if (!sub_only) { pattern = false; break; }
        if (!defined.insert(x).second) { pattern = false; break; }
    }
    if (pattern) {
        auto infinite = sig.infinite_sorts();
        LiteralConstraint diseqs;
        for (const auto& l : phi.disequalities()) {
            for (const auto& v : l.lhs.vars()) {
                if (!goal_set.count(v) || defined.count(v)) pattern = false;
                if (!infinite.count(v.sort())) pattern = false;
            }
            for (const auto& v : l.rhs.vars()) {
                if (!goal_set.count(v) || defined.count(v)) pattern = false;
                if (!infinite.count(v.sort())) pattern = false;
            }
            diseqs.add(l);
        }
        diseqs.normalize();
        if (pattern && h_sat(sig, diseqs) == SatResult::Sat) {
            res.verdict = ForallExistsVerdict::Valid;
            return res;
        }
    }
    res.verdict = ForallExistsVerdict::Unknown;
    return res;
}

std::set<std::vector<Term>> h_enumerate(const InductiveSystem& sys, const std::string& pred, int bound, size_t cap) {
    std::map<std::string, std::set<std::vector<Term>>> models;
    for (const auto& [name, _] : sys.predicates) models[name] = {};

    bool changed = true;
    size_t total = 0;
    while (changed && total < cap) {
        changed = false;
        for (const auto& r : sys.rules) {
            const auto& lc = std::get<LiteralConstraint>(r.constraint);
            auto sorts = sys.rule_var_sorts(r);
            // choose a model tuple per subgoal
            std::vector<const std::set<std::vector<Term>>*> pools;
            bool empty_pool = false;
            for (const auto& s : r.subgoals) {
                pools.push_back(&models.at(s.pred));
                if (pools.back()->empty()) { empty_pool = true; break; }
            }
            if (empty_pool) continue;

            std::vector<std::set<std::vector<Term>>::const_iterator> its;
            for (const auto* p : pools) its.push_back(p->begin());
            while (true) {
                Substitution theta;
                bool bind_ok = true;
                for (size_t i = 0; i < r.subgoals.size() && bind_ok; ++i) {
                    const auto& tuple = *its[i];
                    for (size_t j = 0; j < r.subgoals[i].args.size() && bind_ok; ++j) {
                        Term v = Term::var(r.subgoals[i].args[j], sorts.at(r.subgoals[i].args[j]));
                        const Term* prev = theta.lookup(v);
                        if (prev) bind_ok = (*prev == tuple[j]);
                        else bind_ok = theta.bind(v, tuple[j]);
                    }
                }
                if (bind_ok) {
                    LiteralConstraint ground = lc.substituted(theta);
                    auto mu = unify(ground.equality_pairs());
                    if (mu) {
                        // remaining free variables are goal variables
                        std::set<Term> free;
                        for (const auto& g : r.goal.args) {
                            Term v = Term::var(g, sorts.at(g));
                            Term img = mu->apply(v);
                            img.collect_vars(free);
                        }
                        for (const auto& l : ground.disequalities()) {
                            mu->apply(l.lhs).collect_vars(free);
                            mu->apply(l.rhs).collect_vars(free);
                        }
                        std::vector<Term> fv(free.begin(), free.end());
                        std::vector<std::vector<Term>> domains;
                        bool dom_ok = true;
                        for (const auto& v : fv) {
                            domains.push_back(ground_terms(sys.signature, v.sort(), bound));
                            if (domains.back().empty()) { dom_ok = false; break; }
                        }
                        if (dom_ok) {
                            std::vector<size_t> idx(fv.size(), 0);
                            while (true) {
                                Substitution full = *mu;
                                bool ok2 = true;
                                for (size_t i = 0; i < fv.size() && ok2; ++i) ok2 = full.bind(fv[i], domains[i][idx[i]]);
                                if (ok2) {
                                    bool holds = true;
                                    std::vector<Term> tuple;
                                    for (const auto& l : ground.disequalities()) {
                                        if (full.apply(l.lhs) == full.apply(l.rhs)) { holds = false; break; }
                                    }
                                    if (holds) {
                                        for (const auto& g : r.goal.args) {
                                            Term v = Term::var(g, sorts.at(g));
                                            Term val = full.apply(mu->apply(v));
                                            if (!val.is_ground() || val.weight() > bound) { holds = false; break; }
                                            tuple.push_back(val);
                                        }
                                    }
                                    if (holds) {
                                        auto& dst = models.at(r.goal.pred);
                                        if (dst.insert(tuple).second) {
                                            changed = true;
                                            ++total;
                                        }
                                    }
                                }
                                size_t k = fv.size();
                                bool done = fv.empty();
                                while (k > 0) {
                                    --k;
                                    if (++idx[k] < domains[k].size()) break;
                                    idx[k] = 0;
                                    if (k == 0) { done = true; break; }
                                }
                                if (done) break;
                            }
                        }
                    }
                }
                // advance subgoal tuple iterators
                size_t k = its.size();
                bool done = its.empty();
                while (k > 0) {
                    --k;
                    if (++its[k] != pools[k]->end()) break;
                    its[k] = pools[k]->begin();
                    if (k == 0) { done = true; break; }
                }
                if (done) break;
            }
        }
    }
    return models.at(pred);
}

} // namespace indescent
