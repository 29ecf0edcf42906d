#include "indescent/restrictions.hpp"

#include <algorithm>

#include "indescent/herbrand.hpp"
#include "indescent/seplog.hpp"

namespace indescent {

namespace {

std::string rule_label(const InductiveSystem& sys, size_t i) {
    const auto& r = sys.rules[i];
    return "rule " + std::to_string(i) + " of " + r.goal.pred + " <" + constraint_str(r.constraint) + ">";
}

std::vector<Term> rule_goal_vars(const InductiveSystem& sys, const PredicateRule& r) {
    auto sorts = sys.rule_var_sorts(r);
    std::vector<Term> out;
    for (const auto& v : r.goal.args) out.push_back(Term::var(v, sorts.at(v)));
    return out;
}

std::vector<Term> rule_subgoal_vars(const InductiveSystem& sys, const PredicateRule& r) {
    auto sorts = sys.rule_var_sorts(r);
    std::vector<Term> out;
    for (const auto& s : r.subgoals)
        for (const auto& v : s.args) out.push_back(Term::var(v, sorts.at(v)));
    return out;
}

void merge(RestrictionResult& res, CheckDetail d) {
    if (d.verdict == Verdict::Fail)
        res.verdict = Verdict::Fail;
    else if (d.verdict == Verdict::Unknown && res.verdict == Verdict::Pass)
        res.verdict = Verdict::Unknown;
    res.details.push_back(std::move(d));
}

// Aligns the goal variables of r2's constraint with those of r1 and renames
// r2's subgoal variables apart. Returns nullopt when the goal sort tuples
// differ, in which case the pair carries no proof obligation.
struct AlignedPair {
    // Herbrand side
    LiteralConstraint phi, psi;
    std::vector<std::vector<Term>> phi_tuples, psi_tuples;
    std::vector<Term> phi_goal_vars;
    std::vector<Term> phi_all_vars; // goal then subgoal, priority order for reps
    // SL side
    SymbolicHeap sphi, spsi;
    std::vector<std::vector<std::string>> sphi_tuples, spsi_tuples;
    std::vector<std::string> sphi_all_vars;
};

std::optional<AlignedPair> align_pair(const InductiveSystem& sys, const PredicateRule& r1,
                                      const PredicateRule& r2) {
    const auto& p1 = sys.predicate(r1.goal.pred);
    const auto& p2 = sys.predicate(r2.goal.pred);
    if (!(p1.arg_sorts == p2.arg_sorts)) return std::nullopt;

    auto sorts1 = sys.rule_var_sorts(r1);
    auto sorts2 = sys.rule_var_sorts(r2);

    std::map<std::string, std::string> ren; // r2 vars -> aligned names
    for (size_t i = 0; i < r2.goal.args.size(); ++i) ren[r2.goal.args[i]] = r1.goal.args[i];
    int fresh = 0;
    for (const auto& s : r2.subgoals)
        for (const auto& v : s.args)
            if (!ren.count(v)) ren[v] = "_e" + std::to_string(fresh++);

    AlignedPair out;
    if (sys.theory == Theory::Herbrand) {
        out.phi = std::get<LiteralConstraint>(r1.constraint);
        Substitution sub;
        const auto& lc2 = std::get<LiteralConstraint>(r2.constraint);
        for (const auto& v : lc2.free_vars()) {
            auto it = ren.find(v.name());
            if (it != ren.end()) sub.bind(v, Term::var(it->second, v.sort()));
        }
        out.psi = lc2.substituted(sub);
        for (const auto& s : r1.subgoals) {
            std::vector<Term> tup;
            for (const auto& v : s.args) tup.push_back(Term::var(v, sorts1.at(v)));
            out.phi_tuples.push_back(std::move(tup));
        }
        for (const auto& s : r2.subgoals) {
            std::vector<Term> tup;
            for (const auto& v : s.args) tup.push_back(Term::var(ren.at(v), sorts2.at(v)));
            out.psi_tuples.push_back(std::move(tup));
        }
        out.phi_goal_vars = rule_goal_vars(sys, r1);
        for (const auto& t : out.phi_tuples) out.phi_all_vars.insert(out.phi_all_vars.end(), t.begin(), t.end());
        out.phi_all_vars.insert(out.phi_all_vars.end(), out.phi_goal_vars.begin(), out.phi_goal_vars.end());
    } else {
        out.sphi = std::get<SymbolicHeap>(r1.constraint);
        out.spsi = std::get<SymbolicHeap>(r2.constraint).renamed(ren);
        for (const auto& s : r1.subgoals) out.sphi_tuples.push_back(s.args);
        for (const auto& s : r2.subgoals) {
            std::vector<std::string> tup;
            for (const auto& v : s.args) tup.push_back(ren.at(v));
            out.spsi_tuples.push_back(std::move(tup));
        }
        for (const auto& t : out.sphi_tuples)
            out.sphi_all_vars.insert(out.sphi_all_vars.end(), t.begin(), t.end());
        for (const auto& v : r1.goal.args) out.sphi_all_vars.push_back(v);
    }
    return out;
}

} // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        default: return "Unknown";
    }
}

RestrictionResult check_non_filtering(const InductiveSystem& sys, const RestrictionOptions& opt) {
    RestrictionResult res;
    if (sys.theory == Theory::Herbrand) {
        for (size_t i = 0; i < sys.rules.size(); ++i) {
            const auto& r = sys.rules[i];
            auto fe = h_exists_forall(sys.signature, std::get<LiteralConstraint>(r.constraint),
                                      rule_goal_vars(sys, r), rule_subgoal_vars(sys, r), opt.forall_exists_depth);
            CheckDetail d;
            d.subject = rule_label(sys, i);
            if (fe.verdict == ForallExistsVerdict::Valid) {
                d.verdict = Verdict::Pass;
            } else if (fe.verdict == ForallExistsVerdict::Invalid) {
                d.verdict = Verdict::Fail;
                std::string w;
                for (const auto& [v, t] : fe.failing_valuation) {
                    if (!w.empty()) w += ", ";
                    w += v.str() + " -> " + t.str();
                }
                d.witness = "subgoal valuation {" + w + "} admits no goal extension";
            } else {
                d.verdict = Verdict::Unknown;
                d.witness = "bounded forall/exists check inconclusive";
            }
            merge(res, std::move(d));
        }
        return res;
    }
    auto viol = sl_non_filtering_violation(sys);
    if (!viol) {
        CheckDetail d;
        d.subject = "all rules";
        merge(res, std::move(d));
        return res;
    }
    CheckDetail d;
    d.subject = rule_label(sys, viol->rule_index);
    d.verdict = Verdict::Fail;
    std::string w = "abstract subgoal configuration {";
    for (size_t i = 0; i < viol->subgoal_pairs.size(); ++i) {
        if (i) w += "; ";
        w += viol->subgoal_pairs[i].str();
    }
    w += "} classes {";
    for (size_t i = 0; i < viol->subgoal_classes.size(); ++i) {
        if (i) w += " | ";
        for (size_t j = 0; j < viol->subgoal_classes[i].size(); ++j) {
            if (j) w += ",";
            w += viol->subgoal_classes[i][j];
        }
    }
    d.witness = w + "} has no constraint extension";
    merge(res, std::move(d));
    return res;
}

RestrictionResult check_ranked(const InductiveSystem& sys, const RestrictionOptions& opt) {
    RestrictionResult res;
    for (size_t i = 0; i < sys.rules.size(); ++i) {
        const auto& r = sys.rules[i];
        CheckDetail d;
        d.subject = rule_label(sys, i);
        auto sub_vars = sys.theory == Theory::Herbrand ? rule_subgoal_vars(sys, r) : std::vector<Term>{};
        if (sys.theory == Theory::SeparationLogic) {
            if (r.subgoals.empty()) {
                merge(res, std::move(d));
                continue;
            }
            const auto& sh = std::get<SymbolicHeap>(r.constraint);
            if (sh_empty_possible(sh)) {
                d.verdict = Verdict::Fail;
                d.witness = "constraint admits an empty heap model";
            }
            merge(res, std::move(d));
            continue;
        }
        if (sub_vars.empty()) {
            merge(res, std::move(d));
            continue;
        }
        const auto& lc = std::get<LiteralConstraint>(r.constraint);
        auto goal_vars = rule_goal_vars(sys, r);
        auto mu = unify(lc.equality_pairs());
        bool strict = true;
        if (!mu) {
            merge(res, std::move(d)); // unsatisfiable constraint fires on no model
            continue;
        }
        for (const auto& y : sub_vars) {
            Term yi = mu->apply(y);
            bool found = false;
            for (const auto& x : goal_vars)
                if (subterm(yi, mu->apply(x)) == SubtermRelation::StrictSubterm) { found = true; break; }
            if (!found) { strict = false; break; }
        }
        if (strict) {
            merge(res, std::move(d));
            continue;
        }
        // look for a concrete violating valuation before reporting Unknown
        std::set<Term> free;
        for (const auto& l : lc.literals()) {
            mu->apply(l.lhs).collect_vars(free);
            mu->apply(l.rhs).collect_vars(free);
        }
        for (const auto& v : goal_vars) mu->apply(v).collect_vars(free);
        for (const auto& v : sub_vars) mu->apply(v).collect_vars(free);
        std::vector<Term> fv(free.begin(), free.end());
        std::vector<std::vector<Term>> domains;
        for (const auto& v : fv) domains.push_back(ground_terms(sys.signature, v.sort(), opt.ranked_witness_depth));
        bool dom_ok = true;
        for (const auto& dom : domains)
            if (dom.empty()) dom_ok = false;
        bool failed = false;
        std::string witness;
        if (dom_ok) {
            std::vector<size_t> idx(fv.size(), 0);
            while (!failed) {
                Substitution full;
                for (size_t k = 0; k < fv.size(); ++k) full.bind(fv[k], domains[k][idx[k]]);
                bool model = true;
                for (const auto& l : lc.literals()) {
                    Term a = full.apply(mu->apply(l.lhs));
                    Term b = full.apply(mu->apply(l.rhs));
                    if (l.positive != (a == b)) { model = false; break; }
                }
                if (model) {
                    for (const auto& y : sub_vars) {
                        Term yv = full.apply(mu->apply(y));
                        bool dominated = false;
                        for (const auto& x : goal_vars)
                            if (subterm(yv, full.apply(mu->apply(x))) == SubtermRelation::StrictSubterm) {
                                dominated = true;
                                break;
                            }
                        if (!dominated) {
                            failed = true;
                            witness = "valuation with " + y.str() + " -> " + yv.str() +
                                      " not strictly below any goal value";
                            break;
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
        if (failed) {
            d.verdict = Verdict::Fail;
            d.witness = witness;
        } else {
            d.verdict = Verdict::Unknown;
            d.witness = "subterm analysis of the constraint mgu is inconclusive";
        }
        merge(res, std::move(d));
    }
    return res;
}

RestrictionResult check_fvi(const InductiveSystem& sys, const RestrictionOptions&) {
    RestrictionResult res;
    for (size_t i = 0; i < sys.rules.size(); ++i) {
        for (size_t j = 0; j < sys.rules.size(); ++j) {
            auto ap = align_pair(sys, sys.rules[i], sys.rules[j]);
            if (!ap) continue;
            CheckDetail d;
            d.subject = "pair (" + rule_label(sys, i) + ", " + rule_label(sys, j) + ")";
            if (sys.theory == Theory::Herbrand) {
                if (ap->psi_tuples.empty()) {
                    merge(res, std::move(d));
                    continue;
                }
                // Candidate images are phi's subgoal variables and subterms
                // built from them; a compound image that validates is a
                // non-flat witness and fails the check.
                std::set<Term> cand_set;
                std::set<Term> sub_set;
                for (const auto& t : ap->phi_tuples)
                    for (const auto& v : t) {
                        cand_set.insert(v);
                        sub_set.insert(v);
                    }
                for (const auto& t : ap->phi.all_subterms()) {
                    bool only_sub = true;
                    for (const auto& v : t.vars())
                        if (!sub_set.count(v)) { only_sub = false; break; }
                    if (only_sub && !t.vars().empty()) cand_set.insert(t);
                }
                WitnessRequest req;
                req.phi = ap->phi;
                req.image_vars.assign(cand_set.begin(), cand_set.end());
                for (const auto& t : ap->psi_tuples) req.ex_tuples.push_back(t);
                req.psi = ap->psi;
                auto ws = h_witnesses(sys.signature, req, WitnessMode::Flat);
                auto reps = h_canonical_reps(ap->phi, ap->phi_all_vars);
                auto rep_of = [&](const Term& t) {
                    auto it = reps.find(t);
                    return it == reps.end() ? t : it->second;
                };
                for (const auto& th : ws.witnesses) {
                    bool all_onto = true;
                    for (const auto& ytup : ap->psi_tuples) {
                        bool onto = false;
                        for (const auto& xtup : ap->phi_tuples) {
                            if (xtup.size() != ytup.size()) continue;
                            bool match = true;
                            for (size_t l = 0; l < ytup.size(); ++l) {
                                const Term* img = th.lookup(ytup[l]);
                                if (!img || !img->is_var() || !(rep_of(*img) == rep_of(xtup[l]))) {
                                    match = false;
                                    break;
                                }
                            }
                            if (match) { onto = true; break; }
                        }
                        if (!onto) { all_onto = false; break; }
                    }
                    if (!all_onto) {
                        d.verdict = Verdict::Fail;
                        d.witness = "witness " + th.str() + " does not map tuples onto subgoal tuples";
                        break;
                    }
                }
            } else {
                if (ap->spsi_tuples.empty()) {
                    merge(res, std::move(d));
                    continue;
                }
                std::vector<std::string> cands;
                for (const auto& t : ap->sphi_tuples) cands.insert(cands.end(), t.begin(), t.end());
                ShWitnessRequest req;
                req.phi = ap->sphi;
                req.image_vars = cands;
                req.ex_tuples = ap->spsi_tuples;
                req.psi = ap->spsi;
                auto ws = sh_witnesses(req, ShWitnessMode::Flat);
                auto reps = sh_canonical_reps(ap->sphi, ap->sphi_all_vars);
                auto rep_of = [&](const std::string& v) {
                    auto it = reps.find(v);
                    return it == reps.end() ? v : it->second;
                };
                for (const auto& th : ws.witnesses) {
                    bool all_onto = true;
                    for (const auto& ytup : ap->spsi_tuples) {
                        bool onto = false;
                        for (const auto& xtup : ap->sphi_tuples) {
                            if (xtup.size() != ytup.size()) continue;
                            bool match = true;
                            for (size_t l = 0; l < ytup.size(); ++l) {
                                auto it = th.find(ytup[l]);
                                if (it == th.end() || rep_of(it->second) != rep_of(xtup[l])) {
                                    match = false;
                                    break;
                                }
                            }
                            if (match) { onto = true; break; }
                        }
                        if (!onto) { all_onto = false; break; }
                    }
                    if (!all_onto) {
                        d.verdict = Verdict::Fail;
                        std::string w;
                        for (const auto& [v, t] : th) {
                            if (!w.empty()) w += ", ";
                            w += v + " -> " + t;
                        }
                        d.witness = "witness {" + w + "} does not map tuples onto subgoal tuples";
                        break;
                    }
                }
            }
            merge(res, std::move(d));
        }
    }
    return res;
}

namespace {

// Satisfiability of the conjunction of two symbolic heaps describing the same
// heap: spatial parts must realize the same cell set under some valuation.
bool sl_conj_sat(const SymbolicHeap& phi, const SymbolicHeap& psi) {
    if (phi.spatial.size() != psi.spatial.size()) return false;
    size_t n = phi.spatial.size();
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    do {
        SymbolicHeap merged = phi;
        merged.pure.insert(merged.pure.end(), psi.pure.begin(), psi.pure.end());
        for (size_t i = 0; i < n; ++i) {
            merged.pure.push_back(PureLit{true, phi.spatial[i].src, psi.spatial[perm[i]].src});
            for (size_t t = 0; t < phi.spatial[i].targets.size(); ++t)
                merged.pure.push_back(PureLit{true, phi.spatial[i].targets[t], psi.spatial[perm[i]].targets[t]});
        }
        merged.normalize();
        bool ok = sh_sat(merged) == ShSat::Sat;
        if (ok) {
            SymbolicHeap psis;
            psis.pure = merged.pure;
            psis.spatial = psi.spatial;
            psis.normalize();
            ok = sh_sat(psis) == ShSat::Sat;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace

RestrictionResult check_non_overlapping(const InductiveSystem& sys, const RestrictionOptions&) {
    RestrictionResult res;
    for (size_t i = 0; i < sys.rules.size(); ++i) {
        for (size_t j = 0; j < sys.rules.size(); ++j) {
            auto ap = align_pair(sys, sys.rules[i], sys.rules[j]);
            if (!ap) continue;
            CheckDetail d;
            d.subject = "pair (" + rule_label(sys, i) + ", " + rule_label(sys, j) + ")";
            if (sys.theory == Theory::Herbrand) {
                LiteralConstraint conj = ap->phi.conjoined(ap->psi);
                SatResult sat = h_sat(sys.signature, conj);
                if (sat == SatResult::UnknownFiniteSort) {
                    d.verdict = Verdict::Unknown;
                    d.witness = "satisfiability of the conjunction is inconclusive over finite sorts";
                } else if (sat == SatResult::Sat) {
                    std::set<Term> ex;
                    for (const auto& t : ap->psi_tuples) ex.insert(t.begin(), t.end());
                    if (!h_exists_entailed(sys.signature, ap->phi, ex, ap->psi, ap->phi_all_vars)) {
                        d.verdict = Verdict::Fail;
                        d.witness = "constraints overlap but the entailment fails";
                    }
                }
            } else {
                // Under the unfolding-tree semantics a right-hand member's
                // tree has exactly as many children as its rule has
                // subgoals, so constraints from rules with different subgoal
                // counts can never cover the same tree node; only pairs with
                // matching counts carry an overlap obligation.
                if (sys.rules[i].subgoals.size() != sys.rules[j].subgoals.size()) {
                    merge(res, std::move(d));
                    continue;
                }
                if (sl_conj_sat(ap->sphi, ap->spsi)) {
                    std::set<std::string> ex;
                    for (const auto& t : ap->spsi_tuples) ex.insert(t.begin(), t.end());
                    std::vector<std::string> imgs = ap->sphi_all_vars;
                    for (const auto& v : ap->sphi.vars())
                        if (std::find(imgs.begin(), imgs.end(), v) == imgs.end()) imgs.push_back(v);
                    if (!sh_exists_entailed(ap->sphi, ex, ap->spsi, imgs)) {
                        d.verdict = Verdict::Fail;
                        d.witness = "constraints overlap but the entailment fails";
                    }
                }
            }
            merge(res, std::move(d));
        }
    }
    return res;
}

RestrictionReport check_restrictions(const InductiveSystem& sys, const RestrictionOptions& opt) {
    RestrictionReport rep;
    rep.non_filtering = check_non_filtering(sys, opt);
    rep.ranked = check_ranked(sys, opt);
    rep.fvi = check_fvi(sys, opt);
    rep.non_overlapping = check_non_overlapping(sys, opt);
    return rep;
}

std::string RestrictionReport::render() const {
    auto line = [](const std::string& name, const RestrictionResult& r) {
        std::string s = name + ": " + verdict_name(r.verdict) + "\n";
        for (const auto& d : r.details) {
            if (d.verdict == Verdict::Pass) continue;
            s += "  [" + std::string(verdict_name(d.verdict)) + "] " + d.subject;
            if (!d.witness.empty()) s += " -- " + d.witness;
            s += "\n";
        }
        return s;
    };
    std::string s;
    s += line("non-filtering ", non_filtering);
    s += line("ranked        ", ranked);
    s += line("fvi           ", fvi);
    s += line("non-overlapping", non_overlapping);
    return s;
}

} // namespace indescent
