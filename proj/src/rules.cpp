#include "indescent/proof.hpp"

#include <algorithm>
#include <functional>

#include "indescent/herbrand.hpp"
#include "indescent/seplog.hpp"

namespace indescent {

std::unique_ptr<ProofNode> ProofNode::clone() const {
    auto n = std::make_unique<ProofNode>();
    n->sequent = sequent;
    n->rule = rule;
    n->witness = witness;
    for (const auto& c : children) n->children.push_back(c->clone());
    return n;
}

size_t ProofNode::size() const {
    size_t s = 1;
    for (const auto& c : children) s += c->size();
    return s;
}

namespace {

std::vector<size_t> global_rule_indices(const InductiveSystem& sys, const std::string& pred) {
    std::vector<size_t> out;
    for (size_t i = 0; i < sys.rules.size(); ++i)
        if (sys.rules[i].goal.pred == pred) out.push_back(i);
    return out;
}

// Instantiates one rule body against an atom: goal variables map to the
// atom's arguments and subgoal variables to the given fresh names.
struct RuleInstance {
    Constraint constraint;
    std::vector<PredAtom> subgoals;
};

RuleInstance instantiate_rule(const InductiveSystem& sys, const PredicateRule& rule, const PredAtom& atom,
                              const std::vector<std::string>& fresh) {
    std::map<std::string, std::string> ren;
    for (size_t i = 0; i < rule.goal.args.size(); ++i) ren[rule.goal.args[i]] = atom.args[i];
    auto flat = rule.subgoal_vars_flat();
    for (size_t i = 0; i < flat.size(); ++i) ren[flat[i]] = fresh.at(i);
    RuleInstance inst;
    inst.constraint = rename_constraint(rule.constraint, ren, sys.signature);
    for (const auto& s : rule.subgoals) {
        PredAtom a;
        a.pred = s.pred;
        for (const auto& v : s.args) a.args.push_back(ren.at(v));
        inst.subgoals.push_back(std::move(a));
    }
    return inst;
}

std::vector<std::string> make_fresh(const InductiveSystem& sys, const PredicateRule& rule, VarGen& vg) {
    auto sorts = sys.rule_var_sorts(rule);
    std::vector<std::string> out;
    for (const auto& v : rule.subgoal_vars_flat()) out.push_back(vg.fresh(sorts.at(v)).name());
    return out;
}

LiteralConstraint fol_lhs(const Sequent& seq) {
    LiteralConstraint out;
    for (const auto& c : seq.lhs_constraints) out = out.conjoined(std::get<LiteralConstraint>(c));
    return out;
}

SymbolicHeap sl_lhs(const Sequent& seq) {
    SymbolicHeap out;
    for (const auto& c : seq.lhs_constraints) out = out.star(std::get<SymbolicHeap>(c));
    return out;
}

} // namespace

std::optional<LuResult> apply_lu(const InductiveSystem& sys, const Sequent& seq, VarGen& vg) {
    for (const auto& atom : seq.lhs_atoms) {
        if (InductiveSystem::is_universal(atom.pred)) continue;
        LuResult res;
        res.witness.atom = atom;
        res.witness.rule_indices = global_rule_indices(sys, atom.pred);
        if (res.witness.rule_indices.empty()) return std::nullopt;
        for (size_t ri : res.witness.rule_indices)
            res.witness.fresh_vars.push_back(make_fresh(sys, sys.rules[ri], vg));
        auto rebuilt = apply_lu_with(sys, seq, res.witness);
        return rebuilt;
    }
    return std::nullopt;
}

std::optional<LuResult> apply_lu_with(const InductiveSystem& sys, const Sequent& seq, const LuWitness& w) {
    auto it = std::find(seq.lhs_atoms.begin(), seq.lhs_atoms.end(), w.atom);
    if (it == seq.lhs_atoms.end()) return std::nullopt;
    if (w.rule_indices.size() != w.fresh_vars.size()) return std::nullopt;
    if (!(w.rule_indices == global_rule_indices(sys, w.atom.pred))) return std::nullopt;
    LuResult res;
    res.witness = w;
    for (size_t k = 0; k < w.rule_indices.size(); ++k) {
        const auto& rule = sys.rules[w.rule_indices[k]];
        if (rule.subgoal_vars_flat().size() != w.fresh_vars[k].size()) return std::nullopt;
        // freshness: names may not collide with the consequent
        auto fv = seq.free_vars();
        for (const auto& f : w.fresh_vars[k])
            if (fv.count(f)) return std::nullopt;
        RuleInstance inst = instantiate_rule(sys, rule, w.atom, w.fresh_vars[k]);
        Sequent ante = seq;
        ante.lhs_atoms.erase(std::find(ante.lhs_atoms.begin(), ante.lhs_atoms.end(), w.atom));
        ante.lhs_constraints.push_back(inst.constraint);
        for (auto& s : inst.subgoals) ante.lhs_atoms.push_back(std::move(s));
        ante.normalize(sys.signature);
        res.antecedents.push_back(std::move(ante));
    }
    return res;
}

std::optional<RuResult> apply_ru(const InductiveSystem& sys, const Sequent& seq, VarGen& vg) {
    for (const auto& m : seq.rhs) {
        if (!m.is_bare_atom()) continue;
        if (InductiveSystem::is_universal(m.atoms[0].pred)) continue;
        RuWitness w;
        w.atom = m.atoms[0];
        w.rule_indices = global_rule_indices(sys, w.atom.pred);
        if (w.rule_indices.empty()) return std::nullopt;
        for (size_t ri : w.rule_indices) w.fresh_vars.push_back(make_fresh(sys, sys.rules[ri], vg));
        return apply_ru_with(sys, seq, w);
    }
    return std::nullopt;
}

std::optional<RuResult> apply_ru_with(const InductiveSystem& sys, const Sequent& seq, const RuWitness& w) {
    RightMember bare;
    bare.atoms = {w.atom};
    auto it = std::find(seq.rhs.begin(), seq.rhs.end(), bare);
    if (it == seq.rhs.end()) return std::nullopt;
    if (w.rule_indices.size() != w.fresh_vars.size()) return std::nullopt;
    if (!(w.rule_indices == global_rule_indices(sys, w.atom.pred))) return std::nullopt;
    RuResult res;
    res.witness = w;
    Sequent ante = seq;
    ante.rhs.erase(std::find(ante.rhs.begin(), ante.rhs.end(), bare));
    auto fv = seq.free_vars();
    for (size_t k = 0; k < w.rule_indices.size(); ++k) {
        const auto& rule = sys.rules[w.rule_indices[k]];
        if (rule.subgoal_vars_flat().size() != w.fresh_vars[k].size()) return std::nullopt;
        for (const auto& f : w.fresh_vars[k])
            if (fv.count(f)) return std::nullopt;
        RuleInstance inst = instantiate_rule(sys, rule, w.atom, w.fresh_vars[k]);
        RightMember m;
        m.ex_vars = w.fresh_vars[k];
        m.constraint = std::move(inst.constraint);
        m.atoms = std::move(inst.subgoals);
        ante.rhs.push_back(std::move(m));
    }
    ante.normalize(sys.signature);
    res.antecedent = std::move(ante);
    return res;
}

namespace {

// Image variables for RD witness search: subgoal-position variables first so
// canonical representatives keep antecedents basic.
std::vector<std::string> rd_image_vars(const Sequent& seq) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& a : seq.lhs_atoms)
        for (const auto& v : a.args)
            if (seen.insert(v).second) out.push_back(v);
    for (const auto& c : seq.lhs_constraints)
        for (const auto& v : constraint_vars(c))
            if (seen.insert(v).second) out.push_back(v);
    return out;
}

} // namespace

std::optional<RdResult> apply_rd(const InductiveSystem& sys, const Sequent& seq) {
    if (seq.lhs_constraints.size() > 1) return std::nullopt;
    if (seq.rhs.empty()) return std::nullopt;
    for (const auto& m : seq.rhs)
        if (!m.is_quantified() && !m.atoms.empty()) return std::nullopt; // bare atoms and plain conjunctions block RD

    auto sorts = seq.var_sorts(sys);
    auto images = rd_image_vars(seq);

    RdResult res;
    Sequent ante = seq;
    ante.lhs_constraints.clear();
    ante.rhs.clear();

    std::set<std::vector<std::string>> lhs_tuples;
    for (const auto& a : seq.lhs_atoms) lhs_tuples.insert(a.args);

    for (const auto& m : seq.rhs) {
        bool entailed = false;
        std::vector<std::map<std::string, std::string>> subs;
        if (sys.theory == Theory::Herbrand) {
            LiteralConstraint phi = fol_lhs(seq);
            LiteralConstraint psi = m.constraint ? std::get<LiteralConstraint>(*m.constraint) : LiteralConstraint{};
            WitnessRequest req;
            req.phi = phi;
            for (const auto& v : images) req.image_vars.push_back(Term::var(v, sorts.at(v)));
            std::vector<Term> ex;
            for (const auto& v : m.ex_vars) ex.push_back(Term::var(v, sorts.at(v)));
            req.ex_tuples = {ex};
            req.psi = psi;
            auto ws = h_witnesses(sys.signature, req, WitnessMode::Flat);
            for (const auto& th : ws.witnesses) {
                std::map<std::string, std::string> sub;
                bool flat = true;
                for (const auto& [v, t] : th.entries()) {
                    if (!t.is_var()) { flat = false; break; }
                    sub[v.name()] = t.name();
                }
                if (flat) subs.push_back(std::move(sub));
            }
            entailed = !subs.empty() ||
                       h_exists_entailed(sys.signature, phi, std::set<Term>(ex.begin(), ex.end()), psi,
                                         req.image_vars);
        } else {
            SymbolicHeap phi = sl_lhs(seq);
            SymbolicHeap psi = m.constraint ? std::get<SymbolicHeap>(*m.constraint) : SymbolicHeap{};
            ShWitnessRequest req;
            req.phi = phi;
            req.image_vars = images;
            req.ex_tuples = {m.ex_vars};
            req.psi = psi;
            auto ws = sh_witnesses(req, ShWitnessMode::Flat);
            subs = ws.witnesses;
            entailed = !subs.empty() ||
                       sh_exists_entailed(phi, std::set<std::string>(m.ex_vars.begin(), m.ex_vars.end()), psi,
                                          images);
        }
        res.witness.entailed.push_back(entailed);
        res.witness.witnesses.push_back(entailed ? subs : std::vector<std::map<std::string, std::string>>{});
        if (!entailed) continue;
        for (const auto& sub : res.witness.witnesses.back()) {
            RightMember nm;
            for (const auto& a : m.atoms) {
                PredAtom na = a;
                for (auto& arg : na.args) {
                    auto itv = sub.find(arg);
                    if (itv != sub.end()) arg = itv->second;
                }
                nm.atoms.push_back(std::move(na));
            }
            // universal padding so every left tuple is represented
            std::set<std::vector<std::string>> present;
            for (const auto& a : nm.atoms) present.insert(a.args);
            for (const auto& tup : lhs_tuples)
                if (!present.count(tup))
                    nm.atoms.push_back(PredAtom{InductiveSystem::universal_name(tup.size()), tup});
            ante.rhs.push_back(std::move(nm));
        }
    }
    ante.normalize(sys.signature);
    res.antecedent = std::move(ante);
    return res;
}

std::optional<ArResult> apply_ar(const InductiveSystem& sys, const Sequent& seq) {
    for (size_t mi = 0; mi < seq.rhs.size(); ++mi) {
        const auto& m = seq.rhs[mi];
        if (m.constraint || !m.ex_vars.empty()) continue;
        for (size_t a = 0; a < m.atoms.size(); ++a)
            for (size_t b = a + 1; b < m.atoms.size(); ++b) {
                if (m.atoms[a].args != m.atoms[b].args) continue;
                ArResult res;
                res.witness = ArWitness{mi, a, b};
                for (size_t drop : {b, a}) {
                    Sequent ante = seq;
                    RightMember nm = m;
                    nm.atoms.erase(nm.atoms.begin() + static_cast<long>(drop));
                    ante.rhs[mi] = std::move(nm);
                    ante.normalize(sys.signature);
                    res.antecedents.push_back(std::move(ante));
                }
                return res;
            }
    }
    return std::nullopt;
}

std::optional<SpShape> sp_shape(const InductiveSystem& sys, const Sequent& seq) {
    (void)sys;
    if (!seq.lhs_constraints.empty() || seq.lhs_atoms.empty() || seq.rhs.empty()) return std::nullopt;
    // pairwise disjoint variable tuples on the left
    std::set<std::string> seen;
    for (const auto& a : seq.lhs_atoms)
        for (const auto& v : a.args)
            if (!seen.insert(v).second) return std::nullopt;
    SpShape shape;
    shape.n = seq.lhs_atoms.size();
    shape.k = seq.rhs.size();
    for (const auto& m : seq.rhs) {
        if (m.constraint || !m.ex_vars.empty()) return std::nullopt;
        if (m.atoms.size() != shape.n) return std::nullopt;
        std::vector<std::string> row(shape.n);
        std::vector<bool> covered(shape.n, false);
        for (const auto& a : m.atoms) {
            bool placed = false;
            for (size_t i = 0; i < shape.n; ++i) {
                if (a.args == seq.lhs_atoms[i].args && !covered[i]) {
                    row[i] = a.pred;
                    covered[i] = true;
                    placed = true;
                    break;
                }
            }
            if (!placed) return std::nullopt;
        }
        shape.preds.push_back(std::move(row));
    }
    return shape;
}

Sequent sp_pair_sequent(const InductiveSystem& sys, const Sequent& seq, const SpShape& shape, size_t cf_index,
                        size_t coord) {
    Sequent pair;
    pair.theory = seq.theory;
    pair.lhs_atoms = {seq.lhs_atoms[coord]};
    for (size_t l = 0; l < shape.k; ++l) {
        size_t digit = cf_index;
        for (size_t d = 0; d < l; ++d) digit /= shape.n;
        digit %= shape.n;
        if (digit != coord) continue;
        RightMember m;
        m.atoms = {PredAtom{shape.preds[l][coord], seq.lhs_atoms[coord].args}};
        pair.rhs.push_back(std::move(m));
    }
    pair.normalize(sys.signature);
    return pair;
}

std::vector<Sequent> apply_sp(const InductiveSystem& sys, const Sequent& seq, const SpShape& shape,
                              const std::vector<int>& choice_vector) {
    size_t cf_count = 1;
    for (size_t l = 0; l < shape.k; ++l) cf_count *= shape.n;
    std::vector<Sequent> out;
    if (choice_vector.size() != cf_count) return out;
    for (size_t j = 0; j < cf_count; ++j) {
        Sequent pair = sp_pair_sequent(sys, seq, shape, j, static_cast<size_t>(choice_vector[j]));
        if (std::find(out.begin(), out.end(), pair) == out.end()) out.push_back(std::move(pair));
    }
    return out;
}

namespace {

struct AxContext {
    const InductiveSystem& sys;
    const Sequent& seq;
    // Herbrand
    LiteralConstraint fol;
    std::optional<Substitution> mu;
    // SL
    SymbolicHeap sl;
    std::map<std::string, std::string> sl_reps;

    explicit AxContext(const InductiveSystem& s, const Sequent& q) : sys(s), seq(q) {
        if (s.theory == Theory::Herbrand) {
            fol = fol_lhs(q);
            mu = unify(fol.equality_pairs());
        } else {
            sl = sl_lhs(q);
            std::set<std::string> vs = sl.vars();
            for (const auto& a : q.lhs_atoms) vs.insert(a.args.begin(), a.args.end());
            sl_reps = sh_canonical_reps(sl, std::vector<std::string>(vs.begin(), vs.end()));
        }
    }

    bool lhs_unsat() const {
        if (sys.theory == Theory::Herbrand) return h_sat(sys.signature, fol) == SatResult::Unsat;
        return sh_sat(sl) == ShSat::Unsat;
    }

    std::string sl_rep(const std::string& v) const {
        auto it = sl_reps.find(v);
        return it == sl_reps.end() ? v : it->second;
    }

    bool atom_args_equal(const std::vector<std::string>& a, const std::vector<std::string>& b,
                         const std::map<std::string, SortName>& sorts) const {
        if (a.size() != b.size()) return false;
        if (sys.theory == Theory::Herbrand) {
            if (!mu) return false;
            for (size_t i = 0; i < a.size(); ++i) {
                auto sa = sorts.count(a[i]) ? sorts.at(a[i]) : SortName{};
                auto sb = sorts.count(b[i]) ? sorts.at(b[i]) : SortName{};
                Term ta = mu->apply(Term::var(a[i], sa));
                Term tb = mu->apply(Term::var(b[i], sb));
                if (!(ta == tb)) return false;
            }
            return true;
        }
        for (size_t i = 0; i < a.size(); ++i)
            if (sl_rep(a[i]) != sl_rep(b[i])) return false;
        return true;
    }

    // Checks one candidate instantiation of a rhs member.
    bool member_holds(const RightMember& m, const std::map<std::string, std::string>& theta_terms,
                      const std::map<std::string, SortName>& sorts) const {
        if (sys.theory == Theory::Herbrand) {
            Substitution th;
            for (const auto& [v, txt] : theta_terms) {
                auto t = parse_term_sexpr(sys.signature, sorts, txt);
                if (!t) return false;
                if (!th.bind(Term::var(v, sorts.count(v) ? sorts.at(v) : t->sort()), *t)) return false;
            }
            LiteralConstraint psi = m.constraint ? std::get<LiteralConstraint>(*m.constraint) : LiteralConstraint{};
            if (!h_entails(sys.signature, fol, psi.substituted(th))) return false;
            for (const auto& a : m.atoms) {
                if (InductiveSystem::is_universal(a.pred)) continue;
                std::vector<std::string> args;
                for (const auto& v : a.args) {
                    const Term* img = th.lookup(Term::var(v, sorts.count(v) ? sorts.at(v) : SortName{}));
                    if (img) {
                        if (!img->is_var()) return false; // atom arguments must stay variables
                        args.push_back(img->name());
                    } else {
                        args.push_back(v);
                    }
                }
                bool matched = false;
                for (const auto& g : seq.lhs_atoms)
                    if (g.pred == a.pred && atom_args_equal(args, g.args, sorts)) { matched = true; break; }
                if (!matched) return false;
            }
            return true;
        }
        std::map<std::string, std::string> th;
        for (const auto& [v, w] : theta_terms) th[v] = w;
        SymbolicHeap psi = m.constraint ? std::get<SymbolicHeap>(*m.constraint) : SymbolicHeap{};
        SymbolicHeap inst = psi.renamed(th);
        bool has_universal = false;
        std::vector<PredAtom> named;
        for (const auto& a : m.atoms) {
            if (InductiveSystem::is_universal(a.pred)) {
                has_universal = true;
                continue;
            }
            PredAtom na = a;
            for (auto& arg : na.args) {
                auto it = th.find(arg);
                if (it != th.end()) arg = it->second;
            }
            named.push_back(std::move(na));
        }
        if (has_universal) {
            if (!sh_entails_sub(sl, inst)) return false;
        } else {
            if (!sh_entails(sl, inst)) return false;
        }
        // atom matching modulo the left equalities
        std::map<std::string, SortName> dummy;
        std::vector<bool> used(seq.lhs_atoms.size(), false);
        // injective matching; atom counts are tiny, greedy with backtracking
        std::function<bool(size_t)> match = [&](size_t i) -> bool {
            if (i == named.size()) return true;
            for (size_t g = 0; g < seq.lhs_atoms.size(); ++g) {
                if (used[g] || seq.lhs_atoms[g].pred != named[i].pred) continue;
                if (!atom_args_equal(named[i].args, seq.lhs_atoms[g].args, dummy)) continue;
                used[g] = true;
                if (match(i + 1)) return true;
                used[g] = false;
            }
            return false;
        };
        if (!match(0)) return false;
        if (!has_universal) {
            // exact multiset: everything on the left must be consumed
            for (bool u : used)
                if (!u) return false;
            if (named.size() != seq.lhs_atoms.size()) return false;
        }
        return true;
    }
};

} // namespace

std::optional<AxWitness> try_ax(const InductiveSystem& sys, const Sequent& seq) {
    AxContext ctx(sys, seq);
    if (ctx.lhs_unsat()) {
        AxWitness w;
        w.member_index = -1;
        return w;
    }
    auto sorts = seq.var_sorts(sys);

    // candidate images for existentially bound variables
    std::vector<std::string> candidates;
    if (sys.theory == Theory::Herbrand) {
        std::set<Term> cset;
        for (const auto& [v, s] : sorts)
            if (!s.empty()) cset.insert(Term::var(v, s));
        for (const auto& t : ctx.fol.all_subterms()) cset.insert(t);
        for (const auto& t : cset) candidates.push_back(term_sexpr(t));
    } else {
        std::set<std::string> cset;
        for (const auto& c : seq.lhs_constraints)
            for (const auto& v : constraint_vars(c)) cset.insert(v);
        for (const auto& a : seq.lhs_atoms) cset.insert(a.args.begin(), a.args.end());
        for (const auto& m : seq.rhs) {
            std::set<std::string> bound(m.ex_vars.begin(), m.ex_vars.end());
            if (m.constraint)
                for (const auto& v : constraint_vars(*m.constraint))
                    if (!bound.count(v)) cset.insert(v);
            for (const auto& a : m.atoms)
                for (const auto& v : a.args)
                    if (!bound.count(v)) cset.insert(v);
        }
        candidates.assign(cset.begin(), cset.end());
    }

    for (size_t mi = 0; mi < seq.rhs.size(); ++mi) {
        const auto& m = seq.rhs[mi];
        if (m.ex_vars.empty()) {
            if (ctx.member_holds(m, {}, sorts)) {
                AxWitness w;
                w.member_index = static_cast<int>(mi);
                return w;
            }
            continue;
        }
        if (candidates.empty() || m.ex_vars.size() > 4) continue;
        std::vector<size_t> idx(m.ex_vars.size(), 0);
        while (true) {
            std::map<std::string, std::string> theta;
            for (size_t i = 0; i < m.ex_vars.size(); ++i) theta[m.ex_vars[i]] = candidates[idx[i]];
            if (ctx.member_holds(m, theta, sorts)) {
                AxWitness w;
                w.member_index = static_cast<int>(mi);
                w.theta = std::move(theta);
                return w;
            }
            size_t k = m.ex_vars.size();
            bool done = false;
            while (k > 0) {
                --k;
                if (++idx[k] < candidates.size()) break;
                idx[k] = 0;
                if (k == 0) { done = true; break; }
            }
            if (done) break;
        }
    }
    return std::nullopt;
}

bool verify_ax(const InductiveSystem& sys, const Sequent& seq, const AxWitness& w, std::string* why) {
    AxContext ctx(sys, seq);
    if (w.member_index < 0) {
        if (ctx.lhs_unsat()) return true;
        if (why) *why = "left-hand side is satisfiable";
        return false;
    }
    if (static_cast<size_t>(w.member_index) >= seq.rhs.size()) {
        if (why) *why = "axiom member index out of range";
        return false;
    }
    const auto& m = seq.rhs[static_cast<size_t>(w.member_index)];
    std::set<std::string> keys;
    for (const auto& [k, _] : w.theta) keys.insert(k);
    std::set<std::string> ex(m.ex_vars.begin(), m.ex_vars.end());
    if (keys != ex) {
        if (why) *why = "axiom substitution does not cover the bound variables";
        return false;
    }
    auto sorts = seq.var_sorts(sys);
    if (!ctx.member_holds(m, w.theta, sorts)) {
        if (why) *why = "axiom side condition fails for the stored instantiation";
        return false;
    }
    return true;
}

namespace {

bool constraint_equal(const Constraint& a, const Constraint& b) {
    if (std::holds_alternative<LiteralConstraint>(a) != std::holds_alternative<LiteralConstraint>(b)) return false;
    if (std::holds_alternative<LiteralConstraint>(a))
        return std::get<LiteralConstraint>(a) == std::get<LiteralConstraint>(b);
    return std::get<SymbolicHeap>(a) == std::get<SymbolicHeap>(b);
}

} // namespace

bool verify_id(const InductiveSystem& sys, const Sequent& node, const Sequent& pivot,
               const std::map<std::string, std::string>& theta, std::string* why) {
    // flat injective
    std::set<std::string> images;
    for (const auto& [v, w] : theta)
        if (!images.insert(w).second) {
            if (why) *why = "backlink substitution is not injective";
            return false;
        }
    auto pfv = pivot.free_vars();
    for (const auto& v : pfv)
        if (!theta.count(v)) {
            if (why) *why = "backlink substitution misses pivot variable '" + v + "'";
            return false;
        }
    Sequent renamed = pivot;
    for (auto& a : renamed.lhs_atoms)
        for (auto& arg : a.args) {
            auto it = theta.find(arg);
            if (it != theta.end()) arg = it->second;
        }
    for (auto& c : renamed.lhs_constraints) c = rename_constraint(c, theta, sys.signature);
    std::vector<RightMember> members;
    for (const auto& m : renamed.rhs) members.push_back(m.renamed_free(theta, sys.signature));
    renamed.rhs = members;
    renamed.normalize(sys.signature);

    if (renamed.lhs_atoms != node.lhs_atoms) {
        if (why) *why = "renamed pivot left atoms differ from the node";
        return false;
    }
    if (renamed.lhs_constraints.size() != node.lhs_constraints.size()) {
        if (why) *why = "renamed pivot constraints differ from the node";
        return false;
    }
    for (size_t i = 0; i < renamed.lhs_constraints.size(); ++i)
        if (!constraint_equal(renamed.lhs_constraints[i], node.lhs_constraints[i])) {
            if (why) *why = "renamed pivot constraints differ from the node";
            return false;
        }
    for (const auto& m : renamed.rhs)
        if (std::find(node.rhs.begin(), node.rhs.end(), m) == node.rhs.end()) {
            if (why) *why = "renamed pivot right member is not part of the node";
            return false;
        }
    return true;
}

std::optional<IdMatch> try_id(const InductiveSystem& sys, const Sequent& seq, const std::vector<PathFrame>& path) {
    if (path.empty()) return std::nullopt;
    // nearest pivot first
    for (size_t a = path.size(); a-- > 0;) {
        bool lu_on_path = false;
        for (size_t i = a; i < path.size(); ++i)
            if (path[i].rule == RuleLabel::LU) { lu_on_path = true; break; }
        if (!lu_on_path) continue;
        const Sequent& pivot = *path[a].sequent;
        if (pivot.lhs_atoms.size() != seq.lhs_atoms.size()) continue;
        if (pivot.lhs_constraints.size() != seq.lhs_constraints.size()) continue;
        if (pivot.rhs.size() > seq.rhs.size()) continue;

        // backtracking match of pivot atoms onto node atoms
        std::vector<bool> used(seq.lhs_atoms.size(), false);
        std::map<std::string, std::string> theta;
        std::function<bool(size_t)> assign = [&](size_t i) -> bool {
            if (i == pivot.lhs_atoms.size()) {
                // constraints must be covered by theta already
                std::map<std::string, std::string> th = theta;
                Sequent probe = pivot;
                // extend theta over remaining pivot free vars by identity when
                // target also uses the same name; otherwise fail this pivot
                for (const auto& v : pivot.free_vars())
                    if (!th.count(v)) {
                        if (seq.free_vars().count(v)) th[v] = v;
                        else return false;
                    }
                std::set<std::string> imgs;
                for (const auto& [x, y] : th)
                    if (!imgs.insert(y).second) return false;
                if (verify_id(sys, seq, pivot, th, nullptr)) {
                    theta = th;
                    return true;
                }
                return false;
            }
            const auto& pa = pivot.lhs_atoms[i];
            for (size_t g = 0; g < seq.lhs_atoms.size(); ++g) {
                if (used[g] || seq.lhs_atoms[g].pred != pa.pred ||
                    seq.lhs_atoms[g].args.size() != pa.args.size())
                    continue;
                std::vector<std::pair<std::string, bool>> added;
                bool ok = true;
                for (size_t t = 0; t < pa.args.size() && ok; ++t) {
                    auto it = theta.find(pa.args[t]);
                    if (it != theta.end()) {
                        ok = it->second == seq.lhs_atoms[g].args[t];
                    } else {
                        theta[pa.args[t]] = seq.lhs_atoms[g].args[t];
                        added.emplace_back(pa.args[t], true);
                    }
                }
                if (ok) {
                    used[g] = true;
                    if (assign(i + 1)) return true;
                    used[g] = false;
                }
                for (const auto& [v, _] : added) theta.erase(v);
            }
            return false;
        };
        if (assign(0)) {
            IdMatch m;
            m.steps_up = static_cast<int>(path.size() - a);
            m.theta = theta;
            return m;
        }
    }
    return std::nullopt;
}

} // namespace indescent
