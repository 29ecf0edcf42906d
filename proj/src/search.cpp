#include "indescent/search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <functional>

#include "indescent/herbrand.hpp"
#include "indescent/seplog.hpp"

namespace indescent {

namespace {

using Clock = std::chrono::steady_clock;

struct Ctx {
    const InductiveSystem& sys;
    const Strategy& strat;
    SearchLimits limits;
    VarGen vargen;
    size_t nodes = 0;
    Clock::time_point start = Clock::now();
    bool budget_hit = false;
    std::string limit_reason;
    bool saw_dead_leaf = false;
    std::optional<DeadLeafTrail> first_trail;

    // branch-local trail (Herbrand witness reconstruction)
    std::vector<LiteralConstraint> trail_constraints;
    std::vector<PredAtom> trail_dropped;

    // memo of self-contained proofs keyed by (sequent, strategy state)
    std::map<std::pair<Sequent, int>, std::shared_ptr<ProofNode>> proof_memo;

    bool over_budget() {
        if (budget_hit) return true;
        if (nodes > limits.max_nodes) {
            budget_hit = true;
            limit_reason = "node budget exhausted";
        } else if ((nodes & 0x3f) == 0 &&
                   std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count() >
                       limits.wall_ms) {
            budget_hit = true;
            limit_reason = "time budget exhausted";
        }
        return budget_hit;
    }
};

struct Res {
    SearchStatus status = SearchStatus::Exhausted;
    std::unique_ptr<ProofNode> proof;
};

bool lhs_satisfiable(const InductiveSystem& sys, const Sequent& seq) {
    if (sys.theory == Theory::Herbrand) {
        LiteralConstraint all;
        for (const auto& c : seq.lhs_constraints) all = all.conjoined(std::get<LiteralConstraint>(c));
        return h_sat(sys.signature, all) != SatResult::Unsat;
    }
    SymbolicHeap all;
    for (const auto& c : seq.lhs_constraints) all = all.star(std::get<SymbolicHeap>(c));
    return sh_sat(all) == ShSat::Sat;
}

// True when every ID node inside the subtree points at a pivot inside it.
bool self_contained(const ProofNode& node, int depth) {
    if (node.rule == RuleLabel::ID) {
        const auto& w = std::get<IdWitness>(node.witness);
        if (w.steps_up > depth) return false;
    }
    for (const auto& c : node.children)
        if (!self_contained(*c, depth + 1)) return false;
    return true;
}

class Engine {
public:
    Engine(Ctx& ctx) : ctx_(ctx) {}

    Res prove(const Sequent& seq, int state, int depth, std::vector<PathFrame>& path) {
        if (ctx_.over_budget() || depth > ctx_.limits.max_depth) {
            if (depth > ctx_.limits.max_depth && ctx_.limit_reason.empty())
                ctx_.limit_reason = "depth budget exhausted";
            Res r;
            r.status = SearchStatus::Exhausted;
            return r;
        }
        ++ctx_.nodes;
        assert(sequent_tree_shaped(seq) && "reachable left-hand sides stay tree-shaped");

        // dead leaf: nothing remains to prove against
        if (seq.rhs.empty() && lhs_satisfiable(ctx_.sys, seq)) {
            record_dead_leaf(seq);
            Res r;
            r.status = SearchStatus::Refuted;
            return r;
        }

        // zero-antecedent rules are taken eagerly
        if (ctx_.strat.allows_final(state, RuleLabel::AX)) {
            if (auto ax = try_ax(ctx_.sys, seq)) {
                Res r;
                r.status = SearchStatus::Proved;
                r.proof = std::make_unique<ProofNode>();
                r.proof->sequent = seq;
                r.proof->rule = RuleLabel::AX;
                r.proof->witness = *ax;
                return r;
            }
        }
        if (ctx_.strat.allows_final(state, RuleLabel::ID)) {
            if (auto id = try_id(ctx_.sys, seq, path)) {
                Res r;
                r.status = SearchStatus::Proved;
                r.proof = std::make_unique<ProofNode>();
                r.proof->sequent = seq;
                r.proof->rule = RuleLabel::ID;
                r.proof->witness = IdWitness{id->steps_up, id->theta};
                return r;
            }
        }

        bool any_exhausted = false;

        // AR
        if (ctx_.strat.allows(state, RuleLabel::AR)) {
            if (auto ar = apply_ar(ctx_.sys, seq)) {
                Res r = descend_all(seq, RuleLabel::AR, ar->antecedents, ArWitness(ar->witness), state, depth, path);
                if (r.status == SearchStatus::Proved) return r;
                if (r.status == SearchStatus::Exhausted) any_exhausted = true;
            }
        }
        // RD
        if (ctx_.strat.allows(state, RuleLabel::RD)) {
            if (auto rd = apply_rd(ctx_.sys, seq)) {
                std::vector<Sequent> ants{rd->antecedent};
                // the consumed constraint joins the branch trail
                size_t mark = ctx_.trail_constraints.size();
                if (ctx_.sys.theory == Theory::Herbrand)
                    for (const auto& c : seq.lhs_constraints)
                        ctx_.trail_constraints.push_back(std::get<LiteralConstraint>(c));
                Res r = descend_all(seq, RuleLabel::RD, ants, RdWitness(rd->witness), state, depth, path);
                ctx_.trail_constraints.resize(mark);
                if (r.status == SearchStatus::Proved) return r;
                if (r.status == SearchStatus::Exhausted) any_exhausted = true;
            }
        }
        // LU
        if (ctx_.strat.allows(state, RuleLabel::LU)) {
            if (auto lu = apply_lu(ctx_.sys, seq, ctx_.vargen)) {
                Res r = descend_all(seq, RuleLabel::LU, lu->antecedents, LuWitness(lu->witness), state, depth, path);
                if (r.status == SearchStatus::Proved) return r;
                if (r.status == SearchStatus::Exhausted) any_exhausted = true;
            }
        }
        // RU
        if (ctx_.strat.allows(state, RuleLabel::RU)) {
            if (auto ru = apply_ru(ctx_.sys, seq, ctx_.vargen)) {
                std::vector<Sequent> ants{ru->antecedent};
                Res r = descend_all(seq, RuleLabel::RU, ants, RuWitness(ru->witness), state, depth, path);
                if (r.status == SearchStatus::Proved) return r;
                if (r.status == SearchStatus::Exhausted) any_exhausted = true;
            }
        }
        // SP
        if (ctx_.strat.allows(state, RuleLabel::SP)) {
            if (auto shape = sp_shape(ctx_.sys, seq)) {
                Res r = split(seq, *shape, state, depth, path);
                if (r.status == SearchStatus::Proved) return r;
                if (r.status == SearchStatus::Exhausted) any_exhausted = true;
            }
        }

        Res r;
        if (any_exhausted || ctx_.budget_hit) {
            r.status = SearchStatus::Exhausted;
        } else {
            // all alternatives refuted, or the sequent is stuck; a disproof
            // is only ever reported after a witness verifies
            r.status = SearchStatus::Refuted;
        }
        return r;
    }

private:
    Ctx& ctx_;

    void record_dead_leaf(const Sequent& seq) {
        ctx_.saw_dead_leaf = true;
        if (ctx_.first_trail || ctx_.sys.theory != Theory::Herbrand) return;
        DeadLeafTrail t;
        t.constraints = ctx_.trail_constraints;
        for (const auto& c : seq.lhs_constraints) t.constraints.push_back(std::get<LiteralConstraint>(c));
        t.pending_atoms = ctx_.trail_dropped;
        for (const auto& a : seq.lhs_atoms) t.pending_atoms.push_back(a);
        ctx_.first_trail = std::move(t);
    }

    Res descend_all(const Sequent& seq, RuleLabel rule, const std::vector<Sequent>& antecedents,
                    RuleWitness witness, int state, int depth, std::vector<PathFrame>& path) {
        int next = ctx_.strat.step(state, rule);
        std::vector<std::unique_ptr<ProofNode>> kids;
        path.push_back(PathFrame{&seq, rule});
        Res out;
        out.status = SearchStatus::Proved;
        for (const auto& ante : antecedents) {
            Res r = prove(ante, next, depth + 1, path);
            if (r.status == SearchStatus::Refuted) {
                out.status = SearchStatus::Refuted;
                break;
            }
            if (r.status == SearchStatus::Exhausted) {
                out.status = SearchStatus::Exhausted;
                break;
            }
            kids.push_back(std::move(r.proof));
        }
        path.pop_back();
        if (out.status != SearchStatus::Proved) return out;
        out.proof = std::make_unique<ProofNode>();
        out.proof->sequent = seq;
        out.proof->rule = rule;
        out.proof->witness = std::move(witness);
        out.proof->children = std::move(kids);
        return out;
    }

    // SP via choice functions: proved when every choice function admits a
    // proving coordinate, refuted when some choice function refutes all of
    // them.
    Res split(const Sequent& seq, const SpShape& shape, int state, int depth, std::vector<PathFrame>& path) {
        size_t cf_count = 1;
        for (size_t l = 0; l < shape.k; ++l) {
            cf_count *= shape.n;
            if (cf_count > (1u << 16)) {
                Res r;
                r.status = SearchStatus::Exhausted;
                ctx_.budget_hit = true;
                ctx_.limit_reason = "split choice space too large";
                return r;
            }
        }
        int next = ctx_.strat.step(state, RuleLabel::SP);
        path.push_back(PathFrame{&seq, RuleLabel::SP});

        std::map<Sequent, Res> pair_results;
        auto pair_prove = [&](const Sequent& pair) -> Res& {
            auto it = pair_results.find(pair);
            if (it != pair_results.end()) return it->second;
            auto memo = ctx_.proof_memo.find({pair, next});
            if (memo != ctx_.proof_memo.end()) {
                Res r;
                r.status = SearchStatus::Proved;
                r.proof = memo->second->clone();
                return pair_results.emplace(pair, std::move(r)).first->second;
            }
            // dropped coordinates owe witness models on refuted branches
            size_t mark = ctx_.trail_dropped.size();
            for (const auto& a : seq.lhs_atoms)
                if (!(pair.lhs_atoms.size() == 1 && a == pair.lhs_atoms[0])) ctx_.trail_dropped.push_back(a);
            Res r = prove(pair, next, depth + 1, path);
            ctx_.trail_dropped.resize(mark);
            if (r.status == SearchStatus::Proved && self_contained(*r.proof, 0))
                ctx_.proof_memo.emplace(std::make_pair(pair, next), r.proof->clone());
            return pair_results.emplace(pair, std::move(r)).first->second;
        };

        bool all_cfs_ok = true;
        bool some_cf_all_refuted = false;
        bool any_exhausted = false;
        std::vector<int> choice(cf_count, -1);
        for (size_t j = 0; j < cf_count && !ctx_.budget_hit; ++j) {
            bool ok = false;
            bool all_refuted = true;
            for (size_t i = 0; i < shape.n; ++i) {
                Sequent pair = sp_pair_sequent(ctx_.sys, seq, shape, j, i);
                Res& r = pair_prove(pair);
                if (r.status == SearchStatus::Proved) {
                    ok = true;
                    all_refuted = false;
                    if (choice[j] < 0) choice[j] = static_cast<int>(i);
                    break;
                }
                if (r.status == SearchStatus::Exhausted) {
                    all_refuted = false;
                    any_exhausted = true;
                }
            }
            if (!ok) all_cfs_ok = false;
            if (all_refuted) {
                some_cf_all_refuted = true;
                break;
            }
        }
        path.pop_back();

        Res out;
        if (all_cfs_ok && !ctx_.budget_hit) {
            out.status = SearchStatus::Proved;
            out.proof = std::make_unique<ProofNode>();
            out.proof->sequent = seq;
            out.proof->rule = RuleLabel::SP;
            out.proof->witness = SpWitness{choice};
            // children in deduplicated antecedent order
            std::vector<Sequent> antes = apply_sp(ctx_.sys, seq, shape, choice);
            for (const auto& ante : antes) {
                auto it = pair_results.find(ante);
                out.proof->children.push_back(it->second.proof->clone());
            }
            return out;
        }
        if (some_cf_all_refuted && !any_exhausted && !ctx_.budget_hit)
            out.status = SearchStatus::Refuted;
        else
            out.status = ctx_.budget_hit || any_exhausted ? SearchStatus::Exhausted : SearchStatus::Refuted;
        return out;
    }
};

} // namespace

SearchResult search_sequent(const InductiveSystem& sys, const Sequent& root, const Strategy& strat,
                            const SearchLimits& limits) {
    Ctx ctx{sys, strat, limits, {}, 0, Clock::now(), false, {}, false, {}, {}, {}, {}};
    Engine eng(ctx);
    std::vector<PathFrame> path;
    Res r = eng.prove(root, strat.start(), 0, path);
    SearchResult out;
    out.nodes = ctx.nodes;
    out.saw_dead_leaf = ctx.saw_dead_leaf;
    out.trail = ctx.first_trail;
    out.limit_reason = ctx.limit_reason;
    if (r.status == SearchStatus::Proved) {
        out.status = SearchStatus::Proved;
        out.proof = std::move(r.proof);
    } else if (r.status == SearchStatus::Refuted && !ctx.budget_hit) {
        out.status = SearchStatus::Refuted;
    } else {
        out.status = SearchStatus::Exhausted;
    }
    return out;
}

Sequent make_root_sequent(const InductiveSystem& sys, const EntailmentQuery& q) {
    Sequent s;
    s.theory = sys.theory;
    const auto& p = sys.predicate(q.lhs);
    std::vector<std::string> args;
    for (size_t i = 0; i < p.arity(); ++i) args.push_back("x" + std::to_string(i + 1));
    s.lhs_atoms.push_back(PredAtom{q.lhs, args});
    for (const auto& r : q.rhs) {
        RightMember m;
        m.atoms = {PredAtom{r, args}};
        s.rhs.push_back(std::move(m));
    }
    s.normalize(sys.signature);
    return s;
}

namespace {

// Solve the dead-leaf trail into a ground tuple for the root goal variables.
std::optional<std::vector<Term>> solve_trail(const InductiveSystem& sys, const DeadLeafTrail& trail,
                                             const std::vector<std::string>& root_vars, int enum_depth) {
    LiteralConstraint all;
    for (const auto& c : trail.constraints) all = all.conjoined(c);

    // models for every pending atom, smallest weight first
    std::vector<std::vector<std::vector<Term>>> pools;
    for (const auto& a : trail.pending_atoms) {
        if (InductiveSystem::is_universal(a.pred)) {
            pools.push_back({});
            continue;
        }
        std::set<std::vector<Term>> found;
        for (int w = 0; w <= enum_depth && found.empty(); ++w) found = h_enumerate(sys, a.pred, w);
        if (found.empty()) return std::nullopt;
        std::vector<std::vector<Term>> pool(found.begin(), found.end());
        std::sort(pool.begin(), pool.end(), [](const auto& x, const auto& y) {
            int wx = 0, wy = 0;
            for (const auto& t : x) wx += t.weight();
            for (const auto& t : y) wy += t.weight();
            if (wx != wy) return wx < wy;
            return x < y;
        });
        if (pool.size() > 8) pool.resize(8);
        pools.push_back(std::move(pool));
    }

    std::vector<size_t> idx(pools.size(), 0);
    auto sorts_of_atom = [&](const PredAtom& a) {
        return sys.predicate(a.pred).arg_sorts;
    };
    while (true) {
        LiteralConstraint conj = all;
        bool bind_ok = true;
        for (size_t i = 0; i < trail.pending_atoms.size() && bind_ok; ++i) {
            const auto& a = trail.pending_atoms[i];
            if (InductiveSystem::is_universal(a.pred)) continue;
            const auto& tuple = pools[i][idx[i]];
            auto sorts = sorts_of_atom(a);
            for (size_t j = 0; j < a.args.size(); ++j)
                conj.add(Literal{true, Term::var(a.args[j], sorts[j]), tuple[j]});
        }
        conj.normalize();
        if (bind_ok) {
            auto mu = unify(conj.equality_pairs());
            if (mu) {
                bool diseq_ok = true;
                std::set<Term> free;
                for (const auto& l : conj.literals()) {
                    mu->apply(l.lhs).collect_vars(free);
                    mu->apply(l.rhs).collect_vars(free);
                }
                // ground remaining variables with the smallest terms available
                Substitution full = *mu;
                bool ground_ok = true;
                for (const auto& v : free) {
                    auto dom = ground_terms(sys.signature, v.sort(), enum_depth);
                    if (dom.empty()) { ground_ok = false; break; }
                    full.bind(v, dom.front());
                }
                if (ground_ok) {
                    for (const auto& l : conj.disequalities())
                        if (full.apply(mu->apply(l.lhs)) == full.apply(mu->apply(l.rhs))) { diseq_ok = false; break; }
                    if (diseq_ok) {
                        std::vector<Term> tuple;
                        bool all_ground = true;
                        for (const auto& v : root_vars) {
                            // root variable sorts come from the literals they occur in
                            Term img;
                            for (const auto& l : conj.literals()) {
                                for (const auto& w : l.lhs.vars())
                                    if (w.name() == v) img = full.apply(mu->apply(w));
                                for (const auto& w : l.rhs.vars())
                                    if (w.name() == v) img = full.apply(mu->apply(w));
                            }
                            if (!img.valid() || !img.is_ground()) { all_ground = false; break; }
                            tuple.push_back(img);
                        }
                        if (all_ground) return tuple;
                    }
                }
            }
        }
        // advance over atom model choices
        size_t k = pools.size();
        bool done = pools.empty();
        while (k > 0) {
            --k;
            if (pools[k].empty()) { if (k == 0) { done = true; break; } continue; }
            if (++idx[k] < pools[k].size()) break;
            idx[k] = 0;
            if (k == 0) { done = true; break; }
        }
        if (done) break;
    }
    return std::nullopt;
}

std::optional<Counterexample> herbrand_counterexample(const InductiveSystem& sys, const EntailmentQuery& q,
                                                      const std::optional<DeadLeafTrail>& trail, int enum_depth,
                                                      const std::vector<std::string>& root_vars) {
    auto verify = [&](const std::vector<Term>& tuple) -> std::optional<Counterexample> {
        int w = 0;
        for (const auto& t : tuple) w = std::max(w, t.weight());
        auto lhs = h_enumerate(sys, q.lhs, w);
        if (!lhs.count(tuple)) return std::nullopt;
        for (const auto& r : q.rhs)
            if (h_enumerate(sys, r, w).count(tuple)) return std::nullopt;
        Counterexample cex;
        cex.tuple = tuple;
        cex.verified = true;
        std::string ts = "(";
        for (size_t i = 0; i < tuple.size(); ++i) {
            if (i) ts += ", ";
            ts += tuple[i].str();
        }
        ts += ")";
        cex.transcript = "witness " + ts + " lies in the weight-" + std::to_string(w) + " enumeration of " + q.lhs +
                         " and in none of the right-hand enumerations";
        return cex;
    };
    if (trail) {
        auto tuple = solve_trail(sys, *trail, root_vars, enum_depth);
        if (tuple) {
            auto cex = verify(*tuple);
            if (cex) {
                cex->transcript += " (reconstructed from the failing branch)";
                return cex;
            }
        }
    }
    // direct sweep, smallest weight first
    for (int w = 0; w <= enum_depth; ++w) {
        auto lhs = h_enumerate(sys, q.lhs, w);
        std::vector<std::set<std::vector<Term>>> rhs;
        for (const auto& r : q.rhs) rhs.push_back(h_enumerate(sys, r, w));
        for (const auto& t : lhs) {
            bool covered = false;
            for (const auto& rs : rhs)
                if (rs.count(t)) { covered = true; break; }
            if (!covered) return verify(t);
        }
    }
    return std::nullopt;
}

std::optional<Counterexample> sl_counterexample(const InductiveSystem& sys, const EntailmentQuery& q, int max_locs,
                                                int max_unfold) {
    auto lhs = sh_enumerate(sys, q.lhs, max_locs, max_unfold);
    std::vector<std::set<SlModel>> rhs;
    for (const auto& r : q.rhs) rhs.push_back(sh_enumerate(sys, r, max_locs, max_unfold));
    // smallest models first
    std::vector<SlModel> ordered(lhs.begin(), lhs.end());
    std::sort(ordered.begin(), ordered.end(), [](const SlModel& a, const SlModel& b) {
        auto ka = std::make_pair(a.heap.size(), a.tree ? a.tree->node_count() : 0);
        auto kb = std::make_pair(b.heap.size(), b.tree ? b.tree->node_count() : 0);
        if (ka != kb) return ka < kb;
        return a < b;
    });
    for (const auto& m : ordered) {
        bool covered = false;
        for (const auto& rs : rhs)
            if (rs.count(m)) { covered = true; break; }
        if (covered) continue;
        Counterexample cex;
        cex.sl_model = m;
        cex.verified = true;
        // does the (tuple, heap) pair also separate the plain semantics?
        bool plain_covered = false;
        for (const auto& rs : rhs)
            for (const auto& rm : rs)
                if (rm.tuple == m.tuple && rm.heap == m.heap) { plain_covered = true; break; }
        cex.sl_plain_semantics_too = !plain_covered;
        cex.transcript = "model (heap " + m.heap.str() + ", unfolding tree " + (m.tree ? m.tree->str() : "-") +
                         ") lies in the bounded unfolding-tree enumeration of " + q.lhs +
                         " and in none of the right-hand enumerations (locations <= " + std::to_string(max_locs) +
                         ", unfoldings <= " + std::to_string(max_unfold) + ")";
        if (!cex.sl_plain_semantics_too)
            cex.transcript += "; the heap itself is covered on the right, so only the unfolding-tree semantics is refuted";
        return cex;
    }
    return std::nullopt;
}

} // namespace

QueryOutcome prove_query(const InductiveSystem& sys, const EntailmentQuery& q, const Strategy& strat,
                         const QueryOptions& opt) {
    QueryOutcome out;
    Sequent root = make_root_sequent(sys, q);
    SearchResult sr = search_sequent(sys, root, strat, opt.limits);
    out.nodes = sr.nodes;
    if (sr.status == SearchStatus::Proved) {
        out.kind = QueryOutcome::Kind::Proved;
        out.proof = std::move(sr.proof);
        return out;
    }
    if (sr.status == SearchStatus::Refuted) {
        std::optional<Counterexample> cex;
        if (sys.theory == Theory::Herbrand) {
            std::vector<std::string> root_vars;
            for (size_t i = 0; i < sys.predicate(q.lhs).arity(); ++i)
                root_vars.push_back("x" + std::to_string(i + 1));
            cex = herbrand_counterexample(sys, q, sr.trail, opt.enum_depth, root_vars);
        } else {
            cex = sl_counterexample(sys, q, opt.sl_max_locs, opt.sl_max_unfold);
        }
        if (cex) {
            out.kind = QueryOutcome::Kind::Disproved;
            out.cex = std::move(cex);
            return out;
        }
        out.kind = QueryOutcome::Kind::Unknown;
        out.reason = "search refuted the sequent but no bounded counterexample could be verified";
        return out;
    }
    out.kind = QueryOutcome::Kind::Unknown;
    out.reason = sr.limit_reason.empty() ? "search exhausted without a verdict" : sr.limit_reason;
    return out;
}

std::vector<ProofCheckIssue> validate_proof_shape(const ProofNode& root, const Strategy& strat) {
    std::vector<ProofCheckIssue> issues;
    std::vector<const ProofNode*> path;

    std::function<void(const ProofNode&, int)> walk = [&](const ProofNode& n, int state) {
        path.push_back(&n);
        int next = strat.step(state, n.rule);
        if (n.children.empty()) {
            if (n.rule != RuleLabel::AX && n.rule != RuleLabel::ID) {
                issues.push_back({n.sequent.str(), "leaf closed by a rule with antecedents"});
            } else if (next < 0 || !strat.accepting(next)) {
                issues.push_back({n.sequent.str(), "path word rejected by the strategy"});
            }
        } else if (next < 0) {
            issues.push_back({n.sequent.str(), "rule not allowed by the strategy here"});
        }
        if (n.rule == RuleLabel::ID) {
            const auto& w = std::get<IdWitness>(n.witness);
            if (w.steps_up <= 0 || static_cast<size_t>(w.steps_up) >= path.size()) {
                issues.push_back({n.sequent.str(), "backlink pivot is not a strict ancestor"});
            } else {
                size_t pivot_index = path.size() - 1 - static_cast<size_t>(w.steps_up);
                bool lu = false;
                for (size_t i = pivot_index; i + 1 < path.size(); ++i)
                    if (path[i]->rule == RuleLabel::LU) lu = true;
                if (!lu) issues.push_back({n.sequent.str(), "no left unfolding on the direct path"});
            }
        }
        for (const auto& c : n.children) walk(*c, next);
        path.pop_back();
    };
    walk(root, strat.start());

    // structured-derivation property: an RD between consecutive LUs
    std::function<void(const ProofNode&, bool)> structured = [&](const ProofNode& n, bool lu_open) {
        bool next_open = lu_open;
        if (n.rule == RuleLabel::LU) {
            if (lu_open) issues.push_back({n.sequent.str(), "consecutive left unfoldings without a reduction"});
            next_open = true;
        } else if (n.rule == RuleLabel::RD) {
            next_open = false;
        }
        for (const auto& c : n.children) structured(*c, next_open);
    };
    structured(root, false);
    return issues;
}

} // namespace indescent
