#include "indescent/seplog.hpp"

#include <algorithm>
#include <functional>

namespace indescent {

namespace {

struct UnionFind {
    std::map<std::string, std::string> parent;

    void ensure(const std::string& x) { parent.emplace(x, x); }
    std::string find(const std::string& x) {
        ensure(x);
        std::string r = x;
        while (parent[r] != r) r = parent[r];
        std::string c = x;
        while (parent[c] != r) {
            std::string n = parent[c];
            parent[c] = r;
            c = n;
        }
        return r;
    }
    void merge(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (rb < ra) std::swap(ra, rb); // deterministic representative
        parent[rb] = ra;
    }
};

UnionFind pure_classes(const SymbolicHeap& phi) {
    UnionFind uf;
    for (const auto& v : phi.vars()) uf.ensure(v);
    for (const auto& l : phi.pure)
        if (l.positive) uf.merge(l.lhs, l.rhs);
    return uf;
}

bool consistent(const SymbolicHeap& phi, UnionFind& uf) {
    for (const auto& l : phi.pure)
        if (!l.positive && uf.find(l.lhs) == uf.find(l.rhs)) return false;
    std::set<std::string> sources;
    for (const auto& a : phi.spatial)
        if (!sources.insert(uf.find(a.src)).second) return false;
    return true;
}

} // namespace

ShSat sh_sat(const SymbolicHeap& phi) {
    UnionFind uf = pure_classes(phi);
    return consistent(phi, uf) ? ShSat::Sat : ShSat::Unsat;
}

bool sh_empty_possible(const SymbolicHeap& phi) {
    if (!phi.spatial.empty()) return false;
    return sh_sat(phi) == ShSat::Sat;
}

bool sh_entails(const SymbolicHeap& phi, const SymbolicHeap& psi) {
    UnionFind uf = pure_classes(phi);
    for (const auto& v : psi.vars()) uf.ensure(v);
    if (!consistent(phi, uf)) return true; // unsatisfiable phi entails anything

    for (const auto& l : psi.pure) {
        if (l.positive) {
            if (uf.find(l.lhs) != uf.find(l.rhs)) return false;
        } else {
            // entailed iff phi & lhs = rhs is unsatisfiable
            SymbolicHeap merged = phi;
            merged.pure.push_back(PureLit{true, l.lhs, l.rhs});
            merged.normalize();
            if (sh_sat(merged) == ShSat::Sat) return false;
        }
    }

    auto atom_key = [&](const PtoAtom& a) {
        std::vector<std::string> key{uf.find(a.src)};
        for (const auto& t : a.targets) key.push_back(uf.find(t));
        return key;
    };
    std::vector<std::vector<std::string>> left, right;
    for (const auto& a : phi.spatial) left.push_back(atom_key(a));
    for (const auto& a : psi.spatial) right.push_back(atom_key(a));
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    return left == right;
}

bool sh_entails(const SymbolicHeap& phi, const SymbolicHeap& psi,
                const std::map<std::string, std::string>& theta) {
    return sh_entails(phi, psi.renamed(theta));
}

bool sh_entails_sub(const SymbolicHeap& phi, const SymbolicHeap& psi) {
    UnionFind uf = pure_classes(phi);
    for (const auto& v : psi.vars()) uf.ensure(v);
    if (!consistent(phi, uf)) return true;
    for (const auto& l : psi.pure) {
        if (l.positive) {
            if (uf.find(l.lhs) != uf.find(l.rhs)) return false;
        } else {
            SymbolicHeap merged = phi;
            merged.pure.push_back(PureLit{true, l.lhs, l.rhs});
            merged.normalize();
            if (sh_sat(merged) == ShSat::Sat) return false;
        }
    }
    auto atom_key = [&](const PtoAtom& a) {
        std::vector<std::string> key{uf.find(a.src)};
        for (const auto& t : a.targets) key.push_back(uf.find(t));
        return key;
    };
    std::map<std::vector<std::string>, int> avail;
    for (const auto& a : phi.spatial) avail[atom_key(a)]++;
    for (const auto& a : psi.spatial) {
        auto it = avail.find(atom_key(a));
        if (it == avail.end() || it->second == 0) return false;
        --it->second;
    }
    return true;
}

namespace {

// A model of a symbolic heap is determined by the valuation: the heap is
// exactly the valued spatial atoms.
std::optional<Heap> model_heap(const SymbolicHeap& phi, const std::map<std::string, int>& nu) {
    Heap h;
    for (const auto& a : phi.spatial) {
        std::vector<int> ts;
        for (const auto& t : a.targets) ts.push_back(nu.at(t));
        int src = nu.at(a.src);
        if (h.cells.count(src)) return std::nullopt;
        h.cells[src] = std::move(ts);
    }
    for (const auto& l : phi.pure) {
        bool eq = nu.at(l.lhs) == nu.at(l.rhs);
        if (l.positive != eq) return std::nullopt;
    }
    return h;
}

bool holds_on(const SymbolicHeap& psi, const std::map<std::string, int>& nu, const Heap& h) {
    for (const auto& l : psi.pure) {
        auto it1 = nu.find(l.lhs);
        auto it2 = nu.find(l.rhs);
        if (it1 == nu.end() || it2 == nu.end()) return false;
        bool eq = it1->second == it2->second;
        if (l.positive != eq) return false;
    }
    Heap expected;
    for (const auto& a : psi.spatial) {
        auto its = nu.find(a.src);
        if (its == nu.end()) return false;
        std::vector<int> ts;
        for (const auto& t : a.targets) {
            auto it = nu.find(t);
            if (it == nu.end()) return false;
            ts.push_back(it->second);
        }
        if (expected.cells.count(its->second)) return false;
        expected.cells[its->second] = std::move(ts);
    }
    return expected == h;
}

template <typename Fn>
void for_each_valuation(const std::vector<std::string>& vars, int max_locs, Fn&& fn) {
    std::vector<int> vals(vars.size(), 0);
    while (true) {
        std::map<std::string, int> nu;
        for (size_t i = 0; i < vars.size(); ++i) nu[vars[i]] = vals[i];
        if (!fn(nu)) return;
        size_t k = vars.size();
        bool done = vars.empty();
        while (k > 0) {
            --k;
            if (++vals[k] < max_locs) break;
            vals[k] = 0;
            if (k == 0) { done = true; break; }
        }
        if (done) break;
    }
}

} // namespace

bool sm_sat(const SymbolicHeap& phi, int max_locs) {
    std::set<std::string> vs = phi.vars();
    std::vector<std::string> vars(vs.begin(), vs.end());
    if (max_locs <= 0) max_locs = 1;
    bool found = false;
    for_each_valuation(vars, max_locs, [&](const std::map<std::string, int>& nu) {
        if (model_heap(phi, nu)) {
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

bool sm_entails(const SymbolicHeap& phi, const SymbolicHeap& psi, int max_locs) {
    std::set<std::string> vs = phi.vars();
    for (const auto& v : psi.vars()) vs.insert(v);
    std::vector<std::string> vars(vs.begin(), vs.end());
    if (max_locs <= 0) max_locs = 1;
    bool ok = true;
    for_each_valuation(vars, max_locs, [&](const std::map<std::string, int>& nu) {
        auto h = model_heap(phi, nu);
        if (h && !holds_on(psi, nu, *h)) {
            ok = false;
            return false;
        }
        return true;
    });
    return ok;
}

std::map<std::string, std::string> sh_canonical_reps(const SymbolicHeap& phi,
                                                     const std::vector<std::string>& priority) {
    UnionFind uf = pure_classes(phi);
    for (const auto& v : priority) uf.ensure(v);
    std::map<std::string, std::string> class_rep;
    for (const auto& v : priority) {
        std::string r = uf.find(v);
        class_rep.emplace(r, v); // first priority var of the class wins
    }
    std::map<std::string, std::string> out;
    for (const auto& v : priority) {
        auto it = class_rep.find(uf.find(v));
        out[v] = it == class_rep.end() ? v : it->second;
    }
    return out;
}

ShWitnessSet sh_witnesses(const ShWitnessRequest& req, ShWitnessMode mode) {
    ShWitnessSet out;
    std::vector<std::string> ex_vars;
    for (const auto& t : req.ex_tuples) ex_vars.insert(ex_vars.end(), t.begin(), t.end());
    auto validate = [&](const std::map<std::string, std::string>& theta) {
        SymbolicHeap inst = req.psi.renamed(theta);
        if (mode == ShWitnessMode::Flat) return sh_entails(req.phi, inst);
        std::set<std::string> vs = req.phi.vars();
        for (const auto& v : inst.vars()) vs.insert(v);
        return sm_entails(req.phi, inst, static_cast<int>(vs.size()) + 1);
    };
    if (ex_vars.empty()) {
        if (validate({})) out.witnesses.push_back({});
        return out;
    }
    if (req.image_vars.empty()) return out;

    auto reps = sh_canonical_reps(req.phi, req.image_vars);
    std::set<std::map<std::string, std::string>> seen;
    std::vector<size_t> idx(ex_vars.size(), 0);
    while (true) {
        std::map<std::string, std::string> theta;
        for (size_t i = 0; i < ex_vars.size(); ++i) theta[ex_vars[i]] = req.image_vars[idx[i]];
        if (validate(theta)) {
            std::map<std::string, std::string> canon;
            for (const auto& [v, w] : theta) {
                auto it = reps.find(w);
                canon[v] = it == reps.end() ? w : it->second;
            }
            if (seen.insert(canon).second) out.witnesses.push_back(canon);
        }
        size_t k = ex_vars.size();
        bool done = false;
        while (k > 0) {
            --k;
            if (++idx[k] < req.image_vars.size()) break;
            idx[k] = 0;
            if (k == 0) { done = true; break; }
        }
        if (done) break;
    }
    std::sort(out.witnesses.begin(), out.witnesses.end());
    return out;
}

bool sh_exists_entailed(const SymbolicHeap& phi, const std::set<std::string>& ex_vars, const SymbolicHeap& psi,
                        const std::vector<std::string>& image_vars) {
    if (ex_vars.empty()) return sh_entails(phi, psi);

    // Disequality-only existentials may always take a location distinct from
    // every named value; drop their literals before matching.
    std::set<std::string> diseq_only = ex_vars;
    for (const auto& l : psi.pure)
        if (l.positive) {
            diseq_only.erase(l.lhs);
            diseq_only.erase(l.rhs);
        }
    for (const auto& a : psi.spatial) {
        diseq_only.erase(a.src);
        for (const auto& t : a.targets) diseq_only.erase(t);
    }
    SymbolicHeap reduced;
    std::set<std::string> remaining = ex_vars;
    for (const auto& l : psi.pure) {
        if (!l.positive) {
            bool lhs_free = diseq_only.count(l.lhs) && !ex_vars.count(l.rhs);
            bool rhs_free = diseq_only.count(l.rhs) && !ex_vars.count(l.lhs);
            bool both_free = diseq_only.count(l.lhs) && diseq_only.count(l.rhs) && l.lhs != l.rhs;
            if (lhs_free || rhs_free || both_free) {
                if (diseq_only.count(l.lhs)) remaining.erase(l.lhs);
                if (diseq_only.count(l.rhs)) remaining.erase(l.rhs);
                continue;
            }
        }
        reduced.pure.push_back(l);
    }
    reduced.spatial = psi.spatial;
    reduced.normalize();
    for (const auto& v : diseq_only) remaining.erase(v);

    if (remaining.empty()) return sh_entails(phi, reduced);
    ShWitnessRequest req;
    req.phi = phi;
    req.image_vars = image_vars;
    req.ex_tuples = {std::vector<std::string>(remaining.begin(), remaining.end())};
    req.psi = reduced;
    return !sh_witnesses(req, ShWitnessMode::Flat).witnesses.empty();
}

namespace {

// Enumerates partitions of `items`, seeded by forced merges, filtered by
// forced splits; calls fn with the class id of every item.
struct PartitionEnum {
    std::vector<std::string> items;
    UnionFind forced;
    std::set<std::pair<std::string, std::string>> splits; // canonical (min,max) name pairs

    bool split_violated(const std::map<std::string, int>& cls) {
        for (const auto& [a, b] : splits)
            if (cls.at(a) == cls.at(b)) return true;
        return false;
    }

    template <typename Fn>
    void run(Fn&& fn) {
        // base classes after forced merges
        std::vector<std::string> base_reps;
        std::map<std::string, int> base_of;
        for (const auto& v : items) {
            std::string r = forced.find(v);
            if (!base_of.count(r)) {
                base_of[r] = static_cast<int>(base_reps.size());
                base_reps.push_back(r);
            }
        }
        size_t n = base_reps.size();
        std::vector<int> rgs(n, 0); // restricted growth string
        while (true) {
            std::map<std::string, int> cls;
            for (const auto& v : items) cls[v] = rgs[static_cast<size_t>(base_of.at(forced.find(v)))];
            if (!split_violated(cls)) fn(cls);
            // next restricted growth string
            bool advanced = false;
            for (size_t i = n; i-- > 1;) {
                int maxprefix = 0;
                for (size_t j = 0; j < i; ++j) maxprefix = std::max(maxprefix, rgs[j]);
                if (rgs[i] <= maxprefix) {
                    ++rgs[i];
                    for (size_t j = i + 1; j < n; ++j) rgs[j] = 0;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    }
};

struct RuleAbstraction {
    const InductiveSystem& sys;
    const PredicateRule& rule;
    const SymbolicHeap& phi;

    // For a choice of subgoal abstract pairs, enumerates consistent total
    // equality relations and reports each induced goal pair.
    template <typename Fn>
    void for_each_pair(const std::vector<AbstractPair>& subgoal_pairs, bool include_goal_vars, Fn&& fn) const {
        PartitionEnum pe;
        std::set<std::string> vars;
        if (include_goal_vars)
            for (const auto& v : rule.goal.args) vars.insert(v);
        for (const auto& s : rule.subgoals)
            for (const auto& v : s.args) vars.insert(v);
        if (include_goal_vars)
            for (const auto& v : phi.vars()) vars.insert(v);
        pe.items.assign(vars.begin(), vars.end());
        for (const auto& v : pe.items) pe.forced.ensure(v);

        auto add_split = [&](const std::string& a, const std::string& b) {
            pe.splits.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
        };

        if (include_goal_vars)
            for (const auto& l : phi.pure) {
                if (l.positive) pe.forced.merge(l.lhs, l.rhs);
                else add_split(l.lhs, l.rhs);
            }
        for (size_t i = 0; i < rule.subgoals.size(); ++i) {
            const auto& args = rule.subgoals[i].args;
            const auto& ap = subgoal_pairs[i];
            for (size_t r = 0; r < args.size(); ++r)
                for (size_t s = r + 1; s < args.size(); ++s) {
                    bool eq = ap.eq.count({static_cast<int>(r), static_cast<int>(s)}) > 0;
                    if (eq) pe.forced.merge(args[r], args[s]);
                    else add_split(args[r], args[s]);
                }
        }

        pe.run([&](const std::map<std::string, int>& cls) {
            // separation: one cell per allocated class per subgoal, plus the
            // constraint's own sources; duplicates are unsatisfiable
            std::vector<int> alloc_multiset;
            std::set<int> allocated_classes;
            bool ok = true;
            for (size_t i = 0; i < rule.subgoals.size() && ok; ++i) {
                std::set<int> per_subgoal;
                for (int pos : subgoal_pairs[i].allocated) {
                    auto it = cls.find(rule.subgoals[i].args[static_cast<size_t>(pos)]);
                    if (it == cls.end()) { ok = false; break; }
                    per_subgoal.insert(it->second);
                }
                for (int c : per_subgoal) alloc_multiset.push_back(c);
            }
            if (include_goal_vars)
                for (const auto& a : phi.spatial) {
                    auto it = cls.find(a.src);
                    if (it == cls.end()) { ok = false; break; }
                    alloc_multiset.push_back(it->second);
                }
            if (!ok) return;
            std::sort(alloc_multiset.begin(), alloc_multiset.end());
            for (size_t i = 1; i < alloc_multiset.size(); ++i)
                if (alloc_multiset[i] == alloc_multiset[i - 1]) return; // double allocation
            allocated_classes.insert(alloc_multiset.begin(), alloc_multiset.end());
            fn(cls, allocated_classes);
        });
    }
};

template <typename Fn>
void for_each_subgoal_pair_tuple(const std::map<std::string, std::set<AbstractPair>>& lfp,
                                 const PredicateRule& rule, Fn&& fn) {
    std::vector<std::vector<AbstractPair>> pools;
    for (const auto& s : rule.subgoals) {
        auto it = lfp.find(s.pred);
        if (it == lfp.end() || it->second.empty()) return;
        pools.emplace_back(it->second.begin(), it->second.end());
    }
    std::vector<size_t> idx(pools.size(), 0);
    while (true) {
        std::vector<AbstractPair> tuple;
        for (size_t i = 0; i < pools.size(); ++i) tuple.push_back(pools[i][idx[i]]);
        fn(tuple);
        size_t k = pools.size();
        bool done = pools.empty();
        while (k > 0) {
            --k;
            if (++idx[k] < pools[k].size()) break;
            idx[k] = 0;
            if (k == 0) { done = true; break; }
        }
        if (done) break;
    }
}

} // namespace

std::map<std::string, std::set<AbstractPair>> sh_abstract_lfp(const InductiveSystem& sys) {
    std::map<std::string, std::set<AbstractPair>> lfp;
    for (const auto& [name, _] : sys.predicates) lfp[name] = {};

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : sys.rules) {
            const auto& phi = std::get<SymbolicHeap>(rule.constraint);
            RuleAbstraction ra{sys, rule, phi};
            for_each_subgoal_pair_tuple(lfp, rule, [&](const std::vector<AbstractPair>& tuple) {
                ra.for_each_pair(tuple, /*include_goal_vars=*/true,
                                 [&](const std::map<std::string, int>& cls, const std::set<int>& allocated) {
                    AbstractPair ap;
                    const auto& gargs = rule.goal.args;
                    for (size_t i = 0; i < gargs.size(); ++i) {
                        auto it = cls.find(gargs[i]);
                        int ci = it == cls.end() ? -1 - static_cast<int>(i) : it->second;
                        if (it != cls.end() && allocated.count(ci)) ap.allocated.insert(static_cast<int>(i));
                        for (size_t j = 0; j < gargs.size(); ++j) {
                            auto jt = cls.find(gargs[j]);
                            int cj = jt == cls.end() ? -1 - static_cast<int>(j) : jt->second;
                            if (ci == cj) ap.eq.insert({static_cast<int>(i), static_cast<int>(j)});
                        }
                    }
                    if (lfp[rule.goal.pred].insert(ap).second) changed = true;
                });
            });
        }
    }
    return lfp;
}

std::optional<SlNonFilterWitness> sl_non_filtering_violation(const InductiveSystem& sys) {
    auto lfp = sh_abstract_lfp(sys);
    for (size_t ri = 0; ri < sys.rules.size(); ++ri) {
        const auto& rule = sys.rules[ri];
        if (rule.subgoals.empty()) {
            // no subgoal models to extend; the constraint itself must be satisfiable
            const auto& phi = std::get<SymbolicHeap>(rule.constraint);
            if (sh_sat(phi) == ShSat::Unsat) {
                SlNonFilterWitness w;
                w.rule_index = ri;
                return w;
            }
            continue;
        }
        const auto& phi = std::get<SymbolicHeap>(rule.constraint);
        RuleAbstraction ra{sys, rule, phi};
        std::optional<SlNonFilterWitness> found;
        for_each_subgoal_pair_tuple(lfp, rule, [&](const std::vector<AbstractPair>& tuple) {
            if (found) return;
            // Realizable subgoal-side configurations: partitions of the
            // subgoal variables only; goal variables stay existential in the
            // extension check.
            ra.for_each_pair(tuple, /*include_goal_vars=*/false,
                             [&](const std::map<std::string, int>& cls, const std::set<int>&) {
                if (found) return;
                // build phi * omega with the subgoal relation pinned
                SymbolicHeap q = phi;
                std::vector<std::string> vars;
                for (const auto& [v, _] : cls) vars.push_back(v);
                for (size_t i = 0; i < vars.size(); ++i)
                    for (size_t j = i + 1; j < vars.size(); ++j)
                        q.pure.push_back(PureLit{cls.at(vars[i]) == cls.at(vars[j]), vars[i], vars[j]});
                // one cell per allocated class, fresh targets
                std::set<int> alloc_classes;
                int fresh = 0;
                for (size_t i = 0; i < rule.subgoals.size(); ++i) {
                    for (int pos : tuple[i].allocated) {
                        const std::string& v = rule.subgoals[i].args[static_cast<size_t>(pos)];
                        if (!alloc_classes.insert(cls.at(v)).second) continue;
                        PtoAtom cell;
                        cell.src = v;
                        for (int t = 0; t < sys.record_width; ++t)
                            cell.targets.push_back("_w" + std::to_string(fresh++));
                        q.spatial.push_back(std::move(cell));
                    }
                }
                q.normalize();
                if (sh_sat(q) == ShSat::Unsat) {
                    SlNonFilterWitness w;
                    w.rule_index = ri;
                    w.subgoal_pairs = tuple;
                    std::map<int, std::vector<std::string>> by_class;
                    for (const auto& [v, c] : cls) by_class[c].push_back(v);
                    for (auto& [c, vs] : by_class) {
                        std::sort(vs.begin(), vs.end());
                        w.subgoal_classes.push_back(vs);
                    }
                    found = w;
                }
            });
        });
        if (found) return found;
    }
    return std::nullopt;
}

std::set<SlModel> sh_enumerate(const InductiveSystem& sys, const std::string& pred, int max_locs, int max_unfold,
                               size_t cap) {
    std::map<std::string, std::set<SlModel>> models;
    for (const auto& [name, _] : sys.predicates) models[name] = {};
    if (max_locs <= 0 || max_unfold <= 0) return {};

    size_t total = 0;
    bool changed = true;
    while (changed && total < cap) {
        changed = false;
        for (const auto& rule : sys.rules) {
            const auto& phi = std::get<SymbolicHeap>(rule.constraint);
            std::vector<const std::set<SlModel>*> pools;
            bool empty_pool = false;
            for (const auto& s : rule.subgoals) {
                pools.push_back(&models.at(s.pred));
                if (pools.back()->empty()) { empty_pool = true; break; }
            }
            if (empty_pool) continue;

            std::vector<std::set<SlModel>::const_iterator> its;
            for (const auto* p : pools) its.push_back(p->begin());
            while (true) {
                // pairwise disjoint subgoal heaps, unfold budget
                int unfolds = 1;
                bool viable = true;
                Heap joined;
                for (size_t i = 0; i < its.size() && viable; ++i) {
                    const SlModel& m = *its[i];
                    unfolds += m.tree ? m.tree->node_count() : 0;
                    if (!joined.disjoint(m.heap)) viable = false;
                    else joined = joined.unite(m.heap);
                }
                if (viable && unfolds <= max_unfold) {
                    // forced part of the valuation
                    std::map<std::string, int> forced;
                    for (size_t i = 0; i < its.size() && viable; ++i) {
                        const auto& args = rule.subgoals[i].args;
                        const auto& tuple = its[i]->tuple;
                        for (size_t j = 0; j < args.size() && viable; ++j) {
                            auto it = forced.find(args[j]);
                            if (it != forced.end()) viable = it->second == tuple[j];
                            else forced[args[j]] = tuple[j];
                        }
                    }
                    if (viable) {
                        std::set<std::string> all_vars;
                        for (const auto& v : rule.goal.args) all_vars.insert(v);
                        for (const auto& v : phi.vars()) all_vars.insert(v);
                        std::vector<std::string> free_vars;
                        for (const auto& v : all_vars)
                            if (!forced.count(v)) free_vars.push_back(v);

                        for_each_valuation(free_vars, max_locs, [&](const std::map<std::string, int>& fr) {
                            std::map<std::string, int> nu = forced;
                            nu.insert(fr.begin(), fr.end());
                            auto chunk = model_heap(phi, nu);
                            if (!chunk) return true;
                            if (!chunk->disjoint(joined)) return true;
                            SlModel m;
                            for (const auto& g : rule.goal.args) m.tuple.push_back(nu.at(g));
                            m.heap = chunk->unite(joined);
                            auto node = std::make_shared<UnfoldTree>();
                            node->chunk = *chunk;
                            for (const auto& it2 : its) node->children.push_back(it2->tree);
                            m.tree = node;
                            if (models.at(rule.goal.pred).insert(m).second) {
                                changed = true;
                                ++total;
                            }
                            return total < cap;
                        });
                    }
                }
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
            // rules without subgoals
            if (rule.subgoals.empty()) {
                std::set<std::string> all_vars;
                for (const auto& v : rule.goal.args) all_vars.insert(v);
                for (const auto& v : phi.vars()) all_vars.insert(v);
                std::vector<std::string> vars(all_vars.begin(), all_vars.end());
                for_each_valuation(vars, max_locs, [&](const std::map<std::string, int>& nu) {
                    auto chunk = model_heap(phi, nu);
                    if (!chunk) return true;
                    SlModel m;
                    for (const auto& g : rule.goal.args) m.tuple.push_back(nu.at(g));
                    m.heap = *chunk;
                    auto node = std::make_shared<UnfoldTree>();
                    node->chunk = *chunk;
                    m.tree = node;
                    if (models.at(rule.goal.pred).insert(m).second) {
                        changed = true;
                        ++total;
                    }
                    return total < cap;
                });
            }
        }
    }
    std::set<SlModel> out;
    for (const auto& m : models.at(pred)) out.insert(canonicalize_model(m));
    return out;
}

} // namespace indescent
