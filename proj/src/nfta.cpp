#include "indescent/nfta.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace indescent {

namespace {
const SortName kTreeSort = "Tree";
}

std::vector<const NftaTransition*> Nfta::from(const std::string& state) const {
    std::vector<const NftaTransition*> out;
    for (const auto& t : transitions)
        if (t.state == state) out.push_back(&t);
    return out;
}

std::vector<const NftaTransition*> Nfta::from(const std::string& state, const std::string& symbol) const {
    std::vector<const NftaTransition*> out;
    for (const auto& t : transitions)
        if (t.state == state && t.symbol == symbol) out.push_back(&t);
    return out;
}

void Nfta::trim() {
    std::set<std::string> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : transitions) {
            if (productive.count(t.state)) continue;
            bool ok = true;
            for (const auto& c : t.children)
                if (!productive.count(c)) { ok = false; break; }
            if (ok) {
                productive.insert(t.state);
                changed = true;
            }
        }
    }
    std::vector<NftaTransition> kept;
    for (const auto& t : transitions) {
        if (!productive.count(t.state)) continue;
        bool ok = true;
        for (const auto& c : t.children)
            if (!productive.count(c)) { ok = false; break; }
        if (ok) kept.push_back(t);
    }
    transitions = std::move(kept);
    states = std::move(productive);
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
}

std::string Nfta::print() const {
    std::string s;
    for (const auto& t : transitions) {
        s += t.state + " " + t.symbol;
        for (const auto& c : t.children) s += " " + c;
        s += "\n";
    }
    return s;
}

InductiveSystem nfta_to_system(const Nfta& a) {
    InductiveSystem sys;
    sys.theory = Theory::Herbrand;
    sys.signature.add_sort(kTreeSort);
    for (const auto& [sym, rank] : a.alphabet)
        sys.signature.add_function(sym, std::vector<SortName>(rank, kTreeSort), kTreeSort);
    for (const auto& q : a.states) sys.predicates[q] = Predicate{q, {kTreeSort}};
    for (const auto& t : a.transitions) {
        PredicateRule r;
        r.goal = PredAtom{t.state, {"x"}};
        std::vector<Term> args;
        for (size_t i = 0; i < t.children.size(); ++i) {
            std::string v = "x" + std::to_string(i + 1);
            args.push_back(Term::var(v, kTreeSort));
            r.subgoals.push_back(PredAtom{t.children[i], {v}});
        }
        LiteralConstraint lc;
        lc.add(Literal{true, Term::var("x", kTreeSort), Term::app(t.symbol, kTreeSort, std::move(args))});
        lc.normalize();
        r.constraint = std::move(lc);
        sys.rules.push_back(std::move(r));
    }
    sys.validate();
    return sys;
}

std::optional<Nfta> system_to_nfta(const InductiveSystem& sys) {
    if (sys.theory != Theory::Herbrand) return std::nullopt;
    Nfta a;
    for (const auto& [sym, prof] : sys.signature.functions) {
        if (prof.result_sort == kBoolSort) continue;
        a.alphabet[sym] = prof.arg_sorts.size();
    }
    for (const auto& [name, _] : sys.predicates) a.states.insert(name);
    for (const auto& r : sys.rules) {
        if (r.goal.args.size() != 1) return std::nullopt;
        const auto& lc = std::get<LiteralConstraint>(r.constraint);
        if (lc.literals().size() != 1 || !lc.literals()[0].positive) return std::nullopt;
        Term lhs = lc.literals()[0].lhs, rhs = lc.literals()[0].rhs;
        if (!lhs.is_var()) std::swap(lhs, rhs);
        if (!lhs.is_var() || lhs.name() != r.goal.args[0] || rhs.is_var()) return std::nullopt;
        // arguments must be exactly the subgoal variables, in order
        std::vector<std::string> expected;
        for (const auto& s : r.subgoals) {
            if (s.args.size() != 1) return std::nullopt;
            expected.push_back(s.args[0]);
        }
        if (rhs.args().size() != expected.size()) return std::nullopt;
        NftaTransition tr;
        tr.state = r.goal.pred;
        tr.symbol = rhs.name();
        for (size_t i = 0; i < expected.size(); ++i) {
            if (!rhs.args()[i].is_var() || rhs.args()[i].name() != expected[i]) return std::nullopt;
            tr.children.push_back(r.subgoals[i].pred);
        }
        a.transitions.push_back(std::move(tr));
    }
    std::sort(a.transitions.begin(), a.transitions.end());
    return a;
}

bool nfta_membership(const Nfta& a, const std::string& state, const Term& t) {
    std::map<std::pair<std::string, Term>, bool> memo;
    auto rec = [&](auto&& self, const std::string& q, const Term& u) -> bool {
        auto key = std::make_pair(q, u);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool ok = false;
        for (const auto* tr : a.from(q, u.name())) {
            if (tr->children.size() != u.args().size()) continue;
            bool all = true;
            for (size_t i = 0; i < tr->children.size() && all; ++i) all = self(self, tr->children[i], u.args()[i]);
            if (all) { ok = true; break; }
        }
        memo[key] = ok;
        return ok;
    };
    return rec(rec, state, t);
}

std::vector<Term> nfta_terms(const Nfta& a, int bound) {
    Signature sig;
    sig.add_sort(kTreeSort);
    for (const auto& [sym, rank] : a.alphabet)
        sig.add_function(sym, std::vector<SortName>(rank, kTreeSort), kTreeSort);
    return ground_terms(sig, kTreeSort, bound);
}

namespace {

struct IncludeEngine {
    const Nfta& a;
    const InclusionOptions& opt;
    std::map<std::pair<std::string, std::set<std::string>>, InclusionOutcome> memo;
    // smallest accepted term per state, for witnesses against an empty rhs
    std::map<std::string, Term> smallest;

    explicit IncludeEngine(const Nfta& aut, const InclusionOptions& o) : a(aut), opt(o) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& t : a.transitions) {
                std::vector<Term> args;
                bool ok = true;
                int w = t.children.empty() ? 0 : 1;
                for (const auto& c : t.children) {
                    auto it = smallest.find(c);
                    if (it == smallest.end()) { ok = false; break; }
                    args.push_back(it->second);
                    w += it->second.weight();
                }
                if (!ok) continue;
                Term cand = Term::app(t.symbol, kTreeSort, std::move(args));
                auto it = smallest.find(t.state);
                if (it == smallest.end() || cand.weight() < it->second.weight()) {
                    smallest[t.state] = cand;
                    changed = true;
                }
            }
        }
    }

    struct Result {
        InclusionOutcome outcome;
    };

    // Results are globally cacheable: a NotIncluded entry carries a witness
    // and an Included entry closed against a predecessor could only be wrong
    // if a strictly smaller witness existed at that predecessor, which
    // contradicts the minimality of a least counterexample.
    Result include(const std::string& r, const std::set<std::string>& s,
                   std::vector<std::pair<std::string, std::set<std::string>>>& path) {
        for (const auto& [pr, ps] : path) {
            if (pr != r) continue;
            bool closes = opt.subsumption ? std::includes(s.begin(), s.end(), ps.begin(), ps.end()) : ps == s;
            if (closes) {
                Result res;
                res.outcome.included = true;
                return res;
            }
        }
        auto key = std::make_pair(r, s);
        auto it = memo.find(key);
        if (it != memo.end()) return Result{it->second};
        if (!smallest.count(r)) {
            // empty language on the left
            Result res;
            res.outcome.included = true;
            return res;
        }

        path.push_back(key);
        Result res;
        res.outcome.included = true;

        // constants first so leaf counterexamples surface with small terms
        std::vector<std::pair<size_t, std::string>> symbols;
        for (const auto& [sym, rank] : a.alphabet) symbols.emplace_back(rank, sym);
        std::sort(symbols.begin(), symbols.end());

        for (const auto& [rank, sym] : symbols) {
            if (!res.outcome.included) break;
            auto rtrans = a.from(r, sym);
            if (rtrans.empty()) continue;
            // tuples reachable from the rhs set under this symbol
            std::vector<std::vector<std::string>> tuples;
            for (const auto& q : s)
                for (const auto* tr : a.from(q, sym)) tuples.push_back(tr->children);
            std::sort(tuples.begin(), tuples.end());
            tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());

            for (const auto* tr : rtrans) {
                size_t n = tr->children.size();
                if (n == 0) {
                    if (tuples.empty()) {
                        res.outcome.included = false;
                        res.outcome.witness = Term::app(sym, kTreeSort, {});
                    }
                    if (!res.outcome.included) break;
                    continue;
                }
                if (tuples.empty()) {
                    // nothing on the right; compose smallest members
                    std::vector<Term> args;
                    for (const auto& c : tr->children) args.push_back(smallest.at(c));
                    res.outcome.included = false;
                    res.outcome.witness = Term::app(sym, kTreeSort, std::move(args));
                    break;
                }
                // product inclusion: for every choice function over the rhs
                // tuples some coordinate inclusion must hold
                size_t cf_count = 1;
                bool overflow = false;
                for (size_t i = 0; i < tuples.size(); ++i) {
                    cf_count *= n;
                    if (cf_count > (1u << 20)) { overflow = true; break; }
                }
                if (overflow) throw std::runtime_error("inclusion split space too large");
                for (size_t cf = 0; cf < cf_count; ++cf) {
                    // decode choice function: coordinate per tuple
                    std::vector<size_t> choice(tuples.size());
                    size_t x = cf;
                    for (size_t i = 0; i < tuples.size(); ++i) {
                        choice[i] = x % n;
                        x /= n;
                    }
                    bool some_ok = false;
                    std::vector<std::optional<Term>> per_coord_witness(n);
                    for (size_t i = 0; i < n && !some_ok; ++i) {
                        std::set<std::string> si;
                        for (size_t tI = 0; tI < tuples.size(); ++tI)
                            if (choice[tI] == i) si.insert(tuples[tI][i]);
                        Result sub = include(tr->children[i], si, path);
                        if (sub.outcome.included) some_ok = true;
                        else per_coord_witness[i] = sub.outcome.witness;
                    }
                    if (!some_ok) {
                        std::vector<Term> args;
                        for (size_t i = 0; i < n; ++i)
                            args.push_back(per_coord_witness[i] ? *per_coord_witness[i]
                                                                : smallest.at(tr->children[i]));
                        res.outcome.included = false;
                        res.outcome.witness = Term::app(sym, kTreeSort, std::move(args));
                        break;
                    }
                }
                if (!res.outcome.included) break;
            }
        }
        path.pop_back();
        memo[key] = res.outcome;
        return res;
    }
};

} // namespace

InclusionOutcome antichain_inclusion(const Nfta& a, const std::string& lhs, const std::set<std::string>& rhs,
                                     const InclusionOptions& opt) {
    IncludeEngine eng(a, opt);
    std::vector<std::pair<std::string, std::set<std::string>>> path;
    return eng.include(lhs, rhs, path).outcome;
}

Nfta random_nfta(uint64_t seed, int max_states, int max_rank, int max_symbols) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Nfta a;
        int nstates = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_states));
        int nsymbols = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_symbols));
        std::vector<std::string> states, symbols;
        for (int i = 0; i < nstates; ++i) states.push_back("q" + std::to_string(i));
        for (int i = 0; i < nsymbols; ++i) {
            size_t rank = i == 0 ? 0 : rng() % static_cast<uint64_t>(max_rank + 1);
            std::string name = (rank == 0 ? "a" : "f") + std::to_string(i);
            a.alphabet[name] = rank;
            symbols.push_back(name);
        }
        a.states.insert(states.begin(), states.end());
        for (const auto& q : states) {
            int ntrans = 1 + static_cast<int>(rng() % 3);
            for (int t = 0; t < ntrans; ++t) {
                const std::string& sym = symbols[rng() % symbols.size()];
                NftaTransition tr;
                tr.state = q;
                tr.symbol = sym;
                for (size_t c = 0; c < a.alphabet[sym]; ++c) tr.children.push_back(states[rng() % states.size()]);
                a.transitions.push_back(std::move(tr));
            }
        }
        a.trim();
        bool has_constant = false;
        for (const auto& t : a.transitions)
            if (t.children.empty()) has_constant = true;
        if (!a.states.empty() && has_constant) return a;
    }
    // degenerate bounds: fall back to a one-state one-constant automaton
    Nfta a;
    a.states.insert("q0");
    a.alphabet["a0"] = 0;
    a.transitions.push_back(NftaTransition{"q0", "a0", {}});
    return a;
}

NftaFile parse_nfta(const std::string& text) {
    NftaFile out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find(';');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks[0] == "?") {
            if (toks.size() < 4 || toks[2] != "<=")
                throw std::runtime_error("malformed query line, expected `? p <= q1 q2 ...`");
            std::set<std::string> rhs(toks.begin() + 3, toks.end());
            out.query = {toks[1], rhs};
            continue;
        }
        if (toks.size() < 2) throw std::runtime_error("malformed transition line: " + line);
        NftaTransition tr;
        tr.state = toks[0];
        tr.symbol = toks[1];
        tr.children.assign(toks.begin() + 2, toks.end());
        auto it = out.automaton.alphabet.find(tr.symbol);
        if (it == out.automaton.alphabet.end())
            out.automaton.alphabet[tr.symbol] = tr.children.size();
        else if (it->second != tr.children.size())
            throw std::runtime_error("symbol '" + tr.symbol + "' used at two ranks");
        out.automaton.states.insert(tr.state);
        for (const auto& c : tr.children) out.automaton.states.insert(c);
        out.automaton.transitions.push_back(std::move(tr));
    }
    return out;
}

} // namespace indescent
