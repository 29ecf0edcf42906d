#include "indescent/term.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace indescent {

namespace {

size_t hash_combine(size_t seed, size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

size_t hash_string(const std::string& s) { return std::hash<std::string>{}(s); }

} // namespace

void Signature::add_function(const std::string& name, std::vector<SortName> args, SortName result) {
    for (const auto& a : args)
        if (!has_sort(a)) throw std::runtime_error("undeclared argument sort '" + a + "' of function '" + name + "'");
    if (!has_sort(result)) throw std::runtime_error("undeclared result sort '" + result + "' of function '" + name + "'");
    if (functions.count(name)) throw std::runtime_error("duplicate function '" + name + "'");
    functions[name] = FunctionProfile{std::move(args), std::move(result)};
}

const FunctionProfile* Signature::find(const std::string& name) const {
    auto it = functions.find(name);
    return it == functions.end() ? nullptr : &it->second;
}

std::set<SortName> Signature::inhabited_sorts() const {
    std::set<SortName> inhabited;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [name, prof] : functions) {
            if (inhabited.count(prof.result_sort)) continue;
            bool ok = true;
            for (const auto& a : prof.arg_sorts)
                if (!inhabited.count(a)) { ok = false; break; }
            if (ok) {
                inhabited.insert(prof.result_sort);
                changed = true;
            }
        }
    }
    return inhabited;
}

std::set<SortName> Signature::infinite_sorts() const {
    auto inhabited = inhabited_sorts();
    // feeds[s] -> sorts reachable from s through one positive-arity
    // constructor whose remaining argument sorts are inhabited
    std::map<SortName, std::set<SortName>> feeds;
    for (const auto& [name, prof] : functions) {
        if (prof.arg_sorts.empty()) continue;
        bool all_inhabited = true;
        for (const auto& a : prof.arg_sorts)
            if (!inhabited.count(a)) { all_inhabited = false; break; }
        if (!all_inhabited) continue;
        for (const auto& a : prof.arg_sorts) feeds[a].insert(prof.result_sort);
    }
    auto reach = [&](const SortName& from) {
        std::set<SortName> seen;
        std::vector<SortName> stack{from};
        while (!stack.empty()) {
            SortName s = stack.back();
            stack.pop_back();
            auto it = feeds.find(s);
            if (it == feeds.end()) continue;
            for (const auto& t : it->second)
                if (seen.insert(t).second) stack.push_back(t);
        }
        return seen;
    };
    std::set<SortName> infinite;
    for (const auto& s : inhabited) {
        auto r = reach(s);
        if (!r.count(s)) continue; // s not on a constructor cycle
        infinite.insert(s);
        for (const auto& t : r) infinite.insert(t);
    }
    // keep only inhabited results
    std::set<SortName> out;
    for (const auto& s : infinite)
        if (inhabited.count(s)) out.insert(s);
    return out;
}

Term Term::var(const std::string& name, const SortName& sort) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->name = name;
    n->sort = sort;
    n->hash = hash_combine(hash_string(name), hash_combine(hash_string(sort), 0x5bd1));
    n->weight = 0;
    n->ground = false;
    Term t;
    t.node_ = std::move(n);
    return t;
}

Term Term::app(const std::string& fn, const SortName& result_sort, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    n->is_var = false;
    n->name = fn;
    n->sort = result_sort;
    size_t h = hash_combine(hash_string(fn), 0xa27d);
    int w = args.empty() ? 0 : 1;
    bool g = true;
    for (const auto& a : args) {
        h = hash_combine(h, a.hash());
        w += a.weight();
        g = g && a.is_ground();
    }
    n->hash = h;
    n->weight = w;
    n->ground = g;
    n->args = std::move(args);
    Term t;
    t.node_ = std::move(n);
    return t;
}

bool Term::operator==(const Term& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (node_->hash != o.node_->hash) return false;
    if (node_->is_var != o.node_->is_var || node_->name != o.node_->name || node_->sort != o.node_->sort)
        return false;
    if (node_->args.size() != o.node_->args.size()) return false;
    for (size_t i = 0; i < node_->args.size(); ++i)
        if (!(node_->args[i] == o.node_->args[i])) return false;
    return true;
}

bool Term::operator<(const Term& o) const {
    if (node_ == o.node_) return false;
    if (node_->is_var != o.node_->is_var) return node_->is_var;
    if (node_->name != o.node_->name) return node_->name < o.node_->name;
    if (node_->sort != o.node_->sort) return node_->sort < o.node_->sort;
    if (node_->args.size() != o.node_->args.size()) return node_->args.size() < o.node_->args.size();
    for (size_t i = 0; i < node_->args.size(); ++i) {
        if (node_->args[i] < o.node_->args[i]) return true;
        if (o.node_->args[i] < node_->args[i]) return false;
    }
    return false;
}

void Term::collect_vars(std::set<Term>& out) const {
    if (is_var()) {
        out.insert(*this);
        return;
    }
    for (const auto& a : args()) a.collect_vars(out);
}

std::set<Term> Term::vars() const {
    std::set<Term> out;
    collect_vars(out);
    return out;
}

void Term::collect_subterms(std::set<Term>& out) const {
    out.insert(*this);
    if (!is_var())
        for (const auto& a : args()) a.collect_subterms(out);
}

std::string Term::str() const {
    if (is_var()) return name();
    if (args().empty()) return name();
    std::string s = name() + "(";
    for (size_t i = 0; i < args().size(); ++i) {
        if (i) s += ",";
        s += args()[i].str();
    }
    s += ")";
    return s;
}

SubtermRelation subterm(const Term& u, const Term& t) {
    if (u == t) return SubtermRelation::Equal;
    if (!t.is_var()) {
        for (const auto& a : t.args()) {
            SubtermRelation r = subterm(u, a);
            if (r != SubtermRelation::NotSubterm) return SubtermRelation::StrictSubterm;
        }
    }
    return SubtermRelation::NotSubterm;
}

bool Substitution::bind(const Term& var, const Term& value) {
    if (!var.is_var()) return false;
    if (var.sort() != value.sort()) return false;
    map_[var] = value;
    return true;
}

const Term* Substitution::lookup(const Term& var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
    if (t.is_var()) {
        const Term* v = lookup(t);
        return v ? *v : t;
    }
    if (t.args().empty()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(apply(a));
        if (!(args.back() == a)) changed = true;
    }
    if (!changed) return t;
    return Term::app(t.name(), t.sort(), std::move(args));
}

bool Substitution::is_flat() const {
    for (const auto& [v, t] : map_)
        if (!t.is_var()) return false;
    return true;
}

bool Substitution::is_injective() const {
    if (!is_flat()) return false;
    std::set<Term> seen;
    for (const auto& [v, t] : map_)
        if (!seen.insert(t).second) return false;
    return true;
}

std::string Substitution::str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [v, t] : map_) {
        if (!first) s += ", ";
        first = false;
        s += v.str() + " -> " + t.str();
    }
    return s + "}";
}

std::optional<Substitution> unify(const std::vector<std::pair<Term, Term>>& pairs) {
    Substitution theta;
    std::vector<std::pair<Term, Term>> work(pairs.begin(), pairs.end());
    while (!work.empty()) {
        auto [s, t] = work.back();
        work.pop_back();
        s = theta.apply(s);
        t = theta.apply(t);
        if (s == t) continue;
        if (!s.is_var() && t.is_var()) std::swap(s, t);
        if (s.is_var()) {
            if (s.sort() != t.sort()) return std::nullopt;
            if (subterm(s, t) != SubtermRelation::NotSubterm) return std::nullopt; // occurs check
            // keep the substitution idempotent
            Substitution single;
            single.bind(s, t);
            Substitution next;
            for (const auto& [v, u] : theta.entries()) next.bind(v, single.apply(u));
            next.bind(s, t);
            theta = std::move(next);
            continue;
        }
        if (s.name() != t.name() || s.args().size() != t.args().size() || s.sort() != t.sort())
            return std::nullopt; // clash
        for (size_t i = 0; i < s.args().size(); ++i) work.emplace_back(s.args()[i], t.args()[i]);
    }
    return theta;
}

std::string term_sexpr(const Term& t) {
    if (t.is_var() || t.args().empty()) return t.name();
    std::string s = "(" + t.name();
    for (const auto& a : t.args()) s += " " + term_sexpr(a);
    return s + ")";
}

namespace {

std::optional<Term> parse_term_tokens(const Signature& sig, const std::map<std::string, SortName>& var_sorts,
                                      const std::string& text, size_t& pos) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) return std::nullopt;
    if (text[pos] == '(') {
        ++pos;
        std::string fn;
        while (pos < text.size() && text[pos] != ' ' && text[pos] != ')' && text[pos] != '(') fn.push_back(text[pos++]);
        const auto* prof = sig.find(fn);
        if (!prof) return std::nullopt;
        std::vector<Term> args;
        while (true) {
            while (pos < text.size() && text[pos] == ' ') ++pos;
            if (pos >= text.size()) return std::nullopt;
            if (text[pos] == ')') {
                ++pos;
                break;
            }
            auto a = parse_term_tokens(sig, var_sorts, text, pos);
            if (!a) return std::nullopt;
            args.push_back(*a);
        }
        if (args.size() != prof->arg_sorts.size()) return std::nullopt;
        for (size_t i = 0; i < args.size(); ++i)
            if (args[i].sort() != prof->arg_sorts[i]) return std::nullopt;
        return Term::app(fn, prof->result_sort, std::move(args));
    }
    std::string name;
    while (pos < text.size() && text[pos] != ' ' && text[pos] != ')' && text[pos] != '(') name.push_back(text[pos++]);
    if (const auto* prof = sig.find(name)) {
        if (!prof->arg_sorts.empty()) return std::nullopt;
        return Term::app(name, prof->result_sort, {});
    }
    auto it = var_sorts.find(name);
    if (it == var_sorts.end()) return std::nullopt;
    return Term::var(name, it->second);
}

} // namespace

std::optional<Term> parse_term_sexpr(const Signature& sig, const std::map<std::string, SortName>& var_sorts,
                                     const std::string& text) {
    size_t pos = 0;
    auto t = parse_term_tokens(sig, var_sorts, text, pos);
    if (!t) return std::nullopt;
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos != text.size()) return std::nullopt;
    return t;
}

std::vector<Term> ground_terms(const Signature& sig, const SortName& sort, int bound, size_t cap) {
    // by_weight[w][sort] holds terms of exactly weight w
    std::vector<std::map<SortName, std::vector<Term>>> by_weight(static_cast<size_t>(bound) + 1);
    size_t total = 0;
    for (const auto& [name, prof] : sig.functions) {
        if (!prof.arg_sorts.empty()) continue;
        by_weight[0][prof.result_sort].push_back(Term::app(name, prof.result_sort, {}));
        ++total;
    }
    for (int w = 1; w <= bound; ++w) {
        for (const auto& [name, prof] : sig.functions) {
            size_t n = prof.arg_sorts.size();
            if (n == 0) continue;
            // distribute w-1 over the arguments
            std::vector<int> ws(n, 0);
            int budget = w - 1;
            std::vector<Term> picked(n);
            // enumerate weight splits recursively
            auto rec = [&](auto&& self, size_t i, int remaining) -> void {
                if (total > cap) return;
                if (i == n) {
                    if (remaining != 0) return;
                    by_weight[w][prof.result_sort].push_back(Term::app(name, prof.result_sort, picked));
                    ++total;
                    return;
                }
                for (int wi = 0; wi <= remaining; ++wi) {
                    auto it = by_weight[wi].find(prof.arg_sorts[i]);
                    if (it == by_weight[wi].end()) continue;
                    for (const auto& cand : it->second) {
                        picked[i] = cand;
                        self(self, i + 1, remaining - wi);
                        if (total > cap) return;
                    }
                }
            };
            rec(rec, 0, budget);
            (void)ws;
            (void)budget;
        }
    }
    std::vector<Term> out;
    for (int w = 0; w <= bound; ++w) {
        auto it = by_weight[w].find(sort);
        if (it == by_weight[w].end()) continue;
        out.insert(out.end(), it->second.begin(), it->second.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace indescent
