#include "indescent/strategy.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace indescent {

const char* rule_label_name(RuleLabel l) {
    switch (l) {
        case RuleLabel::LU: return "LU";
        case RuleLabel::RU: return "RU";
        case RuleLabel::RD: return "RD";
        case RuleLabel::AR: return "AR";
        case RuleLabel::SP: return "SP";
        case RuleLabel::AX: return "AX";
        default: return "ID";
    }
}

RuleLabel rule_label_from(const std::string& s) {
    for (size_t i = 0; i < kRuleLabelCount; ++i)
        if (s == rule_label_name(static_cast<RuleLabel>(i))) return static_cast<RuleLabel>(i);
    throw StrategyParseError("unknown rule label '" + s + "'");
}

namespace {

// Thompson NFA
struct Nfa {
    struct State {
        std::vector<int> eps;
        std::map<int, std::vector<int>> on; // label index -> targets
    };
    std::vector<State> states;
    int add() {
        states.emplace_back();
        return static_cast<int>(states.size()) - 1;
    }
};

struct Frag {
    int in, out;
};

struct RegexParser {
    const std::string& src;
    size_t pos = 0;
    Nfa& nfa;

    RegexParser(const std::string& s, Nfa& n) : src(s), nfa(n) {}

    void skip_ws() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n')) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool peek(char c) {
        skip_ws();
        return pos < src.size() && src[pos] == c;
    }

    Frag alternation() {
        Frag f = concatenation();
        while (peek('|')) {
            eat('|');
            Frag g = concatenation();
            int in = nfa.add(), out = nfa.add();
            nfa.states[in].eps = {f.in, g.in};
            nfa.states[f.out].eps.push_back(out);
            nfa.states[g.out].eps.push_back(out);
            f = {in, out};
        }
        return f;
    }

    Frag concatenation() {
        Frag f = postfix();
        while (true) {
            skip_ws();
            if (pos >= src.size() || src[pos] == ')' || src[pos] == '|') break;
            Frag g = postfix();
            nfa.states[f.out].eps.push_back(g.in);
            f = {f.in, g.out};
        }
        return f;
    }

    Frag postfix() {
        Frag f = primary();
        while (true) {
            skip_ws();
            if (pos < src.size() && src[pos] == '*') {
                ++pos;
                int in = nfa.add(), out = nfa.add();
                nfa.states[in].eps = {f.in, out};
                nfa.states[f.out].eps.push_back(f.in);
                nfa.states[f.out].eps.push_back(out);
                f = {in, out};
            } else if (pos < src.size() && src[pos] == '?') {
                ++pos;
                int in = nfa.add(), out = nfa.add();
                nfa.states[in].eps = {f.in, out};
                nfa.states[f.out].eps.push_back(out);
                f = {in, out};
            } else {
                break;
            }
        }
        return f;
    }

    Frag primary() {
        skip_ws();
        if (eat('(')) {
            Frag f = alternation();
            if (!eat(')')) throw StrategyParseError("missing ')' in strategy");
            return f;
        }
        std::string tok;
        while (pos < src.size() && std::isalnum(static_cast<unsigned char>(src[pos]))) tok.push_back(src[pos++]);
        if (tok.empty()) throw StrategyParseError("unexpected character in strategy at position " + std::to_string(pos));
        RuleLabel l = rule_label_from(tok);
        int in = nfa.add(), out = nfa.add();
        nfa.states[in].on[static_cast<int>(l)].push_back(out);
        return {in, out};
    }
};

std::set<int> eps_closure(const Nfa& nfa, std::set<int> s) {
    std::vector<int> stack(s.begin(), s.end());
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : nfa.states[static_cast<size_t>(x)].eps)
            if (s.insert(y).second) stack.push_back(y);
    }
    return s;
}

} // namespace

Strategy::Strategy(const std::string& regex) : source_(regex) {
    Nfa nfa;
    RegexParser p(regex, nfa);
    Frag f = p.alternation();
    p.skip_ws();
    if (p.pos != regex.size()) throw StrategyParseError("trailing input in strategy");

    // subset construction
    std::map<std::set<int>, int> ids;
    std::vector<std::set<int>> pool;
    auto intern = [&](const std::set<int>& s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(pool.size());
        ids[s] = id;
        pool.push_back(s);
        delta_.push_back({});
        delta_.back().fill(-1);
        accept_.push_back(s.count(f.out) > 0);
        return id;
    };
    start_ = intern(eps_closure(nfa, {f.in}));
    for (size_t i = 0; i < pool.size(); ++i) {
        for (size_t l = 0; l < kRuleLabelCount; ++l) {
            std::set<int> next;
            for (int st : pool[i]) {
                auto it = nfa.states[static_cast<size_t>(st)].on.find(static_cast<int>(l));
                if (it == nfa.states[static_cast<size_t>(st)].on.end()) continue;
                next.insert(it->second.begin(), it->second.end());
            }
            if (next.empty()) continue;
            delta_[i][l] = intern(eps_closure(nfa, next));
        }
    }
    // keep only live states (states that can reach an accepting state)
    std::vector<bool> live(accept_.begin(), accept_.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < delta_.size(); ++i) {
            if (live[i]) continue;
            for (size_t l = 0; l < kRuleLabelCount; ++l)
                if (delta_[i][l] >= 0 && live[static_cast<size_t>(delta_[i][l])]) {
                    live[i] = true;
                    changed = true;
                    break;
                }
        }
    }
    for (size_t i = 0; i < delta_.size(); ++i)
        for (size_t l = 0; l < kRuleLabelCount; ++l)
            if (delta_[i][l] >= 0 && !live[static_cast<size_t>(delta_[i][l])]) delta_[i][l] = -1;
    if (!live[static_cast<size_t>(start_)])
        throw StrategyParseError("strategy accepts no word");
}

int Strategy::step(int state, RuleLabel l) const {
    if (state < 0) return -1;
    return delta_[static_cast<size_t>(state)][static_cast<size_t>(l)];
}

bool Strategy::accepting(int state) const {
    return state >= 0 && accept_[static_cast<size_t>(state)];
}

bool Strategy::accepts_word(const std::vector<RuleLabel>& word) const {
    int st = start_;
    for (RuleLabel l : word) {
        st = step(st, l);
        if (st < 0) return false;
    }
    return accepting(st);
}

} // namespace indescent
