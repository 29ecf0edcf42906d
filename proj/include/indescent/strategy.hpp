#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace indescent {

enum class RuleLabel { LU, RU, RD, AR, SP, AX, ID };

constexpr size_t kRuleLabelCount = 7;

const char* rule_label_name(RuleLabel l);
RuleLabel rule_label_from(const std::string& s);

// Strategy over the rule-schema alphabet: a regular expression compiled to a
// DFA. Grammar: juxtaposition concatenates, postfix * and ?, infix |,
// parentheses; tokens LU RU RD AR SP AX ID.
class Strategy {
public:
    explicit Strategy(const std::string& regex);

    static const char* default_regex() { return "(LU RU* RD AR* SP?)* LU? RU* (AX | ID)"; }

    int start() const { return start_; }
    // -1 when the step leaves the live part of the automaton
    int step(int state, RuleLabel l) const;
    bool accepting(int state) const;
    // a rule is applicable mid-path when the step stays live
    bool allows(int state, RuleLabel l) const { return step(state, l) >= 0; }
    // zero-antecedent rules terminate the path, so the word must be accepted
    bool allows_final(int state, RuleLabel l) const {
        int n = step(state, l);
        return n >= 0 && accepting(n);
    }
    const std::string& source() const { return source_; }

    // Checks one full path word.
    bool accepts_word(const std::vector<RuleLabel>& word) const;

private:
    std::string source_;
    int start_ = 0;
    std::vector<std::array<int, kRuleLabelCount>> delta_;
    std::vector<bool> accept_;
};

struct StrategyParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace indescent
