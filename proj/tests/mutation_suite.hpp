#pragma once

// Shared single-node certificate mutations for the mutation-resistance
// tests and the acceptance suite. Each mutation returns whether it applied.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "indescent/certificate.hpp"

namespace indescent::testing {

using Mutation = std::function<bool(ProofCertificate&)>;

inline int find_node(const ProofCertificate& c, RuleLabel l, int nth = 0) {
    int seen = 0;
    for (const auto& n : c.nodes)
        if (n.rule == l && seen++ == nth) return n.id;
    return -1;
}

inline std::vector<std::pair<std::string, Mutation>> standard_mutations() {
    std::vector<std::pair<std::string, Mutation>> mutations;
    auto add = [&](const std::string& label, Mutation m) { mutations.emplace_back(label, std::move(m)); };

        add("rule label LU->RU", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::LU);
            if (id < 0) return false;
            c.nodes[id].rule = RuleLabel::RU;
            return true;
        });
        add("rule label AX->ID", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::AX);
            if (id < 0) return false;
            c.nodes[id].rule = RuleLabel::ID;
            return true;
        });
        add("backlink to a non-ancestor", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::ID);
            if (id < 0) return false;
            int target = id + 1 < static_cast<int>(c.nodes.size()) ? id + 1 : id;
            c.nodes[id].pivot_id = target;
            return true;
        });
        add("backlink to itself", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::ID);
            if (id < 0) return false;
            c.nodes[id].pivot_id = id;
            return true;
        });
        add("backlink theta non-injective", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::ID);
            if (id < 0) return false;
            auto& w = std::get<IdWitness>(c.nodes[id].witness);
            if (w.theta.size() < 2) return false;
            auto it = w.theta.begin();
            auto first = it->second;
            ++it;
            it->second = first;
            return true;
        });
        add("backlink theta retargeted", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::ID);
            if (id < 0) return false;
            auto& w = std::get<IdWitness>(c.nodes[id].witness);
            if (w.theta.empty()) return false;
            w.theta.begin()->second = "_zz";
            return true;
        });
        add("sequent literal flip", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                for (auto& cons : n.sequent.lhs_constraints) {
                    if (auto* lc = std::get_if<LiteralConstraint>(&cons)) {
                        if (lc->literals().empty()) continue;
                        auto lits = lc->literals();
                        lits[0].positive = !lits[0].positive;
                        LiteralConstraint flipped(lits);
                        flipped.normalize();
                        cons = flipped;
                        return true;
                    }
                    if (auto* sh = std::get_if<SymbolicHeap>(&cons)) {
                        if (sh->pure.empty()) continue;
                        sh->pure[0].positive = !sh->pure[0].positive;
                        sh->normalize();
                        return true;
                    }
                }
            }
            return false;
        });
        add("left atom renamed", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.id == 0 || n.sequent.lhs_atoms.empty()) continue;
                n.sequent.lhs_atoms[0].pred += "x";
                return true;
            }
            return false;
        });
        add("right member dropped", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.id == 0 || n.sequent.rhs.size() < 2) continue;
                n.sequent.rhs.pop_back();
                return true;
            }
            return false;
        });
        add("RD entailed flag flipped", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::RD);
            if (id < 0) return false;
            auto& w = std::get<RdWitness>(c.nodes[id].witness);
            if (w.entailed.empty()) return false;
            w.entailed[0] = !w.entailed[0];
            return true;
        });
        add("RD witness corrupted", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.rule != RuleLabel::RD) continue;
                auto& w = std::get<RdWitness>(n.witness);
                for (auto& per : w.witnesses)
                    for (auto& th : per)
                        if (!th.empty()) {
                            th.begin()->second = "_zz";
                            return true;
                        }
            }
            return false;
        });
        add("RD witness deleted", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.rule != RuleLabel::RD) continue;
                auto& w = std::get<RdWitness>(n.witness);
                for (auto& per : w.witnesses)
                    if (!per.empty()) {
                        per.pop_back();
                        return true;
                    }
            }
            return false;
        });
        add("SP choice entry changed", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::SP);
            if (id < 0) return false;
            auto& w = std::get<SpWitness>(c.nodes[id].witness);
            if (w.choice_vector.empty()) return false;
            w.choice_vector[0] ^= 1;
            return true;
        });
        add("AX member index out of range", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::AX);
            if (id < 0) return false;
            std::get<AxWitness>(c.nodes[id].witness).member_index = 99;
            return true;
        });
        add("AX substitution corrupted", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.rule != RuleLabel::AX) continue;
                auto& w = std::get<AxWitness>(n.witness);
                if (w.theta.empty()) continue;
                w.theta.begin()->second = "_zz";
                return true;
            }
            return false;
        });
        add("LU fresh variable collides", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.rule != RuleLabel::LU) continue;
                auto& w = std::get<LuWitness>(n.witness);
                for (auto& grp : w.fresh_vars)
                    if (!grp.empty()) {
                        grp[0] = w.atom.args[0]; // no longer fresh
                        return true;
                    }
            }
            return false;
        });
        add("LU rule list truncated", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.rule != RuleLabel::LU) continue;
                auto& w = std::get<LuWitness>(n.witness);
                if (w.rule_indices.size() < 2) continue;
                w.rule_indices.pop_back();
                w.fresh_vars.pop_back();
                return true;
            }
            return false;
        });
        add("unfold atom retargeted", [](ProofCertificate& c) {
            int id = find_node(c, RuleLabel::RU);
            if (id < 0) return false;
            auto& w = std::get<RuWitness>(c.nodes[id].witness);
            w.atom.args[0] = "_zz";
            return true;
        });
        add("children swapped", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.children.size() < 2) continue;
                if (c.nodes[n.children[0]].sequent == c.nodes[n.children[1]].sequent) continue;
                std::swap(n.children[0], n.children[1]);
                return true;
            }
            return false;
        });
        add("child removed", [](ProofCertificate& c) {
            for (auto& n : c.nodes) {
                if (n.rule != RuleLabel::LU || n.children.size() < 2) continue;
                n.children.pop_back();
                return true;
            }
            return false;
        });
        add("root sequent replaced", [](ProofCertificate& c) {
            if (c.nodes.empty()) return false;
            if (c.nodes[0].sequent.lhs_atoms.empty()) return false;
            c.nodes[0].sequent.lhs_atoms[0].args[0] = "y9";
            return true;
        });
        add("query strengthened", [](ProofCertificate& c) {
            if (c.query.rhs.empty()) return false;
            c.query.rhs[0] = c.query.lhs;
            return true;
        });
        add("digest corrupted", [](ProofCertificate& c) {
            c.digest[0] = c.digest[0] == '0' ? '1' : '0';
            return true;
        });
        add("strategy narrowed", [](ProofCertificate& c) {
            c.strategy = "LU RU (AX | ID)";
            return true;
        });

    return mutations;
}

} // namespace indescent::testing
