#include "indescent/certificate.hpp"

#include <algorithm>
#include <functional>

#include "indescent/herbrand.hpp"
#include "indescent/seplog.hpp"
#include "indescent/sexpr.hpp"

namespace indescent {

namespace {

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

SExpr atom(const std::string& s) { return SExpr::make_atom(s); }
SExpr list(std::vector<SExpr> xs) { return SExpr::make_list(std::move(xs)); }

SExpr term_to_sexpr_node(const Term& t) {
    if (t.is_var() || t.args().empty()) return atom(t.name());
    std::vector<SExpr> xs{atom(t.name())};
    for (const auto& a : t.args()) xs.push_back(term_to_sexpr_node(a));
    return list(std::move(xs));
}

SExpr constraint_to_sexpr(const Constraint& c) {
    if (std::holds_alternative<LiteralConstraint>(c)) {
        const auto& lc = std::get<LiteralConstraint>(c);
        std::vector<SExpr> xs{atom("lits")};
        for (const auto& l : lc.literals())
            xs.push_back(list({atom(l.positive ? "=" : "distinct"), term_to_sexpr_node(l.lhs),
                               term_to_sexpr_node(l.rhs)}));
        return list(std::move(xs));
    }
    const auto& sh = std::get<SymbolicHeap>(c);
    std::vector<SExpr> pure{atom("pure")};
    for (const auto& l : sh.pure)
        pure.push_back(list({atom(l.positive ? "=" : "distinct"), atom(l.lhs), atom(l.rhs)}));
    std::vector<SExpr> spatial{atom("spatial")};
    for (const auto& a : sh.spatial) {
        std::vector<SExpr> tg;
        for (const auto& t : a.targets) tg.push_back(atom(t));
        spatial.push_back(list({atom("pto"), atom(a.src), list(std::move(tg))}));
    }
    return list({atom("heap"), list(std::move(pure)), list(std::move(spatial))});
}

SExpr atom_to_sexpr(const PredAtom& a) {
    std::vector<SExpr> xs{atom(a.pred)};
    for (const auto& v : a.args) xs.push_back(atom(v));
    return list(std::move(xs));
}

SExpr sequent_to_sexpr(const Sequent& s) {
    std::vector<SExpr> lhs{atom("lhs")};
    for (const auto& c : s.lhs_constraints) lhs.push_back(constraint_to_sexpr(c));
    std::vector<SExpr> atoms{atom("atoms")};
    for (const auto& a : s.lhs_atoms) atoms.push_back(atom_to_sexpr(a));
    lhs.push_back(list(std::move(atoms)));
    std::vector<SExpr> rhs{atom("rhs")};
    for (const auto& m : s.rhs) {
        std::vector<SExpr> mem{atom("member")};
        std::vector<SExpr> ex{atom("ex")};
        for (const auto& v : m.ex_vars) ex.push_back(atom(v));
        mem.push_back(list(std::move(ex)));
        if (m.constraint) mem.push_back(constraint_to_sexpr(*m.constraint));
        std::vector<SExpr> ma{atom("atoms")};
        for (const auto& a : m.atoms) ma.push_back(atom_to_sexpr(a));
        mem.push_back(list(std::move(ma)));
        rhs.push_back(list(std::move(mem)));
    }
    return list({atom("sequent"), list(std::move(lhs)), list(std::move(rhs))});
}

SExpr map_to_sexpr(const char* head, const std::map<std::string, std::string>& m) {
    std::vector<SExpr> xs{atom(head)};
    for (const auto& [k, v] : m) {
        // the value may itself be an s-expression rendering
        auto parsed = parse_sexprs(v);
        xs.push_back(list({atom(k), parsed.size() == 1 ? parsed[0] : atom(v)}));
    }
    return list(std::move(xs));
}

SExpr witness_to_sexpr(const RuleWitness& w) {
    std::vector<SExpr> xs{atom("witness")};
    if (std::holds_alternative<LuWitness>(w) || std::holds_alternative<RuWitness>(w)) {
        const PredAtom* a;
        const std::vector<size_t>* rules;
        const std::vector<std::vector<std::string>>* fresh;
        if (std::holds_alternative<LuWitness>(w)) {
            const auto& lu = std::get<LuWitness>(w);
            a = &lu.atom;
            rules = &lu.rule_indices;
            fresh = &lu.fresh_vars;
        } else {
            const auto& ru = std::get<RuWitness>(w);
            a = &ru.atom;
            rules = &ru.rule_indices;
            fresh = &ru.fresh_vars;
        }
        xs.push_back(list({atom("atom"), atom_to_sexpr(*a)}));
        std::vector<SExpr> rs{atom("rules")};
        for (size_t r : *rules) rs.push_back(atom(std::to_string(r)));
        xs.push_back(list(std::move(rs)));
        std::vector<SExpr> fv{atom("fresh")};
        for (const auto& grp : *fresh) {
            std::vector<SExpr> g;
            for (const auto& v : grp) g.push_back(atom(v));
            fv.push_back(list(std::move(g)));
        }
        xs.push_back(list(std::move(fv)));
    } else if (std::holds_alternative<RdWitness>(w)) {
        const auto& rd = std::get<RdWitness>(w);
        std::vector<SExpr> en{atom("entailed")};
        for (bool b : rd.entailed) en.push_back(atom(b ? "1" : "0"));
        xs.push_back(list(std::move(en)));
        std::vector<SExpr> subs{atom("subs")};
        for (const auto& per_member : rd.witnesses) {
            std::vector<SExpr> lst;
            for (const auto& th : per_member) {
                std::vector<SExpr> one{atom("sub")};
                for (const auto& [k, v] : th) one.push_back(list({atom(k), atom(v)}));
                lst.push_back(list(std::move(one)));
            }
            subs.push_back(list(std::move(lst)));
        }
        xs.push_back(list(std::move(subs)));
    } else if (std::holds_alternative<ArWitness>(w)) {
        const auto& ar = std::get<ArWitness>(w);
        xs.push_back(list({atom("member"), atom(std::to_string(ar.member_index))}));
        xs.push_back(list({atom("atoms"), atom(std::to_string(ar.atom_a)), atom(std::to_string(ar.atom_b))}));
    } else if (std::holds_alternative<SpWitness>(w)) {
        const auto& sp = std::get<SpWitness>(w);
        std::vector<SExpr> ch{atom("choice")};
        for (int c : sp.choice_vector) ch.push_back(atom(std::to_string(c)));
        xs.push_back(list(std::move(ch)));
    } else if (std::holds_alternative<AxWitness>(w)) {
        const auto& ax = std::get<AxWitness>(w);
        xs.push_back(list({atom("member"), atom(std::to_string(ax.member_index))}));
        xs.push_back(map_to_sexpr("theta", ax.theta));
    } else if (std::holds_alternative<IdWitness>(w)) {
        const auto& id = std::get<IdWitness>(w);
        xs.push_back(map_to_sexpr("theta", id.theta));
    }
    return list(std::move(xs));
}

// --- parsing back ----------------------------------------------------------

struct CertParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const SExpr* find_field(const SExpr& e, const std::string& head) {
    for (const auto& item : e.items)
        if (item.headed(head)) return &item;
    return nullptr;
}

Term sexpr_to_term(const InductiveSystem& sys, const std::map<std::string, SortName>& sorts, const SExpr& e) {
    auto t = parse_term_sexpr(sys.signature, sorts, render_sexpr(e));
    if (!t) throw CertParseError("unparsable term '" + render_sexpr(e) + "'");
    return *t;
}

PredAtom sexpr_to_atom(const SExpr& e) {
    if (!e.is_list() || e.items.empty() || !e.items[0].is_atom) throw CertParseError("malformed atom");
    PredAtom a;
    a.pred = e.items[0].atom;
    for (size_t i = 1; i < e.size(); ++i) a.args.push_back(e.at(i).atom);
    return a;
}

Constraint sexpr_to_constraint(const InductiveSystem& sys, const std::map<std::string, SortName>& sorts,
                               const SExpr& e) {
    if (e.headed("lits")) {
        LiteralConstraint lc;
        for (size_t i = 1; i < e.size(); ++i) {
            const auto& l = e.at(i);
            if (!l.is_list() || l.size() != 3) throw CertParseError("malformed literal");
            lc.add(Literal{l.at(0).atom == "=", sexpr_to_term(sys, sorts, l.at(1)), sexpr_to_term(sys, sorts, l.at(2))});
        }
        lc.normalize();
        return lc;
    }
    if (e.headed("heap")) {
        SymbolicHeap sh;
        const SExpr* pure = find_field(e, "pure");
        const SExpr* spatial = find_field(e, "spatial");
        if (pure)
            for (size_t i = 1; i < pure->size(); ++i) {
                const auto& l = pure->at(i);
                sh.pure.push_back(PureLit{l.at(0).atom == "=", l.at(1).atom, l.at(2).atom});
            }
        if (spatial)
            for (size_t i = 1; i < spatial->size(); ++i) {
                const auto& l = spatial->at(i);
                PtoAtom a;
                a.src = l.at(1).atom;
                for (const auto& t : l.at(2).items) a.targets.push_back(t.atom);
                sh.spatial.push_back(std::move(a));
            }
        sh.normalize();
        return sh;
    }
    throw CertParseError("unknown constraint form");
}

Sequent sexpr_to_sequent(const InductiveSystem& sys, const SExpr& e) {
    Sequent s;
    s.theory = sys.theory;
    const SExpr* lhs = find_field(e, "lhs");
    const SExpr* rhs = find_field(e, "rhs");
    if (!lhs || !rhs) throw CertParseError("malformed sequent");
    std::map<std::string, SortName> sorts; // variables resolve lazily; only needed for FOL terms

    // first pass: atoms give sorts
    auto note_atom_sorts = [&](const PredAtom& a) {
        if (InductiveSystem::is_universal(a.pred)) {
            for (const auto& v : a.args)
                sorts.emplace(v, sys.theory == Theory::SeparationLogic ? kLocSort : SortName{});
            return;
        }
        const auto& p = sys.predicate(a.pred);
        for (size_t i = 0; i < a.args.size(); ++i) sorts.emplace(a.args[i], p.arg_sorts[i]);
    };
    const SExpr* latoms = find_field(*lhs, "atoms");
    if (latoms)
        for (size_t i = 1; i < latoms->size(); ++i) note_atom_sorts(sexpr_to_atom(latoms->at(i)));
    for (size_t mi = 1; mi < rhs->size(); ++mi) {
        const SExpr* ma = find_field(rhs->at(mi), "atoms");
        if (ma)
            for (size_t i = 1; i < ma->size(); ++i) note_atom_sorts(sexpr_to_atom(ma->at(i)));
    }
    // constraint variables default to the unique term sort when unseen
    SortName fallback;
    for (const auto& so : sys.signature.sorts)
        if (so != kBoolSort) { fallback = so; break; }
    std::function<void(const SExpr&)> note_term_vars = [&](const SExpr& t) {
        if (t.is_atom) {
            if (!sys.signature.find(t.atom)) sorts.emplace(t.atom, fallback);
            return;
        }
        for (size_t i = 1; i < t.size(); ++i) note_term_vars(t.at(i));
    };
    auto note_constraint_vars = [&](const SExpr& c) {
        if (c.headed("lits"))
            for (size_t i = 1; i < c.size(); ++i) {
                note_term_vars(c.at(i).at(1));
                note_term_vars(c.at(i).at(2));
            }
        if (c.headed("heap")) {
            const SExpr* pure = find_field(c, "pure");
            const SExpr* spatial = find_field(c, "spatial");
            if (pure)
                for (size_t i = 1; i < pure->size(); ++i) {
                    sorts.emplace(pure->at(i).at(1).atom, kLocSort);
                    sorts.emplace(pure->at(i).at(2).atom, kLocSort);
                }
            if (spatial)
                for (size_t i = 1; i < spatial->size(); ++i) {
                    sorts.emplace(spatial->at(i).at(1).atom, kLocSort);
                    for (const auto& t : spatial->at(i).at(2).items) sorts.emplace(t.atom, kLocSort);
                }
        }
    };
    for (size_t i = 1; i < lhs->size(); ++i)
        if (!lhs->at(i).headed("atoms")) note_constraint_vars(lhs->at(i));
    for (size_t mi = 1; mi < rhs->size(); ++mi)
        for (size_t i = 1; i < rhs->at(mi).size(); ++i) {
            const auto& f = rhs->at(mi).at(i);
            if (f.headed("lits") || f.headed("heap")) note_constraint_vars(f);
        }

    for (size_t i = 1; i < lhs->size(); ++i) {
        const auto& f = lhs->at(i);
        if (f.headed("atoms")) {
            for (size_t j = 1; j < f.size(); ++j) s.lhs_atoms.push_back(sexpr_to_atom(f.at(j)));
        } else {
            s.lhs_constraints.push_back(sexpr_to_constraint(sys, sorts, f));
        }
    }
    for (size_t mi = 1; mi < rhs->size(); ++mi) {
        const auto& me = rhs->at(mi);
        RightMember m;
        for (size_t i = 1; i < me.size(); ++i) {
            const auto& f = me.at(i);
            if (f.headed("ex")) {
                for (size_t j = 1; j < f.size(); ++j) m.ex_vars.push_back(f.at(j).atom);
            } else if (f.headed("atoms")) {
                for (size_t j = 1; j < f.size(); ++j) m.atoms.push_back(sexpr_to_atom(f.at(j)));
            } else {
                m.constraint = sexpr_to_constraint(sys, sorts, f);
            }
        }
        s.rhs.push_back(std::move(m));
    }
    // the certificate stores canonical sequents; keep them verbatim and let
    // the checker compare against its own normalization
    return s;
}

std::map<std::string, std::string> sexpr_to_map(const SExpr& e) {
    std::map<std::string, std::string> out;
    for (size_t i = 1; i < e.size(); ++i) {
        const auto& kv = e.at(i);
        if (!kv.is_list() || kv.size() != 2) throw CertParseError("malformed substitution entry");
        out[kv.at(0).atom] = render_sexpr(kv.at(1));
    }
    return out;
}

RuleWitness sexpr_to_witness(RuleLabel rule, const SExpr& e) {
    switch (rule) {
        case RuleLabel::LU:
        case RuleLabel::RU: {
            const SExpr* a = find_field(e, "atom");
            const SExpr* rs = find_field(e, "rules");
            const SExpr* fv = find_field(e, "fresh");
            if (!a || !rs || !fv) throw CertParseError("incomplete unfold witness");
            PredAtom at = sexpr_to_atom(a->at(1));
            std::vector<size_t> rules;
            for (size_t i = 1; i < rs->size(); ++i) rules.push_back(std::stoul(rs->at(i).atom));
            std::vector<std::vector<std::string>> fresh;
            for (size_t i = 1; i < fv->size(); ++i) {
                std::vector<std::string> grp;
                for (const auto& v : fv->at(i).items) grp.push_back(v.atom);
                fresh.push_back(std::move(grp));
            }
            if (rule == RuleLabel::LU) return LuWitness{at, rules, fresh};
            return RuWitness{at, rules, fresh};
        }
        case RuleLabel::RD: {
            const SExpr* en = find_field(e, "entailed");
            const SExpr* subs = find_field(e, "subs");
            if (!en || !subs) throw CertParseError("incomplete reduction witness");
            RdWitness w;
            for (size_t i = 1; i < en->size(); ++i) w.entailed.push_back(en->at(i).atom == "1");
            for (size_t i = 1; i < subs->size(); ++i) {
                std::vector<std::map<std::string, std::string>> per;
                for (const auto& sub : subs->at(i).items) {
                    std::map<std::string, std::string> th;
                    for (size_t j = 1; j < sub.size(); ++j) th[sub.at(j).at(0).atom] = sub.at(j).at(1).atom;
                    per.push_back(std::move(th));
                }
                w.witnesses.push_back(std::move(per));
            }
            return w;
        }
        case RuleLabel::AR: {
            const SExpr* m = find_field(e, "member");
            const SExpr* a = find_field(e, "atoms");
            if (!m || !a) throw CertParseError("incomplete weakening witness");
            return ArWitness{std::stoul(m->at(1).atom), std::stoul(a->at(1).atom), std::stoul(a->at(2).atom)};
        }
        case RuleLabel::SP: {
            const SExpr* ch = find_field(e, "choice");
            if (!ch) throw CertParseError("incomplete split witness");
            SpWitness w;
            for (size_t i = 1; i < ch->size(); ++i) w.choice_vector.push_back(std::stoi(ch->at(i).atom));
            return w;
        }
        case RuleLabel::AX: {
            const SExpr* m = find_field(e, "member");
            const SExpr* th = find_field(e, "theta");
            AxWitness w;
            if (m) w.member_index = std::stoi(m->at(1).atom);
            if (th) w.theta = sexpr_to_map(*th);
            return w;
        }
        case RuleLabel::ID: {
            const SExpr* th = find_field(e, "theta");
            IdWitness w;
            if (th) w.theta = sexpr_to_map(*th);
            return w;
        }
        default:
            throw CertParseError("unknown witness kind");
    }
}

} // namespace

std::string system_digest(const InductiveSystem& sys) { return hex64(fnv1a64(sys.print())); }

ProofCertificate make_certificate(const InductiveSystem& sys, const EntailmentQuery& q, const std::string& strategy,
                                  const ProofNode& proof) {
    ProofCertificate cert;
    cert.digest = system_digest(sys);
    cert.query = q;
    cert.strategy = strategy;

    std::vector<int> stack; // node ids on the current path
    std::function<void(const ProofNode&, int)> emit = [&](const ProofNode& n, int parent) {
        int id = static_cast<int>(cert.nodes.size());
        cert.nodes.emplace_back();
        CertificateNode& cn = cert.nodes.back();
        cn.id = id;
        cn.parent = parent;
        cn.rule = n.rule;
        cn.sequent = n.sequent;
        cn.witness = n.witness;
        if (n.rule == RuleLabel::ID) {
            const auto& w = std::get<IdWitness>(n.witness);
            size_t up = static_cast<size_t>(w.steps_up);
            cn.pivot_id = up <= stack.size() ? stack[stack.size() - up] : -1;
        }
        stack.push_back(id);
        for (const auto& c : n.children) {
            cert.nodes[static_cast<size_t>(id)].children.push_back(static_cast<int>(cert.nodes.size()));
            emit(*c, id);
        }
        stack.pop_back();
    };
    emit(proof, -1);
    return cert;
}

std::string write_certificate(const ProofCertificate& cert) {
    std::string out;
    out += "; indescent proof certificate\n";
    out += "(format indescent-certificate 1)\n";
    out += "(system-digest " + cert.digest + ")\n";
    {
        std::vector<SExpr> q{atom("query"), atom(cert.query.lhs)};
        std::vector<SExpr> rs;
        for (const auto& r : cert.query.rhs) rs.push_back(atom(r));
        q.push_back(list(std::move(rs)));
        out += render_sexpr(list(std::move(q))) + "\n";
    }
    out += render_sexpr(list({atom("strategy"), atom(cert.strategy)})) + "\n";
    for (const auto& n : cert.nodes) {
        out += "; node " + std::to_string(n.id) + ": " + n.sequent.str() + "\n";
        std::vector<SExpr> xs{atom("node"),
                              list({atom("id"), atom(std::to_string(n.id))}),
                              list({atom("parent"), atom(std::to_string(n.parent))}),
                              list({atom("rule"), atom(rule_label_name(n.rule))})};
        std::vector<SExpr> ch{atom("children")};
        for (int c : n.children) ch.push_back(atom(std::to_string(c)));
        xs.push_back(list(std::move(ch)));
        if (n.rule == RuleLabel::ID) xs.push_back(list({atom("pivot"), atom(std::to_string(n.pivot_id))}));
        xs.push_back(sequent_to_sexpr(n.sequent));
        xs.push_back(witness_to_sexpr(n.witness));
        out += render_sexpr(list(std::move(xs))) + "\n";
    }
    return out;
}

ProofCertificate read_certificate(const InductiveSystem& sys, const std::string& text) {
    ProofCertificate cert;
    auto forms = parse_sexprs(text);
    for (const auto& f : forms) {
        if (f.headed("system-digest")) {
            cert.digest = f.at(1).atom;
        } else if (f.headed("query")) {
            cert.query.lhs = f.at(1).atom;
            for (const auto& r : f.at(2).items) cert.query.rhs.push_back(r.atom);
        } else if (f.headed("strategy")) {
            cert.strategy = f.at(1).atom;
        } else if (f.headed("node")) {
            CertificateNode n;
            const SExpr* id = find_field(f, "id");
            const SExpr* parent = find_field(f, "parent");
            const SExpr* rule = find_field(f, "rule");
            const SExpr* children = find_field(f, "children");
            const SExpr* seq = find_field(f, "sequent");
            const SExpr* wit = find_field(f, "witness");
            const SExpr* pivot = find_field(f, "pivot");
            if (!id || !parent || !rule || !children || !seq || !wit)
                throw CertParseError("incomplete certificate node");
            n.id = std::stoi(id->at(1).atom);
            n.parent = std::stoi(parent->at(1).atom);
            n.rule = rule_label_from(rule->at(1).atom);
            for (size_t i = 1; i < children->size(); ++i) n.children.push_back(std::stoi(children->at(i).atom));
            if (pivot) n.pivot_id = std::stoi(pivot->at(1).atom);
            n.sequent = sexpr_to_sequent(sys, *seq);
            n.witness = sexpr_to_witness(n.rule, *wit);
            cert.nodes.push_back(std::move(n));
        }
    }
    return cert;
}

std::string CheckResult::str() const {
    switch (kind) {
        case Kind::Valid: return "Valid";
        case Kind::DigestMismatch: return "DigestMismatch: " + description;
        default: return "Invalid at node " + std::to_string(node_id) + ": " + description;
    }
}

namespace {

bool sequents_equal(const InductiveSystem& sys, Sequent a, const Sequent& b) {
    a.normalize(sys.signature);
    return a == b;
}

} // namespace

CheckResult check_proof(const InductiveSystem& sys, const ProofCertificate& cert) {
    auto invalid = [](int node, const std::string& why) {
        CheckResult r;
        r.kind = CheckResult::Kind::Invalid;
        r.node_id = node;
        r.description = why;
        return r;
    };
    if (cert.digest != system_digest(sys)) {
        CheckResult r;
        r.kind = CheckResult::Kind::DigestMismatch;
        r.description = "certificate digest " + cert.digest + " does not match the system";
        return r;
    }
    if (cert.nodes.empty()) return invalid(-1, "certificate has no nodes");

    // table sanity: ids are indices, children/parent links form a tree
    for (size_t i = 0; i < cert.nodes.size(); ++i) {
        const auto& n = cert.nodes[i];
        if (n.id != static_cast<int>(i)) return invalid(n.id, "node ids must be contiguous");
        for (int c : n.children) {
            if (c <= n.id || static_cast<size_t>(c) >= cert.nodes.size())
                return invalid(n.id, "child id out of range");
            if (cert.nodes[static_cast<size_t>(c)].parent != n.id)
                return invalid(n.id, "child/parent links disagree");
        }
    }
    if (cert.nodes[0].parent != -1) return invalid(0, "root must have no parent");
    for (size_t i = 1; i < cert.nodes.size(); ++i) {
        int p = cert.nodes[i].parent;
        if (p < 0 || static_cast<size_t>(p) >= i)
            return invalid(static_cast<int>(i), "nodes must appear after their parent");
        const auto& pc = cert.nodes[static_cast<size_t>(p)].children;
        if (std::find(pc.begin(), pc.end(), static_cast<int>(i)) == pc.end())
            return invalid(static_cast<int>(i), "node missing from its parent's child list");
    }

    // root sequent must match the query
    Sequent root = make_root_sequent(sys, cert.query);
    if (!sequents_equal(sys, cert.nodes[0].sequent, root))
        return invalid(0, "root sequent does not match the query");

    Strategy strat(cert.strategy);

    // strategy states per node
    std::vector<int> state(cert.nodes.size(), -1);
    for (size_t i = 0; i < cert.nodes.size(); ++i) {
        const auto& n = cert.nodes[i];
        int st = n.parent < 0 ? strat.start()
                              : strat.step(state[static_cast<size_t>(n.parent)],
                                           cert.nodes[static_cast<size_t>(n.parent)].rule);
        if (st < 0) return invalid(n.id, "strategy rejects the path to this node");
        state[i] = st;
    }

    for (const auto& n : cert.nodes) {
        Sequent canon = n.sequent;
        canon.normalize(sys.signature);
        if (!(canon == n.sequent)) return invalid(n.id, "sequent is not in canonical form");

        int after = strat.step(state[static_cast<size_t>(n.id)], n.rule);
        if (after < 0) return invalid(n.id, "rule label not allowed by the strategy");
        if (n.children.empty()) {
            if (n.rule != RuleLabel::AX && n.rule != RuleLabel::ID)
                return invalid(n.id, "leaf closed by a rule with antecedents");
            if (!strat.accepting(after)) return invalid(n.id, "path word not accepted by the strategy");
        }

        auto child_sequents = [&]() {
            std::vector<Sequent> out;
            for (int c : n.children) out.push_back(cert.nodes[static_cast<size_t>(c)].sequent);
            return out;
        };

        switch (n.rule) {
            case RuleLabel::LU: {
                if (!std::holds_alternative<LuWitness>(n.witness)) return invalid(n.id, "missing LU witness");
                auto res = apply_lu_with(sys, n.sequent, std::get<LuWitness>(n.witness));
                if (!res) return invalid(n.id, "LU witness does not apply to the sequent");
                auto kids = child_sequents();
                if (res->antecedents.size() != kids.size()) return invalid(n.id, "LU antecedent count mismatch");
                for (size_t i = 0; i < kids.size(); ++i)
                    if (!(res->antecedents[i] == kids[i])) return invalid(n.id, "LU antecedent mismatch");
                break;
            }
            case RuleLabel::RU: {
                if (!std::holds_alternative<RuWitness>(n.witness)) return invalid(n.id, "missing RU witness");
                auto res = apply_ru_with(sys, n.sequent, std::get<RuWitness>(n.witness));
                if (!res) return invalid(n.id, "RU witness does not apply to the sequent");
                auto kids = child_sequents();
                if (kids.size() != 1 || !(res->antecedent == kids[0]))
                    return invalid(n.id, "RU antecedent mismatch");
                break;
            }
            case RuleLabel::RD: {
                if (!std::holds_alternative<RdWitness>(n.witness)) return invalid(n.id, "missing RD witness");
                const auto& w = std::get<RdWitness>(n.witness);
                auto res = apply_rd(sys, n.sequent);
                if (!res) return invalid(n.id, "RD does not apply to the sequent");
                if (!(res->witness.entailed == w.entailed) || !(res->witness.witnesses == w.witnesses))
                    return invalid(n.id, "RD witness data does not match the canonical reduction");
                // independent re-validation of every stored witness
                for (size_t j = 0; j < n.sequent.rhs.size(); ++j) {
                    const auto& m = n.sequent.rhs[j];
                    for (const auto& th : w.witnesses[j]) {
                        if (sys.theory == Theory::Herbrand) {
                            LiteralConstraint phi;
                            for (const auto& c : n.sequent.lhs_constraints)
                                phi = phi.conjoined(std::get<LiteralConstraint>(c));
                            LiteralConstraint psi =
                                m.constraint ? std::get<LiteralConstraint>(*m.constraint) : LiteralConstraint{};
                            auto sorts = n.sequent.var_sorts(sys);
                            Substitution sub;
                            for (const auto& [k, v] : th) {
                                SortName sk = sorts.count(k) ? sorts.at(k) : SortName{};
                                SortName sv = sorts.count(v) ? sorts.at(v) : sk;
                                sub.bind(Term::var(k, sk), Term::var(v, sv));
                            }
                            if (!h_entails(sys.signature, phi, psi.substituted(sub)))
                                return invalid(n.id, "stored RD substitution is not a witness");
                        } else {
                            SymbolicHeap phi;
                            for (const auto& c : n.sequent.lhs_constraints)
                                phi = phi.star(std::get<SymbolicHeap>(c));
                            SymbolicHeap psi = m.constraint ? std::get<SymbolicHeap>(*m.constraint) : SymbolicHeap{};
                            if (!sh_entails(phi, psi.renamed(th)))
                                return invalid(n.id, "stored RD substitution is not a witness");
                        }
                    }
                }
                auto kids = child_sequents();
                if (kids.size() != 1 || !(res->antecedent == kids[0]))
                    return invalid(n.id, "RD antecedent mismatch");
                break;
            }
            case RuleLabel::AR: {
                if (!std::holds_alternative<ArWitness>(n.witness)) return invalid(n.id, "missing AR witness");
                const auto& w = std::get<ArWitness>(n.witness);
                if (w.member_index >= n.sequent.rhs.size()) return invalid(n.id, "AR member out of range");
                const auto& m = n.sequent.rhs[w.member_index];
                if (m.constraint || !m.ex_vars.empty()) return invalid(n.id, "AR member is not a plain conjunction");
                if (w.atom_a >= m.atoms.size() || w.atom_b >= m.atoms.size() || w.atom_a == w.atom_b)
                    return invalid(n.id, "AR atom indices out of range");
                if (m.atoms[w.atom_a].args != m.atoms[w.atom_b].args)
                    return invalid(n.id, "AR atoms do not share an argument tuple");
                std::vector<Sequent> expect;
                for (size_t drop : {w.atom_b, w.atom_a}) {
                    Sequent ante = n.sequent;
                    RightMember nm = m;
                    nm.atoms.erase(nm.atoms.begin() + static_cast<long>(drop));
                    ante.rhs[w.member_index] = std::move(nm);
                    ante.normalize(sys.signature);
                    expect.push_back(std::move(ante));
                }
                auto kids = child_sequents();
                if (kids.size() != expect.size()) return invalid(n.id, "AR antecedent count mismatch");
                for (size_t i = 0; i < kids.size(); ++i)
                    if (!(expect[i] == kids[i])) return invalid(n.id, "AR antecedent mismatch");
                break;
            }
            case RuleLabel::SP: {
                if (!std::holds_alternative<SpWitness>(n.witness)) return invalid(n.id, "missing SP witness");
                const auto& w = std::get<SpWitness>(n.witness);
                auto shape = sp_shape(sys, n.sequent);
                if (!shape) return invalid(n.id, "SP does not apply to the sequent");
                size_t cf_count = 1;
                for (size_t l = 0; l < shape->k; ++l) cf_count *= shape->n;
                if (w.choice_vector.size() != cf_count) return invalid(n.id, "SP choice vector has the wrong length");
                for (int c : w.choice_vector)
                    if (c < 0 || static_cast<size_t>(c) >= shape->n)
                        return invalid(n.id, "SP choice out of range");
                auto expect = apply_sp(sys, n.sequent, *shape, w.choice_vector);
                auto kids = child_sequents();
                if (kids.size() != expect.size()) return invalid(n.id, "SP antecedent count mismatch");
                for (size_t i = 0; i < kids.size(); ++i)
                    if (!(expect[i] == kids[i])) return invalid(n.id, "SP antecedent mismatch");
                break;
            }
            case RuleLabel::AX: {
                if (!std::holds_alternative<AxWitness>(n.witness)) return invalid(n.id, "missing AX witness");
                std::string why;
                if (!verify_ax(sys, n.sequent, std::get<AxWitness>(n.witness), &why))
                    return invalid(n.id, "AX: " + why);
                if (!n.children.empty()) return invalid(n.id, "AX nodes have no antecedents");
                break;
            }
            case RuleLabel::ID: {
                if (!std::holds_alternative<IdWitness>(n.witness)) return invalid(n.id, "missing ID witness");
                const auto& w = std::get<IdWitness>(n.witness);
                if (!n.children.empty()) return invalid(n.id, "ID nodes have no antecedents");
                if (n.pivot_id < 0 || n.pivot_id >= n.id) return invalid(n.id, "backlink pivot missing");
                // pivot must be a strict ancestor with an LU on the direct path
                bool ancestor = false, lu = false;
                int cur = n.parent;
                while (cur >= 0) {
                    if (cert.nodes[static_cast<size_t>(cur)].rule == RuleLabel::LU && !ancestor) lu = true;
                    if (cur == n.pivot_id) { ancestor = true; break; }
                    cur = cert.nodes[static_cast<size_t>(cur)].parent;
                }
                if (!ancestor) return invalid(n.id, "backlink pivot is not a strict ancestor");
                if (cert.nodes[static_cast<size_t>(n.pivot_id)].rule == RuleLabel::LU) lu = true;
                if (!lu) return invalid(n.id, "no left unfolding on the direct path");
                std::string why;
                if (!verify_id(sys, n.sequent, cert.nodes[static_cast<size_t>(n.pivot_id)].sequent, w.theta, &why))
                    return invalid(n.id, "ID: " + why);
                break;
            }
        }
    }
    return CheckResult{};
}

} // namespace indescent
