// Command-line front end: prove entailments, check certificates, run the
// restriction checks, query the tree-automata oracle and drive the
// differential fuzz campaign.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "indescent/certificate.hpp"
#include "indescent/fuzz.hpp"
#include "indescent/parser.hpp"
#include "indescent/restrictions.hpp"

using namespace indescent;
using nlohmann::json;

namespace {

constexpr int kExitValid = 0;
constexpr int kExitDisproved = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInputError = 3;
constexpr int kExitRestrictions = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

// INDESCENT_LIMITS=nodes:depth:ms overrides the defaults.
SearchLimits limits_from_env() {
    SearchLimits lim;
    const char* env = std::getenv("INDESCENT_LIMITS");
    if (!env) return lim;
    std::string s(env);
    size_t a = s.find(':'), b = a == std::string::npos ? a : s.find(':', a + 1);
    try {
        if (a != std::string::npos) {
            lim.max_nodes = std::stoul(s.substr(0, a));
            if (b != std::string::npos) {
                lim.max_depth = std::stoi(s.substr(a + 1, b - a - 1));
                lim.wall_ms = std::stol(s.substr(b + 1));
            } else {
                lim.max_depth = std::stoi(s.substr(a + 1));
            }
        } else if (!s.empty()) {
            lim.max_nodes = std::stoul(s);
        }
    } catch (const std::exception&) {
        std::cerr << "warning: malformed INDESCENT_LIMITS, using defaults\n";
    }
    return lim;
}

json verdict_json(const RestrictionResult& r) {
    json j;
    j["verdict"] = verdict_name(r.verdict);
    json details = json::array();
    for (const auto& d : r.details) {
        if (d.verdict == Verdict::Pass) continue;
        details.push_back({{"subject", d.subject}, {"verdict", verdict_name(d.verdict)}, {"witness", d.witness}});
    }
    j["findings"] = details;
    return j;
}

json report_json(const RestrictionReport& rep) {
    json j;
    j["non_filtering"] = verdict_json(rep.non_filtering);
    j["ranked"] = verdict_json(rep.ranked);
    j["fvi"] = verdict_json(rep.fvi);
    j["non_overlapping"] = verdict_json(rep.non_overlapping);
    j["all_pass"] = rep.all_pass();
    return j;
}

int cmd_prove(const std::string& file, const std::string& proof_out, const std::string& json_out,
              bool require_restrictions, bool skip_restrictions, const std::string& strategy_str,
              QueryOptions qopt) {
    ParsedFile pf;
    try {
        pf = parse_system(slurp(file));
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    if (pf.queries.empty()) {
        std::cerr << "input error: file contains no (entails ...) query\n";
        return kExitInputError;
    }
    const EntailmentQuery& q = pf.queries.front();

    json j;
    j["file"] = file;
    j["query"] = {{"lhs", q.lhs}, {"rhs", q.rhs}};

    bool restrictions_pass = true;
    if (!skip_restrictions) {
        RestrictionReport rep = check_restrictions(pf.system);
        restrictions_pass = rep.all_pass();
        std::cout << rep.render();
        std::cout << (restrictions_pass
                          ? "restrictions: all Pass -- search is a decision procedure on this system\n"
                          : "restrictions: not all Pass -- search is a sound semi-decision on this system\n");
        j["restrictions"] = report_json(rep);
        if (require_restrictions && !restrictions_pass) {
            std::cout << "verdict: restriction gate failed\n";
            if (!json_out.empty()) spill(json_out, j.dump(2) + "\n");
            return kExitRestrictions;
        }
    }

    Strategy strat(strategy_str);
    QueryOutcome out = prove_query(pf.system, q, strat, qopt);
    j["nodes"] = out.nodes;

    int code = kExitUnknown;
    if (out.kind == QueryOutcome::Kind::Proved) {
        std::cout << "verdict: entailment holds (proof with " << out.proof->size() << " nodes)\n";
        auto issues = validate_proof_shape(*out.proof, strat);
        for (const auto& i : issues) std::cerr << "proof-shape issue: " << i.what << " at " << i.where << "\n";
        ProofCertificate cert = make_certificate(pf.system, q, strat.source(), *out.proof);
        std::string text = write_certificate(cert);
        if (!proof_out.empty()) {
            spill(proof_out, text);
            std::cout << "certificate written to " << proof_out << "\n";
        }
        j["verdict"] = "proved";
        j["proof_nodes"] = out.proof->size();
        code = issues.empty() ? kExitValid : kExitUnknown;
    } else if (out.kind == QueryOutcome::Kind::Disproved) {
        std::cout << "verdict: entailment disproved\n";
        if (out.cex) {
            if (!out.cex->tuple.empty()) {
                std::string ts;
                for (size_t i = 0; i < out.cex->tuple.size(); ++i) {
                    if (i) ts += ", ";
                    ts += out.cex->tuple[i].str();
                }
                std::cout << "counterexample: (" << ts << ")\n";
                j["counterexample"] = ts;
            } else if (out.cex->sl_model) {
                std::cout << "counterexample heap: " << out.cex->sl_model->heap.str() << "\n";
                std::cout << "unfolding tree: "
                          << (out.cex->sl_model->tree ? out.cex->sl_model->tree->str() : "-") << "\n";
                if (!out.cex->sl_plain_semantics_too)
                    std::cout << "note: only the unfolding-tree entailment semantics is refuted; the heap itself"
                                 " is covered on the right-hand side\n";
                j["counterexample_heap"] = out.cex->sl_model->heap.str();
                j["plain_semantics_refuted"] = out.cex->sl_plain_semantics_too;
            }
            std::cout << "verification: " << out.cex->transcript << "\n";
            j["verification"] = out.cex->transcript;
        }
        j["verdict"] = "disproved";
        code = kExitDisproved;
    } else {
        std::cout << "verdict: unknown (" << out.reason << ")\n";
        j["verdict"] = "unknown";
        j["reason"] = out.reason;
        code = kExitUnknown;
    }
    if (!json_out.empty()) spill(json_out, j.dump(2) + "\n");
    return code;
}

int cmd_check(const std::string& file, const std::string& proof) {
    try {
        ParsedFile pf = parse_system(slurp(file));
        ProofCertificate cert = read_certificate(pf.system, slurp(proof));
        CheckResult res = check_proof(pf.system, cert);
        std::cout << res.str() << "\n";
        return res.valid() ? kExitValid : kExitDisproved;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int cmd_restrictions(const std::string& file, const std::string& json_out) {
    try {
        ParsedFile pf = parse_system(slurp(file));
        RestrictionReport rep = check_restrictions(pf.system);
        std::cout << rep.render();
        if (!json_out.empty()) spill(json_out, report_json(rep).dump(2) + "\n");
        return rep.all_pass() ? kExitValid : kExitRestrictions;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int cmd_oracle(const std::string& file, bool no_subsumption) {
    try {
        Nfta a;
        std::string lhs;
        std::set<std::string> rhs;
        std::string text = slurp(file);
        if (file.size() > 5 && file.substr(file.size() - 5) == ".nfta") {
            NftaFile nf = parse_nfta(text);
            a = nf.automaton;
            if (!nf.query) {
                std::cerr << "input error: .nfta file has no `? p <= q...` query line\n";
                return kExitInputError;
            }
            lhs = nf.query->first;
            rhs = nf.query->second;
        } else {
            ParsedFile pf = parse_system(text);
            auto conv = system_to_nfta(pf.system);
            if (!conv) {
                std::cerr << "input error: system is not automata-shaped\n";
                return kExitInputError;
            }
            a = *conv;
            if (pf.queries.empty()) {
                std::cerr << "input error: no entailment query\n";
                return kExitInputError;
            }
            lhs = pf.queries.front().lhs;
            rhs.insert(pf.queries.front().rhs.begin(), pf.queries.front().rhs.end());
        }
        a.trim();
        InclusionOptions opt;
        opt.subsumption = !no_subsumption;
        auto res = antichain_inclusion(a, lhs, rhs, opt);
        if (res.included) {
            std::cout << "included\n";
            return kExitValid;
        }
        std::cout << "not included";
        if (res.witness) std::cout << ", witness: " << res.witness->str();
        std::cout << "\n";
        return kExitDisproved;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int cmd_fuzz(uint64_t first_seed, size_t count, FuzzOptions opt, const std::string& json_out) {
    FuzzReport rep = run_fuzz_campaign(first_seed, count, opt);
    std::cout << "fuzz: " << rep.agreed << "/" << rep.instances.size() << " instances agree ("
              << rep.elapsed_ms << " ms)\n";
    for (const auto& i : rep.instances)
        if (!i.agree) std::cout << "  disagreement: " << i.detail << "\n";
    if (!json_out.empty()) {
        json j;
        j["total"] = rep.instances.size();
        j["agreed"] = rep.agreed;
        j["elapsed_ms"] = rep.elapsed_ms;
        json fails = json::array();
        for (const auto& i : rep.instances)
            if (!i.agree) fails.push_back(i.detail);
        j["disagreements"] = fails;
        spill(json_out, j.dump(2) + "\n");
    }
    return rep.all_agree() ? kExitValid : kExitDisproved;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"indescent -- cyclic-proof entailment prover for inductive systems"};
    app.require_subcommand(1);

    SearchLimits env_limits = limits_from_env();

    std::string file, proof_out, json_out, proof_in;
    std::string strategy_str = Strategy::default_regex();
    bool require_restrictions = false, skip_restrictions = false, no_subsumption = false;
    QueryOptions qopt;
    qopt.limits = env_limits;

    auto* prove = app.add_subcommand("prove", "run the restriction checks and search for a proof");
    prove->add_option("file", file, "system file with an (entails ...) query")->required();
    prove->add_option("--proof-out", proof_out, "write the proof certificate here");
    prove->add_option("--json", json_out, "write a machine-readable outcome here");
    prove->add_option("--strategy", strategy_str, "strategy regular expression");
    prove->add_option("--max-nodes", qopt.limits.max_nodes, "search node budget");
    prove->add_option("--max-depth", qopt.limits.max_depth, "search depth budget");
    prove->add_option("--timeout-ms", qopt.limits.wall_ms, "search wall-clock budget");
    prove->add_option("--depth", qopt.enum_depth, "enumeration weight bound for oracles");
    prove->add_option("--sl-locs", qopt.sl_max_locs, "separation-logic enumeration location bound");
    prove->add_option("--sl-unfold", qopt.sl_max_unfold, "separation-logic enumeration unfolding bound");
    prove->add_flag("--require-restrictions", require_restrictions, "fail when a restriction check is not Pass");
    prove->add_flag("--skip-restrictions", skip_restrictions, "do not run the restriction checks");

    auto* check = app.add_subcommand("check", "re-validate a proof certificate");
    check->add_option("file", file, "system file")->required();
    check->add_option("--proof", proof_in, "certificate to check")->required();

    auto* restr = app.add_subcommand("restrictions", "run the four restriction checks");
    restr->add_option("file", file, "system file")->required();
    restr->add_option("--json", json_out, "write a machine-readable report here");

    auto* oracle = app.add_subcommand("oracle", "antichain inclusion on an automata-shaped system");
    oracle->add_option("file", file, "`.nfta` shorthand or automata-shaped system file")->required();
    oracle->add_flag("--no-subsumption", no_subsumption, "disable subsumption pruning");

    FuzzOptions fopt;
    fopt.limits = env_limits;
    uint64_t seeds = 200, first_seed = 1;
    auto* fuzz = app.add_subcommand("fuzz", "differential campaign over random automata");
    fuzz->add_option("--seeds", seeds, "number of instances");
    fuzz->add_option("--first-seed", first_seed, "first seed");
    fuzz->add_option("--max-states", fopt.max_states, "state bound");
    fuzz->add_option("--max-rank", fopt.max_rank, "symbol rank bound");
    fuzz->add_option("--max-symbols", fopt.max_symbols, "alphabet size bound");
    fuzz->add_option("--brute-weight", fopt.brute_weight, "brute-force term weight bound");
    fuzz->add_option("--json", json_out, "write a machine-readable report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (prove->parsed())
            return cmd_prove(file, proof_out, json_out, require_restrictions, skip_restrictions, strategy_str, qopt);
        if (check->parsed()) return cmd_check(file, proof_in);
        if (restr->parsed()) return cmd_restrictions(file, json_out);
        if (oracle->parsed()) return cmd_oracle(file, no_subsumption);
        if (fuzz->parsed()) return cmd_fuzz(first_seed, seeds, fopt, json_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
