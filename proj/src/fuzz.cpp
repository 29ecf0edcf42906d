#include "indescent/fuzz.hpp"

#include <chrono>
#include <random>

namespace indescent {

FuzzInstance run_fuzz_instance(uint64_t seed, const FuzzOptions& opt) {
    FuzzInstance inst;
    inst.seed = seed;
    Nfta a = random_nfta(seed, opt.max_states, opt.max_rank, opt.max_symbols);

    std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc909ULL);
    std::vector<std::string> states(a.states.begin(), a.states.end());
    inst.lhs = states[rng() % states.size()];
    for (const auto& q : states)
        if (rng() & 1) inst.rhs.insert(q);
    if (inst.rhs.empty()) inst.rhs.insert(states[rng() % states.size()]);

    // oracle
    auto inc = antichain_inclusion(a, inst.lhs, inst.rhs);
    inst.antichain_included = inc.included;

    // proof engine on the induced system
    InductiveSystem sys = nfta_to_system(a);
    EntailmentQuery q;
    q.lhs = inst.lhs;
    q.rhs.assign(inst.rhs.begin(), inst.rhs.end());
    Strategy strat(Strategy::default_regex());
    QueryOptions qo;
    qo.limits = opt.limits;
    qo.enum_depth = opt.brute_weight;
    QueryOutcome out = prove_query(sys, q, strat, qo);
    inst.engine_proved = out.kind == QueryOutcome::Kind::Proved;
    inst.engine_unknown = out.kind == QueryOutcome::Kind::Unknown;

    // exhaustive membership comparison
    inst.brute_included = true;
    for (const auto& t : nfta_terms(a, opt.brute_weight)) {
        if (!nfta_membership(a, inst.lhs, t)) continue;
        bool covered = false;
        for (const auto& r : inst.rhs)
            if (nfta_membership(a, r, t)) { covered = true; break; }
        if (!covered) {
            inst.brute_included = false;
            break;
        }
    }

    // witness validity on both sides
    if (!inc.included) {
        if (!inc.witness) {
            inst.witness_ok = false;
        } else {
            inst.witness_ok = nfta_membership(a, inst.lhs, *inc.witness);
            for (const auto& r : inst.rhs)
                if (nfta_membership(a, r, *inc.witness)) inst.witness_ok = false;
        }
    }
    if (out.kind == QueryOutcome::Kind::Disproved && (!out.cex || !out.cex->verified)) inst.witness_ok = false;

    inst.agree = !inst.engine_unknown && inst.witness_ok &&
                 inst.antichain_included == inst.engine_proved &&
                 inst.antichain_included == inst.brute_included;
    if (!inst.agree) {
        inst.detail = "seed " + std::to_string(seed) + ": antichain=" +
                      (inst.antichain_included ? "inc" : "noninc") + " engine=" +
                      (inst.engine_unknown ? "unknown" : (inst.engine_proved ? "proved" : "disproved")) +
                      " brute=" + (inst.brute_included ? "inc" : "noninc") +
                      (inst.witness_ok ? "" : " witness-check-failed");
    }
    return inst;
}

FuzzReport run_fuzz_campaign(uint64_t first_seed, size_t count, const FuzzOptions& opt) {
    FuzzReport rep;
    auto t0 = std::chrono::steady_clock::now();
    for (size_t i = 0; i < count; ++i) {
        rep.instances.push_back(run_fuzz_instance(first_seed + i, opt));
        if (rep.instances.back().agree) ++rep.agreed;
    }
    rep.elapsed_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace indescent
