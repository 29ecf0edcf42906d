#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indescent/nfta.hpp"
#include "indescent/search.hpp"

namespace indescent {

// One differential instance: the antichain oracle, the proof engine on the
// automaton viewed as an inductive system, and exhaustive membership
// comparison over all ground terms up to the brute-force weight bound must
// agree.
struct FuzzInstance {
    uint64_t seed = 0;
    std::string lhs;
    std::set<std::string> rhs;
    bool antichain_included = false;
    bool engine_proved = false;
    bool engine_unknown = false;
    bool brute_included = false;
    bool witness_ok = true;
    bool agree = false;
    std::string detail;
};

struct FuzzReport {
    std::vector<FuzzInstance> instances;
    size_t agreed = 0;
    int64_t elapsed_ms = 0;

    bool all_agree() const { return agreed == instances.size(); }
};

struct FuzzOptions {
    int max_states = 5;
    int max_rank = 2;
    int max_symbols = 4;
    int brute_weight = 4;
    SearchLimits limits;
};

FuzzInstance run_fuzz_instance(uint64_t seed, const FuzzOptions& opt);
FuzzReport run_fuzz_campaign(uint64_t first_seed, size_t count, const FuzzOptions& opt);

} // namespace indescent
