#pragma once

#include <optional>
#include <string>
#include <vector>

#include "indescent/system.hpp"

namespace indescent {

enum class Verdict { Pass, Fail, Unknown };

struct CheckDetail {
    std::string subject; // rule or constraint pair description
    Verdict verdict = Verdict::Pass;
    std::string witness; // concrete replayable evidence on Fail, reason on Unknown
};

struct RestrictionResult {
    Verdict verdict = Verdict::Pass;
    std::vector<CheckDetail> details;
};

struct RestrictionReport {
    RestrictionResult non_filtering;
    RestrictionResult ranked;
    RestrictionResult fvi;
    RestrictionResult non_overlapping;

    bool all_pass() const {
        return non_filtering.verdict == Verdict::Pass && ranked.verdict == Verdict::Pass &&
               fvi.verdict == Verdict::Pass && non_overlapping.verdict == Verdict::Pass;
    }
    std::string render() const;
};

struct RestrictionOptions {
    int forall_exists_depth = 3; // subgoal valuation bound for the Herbrand non-filtering check
    int ranked_witness_depth = 2;
};

RestrictionResult check_non_filtering(const InductiveSystem& sys, const RestrictionOptions& opt = {});
RestrictionResult check_ranked(const InductiveSystem& sys, const RestrictionOptions& opt = {});
RestrictionResult check_fvi(const InductiveSystem& sys, const RestrictionOptions& opt = {});
RestrictionResult check_non_overlapping(const InductiveSystem& sys, const RestrictionOptions& opt = {});

RestrictionReport check_restrictions(const InductiveSystem& sys, const RestrictionOptions& opt = {});

const char* verdict_name(Verdict v);

} // namespace indescent
