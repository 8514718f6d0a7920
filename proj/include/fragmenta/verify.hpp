#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fragmenta/split_law.hpp"

namespace fragmenta {

struct CheckResult {
    std::string id;      // C01..C12
    std::string title;
    bool pass = false;
    std::string detail;  // measured values against their thresholds
};

struct VerifyOptions {
    std::uint64_t master_seed = 7;
    unsigned threads = 0;   // 0: thread_budget()
};

// the full check battery, C01..C12, in order
std::vector<CheckResult> run_acceptance_checks(const VerifyOptions& opt = {});

// parametrized subset behind the `verify` subcommand: spacing-CDF and
// partition-point deviation quantiles for one law at one cutoff
std::vector<CheckResult> verify_uniformity(const SplitLaw& law, double x_c,
                                           int replicates, std::uint64_t seed,
                                           unsigned threads = 0);

} // namespace fragmenta
