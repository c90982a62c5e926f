#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace flp {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed;
    std::size_t sweep_systems = 10000;
};

/// Seed from FLP_SEED when set, otherwise the default.
std::uint64_t seed_from_env();
AcceptanceOptions default_acceptance_options();

CriterionResult run_criterion(int id, const AcceptanceOptions& opts);
/// Runs criteria 1..10, calling `on_result` after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result_line(const CriterionResult& r);

}  // namespace flp
