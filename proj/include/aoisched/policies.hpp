#pragma once

#include <memory>
#include <string>

#include "aoisched/core_types.hpp"

namespace aoisched {

enum class PolicyKind { Myopic, AlwaysSwitch, Threshold, Tabular };

/// A runnable policy of any kind. Threshold and Tabular carry their data;
/// the baselines are stateless.
struct Policy {
    PolicyKind kind = PolicyKind::Myopic;
    ThresholdPolicy threshold;
    std::shared_ptr<const TabularPolicy> tabular;

    static Policy myopic() { return {PolicyKind::Myopic, {}, nullptr}; }
    static Policy always_switch() { return {PolicyKind::AlwaysSwitch, {}, nullptr}; }
    static Policy from_threshold(ThresholdPolicy tp);
    static Policy from_tabular(std::shared_ptr<const TabularPolicy> tab);

    std::string name() const;
};

/// Uniform decision function. Total on legal states; SKIP whenever a = 0.
///   MYOPIC: switch iff idle with an arrival.
///   ALWAYS_SWITCH: switch on every arrival.
///   THRESHOLD: switch iff idle, or the epoch coordinates satisfy the
///     threshold rule (states without derivable coordinates skip).
///   TABULAR: table lookup with delta clamped to delta_m.
Action decide(const Policy& policy, const State& s);

/// Materializes any policy onto the truncated state space of `params`.
/// avg_cost is left NaN (evaluate_stationary fills it in when needed).
TabularPolicy tabulate(const Policy& policy, const Params& params);

/// Parses a CLI policy spec: myopic | always-switch | threshold:<file.json>
/// | tabular:<file.json>. Throws std::invalid_argument on unknown specs or
/// unreadable files.
Policy parse_policy_spec(const std::string& spec);

}  // namespace aoisched
