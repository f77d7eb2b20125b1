#include "aoisched/policies.hpp"

#include <utility>

#include "aoisched/serialize.hpp"

namespace aoisched {

Policy Policy::from_threshold(ThresholdPolicy tp) {
    tp.validate();
    Policy pol;
    pol.kind = PolicyKind::Threshold;
    pol.threshold = std::move(tp);
    return pol;
}

Policy Policy::from_tabular(std::shared_ptr<const TabularPolicy> tab) {
    if (!tab) throw std::invalid_argument("Policy::from_tabular: null policy");
    Policy pol;
    pol.kind = PolicyKind::Tabular;
    pol.tabular = std::move(tab);
    return pol;
}

std::string Policy::name() const {
    switch (kind) {
        case PolicyKind::Myopic: return "myopic";
        case PolicyKind::AlwaysSwitch: return "always-switch";
        case PolicyKind::Threshold: return "threshold";
        case PolicyKind::Tabular: return "tabular";
    }
    return "?";
}

Action decide(const Policy& policy, const State& s) {
    if (s.a == 0) return Action::Skip;
    switch (policy.kind) {
        case PolicyKind::Myopic:
            return s.l == 0 ? Action::Switch : Action::Skip;
        case PolicyKind::AlwaysSwitch:
            return Action::Switch;
        case PolicyKind::Threshold: {
            if (s.l == 0) return Action::Switch;
            auto ec = epoch_coords(s, policy.threshold.params);
            if (!ec) return Action::Skip;
            return policy.threshold.allows_switch(ec->i, ec->j) ? Action::Switch : Action::Skip;
        }
        case PolicyKind::Tabular:
            return policy.tabular->action_clamped(s);
    }
    return Action::Skip;
}

TabularPolicy tabulate(const Policy& policy, const Params& params) {
    TabularPolicy tab;
    tab.params = params;
    tab.action_of.resize(params.n_states());
    for (int idx = 0; idx < params.n_states(); ++idx)
        tab.action_of[idx] = decide(policy, params.state_at(idx));
    return tab;
}

Policy parse_policy_spec(const std::string& spec) {
    if (spec == "myopic") return Policy::myopic();
    if (spec == "always-switch") return Policy::always_switch();
    if (spec.rfind("threshold:", 0) == 0) {
        auto j = load_json_file(spec.substr(10));
        return Policy::from_threshold(threshold_from_json(j));
    }
    if (spec.rfind("tabular:", 0) == 0) {
        auto j = load_json_file(spec.substr(8));
        return Policy::from_tabular(std::make_shared<TabularPolicy>(tabular_from_json(j)));
    }
    throw std::invalid_argument(
        "unknown policy spec '" + spec +
        "' (expected myopic | always-switch | threshold:<file.json> | tabular:<file.json>)");
}

}  // namespace aoisched
