#include "doctest.h"

#include <cstdio>
#include <string>

#include "aoisched/mdp.hpp"
#include "aoisched/policies.hpp"
#include "aoisched/serialize.hpp"

using namespace aoisched;

namespace {

ThresholdPolicy reference_thresholds() {
    return ThresholdPolicy{Params(0.07, 10, 200), 4, {9, 8, 7, 6}};
}

}  // namespace

TEST_CASE("myopic and always-switch decisions") {
    Policy myo = Policy::myopic();
    CHECK(decide(myo, State{20, 3, 1}) == Action::Skip);
    CHECK(decide(myo, State{20, 0, 1}) == Action::Switch);
    CHECK(decide(myo, State{20, 0, 0}) == Action::Skip);

    Policy alw = Policy::always_switch();
    CHECK(decide(alw, State{20, 3, 1}) == Action::Switch);
    CHECK(decide(alw, State{20, 0, 1}) == Action::Switch);
    CHECK(decide(alw, State{20, 3, 0}) == Action::Skip);
}

TEST_CASE("threshold decisions use epoch coordinates, boundary inclusive") {
    Policy thr = Policy::from_threshold(reference_thresholds());
    // i = 2, new arrival at j = 8: 8 <= tau_2 = 8 -> switch
    CHECK(decide(thr, State{17, 6, 1}) == Action::Switch);
    // i = 2, j = 9: 9 > tau_2 -> skip
    CHECK(decide(thr, State{18, 7, 1}) == Action::Skip);
    // i = 5 > K: skip at any j (here j = 6)
    CHECK(decide(thr, State{15, 1, 1}) == Action::Skip);
    // idle: transmit immediately
    CHECK(decide(thr, State{42, 0, 1}) == Action::Switch);
    // no derivable coordinates (unreachable state): total function, skips
    CHECK(decide(thr, State{12, 9, 1}) == Action::Skip);
}

TEST_CASE("every kind skips without an arrival and transmits when idle") {
    Params params(0.2, 4, 40);
    auto tab = std::make_shared<TabularPolicy>(solve_structured(params));
    Policy kinds[] = {Policy::myopic(), Policy::always_switch(),
                      Policy::from_threshold(extract_thresholds(*tab)),
                      Policy::from_tabular(tab)};
    for (const Policy& pol : kinds) {
        for (int delta = params.d; delta < params.delta_m; ++delta) {
            for (int l = 0; l < params.d; ++l)
                CHECK(decide(pol, State{delta, l, 0}) == Action::Skip);
            CHECK(decide(pol, State{delta, 0, 1}) == Action::Switch);
        }
    }
}

TEST_CASE("tabular and extracted threshold decide identically on reachable states") {
    Params params(0.2, 4, 40);
    auto tab = std::make_shared<TabularPolicy>(solve_structured(params));
    Policy t = Policy::from_tabular(tab);
    Policy q = Policy::from_threshold(extract_thresholds(*tab));
    int compared = 0;
    for (int delta = params.d; delta < params.delta_m; ++delta) {
        CHECK(decide(t, State{delta, 0, 1}) == decide(q, State{delta, 0, 1}));
        for (int l = 1; l < params.d; ++l) {
            State s{delta, l, 1};
            if (!epoch_coords(s, params)) continue;
            CHECK(decide(t, s) == decide(q, s));
            ++compared;
        }
    }
    CHECK(compared > 0);
}

TEST_CASE("tabulate materializes decisions over the whole space") {
    Params params(0.5, 3, 20);
    TabularPolicy tab = tabulate(Policy::myopic(), params);
    for (int idx = 0; idx < params.n_states(); ++idx) {
        State s = params.state_at(idx);
        Action expect = (s.a == 1 && s.l == 0) ? Action::Switch : Action::Skip;
        CHECK(tab.action_of[idx] == expect);
    }
    CHECK(std::isnan(tab.avg_cost));
}

TEST_CASE("policy spec strings") {
    CHECK(parse_policy_spec("myopic").kind == PolicyKind::Myopic);
    CHECK(parse_policy_spec("always-switch").kind == PolicyKind::AlwaysSwitch);
    CHECK_THROWS_AS(parse_policy_spec("greedy"), std::invalid_argument);
    CHECK_THROWS_AS(parse_policy_spec("threshold:/no/such/file.json"), std::invalid_argument);

    const std::string path = "test_policy_roundtrip.threshold.json";
    save_json_file(path, to_json(reference_thresholds()));
    Policy loaded = parse_policy_spec("threshold:" + path);
    CHECK(loaded.kind == PolicyKind::Threshold);
    CHECK(loaded.threshold.K == 4);
    CHECK(loaded.threshold.tau == std::vector<int>{9, 8, 7, 6});
    std::remove(path.c_str());
}

TEST_CASE("policy names for reports") {
    CHECK(Policy::myopic().name() == "myopic");
    CHECK(Policy::always_switch().name() == "always-switch");
    CHECK(Policy::from_threshold(reference_thresholds()).name() == "threshold");
}
