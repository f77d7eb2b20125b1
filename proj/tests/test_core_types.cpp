#include "doctest.h"

#include <set>

#include "aoisched/core_types.hpp"
#include "aoisched/mdp.hpp"
#include "aoisched/policies.hpp"
#include "aoisched/serialize.hpp"

using namespace aoisched;

TEST_CASE("Params validation and defaults") {
    CHECK_THROWS_AS(Params(0.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(Params(1.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(Params(0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(Params(0.5, 4, 4), std::invalid_argument);

    CHECK(Params::default_delta_m(0.07, 10) == 100);
    CHECK(Params::default_delta_m(0.5, 2) == 20);
    CHECK(Params::default_delta_m(0.05, 6) == 86);

    Params p(0.07, 10);
    CHECK(p.delta_m == 100);
    CHECK(p.n_delta() == 91);
    CHECK(p.n_states() == 91 * 10 * 2);
}

TEST_CASE("state indexing round-trips over the whole space") {
    Params params(0.3, 4, 25);
    for (int idx = 0; idx < params.n_states(); ++idx) {
        State s = params.state_at(idx);
        CHECK(params.state_index(s) == idx);
        CHECK(s.delta >= params.d);
        CHECK(s.delta <= params.delta_m);
        CHECK(s.l >= 0);
        CHECK(s.l < params.d);
    }
}

TEST_CASE("epoch_coords on known points") {
    Params p10(0.07, 10, 200);
    auto c = epoch_coords(State{18, 3, 1}, p10);
    REQUIRE(c.has_value());
    CHECK(c->i == 6);
    CHECK(c->j == 9);

    auto first = epoch_coords(State{11, 1, 1}, p10);
    REQUIRE(first.has_value());
    CHECK(first->i == 1);
    CHECK(first->j == 2);

    Params p3(0.3, 3, 50);
    auto c3 = epoch_coords(State{7, 2, 0}, p3);
    REQUIRE(c3.has_value());
    CHECK(c3->i == 3);
    CHECK(c3->j == 5);
}

TEST_CASE("epoch_coords rejects idle, boundary and unreachable states") {
    Params params(0.2, 5, 60);
    CHECK_FALSE(epoch_coords(State{20, 0, 1}, params).has_value());
    CHECK_FALSE(epoch_coords(State{60, 2, 1}, params).has_value());
    // delta = d and l >= 1 would put the in-service arrival before the epoch
    CHECK_FALSE(epoch_coords(State{5, 1, 1}, params).has_value());
    CHECK_FALSE(epoch_coords(State{6, 3, 1}, params).has_value());
}

TEST_CASE("epoch_coords is injective and invertible on its domain") {
    Params params(0.2, 5, 40);
    std::set<std::pair<int, int>> seen;
    for (int delta = params.d; delta < params.delta_m; ++delta) {
        for (int l = 1; l < params.d; ++l) {
            auto c = epoch_coords(State{delta, l, 1}, params);
            if (!c) continue;
            CHECK(c->i >= 1);
            CHECK(c->j > c->i);
            CHECK(seen.insert({c->i, c->j}).second);
            // round trip
            State back{params.d + c->j - 1, c->j - c->i, 1};
            CHECK(back == State{delta, l, 1});
        }
    }
    CHECK(!seen.empty());
}

TEST_CASE("ThresholdPolicy validation") {
    Params params(0.07, 10, 200);
    ThresholdPolicy ok{params, 4, {9, 8, 7, 6}};
    CHECK_NOTHROW(ok.validate());

    ThresholdPolicy myo = ThresholdPolicy::myopic(params);
    CHECK(myo.K == 0);
    CHECK_NOTHROW(myo.validate());

    ThresholdPolicy increasing{params, 3, {7, 8, 6}};
    CHECK_THROWS_AS(increasing.validate(), std::invalid_argument);

    ThresholdPolicy below_i{params, 3, {9, 8, 2}};
    CHECK_THROWS_AS(below_i.validate(), std::invalid_argument);

    ThresholdPolicy wrong_len{params, 2, {9, 8, 7}};
    CHECK_THROWS_AS(wrong_len.validate(), std::invalid_argument);
}

TEST_CASE("JSON round-trips") {
    Params params(0.07, 10, 200);

    SUBCASE("params") {
        Params back = params_from_json(to_json(params));
        CHECK(back.p == params.p);
        CHECK(back.d == params.d);
        CHECK(back.delta_m == params.delta_m);
    }

    SUBCASE("threshold policy keeps the pinned field names") {
        ThresholdPolicy tp{params, 4, {9, 8, 7, 6}};
        Json j = to_json(tp);
        CHECK(j.contains("p"));
        CHECK(j.contains("d"));
        CHECK(j.contains("delta_m"));
        CHECK(j.at("K") == 4);
        CHECK(j.at("tau") == Json::array({9, 8, 7, 6}));
        ThresholdPolicy back = threshold_from_json(j);
        CHECK(back.K == tp.K);
        CHECK(back.tau == tp.tau);
    }

    SUBCASE("tabular policy stores only switch states") {
        Params small(0.5, 3, 12);
        TabularPolicy tab = tabulate(Policy::myopic(), small);
        Json j = to_json(tab);
        CHECK(j.at("avg_cost").is_null());
        for (const auto& e : j.at("switch_states")) CHECK(e.size() == 2);
        TabularPolicy back = tabular_from_json(j);
        CHECK(back.action_of == tab.action_of);
        CHECK(std::isnan(back.avg_cost));
    }

    SUBCASE("tabular rejects out-of-range switch states") {
        Json j = to_json(Params(0.5, 3, 12));
        j["avg_cost"] = nullptr;
        j["switch_states"] = Json::array({Json::array({13, 1})});
        CHECK_THROWS_AS(tabular_from_json(j), std::invalid_argument);
    }
}

TEST_CASE("action_clamped clamps the AoI coordinate") {
    Params params(0.5, 2, 10);
    TabularPolicy tab = tabulate(Policy::myopic(), params);
    CHECK(tab.action_clamped(State{10, 0, 1}) == Action::Switch);
    CHECK(tab.action_clamped(State{999, 0, 1}) == Action::Switch);
    CHECK(tab.action_clamped(State{999, 1, 1}) == Action::Skip);
}
