#include "doctest.h"

#include <cmath>

#include "aoisched/mdp.hpp"
#include "aoisched/policies.hpp"
#include "aoisched/renewal.hpp"

using namespace aoisched;

TEST_CASE("myopic closed form") {
    SUBCASE("deterministic arrivals") {
        EpochStats st = myopic_closed_form(1.0, 2);
        CHECK(st.mean_x == 2.0);
        CHECK(st.mean_x2 == 4.0);
        CHECK(st.avg_aoi == 3.0);
        CHECK(st.avg_aoi_per_slot() == 2.5);

        EpochStats st3 = myopic_closed_form(1.0, 3);
        CHECK(st3.mean_x == 3.0);
        CHECK(st3.mean_x2 == 9.0);
        CHECK(st3.avg_aoi == 4.5);
    }

    SUBCASE("geometric waiting") {
        EpochStats st = myopic_closed_form(0.5, 2);
        CHECK(st.mean_x == 3.0);
        CHECK(st.mean_x2 == 11.0);
        CHECK(st.avg_aoi == doctest::Approx(2.0 + 11.0 / 6.0).epsilon(1e-15));
        CHECK(st.avg_aoi_per_slot() == doctest::Approx(10.0 / 3.0).epsilon(1e-15));

        CHECK(myopic_closed_form(0.07, 10).mean_x ==
              doctest::Approx(1.0 / 0.07 + 9.0).epsilon(1e-14));
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(myopic_closed_form(0.0, 2), std::invalid_argument);
        CHECK_THROWS_AS(myopic_closed_form(0.5, 1), std::invalid_argument);
    }
}

TEST_CASE("eval_threshold_exact reduces to the closed form at K = 0") {
    for (double p : {0.05, 0.2, 0.5, 0.8, 1.0}) {
        for (int d : {2, 3, 4, 5, 6}) {
            ThresholdPolicy myo = ThresholdPolicy::myopic(Params(p, d));
            EpochStats a = eval_threshold_exact(myo, p, d);
            EpochStats b = myopic_closed_form(p, d);
            CHECK(std::abs(a.mean_x - b.mean_x) <= 1e-12 * b.mean_x);
            CHECK(std::abs(a.mean_x2 - b.mean_x2) <= 1e-12 * b.mean_x2);
            CHECK(std::abs(a.avg_aoi - b.avg_aoi) <= 1e-12 * b.avg_aoi);
        }
    }
}

TEST_CASE("enumeration conserves probability mass") {
    ThresholdPolicy tps[] = {
        ThresholdPolicy{Params(0.07, 10, 200), 4, {9, 8, 7, 6}},
        ThresholdPolicy{Params(0.3, 4), 3, {6, 5, 4}},
        ThresholdPolicy{Params(0.9, 3), 2, {4, 3}},
    };
    for (const auto& tp : tps) {
        RenewalDiagnostics diag;
        eval_threshold_exact(tp, tp.params.p, tp.params.d, 30, &diag);
        CHECK(std::abs(diag.total_mass - 1.0) <= 1e-12);
        CHECK(diag.leaves > 0);
    }
}

TEST_CASE("Jensen and floor invariants") {
    ThresholdPolicy tp{Params(0.25, 5), 3, {7, 6, 5}};
    EpochStats st = eval_threshold_exact(tp, 0.25, 5);
    CHECK(st.mean_x2 >= st.mean_x * st.mean_x);
    CHECK(st.avg_aoi >= 5.0);
}

TEST_CASE("enumeration cap guards the exponential window") {
    ThresholdPolicy tp{Params(0.1, 40, 500), 1, {31}};
    CHECK_THROWS_AS(eval_threshold_exact(tp, 0.1, 40), std::invalid_argument);
    CHECK_NOTHROW(eval_threshold_exact(tp, 0.1, 40, 31));
}

TEST_CASE("invalid threshold vectors are rejected") {
    ThresholdPolicy bad{Params(0.3, 4), 2, {4, 5}};
    CHECK_THROWS_AS(eval_threshold_exact(bad, 0.3, 4), std::invalid_argument);
}

TEST_CASE("reference thresholds at p = 0.07, d = 10 evaluate as expected") {
    // spot value computed independently with an epoch-replay script and
    // cross-checked below against the stationary oracle on a wide truncation
    ThresholdPolicy tp{Params(0.07, 10, 200), 4, {9, 8, 7, 6}};
    EpochStats st = eval_threshold_exact(tp, 0.07, 10);
    CHECK(st.avg_aoi_per_slot() == doctest::Approx(25.187587356).epsilon(1e-9));

    Params wide(0.07, 10, delta_m_for_eval(0.07, 10));
    TabularPolicy tab = tabulate(Policy::from_threshold(tp), wide);
    CHECK(std::abs(evaluate_stationary(tab) - st.avg_aoi_per_slot()) < 1e-9);
}

TEST_CASE("optimal thresholds trade a longer epoch for a smaller average") {
    const double p = 0.07;
    const int d = 10;
    ThresholdPolicy opt = extract_thresholds(solve_structured(Params(p, d, 200)));
    EpochStats o = eval_threshold_exact(opt, p, d);
    EpochStats m = myopic_closed_form(p, d);
    CHECK(o.avg_aoi < m.avg_aoi);
    // greedy epoch-minimization is not average-optimal: the optimal policy
    // runs longer epochs
    MESSAGE("E[X] optimal=", o.mean_x, " myopic=", m.mean_x);
    CHECK(o.mean_x > m.mean_x);
}
