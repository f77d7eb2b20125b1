#include "aoisched/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace aoisched {

namespace {

/// Compensated (Kahan) accumulator.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

/// Probability-weighted epoch-length moments of a subtree of arrival patterns.
struct Moments {
    double mass = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
};

/// Exact enumeration of the arrival patterns over slots 2..tau_1, factored by
/// the Markov state (current slot j, in-service arrival slot i). Entry (j, i)
/// holds the moments of the final epoch length given that slots >= j are
/// still undrawn. Identical to the naive 2^window pattern sum, term by term.
struct PatternTable {
    int width;  // rows j = 2..tau_1+1, columns i = 1..j-1
    std::vector<Moments> cells;
    long long leaves = 0;

    Moments& at(int j, int i) { return cells[static_cast<std::size_t>(j) * width + i]; }

    PatternTable(const ThresholdPolicy& tp, double p, int d, int tau1) : width(tau1 + 2) {
        cells.resize(static_cast<std::size_t>(tau1 + 2) * width);
        const double q = 1.0 - p;
        for (int j = tau1 + 1; j >= 2; --j) {
            for (int i = 1; i < j; ++i) {
                Moments& m = at(j, i);
                const int completion = i + d - 1;
                // epoch settled: update completed, arrivals exhausted for this
                // i, or no slot >= j can still satisfy the switch rule
                if (j > completion || i > tp.K || j > tp.tau[i - 1]) {
                    const double x = static_cast<double>(completion);
                    m = {1.0, x, x * x};
                    ++leaves;
                    continue;
                }
                const int ni = tp.allows_switch(i, j) ? j : i;
                const Moments& skip = at(j + 1, i);
                const Moments& sw = at(j + 1, ni);
                m.mass = q * skip.mass + p * sw.mass;
                m.m1 = q * skip.m1 + p * sw.m1;
                m.m2 = q * skip.m2 + p * sw.m2;
            }
        }
    }

    /// Epoch moments given the first arrival lands at slot x1 (x1 <= K <= tau_1).
    Moments from_first_arrival(int x1) { return at(x1 + 1, x1); }
};

}  // namespace

EpochStats myopic_closed_form(double p, int d) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("myopic_closed_form: bad p");
    if (d < 2) throw std::invalid_argument("myopic_closed_form: bad d");
    const double ew = 1.0 / p;
    const double ew2 = (2.0 - p) / (p * p);
    EpochStats st;
    st.mean_x = ew + d - 1;
    st.mean_x2 = ew2 + 2.0 * (d - 1) * ew + static_cast<double>(d - 1) * (d - 1);
    st.avg_aoi = d + st.mean_x2 / (2.0 * st.mean_x);
    return st;
}

EpochStats eval_threshold_exact(const ThresholdPolicy& tp, double p, int d, int enum_cap,
                                RenewalDiagnostics* diag) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("eval_threshold_exact: bad p");
    if (d < 2) throw std::invalid_argument("eval_threshold_exact: bad d");
    tp.validate();
    const int K = tp.K;
    const int tau1 = K > 0 ? tp.tau[0] : 0;
    if (tau1 > enum_cap)
        throw std::invalid_argument("eval_threshold_exact: tau_1 = " + std::to_string(tau1) +
                                    " exceeds the enumeration cap " + std::to_string(enum_cap) +
                                    " (window blowup; use the Monte Carlo simulator)");

    const double q = 1.0 - p;
    Kahan mass, m1, m2;
    long long leaves = 0;

    // First arrival at x1 <= K: replay the switching window exactly.
    if (K > 0) {
        PatternTable table(tp, p, d, tau1);
        double px1 = p;  // P[W = x1] = q^(x1-1) p
        for (int x1 = 1; x1 <= K; ++x1) {
            Moments m = table.from_first_arrival(x1);
            mass.add(px1 * m.mass);
            m1.add(px1 * m.m1);
            m2.add(px1 * m.m2);
            px1 *= q;
        }
        leaves = table.leaves;
    }

    // First arrival after K: no switch can ever occur, X = x1 + d - 1.
    // Memorylessness gives the tail moments in closed form.
    const double tail_mass = std::pow(q, K);
    const double ew = 1.0 / p;
    const double ew2 = (2.0 - p) / (p * p);
    const double base = K + d - 1;
    mass.add(tail_mass);
    m1.add(tail_mass * (base + ew));
    m2.add(tail_mass * (base * base + 2.0 * base * ew + ew2));

    if (diag) {
        diag->total_mass = mass.sum;
        diag->leaves = leaves;
    }

    EpochStats st;
    st.mean_x = m1.sum;
    st.mean_x2 = m2.sum;
    st.avg_aoi = d + st.mean_x2 / (2.0 * st.mean_x);
    return st;
}

}  // namespace aoisched
