#pragma once

#include "hawknet/model.hpp"
#include "hawknet/propagators.hpp"

namespace hawknet {

// Per-node sum of decayed triggering contributions of the pre-tau events:
//   S_i(tau) = sum_{e at node i, t_e < tau} exp(-omega (tau - t_e)).
struct StateVector {
    Vector s_tau;
    double tau{0.0};
};

struct ExpectationResult {
    Vector eta_e;           // background-descendant expected intensity
    Vector eta_h;           // history-descendant expected intensity
    Vector eta;             // eta_e + eta_h
    Vector expected_counts; // expected events on [tau, t]
    double at_time{0.0};
};

// Which time argument the background propagators receive. Shifted (default)
// uses t - tau, which solves the post-intervention integral equation started
// at tau. Literal feeds the absolute time t to Psi and Gamma, for side-by-side
// comparison only.
enum class TimeOrigin { Shifted, Literal };

// Throws EventAfterTau when the history contains an event later than tau.
[[nodiscard]] StateVector state_at(const History& history, double tau, double omega, std::size_t n);

// eta_e = Psi(t - tau) (mu o rho), eta_h = Xi(t - tau) A (nu o S(tau)).
// Throws TimeBeforeTau unless t > tau.
[[nodiscard]] ExpectationResult eta_at(const ValidatedParams& params, const InterventionPlan& plan,
                                       const StateVector& state, double t,
                                       TimeOrigin origin = TimeOrigin::Shifted);

// E = Gamma(t - tau) (mu o rho) + Upsilon(t - tau) A (nu o S(tau)).
// Throws TimeBeforeTau unless t >= tau.
[[nodiscard]] ExpectationResult expected_counts(const ValidatedParams& params, const InterventionPlan& plan,
                                                const StateVector& state, double t,
                                                TimeOrigin origin = TimeOrigin::Shifted);

// Both of the above at once. `shifted` must hold the propagators at t - tau;
// `absolute` the propagators at t (only read in Literal mode).
[[nodiscard]] ExpectationResult evaluate(const ValidatedParams& params, const InterventionPlan& plan,
                                         const StateVector& state, const PropagatorSet& shifted);
[[nodiscard]] ExpectationResult evaluate(const ValidatedParams& params, const InterventionPlan& plan,
                                         const StateVector& state, double t,
                                         TimeOrigin origin = TimeOrigin::Shifted);

struct Totals {
    double eta_total{0.0};
    double en_total{0.0};
};

[[nodiscard]] Totals totals(const ExpectationResult& result);

struct Reduction {
    double rate_pct{0.0};
    double events_pct{0.0};
};

// Percentage reductions relative to the no-intervention baseline. Throws
// ZeroBaseline when a baseline total is not positive.
[[nodiscard]] Reduction reduction_metrics(const ExpectationResult& with_plan, const ExpectationResult& baseline);
[[nodiscard]] Reduction reduction_metrics(const Totals& with_plan, const Totals& baseline);

struct Sensitivity {
    Vector d_eta_d_gamma;
    Vector d_eta_d_p;
    Vector d_en_d_gamma;
    Vector d_en_d_p;
};

// Partial derivatives of eta(t; u) and E[N(t; u)] in gamma and p; each is
// componentwise nonnegative for A >= 0.
[[nodiscard]] Sensitivity sensitivity(const ValidatedParams& params, const InterventionPlan& plan,
                                      const StateVector& state, double t);

} // namespace hawknet
