#include "hawknet/expectation.hpp"

#include "hawknet/error.hpp"

#include <cmath>
#include <string>

namespace hawknet {

namespace {

void check_state(const ValidatedParams& params, const InterventionPlan& plan, const StateVector& state) {
    plan.check(params.n());
    if (state.s_tau.size() != params.n()) throw Error(ErrorCode::InvalidArgument, "state vector has wrong length");
    if (std::abs(state.tau - plan.tau) > 1e-12 * std::max(1.0, std::abs(plan.tau))) {
        throw Error(ErrorCode::InvalidArgument, "state was computed at a different tau than the plan");
    }
}

Vector complement(const std::vector<std::uint8_t>& u) {
    Vector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = 1.0 - u[i];
    return out;
}

void add_into(Vector& acc, const Vector& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

} // namespace

StateVector state_at(const History& history, double tau, double omega, std::size_t n) {
    StateVector out;
    out.tau = tau;
    out.s_tau.assign(n, 0.0);
    for (const Event& e : history.events) {
        if (e.node >= n) throw Error(ErrorCode::InvalidArgument, "event node index out of range");
        if (e.t > tau) throw Error(ErrorCode::EventAfterTau, "event at t=" + std::to_string(e.t) + " after tau");
        if (e.t < tau) out.s_tau[e.node] += std::exp(-omega * (tau - e.t));
    }
    return out;
}

ExpectationResult evaluate(const ValidatedParams& params, const InterventionPlan& plan, const StateVector& state,
                           const PropagatorSet& shifted) {
    check_state(params, plan, state);
    const Vector background = hadamard(params.mu(), plan.rho());
    const Vector triggered = params.A() * hadamard(plan.nu(), state.s_tau);

    ExpectationResult out;
    out.at_time = plan.tau + shifted.at_time;
    out.eta_e = shifted.psi_t * background;
    out.eta_h = shifted.xi_t * triggered;
    out.eta = out.eta_e;
    add_into(out.eta, out.eta_h);
    out.expected_counts = shifted.gamma_t * background;
    add_into(out.expected_counts, shifted.upsilon_t * triggered);
    return out;
}

ExpectationResult evaluate(const ValidatedParams& params, const InterventionPlan& plan, const StateVector& state,
                           double t, TimeOrigin origin) {
    if (t < plan.tau) throw Error(ErrorCode::TimeBeforeTau, "evaluation time precedes tau");
    const PropagatorSet shifted = propagators_at(params, t - plan.tau);
    ExpectationResult out = evaluate(params, plan, state, shifted);
    if (origin == TimeOrigin::Literal) {
        const PropagatorSet absolute = propagators_at(params, t);
        const Vector background = hadamard(params.mu(), plan.rho());
        out.eta_e = absolute.psi_t * background;
        out.eta = out.eta_e;
        add_into(out.eta, out.eta_h);
        out.expected_counts = absolute.gamma_t * background;
        add_into(out.expected_counts, shifted.upsilon_t * (params.A() * hadamard(plan.nu(), state.s_tau)));
    }
    return out;
}

ExpectationResult eta_at(const ValidatedParams& params, const InterventionPlan& plan, const StateVector& state,
                         double t, TimeOrigin origin) {
    if (!(t > plan.tau)) throw Error(ErrorCode::TimeBeforeTau, "eta is defined for t > tau only");
    ExpectationResult out = evaluate(params, plan, state, t, origin);
    out.expected_counts.clear();
    return out;
}

ExpectationResult expected_counts(const ValidatedParams& params, const InterventionPlan& plan,
                                  const StateVector& state, double t, TimeOrigin origin) {
    if (t < plan.tau) throw Error(ErrorCode::TimeBeforeTau, "counts are defined for t >= tau only");
    ExpectationResult full = evaluate(params, plan, state, t, origin);
    ExpectationResult out;
    out.at_time = full.at_time;
    out.expected_counts = std::move(full.expected_counts);
    return out;
}

Totals totals(const ExpectationResult& result) { return {sum(result.eta), sum(result.expected_counts)}; }

Reduction reduction_metrics(const Totals& with_plan, const Totals& baseline) {
    if (!(baseline.eta_total > 0.0) || !(baseline.en_total > 0.0)) {
        throw Error(ErrorCode::ZeroBaseline, "baseline totals must be positive");
    }
    return {(1.0 - with_plan.eta_total / baseline.eta_total) * 100.0,
            (1.0 - with_plan.en_total / baseline.en_total) * 100.0};
}

Reduction reduction_metrics(const ExpectationResult& with_plan, const ExpectationResult& baseline) {
    return reduction_metrics(totals(with_plan), totals(baseline));
}

Sensitivity sensitivity(const ValidatedParams& params, const InterventionPlan& plan, const StateVector& state,
                        double t) {
    if (!(t > plan.tau)) throw Error(ErrorCode::TimeBeforeTau, "sensitivity is defined for t > tau only");
    check_state(params, plan, state);
    const PropagatorSet prop = propagators_at(params, t - plan.tau);
    const Vector off = complement(plan.u);
    const Vector background = hadamard(params.mu(), off);
    const Vector triggered = params.A() * hadamard(off, state.s_tau);
    return {prop.psi_t * background, prop.xi_t * triggered, prop.gamma_t * background, prop.upsilon_t * triggered};
}

} // namespace hawknet
