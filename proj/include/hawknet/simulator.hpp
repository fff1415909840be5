#pragma once

#include "hawknet/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hawknet {

enum class SimBackend { Branching, Thinning };

struct SimConfig {
    double horizon{0.0};
    // When set, simulate() runs the plain process on [0, tau] and then the
    // intervened continuation on (tau, horizon].
    std::optional<InterventionPlan> intervention;
    std::uint64_t seed{0};
    std::uint64_t stream{0};
    SimBackend backend{SimBackend::Branching};
};

struct SimResult {
    std::vector<Event> events;
    Vector counts_post;     // events per node on (tau, horizon] (tau = 0 without intervention)
    Vector intensity_probe; // lambda_i(horizon) given the realised path
};

// Throws NonStationary for supercritical parameters (ValidatedParams already
// guarantees this) and InvalidArgument for a bad horizon.
[[nodiscard]] SimResult simulate(const ValidatedParams& params, const SimConfig& config);

// Continues a process observed on [0, plan.tau] up to config.horizon under the
// plan: each pre-tau event at an intervened node keeps its triggering power
// with probability p, background at intervened nodes is scaled by gamma, and
// post-tau events excite normally. Returned events lie in (tau, horizon].
// Throws InfeasiblePlan when the plan overspends its budget.
[[nodiscard]] SimResult simulate_intervened(const ValidatedParams& params, const History& history,
                                            const InterventionPlan& plan, const SimConfig& config);

struct McEstimate {
    Vector mean_counts;
    Vector mean_eta_T;
    Vector se_counts; // NaN when reps == 1
    Vector se_eta_T;
    double mean_total_counts{0.0};
    double se_total_counts{0.0};
    double mean_total_eta{0.0};
    double se_total_eta{0.0};
    std::size_t reps{0};
};

// Averages simulate_intervened over `reps` replications; replication r draws
// from Philox stream r of `seed`. Replications run on `threads` workers (0 =
// hardware concurrency) and are reduced in replication order.
[[nodiscard]] McEstimate mc_estimate(const ValidatedParams& params, const History& history,
                                     const InterventionPlan& plan, std::size_t reps, std::uint64_t seed,
                                     SimBackend backend = SimBackend::Branching, unsigned threads = 0);

} // namespace hawknet
