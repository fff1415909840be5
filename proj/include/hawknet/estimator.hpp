#pragma once

#include "hawknet/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hawknet {

struct EMInit {
    std::optional<double> omega; // default: 1 / mean inter-event time
    std::optional<double> sigma; // default: pooled sample spatial standard deviation
    std::optional<double> delta; // default: same as sigma
};

struct EMConfig {
    std::size_t max_iters{500};
    double tol{1e-8}; // relative log-likelihood change
    EMInit init{};
    // When non-empty, the KDE bandwidth is not updated by EM but chosen from
    // these candidates by held-out log-likelihood on the last
    // `holdout_fraction` of the window.
    std::vector<double> bandwidth_grid{};
    double holdout_fraction{0.25};
};

struct ResponsibilityDigest {
    double mean_background{0.0};   // average probability that an event is a background event
    double triggered_fraction{0.0}; // share of events more likely triggered than background
    double max_row_error{0.0};     // max |sum of responsibilities - 1| over events
};

struct EMFit {
    NetworkParams params; // canonical convention, WeightedKde background anchored at the events
    Matrix a_normalized;  // influence under the unit-mass kernel omega exp(-omega t)
    Matrix node_beta;     // n x n background weights b(u, v), shared by all anchors at node v
    Matrix beta;          // n x N expansion beta(u, k) = b(u, node(k))
    double delta{0.0};
    std::vector<double> log_lik_trace;
    ResponsibilityDigest digest;
    std::size_t iterations{0};
    bool converged{false};
};

// Expectation-maximization over the latent branching structure. Parent
// probabilities use the unit-mass temporal kernel; the returned params are
// canonicalized (A = omega * a_normalized). a_normalized(i, j) is the
// influence of node j on node i. Throws TooFewEvents (< 2 events) and
// NoImprovement if the log-likelihood drops by more than 1e-8 (relative).
[[nodiscard]] EMFit em_fit(const History& events, std::size_t n, const EMConfig& config = {});

struct LikelihoodOptions {
    // Skip anchor k when evaluating the KDE background at event k (anchors
    // must then be the events themselves, in order).
    bool exclude_self_anchor{false};
    // Only events after this time contribute log-intensity terms, and the
    // compensator covers (window_start, horizon].
    double window_start{0.0};
};

// Point-process log-likelihood sum_k log lambda(t_k, x_k, y_k) minus the
// compensator over the window. Spatial kernels integrate over the whole plane;
// temporal integrals are exact on the finite window. Throws NonFinite when an
// event has zero intensity.
[[nodiscard]] double log_likelihood(const History& events, const NetworkParams& params,
                                    const LikelihoodOptions& options = {});

} // namespace hawknet
