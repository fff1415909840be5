#pragma once

#include "hawknet/estimator.hpp"
#include "hawknet/expectation.hpp"
#include "hawknet/model.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hawknet {

enum class Strategy { ExactRate, ExactInvasion, Mu, Count };

inline constexpr std::array<Strategy, 4> kStrategies{Strategy::ExactRate, Strategy::ExactInvasion, Strategy::Mu,
                                                     Strategy::Count};

[[nodiscard]] std::string_view to_string(Strategy s);
// Throws InvalidArgument for unknown names.
[[nodiscard]] Strategy strategy_from_string(std::string_view name);

// Random network generator for the synthetic experiments.
struct SamplerSpec {
    double mu_lo{0.01};
    double mu_hi{0.05};
    double a_scale{1.5}; // A(i, j) ~ a_scale * U(0, 1)
    double omega{0.2};
    double sigma0{0.25};
    double sigma{0.1};
    // When spectral_radius(A) >= omega, A is rescaled to this branching ratio.
    double target_branching{0.9};
};

// Draws one network; deterministic in (seed, stream).
[[nodiscard]] ValidatedParams sample_network(std::size_t n, const SamplerSpec& spec, std::uint64_t seed,
                                             std::uint64_t stream);

struct SweepConfig {
    std::size_t n{200};
    std::size_t reps{100};
    double tau{10.0};
    double horizon{20.0};
    std::vector<double> p_grid{0.1, 0.3};
    std::vector<double> gamma_grid{0.6, 0.8, 1.0};
    std::vector<double> q_grid{10, 20, 30, 40, 50, 60, 70, 80, 90};
    double base_cost{1.0};
    SamplerSpec sampler{};
    std::uint64_t master_seed{1};
    // Draw one network for all replications instead of one per replication.
    bool fixed_network{false};
    unsigned threads{0}; // 0 = hardware concurrency
};

// Throws InvalidArgument.
void check(const SweepConfig& config);

struct SweepRow {
    Strategy strategy{Strategy::ExactRate};
    double p{0.0};
    double gamma{0.0};
    double q{0.0};
    double mean_rate_reduction_pct{0.0};
    double mean_event_reduction_pct{0.0};
    double stderr_rate{0.0};   // 0 when reps == 1
    double stderr_events{0.0};
};

struct SweepResult {
    // Ordered by p, gamma, q, strategy (grid order).
    std::vector<SweepRow> rows;
    std::size_t reps{0};
};

// Per replication: sample a network, simulate the plain process on [0, tau],
// set costs c_i = base_cost + N_i(tau) and budget sum(c) q / 100, plan with
// every strategy and score the plans with the analytical totals at horizon.
// Replications run in parallel; the reduction is in replication order, so the
// result depends only on the config.
[[nodiscard]] SweepResult run_sweep(const SweepConfig& config);

struct CheckOutcome {
    std::string name;
    bool pass{false};
    std::string detail;
};

// Dominance of the exact strategies over both heuristics, monotonicity in q,
// gamma and p (all within 3 pooled standard errors), and where the largest
// exact-vs-heuristic gap sits along q.
[[nodiscard]] std::vector<CheckOutcome> sweep_checks(const SweepResult& result);

// Writes sweep.csv, series_p{p}_g{gamma}.csv and summary.md. Throws IoFailure.
void emit_report(const SweepResult& result, const std::filesystem::path& out_dir);
[[nodiscard]] SweepResult read_sweep_csv(const std::filesystem::path& path);

struct LaConfig {
    double tau{7.0};
    double horizon_factor{4.3};
    double base_cost{1.0};
    std::vector<std::array<double, 2>> settings{{0.1, 1.0}, {0.1, 0.75}}; // (p, gamma)
    std::vector<double> q_grid{10, 20, 30, 40, 50, 60, 70, 80, 90};
    EMConfig em{};
};

struct LaRow {
    double q{0.0};
    double budget{0.0};
    std::array<Reduction, 4> reduction{}; // indexed like kStrategies
    std::array<std::vector<std::size_t>, 4> intervened{};
};

struct LaTable {
    double p{0.0};
    double gamma{0.0};
    std::vector<LaRow> rows;
};

struct LaResult {
    EMFit fit;
    double branching_ratio{0.0};
    double tau{0.0};
    double horizon{0.0};
    std::vector<std::string> area_names;
    std::vector<LaTable> tables;
};

// Fits the model on the history over [0, tau] and tabulates every strategy per
// budget. Throws EventAfterTau and whatever fitting or validation raises.
[[nodiscard]] LaResult run_la_pipeline(const History& history, const std::vector<std::string>& area_names,
                                       const LaConfig& config = {});

// In every row the matching exact strategy is at least each heuristic.
[[nodiscard]] bool optimal_dominates(const LaTable& table, double slack = 1e-9);

// Writes la_params.json, la_tables.md, la_{rate,events}_p{p}_g{gamma}.csv and
// la_sets.csv. Throws IoFailure.
void emit_la_report(const LaResult& result, const std::filesystem::path& out_dir);

} // namespace hawknet
