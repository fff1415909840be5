#pragma once

#include "hawknet/expectation.hpp"
#include "hawknet/model.hpp"
#include "hawknet/propagators.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hawknet {

enum class ObjectiveKind { Rate, Invasion };

// Affine objective in u: value(u) = constant + sum_i weights[i] * u[i].
// weights[i] is what keeping node i un-intervened costs in expected total
// intensity at T (Rate) or expected total events on [tau, T] (Invasion).
struct Objective {
    Vector weights;
    double constant{0.0};
    ObjectiveKind kind{ObjectiveKind::Rate};

    [[nodiscard]] double value(std::span<const std::uint8_t> u) const;
    [[nodiscard]] double baseline() const; // value at u = 1
};

// p, gamma, tau and horizon are read from `plan`; its u, costs and budget are ignored.
[[nodiscard]] Objective build_objective(ObjectiveKind kind, const ValidatedParams& params,
                                        const InterventionPlan& plan, const StateVector& state);
// Same with propagators precomputed at horizon - tau.
[[nodiscard]] Objective build_objective(ObjectiveKind kind, const ValidatedParams& params,
                                        const InterventionPlan& plan, const StateVector& state,
                                        const PropagatorSet& shifted);

enum class PlanMethod { Exact, LpRelax, HeuristicMu, HeuristicCount };
enum class HeuristicKind { MuBased, CountBased };

struct PlanSolution {
    std::vector<std::uint8_t> u;
    double objective_value{0.0};
    double spent{0.0};
    PlanMethod method{PlanMethod::Exact};
    // LP relaxation value before rounding; set by solve_lp_relax only.
    std::optional<double> relaxed_objective;

    [[nodiscard]] std::vector<std::size_t> intervened() const;
};

// Globally optimal binary u for min value(u) s.t. sum_i (1 - u_i) c_i <= budget.
// Integer costs run a dynamic program over the budget; other costs run
// depth-first branch and bound with the LP bound. Ties go to the smaller spend,
// then to the lexicographically smallest set of intervened indices.
// Throws BudgetNegative.
[[nodiscard]] PlanSolution solve_exact(const Objective& obj, std::span<const double> costs, double budget);

// LP relaxation 0 <= u_i <= 1 solved by the greedy ratio rule; the one
// fractional node is rounded to not-intervened and the leftover budget is then
// filled greedily in ratio order with nodes that still fit.
[[nodiscard]] PlanSolution solve_lp_relax(const Objective& obj, std::span<const double> costs, double budget);

// Ranks nodes by background mass (MuBased) or by events observed up to tau
// (CountBased), descending with ties to the lower index, and intervenes down
// the list, skipping nodes whose cost no longer fits. objective_value is NaN
// until scored with score().
[[nodiscard]] PlanSolution heuristic_plan(HeuristicKind kind, const ValidatedParams& params, const History& history,
                                          std::span<const double> costs, double budget);
[[nodiscard]] PlanSolution heuristic_plan(std::span<const double> scores, std::span<const double> costs, double budget,
                                          PlanMethod method);

[[nodiscard]] PlanSolution score(PlanSolution solution, const Objective& obj);

[[nodiscard]] std::string_view to_string(PlanMethod method);

// FNV-1a over the IEEE-754 bytes of the weights and constant, as 16 hex digits.
[[nodiscard]] std::string weights_digest(const Objective& obj);

// Plan record {method, u, spent, budget, objective_value, weights_digest}.
[[nodiscard]] nlohmann::json plan_to_json(const PlanSolution& solution, const Objective& obj, double budget);

} // namespace hawknet
