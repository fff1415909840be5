#include "hawknet/planner.hpp"

#include "hawknet/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

namespace hawknet {

namespace {

constexpr std::size_t kMaxDpCells = 40'000'000;

void check_inputs(const Objective& obj, std::span<const double> costs, double budget) {
    if (!(budget >= 0.0)) throw Error(ErrorCode::BudgetNegative, "budget must be nonnegative");
    if (costs.size() != obj.weights.size()) throw Error(ErrorCode::InvalidArgument, "cost vector has wrong length");
    for (double c : costs) {
        if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "costs must be positive and finite");
    }
    for (double w : obj.weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidArgument, "objective weights must be >= 0");
    }
}

PlanSolution finish(std::vector<std::uint8_t> u, const Objective& obj, std::span<const double> costs, PlanMethod method) {
    PlanSolution out;
    out.spent = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] == 0) out.spent += costs[i];
    out.objective_value = obj.value(u);
    out.u = std::move(u);
    out.method = method;
    return out;
}

// Decreasing w/c, ties to the lower index; zero-weight nodes are dropped.
std::vector<std::size_t> ratio_order(const Objective& obj, std::span<const double> costs) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < costs.size(); ++i)
        if (obj.weights[i] > 0.0) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return obj.weights[a] * costs[b] > obj.weights[b] * costs[a];
    });
    return order;
}

struct Cell {
    double value{0.0};
    double spent{0.0};
};

bool better(const Cell& a, const Cell& b) { return a.value > b.value || (a.value == b.value && a.spent < b.spent); }

std::vector<std::uint8_t> knapsack_dp(const Objective& obj, std::span<const double> costs, std::size_t capacity) {
    const std::size_t n = costs.size();
    const std::size_t width = capacity + 1;
    std::vector<std::size_t> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<std::size_t>(costs[i]);

    // table[i * width + b]: best removal using items i..n-1 within budget b.
    std::vector<Cell> table((n + 1) * width);
    for (std::size_t i = n; i-- > 0;) {
        const Cell* next = table.data() + (i + 1) * width;
        Cell* here = table.data() + i * width;
        for (std::size_t b = 0; b < width; ++b) {
            Cell best = next[b];
            if (c[i] <= b && obj.weights[i] > 0.0) {
                const Cell take{obj.weights[i] + next[b - c[i]].value, costs[i] + next[b - c[i]].spent};
                if (better(take, best)) best = take;
            }
            here[b] = best;
        }
    }

    std::vector<std::uint8_t> u(n, 1);
    std::size_t b = capacity;
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] > b || obj.weights[i] <= 0.0) continue;
        const Cell& next_take = table[(i + 1) * width + (b - c[i])];
        const Cell take{obj.weights[i] + next_take.value, costs[i] + next_take.spent};
        const Cell& here = table[i * width + b];
        if (take.value == here.value && take.spent == here.spent) {
            u[i] = 0;
            b -= c[i];
        }
    }
    return u;
}

class BranchAndBound {
public:
    BranchAndBound(const Objective& obj, std::span<const double> costs, double budget)
        : obj_(obj), costs_(costs), budget_(budget), order_(ratio_order(obj, costs)),
          chosen_(costs.size(), false), best_set_(costs.size(), false) {}

    std::vector<std::uint8_t> run() {
        search(0, 0.0, 0.0);
        std::vector<std::uint8_t> u(costs_.size(), 1);
        for (std::size_t i = 0; i < u.size(); ++i)
            if (best_set_[i]) u[i] = 0;
        return u;
    }

private:
    double bound(std::size_t depth, double value, double spent) const {
        double room = budget_ - spent;
        for (std::size_t k = depth; k < order_.size() && room > 0.0; ++k) {
            const std::size_t i = order_[k];
            if (costs_[i] <= room) {
                value += obj_.weights[i];
                room -= costs_[i];
            } else {
                value += obj_.weights[i] * room / costs_[i];
                room = 0.0;
            }
        }
        return value;
    }

    bool lexicographically_smaller(const std::vector<bool>& a, const std::vector<bool>& b) const {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) return a[i];
        }
        return false;
    }

    void consider(double value, double spent) {
        const bool improves = value > best_value_ ||
                              (value == best_value_ && (spent < best_spent_ ||
                                                        (spent == best_spent_ && lexicographically_smaller(chosen_, best_set_))));
        if (improves) {
            best_value_ = value;
            best_spent_ = spent;
            best_set_ = chosen_;
        }
    }

    void search(std::size_t depth, double value, double spent) {
        if (depth == order_.size()) {
            consider(value, spent);
            return;
        }
        const double slack = 1e-12 * std::max(1.0, std::abs(best_value_));
        if (bound(depth, value, spent) < best_value_ - slack) return;
        const std::size_t i = order_[depth];
        if (spent + costs_[i] <= budget_) {
            chosen_[i] = true;
            search(depth + 1, value + obj_.weights[i], spent + costs_[i]);
            chosen_[i] = false;
        }
        search(depth + 1, value, spent);
    }

    const Objective& obj_;
    std::span<const double> costs_;
    double budget_;
    std::vector<std::size_t> order_;
    std::vector<bool> chosen_;
    std::vector<bool> best_set_;
    double best_value_{-1.0};
    double best_spent_{std::numeric_limits<double>::infinity()};
};

} // namespace

double Objective::value(std::span<const std::uint8_t> u) const {
    if (u.size() != weights.size()) throw Error(ErrorCode::InvalidArgument, "intervention vector has wrong length");
    double v = constant;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0) v += weights[i];
    return v;
}

double Objective::baseline() const { return constant + sum(weights); }

Objective build_objective(ObjectiveKind kind, const ValidatedParams& params, const InterventionPlan& plan,
                          const StateVector& state, const PropagatorSet& shifted) {
    const std::size_t n = params.n();
    if (state.s_tau.size() != n) throw Error(ErrorCode::InvalidArgument, "state vector has wrong length");
    const bool rate = kind == ObjectiveKind::Rate;
    const Matrix& background_prop = rate ? shifted.psi_t : shifted.gamma_t;
    const Matrix& history_prop = rate ? shifted.xi_t : shifted.upsilon_t;
    const Vector ones(n, 1.0);
    // Column sums 1^T P and 1^T Q A.
    const Vector bg_colsum = left_multiply(ones, background_prop);
    const Vector hist_colsum = left_multiply(left_multiply(ones, history_prop), params.A());
    const Vector& mu = params.mu();

    Objective obj;
    obj.kind = kind;
    obj.weights.resize(n);
    double bg_total = 0.0;
    double hist_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        obj.weights[i] = (1.0 - plan.gamma) * mu[i] * bg_colsum[i] + (1.0 - plan.p) * state.s_tau[i] * hist_colsum[i];
        bg_total += bg_colsum[i] * mu[i];
        hist_total += hist_colsum[i] * state.s_tau[i];
    }
    obj.constant = plan.gamma * bg_total + plan.p * hist_total;
    return obj;
}

Objective build_objective(ObjectiveKind kind, const ValidatedParams& params, const InterventionPlan& plan,
                          const StateVector& state) {
    if (!(plan.horizon > plan.tau)) throw Error(ErrorCode::TimeBeforeTau, "horizon must exceed tau");
    return build_objective(kind, params, plan, state, propagators_at(params, plan.horizon - plan.tau));
}

std::vector<std::size_t> PlanSolution::intervened() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] == 0) out.push_back(i);
    return out;
}

PlanSolution solve_exact(const Objective& obj, std::span<const double> costs, double budget) {
    check_inputs(obj, costs, budget);
    const std::size_t n = costs.size();
    const bool integral = std::all_of(costs.begin(), costs.end(), [](double c) { return c == std::floor(c) && c < 1e9; });
    if (integral) {
        const double total = std::accumulate(costs.begin(), costs.end(), 0.0);
        const auto capacity = static_cast<std::size_t>(std::floor(std::min(budget, total) + 1e-9));
        if ((n + 1) * (capacity + 1) <= kMaxDpCells) {
            return finish(knapsack_dp(obj, costs, capacity), obj, costs, PlanMethod::Exact);
        }
    }
    return finish(BranchAndBound(obj, costs, budget).run(), obj, costs, PlanMethod::Exact);
}

PlanSolution solve_lp_relax(const Objective& obj, std::span<const double> costs, double budget) {
    check_inputs(obj, costs, budget);
    const std::vector<std::size_t> order = ratio_order(obj, costs);
    std::vector<std::uint8_t> u(costs.size(), 1);
    double room = budget;
    double removed_relaxed = 0.0;
    std::size_t k = 0;
    for (; k < order.size(); ++k) {
        const std::size_t i = order[k];
        if (costs[i] <= room) {
            u[i] = 0;
            room -= costs[i];
            removed_relaxed += obj.weights[i];
        } else {
            removed_relaxed += obj.weights[i] * room / costs[i];
            break;
        }
    }
    // Fractional node stays un-intervened; spend what is left on later nodes that fit.
    for (++k; k < order.size(); ++k) {
        const std::size_t i = order[k];
        if (costs[i] <= room) {
            u[i] = 0;
            room -= costs[i];
        }
    }
    PlanSolution out = finish(std::move(u), obj, costs, PlanMethod::LpRelax);
    out.relaxed_objective = obj.baseline() - removed_relaxed;
    return out;
}

PlanSolution heuristic_plan(std::span<const double> scores, std::span<const double> costs, double budget,
                            PlanMethod method) {
    if (!(budget >= 0.0)) throw Error(ErrorCode::BudgetNegative, "budget must be nonnegative");
    if (scores.size() != costs.size()) throw Error(ErrorCode::InvalidArgument, "score vector has wrong length");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<std::uint8_t> u(scores.size(), 1);
    double room = budget;
    PlanSolution out;
    for (std::size_t i : order) {
        if (costs[i] <= room) {
            u[i] = 0;
            room -= costs[i];
            out.spent += costs[i];
        }
    }
    out.u = std::move(u);
    out.method = method;
    out.objective_value = std::numeric_limits<double>::quiet_NaN();
    return out;
}

PlanSolution heuristic_plan(HeuristicKind kind, const ValidatedParams& params, const History& history,
                            std::span<const double> costs, double budget) {
    if (kind == HeuristicKind::MuBased) return heuristic_plan(params.mu(), costs, budget, PlanMethod::HeuristicMu);
    const Vector counts = history.counts(params.n());
    return heuristic_plan(counts, costs, budget, PlanMethod::HeuristicCount);
}

PlanSolution score(PlanSolution solution, const Objective& obj) {
    solution.objective_value = obj.value(solution.u);
    return solution;
}

std::string_view to_string(PlanMethod method) {
    switch (method) {
    case PlanMethod::Exact: return "exact";
    case PlanMethod::LpRelax: return "lp-relax";
    case PlanMethod::HeuristicMu: return "mu";
    case PlanMethod::HeuristicCount: return "count";
    }
    return "unknown";
}

std::string weights_digest(const Objective& obj) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    };
    for (double w : obj.weights) mix(w);
    mix(obj.constant);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHex[h & 0xfu];
        h >>= 4;
    }
    return out;
}

nlohmann::json plan_to_json(const PlanSolution& solution, const Objective& obj, double budget) {
    nlohmann::json doc;
    doc["method"] = std::string(to_string(solution.method));
    std::vector<int> u(solution.u.begin(), solution.u.end());
    doc["u"] = u;
    doc["spent"] = solution.spent;
    doc["budget"] = budget;
    doc["objective_value"] = solution.objective_value;
    doc["weights_digest"] = weights_digest(obj);
    if (solution.relaxed_objective) doc["relaxed_objective"] = *solution.relaxed_objective;
    return doc;
}

} // namespace hawknet
