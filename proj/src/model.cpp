#include "hawknet/model.hpp"

#include "hawknet/error.hpp"
#include "hawknet/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <type_traits>

namespace hawknet {

void History::normalize() {
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.t, a.node, a.x, a.y) < std::tie(b.t, b.node, b.x, b.y);
    });
    for (const Event& e : events) {
        if (!std::isfinite(e.t) || e.t < 0.0 || e.t > horizon) {
            throw Error(ErrorCode::InvalidArgument, "event time outside [0, horizon]: " + std::to_string(e.t));
        }
    }
}

Vector History::counts(std::size_t n) const {
    Vector out(n, 0.0);
    for (const Event& e : events) {
        if (e.node >= n) throw Error(ErrorCode::InvalidArgument, "event node index out of range");
        out[e.node] += 1.0;
    }
    return out;
}

Vector InterventionPlan::rho() const {
    Vector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = gamma + (1.0 - gamma) * u[i];
    return out;
}

Vector InterventionPlan::nu() const {
    Vector out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = p + (1.0 - p) * u[i];
    return out;
}

double InterventionPlan::spent() const {
    double total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0) total += i < costs.size() ? costs[i] : 0.0;
    }
    return total;
}

bool InterventionPlan::feasible(double slack) const {
    return spent() <= budget + slack * std::max(1.0, std::abs(budget));
}

void InterventionPlan::check(std::size_t n) const {
    if (u.size() != n) throw Error(ErrorCode::InvalidArgument, "intervention vector has wrong length");
    if (std::any_of(u.begin(), u.end(), [](std::uint8_t v) { return v > 1; })) {
        throw Error(ErrorCode::InvalidArgument, "intervention vector must be binary");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "survival probability p must lie in [0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::InvalidArgument, "dampening gamma must lie in [0, 1]");
    if (!(tau >= 0.0) || !(horizon > tau)) throw Error(ErrorCode::InvalidArgument, "need 0 <= tau < horizon");
    if (!costs.empty()) {
        if (costs.size() != n) throw Error(ErrorCode::InvalidArgument, "cost vector has wrong length");
        if (!feasible()) throw Error(ErrorCode::InfeasiblePlan, "intervention cost exceeds the budget");
    }
}

std::vector<std::uint8_t> no_intervention(std::size_t n) { return std::vector<std::uint8_t>(n, 1); }

std::size_t background_nodes(const BackgroundModel& bg) {
    return std::visit(
        [](const auto& b) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(b)>, SingleGaussianBackground>) {
                return b.mu.size();
            } else {
                return b.beta.rows();
            }
        },
        bg);
}

Vector background_mass(const BackgroundModel& bg) {
    if (const auto* g = std::get_if<SingleGaussianBackground>(&bg)) return g->mu;
    const auto& kde = std::get<WeightedKdeBackground>(bg);
    Vector out(kde.beta.rows(), 0.0);
    for (std::size_t u = 0; u < kde.beta.rows(); ++u) out[u] = sum(kde.beta.row(u)) / kde.window;
    return out;
}

Matrix canonicalize_triggering(const Matrix& a_fit, double omega, bool normalized) {
    if (!(omega > 0.0)) throw Error(ErrorCode::BadScale, "omega must be positive");
    return normalized ? a_fit * omega : a_fit;
}

ValidatedParams validate(NetworkParams params) {
    if (params.n == 0) throw Error(ErrorCode::InvalidArgument, "node count must be positive");
    if (params.A.rows() != params.n || params.A.cols() != params.n) {
        throw Error(ErrorCode::InvalidArgument, "influence matrix must be n x n");
    }
    if (background_nodes(params.background) != params.n) {
        throw Error(ErrorCode::InvalidArgument, "background model covers the wrong number of nodes");
    }
    if (!(params.omega > 0.0) || !std::isfinite(params.omega)) throw Error(ErrorCode::BadScale, "omega must be positive");
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) throw Error(ErrorCode::BadScale, "sigma must be positive");
    if (!all_finite(params.A)) throw Error(ErrorCode::NonFinite, "influence matrix has NaN/Inf");
    for (double v : params.A.values()) {
        if (v < 0.0) throw Error(ErrorCode::NegativeEntry, "influence matrix has a negative entry");
    }

    if (const auto* g = std::get_if<SingleGaussianBackground>(&params.background)) {
        if (!(g->sigma0 > 0.0)) throw Error(ErrorCode::BadScale, "sigma0 must be positive");
        for (double m : g->mu) {
            if (!(m >= 0.0) || !std::isfinite(m)) throw Error(ErrorCode::NegativeEntry, "background mass must be finite and >= 0");
        }
    } else {
        const auto& kde = std::get<WeightedKdeBackground>(params.background);
        if (!(kde.delta > 0.0)) throw Error(ErrorCode::BadScale, "KDE bandwidth must be positive");
        if (!(kde.window > 0.0)) throw Error(ErrorCode::BadScale, "KDE window must be positive");
        if (kde.beta.cols() != kde.anchors.size()) {
            throw Error(ErrorCode::InvalidArgument, "KDE weights and anchors disagree in size");
        }
        for (double v : kde.beta.values()) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::NegativeEntry, "KDE weight must be finite and >= 0");
        }
    }

    double radius = 0.0;
    try {
        radius = spectral_radius(params.A);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence) throw;
        radius = spectral_radius_dense(params.A);
    }
    if (radius >= params.omega) {
        throw Error(ErrorCode::NonStationary, "spectral radius " + std::to_string(radius) +
                                                  " is not below omega " + std::to_string(params.omega));
    }
    Vector mass = background_mass(params.background);
    return ValidatedParams(std::move(params), radius, std::move(mass));
}

} // namespace hawknet
