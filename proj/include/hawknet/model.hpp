#pragma once

#include "hawknet/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace hawknet {

struct Point {
    double x{0.0};
    double y{0.0};
    friend bool operator==(const Point&, const Point&) = default;
};

// Every node shares one isotropic Gaussian spatial profile centred at the
// origin; node i carries total mass mu[i] (events per unit time).
struct SingleGaussianBackground {
    Vector mu;
    double sigma0{1.0};
    friend bool operator==(const SingleGaussianBackground&, const SingleGaussianBackground&) = default;
};

// Weighted kernel density estimate over anchor locations:
//   mu_u(x, y) = sum_k beta(u, k) / (2 pi delta^2 window) * exp(-|z - z_k|^2 / (2 delta^2)).
struct WeightedKdeBackground {
    Matrix beta; // n x anchors.size()
    double delta{1.0};
    double window{1.0};
    std::vector<Point> anchors;
    friend bool operator==(const WeightedKdeBackground&, const WeightedKdeBackground&) = default;
};

using BackgroundModel = std::variant<SingleGaussianBackground, WeightedKdeBackground>;

// Generative model in the canonical convention: node j excites node i with
// kernel A(i, j) * exp(-omega t) * N(dx, dy; sigma^2 I).
struct NetworkParams {
    std::size_t n{0};
    BackgroundModel background;
    Matrix A;
    double omega{1.0};
    double sigma{1.0};
    friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

// Parameters that passed validate(). Only validate() can build one.
class ValidatedParams {
public:
    [[nodiscard]] const NetworkParams& params() const noexcept { return params_; }
    [[nodiscard]] std::size_t n() const noexcept { return params_.n; }
    [[nodiscard]] const Matrix& A() const noexcept { return params_.A; }
    [[nodiscard]] double omega() const noexcept { return params_.omega; }
    [[nodiscard]] double sigma() const noexcept { return params_.sigma; }
    [[nodiscard]] double spectral_radius() const noexcept { return spectral_radius_; }
    [[nodiscard]] double branching_ratio() const noexcept { return spectral_radius_ / params_.omega; }
    // Spatially integrated background rate per node.
    [[nodiscard]] const Vector& mu() const noexcept { return mass_; }

private:
    friend ValidatedParams validate(NetworkParams params);
    ValidatedParams(NetworkParams params, double radius, Vector mass)
        : params_(std::move(params)), spectral_radius_(radius), mass_(std::move(mass)) {}

    NetworkParams params_;
    double spectral_radius_{0.0};
    Vector mass_;
};

struct Event {
    double t{0.0};
    double x{0.0};
    double y{0.0};
    std::size_t node{0};
    friend bool operator==(const Event&, const Event&) = default;
};

// Observed record on [0, horizon], sorted by time.
struct History {
    std::vector<Event> events;
    double horizon{0.0};

    // Sorts by (t, node, x, y) and checks every event lies in [0, horizon].
    void normalize();
    [[nodiscard]] Vector counts(std::size_t n) const;
    friend bool operator==(const History&, const History&) = default;
};

// Intervention settings. u[i] == 0 means node i IS intervened on; u[i] == 1
// leaves it untouched.
struct InterventionPlan {
    std::vector<std::uint8_t> u;
    double p{1.0};
    double gamma{1.0};
    double tau{0.0};
    double horizon{0.0};
    Vector costs;
    double budget{0.0};

    // rho = gamma + (1 - gamma) u
    [[nodiscard]] Vector rho() const;
    // nu = p + (1 - p) u
    [[nodiscard]] Vector nu() const;
    [[nodiscard]] double spent() const;
    [[nodiscard]] bool feasible(double slack = 1e-9) const;
    // Throws InvalidArgument / InfeasiblePlan.
    void check(std::size_t n) const;
};

[[nodiscard]] std::vector<std::uint8_t> no_intervention(std::size_t n);

// Throws NonStationary, NegativeEntry or BadScale.
[[nodiscard]] ValidatedParams validate(NetworkParams params);

[[nodiscard]] Vector background_mass(const BackgroundModel& bg);
[[nodiscard]] std::size_t background_nodes(const BackgroundModel& bg);

// Converts an influence matrix fitted under the unit-mass temporal kernel
// omega * exp(-omega t) into the canonical exp(-omega t) convention.
[[nodiscard]] Matrix canonicalize_triggering(const Matrix& a_fit, double omega, bool normalized);

} // namespace hawknet
