#pragma once

#include "hawknet/model.hpp"

#include <Eigen/Dense>

#include <random>

namespace hawknet::testing {

// Random stationary network with the given branching ratio; the spectral
// radius for the rescale comes from a dense Eigen solve.
inline ValidatedParams random_params(std::size_t n, std::mt19937_64& gen, double branching = 0.7,
                                     double omega_lo = 0.3, double omega_hi = 1.5) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix a(n, n);
    Eigen::MatrixXd e(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e(i, j) = a(i, j) = u(gen);
    const double omega = omega_lo + (omega_hi - omega_lo) * u(gen);
    a *= branching * omega / e.eigenvalues().cwiseAbs().maxCoeff();
    Vector mu(n);
    for (double& m : mu) m = 0.05 + 0.45 * u(gen);
    return validate(NetworkParams{n, SingleGaussianBackground{mu, 1.0}, a, omega, 0.2});
}

inline History random_history(std::size_t n, double tau, std::size_t count, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    History h;
    h.horizon = tau;
    for (std::size_t k = 0; k < count; ++k) {
        h.events.push_back({tau * u(gen), u(gen), u(gen), static_cast<std::size_t>(u(gen) * static_cast<double>(n))});
    }
    h.normalize();
    return h;
}

inline std::vector<std::uint8_t> random_u(std::size_t n, std::mt19937_64& gen) {
    std::vector<std::uint8_t> u(n);
    for (auto& v : u) v = static_cast<std::uint8_t>(gen() & 1u);
    return u;
}

} // namespace hawknet::testing
