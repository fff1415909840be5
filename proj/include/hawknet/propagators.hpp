#pragma once

#include "hawknet/matrix.hpp"
#include "hawknet/model.hpp"

namespace hawknet {

// Matrix exponential by scaling and squaring with a diagonal Pade approximant
// of degree 3, 5, 7, 9 or 13 (Higham 2005). Throws NonFinite on NaN/Inf input.
[[nodiscard]] Matrix expm(const Matrix& m);

// Largest eigenvalue modulus by power iteration. For nonnegative matrices the
// Collatz-Wielandt bounds give the stopping rule. Throws NoConvergence when the
// iterate fails to settle within the iteration budget (periodic or complex
// dominant spectrum).
[[nodiscard]] double spectral_radius(const Matrix& a, std::size_t max_iters = 20000);

// Dense eigendecomposition fallback.
[[nodiscard]] double spectral_radius_dense(const Matrix& a);

// Evaluations at one time t of
//   xi      = exp(M t),               M = A - omega I
//   psi     = I + A * upsilon
//   upsilon = int_0^t exp(M s) ds
//   gamma   = int_0^t psi(s) ds = I t + A * int_0^t upsilon(s) ds
struct PropagatorSet {
    Matrix xi_t;
    Matrix psi_t;
    Matrix upsilon_t;
    Matrix gamma_t;
    double at_time{0.0};
};

// Uses one exponential of the 3n x 3n block matrix [[M, I, 0], [0, 0, I], [0, 0, 0]] t,
// whose first block row holds exp(M t), int exp(M s) ds and int (t - s) exp(M s) ds,
// so (A - omega I) is never inverted.
[[nodiscard]] PropagatorSet propagators_at(const ValidatedParams& params, double t);

} // namespace hawknet
