#include "hawknet/propagators.hpp"

#include "hawknet/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

namespace hawknet {

namespace {

// Pade coefficients b_0..b_m and the theta_m bounds from Higham (2005), Table 2.3.
constexpr std::array<double, 4> kB3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kB7{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> kB9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                     2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kB13{64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                      1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                      670442572800.0,      33522128640.0,       1323241920.0,
                                      40840800.0,          960960.0,            16380.0,
                                      182.0,               1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

Matrix add_scaled_identity(Matrix m, double s) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += s;
    return m;
}

// Low-degree approximant r_m = (V - U)^{-1} (V + U) with U odd, V even.
template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
    const std::size_t n = a.rows();
    const Matrix a2 = a * a;
    Matrix u_inner = Matrix::identity(n) * b[1];
    Matrix v = Matrix::identity(n) * b[0];
    Matrix power = Matrix::identity(n);
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        v += power * b[k];
        if (k + 1 < N) u_inner += power * b[k + 1];
    }
    const Matrix u = a * u_inner;
    return lu_solve(v - u, v + u);
}

Matrix pade13(const Matrix& a) {
    const std::size_t n = a.rows();
    const auto& b = kB13;
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix id = Matrix::identity(n);
    Matrix u_hi = a6 * b[13] + a4 * b[11] + a2 * b[9];
    Matrix u = a * (a6 * u_hi + a6 * b[7] + a4 * b[5] + a2 * b[3] + id * b[1]);
    Matrix v_hi = a6 * b[12] + a4 * b[10] + a2 * b[8];
    Matrix v = a6 * v_hi + a6 * b[6] + a4 * b[4] + a2 * b[2] + id * b[0];
    return lu_solve(v - u, v + u);
}

} // namespace

Matrix expm(const Matrix& m) {
    if (!m.square()) throw Error(ErrorCode::InvalidArgument, "expm needs a square matrix");
    if (!all_finite(m)) throw Error(ErrorCode::NonFinite, "expm input has NaN/Inf");
    if (m.rows() == 0) return m;
    const double norm = norm_1(m);
    if (norm == 0.0) return Matrix::identity(m.rows());
    if (norm <= kTheta3) return pade_low(m, kB3);
    if (norm <= kTheta5) return pade_low(m, kB5);
    if (norm <= kTheta7) return pade_low(m, kB7);
    if (norm <= kTheta9) return pade_low(m, kB9);

    const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    Matrix r = pade13(m * std::ldexp(1.0, -squarings));
    for (int i = 0; i < squarings; ++i) r = r * r;
    if (!all_finite(r)) throw Error(ErrorCode::NonFinite, "expm overflowed");
    return r;
}

double spectral_radius(const Matrix& a, std::size_t max_iters) {
    if (!a.square()) throw Error(ErrorCode::InvalidArgument, "spectral_radius needs a square matrix");
    if (!all_finite(a)) throw Error(ErrorCode::NonFinite, "spectral_radius input has NaN/Inf");
    const std::size_t n = a.rows();
    if (n == 0) return 0.0;

    // Positive, mildly irregular start so A * 1 == 0 coincidences are avoided.
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 2.0 * static_cast<double>(i));
    double scale = std::sqrt(dot(x, x));
    for (double& v : x) v /= scale;

    constexpr double kCollatzTol = 1e-11;
    constexpr double kStallTol = 1e-14;
    constexpr int kStallRounds = 5;
    double previous = -1.0;
    int stalled = 0;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        Vector y = a * x;
        const double ny = std::sqrt(dot(y, y));
        if (ny == 0.0) return 0.0;

        bool positive = true;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(x[i] > 0.0) || y[i] < 0.0) {
                positive = false;
                break;
            }
            const double r = y[i] / x[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (positive && hi - lo <= kCollatzTol * hi) return 0.5 * (lo + hi);

        // ||A x|| with ||x|| = 1.
        const double estimate = ny;
        if (previous > 0.0 && std::abs(estimate - previous) <= kStallTol * estimate) {
            if (++stalled >= kStallRounds) return estimate;
        } else {
            stalled = 0;
        }
        previous = estimate;
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    }
    throw Error(ErrorCode::NoConvergence, "power iteration did not settle");
}

double spectral_radius_dense(const Matrix& a) {
    if (!a.square()) throw Error(ErrorCode::InvalidArgument, "spectral_radius needs a square matrix");
    const auto n = static_cast<Eigen::Index>(a.rows());
    if (n == 0) return 0.0;
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

PropagatorSet propagators_at(const ValidatedParams& params, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "propagator time must be finite and >= 0");
    const std::size_t n = params.n();
    const Matrix& a = params.A();
    PropagatorSet out;
    out.at_time = t;
    if (t == 0.0) {
        out.xi_t = Matrix::identity(n);
        out.psi_t = Matrix::identity(n);
        out.upsilon_t = Matrix(n, n);
        out.gamma_t = Matrix(n, n);
        return out;
    }

    Matrix block(3 * n, 3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) block(i, j) = a(i, j) * t;
        block(i, i) -= params.omega() * t;
        block(i, n + i) = t;
        block(n + i, 2 * n + i) = t;
    }
    const Matrix e = expm(block);
    out.xi_t = e.block(0, 0, n, n);
    out.upsilon_t = e.block(0, n, n, n);
    const Matrix upsilon_integral = e.block(0, 2 * n, n, n);

    out.psi_t = add_scaled_identity(a * out.upsilon_t, 1.0);
    out.gamma_t = add_scaled_identity(a * upsilon_integral, t);
    if (!all_finite(out.xi_t) || !all_finite(out.gamma_t)) {
        throw Error(ErrorCode::NonFinite, "propagator evaluation overflowed");
    }
    return out;
}

} // namespace hawknet
