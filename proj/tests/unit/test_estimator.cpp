#include "hawknet/error.hpp"
#include "hawknet/estimator.hpp"
#include "hawknet/model_io.hpp"
#include "hawknet/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace hawknet;

namespace {

History simulate_history(const NetworkParams& truth, double horizon, std::uint64_t seed) {
    const ValidatedParams v = validate(truth);
    History h{simulate(v, SimConfig{horizon, std::nullopt, seed, 0, SimBackend::Branching}).events, horizon};
    h.normalize();
    return h;
}

double gauss2(double d2, double s) { return std::exp(-d2 / (2 * s * s)) / (2 * std::numbers::pi * s * s); }

} // namespace

TEST(EmFit, TooFewEvents) {
    const History one{{{0.5, 0, 0, 0}}, 1.0};
    try {
        (void)em_fit(one, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooFewEvents);
    }
}

TEST(EmFit, PoissonDataGivesSmallBranching) {
    const NetworkParams truth{2, SingleGaussianBackground{{1.5, 1.0}, 3.0}, Matrix(2, 2), 1.0, 0.2};
    const History h = simulate_history(truth, 300.0, 5);
    ASSERT_GT(h.events.size(), 500u);
    const EMFit fit = em_fit(h, 2);
    const ValidatedParams v = validate(fit.params);
    EXPECT_LT(v.branching_ratio(), 0.1);
    EXPECT_GT(fit.digest.mean_background, 0.9);
}

TEST(EmFit, AscentResponsibilitiesAndShapes) {
    Matrix a{{0.3, 0.1}, {0.0, 0.4}};
    const NetworkParams truth{2, SingleGaussianBackground{{0.6, 0.4}, 4.0}, a, 1.0, 0.2};
    const History h = simulate_history(truth, 250.0, 6);
    const EMFit fit = em_fit(h, 2, EMConfig{200, 1e-9, {}, {}, 0.25});
    ASSERT_GE(fit.log_lik_trace.size(), 2u);
    for (std::size_t k = 1; k < fit.log_lik_trace.size(); ++k) {
        EXPECT_GE(fit.log_lik_trace[k], fit.log_lik_trace[k - 1] - 1e-8 * std::abs(fit.log_lik_trace[k - 1]));
    }
    EXPECT_LT(fit.digest.max_row_error, 1e-9);
    EXPECT_EQ(fit.beta.rows(), 2u);
    EXPECT_EQ(fit.beta.cols(), h.events.size());
    EXPECT_GT(fit.params.omega, 0.0);
    EXPECT_GT(fit.params.sigma, 0.0);
    EXPECT_GT(fit.delta, 0.0);
    for (double v : fit.params.A.values()) EXPECT_GE(v, 0.0);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(fit.params.A(i, j), fit.params.omega * fit.a_normalized(i, j), 1e-15);
    EXPECT_LT(validate(fit.params).branching_ratio(), 1.0);
    EXPECT_NEAR(fit.params.omega, 1.0, 0.25);
}

TEST(EmFit, BandwidthGridPicksACandidate) {
    const NetworkParams truth{1, SingleGaussianBackground{{2.0}, 2.0}, Matrix{{0.3}}, 2.0, 0.1};
    const History h = simulate_history(truth, 100.0, 7);
    EMConfig cfg;
    cfg.max_iters = 60;
    cfg.bandwidth_grid = {0.05, 0.5, 1.5};
    const EMFit fit = em_fit(h, 1, cfg);
    EXPECT_TRUE(fit.delta == 0.05 || fit.delta == 0.5 || fit.delta == 1.5);
}

TEST(EmFit, ExportRoundTrip) {
    const NetworkParams truth{1, SingleGaussianBackground{{2.0}, 2.0}, Matrix{{0.3}}, 2.0, 0.1};
    const History h = simulate_history(truth, 40.0, 8);
    const EMFit fit = em_fit(h, 1, EMConfig{30, 1e-8, {}, {}, 0.25});
    const auto path = std::filesystem::temp_directory_path() / "hawknet_fit_roundtrip.json";
    write_params(path, fit.params);
    EXPECT_EQ(read_params(path), fit.params);
    std::filesystem::remove(path);
}

TEST(LogLikelihood, PoissonReduction) {
    const double mu = 0.7, s0 = 1.5, horizon = 10.0;
    const History h{{{1.0, 0.3, -0.2, 0}, {4.0, -1.0, 0.5, 0}, {9.0, 0.0, 2.0, 0}}, horizon};
    const NetworkParams p{1, SingleGaussianBackground{{mu}, s0}, Matrix{{0.0}}, 1.0, 0.2};
    double expected = -mu * horizon;
    for (const Event& e : h.events) expected += std::log(mu * gauss2(e.x * e.x + e.y * e.y, s0));
    EXPECT_NEAR(log_likelihood(h, p), expected, 1e-12);
}

TEST(LogLikelihood, CompensatorIsLinearInMass) {
    const History empty{{}, 5.0};
    const NetworkParams p{2, SingleGaussianBackground{{0.2, 0.3}, 1.0}, Matrix{{0.1, 0.0}, {0.0, 0.1}}, 1.0, 0.2};
    NetworkParams doubled = p;
    std::get<SingleGaussianBackground>(doubled.background).mu = {0.4, 0.6};
    EXPECT_NEAR(log_likelihood(empty, p) - log_likelihood(empty, doubled), 0.5 * 5.0, 1e-12);
}

TEST(LogLikelihood, TriggeringTermsAndZeroIntensity) {
    const History h{{{1.0, 0.0, 0.0, 0}, {1.5, 0.1, 0.0, 0}}, 3.0};
    const double a = 0.4, w = 2.0, s = 0.2, mu = 0.5, s0 = 1.0;
    const NetworkParams p{1, SingleGaussianBackground{{mu}, s0}, Matrix{{a}}, w, s};
    const double l1 = mu * gauss2(0.0, s0);
    const double l2 = mu * gauss2(0.01, s0) + a * std::exp(-w * 0.5) * gauss2(0.01, s);
    const double comp = mu * 3.0 + a / w * ((1 - std::exp(-w * 2.0)) + (1 - std::exp(-w * 1.5)));
    EXPECT_NEAR(log_likelihood(h, p), std::log(l1) + std::log(l2) - comp, 1e-12);

    const NetworkParams dead{1, SingleGaussianBackground{{0.0}, s0}, Matrix{{0.0}}, w, s};
    EXPECT_THROW((void)log_likelihood(h, dead), Error);
}
