#include "hawknet/error.hpp"
#include "hawknet/expectation.hpp"
#include "hawknet/simulator.hpp"
#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hawknet;
using hawknet::testing::random_history;
using hawknet::testing::random_params;
using hawknet::testing::random_u;

namespace {

InterventionPlan make_plan(std::vector<std::uint8_t> u, double p, double gamma, double tau, double horizon) {
    return InterventionPlan{std::move(u), p, gamma, tau, horizon, {}, 0.0};
}

ValidatedParams scalar(double mu, double a, double omega) {
    return validate(NetworkParams{1, SingleGaussianBackground{{mu}, 0.25}, Matrix{{a}}, omega, 0.1});
}

} // namespace

TEST(StateAt, DirectSums) {
    EXPECT_EQ(state_at(History{{}, 1.0}, 1.0, 0.2, 2).s_tau, (Vector{0.0, 0.0}));
    const History one{{{0.0, 0, 0, 0}}, 1.0};
    EXPECT_NEAR(state_at(one, 1.0, 0.2, 1).s_tau[0], std::exp(-0.2), 1e-15);
    const History two{{{0.0, 0, 0, 0}, {0.5, 0, 0, 0}}, 1.0};
    EXPECT_NEAR(state_at(two, 1.0, 0.2, 1).s_tau[0], std::exp(-0.2) + std::exp(-0.1), 1e-15);
    const History late{{{2.0, 0, 0, 0}}, 3.0};
    try {
        (void)state_at(late, 1.0, 0.2, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EventAfterTau);
    }
}

TEST(StateAt, BoundedByCounts) {
    std::mt19937_64 gen(21);
    const History h = random_history(4, 10.0, 60, gen);
    const StateVector s = state_at(h, 10.0, 0.7, 4);
    const Vector counts = h.counts(4);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_GE(s.s_tau[i], 0.0);
        EXPECT_LE(s.s_tau[i], counts[i]);
    }
}

TEST(Eta, ScalarClosedForm) {
    const ValidatedParams p = scalar(0.03, 0.1, 0.2);
    const StateVector s{{1.0}, 10.0};
    const ExpectationResult r = eta_at(p, make_plan({0}, 0.1, 0.6, 10.0, 20.0), s, 20.0);
    const double psi10 = 1.0 + (0.1 / -0.1) * (std::exp(-1.0) - 1.0);
    EXPECT_NEAR(r.eta_e[0], 0.6 * 0.03 * psi10, 1e-12);
    EXPECT_NEAR(r.eta_h[0], std::exp(-1.0) * 0.1 * 0.1, 1e-12);
    EXPECT_NEAR(r.eta[0], r.eta_e[0] + r.eta_h[0], 1e-15);
}

TEST(Eta, ScalarAgreesWithMonteCarloIntensity) {
    const ValidatedParams p = scalar(0.03, 0.1, 0.2);
    // One event shortly before tau, so S(tau) = exp(-0.1).
    const History h{{{9.5, 0.0, 0.0, 0}}, 10.0};
    const InterventionPlan plan = make_plan({0}, 0.1, 0.6, 10.0, 20.0);
    const ExpectationResult r = evaluate(p, plan, state_at(h, 10.0, 0.2, 1), 20.0);
    const McEstimate mc = mc_estimate(p, h, plan, 20000, 99);
    EXPECT_NEAR(mc.mean_total_eta, sum(r.eta), 3.0 * mc.se_total_eta);
    EXPECT_NEAR(mc.mean_total_counts, sum(r.expected_counts), 3.0 * mc.se_total_counts);
}

TEST(Eta, NoInterventionEqualsBaseline) {
    std::mt19937_64 gen(22);
    const ValidatedParams p = random_params(3, gen);
    const History h = random_history(3, 5.0, 20, gen);
    const StateVector s = state_at(h, 5.0, p.omega(), 3);
    const ExpectationResult base = eta_at(p, make_plan(no_intervention(3), 1.0, 1.0, 5.0, 9.0), s, 9.0);
    const ExpectationResult ones = eta_at(p, make_plan(no_intervention(3), 0.1, 0.6, 5.0, 9.0), s, 9.0);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(base.eta[i], ones.eta[i], 1e-15);
}

TEST(Eta, InertInterventionIgnoresU) {
    std::mt19937_64 gen(23);
    const ValidatedParams p = random_params(4, gen);
    const History h = random_history(4, 5.0, 30, gen);
    const StateVector s = state_at(h, 5.0, p.omega(), 4);
    const ExpectationResult a = evaluate(p, make_plan({1, 1, 1, 1}, 1.0, 1.0, 5.0, 9.0), s, 9.0);
    const ExpectationResult b = evaluate(p, make_plan({0, 1, 0, 0}, 1.0, 1.0, 5.0, 9.0), s, 9.0);
    EXPECT_EQ(a.eta, b.eta);
    EXPECT_EQ(a.expected_counts, b.expected_counts);
}

TEST(Counts, ZeroAtTauAndPoissonWithoutTriggering) {
    std::mt19937_64 gen(24);
    const ValidatedParams p = random_params(3, gen);
    const StateVector s{{0.5, 1.0, 0.0}, 4.0};
    const ExpectationResult r = expected_counts(p, make_plan({0, 1, 0}, 0.3, 0.8, 4.0, 8.0), s, 4.0);
    for (double v : r.expected_counts) EXPECT_EQ(v, 0.0);

    const ValidatedParams poisson = validate(
        NetworkParams{2, SingleGaussianBackground{{0.03, 0.02}, 0.25}, Matrix(2, 2), 0.2, 0.1});
    const ExpectationResult q = expected_counts(poisson, make_plan({0, 1}, 0.3, 1.0, 4.0, 10.0), StateVector{{1.0, 2.0}, 4.0}, 10.0);
    EXPECT_NEAR(q.expected_counts[0], 0.03 * 6.0, 1e-14);
    EXPECT_NEAR(q.expected_counts[1], 0.02 * 6.0, 1e-14);
}

TEST(Counts, TimeBeforeTauRejected) {
    const ValidatedParams p = scalar(0.03, 0.1, 0.2);
    const StateVector s{{0.0}, 4.0};
    EXPECT_THROW((void)expected_counts(p, make_plan({1}, 0.3, 0.8, 4.0, 8.0), s, 3.0), Error);
    EXPECT_THROW((void)eta_at(p, make_plan({1}, 0.3, 0.8, 4.0, 8.0), s, 4.0), Error);
}

TEST(Totals, SumsAndReductions) {
    ExpectationResult r;
    r.eta = {1.0, 2.0, 3.0};
    r.expected_counts = {0.0, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(totals(r).eta_total, 6.0);
    EXPECT_DOUBLE_EQ(totals(ExpectationResult{}).en_total, 0.0);

    const Reduction same = reduction_metrics(Totals{4.0, 8.0}, Totals{4.0, 8.0});
    EXPECT_EQ(same.rate_pct, 0.0);
    EXPECT_EQ(same.events_pct, 0.0);
    const Reduction half = reduction_metrics(Totals{2.0, 4.0}, Totals{4.0, 8.0});
    EXPECT_DOUBLE_EQ(half.rate_pct, 50.0);
    EXPECT_DOUBLE_EQ(half.events_pct, 50.0);
    EXPECT_THROW((void)reduction_metrics(Totals{0.0, 0.0}, Totals{0.0, 1.0}), Error);
}

TEST(Monotonicity, NondecreasingInGammaAndP) {
    std::mt19937_64 gen(25);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const ValidatedParams p = random_params(n, gen);
        const History h = random_history(n, 6.0, 25, gen);
        const StateVector s = state_at(h, 6.0, p.omega(), n);
        const auto u = random_u(n, gen);
        for (double pp : {0.1, 0.3}) {
            Vector prev_eta(n, 0.0), prev_en(n, 0.0);
            for (double g : {0.6, 0.8, 1.0}) {
                const ExpectationResult r = evaluate(p, make_plan(u, pp, g, 6.0, 12.0), s, 12.0);
                for (std::size_t i = 0; i < n; ++i) {
                    EXPECT_GE(r.eta[i], prev_eta[i] - 1e-14);
                    EXPECT_GE(r.expected_counts[i], prev_en[i] - 1e-14);
                }
                prev_eta = r.eta;
                prev_en = r.expected_counts;
            }
        }
        for (double g : {0.6, 0.8, 1.0}) {
            const ExpectationResult lo = evaluate(p, make_plan(u, 0.1, g, 6.0, 12.0), s, 12.0);
            const ExpectationResult hi = evaluate(p, make_plan(u, 0.3, g, 6.0, 12.0), s, 12.0);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_LE(lo.eta[i], hi.eta[i] + 1e-14);
                EXPECT_LE(lo.expected_counts[i], hi.expected_counts[i] + 1e-14);
            }
        }
    }
}

TEST(Suppression, FullInterventionDrivesEtaToZero) {
    std::mt19937_64 gen(26);
    const ValidatedParams p = random_params(3, gen);
    const StateVector s = state_at(random_history(3, 5.0, 20, gen), 5.0, p.omega(), 3);
    const ExpectationResult r = evaluate(p, make_plan({0, 0, 0}, 0.0, 1e-12, 5.0, 9.0), s, 9.0);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(r.eta_h[i], 0.0);
        EXPECT_LT(r.eta_e[i], 1e-10);
    }
}

TEST(Linearity, TotalsAreAffineInU) {
    std::mt19937_64 gen(27);
    const std::size_t n = 5;
    const ValidatedParams p = random_params(n, gen);
    const StateVector s = state_at(random_history(n, 5.0, 40, gen), 5.0, p.omega(), n);
    auto total = [&](std::vector<std::uint8_t> u) { return totals(evaluate(p, make_plan(std::move(u), 0.2, 0.7, 5.0, 11.0), s, 11.0)); };
    for (std::size_t i = 0; i < n; ++i) {
        double first_eta = 0.0, first_en = 0.0;
        for (int base = 0; base < 4; ++base) {
            auto u = random_u(n, gen);
            u[i] = 1;
            const Totals up = total(u);
            u[i] = 0;
            const Totals down = total(u);
            if (base == 0) {
                first_eta = up.eta_total - down.eta_total;
                first_en = up.en_total - down.en_total;
            } else {
                EXPECT_NEAR(up.eta_total - down.eta_total, first_eta, 1e-12);
                EXPECT_NEAR(up.en_total - down.en_total, first_en, 1e-12);
            }
        }
    }
}

TEST(Sensitivity, ZeroWithoutInterventionAndScalarForm) {
    const ValidatedParams p = scalar(0.03, 0.1, 0.2);
    const StateVector s{{1.0}, 10.0};
    const Sensitivity none = sensitivity(p, make_plan({1}, 0.1, 0.6, 10.0, 20.0), s, 20.0);
    EXPECT_EQ(none.d_eta_d_gamma, (Vector{0.0}));
    EXPECT_EQ(none.d_en_d_p, (Vector{0.0}));
    const Sensitivity all = sensitivity(p, make_plan({0}, 0.1, 0.6, 10.0, 20.0), s, 20.0);
    const double psi10 = 1.0 + (0.1 / -0.1) * (std::exp(-1.0) - 1.0);
    EXPECT_NEAR(all.d_eta_d_gamma[0], 0.03 * psi10, 1e-12);
}

TEST(Sensitivity, MatchesCentralDifferences) {
    std::mt19937_64 gen(28);
    const std::size_t n = 5;
    const double h = 1e-6;
    for (int trial = 0; trial < 5; ++trial) {
        const ValidatedParams p = random_params(n, gen);
        const StateVector s = state_at(random_history(n, 5.0, 40, gen), 5.0, p.omega(), n);
        auto u = random_u(n, gen);
        u[0] = 0;
        const double pp = 0.3, g = 0.8;
        const Sensitivity d = sensitivity(p, make_plan(u, pp, g, 5.0, 10.0), s, 10.0);
        auto eval = [&](double pv, double gv) { return evaluate(p, make_plan(u, pv, gv, 5.0, 10.0), s, 10.0); };
        const ExpectationResult gp = eval(pp, g + h), gm = eval(pp, g - h), pp_ = eval(pp + h, g), pm = eval(pp - h, g);
        for (std::size_t i = 0; i < n; ++i) {
            auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); };
            EXPECT_LT(rel((gp.eta[i] - gm.eta[i]) / (2 * h), d.d_eta_d_gamma[i]), 1e-6);
            EXPECT_LT(rel((pp_.eta[i] - pm.eta[i]) / (2 * h), d.d_eta_d_p[i]), 1e-6);
            EXPECT_LT(rel((gp.expected_counts[i] - gm.expected_counts[i]) / (2 * h), d.d_en_d_gamma[i]), 1e-6);
            EXPECT_LT(rel((pp_.expected_counts[i] - pm.expected_counts[i]) / (2 * h), d.d_en_d_p[i]), 1e-6);
        }
    }
}

TEST(TimeOrigin, LiteralModeDiffersFromShifted) {
    const ValidatedParams p = scalar(0.03, 0.1, 0.2);
    const StateVector s{{1.0}, 10.0};
    const InterventionPlan plan = make_plan({0}, 0.1, 0.6, 10.0, 20.0);
    const ExpectationResult shifted = eta_at(p, plan, s, 20.0);
    const ExpectationResult literal = eta_at(p, plan, s, 20.0, TimeOrigin::Literal);
    const double psi20 = 1.0 + (0.1 / -0.1) * (std::exp(-2.0) - 1.0);
    EXPECT_NEAR(literal.eta_e[0], 0.6 * 0.03 * psi20, 1e-12);
    EXPECT_NE(literal.eta_e[0], shifted.eta_e[0]);
    EXPECT_EQ(literal.eta_h[0], shifted.eta_h[0]);
}
