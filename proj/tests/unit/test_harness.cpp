#include "hawknet/error.hpp"
#include "hawknet/harness.hpp"
#include "hawknet/ingest.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hawknet;
namespace fs = std::filesystem;

namespace {

SweepConfig small_config() {
    SweepConfig c;
    c.n = 6;
    c.reps = 4;
    c.q_grid = {20, 50, 100};
    c.threads = 2;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST(SampleNetwork, StationaryAndDeterministic) {
    SamplerSpec spec;
    const ValidatedParams a = sample_network(20, spec, 3, 1);
    const ValidatedParams b = sample_network(20, spec, 3, 1);
    EXPECT_EQ(a.params(), b.params());
    EXPECT_NEAR(a.branching_ratio(), spec.target_branching, 1e-6);
    for (double m : a.mu()) {
        EXPECT_GE(m, spec.mu_lo);
        EXPECT_LE(m, spec.mu_hi);
    }
}

TEST(Sweep, RejectsBadConfig) {
    SweepConfig c = small_config();
    c.q_grid = {0.0};
    EXPECT_THROW((void)run_sweep(c), Error);
    c = small_config();
    c.reps = 0;
    EXPECT_THROW((void)run_sweep(c), Error);
}

TEST(Sweep, FullBudgetTiesAndInertInterventionIsZero) {
    SweepConfig c = small_config();
    c.p_grid = {1.0, 0.1};
    c.gamma_grid = {1.0, 0.6};
    const SweepResult r = run_sweep(c);
    ASSERT_EQ(r.rows.size(), 2u * 2u * 3u * 4u);
    for (const SweepRow& row : r.rows) {
        if (row.p == 1.0 && row.gamma == 1.0) {
            EXPECT_NEAR(row.mean_rate_reduction_pct, 0.0, 1e-12);
            EXPECT_NEAR(row.mean_event_reduction_pct, 0.0, 1e-12);
        }
        if (row.q == 100.0) {
            const SweepRow& first = *std::find_if(r.rows.begin(), r.rows.end(), [&](const SweepRow& o) {
                return o.p == row.p && o.gamma == row.gamma && o.q == 100.0;
            });
            EXPECT_NEAR(row.mean_rate_reduction_pct, first.mean_rate_reduction_pct, 1e-9);
            EXPECT_NEAR(row.mean_event_reduction_pct, first.mean_event_reduction_pct, 1e-9);
        }
        EXPECT_GE(row.mean_rate_reduction_pct, -1e-9);
        EXPECT_LE(row.mean_rate_reduction_pct, 100.0);
    }
}

TEST(Sweep, GridArithmeticAndOrder) {
    SweepConfig c = small_config();
    c.n = 3;
    c.reps = 1;
    c.q_grid = {10, 20, 30, 40, 50, 60, 70, 80, 90};
    const SweepResult r = run_sweep(c);
    EXPECT_EQ(r.rows.size(), 216u);
    EXPECT_EQ(r.rows.front().strategy, Strategy::ExactRate);
    EXPECT_EQ(r.rows[3].strategy, Strategy::Count);
    EXPECT_EQ(r.rows.front().stderr_rate, 0.0);
}

TEST(Sweep, IndependentOfThreadCount) {
    SweepConfig c = small_config();
    c.threads = 1;
    const SweepResult a = run_sweep(c);
    c.threads = 3;
    const SweepResult b = run_sweep(c);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        EXPECT_EQ(a.rows[k].mean_rate_reduction_pct, b.rows[k].mean_rate_reduction_pct);
        EXPECT_EQ(a.rows[k].stderr_events, b.rows[k].stderr_events);
    }
}

TEST(Sweep, FixedNetworkChangesOnlyTheNetworkDraw) {
    SweepConfig c = small_config();
    c.fixed_network = true;
    const SweepResult fixed = run_sweep(c);
    c.fixed_network = false;
    const SweepResult varied = run_sweep(c);
    EXPECT_NE(fixed.rows[0].mean_rate_reduction_pct, varied.rows[0].mean_rate_reduction_pct);
}

TEST(Report, FilesAreDeterministicAndRoundTrip) {
    const SweepResult r = run_sweep(small_config());
    const fs::path a = scratch("hk_report_a");
    const fs::path b = scratch("hk_report_b");
    emit_report(r, a);
    emit_report(run_sweep(small_config()), b);
    for (const char* name : {"sweep.csv", "summary.md", "series_p0.1_g0.6.csv", "series_p0.3_g1.csv"}) {
        ASSERT_TRUE(fs::exists(a / name)) << name;
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
    const SweepResult back = read_sweep_csv(a / "sweep.csv");
    ASSERT_EQ(back.rows.size(), r.rows.size());
    EXPECT_EQ(back.reps, r.reps);
    EXPECT_EQ(back.rows[5].mean_event_reduction_pct, r.rows[5].mean_event_reduction_pct);
    const fs::path c = scratch("hk_report_c");
    emit_report(back, c);
    EXPECT_EQ(slurp(a / "summary.md"), slurp(c / "summary.md"));
}

TEST(Report, SingleRow) {
    SweepResult r;
    r.reps = 1;
    r.rows.push_back({Strategy::Mu, 0.1, 0.6, 50.0, 12.5, 10.0, 0.0, 0.0});
    const fs::path dir = scratch("hk_report_one");
    emit_report(r, dir);
    const std::string csv = slurp(dir / "sweep.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
    EXPECT_THROW(emit_report(SweepResult{}, dir), Error);
}

TEST(Checks, DetectViolations) {
    SweepResult r;
    r.reps = 10;
    for (double q : {30.0, 50.0}) {
        r.rows.push_back({Strategy::ExactRate, 0.1, 0.6, q, q == 30.0 ? 20.0 : 10.0, 20.0, 0.1, 0.1});
        r.rows.push_back({Strategy::ExactInvasion, 0.1, 0.6, q, 20.0, 25.0, 0.1, 0.1});
        r.rows.push_back({Strategy::Mu, 0.1, 0.6, q, 15.0, 15.0, 0.1, 0.1});
        r.rows.push_back({Strategy::Count, 0.1, 0.6, q, 15.0, 15.0, 0.1, 0.1});
    }
    bool dominance_failed = false;
    bool monotone_failed = false;
    for (const CheckOutcome& c : sweep_checks(r)) {
        if (c.name == "dominance-rate") dominance_failed = !c.pass;
        if (c.name == "monotone-q-rate") monotone_failed = !c.pass;
        if (c.name == "dominance-events") {
            EXPECT_TRUE(c.pass);
        }
    }
    EXPECT_TRUE(dominance_failed);
    EXPECT_TRUE(monotone_failed);
}

TEST(LaPipeline, RunsOnBundledSample) {
    const LoadResult loaded = load_csv(fs::path(HAWKNET_DATA_DIR) / "la_crime_sample.csv");
    const AreaIndex index = build_area_index(loaded.records);
    const History h = to_history(loaded.records, centered_projection(loaded.records), index);
    LaConfig cfg;
    cfg.em.max_iters = 40;
    const LaResult r = run_la_pipeline(h, area_names(index), cfg);
    ASSERT_EQ(r.tables.size(), 2u);
    for (const LaTable& t : r.tables) {
        EXPECT_EQ(t.rows.size(), 9u);
        EXPECT_TRUE(optimal_dominates(t));
    }
    EXPECT_LT(r.branching_ratio, 1.0);
    const fs::path dir = scratch("hk_la");
    emit_la_report(r, dir);
    for (const char* name : {"la_tables.md", "la_sets.csv", "la_params.json", "la_rate_p0.1_g1.csv", "la_events_p0.1_g0.75.csv"}) {
        EXPECT_TRUE(fs::exists(dir / name)) << name;
    }
}

TEST(LaPipeline, RejectsEventsAfterTau) {
    const History h{{{0.5, 0, 0, 0}, {8.0, 0, 0, 0}}, 8.0};
    try {
        (void)run_la_pipeline(h, {"A"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EventAfterTau);
    }
}
