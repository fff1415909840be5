#include "hawknet/error.hpp"
#include "hawknet/model.hpp"
#include "hawknet/model_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>

using namespace hawknet;

namespace {

NetworkParams scalar_params(double a, double omega) {
    return NetworkParams{1, SingleGaussianBackground{{0.03}, 0.25}, Matrix{{a}}, omega, 0.1};
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no hawknet::Error thrown";
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(Validate, ScalarBranchingRatio) {
    const ValidatedParams v = validate(scalar_params(0.1, 0.2));
    EXPECT_NEAR(v.spectral_radius(), 0.1, 1e-12);
    EXPECT_NEAR(v.branching_ratio(), 0.5, 1e-12);
    EXPECT_EQ(v.mu(), (Vector{0.03}));
}

TEST(Validate, RejectsBadParameters) {
    EXPECT_EQ(code_of([] { (void)validate(scalar_params(0.3, 0.2)); }), ErrorCode::NonStationary);
    EXPECT_EQ(code_of([] { (void)validate(scalar_params(-0.1, 0.2)); }), ErrorCode::NegativeEntry);
    EXPECT_EQ(code_of([] { (void)validate(scalar_params(0.1, 0.0)); }), ErrorCode::BadScale);
    EXPECT_EQ(code_of([] {
                  auto p = scalar_params(0.1, 0.2);
                  p.sigma = 0.0;
                  (void)validate(p);
              }),
              ErrorCode::BadScale);
    EXPECT_EQ(code_of([] {
                  auto p = scalar_params(0.1, 0.2);
                  p.n = 2;
                  (void)validate(p);
              }),
              ErrorCode::InvalidArgument);
}

TEST(Validate, LargeRescaledNetworkIsStationary) {
    const std::size_t n = 200;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 1.5 * std::fmod(0.6180339887 * static_cast<double>(i * n + j), 1.0);
    // Row sums bound the spectral radius of a nonnegative matrix.
    double max_row = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_row = std::max(max_row, sum(a.row(i)));
    a *= 0.19 / max_row;
    const ValidatedParams v =
        validate(NetworkParams{n, SingleGaussianBackground{Vector(n, 0.02), 0.25}, a, 0.2, 0.1});
    EXPECT_LT(v.branching_ratio(), 1.0);
}

TEST(BackgroundMass, Variants) {
    EXPECT_EQ(background_mass(SingleGaussianBackground{{0.03}, 0.25}), (Vector{0.03}));
    WeightedKdeBackground kde{Matrix{{1.0, 2.0}}, 0.5, 7.0, {{0, 0}, {1, 1}}};
    const Vector m = background_mass(kde);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_DOUBLE_EQ(m[0], 3.0 / 7.0);
    kde.beta = Matrix(1, 2);
    EXPECT_EQ(background_mass(kde), (Vector{0.0}));
    kde.beta = Matrix{{2.0, 4.0}};
    EXPECT_DOUBLE_EQ(background_mass(kde)[0], 6.0 / 7.0);
}

TEST(Canonicalize, Conventions) {
    EXPECT_NEAR(canonicalize_triggering(Matrix{{0.5}}, 0.2, true)(0, 0), 0.1, 1e-15);
    EXPECT_EQ(canonicalize_triggering(Matrix{{0.1}}, 0.2, false), Matrix{{0.1}});
    EXPECT_EQ(canonicalize_triggering(Matrix(2, 2), 0.2, true), Matrix(2, 2));
    EXPECT_EQ(code_of([] { (void)canonicalize_triggering(Matrix{{0.1}}, -1.0, true); }), ErrorCode::BadScale);
}

TEST(InterventionPlan, DerivedVectorsAndFeasibility) {
    InterventionPlan plan{{0, 1, 0}, 0.1, 0.6, 10.0, 20.0, {2.0, 3.0, 1.0}, 3.0};
    const Vector rho = plan.rho();
    const Vector nu = plan.nu();
    EXPECT_DOUBLE_EQ(rho[0], 0.6);
    EXPECT_DOUBLE_EQ(rho[1], 1.0);
    EXPECT_DOUBLE_EQ(nu[2], 0.1);
    EXPECT_DOUBLE_EQ(plan.spent(), 3.0);
    EXPECT_TRUE(plan.feasible());
    EXPECT_NO_THROW(plan.check(3));
    plan.budget = 2.5;
    EXPECT_EQ(code_of([&] { plan.check(3); }), ErrorCode::InfeasiblePlan);
}

TEST(History, NormalizeSortsAndChecksRange) {
    History h{{{2.0, 0, 0, 1}, {1.0, 0, 0, 0}}, 3.0};
    h.normalize();
    EXPECT_EQ(h.events.front().t, 1.0);
    EXPECT_EQ(h.counts(2), (Vector{1.0, 1.0}));
    History bad{{{4.0, 0, 0, 0}}, 3.0};
    EXPECT_THROW(bad.normalize(), Error);
}

TEST(ModelIo, ParamsRoundTripIsExact) {
    NetworkParams p{2, SingleGaussianBackground{{0.0123456789, 0.05}, 0.25}, Matrix{{0.01, 0.02}, {0.1 / 3.0, 0.0}}, 0.2,
                    0.1};
    EXPECT_EQ(params_from_json(params_to_json(p)), p);

    NetworkParams k{1, WeightedKdeBackground{Matrix{{0.7, 1.0 / 3.0}}, 0.42, 7.0, {{1.5, -2.25}, {0.1, 0.2}}},
                    Matrix{{0.05}}, 1.3, 0.3};
    const auto path = std::filesystem::temp_directory_path() / "hawknet_params_roundtrip.json";
    write_params(path, k);
    EXPECT_EQ(read_params(path), k);
    std::filesystem::remove(path);
}

TEST(ModelIo, NormalizedConventionIsConvertedOnLoad) {
    nlohmann::json doc = params_to_json(scalar_params(0.5, 0.2));
    doc["convention"] = "normalized";
    EXPECT_NEAR(params_from_json(doc).A(0, 0), 0.1, 1e-15);
}

TEST(ModelIo, EventsCsvRoundTrip) {
    const std::vector<Event> events{{0.1, 1.0 / 3.0, -2.5, 0}, {7.25, 1e-9, 3.0, 2}};
    std::ostringstream out;
    write_events_csv(out, events);
    EXPECT_EQ(out.str().substr(0, 11), "t,x,y,node\n");
    const auto path = std::filesystem::temp_directory_path() / "hawknet_events_roundtrip.csv";
    write_events_csv(path, events);
    EXPECT_EQ(read_events_csv(path), events);
    const History h = read_history(path);
    EXPECT_EQ(h.horizon, 7.25);
    std::filesystem::remove(path);
}

TEST(ModelIo, Formatting) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_fixed(2.0 / 3.0, 3), "0.667");
}
