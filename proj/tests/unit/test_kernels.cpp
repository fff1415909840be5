#include "hawknet/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace hawknet::kernels;

namespace {

std::vector<double> random_values(std::size_t count, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(count);
    for (double& x : v) x = dist(gen);
    return v;
}

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double scale) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-13 * scale) << "index " << i;
}

class SimdEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        simd_ = avx2_table();
        if (simd_ == nullptr || !cpu_supports(Isa::Avx2)) GTEST_SKIP() << "AVX2 variant unavailable";
    }
    const KernelTable* simd_{nullptr};
    std::mt19937_64 gen_{7};
};

} // namespace

TEST_F(SimdEquivalence, GemmMatchesScalarOnRaggedShapes) {
    for (std::size_t m : {1u, 3u, 7u, 16u, 33u}) {
        for (std::size_t n : {1u, 2u, 5u, 8u, 31u}) {
            for (std::size_t k : {1u, 4u, 9u, 130u, 257u}) {
                const auto a = random_values(m * k, gen_);
                const auto b = random_values(k * n, gen_);
                std::vector<double> ref(m * n, 99.0);
                std::vector<double> out(m * n, -99.0);
                scalar_table().gemm(m, n, k, a.data(), b.data(), ref.data());
                simd_->gemm(m, n, k, a.data(), b.data(), out.data());
                expect_close(ref, out, static_cast<double>(k));
            }
        }
    }
}

TEST_F(SimdEquivalence, VectorKernelsMatchScalar) {
    for (std::size_t m : {1u, 3u, 4u, 17u, 64u}) {
        for (std::size_t n : {1u, 5u, 8u, 29u}) {
            const auto a = random_values(m * n, gen_);
            const auto xn = random_values(n, gen_);
            const auto xm = random_values(m, gen_);
            std::vector<double> ref(m), out(m);
            scalar_table().gemv(m, n, a.data(), xn.data(), ref.data());
            simd_->gemv(m, n, a.data(), xn.data(), out.data());
            expect_close(ref, out, static_cast<double>(n));

            std::vector<double> ref2(n), out2(n);
            scalar_table().gevm(m, n, xm.data(), a.data(), ref2.data());
            simd_->gevm(m, n, xm.data(), a.data(), out2.data());
            expect_close(ref2, out2, static_cast<double>(m));
        }
    }
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 100u, 1001u}) {
        const auto x = random_values(n, gen_);
        const auto y = random_values(n, gen_);
        EXPECT_NEAR(scalar_table().dot(n, x.data(), y.data()), simd_->dot(n, x.data(), y.data()),
                    1e-13 * static_cast<double>(n + 1));
        std::vector<double> ref = y;
        std::vector<double> out = y;
        scalar_table().axpy(n, 0.37, x.data(), ref.data());
        simd_->axpy(n, 0.37, x.data(), out.data());
        expect_close(ref, out, 1.0);
    }
}

TEST(KernelDispatch, ForceScalarAndBack) {
    const Isa original = active_isa();
    EXPECT_TRUE(force_isa(Isa::Scalar));
    EXPECT_EQ(active_isa(), Isa::Scalar);
    EXPECT_EQ(&active(), &scalar_table());
    EXPECT_EQ(isa_name(Isa::Scalar), "scalar");
    if (avx2_table() != nullptr && cpu_supports(Isa::Avx2)) {
        EXPECT_TRUE(force_isa(Isa::Avx2));
        EXPECT_EQ(&active(), avx2_table());
    } else {
        EXPECT_FALSE(force_isa(Isa::Avx2));
    }
    force_isa(original);
}

TEST(KernelScalar, GemmSmallHandComputed) {
    const std::vector<double> a{1, 2, 3, 4, 5, 6};    // 2x3
    const std::vector<double> b{7, 8, 9, 10, 11, 12}; // 3x2
    std::vector<double> c(4, -1.0);
    scalar_table().gemm(2, 2, 3, a.data(), b.data(), c.data());
    EXPECT_EQ(c, (std::vector<double>{58, 64, 139, 154}));
}
