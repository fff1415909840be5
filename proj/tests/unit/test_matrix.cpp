#include "hawknet/error.hpp"
#include "hawknet/matrix.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hawknet;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(gen);
    return m;
}

} // namespace

TEST(Matrix, ProductMatchesTripleLoop) {
    std::mt19937_64 gen(3);
    const Matrix a = random_matrix(6, 9, gen);
    const Matrix b = random_matrix(9, 4, gen);
    const Matrix c = a * b;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 9; ++k) s += a(i, k) * b(k, j);
            EXPECT_NEAR(c(i, j), s, 1e-14);
        }
}

TEST(Matrix, VectorProductsAgreeWithTranspose) {
    std::mt19937_64 gen(4);
    const Matrix a = random_matrix(5, 3, gen);
    const Vector x{0.5, -1.0, 2.0, 0.25, 3.0};
    const Vector left = left_multiply(x, a);
    const Vector via_t = transpose(a) * x;
    ASSERT_EQ(left.size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(left[j], via_t[j], 1e-14);
}

TEST(Matrix, BlocksRoundTrip) {
    Matrix m(4, 4);
    const Matrix patch{{1.0, 2.0}, {3.0, 4.0}};
    m.set_block(1, 2, patch);
    EXPECT_EQ(m.block(1, 2, 2, 2), patch);
    EXPECT_EQ(m(0, 0), 0.0);
}

TEST(Matrix, LuSolveRecoversKnownSolution) {
    std::mt19937_64 gen(5);
    Matrix a = random_matrix(7, 7, gen);
    for (std::size_t i = 0; i < 7; ++i) a(i, i) += 4.0;
    const Matrix x = random_matrix(7, 2, gen);
    const Matrix b = a * x;
    const Matrix solved = lu_solve(a, b);
    EXPECT_LT(max_abs(solved - x), 1e-12);
}

TEST(Matrix, LuSolveRejectsSingular) {
    const Matrix a{{1.0, 2.0}, {2.0, 4.0}};
    EXPECT_THROW((void)lu_solve(a, Matrix::identity(2)), Error);
}

TEST(Matrix, NormsAndReductions) {
    const Matrix m{{1.0, -3.0}, {-2.0, 0.5}};
    EXPECT_DOUBLE_EQ(norm_1(m), 3.5);
    EXPECT_DOUBLE_EQ(max_abs(m), 3.0);
    EXPECT_TRUE(all_finite(m));
    const Vector a{1.0, 2.0, 3.0};
    const Vector b{4.0, 5.0, 6.0};
    EXPECT_DOUBLE_EQ(dot(a, b), 32.0);
    EXPECT_DOUBLE_EQ(sum(a), 6.0);
    EXPECT_EQ(hadamard(a, b), (Vector{4.0, 10.0, 18.0}));
}
