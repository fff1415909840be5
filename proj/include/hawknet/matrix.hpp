#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hawknet {

using Vector = std::vector<double>;

// Dense row-major matrix with value semantics.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] static Matrix identity(std::size_t n);
    [[nodiscard]] static Matrix from_row_major(std::size_t rows, std::size_t cols, std::span<const double> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    [[nodiscard]] double* data() noexcept { return data_.data(); }
    [[nodiscard]] const double* data() const noexcept { return data_.data(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return data_; }

    // Copies the [r0, r0+rows) x [c0, c0+cols) sub-block.
    [[nodiscard]] Matrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& src);

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

[[nodiscard]] Matrix operator+(Matrix lhs, const Matrix& rhs);
[[nodiscard]] Matrix operator-(Matrix lhs, const Matrix& rhs);
[[nodiscard]] Matrix operator*(Matrix lhs, double s);
[[nodiscard]] Matrix operator*(double s, Matrix rhs);
[[nodiscard]] Matrix operator*(const Matrix& lhs, const Matrix& rhs);
[[nodiscard]] Vector operator*(const Matrix& lhs, std::span<const double> x);

// x^T M as a vector.
[[nodiscard]] Vector left_multiply(std::span<const double> x, const Matrix& m);
[[nodiscard]] Matrix transpose(const Matrix& m);

// Maximum absolute column sum.
[[nodiscard]] double norm_1(const Matrix& m);
[[nodiscard]] double max_abs(const Matrix& m);
[[nodiscard]] bool all_finite(const Matrix& m);

// Solves a x = b for square a by LU with partial pivoting. Throws
// Error(NonFinite) when a is numerically singular.
[[nodiscard]] Matrix lu_solve(Matrix a, Matrix b);

[[nodiscard]] Vector hadamard(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double sum(std::span<const double> v);
[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

} // namespace hawknet
