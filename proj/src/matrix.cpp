#include "hawknet/matrix.hpp"

#include "hawknet/error.hpp"
#include "hawknet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace hawknet {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonStationary: return "NonStationary";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::BadScale: return "BadScale";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EventAfterTau: return "EventAfterTau";
    case ErrorCode::TimeBeforeTau: return "TimeBeforeTau";
    case ErrorCode::ZeroBaseline: return "ZeroBaseline";
    case ErrorCode::BudgetNegative: return "BudgetNegative";
    case ErrorCode::InfeasiblePlan: return "InfeasiblePlan";
    case ErrorCode::TooFewEvents: return "TooFewEvents";
    case ErrorCode::NoImprovement: return "NoImprovement";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::UnknownArea: return "UnknownArea";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_row_major(std::size_t rows, std::size_t cols, std::span<const double> values) {
    if (values.size() != rows * cols) {
        throw Error(ErrorCode::InvalidArgument, "row-major data has wrong length");
    }
    Matrix m(rows, cols);
    std::copy(values.begin(), values.end(), m.data_.begin());
    return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
    Matrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::copy_n(data_.data() + (r0 + i) * cols_ + c0, cols, out.data() + i * cols);
    }
    return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& src) {
    for (std::size_t i = 0; i < src.rows(); ++i) {
        std::copy_n(src.data() + i * src.cols(), src.cols(), data_.data() + (r0 + i) * cols_ + c0);
    }
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    kernels::active().axpy(data_.size(), 1.0, rhs.data(), data_.data());
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    kernels::active().axpy(data_.size(), -1.0, rhs.data(), data_.data());
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Matrix lhs, double s) { return lhs *= s; }
Matrix operator*(double s, Matrix rhs) { return rhs *= s; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw Error(ErrorCode::InvalidArgument, "matrix product shape mismatch");
    Matrix out(lhs.rows(), rhs.cols());
    kernels::active().gemm(lhs.rows(), rhs.cols(), lhs.cols(), lhs.data(), rhs.data(), out.data());
    return out;
}

Vector operator*(const Matrix& lhs, std::span<const double> x) {
    if (lhs.cols() != x.size()) throw Error(ErrorCode::InvalidArgument, "matrix-vector shape mismatch");
    Vector y(lhs.rows());
    kernels::active().gemv(lhs.rows(), lhs.cols(), lhs.data(), x.data(), y.data());
    return y;
}

Vector left_multiply(std::span<const double> x, const Matrix& m) {
    if (m.rows() != x.size()) throw Error(ErrorCode::InvalidArgument, "vector-matrix shape mismatch");
    Vector y(m.cols());
    kernels::active().gevm(m.rows(), m.cols(), x.data(), m.data(), y.data());
    return y;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

double norm_1(const Matrix& m) {
    Vector col(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) col[j] += std::abs(m(i, j));
    return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

double max_abs(const Matrix& m) {
    double out = 0.0;
    for (double v : m.values()) out = std::max(out, std::abs(v));
    return out;
}

bool all_finite(const Matrix& m) {
    return std::all_of(m.values().begin(), m.values().end(), [](double v) { return std::isfinite(v); });
}

Matrix lu_solve(Matrix a, Matrix b) {
    const std::size_t n = a.rows();
    if (!a.square() || b.rows() != n) throw Error(ErrorCode::InvalidArgument, "lu_solve shape mismatch");
    const std::size_t nrhs = b.cols();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                piv = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best)) {
            throw Error(ErrorCode::NonFinite, "singular system in lu_solve");
        }
        if (piv != col) {
            std::swap_ranges(a.row(col).begin(), a.row(col).end(), a.row(piv).begin());
            std::swap_ranges(b.row(col).begin(), b.row(col).end(), b.row(piv).begin());
        }
        const double inv = 1.0 / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            kernels::active().axpy(n - col - 1, -f, &a(col, col + 1), &a(r, col + 1));
            kernels::active().axpy(nrhs, -f, b.row(col).data(), b.row(r).data());
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        auto bi = b.row(ii);
        for (std::size_t k = ii + 1; k < n; ++k) {
            const double f = a(ii, k);
            if (f != 0.0) kernels::active().axpy(nrhs, -f, b.row(k).data(), bi.data());
        }
        const double inv = 1.0 / a(ii, ii);
        for (double& v : bi) v *= inv;
    }
    return b;
}

Vector hadamard(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "hadamard length mismatch");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "dot length mismatch");
    return kernels::active().dot(a.size(), a.data(), b.data());
}

} // namespace hawknet
