#include "hawknet/kernels.hpp"

#include <algorithm>

namespace hawknet::kernels {

namespace {

void gemm_scalar(std::size_t m, std::size_t n, std::size_t k,
                 const double* a, const double* b, double* c) {
    std::fill(c, c + m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a[i * k + p];
            if (aip == 0.0) continue;
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

void gemv_scalar(std::size_t m, std::size_t n, const double* a, const double* x, double* y) {
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        const double* ai = a + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += ai[j] * x[j];
        y[i] = acc;
    }
}

void gevm_scalar(std::size_t m, std::size_t n, const double* x, const double* a, double* y) {
    std::fill(y, y + n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double xi = x[i];
        const double* ai = a + i * n;
        for (std::size_t j = 0; j < n; ++j) y[j] += xi * ai[j];
    }
}

double dot_scalar(std::size_t n, const double* x, const double* y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(std::size_t n, double alpha, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kScalarTable{gemm_scalar, gemv_scalar, gevm_scalar, dot_scalar, axpy_scalar};

} // namespace

const KernelTable& scalar_table() { return kScalarTable; }

} // namespace hawknet::kernels
