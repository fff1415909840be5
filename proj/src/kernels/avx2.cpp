// Compiled with -mavx2 -mfma. Keep this file free of standard-library
// templates so no AVX-encoded weak symbol can leak into scalar callers.

#include "hawknet/kernels.hpp"

#include <immintrin.h>

namespace hawknet::kernels {

namespace {

constexpr std::size_t kLanes = 4;
constexpr std::size_t kBlockK = 128;

void gemm_avx2(std::size_t m, std::size_t n, std::size_t k,
               const double* a, const double* b, double* c) {
    for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
    const std::size_t n_vec = n - n % kLanes;
    for (std::size_t p0 = 0; p0 < k; p0 += kBlockK) {
        const std::size_t p1 = p0 + kBlockK < k ? p0 + kBlockK : k;
        for (std::size_t i = 0; i < m; ++i) {
            double* ci = c + i * n;
            for (std::size_t p = p0; p < p1; ++p) {
                const double aip = a[i * k + p];
                if (aip == 0.0) continue;
                const __m256d av = _mm256_set1_pd(aip);
                const double* bp = b + p * n;
                std::size_t j = 0;
                for (; j < n_vec; j += kLanes) {
                    __m256d cv = _mm256_loadu_pd(ci + j);
                    cv = _mm256_fmadd_pd(av, _mm256_loadu_pd(bp + j), cv);
                    _mm256_storeu_pd(ci + j, cv);
                }
                for (; j < n; ++j) ci[j] += aip * bp[j];
            }
        }
    }
}

double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(std::size_t n, const double* x, const double* y) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + kLanes), _mm256_loadu_pd(y + i + kLanes), acc1);
    }
    for (; i + kLanes <= n; i += kLanes) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void gemv_avx2(std::size_t m, std::size_t n, const double* a, const double* x, double* y) {
    for (std::size_t i = 0; i < m; ++i) y[i] = dot_avx2(n, a + i * n, x);
}

void axpy_avx2(std::size_t n, double alpha, const double* x, double* y) {
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void gevm_avx2(std::size_t m, std::size_t n, const double* x, const double* a, double* y) {
    for (std::size_t j = 0; j < n; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) axpy_avx2(n, x[i], a + i * n, y);
}

constexpr KernelTable kAvx2Table{gemm_avx2, gemv_avx2, gevm_avx2, dot_avx2, axpy_avx2};

} // namespace

const KernelTable* avx2_table_impl() { return &kAvx2Table; }

} // namespace hawknet::kernels
