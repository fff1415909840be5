#pragma once

// Dense linear-algebra inner loops. Every kernel has a portable scalar
// reference implementation and, on x86-64, an AVX2/FMA variant. The variant is
// chosen once at startup from the CPU feature flags; HAWKNET_ISA=scalar in the
// environment forces the reference path.

#include <cstddef>
#include <string_view>

namespace hawknet::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    // c[m x n] = a[m x k] * b[k x n], all row-major and densely packed.
    void (*gemm)(std::size_t m, std::size_t n, std::size_t k,
                 const double* a, const double* b, double* c);
    // y[m] = a[m x n] * x[n]
    void (*gemv)(std::size_t m, std::size_t n, const double* a, const double* x, double* y);
    // y[n] = x[m] * a[m x n]   (row vector times matrix)
    void (*gevm)(std::size_t m, std::size_t n, const double* x, const double* a, double* y);
    double (*dot)(std::size_t n, const double* x, const double* y);
    // y += alpha * x
    void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
};

[[nodiscard]] const KernelTable& scalar_table();

// nullptr when the AVX2 variant was not compiled in.
[[nodiscard]] const KernelTable* avx2_table();

[[nodiscard]] bool cpu_supports(Isa isa);

// Kernel table used by the rest of the library.
[[nodiscard]] const KernelTable& active();
[[nodiscard]] Isa active_isa();

// Overrides the automatic choice. Returns false (and changes nothing) when the
// requested ISA is unavailable on this build or CPU.
bool force_isa(Isa isa);

[[nodiscard]] std::string_view isa_name(Isa isa);

} // namespace hawknet::kernels
