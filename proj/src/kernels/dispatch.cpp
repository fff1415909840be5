#include "hawknet/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace hawknet::kernels {

#if defined(HAWKNET_WITH_AVX2)
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(HAWKNET_WITH_AVX2)
    return avx2_table_impl();
#else
    return nullptr;
#endif
}

bool cpu_supports(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(HAWKNET_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

namespace {

Isa detect() {
    if (const char* env = std::getenv("HAWKNET_ISA"); env != nullptr && std::string(env) == "scalar") {
        return Isa::Scalar;
    }
    return cpu_supports(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

} // namespace

const KernelTable& active() {
    return current().load(std::memory_order_relaxed) == Isa::Avx2 ? *avx2_table() : scalar_table();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool force_isa(Isa isa) {
    if (!cpu_supports(isa)) return false;
    current().store(isa, std::memory_order_relaxed);
    return true;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

} // namespace hawknet::kernels
