#include <cstdlib>
#include <string>

#include "chaoskit/simd/kernels.hpp"

namespace chaoskit::simd {

#if defined(CHAOSKIT_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif
#if defined(__aarch64__)
namespace neon {
extern const KernelTable kTable;
}
#endif

const KernelTable* avx2_kernels() {
#if defined(CHAOSKIT_HAVE_AVX2)
    static const bool usable = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return usable ? &avx2::kTable : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(__aarch64__)
    return &neon::kTable;
#else
    return nullptr;
#endif
}

std::vector<const KernelTable*> available_kernels() {
    std::vector<const KernelTable*> out{&scalar_kernels()};
    if (auto* t = avx2_kernels()) out.push_back(t);
    if (auto* t = neon_kernels()) out.push_back(t);
    return out;
}

const KernelTable* find_kernels(std::string_view name) {
    for (auto* t : available_kernels())
        if (name == t->name) return t;
    return nullptr;
}

const KernelTable& active_kernels() {
    static const KernelTable* chosen = [] {
        if (const char* env = std::getenv("CHAOSKIT_SIMD"); env && std::string_view(env) != "auto") {
            if (auto* t = find_kernels(env)) return t;
        }
        return available_kernels().back();
    }();
    return *chosen;
}

}  // namespace chaoskit::simd
