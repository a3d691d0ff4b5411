#include <cstdlib>

#include "nmgab/kernels.hpp"

namespace nmgab::kernels {

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
        if (isa_name(isa) == name) return isa;
    return std::nullopt;
}

bool isa_available(Isa isa) {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(NMGAB_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Isa::neon:
#if defined(NMGAB_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
        if (isa_available(isa)) out.push_back(isa);
    return out;
}

Isa best_isa() {
    if (isa_available(Isa::avx2)) return Isa::avx2;
    if (isa_available(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

Isa default_isa() {
    if (const char* env = std::getenv("NMGAB_ISA")) {
        if (auto isa = parse_isa(env); isa && isa_available(*isa)) return *isa;
    }
    return best_isa();
}

CoreKernel kernel_for(Isa isa) {
    if (!isa_available(isa)) throw ConfigError("kernel ISA '" + std::string(isa_name(isa)) + "' is not available");
    switch (isa) {
#if defined(NMGAB_HAVE_AVX2)
    case Isa::avx2: return &step_avx2;
#endif
#if defined(NMGAB_HAVE_NEON)
    case Isa::neon: return &step_neon;
#endif
    default: return &step_scalar;
    }
}

}  // namespace nmgab::kernels
