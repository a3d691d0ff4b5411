#include <immintrin.h>

#include "nmgab/kernels.hpp"

namespace nmgab::kernels {

void step_avx2(const PackedCore& core, std::span<const std::uint8_t> axon_spikes, std::span<std::int32_t> potentials,
               std::span<std::uint8_t> spikes, std::span<std::int32_t> scratch) {
    const std::size_t stride = core.stride;
    std::int32_t* acc = scratch.data();
    const __m256i zero = _mm256_setzero_si256();
    for (std::size_t j = 0; j < stride; j += 8) _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + j), zero);

    for (std::size_t a = 0; a < core.axons; ++a) {
        if (!axon_spikes[a]) continue;
        const std::int32_t* row = core.synapses.data() + a * stride;
        for (std::size_t j = 0; j < stride; j += 8) {
            __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + j));
            s = _mm256_add_epi32(s, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + j)));
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + j), s);
        }
    }

    const __m256i one = _mm256_set1_epi32(1);
    for (std::size_t j = 0; j < stride; j += 8) {
        const auto load = [j](const std::vector<std::int32_t>& v) {
            return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v.data() + j));
        };
        const __m256i in = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + j));
        const __m256i pot = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(potentials.data() + j));
        const __m256i xor_mask = load(core.xor_mask);

        const __m256i v = _mm256_add_epi32(_mm256_add_epi32(pot, in), load(core.leak));
        // v >= threshold  <=>  !(threshold > v)
        const __m256i below = _mm256_cmpgt_epi32(load(core.threshold), v);
        const __m256i fire_lif = _mm256_andnot_si256(below, _mm256_set1_epi32(-1));
        const __m256i pot_lif = _mm256_blendv_epi8(_mm256_max_epi32(v, zero), load(core.reset), fire_lif);

        const __m256i fire_xor = _mm256_cmpeq_epi32(_mm256_and_si256(in, one), one);
        const __m256i fire = _mm256_blendv_epi8(fire_lif, fire_xor, xor_mask);
        const __m256i next = _mm256_andnot_si256(xor_mask, pot_lif);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(potentials.data() + j), next);

        const int bits = _mm256_movemask_ps(_mm256_castsi256_ps(fire));
        for (int k = 0; k < 8; ++k) spikes[j + static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((bits >> k) & 1);
    }
}

}  // namespace nmgab::kernels
