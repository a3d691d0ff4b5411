#include <arm_neon.h>

#include "nmgab/kernels.hpp"

namespace nmgab::kernels {

// Two 128-bit halves per kLaneWidth block.
void step_neon(const PackedCore& core, std::span<const std::uint8_t> axon_spikes, std::span<std::int32_t> potentials,
               std::span<std::uint8_t> spikes, std::span<std::int32_t> scratch) {
    const std::size_t stride = core.stride;
    std::int32_t* acc = scratch.data();
    const int32x4_t zero = vdupq_n_s32(0);
    for (std::size_t j = 0; j < stride; j += 4) vst1q_s32(acc + j, zero);

    for (std::size_t a = 0; a < core.axons; ++a) {
        if (!axon_spikes[a]) continue;
        const std::int32_t* row = core.synapses.data() + a * stride;
        for (std::size_t j = 0; j < stride; j += 4) vst1q_s32(acc + j, vaddq_s32(vld1q_s32(acc + j), vld1q_s32(row + j)));
    }

    const int32x4_t one = vdupq_n_s32(1);
    for (std::size_t j = 0; j < stride; j += 4) {
        const int32x4_t in = vld1q_s32(acc + j);
        const int32x4_t pot = vld1q_s32(potentials.data() + j);
        const uint32x4_t is_xor = vreinterpretq_u32_s32(vld1q_s32(core.xor_mask.data() + j));

        const int32x4_t v = vaddq_s32(vaddq_s32(pot, in), vld1q_s32(core.leak.data() + j));
        const uint32x4_t fire_lif = vcgeq_s32(v, vld1q_s32(core.threshold.data() + j));
        const int32x4_t pot_lif = vbslq_s32(fire_lif, vld1q_s32(core.reset.data() + j), vmaxq_s32(v, zero));

        const uint32x4_t fire_xor = vceqq_s32(vandq_s32(in, one), one);
        const uint32x4_t fire = vbslq_u32(is_xor, fire_xor, fire_lif);
        const int32x4_t next = vbslq_s32(is_xor, zero, pot_lif);
        vst1q_s32(potentials.data() + j, next);

        const uint16x4_t narrow = vmovn_u32(vshrq_n_u32(fire, 31));
        spikes[j + 0] = static_cast<std::uint8_t>(vget_lane_u16(narrow, 0));
        spikes[j + 1] = static_cast<std::uint8_t>(vget_lane_u16(narrow, 1));
        spikes[j + 2] = static_cast<std::uint8_t>(vget_lane_u16(narrow, 2));
        spikes[j + 3] = static_cast<std::uint8_t>(vget_lane_u16(narrow, 3));
    }
}

}  // namespace nmgab::kernels
