#include <algorithm>
#include <limits>

#include "nmgab/kernels.hpp"

namespace nmgab::kernels {

PackedCore pack_core(const CoreConfig& core) {
    if (core.crossbar.rows() != core.axons.size() || core.crossbar.cols() != core.neurons.size())
        throw ConfigError("pack_core: crossbar shape does not match core '" + core.name + "'");

    PackedCore p;
    p.axons = core.axons.size();
    p.neurons = core.neurons.size();
    p.stride = (p.neurons + kLaneWidth - 1) / kLaneWidth * kLaneWidth;
    p.synapses.assign(p.axons * p.stride, 0);
    p.leak.assign(p.stride, 0);
    p.threshold.assign(p.stride, std::numeric_limits<std::int32_t>::max());
    p.reset.assign(p.stride, 0);
    p.xor_mask.assign(p.stride, 0);

    for (std::size_t j = 0; j < p.neurons; ++j) {
        const auto& n = core.neurons[j];
        p.leak[j] = n.leak;
        p.threshold[j] = n.threshold;
        p.reset[j] = n.reset_potential;
        p.xor_mask[j] = n.mode == NeuronMode::xor_parity ? -1 : 0;
    }
    for (std::size_t a = 0; a < p.axons; ++a) {
        const int type = core.axons[a].type_index;
        for (std::size_t j = 0; j < p.neurons; ++j) {
            if (!core.crossbar.get(a, j)) continue;
            const auto& w = core.neurons[j].weights;
            if (type < 0 || static_cast<std::size_t>(type) >= w.size())
                throw ConfigError("pack_core: axon type " + std::to_string(type) + " has no weight in neuron '" +
                                  core.neurons[j].label + "'");
            p.synapses[a * p.stride + j] = w[static_cast<std::size_t>(type)];
        }
    }
    return p;
}

void step_scalar(const PackedCore& core, std::span<const std::uint8_t> axon_spikes, std::span<std::int32_t> potentials,
                 std::span<std::uint8_t> spikes, std::span<std::int32_t> scratch) {
    const std::size_t stride = core.stride;
    std::fill_n(scratch.begin(), stride, 0);
    for (std::size_t a = 0; a < core.axons; ++a) {
        if (!axon_spikes[a]) continue;
        const std::int32_t* row = core.synapses.data() + a * stride;
        for (std::size_t j = 0; j < stride; ++j) scratch[j] += row[j];
    }
    for (std::size_t j = 0; j < stride; ++j) {
        if (core.xor_mask[j]) {
            spikes[j] = static_cast<std::uint8_t>(scratch[j] & 1);
            potentials[j] = 0;
            continue;
        }
        const std::int32_t v = potentials[j] + scratch[j] + core.leak[j];
        const bool fire = v >= core.threshold[j];
        spikes[j] = fire ? 1 : 0;
        potentials[j] = fire ? core.reset[j] : std::max(v, 0);
    }
}

}  // namespace nmgab::kernels
