#pragma once

// Per-tick core evaluation kernels. A core is packed into a dense synapse
// matrix (rows = axons, columns = neurons, entry = weight of the axon's type
// when the crossbar connects them, 0 otherwise). One tick is then
//   1. accumulate the rows of every spiking axon,
//   2. apply leak / threshold / reset / floor (LIF) or parity (XOR) per neuron.
// Both loops run over neurons and are vectorized per ISA. The scalar kernel is
// the reference; every other kernel must agree with it bit for bit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nmgab/fabric.hpp"

namespace nmgab::kernels {

enum class Isa : std::uint8_t { scalar, avx2, neon };

std::string_view isa_name(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);
bool isa_available(Isa isa);
std::vector<Isa> available_isas();
/// Widest available ISA.
Isa best_isa();
/// best_isa(), unless NMGAB_ISA names an available ISA.
Isa default_isa();

inline constexpr std::size_t kLaneWidth = 8;

struct PackedCore {
    std::size_t axons = 0;
    std::size_t neurons = 0;
    std::size_t stride = 0;  // neurons rounded up to kLaneWidth
    std::vector<std::int32_t> synapses;  // axons * stride
    std::vector<std::int32_t> leak;
    std::vector<std::int32_t> threshold;
    std::vector<std::int32_t> reset;
    std::vector<std::int32_t> xor_mask;  // -1 for XOR-mode neurons, 0 for LIF
};

/// Packs a validated core. Padding lanes never spike and keep potential 0.
PackedCore pack_core(const CoreConfig& core);

/// `axon_spikes` has `axons` entries (0/1); `potentials`, `spikes` and
/// `scratch` have `stride` entries. Potentials are updated in place.
using CoreKernel = void (*)(const PackedCore& core, std::span<const std::uint8_t> axon_spikes,
                            std::span<std::int32_t> potentials, std::span<std::uint8_t> spikes,
                            std::span<std::int32_t> scratch);

CoreKernel kernel_for(Isa isa);

void step_scalar(const PackedCore& core, std::span<const std::uint8_t> axon_spikes, std::span<std::int32_t> potentials,
                 std::span<std::uint8_t> spikes, std::span<std::int32_t> scratch);
#if defined(NMGAB_HAVE_AVX2)
void step_avx2(const PackedCore& core, std::span<const std::uint8_t> axon_spikes, std::span<std::int32_t> potentials,
               std::span<std::uint8_t> spikes, std::span<std::int32_t> scratch);
#endif
#if defined(NMGAB_HAVE_NEON)
void step_neon(const PackedCore& core, std::span<const std::uint8_t> axon_spikes, std::span<std::int32_t> potentials,
               std::span<std::uint8_t> spikes, std::span<std::int32_t> scratch);
#endif

}  // namespace nmgab::kernels
