#pragma once

// Builders for the logic primitives used by the decoder (register, majority,
// AND/OR/NOR, baseline two-layer XOR, XOR-integrated neuron) and a small
// harness that drives a fragment on a private engine instance.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmgab/fabric.hpp"

namespace nmgab {

enum class PortKind : std::uint8_t {
    data,   // carries an operand
    bias,   // must spike on every evaluated tick
    seed,   // spikes once at the first tick; the fragment keeps itself biased afterwards
    reset,  // clears state; never driven by evaluate_combinational
};

struct InputPort {
    std::string name;
    Coord core;
    int axon = 0;
    PortKind kind = PortKind::data;
};

struct OutputPort {
    std::string name;
    Coord core;
    int neuron = 0;
};

struct CircuitFragment {
    GridConfig grid;
    std::vector<InputPort> inputs;
    std::vector<OutputPort> outputs;
    /// Ticks between an input pattern arriving and the output neurons spiking.
    int latency_ticks = 0;

    /// Number of ticks the fragment spans for one evaluation (latency + 1).
    int evaluation_ticks() const { return latency_ticks + 1; }
    std::vector<InputPort> data_inputs() const;
    const InputPort& input(std::string_view name) const;
    std::size_t neuron_count() const;
};

/// Bits 1..127: Q_i spikes every tick from the first D_i spike until Reset.
CircuitFragment build_register(int bits);
/// Arity 3: spike iff >= 2 of {T, A, B}. Arity 4: T weighs 2, spike iff the
/// weighted sum >= 3. Arity 2: T weighs 2, spike iff 2T + A >= 2 (follows T).
CircuitFragment build_majority(int inputs);
CircuitFragment build_and2();
CircuitFragment build_or2();

enum class BiasSource : std::uint8_t { scheduled, self_feeding };
/// Out = NOT(A OR B), gated by the bias axon S. With a self-feeding bias a
/// neuron re-arms S every tick after a single seed spike.
CircuitFragment build_nor2(BiasSource bias = BiasSource::scheduled);

/// n inputs (2..255): layer 1 counts spikes (p_k fires iff >= k inputs fire),
/// layer 2 alternates +1/-1 over p_1..p_n. n + 1 LIF neurons on two cores.
CircuitFragment build_xor_baseline(int n);
/// n inputs (2..256) on a single XOR-mode neuron.
CircuitFragment build_xor_integrated(int n);

/// Weights and leak of a threshold-1 neuron computing majority over `arity`
/// inputs, ties broken by the tie input (odd arity: equal weights; even
/// arity: tie input weighs 2).
struct MajorityWeights {
    int tie_weight = 1;
    int input_weight = 1;
    int leak = 0;
    int max_sum = 0;      // weighted sum with every input spiking
    int fire_at = 0;      // weighted sum needed to spike before leak
};
MajorityWeights majority_weights(int arity);

/// Drives port spikes (tick, port name) plus every bias port on ticks
/// 1..ticks and returns, for each tick, which outputs spiked.
std::vector<std::vector<bool>> run_fragment(const CircuitFragment& frag,
                                            const std::vector<std::pair<std::uint64_t, std::string>>& port_spikes,
                                            std::uint64_t ticks);

/// Applies `pattern` to the data ports at tick 1 on fresh state, drives the
/// bias/seed ports, and samples the outputs at tick 1 + latency_ticks.
std::vector<bool> evaluate_combinational(const CircuitFragment& frag, const std::vector<bool>& pattern);

}  // namespace nmgab
