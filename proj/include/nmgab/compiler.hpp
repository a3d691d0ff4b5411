#pragma once

// Lowers a parity-check matrix and decoder parameters into a grid of
// configured cores, builds per-word input schedules and reads decoded words
// back from the host spike stream.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmgab/engine.hpp"
#include "nmgab/fabric.hpp"
#include "nmgab/gab.hpp"

namespace nmgab {

enum class Variant : std::uint8_t { xor_integrated, baseline };

std::string_view variant_name(Variant v);  // "xor" / "baseline"
std::optional<Variant> parse_variant(std::string_view name);

enum class CoreRole : std::uint8_t {
    input,
    vnu,
    cnu,
    baseline_xor,
    iteration_counter,
    parity,
    syndrome,
    or_gate,
    output,
};

std::string_view role_name(CoreRole role);
std::optional<CoreRole> parse_role(std::string_view name);

struct AxonRef {
    Coord core;
    int axon = 0;
    bool operator==(const AxonRef&) const = default;
};

struct NeuronRef {
    Coord core;
    int neuron = 0;
    bool operator==(const NeuronRef&) const = default;
};

struct PortMap {
    std::vector<AxonRef> r;  // word bits r_0..r_{N-1}
    AxonRef en;
    AxonRef rst;
    std::vector<NeuronRef> x_out;  // host outputs x'_0..x'_{N-1}
    NeuronRef done;
    NeuronRef zero;
    bool operator==(const PortMap&) const = default;
};

/// Per-word timeline, in ticks relative to the word start (the word start is
/// relative tick 1).
struct TimingPlan {
    int iteration_period = 0;  // ticks per GaB iteration
    int word_period = 0;       // ticks between consecutive word starts
    int tail = 0;              // extra ticks after the last word period
    int reset_tick = 0;        // rst_in spike
    int window_open = 0;       // first tick a host result can appear
    int window_close = 0;      // last tick of the word's host window
    bool operator==(const TimingPlan&) const = default;
};

struct DecoderLayout {
    GridConfig grid;
    Variant variant = Variant::xor_integrated;
    HMatrix h;
    DecoderParams params;
    PortMap ports;
    TimingPlan timing;
    std::map<CoreRole, Coord> roles;
    /// Neurons that implement the check-node and parity XOR functions.
    std::vector<NeuronRef> xor_neurons;

    int ticks_per_word() const { return timing.word_period; }
    std::optional<CoreRole> role_at(Coord c) const;
    bool operator==(const DecoderLayout& other) const = default;
};

class CompileError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Throws CompileError when a core would exceed its capacity, when a custom
/// tie threshold is requested, or when a parameter falls outside the fabric's
/// ranges.
DecoderLayout compile(const HMatrix& H, const DecoderParams& params, Variant variant);

/// Threshold of the iteration counter's accumulator neuron.
int iteration_threshold(const DecoderParams& params, Variant variant);

/// Total ticks to decode w_c words back to back.
std::uint64_t predicted_ticks(Variant variant, std::uint64_t w_c, int max_iter);

struct WordWindow {
    std::uint64_t start = 0;  // absolute tick of the word's inputs
    std::uint64_t first = 0;  // host window, inclusive
    std::uint64_t last = 0;
};

struct WordSchedule {
    InputSchedule inputs;
    std::vector<WordWindow> windows;
    std::uint64_t span = 0;
};

WordSchedule make_word_schedule(const DecoderLayout& layout, const std::vector<BitVector>& words);

struct WordResult {
    bool observed = false;  // a done spike arrived inside the window
    BitVector x_prime;
    bool converged = false;
    std::uint64_t output_tick = 0;

    bool operator==(const WordResult&) const = default;
};

/// Takes the first done delivery inside each window; x' and the zero flag
/// are read at the same tick.
std::vector<WordResult> extract_results(const DecoderLayout& layout, const WordSchedule& schedule,
                                        const TraceLog& trace);

struct DecodeRun {
    std::vector<WordResult> results;
    TraceLog trace;
    DeliveryStats stats;
    std::uint64_t ticks = 0;
    std::uint64_t last_host_tick = 0;
};

DecodeRun run_decoder(const DecoderLayout& layout, const std::vector<BitVector>& words, EngineOptions options = {});

}  // namespace nmgab
