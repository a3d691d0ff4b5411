#pragma once

// Data model and single-tick semantics of a TrueNorth-style neuromorphic
// fabric: axons, neurons (LIF or XOR-integrated), cores and 2-D grids.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nmgab {

/// Raised when a configuration cannot be evaluated (bad type index, bad
/// vector length, capacity overflow).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMinWeight = -256;
inline constexpr int kMaxWeight = 255;
inline constexpr int kMaxDelay = 15;
// Bound on threshold/leak/reset magnitudes; keeps 32-bit potentials exact.
inline constexpr int kMaxParameter = 1 << 24;
inline constexpr std::size_t kDefaultCoreCapacity = 256;

struct Coord {
    int x = 0;
    int y = 0;
    auto operator<=>(const Coord&) const = default;
};

std::string to_string(Coord c);

enum class NeuronMode : std::uint8_t { lif, xor_parity };

/// Where a neuron's spike goes. `host` means the off-chip sink; `core` and
/// `axon` are ignored in that case.
struct Destination {
    bool host = false;
    Coord core{};
    int axon = 0;
    int delay = 1;

    static Destination to_host(int delay = 1) { return {true, {}, 0, delay}; }
    static Destination to_axon(Coord core, int axon, int delay = 1) { return {false, core, axon, delay}; }

    bool operator==(const Destination&) const = default;
};

struct AxonEntry {
    int type_index = 0;
    std::string label;

    bool operator==(const AxonEntry&) const = default;
};

struct NeuronConfig {
    std::vector<int> weights;  // one per axon type of the owning core
    int threshold = 1;
    int leak = 0;
    int reset_potential = 0;
    NeuronMode mode = NeuronMode::lif;
    std::optional<Destination> destination;
    std::string label;

    bool operator==(const NeuronConfig&) const = default;
};

/// Dense row-major boolean matrix, rows = axons, cols = neurons. Its shape is
/// stored separately from the core so that malformed configurations can be
/// represented and reported by validate_grid.
class Crossbar {
public:
    Crossbar() = default;
    Crossbar(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool get(std::size_t axon, std::size_t neuron) const { return bits_[axon * cols_ + neuron] != 0; }
    void set(std::size_t axon, std::size_t neuron, bool on = true) { bits_[axon * cols_ + neuron] = on ? 1 : 0; }
    /// Number of connected (axon, neuron) pairs.
    std::size_t count() const;
    /// Reshapes, keeping existing connections that still fit.
    void resize(std::size_t rows, std::size_t cols);

    bool operator==(const Crossbar&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct CoreConfig {
    std::string name;
    std::vector<AxonEntry> axons;
    std::vector<NeuronConfig> neurons;
    Crossbar crossbar;
    std::size_t max_axons = kDefaultCoreCapacity;
    std::size_t max_neurons = kDefaultCoreCapacity;

    /// Appends an axon and grows the crossbar; returns its index.
    int add_axon(int type_index, std::string label = {});
    /// Appends a neuron and grows the crossbar; returns its index.
    int add_neuron(NeuronConfig neuron);
    void connect(int axon, int neuron) { crossbar.set(static_cast<std::size_t>(axon), static_cast<std::size_t>(neuron)); }
    /// Index of the first neuron/axon with the given label, or -1.
    int find_neuron(std::string_view label) const;
    int find_axon(std::string_view label) const;

    bool operator==(const CoreConfig&) const = default;
};

struct GridConfig {
    int width = 0;
    int height = 0;
    std::map<Coord, CoreConfig> cores;

    const CoreConfig& at(Coord c) const;
    bool operator==(const GridConfig&) const = default;
};

struct Violation {
    std::optional<Coord> core;
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_grid(const GridConfig& grid);
/// Validates a single core in isolation (destinations are not checked).
void validate_core_into(const CoreConfig& core, std::optional<Coord> where, ValidationReport& report);

struct NeuronStepResult {
    bool spiked = false;
    int potential = 0;

    bool operator==(const NeuronStepResult&) const = default;
};

/// Reference single-neuron update. `spiking_axon_types` is the multiset of
/// type indices of the connected axons that carry a spike this tick.
///
/// LIF: V = potential_in + sum(weights) + leak; spike iff V >= threshold,
/// then V = reset_potential, otherwise V is floored at 0.
/// XOR: spike iff sum(weights) is odd; potential is always 0.
NeuronStepResult neuron_step(const NeuronConfig& neuron, std::span<const int> spiking_axon_types, int potential_in);

/// Same update, given the already-integrated synaptic input.
NeuronStepResult neuron_fire(const NeuronConfig& neuron, long long integrated_input, int potential_in);

struct CoreStepResult {
    std::vector<std::uint8_t> spikes;
    std::vector<int> potentials;
};

/// Reference core update: each neuron sees the types of the spiking axons
/// wired to it by the crossbar.
CoreStepResult core_step(const CoreConfig& core, std::span<const std::uint8_t> axon_spikes, std::span<const int> potentials_in);

}  // namespace nmgab
