#pragma once

// Tick-accurate driver for a GridConfig. Each tick: gather the axon spikes due
// this tick (scheduled inputs plus routed spikes), evaluate every core, then
// route the produced spikes to their destination at tick + delay. Cores are
// evaluated independently and joined before routing, so the result does not
// depend on evaluation order or thread count.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "nmgab/fabric.hpp"
#include "nmgab/kernels.hpp"

namespace nmgab {

/// A spike present on an axon (or delivered to the host) at `tick`.
struct SpikeEvent {
    std::uint64_t tick = 0;
    Destination target;  // `delay` is unused here
    std::optional<std::pair<Coord, int>> source;

    static SpikeEvent input(std::uint64_t tick, Coord core, int axon) {
        return {tick, Destination::to_axon(core, axon), std::nullopt};
    }
};

struct InputSchedule {
    std::vector<SpikeEvent> events;  // sorted by tick
    std::uint64_t max_tick = 0;

    void add(std::uint64_t tick, Coord core, int axon);
    /// Stable-sorts events and raises max_tick to cover them.
    void finalize();
};

struct NeuronSpike {
    std::uint64_t tick = 0;
    Coord core;
    int neuron = 0;

    bool operator==(const NeuronSpike&) const = default;
};

struct HostDelivery {
    std::uint64_t tick = 0;  // delivery tick (production tick + delay)
    Coord core;              // producing core
    int neuron = 0;

    bool operator==(const HostDelivery&) const = default;
};

struct TraceLog {
    std::vector<NeuronSpike> spikes;  // ordered by tick, then core, then neuron
    std::vector<HostDelivery> host;   // ordered by delivery tick
    std::uint64_t total_spike_count = 0;
    bool spikes_recorded = true;

    bool operator==(const TraceLog&) const = default;
};

/// Number of neuron spikes in the trace, optionally restricted to a set of
/// cores. Requires a trace with recorded spikes unless no filter is given.
std::uint64_t spike_count(const TraceLog& trace, const std::optional<std::set<Coord>>& filter = std::nullopt);

struct EngineOptions {
    kernels::Isa isa = kernels::default_isa();
    unsigned threads = 1;
    bool record_spikes = true;
    /// Cores are evaluated in reverse order when set; results must not change.
    bool reverse_order = false;
};

/// Spike bookkeeping; produced == to_axon + to_host + dropped + pending.
/// Spikes that land on an axon already carrying a spike still count as
/// delivered.
struct DeliveryStats {
    std::uint64_t produced = 0;
    std::uint64_t to_axon = 0;
    std::uint64_t to_host = 0;
    std::uint64_t dropped = 0;  // no destination
    std::uint64_t pending = 0;
};

class WorkerPool;
struct CompiledGrid;

class SimulationState {
public:
    std::uint64_t tick() const { return tick_; }
    const TraceLog& trace() const { return trace_; }
    const DeliveryStats& stats() const { return stats_; }
    const GridConfig& grid() const;
    /// Membrane potentials of one core (unpadded).
    std::vector<int> potentials(Coord core) const;
    /// Per-neuron spike totals of one core.
    std::vector<std::uint64_t> spike_totals(Coord core) const;
    /// True when no spike is queued for a future tick.
    bool quiescent_queue() const { return stats_.pending == 0; }

private:
    friend SimulationState init(const GridConfig&, InputSchedule, EngineOptions);
    friend void step(SimulationState&);
    friend void inject_input(SimulationState&, Coord, int);

    std::shared_ptr<const CompiledGrid> grid_;
    std::shared_ptr<const InputSchedule> schedule_;
    std::shared_ptr<WorkerPool> pool_;
    kernels::CoreKernel kernel_ = nullptr;
    bool reverse_order_ = false;
    std::size_t next_event_ = 0;
    std::uint64_t tick_ = 0;
    std::vector<std::vector<std::int32_t>> potentials_;
    std::vector<std::vector<std::uint8_t>> spikes_;
    std::vector<std::vector<std::int32_t>> scratch_;
    std::vector<std::vector<std::uint64_t>> spike_totals_;
    // ring_[slot][core] holds the axon vector due at ticks congruent to slot.
    std::vector<std::vector<std::vector<std::uint8_t>>> ring_;
    std::vector<std::uint64_t> ring_count_;
    std::vector<std::vector<HostDelivery>> host_ring_;
    TraceLog trace_;
    DeliveryStats stats_;
};

/// Builds the initial state (tick 0, zero potentials). The first call to step
/// evaluates tick 1. Throws ConfigError when the grid or schedule is invalid.
SimulationState init(const GridConfig& grid, InputSchedule schedule, EngineOptions options = {});

/// Advances one tick.
void step(SimulationState& state);

/// Adds an input spike on (core, axon) for the next tick, on top of the
/// schedule. Lets a caller branch a copied state on different inputs.
void inject_input(SimulationState& state, Coord core, int axon);

/// Steps until state.tick() == until_tick and returns the trace.
const TraceLog& run(SimulationState& state, std::uint64_t until_tick);

}  // namespace nmgab
