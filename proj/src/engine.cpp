#include "nmgab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <functional>
#include <map>
#include <thread>

namespace nmgab {

namespace {

constexpr std::size_t kRingSlots = kMaxDelay + 1;

enum class RouteKind : std::uint8_t { none, axon, host };

struct Route {
    RouteKind kind = RouteKind::none;
    std::size_t core = 0;
    std::size_t axon = 0;
    int delay = 1;
};

}  // namespace

struct CompiledGrid {
    GridConfig config;
    std::vector<Coord> coords;
    std::map<Coord, std::size_t> index;
    std::vector<kernels::PackedCore> packed;
    std::vector<std::vector<Route>> routes;
};

// Fixed set of threads that evaluate a strided share of the cores each tick.
class WorkerPool {
public:
    explicit WorkerPool(unsigned participants)
        : participants_(participants), start_(participants), done_(participants) {
        for (unsigned id = 1; id < participants_; ++id) threads_.emplace_back([this, id] { loop(id); });
    }

    ~WorkerPool() {
        stop_.store(true);
        start_.arrive_and_wait();
        for (auto& t : threads_) t.join();
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    unsigned participants() const { return participants_; }

    void run(const std::function<void(unsigned, unsigned)>& job) {
        job_ = &job;
        start_.arrive_and_wait();
        job(0, participants_);
        done_.arrive_and_wait();
    }

private:
    void loop(unsigned id) {
        for (;;) {
            start_.arrive_and_wait();
            if (stop_.load()) return;
            (*job_)(id, participants_);
            done_.arrive_and_wait();
        }
    }

    unsigned participants_;
    std::barrier<> start_;
    std::barrier<> done_;
    std::atomic<bool> stop_{false};
    const std::function<void(unsigned, unsigned)>* job_ = nullptr;
    std::vector<std::thread> threads_;
};

void InputSchedule::add(std::uint64_t tick, Coord core, int axon) {
    events.push_back(SpikeEvent::input(tick, core, axon));
    max_tick = std::max(max_tick, tick);
}

void InputSchedule::finalize() {
    std::stable_sort(events.begin(), events.end(),
                     [](const SpikeEvent& a, const SpikeEvent& b) { return a.tick < b.tick; });
    for (const auto& e : events) max_tick = std::max(max_tick, e.tick);
}

std::uint64_t spike_count(const TraceLog& trace, const std::optional<std::set<Coord>>& filter) {
    if (!filter) return trace.total_spike_count;
    if (!trace.spikes_recorded) throw ConfigError("spike_count: core filter needs a trace with recorded spikes");
    return static_cast<std::uint64_t>(std::count_if(trace.spikes.begin(), trace.spikes.end(),
                                                    [&](const NeuronSpike& s) { return filter->contains(s.core); }));
}

const GridConfig& SimulationState::grid() const { return grid_->config; }

std::vector<int> SimulationState::potentials(Coord core) const {
    const std::size_t c = grid_->index.at(core);
    const auto& p = potentials_[c];
    return {p.begin(), p.begin() + static_cast<std::ptrdiff_t>(grid_->packed[c].neurons)};
}

std::vector<std::uint64_t> SimulationState::spike_totals(Coord core) const {
    return spike_totals_[grid_->index.at(core)];
}

SimulationState init(const GridConfig& grid, InputSchedule schedule, EngineOptions options) {
    if (auto report = validate_grid(grid); !report.ok()) throw ConfigError("invalid grid:\n" + report.to_string());
    schedule.finalize();
    for (const auto& e : schedule.events) {
        if (e.tick == 0) throw ConfigError("input spike scheduled at tick 0; the first evaluated tick is 1");
        if (e.target.host) throw ConfigError("input spike targets the host sink");
        auto it = grid.cores.find(e.target.core);
        if (it == grid.cores.end())
            throw ConfigError("input spike targets absent core " + to_string(e.target.core));
        if (e.target.axon < 0 || static_cast<std::size_t>(e.target.axon) >= it->second.axons.size())
            throw ConfigError("input spike targets axon " + std::to_string(e.target.axon) + " out of range on core " +
                              to_string(e.target.core));
    }

    auto compiled = std::make_shared<CompiledGrid>();
    compiled->config = grid;
    for (const auto& [coord, core] : grid.cores) {
        compiled->index[coord] = compiled->coords.size();
        compiled->coords.push_back(coord);
        compiled->packed.push_back(kernels::pack_core(core));
    }
    for (const auto& [coord, core] : grid.cores) {
        std::vector<Route> routes(core.neurons.size());
        for (std::size_t j = 0; j < core.neurons.size(); ++j) {
            const auto& d = core.neurons[j].destination;
            if (!d) continue;
            routes[j].delay = d->delay;
            if (d->host) {
                routes[j].kind = RouteKind::host;
            } else {
                routes[j].kind = RouteKind::axon;
                routes[j].core = compiled->index.at(d->core);
                routes[j].axon = static_cast<std::size_t>(d->axon);
            }
        }
        compiled->routes.push_back(std::move(routes));
    }

    SimulationState s;
    const std::size_t n = compiled->coords.size();
    s.kernel_ = kernels::kernel_for(options.isa);
    s.reverse_order_ = options.reverse_order;
    s.potentials_.resize(n);
    s.spikes_.resize(n);
    s.scratch_.resize(n);
    s.spike_totals_.resize(n);
    s.ring_.assign(kRingSlots, std::vector<std::vector<std::uint8_t>>(n));
    s.host_ring_.resize(kRingSlots);
    s.ring_count_.assign(kRingSlots, 0);
    for (std::size_t c = 0; c < n; ++c) {
        const auto& p = compiled->packed[c];
        s.potentials_[c].assign(p.stride, 0);
        s.spikes_[c].assign(p.stride, 0);
        s.scratch_[c].assign(p.stride, 0);
        s.spike_totals_[c].assign(p.neurons, 0);
        for (auto& slot : s.ring_) slot[c].assign(p.axons, 0);
    }
    if (options.threads > 1 && n > 1) s.pool_ = std::make_shared<WorkerPool>(std::min<unsigned>(options.threads, n));
    s.trace_.spikes_recorded = options.record_spikes;
    s.grid_ = std::move(compiled);
    s.schedule_ = std::make_shared<const InputSchedule>(std::move(schedule));
    return s;
}

void step(SimulationState& s) {
    const CompiledGrid& g = *s.grid_;
    const std::size_t n = g.coords.size();
    ++s.tick_;
    const std::uint64_t t = s.tick_;
    const std::size_t slot = t % kRingSlots;
    auto& axons = s.ring_[slot];

    for (const auto& h : s.host_ring_[slot]) s.trace_.host.push_back({t, h.core, h.neuron});
    s.stats_.to_host += s.host_ring_[slot].size();
    s.stats_.pending -= s.host_ring_[slot].size();
    s.host_ring_[slot].clear();
    s.stats_.to_axon += s.ring_count_[slot];
    s.stats_.pending -= s.ring_count_[slot];
    s.ring_count_[slot] = 0;

    const auto& events = s.schedule_->events;
    while (s.next_event_ < events.size() && events[s.next_event_].tick < t) ++s.next_event_;
    for (; s.next_event_ < events.size() && events[s.next_event_].tick == t; ++s.next_event_) {
        const auto& e = events[s.next_event_];
        axons[g.index.at(e.target.core)][static_cast<std::size_t>(e.target.axon)] = 1;
    }

    const auto evaluate = [&](std::size_t c) {
        s.kernel_(g.packed[c], axons[c], s.potentials_[c], s.spikes_[c], s.scratch_[c]);
    };
    if (s.pool_) {
        const std::function<void(unsigned, unsigned)> job = [&](unsigned id, unsigned parts) {
            for (std::size_t c = id; c < n; c += parts) evaluate(s.reverse_order_ ? n - 1 - c : c);
        };
        s.pool_->run(job);
    } else if (s.reverse_order_) {
        for (std::size_t c = n; c-- > 0;) evaluate(c);
    } else {
        for (std::size_t c = 0; c < n; ++c) evaluate(c);
    }

    for (std::size_t c = 0; c < n; ++c) {
        std::ranges::fill(axons[c], std::uint8_t{0});
        const auto& spikes = s.spikes_[c];
        const auto& routes = g.routes[c];
        for (std::size_t j = 0; j < routes.size(); ++j) {
            if (!spikes[j]) continue;
            ++s.trace_.total_spike_count;
            ++s.spike_totals_[c][j];
            ++s.stats_.produced;
            if (s.trace_.spikes_recorded) s.trace_.spikes.push_back({t, g.coords[c], static_cast<int>(j)});
            const Route& r = routes[j];
            const std::size_t due = (t + static_cast<std::uint64_t>(r.delay)) % kRingSlots;
            switch (r.kind) {
            case RouteKind::none: ++s.stats_.dropped; break;
            case RouteKind::axon:
                s.ring_[due][r.core][r.axon] = 1;
                ++s.ring_count_[due];
                ++s.stats_.pending;
                break;
            case RouteKind::host:
                s.host_ring_[due].push_back({0, g.coords[c], static_cast<int>(j)});
                ++s.stats_.pending;
                break;
            }
        }
    }
}

void inject_input(SimulationState& s, Coord core, int axon) {
    auto it = s.grid_->index.find(core);
    if (it == s.grid_->index.end()) throw ConfigError("inject_input: absent core " + to_string(core));
    auto& axons = s.ring_[(s.tick_ + 1) % kRingSlots][it->second];
    if (axon < 0 || static_cast<std::size_t>(axon) >= axons.size())
        throw ConfigError("inject_input: axon " + std::to_string(axon) + " out of range on core " + to_string(core));
    axons[static_cast<std::size_t>(axon)] = 1;
}

const TraceLog& run(SimulationState& state, std::uint64_t until_tick) {
    while (state.tick() < until_tick) step(state);
    return state.trace();
}

}  // namespace nmgab
