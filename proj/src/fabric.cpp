#include "nmgab/fabric.hpp"

#include <algorithm>
#include <sstream>

namespace nmgab {

std::string to_string(Coord c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

std::size_t Crossbar::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void Crossbar::resize(std::size_t rows, std::size_t cols) {
    std::vector<std::uint8_t> next(rows * cols, 0);
    for (std::size_t a = 0; a < std::min(rows, rows_); ++a)
        for (std::size_t n = 0; n < std::min(cols, cols_); ++n)
            next[a * cols + n] = bits_[a * cols_ + n];
    rows_ = rows;
    cols_ = cols;
    bits_ = std::move(next);
}

int CoreConfig::add_axon(int type_index, std::string label) {
    axons.push_back({type_index, std::move(label)});
    crossbar.resize(axons.size(), neurons.size());
    return static_cast<int>(axons.size()) - 1;
}

int CoreConfig::add_neuron(NeuronConfig neuron) {
    neurons.push_back(std::move(neuron));
    crossbar.resize(axons.size(), neurons.size());
    return static_cast<int>(neurons.size()) - 1;
}

int CoreConfig::find_neuron(std::string_view label) const {
    for (std::size_t i = 0; i < neurons.size(); ++i)
        if (neurons[i].label == label) return static_cast<int>(i);
    return -1;
}

int CoreConfig::find_axon(std::string_view label) const {
    for (std::size_t i = 0; i < axons.size(); ++i)
        if (axons[i].label == label) return static_cast<int>(i);
    return -1;
}

const CoreConfig& GridConfig::at(Coord c) const {
    auto it = cores.find(c);
    if (it == cores.end()) throw ConfigError("no core at " + nmgab::to_string(c));
    return it->second;
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << (v.core ? nmgab::to_string(*v.core) : std::string("grid")) << " " << v.field << ": " << v.message
            << "\n";
    }
    return out.str();
}

namespace {

void add(ValidationReport& report, std::optional<Coord> core, std::string field, std::string message) {
    report.violations.push_back({core, std::move(field), std::move(message)});
}

bool param_ok(int v) { return v >= -kMaxParameter && v <= kMaxParameter; }

}  // namespace

void validate_core_into(const CoreConfig& core, std::optional<Coord> where, ValidationReport& report) {
    if (core.crossbar.rows() != core.axons.size() || core.crossbar.cols() != core.neurons.size()) {
        add(report, where, "crossbar shape",
            "crossbar is " + std::to_string(core.crossbar.rows()) + "x" + std::to_string(core.crossbar.cols()) +
                ", expected " + std::to_string(core.axons.size()) + "x" + std::to_string(core.neurons.size()));
    }
    if (core.axons.size() > core.max_axons)
        add(report, where, "axons", std::to_string(core.axons.size()) + " axons exceed capacity " +
                                        std::to_string(core.max_axons));
    if (core.neurons.size() > core.max_neurons)
        add(report, where, "neurons", std::to_string(core.neurons.size()) + " neurons exceed capacity " +
                                          std::to_string(core.max_neurons));

    for (std::size_t j = 0; j < core.neurons.size(); ++j) {
        const auto& n = core.neurons[j];
        const std::string tag = "neuron[" + std::to_string(j) + "]";
        for (int w : n.weights)
            if (w < kMinWeight || w > kMaxWeight)
                add(report, where, tag + ".weights", "weight " + std::to_string(w) + " outside [-256, 255]");
        if (!param_ok(n.threshold) || !param_ok(n.leak) || !param_ok(n.reset_potential))
            add(report, where, tag + ".parameters", "threshold/leak/reset magnitude too large");
        if (n.destination && (n.destination->delay < 1 || n.destination->delay > kMaxDelay))
            add(report, where, tag + ".destination.delay",
                "delay " + std::to_string(n.destination->delay) + " outside [1, 15]");
    }
    for (std::size_t a = 0; a < core.axons.size(); ++a) {
        const int type = core.axons[a].type_index;
        if (type < 0) {
            add(report, where, "axon[" + std::to_string(a) + "].type_index", "negative type index");
            continue;
        }
        for (std::size_t j = 0; j < core.neurons.size(); ++j) {
            if (static_cast<std::size_t>(type) >= core.neurons[j].weights.size()) {
                add(report, where, "axon[" + std::to_string(a) + "].type_index",
                    "type " + std::to_string(type) + " has no weight in neuron[" + std::to_string(j) + "]");
                break;
            }
        }
    }
}

ValidationReport validate_grid(const GridConfig& grid) {
    ValidationReport report;
    if (grid.width < 0 || grid.height < 0) add(report, std::nullopt, "dimensions", "negative grid dimensions");
    for (const auto& [coord, core] : grid.cores) {
        if (coord.x < 0 || coord.y < 0 || coord.x >= grid.width || coord.y >= grid.height)
            add(report, coord, "coordinate", "core lies outside the " + std::to_string(grid.width) + "x" +
                                                 std::to_string(grid.height) + " grid");
        validate_core_into(core, coord, report);
        for (std::size_t j = 0; j < core.neurons.size(); ++j) {
            const auto& dest = core.neurons[j].destination;
            if (!dest || dest->host) continue;
            const std::string tag = "neuron[" + std::to_string(j) + "].destination";
            auto target = grid.cores.find(dest->core);
            if (target == grid.cores.end()) {
                add(report, coord, tag, "target core " + to_string(dest->core) + " is not in the grid");
            } else if (dest->axon < 0 || static_cast<std::size_t>(dest->axon) >= target->second.axons.size()) {
                add(report, coord, tag, "axon " + std::to_string(dest->axon) + " out of range on core " +
                                            to_string(dest->core));
            }
        }
    }
    return report;
}

NeuronStepResult neuron_fire(const NeuronConfig& neuron, long long integrated_input, int potential_in) {
    if (neuron.mode == NeuronMode::xor_parity) {
        // Nonnegative modulo: only the least significant bit of the sum matters.
        return {(integrated_input & 1LL) != 0, 0};
    }
    const long long v = static_cast<long long>(potential_in) + integrated_input + neuron.leak;
    if (v >= neuron.threshold) return {true, neuron.reset_potential};
    return {false, static_cast<int>(std::max(v, 0LL))};
}

NeuronStepResult neuron_step(const NeuronConfig& neuron, std::span<const int> spiking_axon_types, int potential_in) {
    long long sum = 0;
    for (int type : spiking_axon_types) {
        if (type < 0 || static_cast<std::size_t>(type) >= neuron.weights.size())
            throw ConfigError("axon type " + std::to_string(type) + " has no weight in neuron '" + neuron.label + "'");
        sum += neuron.weights[static_cast<std::size_t>(type)];
    }
    return neuron_fire(neuron, sum, potential_in);
}

CoreStepResult core_step(const CoreConfig& core, std::span<const std::uint8_t> axon_spikes,
                         std::span<const int> potentials_in) {
    if (axon_spikes.size() != core.axons.size())
        throw ConfigError("core_step: " + std::to_string(axon_spikes.size()) + " axon values for " +
                          std::to_string(core.axons.size()) + " axons");
    if (potentials_in.size() != core.neurons.size())
        throw ConfigError("core_step: " + std::to_string(potentials_in.size()) + " potentials for " +
                          std::to_string(core.neurons.size()) + " neurons");
    if (core.crossbar.rows() != core.axons.size() || core.crossbar.cols() != core.neurons.size())
        throw ConfigError("core_step: crossbar shape does not match core '" + core.name + "'");

    CoreStepResult out;
    out.spikes.resize(core.neurons.size());
    out.potentials.resize(core.neurons.size());
    std::vector<int> types;
    for (std::size_t j = 0; j < core.neurons.size(); ++j) {
        types.clear();
        for (std::size_t a = 0; a < core.axons.size(); ++a)
            if (axon_spikes[a] && core.crossbar.get(a, j)) types.push_back(core.axons[a].type_index);
        const auto r = neuron_step(core.neurons[j], types, potentials_in[j]);
        out.spikes[j] = r.spiked ? 1 : 0;
        out.potentials[j] = r.potential;
    }
    return out;
}

}  // namespace nmgab
