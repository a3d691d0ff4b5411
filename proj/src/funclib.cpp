#include "nmgab/funclib.hpp"

#include <algorithm>

#include "nmgab/engine.hpp"

namespace nmgab {

namespace {

constexpr Coord kOrigin{0, 0};

GridConfig single_core_grid(CoreConfig core) {
    GridConfig g;
    g.width = 1;
    g.height = 1;
    g.cores.emplace(kOrigin, std::move(core));
    return g;
}

NeuronConfig lif(std::vector<int> weights, int leak, std::string label) {
    NeuronConfig n;
    n.weights = std::move(weights);
    n.threshold = 1;
    n.leak = leak;
    n.reset_potential = 0;
    n.label = std::move(label);
    return n;
}

CircuitFragment two_input_gate(int leak, std::string name) {
    CoreConfig core;
    core.name = name;
    const int a = core.add_axon(0, "A");
    const int b = core.add_axon(0, "B");
    const int out = core.add_neuron(lif({1}, leak, "Out"));
    core.connect(a, out);
    core.connect(b, out);

    CircuitFragment f;
    f.grid = single_core_grid(std::move(core));
    f.inputs = {{"A", kOrigin, a, PortKind::data}, {"B", kOrigin, b, PortKind::data}};
    f.outputs = {{"Out", kOrigin, out}};
    return f;
}

}  // namespace

std::vector<InputPort> CircuitFragment::data_inputs() const {
    std::vector<InputPort> out;
    std::ranges::copy_if(inputs, std::back_inserter(out), [](const InputPort& p) { return p.kind == PortKind::data; });
    return out;
}

const InputPort& CircuitFragment::input(std::string_view name) const {
    for (const auto& p : inputs)
        if (p.name == name) return p;
    throw ConfigError("fragment has no input port '" + std::string(name) + "'");
}

std::size_t CircuitFragment::neuron_count() const {
    std::size_t n = 0;
    for (const auto& [_, core] : grid.cores) n += core.neurons.size();
    return n;
}

MajorityWeights majority_weights(int arity) {
    if (arity < 1) throw ConfigError("majority arity must be positive");
    MajorityWeights m;
    if (arity % 2 == 1) {
        m.tie_weight = 1;
        m.max_sum = arity;
        m.fire_at = (arity + 1) / 2;
    } else {
        m.tie_weight = 2;
        m.max_sum = arity + 1;
        m.fire_at = arity / 2 + 1;
    }
    m.input_weight = 1;
    m.leak = -(m.fire_at - 1);
    return m;
}

CircuitFragment build_register(int bits) {
    if (bits < 1 || 2 * bits + 1 > static_cast<int>(kDefaultCoreCapacity))
        throw ConfigError("register width " + std::to_string(bits) + " outside 1..127");

    CoreConfig core;
    core.name = "register";
    std::vector<int> d(bits), f(bits);
    for (int i = 0; i < bits; ++i) d[i] = core.add_axon(0, "D_" + std::to_string(i));
    for (int i = 0; i < bits; ++i) f[i] = core.add_axon(0, "F_" + std::to_string(i));
    const int reset = core.add_axon(1, "Reset");

    CircuitFragment frag;
    for (int i = 0; i < bits; ++i) {
        const int q = core.add_neuron(lif({1, -2}, 0, "Q_" + std::to_string(i)));
        auto fb = lif({1, -2}, 0, "D'_" + std::to_string(i));
        fb.destination = Destination::to_axon(kOrigin, f[i]);
        const int dp = core.add_neuron(std::move(fb));
        for (int n : {q, dp}) {
            core.connect(d[i], n);
            core.connect(f[i], n);
            core.connect(reset, n);
        }
        frag.inputs.push_back({"D_" + std::to_string(i), kOrigin, d[i], PortKind::data});
        frag.outputs.push_back({"Q_" + std::to_string(i), kOrigin, q});
    }
    frag.inputs.push_back({"Reset", kOrigin, reset, PortKind::reset});
    frag.grid = single_core_grid(std::move(core));
    frag.latency_ticks = 0;
    return frag;
}

CircuitFragment build_majority(int inputs) {
    if (inputs < 2 || inputs > 4) throw ConfigError("majority arity " + std::to_string(inputs) + " unsupported");
    const auto w = majority_weights(inputs);

    CoreConfig core;
    core.name = "majority" + std::to_string(inputs);
    const std::vector<std::string> names = {"T", "A", "B", "C"};
    CircuitFragment frag;
    std::vector<int> axons;
    for (int i = 0; i < inputs; ++i) {
        axons.push_back(core.add_axon(i == 0 ? 1 : 0, names[static_cast<std::size_t>(i)]));
        frag.inputs.push_back({names[static_cast<std::size_t>(i)], kOrigin, axons.back(), PortKind::data});
    }
    const int m = core.add_neuron(lif({w.input_weight, w.tie_weight}, w.leak, "M"));
    for (int a : axons) core.connect(a, m);
    frag.outputs = {{"M", kOrigin, m}};
    frag.grid = single_core_grid(std::move(core));
    return frag;
}

CircuitFragment build_and2() { return two_input_gate(-1, "and2"); }

CircuitFragment build_or2() { return two_input_gate(0, "or2"); }

CircuitFragment build_nor2(BiasSource bias) {
    CoreConfig core;
    core.name = "nor2";
    const int s = core.add_axon(0, "S");
    const int a = core.add_axon(1, "A");
    const int b = core.add_axon(1, "B");
    const int out = core.add_neuron(lif({1, -1}, 0, "Out"));
    for (int axon : {s, a, b}) core.connect(axon, out);

    CircuitFragment frag;
    if (bias == BiasSource::self_feeding) {
        auto src = lif({1, 0}, 0, "S_src");
        src.destination = Destination::to_axon(kOrigin, s);
        const int n = core.add_neuron(std::move(src));
        core.connect(s, n);
    }
    frag.inputs = {{"S", kOrigin, s, bias == BiasSource::self_feeding ? PortKind::seed : PortKind::bias},
                   {"A", kOrigin, a, PortKind::data},
                   {"B", kOrigin, b, PortKind::data}};
    frag.outputs = {{"Out", kOrigin, out}};
    frag.grid = single_core_grid(std::move(core));
    return frag;
}

CircuitFragment build_xor_baseline(int n) {
    if (n < 2 || n > 255) throw ConfigError("baseline XOR width " + std::to_string(n) + " outside 2..255");
    constexpr Coord kCounter{0, 0};
    constexpr Coord kCombiner{1, 0};

    CoreConfig counter;
    counter.name = "xor_count";
    CoreConfig combiner;
    combiner.name = "xor_combine";
    CircuitFragment frag;

    std::vector<int> inputs;
    for (int i = 1; i <= n; ++i) {
        inputs.push_back(counter.add_axon(0, "a_" + std::to_string(i)));
        frag.inputs.push_back({"a_" + std::to_string(i), kCounter, inputs.back(), PortKind::data});
    }
    for (int k = 1; k <= n; ++k) {
        const int pa = combiner.add_axon(k % 2 == 1 ? 0 : 1, "pa_" + std::to_string(k));
        auto p = lif({1}, -(k - 1), "p_" + std::to_string(k));
        p.destination = Destination::to_axon(kCombiner, pa);
        const int idx = counter.add_neuron(std::move(p));
        for (int a : inputs) counter.connect(a, idx);
    }
    const int o = combiner.add_neuron(lif({1, -1}, 0, "O"));
    for (int a = 0; a < n; ++a) combiner.connect(a, o);

    frag.grid.width = 2;
    frag.grid.height = 1;
    frag.grid.cores.emplace(kCounter, std::move(counter));
    frag.grid.cores.emplace(kCombiner, std::move(combiner));
    frag.outputs = {{"O", kCombiner, o}};
    frag.latency_ticks = 1;
    return frag;
}

CircuitFragment build_xor_integrated(int n) {
    if (n < 2 || n > static_cast<int>(kDefaultCoreCapacity))
        throw ConfigError("XOR-integrated width " + std::to_string(n) + " outside 2..256");
    CoreConfig core;
    core.name = "xor";
    CircuitFragment frag;
    NeuronConfig x;
    x.weights = {1};
    x.mode = NeuronMode::xor_parity;
    x.label = "X";
    const int out = core.add_neuron(std::move(x));
    for (int i = 1; i <= n; ++i) {
        const int a = core.add_axon(0, "a_" + std::to_string(i));
        core.connect(a, out);
        frag.inputs.push_back({"a_" + std::to_string(i), kOrigin, a, PortKind::data});
    }
    frag.outputs = {{"X", kOrigin, out}};
    frag.grid = single_core_grid(std::move(core));
    return frag;
}

std::vector<std::vector<bool>> run_fragment(const CircuitFragment& frag,
                                            const std::vector<std::pair<std::uint64_t, std::string>>& port_spikes,
                                            std::uint64_t ticks) {
    InputSchedule schedule;
    for (const auto& [tick, name] : port_spikes) {
        const auto& port = frag.input(name);
        schedule.add(tick, port.core, port.axon);
    }
    for (const auto& port : frag.inputs) {
        if (port.kind == PortKind::bias)
            for (std::uint64_t t = 1; t <= ticks; ++t) schedule.add(t, port.core, port.axon);
        if (port.kind == PortKind::seed && ticks > 0) schedule.add(1, port.core, port.axon);
    }

    auto state = init(frag.grid, std::move(schedule));
    const auto& trace = run(state, ticks);

    std::vector<std::vector<bool>> out(ticks, std::vector<bool>(frag.outputs.size(), false));
    for (const auto& s : trace.spikes) {
        for (std::size_t o = 0; o < frag.outputs.size(); ++o)
            if (frag.outputs[o].core == s.core && frag.outputs[o].neuron == s.neuron) out[s.tick - 1][o] = true;
    }
    return out;
}

std::vector<bool> evaluate_combinational(const CircuitFragment& frag, const std::vector<bool>& pattern) {
    const auto data = frag.data_inputs();
    if (pattern.size() != data.size())
        throw ConfigError("pattern has " + std::to_string(pattern.size()) + " bits for " +
                          std::to_string(data.size()) + " data ports");
    std::vector<std::pair<std::uint64_t, std::string>> spikes;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (pattern[i]) spikes.emplace_back(1, data[i].name);
    const auto ticks = static_cast<std::uint64_t>(frag.evaluation_ticks());
    return run_fragment(frag, spikes, ticks).back();
}

}  // namespace nmgab
