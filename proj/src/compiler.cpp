#include "nmgab/compiler.hpp"

#include <algorithm>
#include <array>

#include "nmgab/funclib.hpp"

namespace nmgab {

namespace {

constexpr std::array kRoleNames = {"Input", "VNU", "CNU", "BaselineXor", "IterationCounter",
                                   "Parity", "Syndrome", "OR", "Output"};

constexpr int kGridWidth = 3;

std::string edge(char from, int i, char to, int j) {
    return std::string(1, from) + std::to_string(i) + std::string(1, to) + std::to_string(j);
}

std::string xp(int n) { return "x'" + std::to_string(n); }

// Enable-gated majority with the tie input r. Without an enable spike the leak
// cancels every data input; with en the neuron fires iff the weighted data sum
// reaches the majority point; with init it passes r through.
struct GatedMajority {
    int w_r = 1;
    int w_msg = 1;
    int w_en = 0;
    int w_init = 0;
    int w_rst = 0;
    int leak = 0;
};

GatedMajority gated_majority(int arity) {
    const auto m = majority_weights(arity);
    GatedMajority g;
    g.w_r = m.tie_weight;
    g.w_msg = m.input_weight;
    g.leak = -m.max_sum;
    g.w_en = m.max_sum + 1 - m.fire_at;
    g.w_init = m.max_sum + 1 - m.tie_weight;
    g.w_rst = -std::max(g.w_en, g.w_init);
    return g;
}

struct Stage {
    int iteration_period;
    int pipeline;     // ticks from a VNU decision to its host delivery
    int word_extra;   // word_period - iteration_period * maxIter
    int parity_delay; // x' pass-through delay in the Parity core
    int en_s_delay;
};

Stage stage_for(Variant v) {
    if (v == Variant::xor_integrated) return {2, 5, 5, 3, 1};
    return {3, 6, 4, 4, 2};
}

class LayoutBuilder {
public:
    LayoutBuilder(const HMatrix& H, const DecoderParams& params, Variant variant)
        : H_(H), params_(params), variant_(variant), stage_(stage_for(variant)) {}

    DecoderLayout build();

private:
    struct Core {
        Coord at;
        CoreConfig cfg;
        std::map<std::string, int> axons;
    };

    bool baseline() const { return variant_ == Variant::baseline; }

    void axon(CoreRole role, int type, const std::string& label) {
        auto& c = cores_.at(role);
        c.axons[label] = c.cfg.add_axon(type, label);
    }

    Destination to(CoreRole role, const std::string& label, int delay = 1) const {
        const auto& c = cores_.at(role);
        return Destination::to_axon(c.at, c.axons.at(label), delay);
    }

    int neuron(CoreRole role, std::string label, std::vector<int> weights, const std::vector<std::string>& inputs,
               std::optional<Destination> dest, int leak = 0, int threshold = 1,
               NeuronMode mode = NeuronMode::lif) {
        auto& c = cores_.at(role);
        NeuronConfig n;
        n.weights = std::move(weights);
        n.threshold = threshold;
        n.leak = leak;
        n.mode = mode;
        n.destination = dest;
        n.label = std::move(label);
        const int idx = c.cfg.add_neuron(std::move(n));
        for (const auto& in : inputs) c.cfg.connect(c.axons.at(in), idx);
        return idx;
    }

    NeuronRef ref(CoreRole role, int neuron) const { return {cores_.at(role).at, neuron}; }

    void place();
    void declare_axons();
    void input_core();
    void vnu_core();
    void cnu_core();
    void iteration_core();
    void parity_core();
    void tail_cores();
    void check_capacity() const;

    const HMatrix& H_;
    const DecoderParams& params_;
    Variant variant_;
    Stage stage_;
    std::map<CoreRole, Core> cores_;
    DecoderLayout out_;
};

void LayoutBuilder::place() {
    int slot = 0;
    for (std::size_t r = 0; r < kRoleNames.size(); ++r) {
        const auto role = static_cast<CoreRole>(r);
        if (role == CoreRole::baseline_xor && !baseline()) continue;
        Core c;
        c.at = {slot % kGridWidth, slot / kGridWidth};
        c.cfg.name = kRoleNames[r];
        cores_.emplace(role, std::move(c));
        ++slot;
    }
}

void LayoutBuilder::declare_axons() {
    const int N = H_.N();
    const int M = H_.M();
    using R = CoreRole;

    for (int n = 0; n < N; ++n) axon(R::input, 0, "r" + std::to_string(n));
    for (int n = 0; n < N; ++n) axon(R::input, 0, "rf" + std::to_string(n));
    axon(R::input, 0, "en");
    axon(R::input, 1, "rst_in");

    // VNU types: 0 r, 1 check message, 2 en, 3 init, 4 rst.
    axon(R::vnu, 4, "rst_v");
    axon(R::vnu, 2, "en_v");
    for (int n = 0; n < N; ++n)
        for (int m : H_.checks_of(n)) axon(R::vnu, 1, edge('c', m, 'v', n));
    axon(R::vnu, 3, "init_v");
    for (int n = 0; n < N; ++n) axon(R::vnu, 0, "r" + std::to_string(n));

    for (int m = 0; m < M; ++m)
        for (int n : H_.vars_of(m)) axon(R::cnu, 0, edge('v', n, 'c', m));
    axon(R::cnu, 0, "en");

    if (baseline()) {
        axon(R::baseline_xor, 0, "en");
        for (int m = 0; m < M; ++m)
            for (int n : H_.vars_of(m))
                for (int k = 1; k < H_.d_c(); ++k)
                    axon(R::baseline_xor, k % 2 == 1 ? 0 : 1, edge('c', m, 'v', n) + ".p" + std::to_string(k));
        for (int m = 0; m < M; ++m)
            for (int k = 1; k <= H_.d_c(); ++k)
                axon(R::baseline_xor, k % 2 == 1 ? 0 : 1, "s" + std::to_string(m) + ".p" + std::to_string(k));
    }

    axon(R::iteration_counter, 0, "i");
    axon(R::iteration_counter, 1, "init_it");
    axon(R::iteration_counter, 2, "rst_it");

    for (int n = 0; n < N; ++n) axon(R::parity, 0, xp(n));
    axon(R::parity, 0, "en");

    axon(R::syndrome, 0, "en_s");
    for (int m = 0; m < M; ++m) axon(R::syndrome, 1, "s" + std::to_string(m));

    axon(R::or_gate, 0, "zero");
    axon(R::or_gate, 0, "iter");

    for (int n = 0; n < N; ++n) axon(R::output, 0, xp(n));
    axon(R::output, 0, "done");
    axon(R::output, 0, "zero");
}

// Register of the word bits (r_fb feeds itself), forwarders to the VNU and
// the control fan-out of en and rst_in.
void LayoutBuilder::input_core() {
    using R = CoreRole;
    const int N = H_.N();
    for (int n = 0; n < N; ++n) {
        const auto i = std::to_string(n);
        neuron(R::input, "r_fb" + i, {1, -2}, {"r" + i, "rf" + i, "rst_in"}, to(R::input, "rf" + i));
    }
    for (int n = 0; n < N; ++n) {
        const auto i = std::to_string(n);
        neuron(R::input, "r_v" + i, {1, -2}, {"r" + i, "rf" + i, "rst_in"}, to(R::vnu, "r" + i));
    }
    neuron(R::input, "init_it", {1, -2}, {"en", "rst_in"}, to(R::iteration_counter, "init_it"));
    // Lands together with the next word's init_it, after i_max has fired.
    neuron(R::input, "rst_it", {1, 1}, {"rst_in"}, to(R::iteration_counter, "rst_it", 2));
    neuron(R::input, "init_v", {1, -2}, {"en", "rst_in"}, to(R::vnu, "init_v"));
    neuron(R::input, "rst_v", {1, 1}, {"rst_in"}, to(R::vnu, "rst_v"));
}

void LayoutBuilder::vnu_core() {
    using R = CoreRole;
    const int N = H_.N();
    const int M = H_.M();
    const std::vector<std::string> control = {"en_v", "init_v", "rst_v"};

    neuron(R::vnu, "en_c", {0, 0, 1, 1, -2}, control, to(R::cnu, "en"));
    neuron(R::vnu, "en_p", {0, 0, 1, 1, -2}, control, to(R::parity, "en"));

    const auto edge_gate = gated_majority(H_.d_v());
    for (int m = 0; m < M; ++m) {
        for (int n : H_.vars_of(m)) {
            std::vector<std::string> in = {"r" + std::to_string(n)};
            for (int t : H_.checks_of(n))
                if (t != m) in.push_back(edge('c', t, 'v', n));
            in.insert(in.end(), control.begin(), control.end());
            const auto& g = edge_gate;
            neuron(R::vnu, edge('v', n, 'c', m), {g.w_r, g.w_msg, g.w_en, g.w_init, g.w_rst}, in,
                   to(R::cnu, edge('v', n, 'c', m)), g.leak);
        }
    }

    const auto decision = gated_majority(H_.d_v() + 1);
    for (int n = 0; n < N; ++n) {
        std::vector<std::string> in = {"r" + std::to_string(n)};
        for (int t : H_.checks_of(n)) in.push_back(edge('c', t, 'v', n));
        in.insert(in.end(), control.begin(), control.end());
        const auto& g = decision;
        neuron(R::vnu, xp(n), {g.w_r, g.w_msg, g.w_en, g.w_init, g.w_rst}, in, to(R::parity, xp(n)), g.leak);
    }
}

void LayoutBuilder::cnu_core() {
    using R = CoreRole;
    const int M = H_.M();
    const int dc = H_.d_c();

    if (!baseline()) {
        neuron(R::cnu, "en", {1}, {"en"}, to(R::vnu, "en_v"));
        for (int m = 0; m < M; ++m) {
            for (int n : H_.vars_of(m)) {
                std::vector<std::string> in;
                for (int t : H_.vars_of(m))
                    if (t != n) in.push_back(edge('v', t, 'c', m));
                const int idx = neuron(R::cnu, edge('c', m, 'v', n), {1}, in, to(R::vnu, edge('c', m, 'v', n)), 0, 1,
                                       NeuronMode::xor_parity);
                out_.xor_neurons.push_back(ref(R::cnu, idx));
            }
        }
        return;
    }

    // Two-layer XOR: p_k in the CNU core fires iff at least k inputs spike;
    // the BaselineXor core alternates +1/-1 over p_1..p_{d_c-1}.
    neuron(R::cnu, "en", {1}, {"en"}, to(R::baseline_xor, "en"));
    neuron(R::baseline_xor, "en", {1, -1}, {"en"}, to(R::vnu, "en_v"));
    for (int m = 0; m < M; ++m) {
        for (int n : H_.vars_of(m)) {
            const auto name = edge('c', m, 'v', n);
            std::vector<std::string> in;
            for (int t : H_.vars_of(m))
                if (t != n) in.push_back(edge('v', t, 'c', m));
            std::vector<std::string> layer2;
            for (int k = 1; k < dc; ++k) {
                const auto p = name + ".p" + std::to_string(k);
                const int idx = neuron(R::cnu, p, {1}, in, to(R::baseline_xor, p), -(k - 1));
                out_.xor_neurons.push_back(ref(R::cnu, idx));
                layer2.push_back(p);
            }
            const int o = neuron(R::baseline_xor, name, {1, -1}, layer2, to(R::vnu, name));
            out_.xor_neurons.push_back(ref(R::baseline_xor, o));
        }
    }
}

void LayoutBuilder::iteration_core() {
    using R = CoreRole;
    neuron(R::iteration_counter, "i_fb", {1, 2, -2}, {"i", "init_it", "rst_it"}, to(R::iteration_counter, "i"));
    neuron(R::iteration_counter, "i_max", {1, 0, -4}, {"i", "rst_it"}, to(R::or_gate, "iter"), 0,
           iteration_threshold(params_, variant_));
}

void LayoutBuilder::parity_core() {
    using R = CoreRole;
    const int N = H_.N();
    const int M = H_.M();

    neuron(R::parity, "en_s", {1}, {"en"}, to(R::syndrome, "en_s", stage_.en_s_delay));
    for (int m = 0; m < M; ++m) {
        const auto s = "s" + std::to_string(m);
        std::vector<std::string> in;
        for (int n : H_.vars_of(m)) in.push_back(xp(n));
        if (!baseline()) {
            const int idx = neuron(R::parity, s, {1}, in, to(R::syndrome, s), 0, 1, NeuronMode::xor_parity);
            out_.xor_neurons.push_back(ref(R::parity, idx));
            continue;
        }
        std::vector<std::string> layer2;
        for (int k = 1; k <= H_.d_c(); ++k) {
            const auto p = s + ".p" + std::to_string(k);
            const int idx = neuron(R::parity, p, {1}, in, to(R::baseline_xor, p), -(k - 1));
            out_.xor_neurons.push_back(ref(R::parity, idx));
            layer2.push_back(p);
        }
        const int o = neuron(R::baseline_xor, s, {1, -1}, layer2, to(R::syndrome, s));
        out_.xor_neurons.push_back(ref(R::baseline_xor, o));
    }
    for (int n = 0; n < N; ++n) neuron(R::parity, xp(n), {1}, {xp(n)}, to(R::output, xp(n), stage_.parity_delay));
}

void LayoutBuilder::tail_cores() {
    using R = CoreRole;
    const int N = H_.N();
    std::vector<std::string> syn = {"en_s"};
    for (int m = 0; m < H_.M(); ++m) syn.push_back("s" + std::to_string(m));
    neuron(R::syndrome, "zero", {1, -1}, syn, to(R::or_gate, "zero"));

    neuron(R::or_gate, "done", {1}, {"zero", "iter"}, to(R::output, "done"));
    neuron(R::or_gate, "zero", {1}, {"zero"}, to(R::output, "zero"));

    for (int n = 0; n < N; ++n)
        out_.ports.x_out.push_back(
            ref(R::output, neuron(R::output, xp(n), {1}, {xp(n), "done"}, Destination::to_host(), -1)));
    out_.ports.zero = ref(R::output, neuron(R::output, "zero", {1}, {"zero"}, Destination::to_host()));
    out_.ports.done = ref(R::output, neuron(R::output, "done", {1}, {"done"}, Destination::to_host()));
}

void LayoutBuilder::check_capacity() const {
    for (const auto& [role, c] : cores_) {
        if (c.cfg.axons.size() <= c.cfg.max_axons && c.cfg.neurons.size() <= c.cfg.max_neurons) continue;
        throw CompileError(std::string(role_name(role)) + " core needs " + std::to_string(c.cfg.axons.size()) +
                           " axons and " + std::to_string(c.cfg.neurons.size()) + " neurons; capacity is " +
                           std::to_string(c.cfg.max_axons) + "x" + std::to_string(c.cfg.max_neurons) +
                           " and multi-core partitioning is not supported");
    }
}

DecoderLayout LayoutBuilder::build() {
    if (params_.max_iter < 1) throw CompileError("maxIter must be at least 1");
    if (params_.tie_threshold_b)
        throw CompileError("the fabric decoder realizes only the default tie threshold (d_v / 2)");

    place();
    declare_axons();
    input_core();
    vnu_core();
    cnu_core();
    iteration_core();
    parity_core();
    tail_cores();
    check_capacity();

    out_.variant = variant_;
    out_.h = H_;
    out_.params = params_;
    out_.grid.width = kGridWidth;
    out_.grid.height = kGridWidth;
    for (auto& [role, c] : cores_) {
        out_.roles[role] = c.at;
        out_.grid.cores.emplace(c.at, std::move(c.cfg));
    }

    const auto& in = cores_.at(CoreRole::input);
    for (int n = 0; n < H_.N(); ++n) out_.ports.r.push_back({in.at, in.axons.at("r" + std::to_string(n))});
    out_.ports.en = {in.at, in.axons.at("en")};
    out_.ports.rst = {in.at, in.axons.at("rst_in")};

    const int K = params_.max_iter;
    auto& t = out_.timing;
    t.iteration_period = stage_.iteration_period;
    t.word_period = stage_.iteration_period * K + stage_.word_extra;
    t.reset_tick = t.word_period;
    t.window_open = 2 + stage_.pipeline;
    t.window_close = 2 + stage_.iteration_period * K + stage_.pipeline;
    t.tail = t.window_close - t.word_period;

    if (auto report = validate_grid(out_.grid); !report.ok())
        throw CompileError("compiled grid failed validation:\n" + report.to_string());
    return std::move(out_);
}

}  // namespace

std::string_view variant_name(Variant v) { return v == Variant::xor_integrated ? "xor" : "baseline"; }

std::optional<Variant> parse_variant(std::string_view name) {
    if (name == "xor") return Variant::xor_integrated;
    if (name == "baseline") return Variant::baseline;
    return std::nullopt;
}

std::string_view role_name(CoreRole role) { return kRoleNames[static_cast<std::size_t>(role)]; }

std::optional<CoreRole> parse_role(std::string_view name) {
    for (std::size_t i = 0; i < kRoleNames.size(); ++i)
        if (name == kRoleNames[i]) return static_cast<CoreRole>(i);
    return std::nullopt;
}

std::optional<CoreRole> DecoderLayout::role_at(Coord c) const {
    for (const auto& [role, at] : roles)
        if (at == c) return role;
    return std::nullopt;
}

DecoderLayout compile(const HMatrix& H, const DecoderParams& params, Variant variant) {
    return LayoutBuilder(H, params, variant).build();
}

int iteration_threshold(const DecoderParams& params, Variant variant) {
    if (params.max_iter < 1) throw std::invalid_argument("maxIter must be at least 1");
    if (variant == Variant::xor_integrated) return (params.max_iter - 1) * 2 + 4;
    return (params.max_iter - 1) * 3 + 6;
}

std::uint64_t predicted_ticks(Variant variant, std::uint64_t w_c, int max_iter) {
    if (max_iter < 1) throw std::invalid_argument("maxIter must be at least 1");
    const auto K = static_cast<std::uint64_t>(max_iter);
    if (variant == Variant::xor_integrated) return w_c * (2 * K + 5) + 2;
    return w_c * (3 * K + 4) + 4;
}

WordSchedule make_word_schedule(const DecoderLayout& layout, const std::vector<BitVector>& words) {
    const auto& t = layout.timing;
    const auto P = static_cast<std::uint64_t>(t.word_period);
    WordSchedule ws;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (w.size() != layout.ports.r.size())
            throw std::invalid_argument("word " + std::to_string(i) + " has " + std::to_string(w.size()) +
                                        " bits, layout expects " + std::to_string(layout.ports.r.size()));
        const std::uint64_t s = 1 + i * P;
        for (std::size_t n = 0; n < w.size(); ++n)
            if (w[n]) ws.inputs.add(s, layout.ports.r[n].core, layout.ports.r[n].axon);
        ws.inputs.add(s, layout.ports.en.core, layout.ports.en.axon);
        ws.inputs.add(s + static_cast<std::uint64_t>(t.reset_tick) - 1, layout.ports.rst.core, layout.ports.rst.axon);
        ws.windows.push_back({s, s + static_cast<std::uint64_t>(t.window_open) - 1,
                              s + static_cast<std::uint64_t>(t.window_close) - 1});
    }
    ws.span = words.size() * P + static_cast<std::uint64_t>(t.tail);
    ws.inputs.finalize();
    return ws;
}

std::vector<WordResult> extract_results(const DecoderLayout& layout, const WordSchedule& schedule,
                                        const TraceLog& trace) {
    struct TickOutputs {
        bool done = false;
        bool zero = false;
        BitVector x;
    };
    const std::size_t N = layout.ports.x_out.size();
    std::map<std::pair<Coord, int>, int> kind;  // -1 done, -2 zero, n for x'_n
    for (std::size_t n = 0; n < N; ++n) kind[{layout.ports.x_out[n].core, layout.ports.x_out[n].neuron}] = static_cast<int>(n);
    kind[{layout.ports.done.core, layout.ports.done.neuron}] = -1;
    kind[{layout.ports.zero.core, layout.ports.zero.neuron}] = -2;

    std::map<std::uint64_t, TickOutputs> by_tick;
    for (const auto& h : trace.host) {
        auto it = kind.find({h.core, h.neuron});
        if (it == kind.end()) continue;
        auto& o = by_tick[h.tick];
        if (o.x.empty()) o.x.assign(N, 0);
        if (it->second == -1) o.done = true;
        else if (it->second == -2) o.zero = true;
        else o.x[static_cast<std::size_t>(it->second)] = 1;
    }

    std::vector<WordResult> out;
    for (const auto& w : schedule.windows) {
        WordResult r;
        for (auto it = by_tick.lower_bound(w.first); it != by_tick.end() && it->first <= w.last; ++it) {
            if (!it->second.done) continue;
            r = {true, it->second.x, it->second.zero, it->first};
            break;
        }
        out.push_back(std::move(r));
    }
    return out;
}

DecodeRun run_decoder(const DecoderLayout& layout, const std::vector<BitVector>& words, EngineOptions options) {
    auto schedule = make_word_schedule(layout, words);
    auto state = init(layout.grid, schedule.inputs, options);
    run(state, schedule.span);

    DecodeRun out;
    out.results = extract_results(layout, schedule, state.trace());
    out.trace = state.trace();
    out.stats = state.stats();
    out.ticks = state.tick();
    for (const auto& h : out.trace.host) out.last_host_tick = std::max(out.last_host_tick, h.tick);
    return out;
}

}  // namespace nmgab
