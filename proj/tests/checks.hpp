#pragma once

// Exhaustive checks shared by the unit tests and the acceptance runner. Each
// returns the number of mismatches against the oracles in oracles.hpp along
// with the number of cases examined.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nmgab/engine.hpp"
#include "nmgab/funclib.hpp"
#include "oracles.hpp"

namespace checks {

struct Tally {
    std::uint64_t cases = 0;
    std::uint64_t mismatches = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++cases;
        if (!ok) {
            if (mismatches == 0) first_failure = what;
            ++mismatches;
        }
    }
    void merge(const Tally& o) {
        if (mismatches == 0 && o.mismatches) first_failure = o.first_failure;
        cases += o.cases;
        mismatches += o.mismatches;
    }
    bool ok() const { return mismatches == 0 && cases > 0; }
};

inline std::vector<bool> pattern_of(unsigned mask, int n) {
    std::vector<bool> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
    return p;
}

inline std::string pattern_text(const std::vector<bool>& p) {
    std::string s;
    for (bool b : p) s.push_back(b ? '1' : '0');
    return s;
}

// Every input pattern of a single-output fragment against `want`.
inline Tally truth_table(const nmgab::CircuitFragment& frag, const std::string& name,
                         const std::function<bool(const std::vector<bool>&)>& want) {
    Tally t;
    const int n = static_cast<int>(frag.data_inputs().size());
    for (unsigned mask = 0; mask < (1U << n); ++mask) {
        const auto p = pattern_of(mask, n);
        const auto got = nmgab::evaluate_combinational(frag, p);
        t.record(got.size() == 1 && got[0] == want(p), name + " pattern " + pattern_text(p));
    }
    return t;
}

inline int count(const std::vector<bool>& p) {
    int c = 0;
    for (bool b : p) c += b ? 1 : 0;
    return c;
}

inline bool parity(const std::vector<bool>& p) { return count(p) % 2 == 1; }

// Majority with the first input as the tie breaker.
inline bool majority_with_tie(const std::vector<bool>& p) {
    const int ones = count(p);
    const int n = static_cast<int>(p.size());
    if (2 * ones != n) return 2 * ones > n;
    return p[0];
}

// Spikes of the given outputs at the state's current tick.
inline std::vector<bool> outputs_now(const nmgab::SimulationState& s, const std::vector<nmgab::OutputPort>& outs) {
    std::vector<bool> v(outs.size(), false);
    const auto& sp = s.trace().spikes;
    for (auto it = sp.rbegin(); it != sp.rend() && it->tick == s.tick(); ++it)
        for (std::size_t o = 0; o < outs.size(); ++o)
            if (outs[o].core == it->core && outs[o].neuron == it->neuron) v[o] = true;
    return v;
}

// Every schedule of (D_0..D_{bits-1}, Reset) spikes over `length` ticks,
// explored depth-first by branching copies of the engine state.
inline Tally register_schedules(int bits, int length) {
    const auto frag = nmgab::build_register(bits);
    std::vector<nmgab::InputPort> d;
    for (int i = 0; i < bits; ++i) d.push_back(frag.input("D_" + std::to_string(i)));
    const auto reset = frag.input("Reset");
    const unsigned choices = 1U << (bits + 1);

    Tally t;
    std::vector<unsigned> path;
    std::function<void(const nmgab::SimulationState&, std::vector<int>)> dfs =
        [&](const nmgab::SimulationState& s, std::vector<int> held) {
            if (static_cast<int>(path.size()) == length) return;
            for (unsigned c = 0; c < choices; ++c) {
                auto next = s;
                auto h = held;
                const bool rst = (c >> bits) & 1U;
                for (int i = 0; i < bits; ++i) {
                    const bool di = (c >> i) & 1U;
                    if (di) nmgab::inject_input(next, d[static_cast<std::size_t>(i)].core, d[static_cast<std::size_t>(i)].axon);
                    // Same rule as oracle::register_trace, one tick at a time.
                    h[static_cast<std::size_t>(i)] = oracle::register_trace({h[static_cast<std::size_t>(i)] || di},
                                                                            {rst ? 1 : 0})[0];
                }
                if (rst) nmgab::inject_input(next, reset.core, reset.axon);
                nmgab::step(next);
                const auto q = outputs_now(next, frag.outputs);
                bool ok = true;
                for (int i = 0; i < bits; ++i) ok = ok && q[static_cast<std::size_t>(i)] == (h[static_cast<std::size_t>(i)] == 1);
                path.push_back(c);
                if (!ok) {
                    std::string where = "register-" + std::to_string(bits) + " schedule";
                    for (auto p : path) where += " " + std::to_string(p);
                    t.record(false, where);
                } else {
                    t.record(true, "");
                }
                dfs(next, h);
                path.pop_back();
            }
        };
    dfs(nmgab::init(frag.grid, {}), std::vector<int>(static_cast<std::size_t>(bits), 0));
    return t;
}

// A whole-schedule replay of random-length traces through register_trace,
// cross-checking the incremental model used above.
inline Tally register_replay(const std::vector<int>& d, const std::vector<int>& reset) {
    const auto frag = nmgab::build_register(1);
    std::vector<std::pair<std::uint64_t, std::string>> spikes;
    for (std::size_t t = 0; t < d.size(); ++t) {
        if (d[t]) spikes.emplace_back(t + 1, "D_0");
        if (reset[t]) spikes.emplace_back(t + 1, "Reset");
    }
    const auto got = nmgab::run_fragment(frag, spikes, d.size());
    const auto want = oracle::register_trace(d, reset);
    Tally tally;
    for (std::size_t t = 0; t < d.size(); ++t)
        tally.record(got[t][0] == (want[t] == 1), "replay tick " + std::to_string(t + 1));
    return tally;
}

// Baseline n-input XOR: output sampled two ticks after the pattern.
inline Tally xor_baseline(int n) {
    const auto frag = nmgab::build_xor_baseline(n);
    Tally t;
    t.record(frag.latency_ticks + 1 == 2, "baseline xor evaluation spans two ticks");
    t.record(frag.neuron_count() == static_cast<std::size_t>(n + 1), "baseline xor uses n+1 neurons");
    t.merge(truth_table(frag, "xor-baseline-" + std::to_string(n), parity));
    return t;
}

inline Tally xor_integrated(int n) {
    const auto frag = nmgab::build_xor_integrated(n);
    Tally t;
    t.record(frag.evaluation_ticks() == 1, "integrated xor evaluates in one tick");
    t.record(frag.neuron_count() == 1, "integrated xor uses one neuron");
    t.merge(truth_table(frag, "xor-integrated-" + std::to_string(n), parity));
    return t;
}

// Both XOR builders on every pattern, comparing outputs directly.
inline Tally xor_cross(int n) {
    const auto a = nmgab::build_xor_baseline(n);
    const auto b = nmgab::build_xor_integrated(n);
    Tally t;
    for (unsigned mask = 0; mask < (1U << n); ++mask) {
        const auto p = pattern_of(mask, n);
        t.record(nmgab::evaluate_combinational(a, p) == nmgab::evaluate_combinational(b, p),
                 "xor cross n=" + std::to_string(n) + " pattern " + pattern_text(p));
    }
    return t;
}

}  // namespace checks
