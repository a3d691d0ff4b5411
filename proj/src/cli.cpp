#include "nmgab/cli.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "nmgab/analytics.hpp"
#include "nmgab/compiler.hpp"
#include "nmgab/engine.hpp"
#include "nmgab/funclib.hpp"
#include "nmgab/gab.hpp"
#include "nmgab/io.hpp"

namespace nmgab {

namespace {

struct EngineFlags {
    unsigned threads = 1;
    std::string isa;

    EngineOptions options() const {
        EngineOptions o;
        o.threads = threads;
        if (!isa.empty()) {
            const auto parsed = kernels::parse_isa(isa);
            if (!parsed) throw InputError("--isa", std::nullopt, "unknown ISA '" + isa + "'");
            if (!kernels::isa_available(*parsed))
                throw InputError("--isa", std::nullopt, "ISA '" + isa + "' is not available on this machine");
            o.isa = *parsed;
        }
        return o;
    }
};

void add_engine_flags(CLI::App* cmd, EngineFlags& f) {
    cmd->add_option("--threads", f.threads, "Worker threads for core evaluation")->check(CLI::Range(1u, 256u));
    cmd->add_option("--isa", f.isa, "Core kernel: scalar, avx2 or neon (default: best available)");
}

Variant variant_of(const std::string& name) {
    const auto v = parse_variant(name);
    if (!v) throw InputError("--variant", std::nullopt, "unknown variant '" + name + "'");
    return *v;
}

// Writes to the --out path when given, otherwise to `out`.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
    if (path.empty()) out << text;
    else write_text_file(path, text);
}

// "288", "1,2,5" or "1:100" / "1:100:3" (inclusive).
template <typename T>
std::vector<T> parse_list(const std::string& spec, const std::string& flag) {
    std::vector<T> out;
    auto number = [&](const std::string& s) -> long long {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || v < 0) throw InputError(flag, std::nullopt, "bad number '" + s + "' in '" + spec + "'");
        return v;
    };
    std::stringstream items(spec);
    std::string item;
    while (std::getline(items, item, ',')) {
        std::vector<std::string> parts;
        std::stringstream ps(item);
        std::string p;
        while (std::getline(ps, p, ':')) parts.push_back(p);
        if (parts.size() == 1) {
            out.push_back(static_cast<T>(number(parts[0])));
        } else if (parts.size() == 2 || parts.size() == 3) {
            const long long lo = number(parts[0]), hi = number(parts[1]);
            const long long step = parts.size() == 3 ? number(parts[2]) : 1;
            if (step <= 0 || hi < lo) throw InputError(flag, std::nullopt, "bad range '" + item + "'");
            for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<T>(v));
        } else {
            throw InputError(flag, std::nullopt, "bad range '" + item + "'");
        }
    }
    if (out.empty()) throw InputError(flag, std::nullopt, "empty list");
    return out;
}

std::string core_report(const DecoderLayout& L) {
    std::ostringstream s;
    s << "variant " << variant_name(L.variant) << ", maxIter " << L.params.max_iter << ", " << L.grid.cores.size()
      << " cores on a " << L.grid.width << "x" << L.grid.height << " grid\n";
    s << std::left << std::setw(8) << "core" << std::setw(18) << "role" << std::right << std::setw(6) << "axons"
      << std::setw(9) << "neurons" << '\n';
    for (const auto& [role, at] : L.roles) {
        const auto& c = L.grid.at(at);
        s << std::left << std::setw(8) << to_string(at) << std::setw(18) << role_name(role) << std::right
          << std::setw(6) << c.axons.size() << std::setw(9) << c.neurons.size() << '\n';
    }
    std::size_t xor_mode = 0;
    for (const auto& n : L.xor_neurons)
        if (L.grid.at(n.core).neurons[static_cast<std::size_t>(n.neuron)].mode == NeuronMode::xor_parity) ++xor_mode;
    s << "XOR neurons: " << L.xor_neurons.size() << " (" << xor_mode << " XOR-mode, "
      << L.xor_neurons.size() - xor_mode << " LIF)\n";
    s << "ticks per word " << L.timing.word_period << ", tail " << L.timing.tail << ", iteration threshold "
      << iteration_threshold(L.params, L.variant) << '\n';
    return s.str();
}

// ---- funcs-test --------------------------------------------------------

struct CheckResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
};

using Truth = std::function<std::vector<bool>(const std::vector<bool>&)>;

CheckResult check_truth_table(const std::string& name, const CircuitFragment& frag, const Truth& expect) {
    CheckResult r{name};
    const std::size_t n = frag.data_inputs().size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<bool> pattern(n);
        for (std::size_t i = 0; i < n; ++i) pattern[i] = (mask >> i) & 1u;
        ++r.cases;
        if (evaluate_combinational(frag, pattern) != expect(pattern)) ++r.failures;
    }
    return r;
}

// Depth-first over every (D, Reset) schedule up to max_len ticks, branching
// a copied engine state at each tick.
CheckResult check_register(int bits, int max_len) {
    CheckResult r{"register-" + std::to_string(bits) + "bit"};
    const auto frag = build_register(bits);
    const auto& reset = frag.input("Reset");
    std::vector<InputPort> d;
    for (int i = 0; i < bits; ++i) d.push_back(frag.input("D_" + std::to_string(i)));
    const unsigned choices = 1u << (bits + 1);

    std::function<void(const SimulationState&, const std::vector<bool>&, int)> dfs =
        [&](const SimulationState& state, const std::vector<bool>& q, int depth) {
            if (depth == max_len) return;
            for (unsigned c = 0; c < choices; ++c) {
                SimulationState next = state;
                std::vector<bool> want = q;
                const bool rst = c & 1u;
                if (rst) inject_input(next, reset.core, reset.axon);
                for (int i = 0; i < bits; ++i) {
                    const bool di = (c >> (i + 1)) & 1u;
                    if (di) inject_input(next, d[static_cast<std::size_t>(i)].core, d[static_cast<std::size_t>(i)].axon);
                    want[static_cast<std::size_t>(i)] = (di || q[static_cast<std::size_t>(i)]) && !rst;
                }
                const std::size_t before = next.trace().spikes.size();
                step(next);
                std::vector<bool> got(static_cast<std::size_t>(bits), false);
                for (std::size_t k = before; k < next.trace().spikes.size(); ++k) {
                    const auto& s = next.trace().spikes[k];
                    for (std::size_t o = 0; o < frag.outputs.size(); ++o)
                        if (frag.outputs[o].neuron == s.neuron) got[o] = true;
                }
                ++r.cases;
                if (got != want) ++r.failures;
                dfs(next, want, depth + 1);
            }
        };
    dfs(init(frag.grid, {}), std::vector<bool>(static_cast<std::size_t>(bits), false), 0);
    return r;
}

bool parity(const std::vector<bool>& p) {
    bool x = false;
    for (bool b : p) x ^= b;
    return x;
}

std::vector<CheckResult> function_checks() {
    std::vector<CheckResult> out;
    out.push_back(check_register(1, 10));
    out.push_back(check_register(2, 5));
    out.push_back(check_truth_table("majority-2", build_majority(2), [](const auto& p) {
        const int s = p[0] + p[1];
        return std::vector<bool>{s == 1 ? p[0] : s == 2};
    }));
    out.push_back(check_truth_table("majority-3", build_majority(3), [](const auto& p) {
        return std::vector<bool>{p[0] + p[1] + p[2] >= 2};
    }));
    out.push_back(check_truth_table("majority-4", build_majority(4), [](const auto& p) {
        const int s = p[0] + p[1] + p[2] + p[3];
        return std::vector<bool>{s == 2 ? p[0] : s > 2};
    }));
    out.push_back(check_truth_table("and2", build_and2(), [](const auto& p) { return std::vector<bool>{p[0] && p[1]}; }));
    out.push_back(check_truth_table("or2", build_or2(), [](const auto& p) { return std::vector<bool>{p[0] || p[1]}; }));
    out.push_back(check_truth_table("nor2", build_nor2(), [](const auto& p) { return std::vector<bool>{!(p[0] || p[1])}; }));
    out.push_back(check_truth_table("nor2-self-biased", build_nor2(BiasSource::self_feeding),
                                    [](const auto& p) { return std::vector<bool>{!(p[0] || p[1])}; }));
    for (int n = 2; n <= 5; ++n)
        out.push_back(check_truth_table("xor-baseline-" + std::to_string(n), build_xor_baseline(n),
                                        [](const auto& p) { return std::vector<bool>{parity(p)}; }));
    for (int n = 2; n <= 8; ++n)
        out.push_back(check_truth_table("xor-integrated-" + std::to_string(n), build_xor_integrated(n),
                                        [](const auto& p) { return std::vector<bool>{parity(p)}; }));
    for (int n = 2; n <= 5; ++n) {
        const auto base = build_xor_baseline(n);
        const auto integ = build_xor_integrated(n);
        out.push_back(check_truth_table("xor-cross-" + std::to_string(n), integ,
                                        [&](const auto& p) { return evaluate_combinational(base, p); }));
    }
    return out;
}

// ---- commands ----------------------------------------------------------

int cmd_verify(const HMatrix& H, Variant variant, int max_iter, const EngineOptions& options, std::ostream& out) {
    DecoderParams params{max_iter, std::nullopt};
    const auto layout = compile(H, params, variant);
    const auto words = make_dataset(H);
    EngineOptions o = options;
    o.record_spikes = false;
    const auto run = run_decoder(layout, words, o);
    const auto predicted = predicted_ticks(variant, words.size(), max_iter);

    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto expect = gab_decode(H, words[i], params);
        const auto& got = run.results[i];
        if (got.observed && got.x_prime == expect.x_prime && got.converged == expect.converged) continue;
        if (++mismatches <= 10)
            out << "mismatch word " << i << " " << to_string(words[i]) << ": fabric " << format_result(got)
                << ", oracle " << format_oracle_result(expect) << '\n';
    }
    const bool ticks_ok = run.ticks == predicted && run.last_host_tick == predicted;
    if (!ticks_ok)
        out << "tick mismatch: simulated " << run.ticks << " (last host output " << run.last_host_tick
            << "), predicted " << predicted << '\n';
    const bool pass = mismatches == 0 && ticks_ok;
    out << (pass ? "PASS" : "FAIL") << " variant " << variant_name(variant) << " maxIter " << max_iter << ": "
        << words.size() - mismatches << "/" << words.size() << " words match the oracle, " << run.ticks
        << " ticks (predicted " << predicted << "), " << run.trace.total_spike_count << " spikes\n";
    return pass ? kExitOk : kExitMismatch;
}

std::string spike_report(const std::vector<TraceRow>& rows, const std::optional<DecoderLayout>& layout,
                         double energy_per_spike, double tick_hz) {
    std::uint64_t last_tick = 0, spikes = 0, host = 0;
    std::map<Coord, std::uint64_t> per_core;
    for (const auto& r : rows) {
        last_tick = std::max(last_tick, r.tick);
        if (!r.core) {
            ++host;
            continue;
        }
        ++spikes;
        ++per_core[*r.core];
    }
    EnergyModel em;
    em.energy_per_spike_joules = energy_per_spike;
    std::ostringstream s;
    s << "last tick " << last_tick << '\n'
      << "neuron spikes " << spikes << '\n'
      << "host deliveries " << host << '\n'
      << "spike energy " << std::scientific << std::setprecision(4) << energy_spike_count(spikes, em) << " J at "
      << energy_per_spike << " J/spike\n"
      << std::fixed << std::setprecision(2) << "execution time " << execution_time(last_tick, tick_hz) << " s at "
      << tick_hz << " Hz\n";
    s << "spikes per core:\n";
    if (layout) {
        for (const auto& [role, at] : layout->roles) {
            const auto it = per_core.find(at);
            s << "  " << role_name(role) << ' ' << (it == per_core.end() ? 0 : it->second) << '\n';
        }
    } else {
        for (const auto& [at, n] : per_core) s << "  " << to_string(at) << ' ' << n << '\n';
    }
    return s.str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gallager-B LDPC decoding on a tick-accurate neuromorphic fabric model", "nmgab"};
    app.require_subcommand(1);

    std::string variant = "xor";
    int max_iter = 100;
    std::string out_path;
    EngineFlags engine;
    const std::vector<std::string> variants = {"xor", "baseline"};

    std::string h_file, layout_file, words_file, trace_file;

    auto* compile_cmd = app.add_subcommand("compile", "Compile an H matrix into a decoder layout");
    compile_cmd->add_option("h_file", h_file, "H matrix file")->required();
    compile_cmd->add_option("--variant", variant)->check(CLI::IsMember(variants));
    compile_cmd->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
    compile_cmd->add_option("--out", out_path, "Layout file to write");

    auto* decode_cmd = app.add_subcommand("decode", "Decode a word list on a compiled layout");
    decode_cmd->add_option("layout", layout_file)->required();
    decode_cmd->add_option("words", words_file)->required();
    decode_cmd->add_option("--out", out_path, "Results file (default: stdout)");
    decode_cmd->add_option("--trace", trace_file, "Write the spike trace as CSV");
    add_engine_flags(decode_cmd, engine);

    auto* verify_cmd = app.add_subcommand("verify", "Check fabric decoding against the serial oracle on the dataset");
    verify_cmd->add_option("h_file", h_file)->required();
    verify_cmd->add_option("--variant", variant)->check(CLI::IsMember(variants));
    verify_cmd->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
    add_engine_flags(verify_cmd, engine);

    auto* oracle_cmd = app.add_subcommand("oracle", "Decode with the serial reference decoder");
    oracle_cmd->add_option("h_file", h_file)->required();
    oracle_cmd->add_option("--words", words_file, "Word list (default: the generated dataset)");
    oracle_cmd->add_option("--max-iter", max_iter)->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--out", out_path);

    auto* dataset_cmd = app.add_subcommand("dataset", "Write the codebook plus all single-bit flips");
    dataset_cmd->add_option("h_file", h_file)->required();
    dataset_cmd->add_option("--out", out_path);

    std::string words_spec = "288", iters_spec = "100";
    double power_ratio = kOverheadRatio5x5, energy_per_spike = kEnergyPerSpikeJoules;
    std::optional<double> tick_hz, power_baseline, power_xor;
    double board_hz = 100e6;
    auto* sweep_cmd = app.add_subcommand("sweep", "Energy-reduction table over word counts and iteration limits");
    sweep_cmd->add_option("--words", words_spec, "Word counts: N, a,b,c or lo:hi[:step]");
    sweep_cmd->add_option("--iters", iters_spec, "maxIter values, same syntax");
    sweep_cmd->add_option("--power-ratio", power_ratio, "XOR/baseline power ratio")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--power-baseline", power_baseline, "Baseline power in watts")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--power-xor", power_xor, "XOR-variant power in watts")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--tick-hz", tick_hz, "Tick frequency override")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--board-hz", board_hz, "Board clock")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", out_path);

    auto* report_cmd = app.add_subcommand("report", "Spike counts, spike energy and timing of a trace");
    report_cmd->add_option("trace", trace_file)->required();
    report_cmd->add_option("--layout", layout_file, "Layout used to label cores by role");
    report_cmd->add_option("--energy-per-spike", energy_per_spike)->check(CLI::PositiveNumber);
    report_cmd->add_option("--tick-hz", tick_hz)->check(CLI::PositiveNumber);
    report_cmd->add_option("--board-hz", board_hz)->check(CLI::PositiveNumber);
    report_cmd->add_option("--out", out_path);

    auto* funcs_cmd = app.add_subcommand("funcs-test", "Exhaustive truth tables of the logic-primitive builders");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    auto timing = [&] {
        TimingModel t;
        t.board_clock_hz = board_hz;
        t.tick_frequency_override_hz = tick_hz;
        return t;
    };

    if (*compile_cmd) {
        const auto H = read_h_file(h_file);
        const auto layout = compile(H, {max_iter, std::nullopt}, variant_of(variant));
        if (!out_path.empty()) save_layout(out_path, layout);
        out << core_report(layout);
        return kExitOk;
    }
    if (*decode_cmd) {
        const auto layout = load_layout(layout_file);
        const auto words = read_words_file(words_file, layout.h.N());
        auto options = engine.options();
        options.record_spikes = !trace_file.empty();
        const auto run = run_decoder(layout, words, options);
        std::ostringstream rows;
        rows << kVersionHeader << '\n';
        bool complete = true;
        for (const auto& r : run.results) {
            rows << format_result(r) << '\n';
            complete = complete && r.observed;
        }
        emit(out_path, out, rows.str());
        if (!trace_file.empty()) {
            std::ostringstream trace;
            write_trace_csv(trace, run.trace, layout.grid);
            write_text_file(trace_file, trace.str());
        }
        if (!complete) err << "some words produced no result inside their window\n";
        return complete ? kExitOk : kExitMismatch;
    }
    if (*verify_cmd) return cmd_verify(read_h_file(h_file), variant_of(variant), max_iter, engine.options(), out);
    if (*oracle_cmd) {
        const auto H = read_h_file(h_file);
        const auto words = words_file.empty() ? make_dataset(H) : read_words_file(words_file, H.N());
        std::ostringstream rows;
        rows << kVersionHeader << '\n';
        for (const auto& w : words) rows << format_oracle_result(gab_decode(H, w, {max_iter, std::nullopt})) << '\n';
        emit(out_path, out, rows.str());
        return kExitOk;
    }
    if (*dataset_cmd) {
        std::ostringstream rows;
        rows << kVersionHeader << '\n';
        write_words(rows, make_dataset(read_h_file(h_file)));
        emit(out_path, out, rows.str());
        return kExitOk;
    }
    if (*sweep_cmd) {
        EnergyModel em;
        em.power_overhead_ratio = power_ratio;
        em.power_watts_baseline = power_baseline;
        em.power_watts_xor = power_xor;
        const auto rows = sweep(parse_list<std::uint64_t>(words_spec, "--words"), parse_list<int>(iters_spec, "--iters"),
                                em, timing());
        std::ostringstream csv;
        write_sweep_csv(csv, rows);
        emit(out_path, out, csv.str());
        return kExitOk;
    }
    if (*report_cmd) {
        std::ifstream in(trace_file);
        if (!in) throw InputError(trace_file, std::nullopt, "cannot open file");
        const auto rows = parse_trace_csv(in, trace_file);
        std::optional<DecoderLayout> layout;
        if (!layout_file.empty()) layout = load_layout(layout_file);
        emit(out_path, out, spike_report(rows, layout, energy_per_spike, tick_frequency(timing())));
        return kExitOk;
    }
    if (*funcs_cmd) {
        bool ok = true;
        for (const auto& r : function_checks()) {
            out << (r.failures == 0 ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases";
            if (r.failures) out << ", " << r.failures << " failed";
            out << ")\n";
            ok = ok && r.failures == 0;
        }
        return ok ? kExitOk : kExitMismatch;
    }
    return kExitInputError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitInputError;
}

}  // namespace nmgab
