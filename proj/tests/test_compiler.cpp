#include "doctest.h"

#include <set>
#include <string>

#include "nmgab/compiler.hpp"
#include "nmgab/gab.hpp"
#include "oracles.hpp"

using namespace nmgab;

namespace {

std::set<std::string> spiking(const DecoderLayout& layout, const TraceLog& trace, CoreRole role, std::uint64_t tick) {
    const Coord c = layout.roles.at(role);
    const auto& core = layout.grid.at(c);
    std::set<std::string> out;
    for (const auto& s : trace.spikes)
        if (s.tick == tick && s.core == c) out.insert(core.neurons[static_cast<std::size_t>(s.neuron)].label);
    return out;
}

std::size_t count_role(const DecoderLayout& l, CoreRole role) { return l.roles.count(role); }

}  // namespace

TEST_CASE("compiler: core inventory of the XOR-integrated decoder") {
    const auto l = compile(make_example8(), {}, Variant::xor_integrated);
    CHECK(l.grid.cores.size() == 8);
    CHECK(count_role(l, CoreRole::baseline_xor) == 0);
    const auto& input = l.grid.at(l.roles.at(CoreRole::input));
    CHECK(input.neurons.size() == 20);
    const auto& vnu = l.grid.at(l.roles.at(CoreRole::vnu));
    CHECK(vnu.axons.size() == 27);
    CHECK(vnu.neurons.size() == 26);
    const auto& cnu = l.grid.at(l.roles.at(CoreRole::cnu));
    CHECK(cnu.axons.size() == 17);
    CHECK(cnu.neurons.size() == 17);
    CHECK(l.xor_neurons.size() == 20);
    for (const auto& ref : l.xor_neurons)
        CHECK(l.grid.at(ref.core).neurons[static_cast<std::size_t>(ref.neuron)].mode == NeuronMode::xor_parity);
    CHECK(l.ports.r.size() == 8);
    CHECK(l.ports.x_out.size() == 8);
}

TEST_CASE("compiler: baseline decoder adds a core and 84 LIF XOR neurons") {
    const auto l = compile(make_example8(), {}, Variant::baseline);
    CHECK(l.grid.cores.size() == 9);
    CHECK(count_role(l, CoreRole::baseline_xor) == 1);
    CHECK(l.xor_neurons.size() == 84);
    for (const auto& ref : l.xor_neurons)
        CHECK(l.grid.at(ref.core).neurons[static_cast<std::size_t>(ref.neuron)].mode == NeuronMode::lif);
    for (const auto& [c, core] : l.grid.cores)
        for (const auto& n : core.neurons) CHECK(n.mode == NeuronMode::lif);
}

TEST_CASE("compiler: iteration threshold") {
    CHECK(iteration_threshold({100, std::nullopt}, Variant::xor_integrated) == 202);
    CHECK(iteration_threshold({1, std::nullopt}, Variant::xor_integrated) == 4);
    CHECK_THROWS_AS(iteration_threshold({0, std::nullopt}, Variant::xor_integrated), std::invalid_argument);
}

TEST_CASE("compiler: baseline single word with three iterations spans 17 ticks") {
    const auto h = make_example8();
    const auto l = compile(h, {3, std::nullopt}, Variant::baseline);
    const auto run = run_decoder(l, {parse_bits("10001100")});
    CHECK(run.ticks == 17);
    CHECK(run.last_host_tick <= 17);
    REQUIRE(run.results.size() == 1);
    CHECK(run.results[0].observed);
    CHECK(to_string(run.results[0].x_prime) == "10001101");
}

TEST_CASE("compiler: predicted ticks") {
    CHECK(predicted_ticks(Variant::baseline, 288, 100) == 87556);
    CHECK(predicted_ticks(Variant::xor_integrated, 288, 100) == 59042);
    CHECK(predicted_ticks(Variant::xor_integrated, 0, 7) == 2);
    CHECK(predicted_ticks(Variant::baseline, 0, 7) == 4);
    for (std::uint64_t w : {1U, 2U, 5U, 288U, 10000U})
        for (int k : {1, 2, 3, 10, 65, 100}) {
            CHECK(predicted_ticks(Variant::xor_integrated, w, k) == oracle::ticks_xor(w, static_cast<std::uint64_t>(k)));
            CHECK(predicted_ticks(Variant::baseline, w, k) == oracle::ticks_baseline(w, static_cast<std::uint64_t>(k)));
        }
}

TEST_CASE("compiler: word schedule spans") {
    const auto h = make_example8();
    const auto x = compile(h, {}, Variant::xor_integrated);
    const auto b = compile(h, {}, Variant::baseline);
    CHECK(make_word_schedule(x, {parse_bits("10001100")}).span == 207);
    CHECK(make_word_schedule(x, make_dataset(h)).span == 59042);
    CHECK(make_word_schedule(x, {}).span == 2);
    CHECK(make_word_schedule(b, {}).span == 4);
    CHECK_THROWS(make_word_schedule(x, {parse_bits("101")}));
    const auto s = make_word_schedule(x, {parse_bits("10001100"), parse_bits("00000000")});
    REQUIRE(s.windows.size() == 2);
    CHECK(s.windows[0].start == 1);
    CHECK(s.windows[1].start == 1 + static_cast<std::uint64_t>(x.timing.word_period));
    CHECK(s.windows[0].last < s.windows[1].first);
}

TEST_CASE("compiler: simulated ticks equal the prediction") {
    const auto h = make_example8();
    const auto ds = make_dataset(h);
    for (auto v : {Variant::xor_integrated, Variant::baseline})
        for (std::uint64_t w : {1U, 2U, 5U})
            for (int k : {1, 2, 3, 10}) {
                const auto l = compile(h, {k, std::nullopt}, v);
                const std::vector<BitVector> words(ds.begin() + 30, ds.begin() + 30 + static_cast<long>(w));
                const auto r = run_decoder(l, words);
                CAPTURE(variant_name(v));
                CAPTURE(w);
                CAPTURE(k);
                CHECK(r.ticks == predicted_ticks(v, w, k));
                CHECK(r.last_host_tick <= r.ticks);
                for (std::size_t i = 0; i < words.size(); ++i) {
                    const auto want = oracle::gallager_b(oracle::Bits(words[i].begin(), words[i].end()), k);
                    CHECK(r.results[i].observed);
                    CHECK(oracle::str(oracle::Bits(r.results[i].x_prime.begin(), r.results[i].x_prime.end())) ==
                          oracle::str(want.x));
                    CHECK(r.results[i].converged == want.converged);
                }
            }
}

TEST_CASE("compiler: word 10001100 spikes at the expected ticks") {
    const auto l = compile(make_example8(), {}, Variant::xor_integrated);
    const auto run = run_decoder(l, {parse_bits("10001100")});
    const auto& t = run.trace;

    std::set<std::string> inputs_t1;
    for (const auto& e : make_word_schedule(l, {parse_bits("10001100")}).inputs.events)
        if (e.tick == 1)
            for (std::size_t n = 0; n < l.ports.r.size(); ++n)
                if (l.ports.r[n].core == e.target.core && l.ports.r[n].axon == e.target.axon)
                    inputs_t1.insert("r" + std::to_string(n));
    CHECK(inputs_t1 == std::set<std::string>{"r0", "r4", "r5"});

    CHECK(spiking(l, t, CoreRole::vnu, 2) == std::set<std::string>{"v0c1", "v0c3", "v4c0", "v4c3", "v5c1", "v5c2",
                                                                   "x'0", "x'4", "x'5", "en_c", "en_p"});
    std::set<std::string> s3;
    for (const auto& lab : spiking(l, t, CoreRole::parity, 3))
        if (lab.size() >= 2 && lab[0] == 's' && lab[1] != '\'' && lab != "en_s") s3.insert(lab);
    CHECK(s3 == std::set<std::string>{"s0", "s2"});

    CHECK(spiking(l, t, CoreRole::syndrome, 6).count("zero") == 1);
    CHECK(spiking(l, t, CoreRole::syndrome, 4).count("zero") == 0);

    std::string decision(8, '0');
    for (const auto& lab : spiking(l, t, CoreRole::vnu, 4))
        if (lab.rfind("x'", 0) == 0) decision[static_cast<std::size_t>(std::stoi(lab.substr(2)))] = '1';
    CHECK(decision == "10001101");

    REQUIRE(run.results.size() == 1);
    CHECK(to_string(run.results[0].x_prime) == "10001101");
    CHECK(run.results[0].converged);
    CHECK(run.results[0].output_tick == 9);
}

TEST_CASE("compiler: rejects custom tie thresholds and oversized codes") {
    const auto h = make_example8();
    CHECK_THROWS_AS(compile(h, {100, Rational{1, 2}}, Variant::xor_integrated), CompileError);
    CHECK_THROWS_AS(compile(h, {0, std::nullopt}, Variant::xor_integrated), CompileError);

    // 130 variables need 260 register neurons on the input core.
    std::vector<BitVector> rows;
    for (int m = 0; m < 65; ++m) {
        BitVector row(130, 0);
        row[static_cast<std::size_t>(2 * m)] = 1;
        row[static_cast<std::size_t>(2 * m + 1)] = 1;
        rows.push_back(row);
    }
    const HMatrix big(rows, 1, 2);
    CHECK_THROWS_AS(compile(big, {}, Variant::xor_integrated), CompileError);
}

TEST_CASE("compiler: variant and role names round-trip") {
    for (auto v : {Variant::xor_integrated, Variant::baseline}) CHECK(parse_variant(variant_name(v)) == v);
    CHECK_FALSE(parse_variant("fast").has_value());
    for (auto r : {CoreRole::input, CoreRole::vnu, CoreRole::cnu, CoreRole::baseline_xor, CoreRole::iteration_counter,
                   CoreRole::parity, CoreRole::syndrome, CoreRole::or_gate, CoreRole::output})
        CHECK(parse_role(role_name(r)) == r);
}
