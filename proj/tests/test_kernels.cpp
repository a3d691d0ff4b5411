#include "doctest.h"

#include <random>
#include <vector>

#include "nmgab/fabric.hpp"
#include "nmgab/kernels.hpp"

using namespace nmgab;
using namespace nmgab::kernels;

namespace {

CoreConfig random_core(std::mt19937& rng, int axons, int neurons, int types) {
    std::uniform_int_distribution<int> weight(-4, 4);
    std::uniform_int_distribution<int> threshold(1, 6);
    std::uniform_int_distribution<int> leak(-3, 2);
    std::uniform_int_distribution<int> reset(0, 2);
    std::uniform_int_distribution<int> type(0, types - 1);
    std::bernoulli_distribution wire(0.3);
    std::bernoulli_distribution xor_mode(0.25);
    CoreConfig c;
    for (int a = 0; a < axons; ++a) c.add_axon(type(rng));
    for (int j = 0; j < neurons; ++j) {
        NeuronConfig n;
        for (int t = 0; t < types; ++t) n.weights.push_back(weight(rng));
        n.threshold = threshold(rng);
        n.leak = leak(rng);
        n.reset_potential = reset(rng);
        n.mode = xor_mode(rng) ? NeuronMode::xor_parity : NeuronMode::lif;
        c.add_neuron(n);
    }
    for (int a = 0; a < axons; ++a)
        for (int j = 0; j < neurons; ++j)
            if (wire(rng)) c.connect(a, j);
    return c;
}

}  // namespace

TEST_CASE("kernels: isa names round-trip and scalar is always available") {
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) CHECK(parse_isa(isa_name(isa)) == isa);
    CHECK_FALSE(parse_isa("sse9").has_value());
    CHECK(isa_available(Isa::scalar));
    CHECK(isa_available(best_isa()));
    for (Isa isa : available_isas()) CHECK(kernel_for(isa) != nullptr);
}

TEST_CASE("kernels: every available kernel matches the reference core_step") {
    std::mt19937 rng(20240607);
    const int shapes[][3] = {{1, 1, 1}, {5, 3, 2}, {17, 9, 3}, {27, 26, 5}, {64, 33, 4}, {256, 256, 4}};
    for (const auto& s : shapes) {
        const auto core = random_core(rng, s[0], s[1], s[2]);
        const auto packed = pack_core(core);
        CHECK(packed.stride % kLaneWidth == 0);
        for (Isa isa : available_isas()) {
            CAPTURE(isa_name(isa));
            CAPTURE(s[0]);
            const auto kernel = kernel_for(isa);
            std::vector<int> ref(static_cast<std::size_t>(s[1]), 0);
            std::vector<std::int32_t> pot(packed.stride, 0);
            std::vector<std::uint8_t> spikes(packed.stride, 0);
            std::vector<std::int32_t> scratch(packed.stride, 0);
            std::bernoulli_distribution on(0.4);
            for (int tick = 0; tick < 40; ++tick) {
                std::vector<std::uint8_t> ax(static_cast<std::size_t>(s[0]));
                for (auto& a : ax) a = on(rng) ? 1 : 0;
                const auto want = core_step(core, ax, ref);
                kernel(packed, ax, pot, spikes, scratch);
                bool same = true;
                for (std::size_t j = 0; j < ref.size(); ++j)
                    same = same && want.spikes[j] == spikes[j] && want.potentials[j] == pot[j];
                for (std::size_t j = ref.size(); j < packed.stride; ++j) same = same && spikes[j] == 0 && pot[j] == 0;
                REQUIRE(same);
                ref = want.potentials;
            }
        }
    }
}

TEST_CASE("kernels: large weights and potentials agree across kernels") {
    CoreConfig c;
    for (int a = 0; a < 256; ++a) c.add_axon(a % 2);
    for (int j = 0; j < 13; ++j) {
        NeuronConfig n;
        n.weights = {255, -256 + j};
        n.threshold = kMaxParameter - j;
        n.leak = (j % 3) - 1;
        n.reset_potential = j;
        c.add_neuron(n);
        for (int a = 0; a < 256; ++a) c.connect(a, j);
    }
    const auto packed = pack_core(c);
    std::vector<std::uint8_t> ax(256, 1);
    for (int a = 0; a < 256; a += 2) ax[static_cast<std::size_t>(a)] = 1;
    for (int a = 1; a < 256; a += 4) ax[static_cast<std::size_t>(a)] = 0;
    std::vector<std::vector<std::int32_t>> pots;
    std::vector<std::vector<std::uint8_t>> spikes;
    for (Isa isa : available_isas()) {
        std::vector<std::int32_t> pot(packed.stride, 0);
        std::vector<std::uint8_t> sp(packed.stride, 0);
        std::vector<std::int32_t> scratch(packed.stride, 0);
        for (int tick = 0; tick < 300; ++tick) kernel_for(isa)(packed, ax, pot, sp, scratch);
        pots.push_back(pot);
        spikes.push_back(sp);
    }
    for (std::size_t i = 1; i < pots.size(); ++i) {
        CHECK(pots[i] == pots[0]);
        CHECK(spikes[i] == spikes[0]);
    }
}
