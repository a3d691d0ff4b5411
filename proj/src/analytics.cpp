#include "nmgab/analytics.hpp"

#include <stdexcept>
#include <string>

#include "nmgab/compiler.hpp"

namespace nmgab {

XorNeuronCounts xor_neuron_counts(std::uint64_t N, std::uint64_t d_c) {
    if (N == 0 || N % 2 != 0) throw std::invalid_argument("N must be positive and even, got " + std::to_string(N));
    if (d_c == 0) throw std::invalid_argument("d_c must be positive");
    const std::uint64_t M = N / 2;
    return {M * (d_c * d_c + d_c + 1), M * (d_c + 1)};
}

double tick_frequency(const TimingModel& model) {
    if (model.tick_frequency_override_hz) {
        if (*model.tick_frequency_override_hz <= 0) throw std::invalid_argument("tick frequency must be positive");
        return *model.tick_frequency_override_hz;
    }
    if (model.board_clock_hz <= 0) throw std::invalid_argument("board clock must be positive");
    if (model.core_axons <= 0 || model.core_neurons <= 0)
        throw std::invalid_argument("core dimensions must be positive");
    return model.board_clock_hz / (static_cast<double>(model.core_axons) * model.core_neurons);
}

double execution_time(std::uint64_t ticks, double tick_frequency_hz) {
    if (tick_frequency_hz <= 0) throw std::invalid_argument("tick frequency must be positive");
    return static_cast<double>(ticks) / tick_frequency_hz;
}

std::optional<double> EnergyModel::xor_power() const {
    if (power_watts_xor) return power_watts_xor;
    if (power_watts_baseline) return *power_watts_baseline * power_overhead_ratio;
    return std::nullopt;
}

double energy_power_time(double watts, std::uint64_t ticks, double tick_frequency_hz) {
    if (watts <= 0) throw std::invalid_argument("power must be positive");
    return watts * execution_time(ticks, tick_frequency_hz);
}

double energy_reduction(std::uint64_t w_c, int max_iter, double power_overhead_ratio) {
    if (power_overhead_ratio <= 0) throw std::invalid_argument("power overhead ratio must be positive");
    const auto tx = static_cast<double>(predicted_ticks(Variant::xor_integrated, w_c, max_iter));
    const auto tb = static_cast<double>(predicted_ticks(Variant::baseline, w_c, max_iter));
    return 100.0 * (1.0 - (tx / tb) * power_overhead_ratio);
}

double tick_reduction(std::uint64_t w_c, int max_iter) { return energy_reduction(w_c, max_iter, 1.0); }

double energy_spike_count(std::uint64_t total_spikes, const EnergyModel& model) {
    if (model.energy_per_spike_joules <= 0) throw std::invalid_argument("energy per spike must be positive");
    return static_cast<double>(total_spikes) * model.energy_per_spike_joules;
}

std::vector<SweepRow> sweep(const std::vector<std::uint64_t>& word_counts, const std::vector<int>& max_iters,
                            const EnergyModel& energy, const TimingModel& timing) {
    if (word_counts.empty() || max_iters.empty()) throw std::invalid_argument("sweep ranges must be nonempty");
    const double f = tick_frequency(timing);
    const auto pb = energy.power_watts_baseline;
    const auto px = energy.xor_power();
    std::vector<SweepRow> rows;
    for (auto w : word_counts) {
        for (int k : max_iters) {
            SweepRow r;
            r.w_c = w;
            r.max_iter = k;
            r.ticks_baseline = predicted_ticks(Variant::baseline, w, k);
            r.ticks_xor = predicted_ticks(Variant::xor_integrated, w, k);
            if (pb) r.energy_baseline = energy_power_time(*pb, r.ticks_baseline, f);
            if (px) r.energy_xor = energy_power_time(*px, r.ticks_xor, f);
            // With both powers given, the ratio is whatever they imply.
            const double ratio = (pb && px) ? *px / *pb : energy.power_overhead_ratio;
            r.reduction_percent = energy_reduction(w, k, ratio);
            rows.push_back(r);
        }
    }
    return rows;
}

}  // namespace nmgab
