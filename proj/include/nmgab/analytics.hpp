#pragma once

// Closed-form cost models: XOR neuron counts, tick frequency, execution time,
// power-time and per-spike energy, and energy-reduction sweeps.

#include <cstdint>
#include <optional>
#include <vector>

namespace nmgab {

struct XorNeuronCounts {
    std::uint64_t baseline = 0;
    std::uint64_t modified = 0;
    bool operator==(const XorNeuronCounts&) const = default;
};

/// M = N/2 check nodes of degree d_c; N must be even.
XorNeuronCounts xor_neuron_counts(std::uint64_t N, std::uint64_t d_c);

struct TimingModel {
    double board_clock_hz = 100e6;
    int core_axons = 256;
    int core_neurons = 256;
    std::optional<double> tick_frequency_override_hz;
};

double tick_frequency(const TimingModel& model);
double execution_time(std::uint64_t ticks, double tick_frequency_hz);

inline constexpr double kOverheadRatio5x5 = 1.0174;
inline constexpr double kOverheadRatio5x3 = 1.0120;
inline constexpr double kEnergyPerSpikeJoules = 109e-12;

struct EnergyModel {
    /// Absolute powers are optional; without them only ratios are reported.
    std::optional<double> power_watts_baseline;
    std::optional<double> power_watts_xor;
    double power_overhead_ratio = kOverheadRatio5x5;
    double energy_per_spike_joules = kEnergyPerSpikeJoules;

    /// power_watts_xor if given, else baseline power times the overhead ratio.
    std::optional<double> xor_power() const;
};

/// P * t in joules.
double energy_power_time(double watts, std::uint64_t ticks, double tick_frequency_hz);

/// 100 * (1 - (t_xor / t_baseline) * ratio), from the predicted tick totals.
double energy_reduction(std::uint64_t w_c, int max_iter, double power_overhead_ratio);

/// 100 * (1 - t_xor / t_baseline).
double tick_reduction(std::uint64_t w_c, int max_iter);

double energy_spike_count(std::uint64_t total_spikes, const EnergyModel& model);

struct SweepRow {
    std::uint64_t w_c = 0;
    int max_iter = 0;
    std::uint64_t ticks_baseline = 0;
    std::uint64_t ticks_xor = 0;
    std::optional<double> energy_baseline;
    std::optional<double> energy_xor;
    double reduction_percent = 0;
};

/// Rows in w_c-major order.
std::vector<SweepRow> sweep(const std::vector<std::uint64_t>& word_counts, const std::vector<int>& max_iters,
                            const EnergyModel& energy, const TimingModel& timing);

}  // namespace nmgab
