#pragma once

// File formats: parity-check matrices, word lists, decoder layouts (JSON),
// spike traces (CSV), decode results and sweep tables.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmgab/analytics.hpp"
#include "nmgab/compiler.hpp"
#include "nmgab/engine.hpp"
#include "nmgab/gab.hpp"

namespace nmgab {

/// Malformed or unreadable input. `line` is 1-based when known.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& source, std::optional<std::size_t> line, const std::string& message);
    std::optional<std::size_t> line() const { return line_; }

private:
    std::optional<std::size_t> line_;
};

/// First line written by every generated file; ignored by the readers.
inline constexpr const char* kVersionHeader = "# nmgab 1.0";

/// "M N d_v d_c" then M lines of N characters in {0,1}. Blank lines and
/// lines starting with '#' are skipped.
HMatrix parse_h_matrix(std::istream& in, const std::string& source = "<stream>");
HMatrix read_h_file(const std::filesystem::path& path);
void write_h_matrix(std::ostream& out, const HMatrix& H);

/// One binary string per line, bit 0 leftmost.
std::vector<BitVector> parse_words(std::istream& in, std::optional<int> expected_bits = std::nullopt,
                                   const std::string& source = "<stream>");
std::vector<BitVector> read_words_file(const std::filesystem::path& path, std::optional<int> expected_bits = std::nullopt);
void write_words(std::ostream& out, const std::vector<BitVector>& words);

std::string layout_to_json(const DecoderLayout& layout);
DecoderLayout layout_from_json(const std::string& text, const std::string& source = "<string>");
void save_layout(const std::filesystem::path& path, const DecoderLayout& layout);
DecoderLayout load_layout(const std::filesystem::path& path);

/// One row of a trace file. `core` is empty for host deliveries.
struct TraceRow {
    std::uint64_t tick = 0;
    std::optional<Coord> core;
    int neuron = 0;
    std::string label;
    bool operator==(const TraceRow&) const = default;
};

/// Header line, then "tick,core_x,core_y,neuron_index,label" rows: neuron
/// spikes of a tick followed by the host deliveries of that tick.
void write_trace_csv(std::ostream& out, const TraceLog& trace, const GridConfig& grid);
std::vector<TraceRow> parse_trace_csv(std::istream& in, const std::string& source = "<stream>");

/// "10001101,converged,7"; unobserved words give "<none>,missing,0".
std::string format_result(const WordResult& r);
std::string format_oracle_result(const DecodeResult& r);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nmgab
