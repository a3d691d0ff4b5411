#pragma once

// Serial Gallager-B reference decoder, codebook enumeration and dataset
// generation for regular LDPC codes.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nmgab {

using BitVector = std::vector<std::uint8_t>;

/// Parses "10001100" (index 0 leftmost). Throws std::invalid_argument.
BitVector parse_bits(std::string_view text);
std::string to_string(const BitVector& bits);

class HMatrix {
public:
    HMatrix() = default;
    /// Validates shape and regularity (every column d_v ones, every row d_c).
    HMatrix(std::vector<BitVector> rows, int d_v, int d_c);

    int M() const { return static_cast<int>(rows_.size()); }
    int N() const { return rows_.empty() ? 0 : static_cast<int>(rows_.front().size()); }
    int d_v() const { return d_v_; }
    int d_c() const { return d_c_; }
    bool at(int m, int n) const { return rows_[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] != 0; }
    const std::vector<BitVector>& rows() const { return rows_; }
    /// Checks adjacent to variable n, ascending.
    const std::vector<int>& checks_of(int n) const { return checks_[static_cast<std::size_t>(n)]; }
    /// Variables adjacent to check m, ascending.
    const std::vector<int>& vars_of(int m) const { return vars_[static_cast<std::size_t>(m)]; }

    bool operator==(const HMatrix& other) const { return rows_ == other.rows_ && d_v_ == other.d_v_ && d_c_ == other.d_c_; }

private:
    std::vector<BitVector> rows_;
    int d_v_ = 0;
    int d_c_ = 0;
    std::vector<std::vector<int>> checks_;
    std::vector<std::vector<int>> vars_;
};

/// The 4x8 example code (d_v = 2, d_c = 4).
HMatrix make_example8();

/// Tie threshold b as num/den.
struct Rational {
    int num = 0;
    int den = 1;
    bool operator==(const Rational&) const = default;
};

struct DecoderParams {
    int max_iter = 100;
    /// Variable-message vote threshold; defaults to d_v / 2 when unset.
    std::optional<Rational> tie_threshold_b;
    bool operator==(const DecoderParams&) const = default;
};

/// Messages live on Tanner edges; vnc[m][k] and cnv[m][k] belong to the edge
/// between check m and variable H.vars_of(m)[k].
struct GabState {
    BitVector r;
    std::vector<BitVector> vnc;
    std::vector<BitVector> cnv;
    BitVector x_prime;
    BitVector syndrome;
};

struct DecodeResult {
    BitVector x_prime;
    bool converged = false;
    int iterations_used = 0;

    bool operator==(const DecodeResult&) const = default;
};

BitVector syndrome(const HMatrix& H, const BitVector& x);
bool is_zero(const BitVector& bits);

/// State before the first iteration: vnc = r, x' = r.
GabState gab_init(const HMatrix& H, const BitVector& r);
/// One round of check update, variable update, decision and syndrome.
void gab_iteration(const HMatrix& H, GabState& state, const DecoderParams& params);
DecodeResult gab_decode(const HMatrix& H, const BitVector& r, const DecoderParams& params = {});

int gf2_rank(const HMatrix& H);
/// All zero-syndrome words, ordered as binary numbers with bit 0 most significant.
std::vector<BitVector> enumerate_codebook(const HMatrix& H);
/// Codebook followed by every single-bit flip of every codeword
/// (codeword-major, flip-position-minor).
std::vector<BitVector> make_dataset(const HMatrix& H);

}  // namespace nmgab
