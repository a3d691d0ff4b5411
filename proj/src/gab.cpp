#include "nmgab/gab.hpp"

#include <algorithm>
#include <bit>

namespace nmgab {

namespace {

void require_length(const BitVector& x, int n, const char* what) {
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument(std::string(what) + " has length " + std::to_string(x.size()) + ", expected " +
                                    std::to_string(n));
}

// 1 above the threshold, 0 below, tie on equality.
std::uint8_t vote(long long lhs, long long rhs, std::uint8_t tie) {
    if (lhs > rhs) return 1;
    if (lhs < rhs) return 0;
    return tie;
}

}  // namespace

BitVector parse_bits(std::string_view text) {
    BitVector out;
    out.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("invalid bit character '" + std::string(1, c) + "'");
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

std::string to_string(const BitVector& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

HMatrix::HMatrix(std::vector<BitVector> rows, int d_v, int d_c) : rows_(std::move(rows)), d_v_(d_v), d_c_(d_c) {
    if (rows_.empty()) throw std::invalid_argument("H has no rows");
    const std::size_t n = rows_.front().size();
    if (n <= rows_.size()) throw std::invalid_argument("H must have more columns than rows");
    if (d_v < 1 || d_c < 1) throw std::invalid_argument("H degrees must be positive");
    checks_.resize(n);
    vars_.resize(rows_.size());
    for (std::size_t m = 0; m < rows_.size(); ++m) {
        if (rows_[m].size() != n)
            throw std::invalid_argument("H row " + std::to_string(m) + " has " + std::to_string(rows_[m].size()) +
                                        " entries, expected " + std::to_string(n));
        for (std::size_t c = 0; c < n; ++c) {
            if (rows_[m][c] > 1) throw std::invalid_argument("H entries must be 0 or 1");
            if (!rows_[m][c]) continue;
            vars_[m].push_back(static_cast<int>(c));
            checks_[c].push_back(static_cast<int>(m));
        }
        if (static_cast<int>(vars_[m].size()) != d_c)
            throw std::invalid_argument("H row " + std::to_string(m) + " has weight " + std::to_string(vars_[m].size()) +
                                        ", expected d_c = " + std::to_string(d_c));
    }
    for (std::size_t c = 0; c < n; ++c)
        if (static_cast<int>(checks_[c].size()) != d_v)
            throw std::invalid_argument("H column " + std::to_string(c) + " has weight " +
                                        std::to_string(checks_[c].size()) + ", expected d_v = " + std::to_string(d_v));
}

HMatrix make_example8() {
    return HMatrix({parse_bits("01101001"), parse_bits("10110100"), parse_bits("00010111"), parse_bits("11001010")}, 2,
                   4);
}

BitVector syndrome(const HMatrix& H, const BitVector& x) {
    require_length(x, H.N(), "word");
    BitVector s(static_cast<std::size_t>(H.M()), 0);
    for (int m = 0; m < H.M(); ++m)
        for (int n : H.vars_of(m)) s[static_cast<std::size_t>(m)] ^= x[static_cast<std::size_t>(n)];
    return s;
}

bool is_zero(const BitVector& bits) {
    return std::ranges::all_of(bits, [](std::uint8_t b) { return b == 0; });
}

GabState gab_init(const HMatrix& H, const BitVector& r) {
    require_length(r, H.N(), "received word");
    GabState st;
    st.r = r;
    st.vnc.resize(static_cast<std::size_t>(H.M()));
    st.cnv.resize(static_cast<std::size_t>(H.M()));
    for (int m = 0; m < H.M(); ++m) {
        auto& row = st.vnc[static_cast<std::size_t>(m)];
        for (int n : H.vars_of(m)) row.push_back(r[static_cast<std::size_t>(n)]);
        st.cnv[static_cast<std::size_t>(m)].assign(row.size(), 0);
    }
    st.x_prime = r;
    st.syndrome = syndrome(H, r);
    return st;
}

void gab_iteration(const HMatrix& H, GabState& st, const DecoderParams& params) {
    const auto M = static_cast<std::size_t>(H.M());
    const auto N = static_cast<std::size_t>(H.N());

    for (std::size_t m = 0; m < M; ++m) {
        std::uint8_t total = 0;
        for (auto v : st.vnc[m]) total ^= v;
        for (std::size_t k = 0; k < st.vnc[m].size(); ++k) st.cnv[m][k] = total ^ st.vnc[m][k];
    }

    // incoming[n] lists (check, slot) pairs so each variable sees its messages.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> incoming(N);
    for (std::size_t m = 0; m < M; ++m) {
        const auto& vars = H.vars_of(static_cast<int>(m));
        for (std::size_t k = 0; k < vars.size(); ++k) incoming[static_cast<std::size_t>(vars[k])].emplace_back(m, k);
    }

    const Rational b = params.tie_threshold_b.value_or(Rational{H.d_v(), 2});
    for (std::size_t n = 0; n < N; ++n) {
        const std::uint8_t r = st.r[n];
        long long all = r;
        for (auto [m, k] : incoming[n]) all += st.cnv[m][k];
        for (auto [m, k] : incoming[n]) {
            const long long s = all - st.cnv[m][k];
            st.vnc[m][k] = vote(s * b.den, static_cast<long long>(b.num), r);
        }
        st.x_prime[n] = vote(2 * all, H.d_v() + 1, r);
    }
    st.syndrome = syndrome(H, st.x_prime);
}

DecodeResult gab_decode(const HMatrix& H, const BitVector& r, const DecoderParams& params) {
    if (params.max_iter < 1) throw std::invalid_argument("maxIter must be at least 1");
    if (params.tie_threshold_b && params.tie_threshold_b->den <= 0)
        throw std::invalid_argument("tie threshold denominator must be positive");
    GabState st = gab_init(H, r);
    for (int it = 1; it <= params.max_iter; ++it) {
        gab_iteration(H, st, params);
        if (is_zero(st.syndrome)) return {st.x_prime, true, it};
    }
    return {st.x_prime, false, params.max_iter};
}

int gf2_rank(const HMatrix& H) {
    std::vector<BitVector> rows = H.rows();
    int rank = 0;
    const auto N = static_cast<std::size_t>(H.N());
    for (std::size_t col = 0; col < N && rank < H.M(); ++col) {
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](const BitVector& row) { return row[col]; });
        if (pivot == rows.end()) continue;
        std::iter_swap(rows.begin() + rank, pivot);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<int>(i) == rank || !rows[i][col]) continue;
            for (std::size_t c = 0; c < N; ++c) rows[i][c] ^= rows[static_cast<std::size_t>(rank)][c];
        }
        ++rank;
    }
    return rank;
}

std::vector<BitVector> enumerate_codebook(const HMatrix& H) {
    const int N = H.N();
    if (N > 24) throw std::invalid_argument("codebook enumeration limited to N <= 24, got " + std::to_string(N));
    std::vector<std::uint32_t> masks(static_cast<std::size_t>(H.M()), 0);
    for (int m = 0; m < H.M(); ++m)
        for (int n : H.vars_of(m)) masks[static_cast<std::size_t>(m)] |= 1u << (N - 1 - n);

    std::vector<BitVector> out;
    for (std::uint32_t w = 0; w < (1u << N); ++w) {
        if (std::ranges::any_of(masks, [w](std::uint32_t mask) { return std::popcount(w & mask) % 2 != 0; })) continue;
        BitVector x(static_cast<std::size_t>(N));
        for (int n = 0; n < N; ++n) x[static_cast<std::size_t>(n)] = (w >> (N - 1 - n)) & 1u;
        out.push_back(std::move(x));
    }
    return out;
}

std::vector<BitVector> make_dataset(const HMatrix& H) {
    auto out = enumerate_codebook(H);
    const std::size_t codewords = out.size();
    for (std::size_t i = 0; i < codewords; ++i) {
        for (std::size_t n = 0; n < static_cast<std::size_t>(H.N()); ++n) {
            BitVector flipped = out[i];
            flipped[n] ^= 1;
            out.push_back(std::move(flipped));
        }
    }
    return out;
}

}  // namespace nmgab
