#pragma once

// Independent reference models used by the tests. Nothing here calls into the
// library; every value is recomputed from first principles.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

using Bits = std::vector<int>;

// Check supports of the 8-bit example code.
inline const std::array<std::vector<int>, 4> kExampleChecks = {{
    {1, 2, 4, 7},
    {0, 2, 3, 5},
    {3, 5, 6, 7},
    {0, 1, 4, 6},
}};

inline Bits bits(const std::string& s) {
    Bits b;
    for (char c : s) b.push_back(c == '1' ? 1 : 0);
    return b;
}

inline std::string str(const Bits& b) {
    std::string s;
    for (int v : b) s.push_back(v ? '1' : '0');
    return s;
}

inline int popcount(unsigned v) {
    int c = 0;
    for (; v; v &= v - 1) ++c;
    return c;
}

inline Bits syndrome(const Bits& x) {
    Bits s;
    for (const auto& row : kExampleChecks) {
        int p = 0;
        for (int n : row) p ^= x[static_cast<std::size_t>(n)];
        s.push_back(p);
    }
    return s;
}

inline bool zero(const Bits& s) {
    for (int v : s)
        if (v) return false;
    return true;
}

// Word with bit 0 as the most significant bit of `value`.
inline Bits from_index(unsigned value, int n) {
    Bits b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = (value >> (n - 1 - i)) & 1U;
    return b;
}

inline std::vector<Bits> codebook() {
    std::vector<Bits> out;
    for (unsigned v = 0; v < 256; ++v) {
        auto x = from_index(v, 8);
        if (zero(syndrome(x))) out.push_back(x);
    }
    return out;
}

inline std::vector<Bits> dataset() {
    auto words = codebook();
    const auto cb = words;
    for (const auto& c : cb)
        for (std::size_t i = 0; i < 8; ++i) {
            auto w = c;
            w[i] ^= 1;
            words.push_back(w);
        }
    return words;
}

struct Decoded {
    Bits x;
    bool converged = false;
    int iterations = 0;
};

// Gallager-B with messages held in an 8x4 edge table indexed by (variable,
// check). Check messages exclude the destination; the variable message
// compares the extrinsic vote count against d_v / 2 with ties to r; the
// decision is a strict majority over r and all incoming check messages.
inline Decoded gallager_b(const Bits& r, int max_iter) {
    constexpr int N = 8;
    constexpr int M = 4;
    int h[M][N] = {};
    for (int m = 0; m < M; ++m)
        for (int n : kExampleChecks[static_cast<std::size_t>(m)]) h[m][n] = 1;
    int v2c[N][M] = {};
    int c2v[N][M] = {};
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m)
            if (h[m][n]) v2c[n][m] = r[static_cast<std::size_t>(n)];
    Bits x = r;
    for (int it = 1; it <= max_iter; ++it) {
        for (int m = 0; m < M; ++m)
            for (int n = 0; n < N; ++n) {
                if (!h[m][n]) continue;
                int p = 0;
                for (int t = 0; t < N; ++t)
                    if (h[m][t] && t != n) p ^= v2c[t][m];
                c2v[n][m] = p;
            }
        for (int n = 0; n < N; ++n) {
            int dv = 0;
            int ones = 0;
            for (int m = 0; m < M; ++m)
                if (h[m][n]) {
                    ++dv;
                    ones += c2v[n][m];
                }
            for (int m = 0; m < M; ++m) {
                if (!h[m][n]) continue;
                const int s = r[static_cast<std::size_t>(n)] + ones - c2v[n][m];
                // Compare 2*s against d_v (b = d_v / 2).
                v2c[n][m] = 2 * s > dv ? 1 : (2 * s < dv ? 0 : r[static_cast<std::size_t>(n)]);
            }
            const int total = r[static_cast<std::size_t>(n)] + ones;
            x[static_cast<std::size_t>(n)] = 2 * total > dv + 1 ? 1 : (2 * total < dv + 1 ? 0 : r[static_cast<std::size_t>(n)]);
        }
        if (zero(syndrome(x))) return {x, true, it};
    }
    return {x, false, max_iter};
}

// Q of a register bit after a (D, Reset) schedule: set by D, cleared by Reset,
// Reset winning when both arrive together.
inline std::vector<int> register_trace(const std::vector<int>& d, const std::vector<int>& reset) {
    std::vector<int> q;
    int state = 0;
    for (std::size_t t = 0; t < d.size(); ++t) {
        if (reset[t]) state = 0;
        else if (d[t]) state = 1;
        q.push_back(state);
    }
    return q;
}

// Tick totals for a batch of words, written out from the per-word timeline:
// XOR words take 2 ticks per iteration plus 5, baseline words 3 plus 4, and
// the pipeline drains in 2 or 4 extra ticks.
inline std::uint64_t ticks_xor(std::uint64_t w, std::uint64_t k) { return w * (2 * k + 5) + 2; }
inline std::uint64_t ticks_baseline(std::uint64_t w, std::uint64_t k) { return w * (3 * k + 4) + 4; }

}  // namespace oracle
