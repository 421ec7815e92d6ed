#pragma once

// Repetition blocks that a given family of plain compressors cannot squeeze:
// each block repeats the pumpable middle of a pseudorandom word.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pumping.hpp"
#include "sequences.hpp"

namespace pdlab {

class PumpingFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HardBlockOptions {
    std::size_t word_length = 2048;
    std::uint64_t seed = 1;
    /// Lower bound on |u|; the family's default_dmin is used when larger.
    std::size_t min_u = 1;
};

struct HardStage {
    std::string t, u;
    std::uint64_t n_prime = 1;  // least n with (k-1) n|u| > (k-2)(|t| + n|u|)
    std::uint64_t n = 1;
};

/// Least n >= 1 with (1 - 1/k)|u^n| > (1 - 2/k)|t u^n|, in integers.
inline std::uint64_t least_n_prime(std::uint64_t k, std::uint64_t t_len, std::uint64_t u_len) {
    if (u_len == 0) throw std::invalid_argument("u must be nonempty");
    if (k <= 2) return 1;
    // (k-1) n U > (k-2)(T + n U)  <=>  n U > (k-2) T
    const std::uint64_t need = (k - 2) * t_len;
    return need / u_len + 1;
}

/// Stage k (from 1) pumps word w_k = random_word(word_length, seed + k) and
/// repeats u_k n_k times, where n_k is the least count with
///   n_k >= n'_k,
///   |t_k u_k^n_k| > |t_1 u_1^n_1 ... t_(k-1) u_(k-1)^n_(k-1)|,
///   |t_k u_k^n_k| > k |t_(k+1) u_(k+1)^n'_(k+1)|   (for k < stages).
inline std::vector<HardStage> pd_hard_stages(const std::vector<PdcSpec>& family, std::size_t stages,
                                             const HardBlockOptions& opt = {}) {
    for (const auto& m : family)
        if (m.endmarker_mode()) throw std::invalid_argument("pd_hard_blocks expects plain-mode machines");
    std::vector<HardStage> out;
    const std::size_t d_min = std::max<std::size_t>({std::size_t{1}, opt.min_u,
                                                     static_cast<std::size_t>(default_dmin(family, opt.word_length))});
    for (std::size_t k = 1; k <= stages; ++k) {
        const std::string w = random_word(opt.word_length, opt.seed + k);
        auto dec = find_pumpable(family, w, d_min);
        if (!dec)
            throw PumpingFailure("no pumpable split with |u| >= " + std::to_string(d_min) + " in stage " +
                                 std::to_string(k));
        HardStage s{dec->t, dec->u, least_n_prime(k, dec->t.size(), dec->u.size()), 1};
        out.push_back(std::move(s));
    }
    std::uint64_t prefix = 0;
    for (std::size_t k = 1; k <= stages; ++k) {
        auto& s = out[k - 1];
        const std::uint64_t T = s.t.size(), U = s.u.size();
        auto least_over = [&](std::uint64_t bound) {  // least n with T + nU > bound
            return bound < T ? std::uint64_t{0} : (bound - T) / U + 1;
        };
        std::uint64_t n = std::max<std::uint64_t>(s.n_prime, least_over(prefix));
        if (k < stages) {
            const auto& nx = out[k];
            n = std::max(n, least_over(k * (nx.t.size() + nx.n_prime * nx.u.size())));
        }
        s.n = std::max<std::uint64_t>(n, 1);
        prefix += T + s.n * U;
    }
    return out;
}

inline RepetitionRecipe pd_hard_blocks(const std::vector<PdcSpec>& family, std::size_t stages,
                                       const HardBlockOptions& opt = {}) {
    RepetitionRecipe r;
    for (auto& s : pd_hard_stages(family, stages, opt)) r.blocks.push_back({s.t, s.u, s.n});
    return r;
}

}  // namespace pdlab
