#pragma once

// Concrete compressors used by the experiments.

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdc.hpp"

namespace pdlab {

namespace detail {

inline std::string rep(char c, std::size_t n) { return std::string(n, c); }
inline std::string idx(const std::string& base, std::size_t i) { return base + std::to_string(i); }

}  // namespace detail

/// One state, copies its input, never touches the stack.
inline PdcSpec make_identity(const std::string& alphabet = "01", bool endmark = false) {
    PdcBuilder b(endmark ? "identity_endmarked" : "identity", alphabet, "z");
    b.start("q", 'z').endmarked(endmark);
    for (char c : alphabet) b.rule("q", Input::sym(c), 'z', "q", "z", std::string(1, c));
    if (endmark) b.rule("q", Input::end(), 'z', "q", "z", "");
    return b.build();
}

/// Pushes on every 0 and pops on every 1; a 1 on the empty stack is written
/// twice so the output stays decodable.
inline PdcSpec make_push_pop_copier() {
    PdcBuilder b("push_pop_copier", "01", "za");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "s", "az", "0");
    b.rule("s", Input::sym('0'), 'a', "s", "aa", "0");
    b.rule("s", Input::sym('1'), 'a', "s", "", "1");
    b.rule("s", Input::sym('1'), 'z', "s", "z", "11");
    return b.build();
}

/// Buffers one symbol in the state and writes symbols out in pairs.
inline PdcSpec make_pair_buffer() {
    PdcBuilder b("pair_buffer", "01", "z");
    b.start("s", 'z');
    for (char x : std::string("01")) {
        const std::string p = std::string("p") + x;
        b.rule("s", Input::sym(x), 'z', p, "z", "");
        for (char y : std::string("01")) b.rule(p, Input::sym(y), 'z', "s", "z", std::string{x, y});
    }
    return b.build();
}

/// Endmarker compressor squeezing 0^n to about n/k^2 symbols.
///
/// Reading zeros it counts modulo k in c<i> and pushes an `a` every k zeros.
/// At the endmarker it writes 0 1^i and pops the stack, writing a 0 for every
/// k pops (f<j>), then 1^j on the bottom and halts in d<j>. Keeping j in the
/// halting state is what makes 0 1^i 0^m 1^j decodable. The first 1 switches
/// to writing a 1 followed by the input read so far (p<i>) and then copying.
inline PdcSpec make_unary_squeezer(std::size_t k) {
    using detail::idx;
    using detail::rep;
    if (k < 2) throw std::invalid_argument("unary squeezer needs k >= 2");
    PdcBuilder b("unary_squeezer_k" + std::to_string(k), "01", "za");
    b.start("c0", 'z').endmarked();
    for (std::size_t i = 0; i < k; ++i) {
        const auto c = idx("c", i);
        const auto next = idx("c", (i + 1) % k);
        for (char top : std::string("za")) {
            const std::string keep(1, top);
            if (i + 1 == k)
                b.rule(c, Input::sym('0'), top, next, std::string("a") + top, "");
            else
                b.rule(c, Input::sym('0'), top, next, keep, "");
            b.rule(c, Input::sym('1'), top, idx("p", i), keep, "1");
            b.rule(c, Input::end(), top, "f0", keep, "0" + rep('1', i));
        }
        b.rule(idx("p", i), Input::lambda(), 'a', idx("p", i), "", rep('0', k));
        b.rule(idx("p", i), Input::lambda(), 'z', "copy", "z", rep('0', i) + "1");
    }
    // copy is only entered on an empty stack; the rules on `a` keep it total
    for (char top : std::string("za")) {
        for (char x : std::string("01")) b.rule("copy", Input::sym(x), top, "copy", std::string(1, top), std::string(1, x));
        b.rule("copy", Input::end(), top, "done", std::string(1, top), "");
    }
    for (std::size_t j = 0; j < k; ++j) {
        const bool wrap = j + 1 == k;
        b.rule(idx("f", j), Input::lambda(), 'a', idx("f", (j + 1) % k), "", wrap ? "0" : "");
        b.rule(idx("f", j), Input::lambda(), 'z', idx("d", j), "z", rep('1', j));
    }
    return b.build();
}

/// Finite-state endmarker compressor: one 0 per k zeros of a leading zero
/// run, identity-like after the first 1.
inline PdcSpec make_block_counter(std::size_t k) {
    using detail::idx;
    using detail::rep;
    if (k < 2) throw std::invalid_argument("block counter needs k >= 2");
    PdcBuilder b("block_counter_k" + std::to_string(k), "01", "z");
    b.start("c0", 'z').endmarked();
    for (std::size_t i = 0; i < k; ++i) {
        const auto c = idx("c", i);
        b.rule(c, Input::sym('0'), 'z', idx("c", (i + 1) % k), "z", i + 1 == k ? "0" : "");
        b.rule(c, Input::sym('1'), 'z', "copy", "z", "1" + rep('0', i) + "1");
        b.rule(c, Input::end(), 'z', "done", "z", "1" + rep('0', i));
    }
    for (char x : std::string("01")) b.rule("copy", Input::sym(x), 'z', "copy", "z", std::string(1, x));
    b.rule("copy", Input::end(), 'z', "done", "z", "");
    return b.build();
}

struct ZoneCompressorParams {
    std::size_t k = 4;        // flag threshold: a run of k ones starts a flag
    std::size_t v = 4;        // X/Y zone pairs per section
    std::size_t vprime = 16;  // one output symbol per vprime matched Y symbols
    /// Length of the prefix copied before the first section; derived from k
    /// when unset.
    std::optional<std::size_t> early_count_override;

    /// Length of all strings of lengths 1..k-1 followed by the flags 1^k..1^(2k-1).
    std::size_t derived_early_count() const {
        std::size_t w = 0;
        for (std::size_t n = 1; n < k; ++n) w += n << n;
        for (std::size_t j = k; j < 2 * k; ++j) w += j;
        return w;
    }
    std::size_t early_count() const { return early_count_override.value_or(derived_early_count()); }

    void check() const {
        if (k < 2) throw std::invalid_argument("zone compressor needs k >= 2");
        if (v < 1) throw std::invalid_argument("zone compressor needs v >= 1");
        if (vprime < 1) throw std::invalid_argument("zone compressor needs v' >= 1");
    }
};

/// Plain-mode compressor for the flagged X/Y zone sequence.
///
/// States: q<i> count the early prefix; a<i> cruise through an A zone and
/// count ones; f<j> skip the j-th flag; X<j>_<i> push every bit of zone X_j
/// (i counts trailing ones); r<j>_<i> pop the k flag ones pushed by mistake;
/// Y<j>_<i> pop and compare, writing one 0 per vprime matches; qe copies
/// everything after a mismatch. Stack alphabet z (bottom), 0, 1.
///
/// Outputs differ from plain copying in three places: Y states (one 0 per
/// vprime matches), a Y mismatch (1 0^(i-1) 1, then copy) and the step that
/// leaves a Y zone on the empty stack (0 followed by the symbol read).
inline PdcSpec make_zone_compressor(const ZoneCompressorParams& p) {
    using detail::idx;
    using detail::rep;
    p.check();
    const std::size_t k = p.k, v = p.v, vp = p.vprime, w = p.early_count();
    const std::string bits = "01";
    const std::string tops = "z01";
    std::string name = "zone_k" + std::to_string(k) + "_v" + std::to_string(v) + "_vp" + std::to_string(vp);
    if (p.early_count_override) name += "_w" + std::to_string(w);
    PdcBuilder b(name, bits, tops);
    b.start("q0", 'z');

    auto keep = [](char top) { return std::string(1, top); };
    auto pop = [](char top) { return top == 'z' ? std::string("z") : std::string(); };
    auto push = [](char x, char top) { return std::string{x, top}; };
    auto copy_all = [&](const std::string& from, const std::string& to) {
        for (char x : bits)
            for (char top : tops) b.rule(from, Input::sym(x), top, to, keep(top), std::string(1, x));
    };
    auto X = [&](std::size_t j, std::size_t i) { return "X" + std::to_string(j) + "_" + std::to_string(i); };
    auto Y = [&](std::size_t j, std::size_t i) { return "Y" + std::to_string(j) + "_" + std::to_string(i); };
    auto R = [&](std::size_t j, std::size_t i) { return "r" + std::to_string(j) + "_" + std::to_string(i); };
    // Leaving a flag on a 0: the first X zone, or the Y zone of the previous X.
    auto flag_exit = [&](const std::string& from, std::size_t j, const std::string& on_one) {
        for (char top : tops) {
            b.rule(from, Input::sym('1'), top, on_one, keep(top), "1");
            if (j == 1)
                b.rule(from, Input::sym('0'), top, X(1, 0), push('0', top), "0");
            else
                b.rule(from, Input::sym('0'), top, Y(j - 1, 1), pop(top), "0");
        }
    };

    for (std::size_t i = 0; i < w; ++i) copy_all(idx("q", i), idx("q", i + 1));
    copy_all(idx("q", w), "a0");

    for (std::size_t i = 0; i < k; ++i)
        for (char top : tops) {
            b.rule(idx("a", i), Input::sym('1'), top, idx("a", i + 1), keep(top), "1");
            b.rule(idx("a", i), Input::sym('0'), top, "a0", keep(top), "0");
        }
    copy_all(idx("a", k), "f1");

    for (std::size_t j = 1; j <= v + 1; ++j) flag_exit(idx("f", j), j, idx("f", j));

    for (std::size_t j = 1; j <= v; ++j) {
        for (std::size_t i = 0; i < k; ++i)
            for (char top : tops) {
                b.rule(X(j, i), Input::sym('1'), top, X(j, i + 1), push('1', top), "1");
                b.rule(X(j, i), Input::sym('0'), top, X(j, 0), push('0', top), "0");
            }
        copy_all(X(j, k), R(j + 1, 0));
    }

    for (std::size_t j = 2; j <= v + 1; ++j) {
        for (std::size_t i = 0; i < k; ++i)
            for (char x : bits)
                for (char top : tops) b.rule(R(j, i), Input::sym(x), top, R(j, i + 1), pop(top), std::string(1, x));
        // The last correction state already sits inside the flag and behaves
        // like the flag state, so a flag of exactly 2k+1 ones is handled.
        flag_exit(R(j, k), j, idx("f", j));
    }

    for (std::size_t j = 1; j <= v; ++j)
        for (std::size_t i = 1; i <= vp; ++i) {
            const auto s = Y(j, i);
            const auto next = Y(j, i == vp ? 1 : i + 1);
            for (char x : bits) {
                for (char top : std::string("01")) {
                    if (x == top)
                        b.rule(s, Input::sym(x), top, next, "", i == vp ? "0" : "");
                    else
                        b.rule(s, Input::sym(x), top, "qe", "", "1" + rep('0', i - 1) + "1");
                }
                const std::string out = std::string("0") + x;
                if (j < v)
                    b.rule(s, Input::sym(x), 'z', X(j + 1, x == '1' ? 1 : 0), push(x, 'z'), out);
                else
                    b.rule(s, Input::sym(x), 'z', x == '1' ? "a1" : "a0", "z", out);
            }
        }

    copy_all("qe", "qe");
    return b.build();
}

/// Shipped machines by name: identity, identity_endmarked, push_pop_copier,
/// pair_buffer, unary_squeezer_k<k>, block_counter_k<k>, zone_k<k>_v<v>_vp<v'>.
inline std::optional<PdcSpec> builtin_by_name(const std::string& name) {
    auto num_after = [&](const std::string& prefix) -> std::optional<std::size_t> {
        if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return std::nullopt;
        try {
            std::size_t used = 0;
            const auto v = std::stoul(name.substr(prefix.size()), &used);
            if (used != name.size() - prefix.size()) return std::nullopt;
            return v;
        } catch (...) {
            return std::nullopt;
        }
    };
    if (name == "identity") return make_identity();
    if (name == "identity_endmarked") return make_identity("01", true);
    if (name == "push_pop_copier") return make_push_pop_copier();
    if (name == "pair_buffer") return make_pair_buffer();
    if (auto k = num_after("unary_squeezer_k"); k && *k >= 2) return make_unary_squeezer(*k);
    if (auto k = num_after("block_counter_k"); k && *k >= 2) return make_block_counter(*k);
    unsigned long zk = 0, zv = 0, zvp = 0;
    char tail = 0;
    if (std::sscanf(name.c_str(), "zone_k%lu_v%lu_vp%lu%c", &zk, &zv, &zvp, &tail) == 3 && zk >= 2 && zv >= 1 &&
        zvp >= 1)
        return make_zone_compressor({zk, zv, zvp, std::nullopt});
    return std::nullopt;
}

/// Plain-mode machines used by the experiments and the Lemma-1 style checks.
inline std::vector<PdcSpec> builtin_plain() {
    return {make_identity(), make_push_pop_copier(), make_pair_buffer(), make_zone_compressor({2, 1, 2, std::nullopt}),
            make_zone_compressor({4, 4, 16, std::nullopt})};
}

inline std::vector<PdcSpec> builtin_endmarked() {
    return {make_identity("01", true), make_unary_squeezer(2), make_unary_squeezer(3), make_unary_squeezer(4),
            make_block_counter(2), make_block_counter(3)};
}

}  // namespace pdlab
