#pragma once

// Prefix streams of the infinite sequences used in the experiments: blocks of
// repetitions, the flagged zone sequence, and pseudorandom words.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lz78.hpp"

namespace pdlab {

struct Checkpoint {
    std::uint64_t position = 0;  // number of symbols before the checkpoint
    std::string label;
};

/// A finite stream made of lazily produced sections, with labelled positions.
class CheckpointedStream {
public:
    using Producer = std::function<std::string(std::size_t)>;

    CheckpointedStream() = default;
    CheckpointedStream(std::vector<std::uint64_t> section_lengths, Producer producer, std::vector<Checkpoint> checkpoints)
        : lengths_(std::move(section_lengths)), produce_(std::move(producer)), checkpoints_(std::move(checkpoints)) {
        for (auto l : lengths_) total_ += l;
        for (std::size_t i = 1; i < checkpoints_.size(); ++i)
            if (checkpoints_[i].position <= checkpoints_[i - 1].position)
                throw std::logic_error("checkpoint positions must increase");
    }

    std::uint64_t total_length() const { return total_; }
    const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
    std::size_t section_count() const { return lengths_.size(); }
    std::uint64_t section_length(std::size_t i) const { return lengths_[i]; }
    std::string section(std::size_t i) const {
        std::string s = produce_(i);
        if (s.size() != lengths_[i]) throw std::logic_error("section length mismatch");
        return s;
    }

    /// Calls f with consecutive chunks covering the first `limit` symbols.
    template <class F>
    void for_each_chunk(std::uint64_t limit, F&& f) const {
        std::uint64_t done = 0;
        for (std::size_t i = 0; i < lengths_.size() && done < limit; ++i) {
            if (lengths_[i] == 0) continue;
            const std::string s = section(i);
            const auto take = std::min<std::uint64_t>(s.size(), limit - done);
            f(std::string_view(s).substr(0, take));
            done += take;
        }
    }

    std::string prefix(std::uint64_t n) const {
        if (n > total_) throw std::out_of_range("prefix longer than stream");
        std::string out;
        out.reserve(n);
        for_each_chunk(n, [&](std::string_view c) { out.append(c); });
        return out;
    }

    std::string str() const { return prefix(total_); }

    std::optional<Checkpoint> find(std::string_view label) const {
        for (const auto& c : checkpoints_)
            if (c.label == label) return c;
        return std::nullopt;
    }

private:
    std::vector<std::uint64_t> lengths_;
    Producer produce_;
    std::vector<Checkpoint> checkpoints_;
    std::uint64_t total_ = 0;
};

namespace detail {

inline void add_checkpoint(std::vector<Checkpoint>& cps, std::uint64_t pos, std::string label) {
    if (!cps.empty() && cps.back().position >= pos) return;  // keep the first label at a position
    cps.push_back({pos, std::move(label)});
}

inline std::string repeat(std::string_view u, std::uint64_t n) {
    std::string s;
    s.reserve(u.size() * n);
    for (std::uint64_t i = 0; i < n; ++i) s.append(u);
    return s;
}

inline std::string reversed(std::string s) {
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Repetition blocks t1 u1^n1 t2 u2^n2 ...

struct RepetitionBlock {
    std::string t;
    std::string u;
    std::uint64_t n = 1;
};

struct RepetitionRecipe {
    std::vector<RepetitionBlock> blocks;

    void check() const {
        for (const auto& b : blocks) {
            if (b.u.empty()) throw std::invalid_argument("repetition block with empty u");
            if (b.n < 1) throw std::invalid_argument("repetition count must be at least 1");
        }
    }
    std::uint64_t block_length(std::size_t i) const { return blocks[i].t.size() + blocks[i].u.size() * blocks[i].n; }
};

/// Checkpoints after 1, 2, 4, ... repetitions of u_i (label block<i>.rep<m>)
/// and at every block end (block<i>.end), blocks numbered from 1.
inline CheckpointedStream repetitive_stream(const RepetitionRecipe& r) {
    r.check();
    std::vector<std::uint64_t> lengths;
    std::vector<Checkpoint> cps;
    std::uint64_t pos = 0;
    for (std::size_t i = 0; i < r.blocks.size(); ++i) {
        const auto& b = r.blocks[i];
        const std::string tag = "block" + std::to_string(i + 1);
        for (std::uint64_t m = 1; m < b.n; m <<= 1)
            detail::add_checkpoint(cps, pos + b.t.size() + m * b.u.size(), tag + ".rep" + std::to_string(m));
        pos += r.block_length(i);
        if (!cps.empty() && cps.back().position == pos) cps.pop_back();
        detail::add_checkpoint(cps, pos, tag + ".end");
        lengths.push_back(r.block_length(i));
    }
    auto blocks = r.blocks;
    return CheckpointedStream(std::move(lengths), [blocks](std::size_t i) {
        return blocks[i].t + detail::repeat(blocks[i].u, blocks[i].n);
    }, std::move(cps));
}

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RepetitionSearchOptions {
    std::uint64_t cap = std::uint64_t{1} << 22;  // largest repetition count tried
    std::vector<std::uint64_t> min_counts;        // optional lower bound per block
    std::string alphabet = "01";
};

/// Picks repetition counts by doubling so that, measured with the LZ78 code
/// of this library, block end i has ratio <= 4/(i+1) and no larger than
/// block end i-1, and every repetition boundary strictly inside block i has
/// ratio <= 8/(i+1). When a boundary inside block i is too expensive the
/// previous count is doubled and block i is searched again.
inline RepetitionRecipe choose_repetition_counts(const std::vector<std::pair<std::string, std::string>>& pairs,
                                                 std::size_t depth, const RepetitionSearchOptions& opt = {}) {
    if (depth > pairs.size()) throw std::invalid_argument("depth exceeds the number of (t,u) pairs");
    for (std::size_t i = 0; i < depth; ++i)
        if (pairs[i].second.empty()) throw std::invalid_argument("u must be nonempty");
    const double log_sigma = std::log2(static_cast<double>(opt.alphabet.size()));

    struct Level {
        LzMeter meter;
        std::uint64_t length;
        std::uint64_t n;
        double ratio;
    };
    std::vector<Level> levels;
    std::vector<std::uint64_t> start(depth, 1);
    for (std::size_t i = 0; i < depth && i < opt.min_counts.size(); ++i) start[i] = std::max<std::uint64_t>(1, opt.min_counts[i]);

    std::size_t i = 0;
    while (i < depth) {
        LzMeter m = levels.empty() ? LzMeter(opt.alphabet) : levels.back().meter;
        std::uint64_t len = levels.empty() ? 0 : levels.back().length;
        const double prev_ratio = levels.empty() ? std::numeric_limits<double>::infinity() : levels.back().ratio;
        const double end_bound = 4.0 / static_cast<double>(i + 2);
        const double mid_bound = 8.0 / static_cast<double>(i + 2);
        auto ratio = [&] { return static_cast<double>(m.length()) / (static_cast<double>(len) * log_sigma); };
        const auto& [t, u] = pairs[i];

        m.feed(t);
        len += t.size();
        bool backtrack = false;
        std::uint64_t target = start[i];
        std::uint64_t reps = 0;
        // boundary j = reps: interior while j < final count
        auto interior_ok = [&] { return len == 0 || ratio() <= mid_bound; };
        if (!interior_ok()) backtrack = true;
        while (!backtrack) {
            m.feed(u);
            len += u.size();
            ++reps;
            if (reps < target) {
                if (!interior_ok()) backtrack = true;
                continue;
            }
            const double r = ratio();
            if (r <= end_bound && r <= prev_ratio) {
                levels.push_back({m, len, reps, r});
                break;
            }
            if (target >= opt.cap)
                throw BudgetExceeded("repetition count for block " + std::to_string(i + 1) + " exceeds cap " +
                                     std::to_string(opt.cap));
            target *= 2;
            if (!interior_ok()) backtrack = true;
        }
        if (!backtrack) {
            ++i;
            continue;
        }
        if (levels.empty())
            throw BudgetExceeded("first block cannot meet the interior bound; cap " + std::to_string(opt.cap));
        const std::uint64_t prev_n = levels.back().n;
        levels.pop_back();
        --i;
        if (prev_n * 2 > opt.cap)
            throw BudgetExceeded("repetition count for block " + std::to_string(i + 1) + " exceeds cap " +
                                 std::to_string(opt.cap));
        start[i] = prev_n * 2;
    }

    RepetitionRecipe out;
    for (std::size_t j = 0; j < depth; ++j) out.blocks.push_back({pairs[j].first, pairs[j].second, levels[j].n});
    return out;
}

// ---------------------------------------------------------------------------
// Pseudorandom words

/// SplitMix64 (Steele, Lea, Flood). Fixed constants, so words are
/// reproducible on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Deterministic stand-in for an incompressible word. Binary words take 64
/// symbols from each generator output, least significant bit first; larger
/// alphabets take one output per symbol, reduced modulo |alphabet|.
inline std::string random_word(std::size_t len, std::uint64_t seed, std::string_view alphabet = "01") {
    if (alphabet.size() < 2) throw std::invalid_argument("alphabet needs at least two symbols");
    SplitMix64 g(seed);
    std::string w;
    w.reserve(len);
    if (alphabet.size() == 2) {
        while (w.size() < len) {
            std::uint64_t x = g.next();
            for (int b = 0; b < 64 && w.size() < len; ++b, x >>= 1) w.push_back(alphabet[x & 1U]);
        }
    } else {
        while (w.size() < len) w.push_back(alphabet[g.next() % alphabet.size()]);
    }
    return w;
}

// ---------------------------------------------------------------------------
// The flagged zone sequence

/// All binary strings of length n without a run of k ones, in lexicographic order.
inline std::vector<std::string> enumerate_T(std::size_t n, std::size_t k) {
    if (k < 2) throw std::invalid_argument("enumerate_T needs k >= 2");
    std::vector<std::string> out;
    std::string cur;
    std::function<void(std::size_t)> go = [&](std::size_t run) {
        if (cur.size() == n) {
            out.push_back(cur);
            return;
        }
        cur.push_back('0');
        go(0);
        cur.back() = '1';
        if (run + 1 < k) go(run + 1);
        cur.pop_back();
    };
    go(0);
    return out;
}

class TooSmall : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Flag length f(n) with f(k) = 2k and f(n+1) = f(n) + v + 1.
inline std::size_t flag_length(std::size_t n, std::size_t k, std::size_t v) {
    if (n < k) throw std::invalid_argument("flag_length defined for n >= k");
    return 2 * k + (n - k) * (v + 1);
}

struct ZonePlan {
    std::size_t n = 0, k = 0, v = 0;
    std::vector<std::string> A;
    std::vector<std::vector<std::string>> X, Y;  // v zones each
    std::vector<std::size_t> flags;              // f(n), f(n)+1, ..., f(n)+v

    std::string zone_text(const std::vector<std::string>& zone) const {
        std::string s;
        for (const auto& x : zone) s += x;
        return s;
    }
    std::uint64_t section_length() const {
        std::uint64_t len = 0;
        for (const auto& a : A) len += a.size();
        for (std::size_t i = 0; i < v; ++i)
            for (const auto& x : X[i]) len += 2 * x.size();
        for (auto f : flags) len += f;
        return len;
    }
};

/// Members of T_n that begin and end with 0.
inline std::vector<std::string> enumerate_T_restricted(std::size_t n, std::size_t k) {
    auto all = enumerate_T(n, k);
    std::vector<std::string> out;
    for (auto& s : all)
        if (!s.empty() && s.front() == '0' && s.back() == '0') out.push_back(std::move(s));
    return out;
}

/// Splits the restricted universe into palindromes and v zones of reverse
/// pairs. Pairs are taken in lexicographic order of their smaller member;
/// each zone gets floor(P/v) of them and the last zone also the remainder.
inline ZonePlan zone_split(std::size_t n, std::size_t k, std::size_t v) {
    if (v < 1) throw std::invalid_argument("zone_split needs v >= 1");
    ZonePlan plan;
    plan.n = n;
    plan.k = k;
    plan.v = v;
    std::vector<std::string> smaller;
    for (auto& s : enumerate_T_restricted(n, k)) {
        const std::string r = detail::reversed(s);
        if (r == s)
            plan.A.push_back(s);
        else if (s < r)
            smaller.push_back(s);
    }
    if (smaller.size() < v)
        throw TooSmall("n=" + std::to_string(n) + " gives " + std::to_string(smaller.size()) +
                       " reverse pairs, fewer than v=" + std::to_string(v));
    const std::size_t per = smaller.size() / v;
    plan.X.resize(v);
    plan.Y.resize(v);
    std::size_t at = 0;
    for (std::size_t i = 0; i < v; ++i) {
        const std::size_t take = (i + 1 == v) ? smaller.size() - at : per;
        plan.X[i].assign(smaller.begin() + static_cast<std::ptrdiff_t>(at),
                         smaller.begin() + static_cast<std::ptrdiff_t>(at + take));
        at += take;
        for (auto it = plan.X[i].rbegin(); it != plan.X[i].rend(); ++it) plan.Y[i].push_back(detail::reversed(*it));
    }
    const std::size_t f = flag_length(n, k, v);
    for (std::size_t i = 0; i <= v; ++i) plan.flags.push_back(f + i);
    return plan;
}

inline std::string section_text(const ZonePlan& p) {
    std::string s;
    s.reserve(p.section_length());
    s += p.zone_text(p.A);
    s.append(p.flags[0], '1');
    for (std::size_t i = 0; i < p.v; ++i) {
        s += p.zone_text(p.X[i]);
        s.append(p.flags[i + 1], '1');
        s += p.zone_text(p.Y[i]);
    }
    return s;
}

/// The early part: every string of length 1..k-1 in lexicographic order,
/// then the flags 1^k .. 1^(2k-1).
inline std::string early_text(std::size_t k) {
    std::string s;
    for (std::size_t n = 1; n < k; ++n)
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
            for (std::size_t b = n; b > 0; --b) s.push_back(((x >> (b - 1)) & 1U) ? '1' : '0');
    for (std::size_t j = k; j < 2 * k; ++j) s.append(j, '1');
    return s;
}

struct ZoneSequence {
    std::size_t k = 0, v = 0, n_max = 0;
    std::vector<ZonePlan> sections;  // one per included n, ascending
    std::vector<std::size_t> skipped;  // n in [k, n_max] with too few pairs
};

/// Plans for sections k..n_max. Sections whose restricted universe has fewer
/// than v reverse pairs cannot fill every zone and are left out.
inline ZoneSequence plan_S(std::size_t k, std::size_t v, std::size_t n_max) {
    if (k < 2 || v < 1 || n_max < k) throw std::invalid_argument("build_S needs k >= 2, v >= 1, n_max >= k");
    ZoneSequence seq{k, v, n_max, {}, {}};
    for (std::size_t n = k; n <= n_max; ++n) {
        try {
            seq.sections.push_back(zone_split(n, k, v));
        } catch (const TooSmall&) {
            seq.skipped.push_back(n);
        }
    }
    if (seq.sections.empty())
        throw TooSmall("no section in [" + std::to_string(k) + ", " + std::to_string(n_max) + "] has " +
                       std::to_string(v) + " reverse pairs");
    return seq;
}

/// Stream S_1 ... S_(k-1) 1^k ... 1^(2k-1) S_k ... S_(n_max) with checkpoints
/// early:end, and per section S<n>:A, S<n>:flag0, then for each zone i
/// S<n>:X<i>, S<n>:flagX<i> (end of the flag after X_i) and S<n>:Y<i>.
inline CheckpointedStream build_S(std::size_t k, std::size_t v, std::size_t n_max) {
    auto seq = std::make_shared<ZoneSequence>(plan_S(k, v, n_max));
    std::vector<std::uint64_t> lengths;
    std::vector<Checkpoint> cps;
    const std::string early = early_text(k);
    lengths.push_back(early.size());
    std::uint64_t pos = early.size();
    detail::add_checkpoint(cps, pos, "early:end");
    for (const auto& p : seq->sections) {
        const std::string tag = "S" + std::to_string(p.n) + ":";
        auto zone_len = [](const std::vector<std::string>& z) {
            std::uint64_t l = 0;
            for (const auto& s : z) l += s.size();
            return l;
        };
        pos += zone_len(p.A);
        detail::add_checkpoint(cps, pos, tag + "A");
        pos += p.flags[0];
        detail::add_checkpoint(cps, pos, tag + "flag0");
        for (std::size_t i = 0; i < v; ++i) {
            const std::string z = std::to_string(i + 1);
            pos += zone_len(p.X[i]);
            detail::add_checkpoint(cps, pos, tag + "X" + z);
            pos += p.flags[i + 1];
            detail::add_checkpoint(cps, pos, tag + "flagX" + z);
            pos += zone_len(p.Y[i]);
            detail::add_checkpoint(cps, pos, tag + "Y" + z);
        }
        lengths.push_back(p.section_length());
    }
    return CheckpointedStream(std::move(lengths), [seq, early](std::size_t i) {
        return i == 0 ? early : section_text(seq->sections[i - 1]);
    }, std::move(cps));
}

// ---------------------------------------------------------------------------
// Streams held in memory and checkpoint sidecars (CSV: position,label)

inline CheckpointedStream stream_from_text(std::string text, std::vector<Checkpoint> checkpoints = {}) {
    for (const auto& c : checkpoints)
        if (c.position > text.size())
            throw std::invalid_argument("checkpoint " + c.label + " lies past the end of the text");
    auto shared = std::make_shared<const std::string>(std::move(text));
    return CheckpointedStream({shared->size()}, [shared](std::size_t) { return *shared; }, std::move(checkpoints));
}

inline void write_checkpoints_csv(std::ostream& out, const std::vector<Checkpoint>& cps) {
    out << "position,label\n";
    for (const auto& c : cps) out << c.position << "," << c.label << "\n";
}

inline std::vector<Checkpoint> read_checkpoints_csv(std::istream& in) {
    std::vector<Checkpoint> cps;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (lineno == 1 && line == "position,label")) continue;
        const auto comma = line.find(',');
        const std::string num = line.substr(0, comma);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("checkpoint line " + std::to_string(lineno) + ": bad position '" + num + "'");
        cps.push_back({std::stoull(num), comma == std::string::npos ? std::string() : line.substr(comma + 1)});
    }
    return cps;
}

}  // namespace pdlab
