#pragma once

// LZ78 parsing, a bit-exact codec and incremental output-length metering.
//
// Code layout. Phrase j (1-based, counted after any seeded dictionary of d
// phrases) is written as ceil(log2(d + j)) bits of back-reference followed by
// ceil(log2 |Sigma|) bits of literal. The last phrase is preceded by one flag
// bit: 0 if it is complete, 1 if it is a repeat of an earlier phrase cut off
// by the end of the input, in which case only its back-reference follows.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ratio.hpp"

namespace pdlab {

class LzFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ceil(log2(n)) for n >= 1.
inline unsigned ceil_log2(std::uint64_t n) {
    unsigned b = 0;
    std::uint64_t p = 1;
    while (p < n) {
        p <<= 1;
        ++b;
    }
    return b;
}

namespace detail {

struct SymbolMap {
    std::array<std::int16_t, 256> code{};
    std::string alphabet;

    explicit SymbolMap(std::string_view a) : alphabet(a) {
        if (a.size() < 2) throw std::invalid_argument("alphabet needs at least two symbols");
        code.fill(-1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (code[static_cast<unsigned char>(a[i])] >= 0) throw std::invalid_argument("alphabet repeats a symbol");
            code[static_cast<unsigned char>(a[i])] = static_cast<std::int16_t>(i);
        }
    }

    unsigned of(char c) const {
        const int v = code[static_cast<unsigned char>(c)];
        if (v < 0) throw std::invalid_argument(std::string("symbol '") + c + "' not in alphabet");
        return static_cast<unsigned>(v);
    }
};

}  // namespace detail

/// Phrase trie. Node 0 is the empty phrase; node i is dictionary entry i.
class LzDictionary {
public:
    explicit LzDictionary(std::string_view alphabet = "01") : sym_(alphabet), width_(alphabet.size()) {
        child_.assign(width_, -1);
    }

    /// Dictionary after parsing `seed`; a trailing incomplete phrase is dropped.
    static LzDictionary from_parse(std::string_view seed, std::string_view alphabet = "01") {
        LzDictionary d(alphabet);
        std::int32_t node = 0;
        for (char c : seed) {
            const unsigned s = d.sym_.of(c);
            const std::int32_t next = d.child(node, s);
            if (next >= 0) {
                node = next;
            } else {
                d.add(node, s);
                node = 0;
            }
        }
        return d;
    }

    /// Dictionary holding exactly the given phrases, which must be nonempty,
    /// distinct and closed under taking prefixes.
    static LzDictionary from_phrases(std::vector<std::string> phrases, std::string_view alphabet = "01") {
        LzDictionary d(alphabet);
        std::stable_sort(phrases.begin(), phrases.end(),
                         [](const std::string& a, const std::string& b) { return a.size() < b.size(); });
        for (const auto& p : phrases) {
            if (p.empty()) throw std::invalid_argument("empty seed phrase");
            std::int32_t node = 0;
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                node = d.child(node, d.sym_.of(p[i]));
                if (node < 0) throw std::invalid_argument("seed phrases are not prefix-closed: '" + p + "'");
            }
            const unsigned last = d.sym_.of(p.back());
            if (d.child(node, last) >= 0) throw std::invalid_argument("duplicate seed phrase '" + p + "'");
            d.add(node, last);
        }
        return d;
    }

    /// Number of nonempty phrases.
    std::size_t size() const { return parent_.size(); }
    const std::string& alphabet() const { return sym_.alphabet; }
    std::size_t width() const { return width_; }
    unsigned symbol(char c) const { return sym_.of(c); }

    std::int32_t child(std::int32_t node, unsigned s) const { return child_[static_cast<std::size_t>(node) * width_ + s]; }

    std::int32_t add(std::int32_t node, unsigned s) {
        const auto id = static_cast<std::int32_t>(parent_.size() + 1);
        child_[static_cast<std::size_t>(node) * width_ + s] = id;
        child_.resize(child_.size() + width_, -1);
        parent_.push_back(node);
        last_.push_back(static_cast<std::uint8_t>(s));
        return id;
    }

    std::string expand(std::int32_t node) const {
        std::string out;
        while (node > 0) {
            out.push_back(sym_.alphabet[last_[static_cast<std::size_t>(node - 1)]]);
            node = parent_[static_cast<std::size_t>(node - 1)];
        }
        return {out.rbegin(), out.rend()};
    }

private:
    detail::SymbolMap sym_;
    std::size_t width_;
    std::vector<std::int32_t> child_;
    std::vector<std::int32_t> parent_;
    std::vector<std::uint8_t> last_;
};

struct LzPhrase {
    std::uint64_t back_ref = 0;       // 0 is the empty phrase; seeded entries come first
    std::optional<char> literal;      // absent only on an incomplete final phrase
    std::size_t start = 0;            // offset in the parsed string
    std::size_t length = 0;
};

struct LzParse {
    std::size_t seed_size = 0;
    std::vector<LzPhrase> phrases;

    /// P(x); the incomplete final phrase, if any, counts.
    std::size_t phrase_count() const { return phrases.size(); }
    bool last_complete() const { return phrases.empty() || phrases.back().literal.has_value(); }
};

/// Greedy LZ78 parse of x, optionally continuing from a seeded dictionary.
inline LzParse lz_parse(std::string_view x, const LzDictionary& seed) {
    LzDictionary dict = seed;
    LzParse out;
    out.seed_size = seed.size();
    std::int32_t node = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const unsigned s = dict.symbol(x[i]);
        const std::int32_t next = dict.child(node, s);
        if (next >= 0) {
            node = next;
            continue;
        }
        dict.add(node, s);
        out.phrases.push_back({static_cast<std::uint64_t>(node), x[i], start, i + 1 - start});
        node = 0;
        start = i + 1;
    }
    if (node != 0) out.phrases.push_back({static_cast<std::uint64_t>(node), std::nullopt, start, x.size() - start});
    return out;
}

inline LzParse lz_parse(std::string_view x, std::string_view alphabet = "01") {
    return lz_parse(x, LzDictionary(alphabet));
}

/// Text of every phrase of a parse of x.
inline std::vector<std::string> phrase_strings(const LzParse& p, std::string_view x) {
    std::vector<std::string> out;
    out.reserve(p.phrases.size());
    for (const auto& ph : p.phrases) out.emplace_back(x.substr(ph.start, ph.length));
    return out;
}

inline std::uint64_t lz_output_length(const LzParse& p, std::size_t alphabet_size) {
    if (p.phrases.empty()) return 0;
    const unsigned lit = ceil_log2(alphabet_size);
    std::uint64_t bits = 1;
    for (std::size_t j = 1; j <= p.phrases.size(); ++j) {
        bits += ceil_log2(p.seed_size + j);
        if (p.phrases[j - 1].literal) bits += lit;
    }
    return bits;
}

inline std::uint64_t lz_output_length(std::string_view x, const LzDictionary& seed) {
    return lz_output_length(lz_parse(x, seed), seed.alphabet().size());
}

inline std::uint64_t lz_output_length(std::string_view x, std::string_view alphabet = "01") {
    return lz_output_length(x, LzDictionary(alphabet));
}

inline std::string lz_encode(std::string_view x, const LzDictionary& seed) {
    const LzParse p = lz_parse(x, seed);
    const detail::SymbolMap sym(seed.alphabet());
    const unsigned lit = ceil_log2(seed.alphabet().size());
    std::string bits;
    auto put = [&](std::uint64_t v, unsigned width) {
        for (unsigned b = width; b > 0; --b) bits.push_back(((v >> (b - 1)) & 1U) ? '1' : '0');
    };
    for (std::size_t j = 1; j <= p.phrases.size(); ++j) {
        const auto& ph = p.phrases[j - 1];
        if (j == p.phrases.size()) bits.push_back(ph.literal ? '0' : '1');
        put(ph.back_ref, ceil_log2(p.seed_size + j));
        if (ph.literal) put(sym.of(*ph.literal), lit);
    }
    return bits;
}

inline std::string lz_encode(std::string_view x, std::string_view alphabet = "01") {
    return lz_encode(x, LzDictionary(alphabet));
}

/// Inverse of lz_encode. Throws LzFormatError on streams lz_encode cannot
/// produce (truncated, trailing bits, references out of range).
inline std::string lz_decode(std::string_view bits, const LzDictionary& seed) {
    LzDictionary dict = seed;
    const std::size_t d = seed.size();
    const unsigned lit = ceil_log2(seed.alphabet().size());
    std::size_t pos = 0;
    auto take = [&](unsigned width) {
        if (bits.size() - pos < width) throw LzFormatError("truncated LZ78 stream");
        std::uint64_t v = 0;
        for (unsigned i = 0; i < width; ++i) {
            const char c = bits[pos++];
            if (c != '0' && c != '1') throw LzFormatError("non-binary character in LZ78 stream");
            v = (v << 1) | (c == '1' ? 1U : 0U);
        }
        return v;
    };
    std::string out;
    for (std::size_t j = 1; pos < bits.size(); ++j) {
        const unsigned b = ceil_log2(d + j);
        const std::size_t remaining = bits.size() - pos;
        bool complete = true;
        const bool final = remaining <= 1 + b + lit;
        if (final) complete = take(1) == 0;
        const std::uint64_t ref = take(b);
        if (ref > dict.size() || ref >= d + j) throw LzFormatError("back-reference out of range");
        out += dict.expand(static_cast<std::int32_t>(ref));
        if (complete) {
            const std::uint64_t s = take(lit);
            if (s >= seed.alphabet().size()) throw LzFormatError("literal out of range");
            if (dict.child(static_cast<std::int32_t>(ref), static_cast<unsigned>(s)) >= 0)
                throw LzFormatError("phrase repeats an existing dictionary entry");
            dict.add(static_cast<std::int32_t>(ref), static_cast<unsigned>(s));
            out.push_back(seed.alphabet()[s]);
        } else if (ref == 0) {
            throw LzFormatError("incomplete phrase refers to the empty phrase");
        }
        if (final && pos != bits.size()) throw LzFormatError("trailing bits after final phrase");
    }
    return out;
}

inline std::string lz_decode(std::string_view bits, std::string_view alphabet = "01") {
    return lz_decode(bits, LzDictionary(alphabet));
}

inline Ratio lz_ratio_at(std::string_view prefix, const LzDictionary& seed) {
    if (prefix.empty()) throw std::invalid_argument("lz_ratio_at: empty prefix");
    return Ratio{lz_output_length(prefix, seed), prefix.size(), std::log2(static_cast<double>(seed.alphabet().size()))};
}

inline Ratio lz_ratio_at(std::string_view prefix, std::string_view alphabet = "01") {
    return lz_ratio_at(prefix, LzDictionary(alphabet));
}

/// Running LZ78 output length while symbols are appended one at a time.
/// length() is the size lz_encode would produce for the symbols seen so far.
class LzMeter {
public:
    explicit LzMeter(std::string_view alphabet = "01") : LzMeter(LzDictionary(alphabet)) {}
    explicit LzMeter(LzDictionary seed)
        : dict_(std::move(seed)), seed_size_(dict_.size()), lit_(ceil_log2(dict_.alphabet().size())) {}

    void feed(char c) {
        const unsigned s = dict_.symbol(c);
        ++consumed_;
        const std::int32_t next = dict_.child(node_, s);
        if (next >= 0) {
            node_ = next;
            return;
        }
        dict_.add(node_, s);
        ++complete_;
        complete_bits_ += ceil_log2(seed_size_ + complete_) + lit_;
        node_ = 0;
    }

    void feed(std::string_view x) {
        for (char c : x) feed(c);
    }

    std::uint64_t length() const {
        if (node_ != 0) return complete_bits_ + 1 + ceil_log2(seed_size_ + complete_ + 1);
        return complete_ == 0 ? 0 : complete_bits_ + 1;
    }

    std::size_t phrase_count() const { return complete_ + (node_ != 0 ? 1 : 0); }
    std::size_t consumed() const { return consumed_; }
    const std::string& alphabet() const { return dict_.alphabet(); }

private:
    LzDictionary dict_;
    std::size_t seed_size_;
    unsigned lit_;
    std::int32_t node_ = 0;
    std::size_t complete_ = 0;
    std::uint64_t complete_bits_ = 0;
    std::size_t consumed_ = 0;
};

}  // namespace pdlab
