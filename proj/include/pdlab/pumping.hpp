#pragma once

// Pumping decompositions w = t u v for finite families of compressors.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdc.hpp"

namespace pdlab {

struct FamilyConstants {
    std::uint64_t p = 1;       // product of |Q| * |Gamma| over the family, saturating
    std::uint64_t k_push = 1;  // longest push-string
    std::uint64_t family_size = 0;
    bool saturated = false;
};

inline FamilyConstants family_constants(const std::vector<PdcSpec>& family) {
    if (family.empty()) throw std::invalid_argument("empty family");
    FamilyConstants fc;
    fc.family_size = family.size();
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    for (const auto& c : family) {
        const std::uint64_t f = c.state_count() * c.stack_alphabet().size();
        if (fc.p > kMax / f) {
            fc.p = kMax;
            fc.saturated = true;
        } else {
            fc.p *= f;
        }
        fc.k_push = std::max<std::uint64_t>(fc.k_push, c.max_push());
    }
    return fc;
}

/// floor(n^(1/e)) computed exactly, e >= 1.
inline std::uint64_t integer_root(std::uint64_t n, std::uint64_t e) {
    if (e == 0) throw std::invalid_argument("integer_root: zero exponent");
    if (e == 1 || n < 2) return n;
    auto pow_le = [&](std::uint64_t r) {  // r^e <= n without overflow
        std::uint64_t acc = 1;
        for (std::uint64_t i = 0; i < e; ++i) {
            if (acc > n / r) return false;
            acc *= r;
        }
        return true;
    };
    if (e >= 64) return 1;
    std::uint64_t lo = 1, hi = std::uint64_t{1} << ((64 + e - 1) / e);
    while (lo < hi) {  // largest r with r^e <= n
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (pow_le(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

/// floor(|w|^(1/(p+1)) / (k_push * |F|)).
inline std::uint64_t default_dmin(const FamilyConstants& fc, std::uint64_t word_length) {
    const std::uint64_t e = fc.p == std::numeric_limits<std::uint64_t>::max() ? fc.p : fc.p + 1;
    return integer_root(word_length, e) / (fc.k_push * fc.family_size);
}

inline std::uint64_t default_dmin(const std::vector<PdcSpec>& family, std::uint64_t word_length) {
    return default_dmin(family_constants(family), word_length);
}

// ---------------------------------------------------------------------------
// Column lifetimes

struct ColumnStats {
    std::vector<std::size_t> birth;
    std::vector<std::optional<std::size_t>> death;  // first later column with a smaller stack

    std::optional<std::size_t> lifetime(std::size_t i) const {
        if (!death[i]) return std::nullopt;
        return *death[i] - birth[i];
    }
};

inline ColumnStats column_stats(const Diagram& d) {
    const std::size_t n = d.columns.size();
    ColumnStats s;
    s.birth.resize(n);
    s.death.assign(n, std::nullopt);
    std::vector<std::size_t> open;  // columns still alive, heights nondecreasing
    for (std::size_t i = 0; i < n; ++i) {
        s.birth[i] = i;
        const auto h = d.columns[i].height();
        while (!open.empty() && d.columns[open.back()].height() > h) {
            s.death[open.back()] = i;
            open.pop_back();
        }
        open.push_back(i);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Decompositions

struct PumpWitness {
    std::string x, y;          // plain: C(t u^n) = x y^n
    std::string z, y2, x2;     // endmarked: C(t u^n v #) = x y^n z y2^(n-c) x2
    std::size_t c = 0;
};

struct PumpDecomposition {
    std::string t, u, v;
    bool endmarked = false;
    std::vector<PumpWitness> witnesses;  // one per family member
};

namespace detail {

inline std::vector<Diagram> trace_family(const std::vector<PdcSpec>& family, std::string_view w) {
    std::vector<Diagram> ds;
    ds.reserve(family.size());
    for (const auto& c : family) ds.push_back(run_traced(c, w));
    return ds;
}

}  // namespace detail

/// Visits candidate splits (c, c2) in lexicographic order: every machine is
/// in the same state with the same top symbol at columns c and c2, and no
/// micro-step in between takes its stack below the height at c. Stops when
/// the visitor returns true.
template <class Visitor>
void for_each_pump_candidate(const std::vector<PdcSpec>& family, std::string_view w, std::size_t d_min, Visitor&& visit) {
    const auto ds = detail::trace_family(family, w);
    const std::size_t n = w.size();
    const std::size_t gap = std::max<std::size_t>(1, d_min);
    for (std::size_t c = 0; c + gap <= n; ++c) {
        for (std::size_t c2 = c + 1; c2 <= n; ++c2) {
            bool alive = true, same = true;
            for (const auto& d : ds) {
                const auto& a = d.columns[c];
                const auto& b = d.columns[c2];
                if (b.min_height < a.height()) {
                    alive = false;
                    break;
                }
                if (a.state != b.state || a.top() != b.top()) same = false;
            }
            if (!alive) break;
            if (same && c2 - c >= gap && visit(c, c2)) return;
        }
    }
}

inline PumpDecomposition make_plain_decomposition(const std::vector<PdcSpec>& family, std::string_view w,
                                                  std::size_t c, std::size_t c2) {
    PumpDecomposition dec;
    dec.t = std::string(w.substr(0, c));
    dec.u = std::string(w.substr(c, c2 - c));
    dec.v = std::string(w.substr(c2));
    for (const auto& m : family) {
        PumpWitness pw;
        Execution ex(m);
        ex.feed(dec.t);
        pw.x = ex.output();
        ex.feed(dec.u);
        pw.y = ex.output().substr(pw.x.size());
        dec.witnesses.push_back(std::move(pw));
    }
    return dec;
}

/// First split of w (lexicographic in (c, c2)) with |u| >= max(1, d_min)
/// on which the whole family pumps, with plain witnesses x = C(t),
/// y = C(tu) minus x.
inline std::optional<PumpDecomposition> find_pumpable(const std::vector<PdcSpec>& family, std::string_view w,
                                                      std::size_t d_min) {
    if (family.empty()) throw std::invalid_argument("empty family");
    std::optional<PumpDecomposition> out;
    for_each_pump_candidate(family, w, d_min, [&](std::size_t c, std::size_t c2) {
        out = make_plain_decomposition(family, w, c, c2);
        return true;
    });
    return out;
}

struct PumpVerdict {
    bool ok = true;
    std::size_t machine = 0;  // first failing family member
    std::size_t n = 0;        // first failing repetition count
    std::string detail;
};

/// Checks C(t u^n) = x y^n for every machine and every n <= n_max.
inline PumpVerdict verify_pump_plain(const std::vector<PdcSpec>& family, const PumpDecomposition& dec, std::size_t n_max) {
    if (dec.witnesses.size() != family.size()) throw std::invalid_argument("witness count differs from family size");
    for (std::size_t m = 0; m < family.size(); ++m) {
        const auto& w = dec.witnesses[m];
        Execution ex(family[m]);
        ex.feed(dec.t);
        std::string expect = w.x;
        for (std::size_t n = 0;; ++n) {
            if (ex.output() != expect)
                return {false, m, n, "machine " + family[m].name() + " differs at n=" + std::to_string(n)};
            if (n == n_max) break;
            ex.feed(dec.u);
            expect += w.y;
        }
    }
    return {};
}

namespace detail {

inline std::size_t lcp(std::string_view a, std::string_view b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return i;
}

inline std::size_t lcs(std::string_view a, std::string_view b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[a.size() - 1 - i] == b[b.size() - 1 - i]) ++i;
    return i;
}

inline std::string five_part(const PumpWitness& w, std::size_t n) {
    std::string s = w.x;
    for (std::size_t i = 0; i < n; ++i) s += w.y;
    s += w.z;
    for (std::size_t i = w.c; i < n; ++i) s += w.y2;
    s += w.x2;
    return s;
}

/// Witness for outputs[n] = C(t u^n v #) valid for all n in [c, outputs.size()-1].
inline std::optional<PumpWitness> fit_one(const std::vector<std::string>& out, std::size_t c) {
    if (c + 3 >= out.size()) return std::nullopt;
    const auto L = [&](std::size_t n) { return static_cast<long long>(out[n].size()); };
    const long long g = L(c + 1) - L(c);
    if (g < 0 || L(c + 2) - L(c + 1) != g || L(c + 3) - L(c + 2) != g) return std::nullopt;
    const std::string& o0 = out[c];
    const std::string& o1 = out[c + 1];
    auto matches = [&](const PumpWitness& w, std::size_t from, std::size_t to) {
        for (std::size_t n = from; n <= to; ++n)
            if (five_part(w, n) != out[n]) return false;
        return true;
    };
    const std::size_t max_x = lcp(o0, o1);
    for (std::size_t a = max_x + 1; a-- > 0;) {
        for (long long b = g; b >= 0; --b) {
            const auto yb = static_cast<std::size_t>(b);
            if (a + yb * (c + 1) > o1.size()) continue;
            PumpWitness w;
            w.c = c;
            w.x = o1.substr(0, a);
            w.y = o1.substr(a, yb);
            bool ok = true;
            for (std::size_t i = 0; i <= c && ok; ++i) ok = o1.compare(a + i * yb, yb, w.y) == 0;
            if (!ok) continue;
            if (a + yb * c > o0.size() || o0.compare(0, a, w.x) != 0) continue;
            for (std::size_t i = 0; i < c && ok; ++i) ok = o0.compare(a + i * yb, yb, w.y) == 0;
            if (!ok) continue;
            const std::string r0 = o0.substr(a + yb * c);       // z x'
            const std::string r1 = o1.substr(a + yb * (c + 1));  // z y' x'
            const std::size_t y2 = static_cast<std::size_t>(g - b);
            if (r1.size() != r0.size() + y2) continue;
            const std::size_t p = lcp(r0, r1), s = lcs(r0, r1);
            const std::size_t lo = r0.size() > s ? r0.size() - s : 0;
            for (std::size_t zl = lo; zl <= std::min(p, r0.size()); ++zl) {
                w.z = r0.substr(0, zl);
                w.x2 = r0.substr(zl);
                w.y2 = r1.substr(zl, y2);
                if (r1.compare(zl + y2, std::string::npos, w.x2) != 0) continue;
                if (matches(w, c, c + 3) && matches(w, c, out.size() - 1)) return w;
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Recovers endmarked witnesses C(t u^n v #) = x y^n z y'^(n-c) x' with a
/// common c <= c_max from the outputs at n = 0..n_max, and checks them for
/// every n in [c, n_max].
inline std::optional<PumpDecomposition> fit_and_verify_endmarked(const std::vector<PdcSpec>& family,
                                                                 const PumpDecomposition& dec, std::size_t n_max,
                                                                 std::size_t c_max = 8) {
    if (dec.u.empty()) throw std::invalid_argument("u must be nonempty");
    for (const auto& m : family)
        if (!m.endmarker_mode()) throw std::invalid_argument("family member '" + m.name() + "' has no endmarker mode");
    if (n_max < 3) throw std::invalid_argument("n_max must be at least 3");
    std::vector<std::vector<std::string>> outs(family.size());
    for (std::size_t m = 0; m < family.size(); ++m) {
        std::string word = dec.t;
        for (std::size_t n = 0; n <= n_max; ++n) {
            outs[m].push_back(run_endmarked(family[m], word + dec.v).output);
            word += dec.u;
        }
    }
    for (std::size_t c = 0; c <= c_max && c + 3 <= n_max; ++c) {
        PumpDecomposition fitted{dec.t, dec.u, dec.v, true, {}};
        bool all = true;
        for (std::size_t m = 0; m < family.size() && all; ++m) {
            auto w = detail::fit_one(outs[m], c);
            if (!w) {
                all = false;
                break;
            }
            fitted.witnesses.push_back(std::move(*w));
        }
        if (all) return fitted;
    }
    return std::nullopt;
}

/// Re-checks endmarked witnesses by direct runs for n in [c, n_max].
inline PumpVerdict verify_pump_endmarked(const std::vector<PdcSpec>& family, const PumpDecomposition& dec,
                                         std::size_t n_max) {
    if (dec.witnesses.size() != family.size()) throw std::invalid_argument("witness count differs from family size");
    for (std::size_t m = 0; m < family.size(); ++m) {
        const auto& w = dec.witnesses[m];
        std::string word = dec.t;
        for (std::size_t i = 0; i < w.c; ++i) word += dec.u;
        for (std::size_t n = w.c; n <= n_max; ++n) {
            if (run_endmarked(family[m], word + dec.v).output != detail::five_part(w, n))
                return {false, m, n, "machine " + family[m].name() + " differs at n=" + std::to_string(n)};
            word += dec.u;
        }
    }
    return {};
}

/// Walks the plain candidates of w in order and returns the first one whose
/// endmarked witnesses can be fitted, trying at most max_candidates splits.
inline std::optional<PumpDecomposition> find_pumpable_endmarked(const std::vector<PdcSpec>& family, std::string_view w,
                                                                std::size_t d_min, std::size_t n_max,
                                                                std::size_t c_max = 8,
                                                                std::size_t max_candidates = 256) {
    std::optional<PumpDecomposition> out;
    std::size_t tried = 0;
    for_each_pump_candidate(family, w, d_min, [&](std::size_t c, std::size_t c2) {
        PumpDecomposition dec;
        dec.t = std::string(w.substr(0, c));
        dec.u = std::string(w.substr(c, c2 - c));
        dec.v = std::string(w.substr(c2));
        out = fit_and_verify_endmarked(family, dec, n_max, c_max);
        return out.has_value() || ++tried >= max_candidates;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Line-based record of a decomposition. Only lengths are stored; the parts
// are recovered from the word and one run per machine.
//
//   pump 1
//   split <|t|> <|u|> <|v|>
//   mode plain|endmarked
//   witness <|x|> <|y|> <|z|> <|y2|> <|x2|> <c>     (one per machine)

struct PumpRecord {
    std::size_t t_len = 0, u_len = 0, v_len = 0;
    bool endmarked = false;
    struct Parts {
        std::size_t x = 0, y = 0, z = 0, y2 = 0, x2 = 0, c = 0;
    };
    std::vector<Parts> parts;
};

class PumpRecordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline PumpRecord to_record(const PumpDecomposition& dec) {
    PumpRecord r{dec.t.size(), dec.u.size(), dec.v.size(), dec.endmarked, {}};
    for (const auto& w : dec.witnesses)
        r.parts.push_back({w.x.size(), w.y.size(), w.z.size(), w.y2.size(), w.x2.size(), w.c});
    return r;
}

inline void write_pump_record(std::ostream& out, const PumpRecord& r) {
    out << "pump 1\n"
        << "split " << r.t_len << " " << r.u_len << " " << r.v_len << "\n"
        << "mode " << (r.endmarked ? "endmarked" : "plain") << "\n";
    for (const auto& p : r.parts)
        out << "witness " << p.x << " " << p.y << " " << p.z << " " << p.y2 << " " << p.x2 << " " << p.c << "\n";
}

inline PumpRecord read_pump_record(std::istream& in) {
    PumpRecord r;
    std::string line;
    int seen = 0;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw PumpRecordError("pump record line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "pump") {
            int version = 0;
            if (!(ls >> version) || version != 1) fail("unsupported version");
            seen |= 1;
        } else if (key == "split") {
            if (!(ls >> r.t_len >> r.u_len >> r.v_len)) fail("expected three lengths");
            seen |= 2;
        } else if (key == "mode") {
            std::string m;
            ls >> m;
            if (m != "plain" && m != "endmarked") fail("mode must be plain or endmarked");
            r.endmarked = m == "endmarked";
            seen |= 4;
        } else if (key == "witness") {
            PumpRecord::Parts p;
            if (!(ls >> p.x >> p.y >> p.z >> p.y2 >> p.x2 >> p.c)) fail("expected six numbers");
            r.parts.push_back(p);
        } else {
            fail("unknown key '" + key + "'");
        }
        std::string extra;
        if (ls >> extra) fail("trailing text '" + extra + "'");
    }
    if (seen != 7) throw PumpRecordError("pump record is missing a pump, split or mode line");
    return r;
}

/// Rebuilds the decomposition of w described by r. Plain witnesses are cut
/// from C(t u); endmarked ones from C(t u^(c+1) v #).
inline PumpDecomposition from_record(const std::vector<PdcSpec>& family, std::string_view w, const PumpRecord& r) {
    if (r.t_len + r.u_len + r.v_len != w.size())
        throw PumpRecordError("split lengths do not add up to the word length " + std::to_string(w.size()));
    if (r.parts.size() != family.size())
        throw PumpRecordError("record has " + std::to_string(r.parts.size()) + " witnesses for a family of " +
                              std::to_string(family.size()));
    PumpDecomposition dec;
    dec.t = std::string(w.substr(0, r.t_len));
    dec.u = std::string(w.substr(r.t_len, r.u_len));
    dec.v = std::string(w.substr(r.t_len + r.u_len));
    dec.endmarked = r.endmarked;
    for (std::size_t m = 0; m < family.size(); ++m) {
        const auto& p = r.parts[m];
        PumpWitness wit;
        wit.c = p.c;
        std::string out;
        if (r.endmarked) {
            std::string word = dec.t;
            for (std::size_t i = 0; i <= p.c; ++i) word += dec.u;
            out = run_endmarked(family[m], word + dec.v).output;
        } else {
            out = run(family[m], dec.t + dec.u).output;
        }
        if (out.size() != p.x + (r.endmarked ? (p.c + 1) * p.y + p.z + p.y2 + p.x2 : p.y))
            throw PumpRecordError("witness lengths for machine " + family[m].name() + " do not match its output");
        std::size_t at = 0;
        auto take = [&](std::size_t len) {
            std::string s = out.substr(at, len);
            at += len;
            return s;
        };
        wit.x = take(p.x);
        wit.y = take(p.y);
        if (r.endmarked) {
            at += p.c * p.y;
            wit.z = take(p.z);
            wit.y2 = take(p.y2);
            wit.x2 = take(p.x2);
        }
        dec.witnesses.push_back(std::move(wit));
    }
    return dec;
}

}  // namespace pdlab
