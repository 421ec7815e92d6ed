#pragma once

// Ratio experiments: series of compression ratios at stream checkpoints,
// finite tail estimates, and the named preset experiments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hard_blocks.hpp"
#include "lz78.hpp"
#include "pdc.hpp"
#include "pumping.hpp"
#include "sequences.hpp"
#include "zoo.hpp"

namespace pdlab {

struct RatioRow {
    std::uint64_t n = 0;
    double bits = 0;  // output size in bits
    double ratio = 0;
    std::string label;
};

namespace detail {

inline RatioRow make_row(std::uint64_t n, double bits, double log_sigma, std::string label) {
    return {n, bits, bits / (static_cast<double>(n) * log_sigma), std::move(label)};
}

inline double log2_size(std::size_t n) { return std::log2(static_cast<double>(n)); }

/// Positions to report: checkpoints in (0, limit], plus limit itself.
inline std::vector<Checkpoint> report_points(const CheckpointedStream& s, std::uint64_t limit) {
    std::vector<Checkpoint> pts;
    for (const auto& c : s.checkpoints())
        if (c.position > 0 && c.position <= limit) pts.push_back(c);
    if (limit > 0 && (pts.empty() || pts.back().position != limit)) pts.push_back({limit, ""});
    return pts;
}

}  // namespace detail

/// Ratios of a compressor along a stream. Plain machines run once,
/// incrementally; endmarked machines are re-run on every reported prefix.
inline std::vector<RatioRow> ratio_series(const PdcSpec& spec, const CheckpointedStream& stream, std::uint64_t limit) {
    limit = std::min(limit, stream.total_length());
    const auto pts = detail::report_points(stream, limit);
    const double ls = detail::log2_size(spec.input_alphabet().size());
    std::vector<RatioRow> rows;
    if (spec.endmarker_mode()) {
        const std::string text = stream.prefix(limit);
        for (const auto& p : pts) {
            const auto out = output_length(spec, std::string_view(text).substr(0, p.position));
            rows.push_back(detail::make_row(p.position, static_cast<double>(out) * ls, ls, p.label));
        }
        return rows;
    }
    Execution ex(spec, false);
    std::size_t next = 0;
    stream.for_each_chunk(limit, [&](std::string_view chunk) {
        for (char c : chunk) {
            ex.feed(c);
            while (next < pts.size() && pts[next].position == ex.consumed()) {
                rows.push_back(detail::make_row(ex.consumed(), static_cast<double>(ex.output_length()) * ls, ls,
                                                pts[next].label));
                ++next;
            }
        }
    });
    return rows;
}

inline std::vector<RatioRow> ratio_series_lz(const CheckpointedStream& stream, std::uint64_t limit,
                                             const std::string& alphabet = "01") {
    limit = std::min(limit, stream.total_length());
    const auto pts = detail::report_points(stream, limit);
    const double ls = detail::log2_size(alphabet.size());
    std::vector<RatioRow> rows;
    LzMeter m(alphabet);
    std::size_t next = 0;
    stream.for_each_chunk(limit, [&](std::string_view chunk) {
        for (char c : chunk) {
            m.feed(c);
            while (next < pts.size() && pts[next].position == m.consumed()) {
                rows.push_back(detail::make_row(m.consumed(), static_cast<double>(m.length()), ls, pts[next].label));
                ++next;
            }
        }
    });
    return rows;
}

struct TailEstimate {
    double liminf_estimate = 0;
    double limsup_estimate = 0;
    double burn_in = 0.5;
    std::size_t rows_used = 0;
};

/// Min and max ratio over the rows at positions >= burn_in * last position.
inline TailEstimate tail_estimates(const std::vector<RatioRow>& rows, double burn_in = 0.5) {
    if (rows.empty()) throw std::invalid_argument("tail_estimates: no rows");
    if (!(burn_in >= 0.0 && burn_in < 1.0)) throw std::invalid_argument("burn_in must be in [0, 1)");
    const double from = burn_in * static_cast<double>(rows.back().n);
    TailEstimate t;
    t.burn_in = burn_in;
    t.liminf_estimate = std::numeric_limits<double>::infinity();
    t.limsup_estimate = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        if (static_cast<double>(r.n) < from) continue;
        t.liminf_estimate = std::min(t.liminf_estimate, r.ratio);
        t.limsup_estimate = std::max(t.limsup_estimate, r.ratio);
        ++t.rows_used;
    }
    return t;
}

inline std::string format_number(double x) {
    std::ostringstream o;
    if (std::floor(x) == x && std::fabs(x) < 9e15)
        o << static_cast<long long>(x);
    else
        o << std::setprecision(10) << x;
    return o.str();
}

inline void write_csv(std::ostream& out, const std::vector<RatioRow>& rows) {
    out << "n,bits,ratio,label\n";
    for (const auto& r : rows) out << r.n << "," << format_number(r.bits) << "," << format_number(r.ratio) << "," << r.label << "\n";
}

// ---------------------------------------------------------------------------
// Presets

/// Named families used by the experiments. F1..F3 are plain, E1 and E2
/// endmarked.
inline std::vector<PdcSpec> preset_family(const std::string& name) {
    if (name == "F1") return {make_identity()};
    if (name == "F2") return {make_push_pop_copier(), make_pair_buffer()};
    if (name == "F3") return {make_identity(), make_push_pop_copier(), make_zone_compressor({2, 1, 2, std::nullopt})};
    if (name == "E1") return {make_unary_squeezer(2)};
    if (name == "E2") return {make_block_counter(3), make_identity("01", true)};
    throw std::invalid_argument("unknown family '" + name + "' (expected F1, F2, F3, E1 or E2)");
}

inline std::vector<std::string> preset_family_names(bool endmarked) {
    return endmarked ? std::vector<std::string>{"E1", "E2"} : std::vector<std::string>{"F1", "F2", "F3"};
}

/// String-keyed parameters with typed lookups; unknown keys are rejected by
/// the preset that receives them.
class PresetParams {
public:
    PresetParams() = default;
    explicit PresetParams(std::map<std::string, std::string> v) : values_(std::move(v)) {}

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::uint64_t get_u64(const std::string& key, std::uint64_t def) const {
        used_.push_back(key);
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(it->second, &pos);
        } catch (...) {
            pos = 0;
        }
        if (pos != it->second.size() || it->second.empty() || it->second[0] == '-')
            throw std::invalid_argument("parameter --" + key + " expects a non-negative integer, got '" + it->second + "'");
        return v;
    }
    double get_double(const std::string& key, double def) const {
        used_.push_back(key);
        auto it = values_.find(key);
        if (it == values_.end()) return def;
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(it->second, &pos);
        } catch (...) {
            pos = 0;
        }
        if (pos != it->second.size()) throw std::invalid_argument("parameter --" + key + " expects a number");
        return v;
    }
    std::string get_string(const std::string& key, const std::string& def) const {
        used_.push_back(key);
        auto it = values_.find(key);
        return it == values_.end() ? def : it->second;
    }

    /// Throws if a parameter was given that no lookup asked for.
    void reject_unused() const {
        for (const auto& [k, v] : values_)
            if (std::find(used_.begin(), used_.end(), k) == used_.end())
                throw std::invalid_argument("unknown parameter --" + k);
    }

private:
    std::map<std::string, std::string> values_;
    mutable std::vector<std::string> used_;
};

struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::vector<RatioRow>>> series;  // (compressor, rows)
    std::vector<std::string> lines;
    bool pass = true;

    void check(bool ok, const std::string& what) {
        lines.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
        pass = pass && ok;
    }
    void note(const std::string& what) { lines.push_back(what); }

    std::string text() const {
        std::ostringstream o;
        o << "experiment " << name << "\n";
        for (const auto& [who, rows] : series) {
            o << "\n[" << who << "]\n";
            o << std::setw(12) << "n" << std::setw(14) << "bits" << std::setw(12) << "ratio"
              << "  label\n";
            for (const auto& r : rows)
                o << std::setw(12) << r.n << std::setw(14) << format_number(r.bits) << std::setw(12) << std::fixed
                  << std::setprecision(6) << r.ratio << std::defaultfloat << "  " << r.label << "\n";
        }
        o << "\n";
        for (const auto& l : lines) o << l << "\n";
        o << "note: ratios are measured on finite prefixes; tail min/max past the burn-in stand in for liminf/limsup\n";
        o << (pass ? "PASS" : "FAIL") << "\n";
        return o.str();
    }
};

namespace detail {

inline std::string fmt(double x, int prec = 4) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(prec) << x;
    return o.str();
}

/// Smallest |C(w)|/|w| over all words of length lo..hi, by depth-first
/// search over executions.
inline double min_ratio_exhaustive(const PdcSpec& spec, std::size_t lo, std::size_t hi) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<Execution> stack{Execution(spec, false)};
    while (!stack.empty()) {
        Execution ex = std::move(stack.back());
        stack.pop_back();
        const auto n = ex.consumed();
        if (n >= lo && n > 0) best = std::min(best, static_cast<double>(ex.output_length()) / static_cast<double>(n));
        if (n == hi) continue;
        for (char c : spec.input_alphabet()) {
            Execution next = ex;
            next.feed(c);
            stack.push_back(std::move(next));
        }
    }
    return best;
}

}  // namespace detail

/// Every builtin plain machine with k states: min |C(w)|/|w| >= 1/(2k) over
/// binary words of length k..max_len.
inline ExperimentReport preset_lemma1_floor(const PresetParams& p) {
    const auto max_len = p.get_u64("max-len", 14);
    p.reject_unused();
    ExperimentReport rep;
    rep.name = "lemma1-floor";
    for (const auto& m : builtin_plain()) {
        const std::size_t k = m.state_count();
        if (k > max_len) {
            rep.note("skip " + m.name() + ": " + std::to_string(k) + " states, no word lengths in [" + std::to_string(k) +
                     ", " + std::to_string(max_len) + "]");
            continue;
        }
        const double floor = 1.0 / (2.0 * static_cast<double>(k));
        const double got = detail::min_ratio_exhaustive(m, k, max_len);
        rep.check(got >= floor, m.name() + ": min ratio " + detail::fmt(got) + " >= 1/(2*" + std::to_string(k) +
                                    ") = " + detail::fmt(floor));
    }
    return rep;
}

/// Unary squeezer on 0^n: ratio at n within 2% of 1/k^2.
inline ExperimentReport preset_lemma2_limit(const PresetParams& p) {
    const auto k = p.get_u64("k", 3);
    const auto n = p.get_u64("n", 100000);
    const double tol = p.get_double("tolerance", 0.02);
    const double burn = p.get_double("burn-in", 0.5);
    p.reject_unused();
    if (k < 2) throw std::invalid_argument("--k must be at least 2");
    if (n < 1) throw std::invalid_argument("--n must be positive");
    ExperimentReport rep;
    rep.name = "lemma2-limit";
    const auto spec = make_unary_squeezer(k);
    const auto stream = repetitive_stream({{{"", "0", n}}});
    auto rows = ratio_series(spec, stream, n);
    const double target = 1.0 / static_cast<double>(k * k);
    const double last = rows.back().ratio;
    const auto tail = tail_estimates(rows, burn);
    rep.series.emplace_back(spec.name(), std::move(rows));
    rep.note("target 1/k^2 = " + detail::fmt(target, 6));
    rep.note("tail (burn-in " + detail::fmt(burn, 2) + "): min " + detail::fmt(tail.liminf_estimate, 6) + ", max " +
             detail::fmt(tail.limsup_estimate, 6));
    rep.check(std::fabs(last - target) <= tol * target,
              "ratio at n=" + std::to_string(n) + " is " + detail::fmt(last, 6) + ", within " + detail::fmt(tol * 100, 1) +
                  "% of 1/k^2");
    rep.check(std::fabs(tail.liminf_estimate - target) <= tol * target, "tail minimum within tolerance of 1/k^2");
    return rep;
}

/// Hard blocks for a plain family, counts grown until LZ compresses them;
/// LZ must end below every family member.
inline ExperimentReport preset_lz_beats_pd(const PresetParams& p) {
    const auto family_name = p.get_string("family", "F3");
    const auto stages = p.get_u64("stages", 3);
    HardBlockOptions hb;
    hb.seed = p.get_u64("seed", 1);
    hb.word_length = p.get_u64("word-length", 2048);
    hb.min_u = p.get_u64("min-u", 64);
    p.reject_unused();
    if (stages < 1) throw std::invalid_argument("--stages must be positive");
    const auto family = preset_family(family_name);
    ExperimentReport rep;
    rep.name = "lz-beats-pd";
    const auto hard = pd_hard_stages(family, stages, hb);
    std::vector<std::pair<std::string, std::string>> pairs;
    RepetitionSearchOptions ro;
    for (const auto& s : hard) {
        pairs.emplace_back(s.t, s.u);
        ro.min_counts.push_back(s.n);
        rep.note("stage: |t|=" + std::to_string(s.t.size()) + " |u|=" + std::to_string(s.u.size()) +
                 " n'=" + std::to_string(s.n_prime) + " n=" + std::to_string(s.n));
    }
    const auto recipe = choose_repetition_counts(pairs, stages, ro);
    std::string counts;
    for (const auto& b : recipe.blocks) counts += " " + std::to_string(b.n);
    rep.note("repetition counts:" + counts);
    const auto stream = repetitive_stream(recipe);
    const auto limit = stream.total_length();
    auto lz = ratio_series_lz(stream, limit);
    const double lz_final = lz.back().ratio;
    rep.series.emplace_back("lz78", std::move(lz));
    for (const auto& m : family) {
        auto rows = ratio_series(m, stream, limit);
        const double r = rows.back().ratio;
        rep.series.emplace_back(m.name(), std::move(rows));
        rep.check(lz_final < r, "lz78 final ratio " + detail::fmt(lz_final) + " < " + m.name() + " final ratio " +
                                    detail::fmt(r));
    }
    return rep;
}

/// Result of flipping one symbol inside a Y zone and running the zone
/// compressor over the corrupted prefix.
struct CorruptionCheck {
    std::uint64_t position = 0;  // index of the flipped symbol
    bool reached_error_state = false;
    bool copies_afterwards = false;
};

inline CorruptionCheck corrupt_y_zone(const PdcSpec& zone, const CheckpointedStream& s, const std::string& y_label,
                                      const std::string& flag_label) {
    const auto flag_end = s.find(flag_label);
    const auto y_end = s.find(y_label);
    if (!flag_end || !y_end || y_end->position <= flag_end->position + 1)
        throw std::invalid_argument("checkpoints " + flag_label + " / " + y_label + " not usable");
    CorruptionCheck cc;
    cc.position = (flag_end->position + y_end->position) / 2;
    std::string text = s.prefix(s.total_length());
    text[cc.position] = text[cc.position] == '0' ? '1' : '0';
    Execution ex(zone);
    ex.feed(std::string_view(text).substr(0, cc.position + 1));
    const auto qe = zone.find_state("qe");
    cc.reached_error_state = qe && ex.state() == *qe;
    const std::size_t before = ex.output().size();
    const std::string_view rest = std::string_view(text).substr(cc.position + 1);
    ex.feed(rest);
    cc.copies_afterwards = ex.output().substr(before) == rest && qe && ex.state() == *qe;
    return cc;
}

/// Zone compressor against LZ78 on the flagged zone sequence.
inline ExperimentReport preset_pd_beats_lz(const PresetParams& p) {
    ZoneCompressorParams zp;
    zp.k = p.get_u64("k", 4);
    zp.v = p.get_u64("v", 4);
    zp.vprime = p.get_u64("vprime", 16);
    const auto n_max = p.get_u64("n-max", 16);
    const double zone_max = p.get_double("zone-max", 0.70);
    const double gap = p.get_double("gap", 0.15);
    p.reject_unused();
    const auto zone = make_zone_compressor(zp);
    const auto stream = build_S(zp.k, zp.v, n_max);
    const auto limit = stream.total_length();
    ExperimentReport rep;
    rep.name = "pd-beats-lz";
    auto zrows = ratio_series(zone, stream, limit);
    auto lrows = ratio_series_lz(stream, limit);

    // last end-of-flag-after-X checkpoint
    std::size_t at = zrows.size();
    for (std::size_t i = 0; i < zrows.size(); ++i)
        if (zrows[i].label.find(":flagX") != std::string::npos) at = i;
    if (at == zrows.size()) throw std::logic_error("stream has no flag-after-X checkpoint");
    const double zr = zrows[at].ratio, lr = lrows[at].ratio;
    rep.note("prefix length " + std::to_string(limit) + ", measured at " + zrows[at].label + " (n=" +
             std::to_string(zrows[at].n) + ")");
    rep.check(zr <= zone_max, zone.name() + " ratio " + detail::fmt(zr) + " <= " + detail::fmt(zone_max, 2));
    rep.check(lr >= zr + gap, "lz78 ratio " + detail::fmt(lr) + " >= zone ratio + " + detail::fmt(gap, 2));

    const std::string last = "S" + std::to_string(plan_S(zp.k, zp.v, n_max).sections.back().n);
    const auto cc = corrupt_y_zone(zone, stream, last + ":Y1", last + ":flagX1");
    rep.check(cc.reached_error_state && cc.copies_afterwards,
              "flipping symbol " + std::to_string(cc.position) + " in " + last + ":Y1 reaches qe and copies afterwards");
    rep.series.emplace_back(zone.name(), std::move(zrows));
    rep.series.emplace_back("lz78", std::move(lrows));
    return rep;
}

inline std::vector<std::string> preset_names() { return {"lemma1-floor", "lemma2-limit", "lz-beats-pd", "pd-beats-lz"}; }

inline ExperimentReport run_preset(const std::string& name, const PresetParams& p = {}) {
    if (name == "lemma1-floor") return preset_lemma1_floor(p);
    if (name == "lemma2-limit") return preset_lemma2_limit(p);
    if (name == "lz-beats-pd") return preset_lz_beats_pd(p);
    if (name == "pd-beats-lz") return preset_pd_beats_lz(p);
    throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace pdlab
