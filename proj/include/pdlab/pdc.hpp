#pragma once

/// \file pdc.hpp
/// Deterministic pushdown compressors: definition, validation and execution.
///
/// A compressor reads symbols of its input alphabet one at a time. Every
/// transition looks at (state, input-or-lambda, top of stack), replaces the
/// top of the stack by a push-string and appends an output string. Lambda
/// rules fire without consuming input; after every consumed symbol (and once
/// before the first one) the machine applies lambda rules until none is
/// defined. Endmarker machines may additionally consume a single end symbol
/// after the input, followed by a final lambda closure.
///
/// Stacks are stored bottom-first. Push-strings are written top-first, so a
/// rule with push-string "az" on top symbol z leaves `a` above `z`.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ratio.hpp"

namespace pdlab {

using StateId = std::uint32_t;
using StackSym = std::uint8_t;

/// Reserved characters of the textual format; they may not appear in an
/// alphabet.
inline constexpr char kLambdaChar = '-';
inline constexpr char kEndChar = '$';

class PdcError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RunError : public PdcError {
public:
    enum class Kind { Undefined, LambdaBudgetExceeded, NotEndmarked, BadSymbol };

    RunError(Kind kind, std::size_t position, const std::string& what)
        : PdcError(what), kind_(kind), position_(position) {}

    Kind kind() const noexcept { return kind_; }
    /// Number of input symbols consumed when the error was raised.
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

/// What a transition reads besides the stack top.
struct Input {
    enum class Kind : std::uint8_t { Symbol, Lambda, End };
    Kind kind = Kind::Lambda;
    char symbol = 0;

    static Input sym(char c) { return {Kind::Symbol, c}; }
    static Input lambda() { return {Kind::Lambda, 0}; }
    static Input end() { return {Kind::End, 0}; }
};

struct Rule {
    StateId from = 0;
    Input input;
    StackSym top = 0;
    StateId next = 0;
    std::vector<StackSym> push;  // top-first
    std::string output;
};

class PdcBuilder;

/// An immutable pushdown compressor. Built through PdcBuilder.
class PdcSpec {
public:
    const std::string& name() const { return name_; }
    const std::string& input_alphabet() const { return sigma_; }
    const std::string& stack_alphabet() const { return gamma_; }
    const std::vector<std::string>& states() const { return states_; }
    std::size_t state_count() const { return states_.size(); }
    StateId start_state() const { return start_; }
    StackSym stack_bottom() const { return bottom_; }
    bool endmarker_mode() const { return endmark_; }
    const std::vector<Rule>& rules() const { return rules_; }

    /// Index of an input symbol, or -1 when it is not in the alphabet.
    int symbol_code(char c) const { return sigma_code_[static_cast<unsigned char>(c)]; }
    int stack_code(char c) const { return gamma_code_[static_cast<unsigned char>(c)]; }
    char stack_char(StackSym s) const { return gamma_[s]; }

    std::optional<StateId> find_state(std::string_view name) const {
        for (StateId i = 0; i < states_.size(); ++i)
            if (states_[i] == name) return i;
        return std::nullopt;
    }

    /// Column of the dense rule table: symbols first, then lambda, then end.
    std::size_t lambda_column() const { return sigma_.size(); }
    std::size_t end_column() const { return sigma_.size() + 1; }
    std::size_t input_columns() const { return sigma_.size() + 2; }

    std::size_t column_of(const Input& in) const {
        switch (in.kind) {
        case Input::Kind::Symbol: return static_cast<std::size_t>(symbol_code(in.symbol));
        case Input::Kind::Lambda: return lambda_column();
        case Input::Kind::End: return end_column();
        }
        return lambda_column();
    }

    const Rule* rule_at(StateId q, std::size_t column, StackSym top) const {
        const auto idx = index_[(q * input_columns() + column) * gamma_.size() + top];
        return idx < 0 ? nullptr : &rules_[static_cast<std::size_t>(idx)];
    }

    /// Longest push-string over all rules (at least 1).
    std::size_t max_push() const {
        std::size_t m = 1;
        for (const auto& r : rules_) m = std::max(m, r.push.size());
        return m;
    }

    /// log2 |Sigma|, the per-symbol information content of the input alphabet.
    double log2_alphabet() const;

private:
    friend class PdcBuilder;
    PdcSpec() = default;

    std::string name_;
    std::string sigma_;
    std::string gamma_;
    std::vector<std::string> states_;
    StateId start_ = 0;
    StackSym bottom_ = 0;
    bool endmark_ = false;
    std::vector<Rule> rules_;
    std::vector<std::int32_t> index_;
    std::array<std::int16_t, 256> sigma_code_{};
    std::array<std::int16_t, 256> gamma_code_{};
};

/// Incrementally assembles a PdcSpec. Rules may mention states before they
/// are declared; states are numbered in order of first mention.
class PdcBuilder {
public:
    PdcBuilder(std::string name, std::string input_alphabet, std::string stack_alphabet)
        : name_(std::move(name)), sigma_(std::move(input_alphabet)), gamma_(std::move(stack_alphabet)) {
        check_alphabet(sigma_, "input");
        check_alphabet(gamma_, "stack");
        if (sigma_.size() < 2) throw PdcError("input alphabet needs at least two symbols");
    }

    StateId state(const std::string& name) {
        if (auto it = ids_.find(name); it != ids_.end()) return it->second;
        const auto id = static_cast<StateId>(states_.size());
        states_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }

    PdcBuilder& start(const std::string& state_name, char bottom) {
        start_ = state(state_name);
        bottom_ = stack_index(bottom);
        has_start_ = true;
        return *this;
    }

    PdcBuilder& endmarked(bool on = true) {
        endmark_ = on;
        return *this;
    }

    /// Adds one rule; `push` is written top-first over the stack alphabet and
    /// `output` over the input alphabet. Duplicate keys are rejected.
    PdcBuilder& rule(const std::string& from, Input in, char top, const std::string& to,
                     std::string_view push, std::string_view output) {
        Rule r;
        r.from = state(from);
        r.input = in;
        r.top = stack_index(top);
        r.next = state(to);
        for (char c : push) r.push.push_back(stack_index(c));
        for (char c : output)
            if (sigma_.find(c) == std::string::npos)
                throw PdcError("output symbol '" + std::string(1, c) + "' not in input alphabet");
        r.output = std::string(output);
        if (in.kind == Input::Kind::Symbol && sigma_.find(in.symbol) == std::string::npos)
            throw PdcError("input symbol '" + std::string(1, in.symbol) + "' not in input alphabet");
        const auto key = std::make_tuple(r.from, key_of(in), r.top);
        if (!keys_.insert(key).second)
            throw PdcError("duplicate rule for state '" + from + "' on " + describe(in) + " / '" +
                           std::string(1, top) + "'");
        rules_.push_back(std::move(r));
        return *this;
    }

    PdcSpec build() const;

private:
    static void check_alphabet(const std::string& a, const char* what) {
        if (a.empty()) throw PdcError(std::string(what) + " alphabet is empty");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const char c = a[i];
            if (c == kLambdaChar || c == kEndChar || c == '\'' || c == '#' ||
                static_cast<unsigned char>(c) <= ' ')
                throw PdcError(std::string(what) + " alphabet contains reserved character '" +
                               std::string(1, c) + "'");
            if (a.find(c) != i)
                throw PdcError(std::string(what) + " alphabet repeats '" + std::string(1, c) + "'");
        }
        if (a.size() > std::numeric_limits<StackSym>::max())
            throw PdcError(std::string(what) + " alphabet too large");
    }

    StackSym stack_index(char c) const {
        const auto pos = gamma_.find(c);
        if (pos == std::string::npos)
            throw PdcError("stack symbol '" + std::string(1, c) + "' not in stack alphabet");
        return static_cast<StackSym>(pos);
    }

    static int key_of(const Input& in) {
        switch (in.kind) {
        case Input::Kind::Symbol: return static_cast<unsigned char>(in.symbol);
        case Input::Kind::Lambda: return 256;
        case Input::Kind::End: return 257;
        }
        return 256;
    }

    static std::string describe(const Input& in) {
        switch (in.kind) {
        case Input::Kind::Symbol: return "'" + std::string(1, in.symbol) + "'";
        case Input::Kind::Lambda: return "lambda";
        case Input::Kind::End: return "endmarker";
        }
        return "?";
    }

    std::string name_, sigma_, gamma_;
    std::vector<std::string> states_;
    std::map<std::string, StateId> ids_;
    std::vector<Rule> rules_;
    std::set<std::tuple<StateId, int, StackSym>> keys_;
    StateId start_ = 0;
    StackSym bottom_ = 0;
    bool has_start_ = false;
    bool endmark_ = false;
};

inline PdcSpec PdcBuilder::build() const {
    if (!has_start_) throw PdcError("compressor '" + name_ + "' has no start state");
    PdcSpec s;
    s.name_ = name_;
    s.sigma_ = sigma_;
    s.gamma_ = gamma_;
    s.states_ = states_;
    s.start_ = start_;
    s.bottom_ = bottom_;
    s.endmark_ = endmark_;
    s.rules_ = rules_;
    s.sigma_code_.fill(-1);
    s.gamma_code_.fill(-1);
    for (std::size_t i = 0; i < sigma_.size(); ++i)
        s.sigma_code_[static_cast<unsigned char>(sigma_[i])] = static_cast<std::int16_t>(i);
    for (std::size_t i = 0; i < gamma_.size(); ++i)
        s.gamma_code_[static_cast<unsigned char>(gamma_[i])] = static_cast<std::int16_t>(i);
    s.index_.assign(states_.size() * s.input_columns() * gamma_.size(), -1);
    for (std::size_t i = 0; i < s.rules_.size(); ++i) {
        const auto& r = s.rules_[i];
        if (r.input.kind == Input::Kind::End && !endmark_)
            throw PdcError("endmarker rule in plain-mode compressor '" + name_ + "'");
        const auto col = s.column_of(r.input);
        s.index_[(r.from * s.input_columns() + col) * gamma_.size() + r.top] = static_cast<std::int32_t>(i);
    }
    return s;
}

inline double PdcSpec::log2_alphabet() const {
    std::size_t n = sigma_.size();
    double bits = 0.0;
    // exact for powers of two, which covers the binary case used throughout
    if ((n & (n - 1)) == 0) {
        while (n > 1) {
            n >>= 1;
            bits += 1.0;
        }
        return bits;
    }
    return std::log2(static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Execution

struct RunResult {
    std::string output;
    StateId final_state = 0;
    std::vector<StackSym> final_stack;  // bottom-first
    std::size_t consumed = 0;
};

/// Step-by-step execution of a compressor. Construction applies the initial
/// lambda closure. Every call to feed() consumes one input symbol and closes
/// under lambda rules again.
class Execution {
public:
    explicit Execution(const PdcSpec& spec, bool keep_output = true)
        : spec_(&spec), keep_output_(keep_output) {
        stack_.push_back(spec.stack_bottom());
        state_ = spec.start_state();
        step_min_height_ = stack_.size();
        close();
    }

    void feed(char symbol) {
        if (ended_) throw RunError(RunError::Kind::BadSymbol, consumed_, "input after endmarker");
        const int code = spec_->symbol_code(symbol);
        if (code < 0)
            throw RunError(RunError::Kind::BadSymbol, consumed_,
                           "symbol '" + std::string(1, symbol) + "' not in input alphabet");
        step(static_cast<std::size_t>(code), "symbol '" + std::string(1, symbol) + "'");
    }

    void feed(std::string_view word) {
        for (char c : word) feed(c);
    }

    /// Consumes the endmarker and runs the final lambda closure.
    void feed_end() {
        if (!spec_->endmarker_mode())
            throw RunError(RunError::Kind::NotEndmarked, consumed_,
                           "compressor '" + spec_->name() + "' has no endmarker mode");
        if (ended_) throw RunError(RunError::Kind::BadSymbol, consumed_, "endmarker fed twice");
        step(spec_->end_column(), "endmarker");
        ended_ = true;
    }

    StateId state() const { return state_; }
    const std::vector<StackSym>& stack() const { return stack_; }
    std::size_t height() const { return stack_.size(); }
    StackSym top() const { return stack_.back(); }
    std::size_t consumed() const { return consumed_; }
    std::size_t output_length() const { return output_length_; }
    const std::string& output() const { return output_; }
    /// Smallest stack height observed after any rule of the last step,
    /// including the height the step started from.
    std::size_t step_min_height() const { return step_min_height_; }

    RunResult result() const {
        RunResult r;
        r.output = output_;
        r.final_state = state_;
        r.final_stack = stack_;
        r.consumed = consumed_;
        return r;
    }

private:
    void step(std::size_t column, const std::string& what) {
        step_min_height_ = stack_.size();
        const Rule* r = spec_->rule_at(state_, column, stack_.back());
        if (r == nullptr)
            throw RunError(RunError::Kind::Undefined, consumed_,
                           "no rule for state '" + spec_->states()[state_] + "' on " + what + " with top '" +
                               std::string(1, spec_->stack_char(stack_.back())) + "'");
        fire(*r);
        if (column != spec_->end_column()) ++consumed_;
        close();
    }

    void fire(const Rule& r) {
        stack_.pop_back();
        for (auto it = r.push.rbegin(); it != r.push.rend(); ++it) stack_.push_back(*it);
        if (stack_.empty())
            throw PdcError("stack bottom removed in compressor '" + spec_->name() + "'");
        state_ = r.next;
        output_length_ += r.output.size();
        if (keep_output_) output_ += r.output;
        step_min_height_ = std::min(step_min_height_, stack_.size());
    }

    void close() {
        const std::size_t q = spec_->state_count();
        const std::size_t budget = stack_.size() * q + q;
        std::size_t fired = 0;
        while (const Rule* r = spec_->rule_at(state_, spec_->lambda_column(), stack_.back())) {
            if (++fired > budget)
                throw RunError(RunError::Kind::LambdaBudgetExceeded, consumed_,
                               "lambda closure exceeded " + std::to_string(budget) + " steps in state '" +
                                   spec_->states()[state_] + "'");
            fire(*r);
        }
    }

    const PdcSpec* spec_;
    bool keep_output_;
    bool ended_ = false;
    StateId state_ = 0;
    std::vector<StackSym> stack_;
    std::string output_;
    std::size_t output_length_ = 0;
    std::size_t consumed_ = 0;
    std::size_t step_min_height_ = 1;
};

/// Runs the compressor on `w` without an endmarker.
inline RunResult run(const PdcSpec& spec, std::string_view w) {
    Execution ex(spec);
    ex.feed(w);
    return ex.result();
}

/// Runs the compressor on `w` followed by the endmarker.
inline RunResult run_endmarked(const PdcSpec& spec, std::string_view w) {
    if (!spec.endmarker_mode())
        throw RunError(RunError::Kind::NotEndmarked, 0, "compressor '" + spec.name() + "' has no endmarker mode");
    Execution ex(spec);
    ex.feed(w);
    ex.feed_end();
    return ex.result();
}

/// C(w) in the compressor's own mode: endmarked machines see w followed by
/// the endmarker.
inline RunResult compress(const PdcSpec& spec, std::string_view w) {
    return spec.endmarker_mode() ? run_endmarked(spec, w) : run(spec, w);
}

inline std::size_t output_length(const PdcSpec& spec, std::string_view w) {
    Execution ex(spec, false);
    ex.feed(w);
    if (spec.endmarker_mode()) ex.feed_end();
    return ex.output_length();
}

// ---------------------------------------------------------------------------
// Traces

struct Column {
    StateId state = 0;
    std::vector<StackSym> stack;  // bottom-first
    std::size_t output_length = 0;
    /// Minimum height over every micro-step of the segment that produced this
    /// column, both endpoints included.
    std::size_t min_height = 1;

    std::size_t height() const { return stack.size(); }
    StackSym top() const { return stack.back(); }
};

struct Diagram {
    std::vector<Column> columns;  // columns[i] is the configuration after i symbols
};

inline Diagram run_traced(const PdcSpec& spec, std::string_view w) {
    Diagram d;
    d.columns.reserve(w.size() + 1);
    Execution ex(spec, false);
    auto snap = [&] {
        d.columns.push_back(Column{ex.state(), ex.stack(), ex.output_length(), ex.step_min_height()});
    };
    snap();
    for (char c : w) {
        ex.feed(c);
        snap();
    }
    return d;
}

// ---------------------------------------------------------------------------
// Information losslessness

struct IlReport {
    bool lossless = true;
    std::size_t max_len = 0;
    std::size_t words_checked = 0;
    std::optional<std::pair<std::string, std::string>> witness;
};

/// Enumerates every word over the input alphabet of length <= max_len in
/// length-then-lexicographic order and calls f(word).
template <class F>
void for_each_word(std::string_view alphabet, std::size_t max_len, F&& f) {
    std::string w;
    std::vector<std::size_t> digits;
    for (std::size_t len = 0; len <= max_len; ++len) {
        digits.assign(len, 0);
        w.assign(len, alphabet[0]);
        while (true) {
            f(std::string_view(w));
            std::size_t i = len;
            while (i > 0) {
                --i;
                if (++digits[i] < alphabet.size()) {
                    w[i] = alphabet[digits[i]];
                    break;
                }
                digits[i] = 0;
                w[i] = alphabet[0];
                if (i == 0) {
                    i = len + 1;  // wrapped around
                    break;
                }
            }
            if (len == 0 || i == len + 1) break;
        }
    }
}

/// Exhaustively checks injectivity of w -> (C(w), final state) on all words
/// up to max_len. Endmarker machines are checked on w followed by the end
/// symbol.
inline IlReport il_check(const PdcSpec& spec, std::size_t max_len) {
    IlReport rep;
    rep.max_len = max_len;
    std::unordered_map<std::string, std::string> seen;
    for_each_word(spec.input_alphabet(), max_len, [&](std::string_view w) {
        if (rep.witness) return;
        const RunResult r = compress(spec, w);
        std::string key = r.output;
        key.push_back('\0');
        key += std::to_string(r.final_state);
        ++rep.words_checked;
        auto [it, inserted] = seen.emplace(std::move(key), std::string(w));
        if (!inserted) {
            rep.lossless = false;
            rep.witness = std::make_pair(it->second, std::string(w));
        }
    });
    return rep;
}

// ---------------------------------------------------------------------------
// Ratios

inline Ratio ratio_at(const PdcSpec& spec, std::string_view prefix) {
    if (prefix.empty()) throw std::invalid_argument("ratio_at: empty prefix");
    return Ratio{output_length(spec, prefix), prefix.size(), 1.0};
}

// ---------------------------------------------------------------------------
// Validation

struct Finding {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const {
        return std::none_of(findings.begin(), findings.end(),
                            [](const Finding& f) { return f.severity == Finding::Severity::Error; });
    }
    std::size_t error_count() const {
        return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
            return f.severity == Finding::Severity::Error;
        }));
    }
};

namespace detail {

inline std::vector<bool> reachable(const PdcSpec& spec, std::vector<StateId> seeds, bool include_end) {
    std::vector<bool> seen(spec.state_count(), false);
    std::queue<StateId> todo;
    for (auto s : seeds)
        if (!seen[s]) {
            seen[s] = true;
            todo.push(s);
        }
    while (!todo.empty()) {
        const StateId q = todo.front();
        todo.pop();
        for (const auto& r : spec.rules()) {
            if (r.from != q) continue;
            if (!include_end && r.input.kind == Input::Kind::End) continue;
            if (!seen[r.next]) {
                seen[r.next] = true;
                todo.push(r.next);
            }
        }
    }
    return seen;
}

}  // namespace detail

/// Checks the structural constraints of a compressor. Errors make the machine
/// unrunnable; warnings flag partial or unreachable parts.
inline ValidationReport validate_spec(const PdcSpec& spec) {
    ValidationReport rep;
    auto error = [&](std::string m) { rep.findings.push_back({Finding::Severity::Error, std::move(m)}); };
    auto warn = [&](std::string m) { rep.findings.push_back({Finding::Severity::Warning, std::move(m)}); };
    const auto& names = spec.states();
    const StackSym z0 = spec.stack_bottom();
    auto sym = [&](StackSym s) { return std::string(1, spec.stack_char(s)); };

    for (StateId q = 0; q < spec.state_count(); ++q) {
        for (StackSym z = 0; z < spec.stack_alphabet().size(); ++z) {
            if (spec.rule_at(q, spec.lambda_column(), z) == nullptr) continue;
            for (std::size_t col = 0; col < spec.input_columns(); ++col) {
                if (col == spec.lambda_column()) continue;
                if (spec.rule_at(q, col, z) != nullptr) {
                    error("nondeterminism: state '" + names[q] + "' has both a lambda rule and an input rule on '" +
                          sym(z) + "'");
                    break;
                }
            }
        }
    }

    for (const auto& r : spec.rules()) {
        if (r.top == z0 && (r.push.empty() || r.push.back() != z0))
            error("rule in state '" + names[r.from] + "' removes the stack bottom '" + sym(z0) + "'");
    }

    // Phase split: states used before the endmarker, and states entered by
    // an endmarker rule (closed under lambda rules).
    const auto pre = detail::reachable(spec, {spec.start_state()}, false);
    const auto all = detail::reachable(spec, {spec.start_state()}, true);
    for (StateId q = 0; q < spec.state_count(); ++q)
        if (!all[q]) warn("state '" + names[q] + "' is unreachable");

    if (spec.endmarker_mode()) {
        std::vector<StateId> end_targets;
        for (const auto& r : spec.rules()) {
            if (r.input.kind != Input::Kind::End) continue;
            end_targets.push_back(r.next);
            const bool keeps = r.push.size() == 1 && r.push[0] == r.top;
            if (!r.push.empty() && !keeps)
                error("endmarker rule in state '" + names[r.from] + "' may only pop or keep the top symbol");
        }
        std::vector<bool> post(spec.state_count(), false);
        std::queue<StateId> todo;
        for (auto s : end_targets)
            if (!post[s]) {
                post[s] = true;
                todo.push(s);
            }
        while (!todo.empty()) {
            const StateId q = todo.front();
            todo.pop();
            for (const auto& r : spec.rules()) {
                if (r.from != q || r.input.kind != Input::Kind::Lambda) continue;
                const bool ok = (r.top == z0) ? (r.push.size() == 1 && r.push[0] == z0) : r.push.empty();
                if (!ok)
                    error("lambda rule in post-endmarker state '" + names[q] + "' on '" + sym(r.top) +
                          "' must pop (or keep the stack bottom)");
                if (!post[r.next]) {
                    post[r.next] = true;
                    todo.push(r.next);
                }
            }
        }
    }

    // Totality before the endmarker.
    for (StateId q = 0; q < spec.state_count(); ++q) {
        if (!pre[q]) continue;
        std::string missing;
        for (StackSym z = 0; z < spec.stack_alphabet().size(); ++z) {
            if (spec.rule_at(q, spec.lambda_column(), z) != nullptr) continue;
            for (std::size_t col = 0; col < spec.input_alphabet().size(); ++col)
                if (spec.rule_at(q, col, z) == nullptr) {
                    missing += std::string(" (") + spec.input_alphabet()[col] + "," + sym(z) + ")";
                }
            if (spec.endmarker_mode() && spec.rule_at(q, spec.end_column(), z) == nullptr)
                missing += " ($," + sym(z) + ")";
        }
        if (!missing.empty()) warn("state '" + names[q] + "' is not total:" + missing);
    }

    // Lambda budget: simulate closures from every (state, single stack symbol).
    const std::size_t nq = spec.state_count();
    for (StateId q = 0; q < nq; ++q) {
        for (StackSym z = 0; z < spec.stack_alphabet().size(); ++z) {
            if (spec.rule_at(q, spec.lambda_column(), z) == nullptr) continue;
            std::vector<StackSym> stack{z0};
            if (z != z0) stack.push_back(z);
            StateId state = q;
            const std::size_t budget = stack.size() * nq + nq;
            std::size_t fired = 0;
            bool broken = false;
            while (const Rule* r = spec.rule_at(state, spec.lambda_column(), stack.back())) {
                if (++fired > budget) break;
                stack.pop_back();
                for (auto it = r->push.rbegin(); it != r->push.rend(); ++it) stack.push_back(*it);
                if (stack.empty()) {
                    broken = true;
                    break;
                }
                state = r->next;
            }
            if (fired > budget)
                error("lambda closure from state '" + names[q] + "' with top '" + sym(z) + "' exceeds its budget of " +
                      std::to_string(budget) + " steps");
            else if (broken)
                error("lambda closure from state '" + names[q] + "' empties the stack");
        }
    }
    return rep;
}

}  // namespace pdlab
