#pragma once

// Line-based textual format for compressors.
//
//   pdc <name>
//   alphabet <symbols>
//   stack <symbols>
//   start <state> <stack-symbol>
//   mode plain|endmark
//   rule <state> <input|-|$> <stack-symbol> -> <state> <push|''> out <output|''>
//
// '-' is the lambda input, '$' the endmarker, '' the empty string. Everything
// after '#' is a comment.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pdc.hpp"

namespace pdlab {

class FormatError : public PdcError {
public:
    FormatError(std::size_t line, const std::string& msg)
        : PdcError("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

inline std::string unquote_empty(const std::string& s) { return s == "''" ? std::string() : s; }

}  // namespace detail

inline PdcSpec parse_pdc(std::istream& in) {
    std::string name, sigma, gamma, start_state;
    char bottom = 0;
    bool have_start = false, endmark = false, have_mode = false;

    struct PendingRule {
        std::size_t line;
        std::string from, to, push, out;
        Input input;
        char top;
    };
    std::vector<PendingRule> pending;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto tok = detail::split_ws(raw);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        auto need = [&](std::size_t n) {
            if (tok.size() != n) throw FormatError(lineno, "'" + kw + "' expects " + std::to_string(n - 1) + " argument(s)");
        };
        if (kw == "pdc") {
            need(2);
            name = tok[1];
        } else if (kw == "alphabet") {
            need(2);
            sigma = tok[1];
        } else if (kw == "stack") {
            need(2);
            gamma = tok[1];
        } else if (kw == "start") {
            need(3);
            if (tok[2].size() != 1) throw FormatError(lineno, "stack bottom must be a single symbol");
            start_state = tok[1];
            bottom = tok[2][0];
            have_start = true;
        } else if (kw == "mode") {
            need(2);
            if (tok[1] == "plain")
                endmark = false;
            else if (tok[1] == "endmark")
                endmark = true;
            else
                throw FormatError(lineno, "mode must be 'plain' or 'endmark'");
            have_mode = true;
        } else if (kw == "rule") {
            // rule q a Z -> q' push out output
            if (tok.size() != 9 || tok[4] != "->" || tok[7] != "out")
                throw FormatError(lineno, "malformed rule; expected 'rule q a Z -> q2 push out output'");
            PendingRule r;
            r.line = lineno;
            r.from = tok[1];
            if (tok[2].size() != 1) throw FormatError(lineno, "input must be a single symbol, '-' or '$'");
            const char a = tok[2][0];
            r.input = a == kLambdaChar ? Input::lambda() : a == kEndChar ? Input::end() : Input::sym(a);
            if (tok[3].size() != 1) throw FormatError(lineno, "stack symbol must be a single character");
            r.top = tok[3][0];
            r.to = tok[5];
            r.push = detail::unquote_empty(tok[6]);
            r.out = detail::unquote_empty(tok[8]);
            pending.push_back(std::move(r));
        } else {
            throw FormatError(lineno, "unknown directive '" + kw + "'");
        }
    }
    if (name.empty()) throw FormatError(lineno, "missing 'pdc' line");
    if (sigma.empty()) throw FormatError(lineno, "missing 'alphabet' line");
    if (gamma.empty()) throw FormatError(lineno, "missing 'stack' line");
    if (!have_start) throw FormatError(lineno, "missing 'start' line");
    (void)have_mode;  // plain is the default

    auto wrap = [](std::size_t line, auto&& f) {
        try {
            f();
        } catch (const FormatError&) {
            throw;
        } catch (const PdcError& e) {
            throw FormatError(line, e.what());
        }
    };

    std::optional<PdcBuilder> b;
    wrap(1, [&] { b.emplace(name, sigma, gamma); });
    b->state(start_state);  // the start state gets id 0
    wrap(1, [&] { b->start(start_state, bottom).endmarked(endmark); });
    for (const auto& r : pending) {
        if (r.input.kind == Input::Kind::End && !endmark)
            throw FormatError(r.line, "endmarker rule in a plain-mode compressor");
        wrap(r.line, [&] { b->rule(r.from, r.input, r.top, r.to, r.push, r.out); });
    }
    return b->build();
}

inline PdcSpec parse_pdc_string(const std::string& text) {
    std::istringstream in(text);
    return parse_pdc(in);
}

inline PdcSpec load_pdc(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PdcError("cannot open '" + path + "'");
    return parse_pdc(in);
}

inline std::string emit_pdc(const PdcSpec& spec) {
    std::ostringstream out;
    out << "pdc " << spec.name() << "\n";
    out << "alphabet " << spec.input_alphabet() << "\n";
    out << "stack " << spec.stack_alphabet() << "\n";
    out << "start " << spec.states()[spec.start_state()] << " " << spec.stack_char(spec.stack_bottom()) << "\n";
    out << "mode " << (spec.endmarker_mode() ? "endmark" : "plain") << "\n";
    for (const auto& r : spec.rules()) {
        out << "rule " << spec.states()[r.from] << " ";
        switch (r.input.kind) {
        case Input::Kind::Symbol: out << r.input.symbol; break;
        case Input::Kind::Lambda: out << kLambdaChar; break;
        case Input::Kind::End: out << kEndChar; break;
        }
        out << " " << spec.stack_char(r.top) << " -> " << spec.states()[r.next] << " ";
        if (r.push.empty()) {
            out << "''";
        } else {
            for (auto s : r.push) out << spec.stack_char(s);
        }
        out << " out " << (r.output.empty() ? std::string("''") : r.output) << "\n";
    }
    return out.str();
}

}  // namespace pdlab
