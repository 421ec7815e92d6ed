#pragma once

// Command-line front end. cli_main takes its streams as parameters so the
// tests can drive it in-process.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pdlab/pdlab.hpp>

namespace pdlab::cli {

/// Problems with the invocation itself (unreadable files, bad combinations).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InputOpts {
    std::string file;
    bool from_stdin = false;
    std::optional<std::string> word;
};

inline void add_input_options(CLI::App* sub, InputOpts& in) {
    auto* f = sub->add_option("--input", in.file, "read symbols from a file (one character per symbol)");
    auto* s = sub->add_flag("--stdin", in.from_stdin, "read symbols from standard input");
    auto* w = sub->add_option("--word", in.word, "symbols given inline");
    f->excludes(s)->excludes(w);
    s->excludes(w);
}

inline std::string strip_line_end(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::string read_input(const InputOpts& in, std::istream& stdin_stream) {
    if (in.word) return *in.word;
    if (in.from_stdin) {
        std::ostringstream ss;
        ss << stdin_stream.rdbuf();
        return strip_line_end(ss.str());
    }
    if (!in.file.empty()) return strip_line_end(read_file(in.file));
    throw UsageError("no input: give --input, --stdin or --word");
}

inline PdcSpec load_machine(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open '" + path + "'");
    return parse_pdc(f);
}

/// Writes to the named file, or to `fallback` when the name is empty or "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            os_ = &fallback;
        } else {
            file_.open(path, std::ios::binary);
            if (!file_) throw UsageError("cannot write '" + path + "'");
            os_ = &file_;
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

inline void write_stream(const CheckpointedStream& s, std::ostream& out) {
    s.for_each_chunk(s.total_length(), [&](std::string_view c) { out << c; });
    out << "\n";
}

inline std::vector<Checkpoint> load_checkpoints(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open '" + path + "'");
    return read_checkpoints_csv(f);
}

/// "t:u" or "t:u:n"; t may be empty.
inline RepetitionBlock parse_block(const std::string& spec, bool need_count) {
    const auto a = spec.find(':');
    if (a == std::string::npos) throw UsageError("block '" + spec + "' is not of the form t:u[:n]");
    const auto b = spec.find(':', a + 1);
    RepetitionBlock blk{spec.substr(0, a), spec.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1), 1};
    if (b != std::string::npos) {
        const std::string n = spec.substr(b + 1);
        if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("block '" + spec + "' has a bad repetition count");
        blk.n = std::stoull(n);
    } else if (need_count) {
        throw UsageError("block '" + spec + "' needs a repetition count (t:u:n) unless --choose is given");
    }
    return blk;
}

/// Family from .pdc files or a named preset, never both.
inline std::vector<PdcSpec> load_family(const std::vector<std::string>& files, const std::string& preset) {
    if (!files.empty() && !preset.empty()) throw UsageError("give either --family or --preset, not both");
    if (!preset.empty()) return preset_family(preset);
    if (files.empty()) throw UsageError("no family: give --family <pdc-file>... or --preset <name>");
    std::vector<PdcSpec> fam;
    for (const auto& f : files) fam.push_back(load_machine(f));
    return fam;
}

inline std::string series_csv_name(const std::string& preset, const std::string& compressor) {
    return preset + "_" + compressor + ".csv";
}

/// `--key value` and `--key=value` pairs left over after the preset name.
inline PresetParams parse_preset_params(const std::vector<std::string>& rest) {
    PresetParams p;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        const std::string& a = rest[i];
        if (a.rfind("--", 0) != 0 || a.size() < 3) throw UsageError("unexpected argument '" + a + "'");
        const auto eq = a.find('=');
        if (eq != std::string::npos) {
            p.set(a.substr(2, eq - 2), a.substr(eq + 1));
        } else {
            if (i + 1 >= rest.size()) throw UsageError("parameter " + a + " needs a value");
            p.set(a.substr(2), rest[++i]);
        }
    }
    return p;
}

inline int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"pdlab: pushdown and LZ78 compressors on finite prefixes of infinite sequences"};
    app.require_subcommand(1);
    std::function<int()> action;

    // validate ---------------------------------------------------------------
    std::string machine_path;
    {
        auto* sub = app.add_subcommand("validate", "check a .pdc machine file");
        sub->add_option("pdc-file", machine_path)->required();
        sub->final_callback([&] {
            action = [&] {
                const auto report = validate_spec(load_machine(machine_path));
                for (const auto& f : report.findings)
                    out << (f.severity == Finding::Severity::Error ? "error: " : "warning: ") << f.message << "\n";
                out << (report.ok() ? "ok" : "invalid") << "\n";
                return report.ok() ? 0 : 1;
            };
        });
    }

    // run --------------------------------------------------------------------
    InputOpts run_in;
    bool run_endmark = false, run_verbose = false;
    std::string run_checkpoints, run_csv;
    {
        auto* sub = app.add_subcommand("run", "run a machine on an input word and print its output");
        sub->add_option("pdc-file", machine_path)->required();
        add_input_options(sub, run_in);
        sub->add_flag("--endmark", run_endmark, "append the endmarker after the input");
        sub->add_flag("--verbose", run_verbose, "also print final state, stack height and ratio");
        auto* cp = sub->add_option("--checkpoints", run_checkpoints, "checkpoint sidecar; with --csv writes a ratio table");
        auto* csv = sub->add_option("--csv", run_csv, "ratio table output (n,bits,ratio,label)");
        cp->needs(csv);
        csv->needs(cp);
        sub->final_callback([&] {
            action = [&] {
                const auto spec = load_machine(machine_path);
                const std::string w = read_input(run_in, in);
                if (run_endmark && !spec.endmarker_mode())
                    throw UsageError("--endmark given but " + spec.name() + " is not an endmarked machine");
                if (!run_csv.empty()) {
                    if (spec.endmarker_mode() != run_endmark)
                        throw UsageError("ratio tables run endmarked machines with the endmarker; pass --endmark exactly "
                                         "for endmarked machines");
                    const auto stream = stream_from_text(w, load_checkpoints(run_checkpoints));
                    Sink sink(run_csv, out);
                    write_csv(*sink, ratio_series(spec, stream, stream.total_length()));
                    return 0;
                }
                const RunResult r = run_endmark ? run_endmarked(spec, w) : run(spec, w);
                out << r.output << "\n";
                if (run_verbose) {
                    err << "state " << spec.states()[r.final_state] << "\n";
                    err << "stack ";
                    for (auto it = r.final_stack.rbegin(); it != r.final_stack.rend(); ++it) err << spec.stack_char(*it);
                    err << " (top first)\n";
                    err << "input " << w.size() << " output " << r.output.size() << "\n";
                }
                return 0;
            };
        });
    }

    // ilcheck ----------------------------------------------------------------
    std::size_t il_max = 8;
    {
        auto* sub = app.add_subcommand("ilcheck", "exhaustive information-lossless check");
        sub->add_option("pdc-file", machine_path)->required();
        sub->add_option("--maxlen", il_max, "longest word length checked")->required();
        sub->final_callback([&] {
            action = [&] {
                const auto rep = il_check(load_machine(machine_path), il_max);
                if (rep.lossless) {
                    out << "lossless up to length " << rep.max_len << " (" << rep.words_checked << " words)\n";
                    return 0;
                }
                out << "not lossless: '" << rep.witness->first << "' and '" << rep.witness->second
                    << "' give the same output and final state\n";
                return 1;
            };
        });
    }

    // lz ---------------------------------------------------------------------
    InputOpts lz_in;
    std::string lz_alphabet = "01";
    std::optional<std::string> lz_seed;
    std::string lz_checkpoints, lz_csv;
    auto dictionary = [&] {
        return LzDictionary::from_parse(lz_seed.value_or(""), lz_alphabet);
    };
    {
        auto* lz = app.add_subcommand("lz", "LZ78 code with explicit bit layout");
        lz->require_subcommand(1);
        auto common = [&](CLI::App* s) {
            add_input_options(s, lz_in);
            s->add_option("--alphabet", lz_alphabet, "input alphabet, in code order")->capture_default_str();
            s->add_option("--seed-text", lz_seed, "preload the dictionary with the complete phrases of this text");
        };
        auto* enc = lz->add_subcommand("encode", "print the bit string for the input");
        common(enc);
        enc->final_callback([&] {
            action = [&] {
                out << lz_encode(read_input(lz_in, in), dictionary()) << "\n";
                return 0;
            };
        });
        auto* dec = lz->add_subcommand("decode", "decode a bit string");
        common(dec);
        dec->final_callback([&] {
            action = [&] {
                out << lz_decode(read_input(lz_in, in), dictionary()) << "\n";
                return 0;
            };
        });
        auto* rat = lz->add_subcommand("ratio", "phrase count, code length and ratio");
        common(rat);
        auto* cp = rat->add_option("--checkpoints", lz_checkpoints, "checkpoint sidecar; with --csv writes a ratio table");
        auto* csv = rat->add_option("--csv", lz_csv, "ratio table output (n,bits,ratio,label)");
        cp->needs(csv);
        csv->needs(cp);
        rat->final_callback([&] {
            action = [&] {
                const std::string w = read_input(lz_in, in);
                if (!lz_csv.empty()) {
                    if (lz_seed) throw UsageError("--seed-text is not supported with --csv");
                    const auto stream = stream_from_text(w, load_checkpoints(lz_checkpoints));
                    Sink sink(lz_csv, out);
                    write_csv(*sink, ratio_series_lz(stream, stream.total_length(), lz_alphabet));
                    return 0;
                }
                if (w.empty()) throw UsageError("the ratio of an empty word is undefined");
                const auto d = dictionary();
                const auto parse = lz_parse(w, d);
                const Ratio r = lz_ratio_at(w, d);
                out << "phrases " << parse.phrase_count() << "\n";
                out << "bits " << r.output << "\n";
                out << "ratio " << format_number(r.value()) << "\n";
                return 0;
            };
        });
    }

    // seq --------------------------------------------------------------------
    std::string seq_out, seq_cps;
    std::vector<std::string> seq_blocks;
    bool seq_choose = false, seq_restricted = false;
    std::size_t seq_depth = 0, seq_k = 2, seq_v = 1, seq_n = 0, seq_nmax = 0;
    std::uint64_t seq_cap = RepetitionSearchOptions{}.cap, seq_len = 0, seq_seed = 1;
    std::string seq_alphabet = "01";
    auto emit = [&](const CheckpointedStream& s) {
        {
            Sink sink(seq_out, out);
            write_stream(s, *sink);
        }
        if (!seq_cps.empty()) {
            Sink sink(seq_cps, out);
            write_checkpoints_csv(*sink, s.checkpoints());
        }
    };
    {
        auto* seq = app.add_subcommand("seq", "write sequence prefixes and checkpoint sidecars");
        seq->require_subcommand(1);
        auto outputs = [&](CLI::App* s) {
            s->add_option("-o,--output", seq_out, "output file (default: standard output)");
            s->add_option("--checkpoints", seq_cps, "write checkpoints as CSV (position,label)");
        };

        auto* rep = seq->add_subcommand("repeat", "blocks t u^n, counts given or chosen by the LZ78 search");
        rep->add_option("--block", seq_blocks, "t:u:n, or t:u with --choose (t may be empty)")->required();
        rep->add_flag("--choose", seq_choose, "choose counts so LZ78 ratios fall at block ends");
        rep->add_option("--depth", seq_depth, "number of blocks used by --choose (default: all)");
        rep->add_option("--cap", seq_cap, "largest repetition count tried by --choose")->capture_default_str();
        outputs(rep);
        rep->final_callback([&] {
            action = [&] {
                RepetitionRecipe recipe;
                for (const auto& b : seq_blocks) recipe.blocks.push_back(parse_block(b, !seq_choose));
                if (seq_choose) {
                    std::vector<std::pair<std::string, std::string>> pairs;
                    for (const auto& b : recipe.blocks) pairs.emplace_back(b.t, b.u);
                    RepetitionSearchOptions opt;
                    opt.cap = seq_cap;
                    recipe = choose_repetition_counts(pairs, seq_depth ? seq_depth : pairs.size(), opt);
                    for (const auto& b : recipe.blocks) err << "block " << b.t << ":" << b.u << ":" << b.n << "\n";
                }
                emit(repetitive_stream(recipe));
                return 0;
            };
        });

        auto* bs = seq->add_subcommand("buildS", "the flagged zone sequence up to section n_max");
        bs->add_option("--k", seq_k)->required();
        bs->add_option("--v", seq_v)->required();
        bs->add_option("--n-max", seq_nmax)->required();
        outputs(bs);
        bs->final_callback([&] {
            action = [&] {
                const auto plan = plan_S(seq_k, seq_v, seq_nmax);
                for (auto n : plan.skipped) err << "skipped section " << n << ": fewer than v reverse pairs\n";
                emit(build_S(seq_k, seq_v, seq_nmax));
                return 0;
            };
        });

        auto* tn = seq->add_subcommand("Tn", "binary words of length n without a run of k ones");
        tn->add_option("--n", seq_n)->required();
        tn->add_option("--k", seq_k)->required();
        tn->add_flag("--restricted", seq_restricted, "only words that start and end with 0");
        tn->add_option("-o,--output", seq_out, "output file (default: standard output)");
        tn->final_callback([&] {
            action = [&] {
                Sink sink(seq_out, out);
                for (const auto& w : seq_restricted ? enumerate_T_restricted(seq_n, seq_k) : enumerate_T(seq_n, seq_k))
                    *sink << w << "\n";
                return 0;
            };
        });

        auto* rnd = seq->add_subcommand("random", "seeded pseudorandom word");
        rnd->add_option("--length", seq_len)->required();
        rnd->add_option("--seed", seq_seed)->capture_default_str();
        rnd->add_option("--alphabet", seq_alphabet)->capture_default_str();
        rnd->add_option("-o,--output", seq_out, "output file (default: standard output)");
        rnd->final_callback([&] {
            action = [&] {
                Sink sink(seq_out, out);
                *sink << random_word(seq_len, seq_seed, seq_alphabet) << "\n";
                return 0;
            };
        });
    }

    // pump -------------------------------------------------------------------
    InputOpts pump_in;
    std::vector<std::string> pump_family;
    std::string pump_preset, pump_record, pump_out;
    std::optional<std::uint64_t> pump_dmin, pump_random;
    std::uint64_t pump_seed = 1;
    bool pump_endmarked = false;
    std::size_t pump_nmax = 0, pump_cmax = 8;
    auto word = [&] {
        if (pump_random) {
            if (pump_in.word || pump_in.from_stdin || !pump_in.file.empty())
                throw UsageError("--random excludes --input, --stdin and --word");
            return random_word(*pump_random, pump_seed);
        }
        return read_input(pump_in, in);
    };
    auto n_max = [&](bool endmarked) { return pump_nmax ? pump_nmax : (endmarked ? 40 : 50); };
    {
        auto* pump = app.add_subcommand("pump", "pumping decompositions for a family of machines");
        pump->require_subcommand(1);
        auto common = [&](CLI::App* s) {
            s->add_option("--family", pump_family, "machine files");
            s->add_option("--preset", pump_preset, "named family: F1, F2, F3, E1 or E2");
            add_input_options(s, pump_in);
            s->add_option("--n-max", pump_nmax, "largest repetition count checked (default 50 plain, 40 endmarked)");
        };

        auto* find = pump->add_subcommand("find", "find a decomposition and print its record");
        common(find);
        find->add_option("--random", pump_random, "use a seeded random word of this length");
        find->add_option("--seed", pump_seed, "seed for --random")->capture_default_str();
        find->add_option("--dmin", pump_dmin, "least |u| (default: derived from the family)");
        find->add_flag("--endmarked", pump_endmarked, "fit endmarked witnesses");
        find->add_option("--c-max", pump_cmax, "largest offset tried when fitting")->capture_default_str();
        find->add_option("-o,--output", pump_out, "record file (default: standard output)");
        find->final_callback([&] {
            action = [&] {
                const auto fam = load_family(pump_family, pump_preset);
                const std::string w = word();
                const auto d = pump_dmin ? *pump_dmin : default_dmin(fam, w.size());
                const auto dec = pump_endmarked ? find_pumpable_endmarked(fam, w, d, n_max(true), pump_cmax)
                                                : find_pumpable(fam, w, d);
                if (!dec) {
                    err << "no decomposition with |u| >= " << d << "\n";
                    return 1;
                }
                Sink sink(pump_out, out);
                write_pump_record(*sink, to_record(*dec));
                return 0;
            };
        });

        auto* ver = pump->add_subcommand("verify", "check a record against the family and word");
        common(ver);
        ver->add_option("--random", pump_random, "use a seeded random word of this length");
        ver->add_option("--seed", pump_seed, "seed for --random")->capture_default_str();
        ver->add_option("--record", pump_record, "record file written by pump find")->required();
        ver->final_callback([&] {
            action = [&] {
                const auto fam = load_family(pump_family, pump_preset);
                const std::string w = word();
                std::ifstream rf(pump_record);
                if (!rf) throw UsageError("cannot open '" + pump_record + "'");
                const auto dec = from_record(fam, w, read_pump_record(rf));
                const auto verdict = dec.endmarked ? verify_pump_endmarked(fam, dec, n_max(true))
                                                   : verify_pump_plain(fam, dec, n_max(false));
                if (verdict.ok) {
                    out << "ok: |t|=" << dec.t.size() << " |u|=" << dec.u.size() << " |v|=" << dec.v.size()
                        << ", all machines pump up to n=" << n_max(dec.endmarked) << "\n";
                    return 0;
                }
                out << "mismatch: " << verdict.detail << "\n";
                return 1;
            };
        });
    }

    // experiment -------------------------------------------------------------
    std::string exp_name, exp_csv_dir;
    {
        auto* sub = app.add_subcommand("experiment", "run a preset experiment; extra --key value pairs are its parameters");
        sub->add_option("preset", exp_name, "lemma1-floor, lemma2-limit, lz-beats-pd or pd-beats-lz")->required();
        sub->add_option("--csv-dir", exp_csv_dir, "write one CSV per compressor into this directory");
        sub->allow_extras();
        sub->final_callback([&, sub] {
            action = [&, sub] {
                const auto params = parse_preset_params(sub->remaining());
                const auto rep = run_preset(exp_name, params);
                out << rep.text();
                if (!exp_csv_dir.empty()) {
                    std::filesystem::create_directories(exp_csv_dir);
                    for (const auto& [who, rows] : rep.series) {
                        const auto path = std::filesystem::path(exp_csv_dir) / series_csv_name(exp_name, who);
                        Sink sink(path.string(), out);
                        write_csv(*sink, rows);
                    }
                }
                return rep.pass ? 0 : 1;
            };
        });
    }

    // zoo --------------------------------------------------------------------
    std::string zoo_name, zoo_out;
    bool zoo_list = false;
    {
        auto* sub = app.add_subcommand("zoo", "print a builtin machine in the .pdc format");
        sub->add_option("name", zoo_name, "e.g. identity, unary_squeezer_k2, zone_k4_v4_vp16");
        sub->add_flag("--list", zoo_list, "list the builtin machines");
        sub->add_option("-o,--output", zoo_out, "output file (default: standard output)");
        sub->final_callback([&] {
            action = [&] {
                if (zoo_list) {
                    for (const auto& m : builtin_plain()) out << m.name() << "\n";
                    for (const auto& m : builtin_endmarked()) out << m.name() << "\n";
                    return 0;
                }
                if (zoo_name.empty()) throw UsageError("give a machine name or --list");
                const auto m = builtin_by_name(zoo_name);
                if (!m) throw UsageError("no builtin machine named '" + zoo_name + "' (see zoo --list)");
                Sink sink(zoo_out, out);
                *sink << emit_pdc(*m);
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // help on a subcommand
            app.exit(e, out, err);
            return 0;
        }
        err << "pdlab: " << e.what() << "\n";
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const UsageError& e) {
        err << "pdlab: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "pdlab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "pdlab: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace pdlab::cli
