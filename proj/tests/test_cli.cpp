#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdlab_cli.hpp"

using namespace pdlab;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args, const std::string& stdin_text = "") {
    args.insert(args.begin(), "pdlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    const int code = pdlab::cli::cli_main(static_cast<int>(argv.size()), argv.data(), in, out, err);
    return {code, out.str(), err.str()};
}

std::string machine(const std::string& name) { return std::string(PDLAB_MACHINES_DIR) + "/" + name + ".pdc"; }

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("pdlab_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, ValidateShippedMachines) {
    for (const char* m : {"identity", "identity_endmarked", "push_pop_copier", "pair_buffer", "unary_squeezer_k2",
                          "unary_squeezer_k3", "block_counter_k3", "zone_k2_v1_vp2", "zone_k4_v4_vp16"}) {
        const auto r = invoke({"validate", machine(m)});
        EXPECT_EQ(r.code, 0) << m << r.out << r.err;
        EXPECT_NE(r.out.find("ok"), std::string::npos);
    }
}

TEST(Cli, ShippedMachinesMatchTheZoo) {
    for (const char* m : {"identity", "unary_squeezer_k2", "zone_k4_v4_vp16"}) {
        const auto r = invoke({"zoo", m});
        ASSERT_EQ(r.code, 0);
        EXPECT_EQ(r.out, slurp(machine(m))) << m;
    }
}

TEST(Cli, ValidateReportsErrors) {
    TempDir d;
    std::ofstream(d.file("bad.pdc")) << "pdc bad\nalphabet 01\nstack z\nstart s z\nrule s 0 z -> s '' out 0\n";
    const auto r = invoke({"validate", d.file("bad.pdc")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("error:"), std::string::npos);
}

TEST(Cli, RunSqueezer) {
    const auto r = invoke({"run", machine("unary_squeezer_k2"), "--word", "000000000", "--endmark"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "0100\n");
}

TEST(Cli, RunFromStdinAndFile) {
    TempDir d;
    std::ofstream(d.file("w.txt")) << "0110\n";
    EXPECT_EQ(invoke({"run", machine("pair_buffer"), "--input", d.file("w.txt")}).out, "0110\n");
    EXPECT_EQ(invoke({"run", machine("identity"), "--stdin"}, "101\n").out, "101\n");
}

TEST(Cli, RunErrors) {
    EXPECT_EQ(invoke({"run", machine("identity"), "--word", "01", "--endmark"}).code, 2);
    EXPECT_EQ(invoke({"run", machine("identity"), "--word", "0x"}).code, 1);
    EXPECT_EQ(invoke({"run", machine("identity")}).code, 2);
    EXPECT_EQ(invoke({"run", "/nonexistent.pdc", "--word", "0"}).code, 2);
    EXPECT_EQ(invoke({"run"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
    const auto r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("experiment"), std::string::npos);
}

TEST(Cli, UsageErrorsAreOneLine) {
    const auto r = invoke({"ilcheck", machine("identity")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, IlCheck) {
    const auto ok = invoke({"ilcheck", machine("identity"), "--maxlen", "8"});
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("511 words"), std::string::npos);
    TempDir d;
    std::ofstream(d.file("lossy.pdc"))
        << "pdc lossy\nalphabet 01\nstack z\nstart s z\nrule s 0 z -> s z out 0\nrule s 1 z -> s z out 0\n";
    EXPECT_EQ(invoke({"ilcheck", d.file("lossy.pdc"), "--maxlen", "3"}).code, 1);
}

TEST(Cli, LzEncodeDecodeRatio) {
    EXPECT_EQ(invoke({"lz", "encode", "--word", "001"}).out, "0011\n");
    EXPECT_EQ(invoke({"lz", "decode", "--word", "0011"}).out, "001\n");
    const auto r = invoke({"lz", "ratio", "--word", "0101010101010101"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("bits " + std::to_string(lz_output_length("0101010101010101"))), std::string::npos);
    EXPECT_EQ(invoke({"lz", "decode", "--word", "0x"}).code, 1);
    const auto seeded = invoke({"lz", "encode", "--word", "0001", "--seed-text", "0100"});
    EXPECT_EQ(seeded.out, lz_encode("0001", LzDictionary::from_parse("0100")) + "\n");
}

TEST(Cli, SeqRepeatWithSidecar) {
    TempDir d;
    const auto r = invoke({"seq", "repeat", "--block", "1:01:5", "--block", ":0:4", "-o", d.file("s.txt"),
                        "--checkpoints", d.file("s.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(d.file("s.txt")), "101010101010000\n");
    const auto csv = slurp(d.file("s.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "position,label");
    EXPECT_NE(csv.find("11,block1.end"), std::string::npos);

    // the sidecar drives a ratio table through run and lz ratio
    const auto pd = invoke({"run", machine("identity"), "--input", d.file("s.txt"), "--checkpoints", d.file("s.csv"),
                         "--csv", "-"});
    EXPECT_EQ(pd.code, 0);
    EXPECT_NE(pd.out.find("11,11,1,block1.end"), std::string::npos);
    const auto lz = invoke({"lz", "ratio", "--input", d.file("s.txt"), "--checkpoints", d.file("s.csv"), "--csv",
                         d.file("lz.csv")});
    EXPECT_EQ(lz.code, 0);
    EXPECT_EQ(slurp(d.file("lz.csv")).rfind("n,bits,ratio,label\n", 0), 0u);
}

TEST(Cli, SeqRepeatChoose) {
    const auto r = invoke({"seq", "repeat", "--block", ":01", "--block", "1:0", "--choose"});
    EXPECT_EQ(r.code, 0);
    const auto recipe = choose_repetition_counts({{"", "01"}, {"1", "0"}}, 2);
    EXPECT_EQ(r.out, repetitive_stream(recipe).str() + "\n");
    EXPECT_EQ(invoke({"seq", "repeat", "--block", ":01"}).code, 2);
}

TEST(Cli, SeqBuildSTnRandom) {
    const auto s = invoke({"seq", "buildS", "--k", "2", "--v", "1", "--n-max", "6"});
    EXPECT_EQ(s.code, 0);
    EXPECT_EQ(s.out, build_S(2, 1, 6).str() + "\n");
    EXPECT_NE(s.err.find("skipped section 2"), std::string::npos);
    EXPECT_EQ(invoke({"seq", "buildS", "--k", "4", "--v", "4", "--n-max", "5"}).code, 2);
    EXPECT_EQ(invoke({"seq", "Tn", "--n", "2", "--k", "2"}).out, "00\n01\n10\n");
    EXPECT_EQ(invoke({"seq", "Tn", "--n", "4", "--k", "2", "--restricted"}).out, "0000\n0010\n0100\n");
    EXPECT_EQ(invoke({"seq", "random", "--length", "40", "--seed", "9"}).out, random_word(40, 9) + "\n");
}

TEST(Cli, PumpFindThenVerify) {
    TempDir d;
    std::ofstream(d.file("w.txt")) << random_word(2048, 12) << "\n";
    const auto f = invoke({"pump", "find", "--family", machine("push_pop_copier"), machine("pair_buffer"), "--input",
                        d.file("w.txt"), "-o", d.file("rec.txt")});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_EQ(slurp(d.file("rec.txt")).rfind("pump 1\nsplit ", 0), 0u);
    const auto v = invoke({"pump", "verify", "--family", machine("push_pop_copier"), machine("pair_buffer"), "--input",
                        d.file("w.txt"), "--record", d.file("rec.txt")});
    EXPECT_EQ(v.code, 0) << v.out << v.err;
    // a witness stretched by one symbol no longer describes the run
    std::string rec = slurp(d.file("rec.txt"));
    const auto line = rec.find("witness ");
    ASSERT_NE(line, std::string::npos);
    std::istringstream fields(rec.substr(line + 8, rec.find('\n', line) - line - 8));
    std::uint64_t x = 0, y = 0;
    fields >> x >> y;
    std::string rest;
    std::getline(fields, rest);
    rec.replace(line, rec.find('\n', line) - line,
                "witness " + std::to_string(x) + " " + std::to_string(y + 1) + rest);
    std::ofstream(d.file("bad.txt")) << rec;
    const auto bad = invoke({"pump", "verify", "--family", machine("push_pop_copier"), machine("pair_buffer"), "--input",
                          d.file("w.txt"), "--record", d.file("bad.txt")});
    EXPECT_EQ(bad.code, 1) << bad.out;
    // and the record does not fit a shorter word
    const auto shorter = invoke({"pump", "verify", "--family", machine("push_pop_copier"), machine("pair_buffer"),
                              "--word", random_word(100, 12), "--record", d.file("rec.txt")});
    EXPECT_EQ(shorter.code, 1);
}

TEST(Cli, PumpEndmarkedPreset) {
    TempDir d;
    const auto f = invoke({"pump", "find", "--preset", "E2", "--random", "1024", "--seed", "4", "--endmarked", "-o",
                        d.file("rec.txt")});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_NE(slurp(d.file("rec.txt")).find("mode endmarked"), std::string::npos);
    const auto v = invoke({"pump", "verify", "--preset", "E2", "--random", "1024", "--seed", "4", "--record",
                        d.file("rec.txt")});
    EXPECT_EQ(v.code, 0) << v.out << v.err;
    EXPECT_EQ(invoke({"pump", "find", "--preset", "E2", "--family", machine("identity"), "--word", "0"}).code, 2);
}

TEST(Cli, ExperimentLemma2) {
    const auto r = invoke({"experiment", "lemma2-limit", "--k", "3"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("ratio"), std::string::npos);
    EXPECT_EQ(r.out.substr(r.out.size() - 5), "PASS\n");
    // the CLI report is the library report
    PresetParams p;
    p.set("k", "3");
    EXPECT_EQ(r.out, run_preset("lemma2-limit", p).text());
}

TEST(Cli, ExperimentCsvDirAndFailures) {
    TempDir d;
    const auto r = invoke({"experiment", "lemma2-limit", "--k", "2", "--n", "4096", "--csv-dir", d.file("csv")});
    EXPECT_EQ(r.code, 0);
    const auto csv = slurp(d.file("csv") + "/lemma2-limit_unary_squeezer_k2.csv");
    EXPECT_EQ(csv.rfind("n,bits,ratio,label\n", 0), 0u);
    EXPECT_EQ(invoke({"experiment", "lemma2-limit", "--n", "100", "--tolerance", "0.00001"}).code, 1);
    EXPECT_EQ(invoke({"experiment", "lemma2-limit", "--nope", "1"}).code, 2);
    EXPECT_EQ(invoke({"experiment", "lemma2-limit", "--k"}).code, 2);
    EXPECT_EQ(invoke({"experiment", "unknown"}).code, 2);
}

TEST(Cli, ZooListAndUnknown) {
    const auto r = invoke({"zoo", "--list"});
    EXPECT_NE(r.out.find("zone_k4_v4_vp16"), std::string::npos);
    EXPECT_EQ(invoke({"zoo", "nothing"}).code, 2);
}
