#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <pdlab/pdc.hpp>
#include <pdlab/pdc_text.hpp>
#include <pdlab/sequences.hpp>
#include <pdlab/zoo.hpp>

using namespace pdlab;

namespace {

bool has_finding(const ValidationReport& r, Finding::Severity sev, const std::string& needle) {
    for (const auto& f : r.findings)
        if (f.severity == sev && f.message.find(needle) != std::string::npos) return true;
    return false;
}

// Counts 0s on the stack; a 1 outputs the stack depth in unary and clears it
// with lambda pops. Exercises lambda closure through state u.
PdcSpec unary_dump() {
    PdcBuilder b("unary_dump", "01", "za");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "s", "az", "");
    b.rule("s", Input::sym('0'), 'a', "s", "aa", "");
    b.rule("s", Input::sym('1'), 'z', "s", "z", "0");
    b.rule("s", Input::sym('1'), 'a', "u", "a", "0");
    b.rule("u", Input::lambda(), 'a', "u", "", "1");
    b.rule("u", Input::lambda(), 'z', "s", "z", "0");
    return b.build();
}

}  // namespace

TEST(PdcRun, IdentityCopiesInput) {
    const auto id = make_identity();
    for (std::string w : {"", "0", "1", "0110", "111000111"}) EXPECT_EQ(run(id, w).output, w);
}

TEST(PdcRun, LambdaClosureAfterEachStep) {
    const auto m = unary_dump();
    EXPECT_EQ(run(m, "0001").output, "01110");
    EXPECT_EQ(run(m, "1").output, "0");
    EXPECT_EQ(run(m, "0101").output, "010010");
    // the closure leaves the stack at the bottom symbol
    const auto r = run(m, "001");
    ASSERT_EQ(r.final_stack.size(), 1u);
    EXPECT_EQ(m.states()[r.final_state], "s");
}

TEST(PdcRun, StackIsBottomFirstAndPushIsTopFirst) {
    PdcBuilder b("stacker", "01", "zab");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "s", "abz", "");  // a ends on top
    b.rule("s", Input::sym('1'), 'a', "s", "a", "1");
    b.rule("s", Input::sym('1'), 'z', "s", "z", "0");
    b.rule("s", Input::sym('0'), 'a', "s", "a", "");
    const auto m = b.build();
    Execution ex(m);
    ex.feed('0');
    ASSERT_EQ(ex.height(), 3u);
    EXPECT_EQ(m.stack_char(ex.stack()[0]), 'z');
    EXPECT_EQ(m.stack_char(ex.stack()[1]), 'b');
    EXPECT_EQ(m.stack_char(ex.stack()[2]), 'a');
    EXPECT_EQ(m.stack_char(ex.top()), 'a');
}

TEST(PdcRun, UndefinedTransitionReportsPosition) {
    PdcBuilder b("partial", "01", "z");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "s", "z", "0");
    const auto m = b.build();
    try {
        run(m, "001");
        FAIL() << "expected RunError";
    } catch (const RunError& e) {
        EXPECT_EQ(e.kind(), RunError::Kind::Undefined);
        EXPECT_EQ(e.position(), 2u);
    }
}

TEST(PdcRun, BadSymbolIsRejected) {
    try {
        run(make_identity(), "01x");
        FAIL() << "expected RunError";
    } catch (const RunError& e) {
        EXPECT_EQ(e.kind(), RunError::Kind::BadSymbol);
    }
}

TEST(PdcRun, LambdaLoopExceedsBudget) {
    PdcBuilder b("spin", "01", "z");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "t", "z", "");
    b.rule("s", Input::sym('1'), 'z', "s", "z", "");
    b.rule("t", Input::lambda(), 'z', "t", "z", "0");
    const auto m = b.build();
    try {
        run(m, "10");
        FAIL() << "expected RunError";
    } catch (const RunError& e) {
        EXPECT_EQ(e.kind(), RunError::Kind::LambdaBudgetExceeded);
    }
    EXPECT_TRUE(has_finding(validate_spec(m), Finding::Severity::Error, "budget"));
}

TEST(PdcRun, EndmarkedRunNeedsEndmarkedMachine) {
    EXPECT_THROW(run_endmarked(make_identity(), "01"), RunError);
    EXPECT_EQ(run_endmarked(make_identity("01", true), "0110").output, "0110");
}

TEST(PdcRun, CompressPicksModeFromMachine) {
    EXPECT_EQ(compress(make_unary_squeezer(2), "000000000").output, "0100");
    EXPECT_EQ(compress(make_identity(), "0101").output, "0101");
}

TEST(PdcRun, RatioAtUsesUnitScale) {
    const auto r = ratio_at(make_pair_buffer(), "0110");
    EXPECT_EQ(r.output, 4u);
    EXPECT_EQ(r.input, 4u);
    EXPECT_DOUBLE_EQ(r.value(), 1.0);
    EXPECT_DOUBLE_EQ(ratio_at(make_pair_buffer(), "011").value(), 2.0 / 3.0);
    EXPECT_THROW(ratio_at(make_identity(), ""), std::invalid_argument);
}

TEST(PdcRun, TraceHasOneColumnPerPrefix) {
    const auto m = unary_dump();
    const auto d = run_traced(m, "0010");
    ASSERT_EQ(d.columns.size(), 5u);
    EXPECT_EQ(d.columns[0].stack.size(), 1u);
    EXPECT_EQ(d.columns[2].stack.size(), 3u);
    EXPECT_EQ(d.columns[3].stack.size(), 1u);
    EXPECT_EQ(d.columns[3].min_height, 1u);  // the lambda pops went down to the bottom
    EXPECT_EQ(d.columns[3].output_length, 4u);
}

// Incremental execution reproduces a batch run on every prefix.
TEST(PdcProperty, PrefixExtension) {
    std::mt19937_64 rng(11);
    for (const auto& m : builtin_plain()) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto w = random_word(64 + rng() % 64, rng());
            Execution ex(m);
            for (std::size_t i = 0; i < w.size(); ++i) {
                ex.feed(w[i]);
                if (i % 7 == 0) {
                    ASSERT_EQ(ex.output(), run(m, std::string_view(w).substr(0, i + 1)).output) << m.name();
                }
            }
        }
    }
}

TEST(PdcValidate, BuiltinsHaveNoErrors) {
    for (const auto& m : builtin_plain()) EXPECT_TRUE(validate_spec(m).ok()) << m.name();
    for (const auto& m : builtin_endmarked()) EXPECT_TRUE(validate_spec(m).ok()) << m.name();
}

TEST(PdcValidate, BottomRemoval) {
    PdcBuilder b("bad", "01", "z");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "s", "", "0");
    b.rule("s", Input::sym('1'), 'z', "s", "z", "1");
    EXPECT_TRUE(has_finding(validate_spec(b.build()), Finding::Severity::Error, "stack bottom"));
}

TEST(PdcValidate, LambdaAndInputRuleConflict) {
    PdcBuilder b("bad", "01", "z");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "s", "z", "0");
    b.rule("s", Input::lambda(), 'z', "t", "z", "");
    b.rule("t", Input::sym('0'), 'z', "t", "z", "0");
    b.rule("t", Input::sym('1'), 'z', "t", "z", "1");
    EXPECT_TRUE(has_finding(validate_spec(b.build()), Finding::Severity::Error, "nondeterminism"));
}

TEST(PdcValidate, EndmarkerRuleMayNotPush) {
    PdcBuilder b("bad", "01", "za");
    b.start("s", 'z').endmarked();
    b.rule("s", Input::sym('0'), 'z', "s", "z", "0");
    b.rule("s", Input::sym('1'), 'z', "s", "z", "1");
    b.rule("s", Input::end(), 'z', "s", "az", "");
    EXPECT_TRUE(has_finding(validate_spec(b.build()), Finding::Severity::Error, "pop or keep"));
}

TEST(PdcValidate, WarningsForPartialAndUnreachable) {
    PdcBuilder b("warn", "01", "z");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "s", "z", "0");
    b.rule("island", Input::sym('0'), 'z', "island", "z", "0");
    const auto rep = validate_spec(b.build());
    EXPECT_TRUE(rep.ok());
    EXPECT_TRUE(has_finding(rep, Finding::Severity::Warning, "unreachable"));
    EXPECT_TRUE(has_finding(rep, Finding::Severity::Warning, "not total"));
}

TEST(PdcBuilderTest, RejectsBadDefinitions) {
    EXPECT_THROW(PdcBuilder("x", "0-", "z"), PdcError);
    EXPECT_THROW(PdcBuilder("x", "00", "z"), PdcError);
    EXPECT_THROW(PdcBuilder("x", "0", "z"), PdcError);
    PdcBuilder b("x", "01", "z");
    b.rule("s", Input::sym('0'), 'z', "s", "z", "");
    EXPECT_THROW(b.rule("s", Input::sym('0'), 'z', "t", "z", ""), PdcError);
    EXPECT_THROW(b.rule("s", Input::sym('1'), 'q', "t", "z", ""), PdcError);
    EXPECT_THROW(b.build(), PdcError);  // no start state
    PdcBuilder plain("y", "01", "z");
    plain.start("s", 'z');
    plain.rule("s", Input::end(), 'z', "s", "z", "");
    EXPECT_THROW(plain.build(), PdcError);
}

TEST(PdcIl, IdentityIsLossless) {
    const auto rep = il_check(make_identity(), 6);
    EXPECT_TRUE(rep.lossless);
    EXPECT_EQ(rep.words_checked, 127u);
}

TEST(PdcIl, ForgetfulMachineIsCaught) {
    PdcBuilder b("zeros", "01", "z");
    b.start("s", 'z');
    b.rule("s", Input::sym('0'), 'z', "s", "z", "0");
    b.rule("s", Input::sym('1'), 'z', "s", "z", "0");
    const auto rep = il_check(b.build(), 4);
    ASSERT_FALSE(rep.lossless);
    ASSERT_TRUE(rep.witness);
    EXPECT_EQ(rep.witness->first.size(), rep.witness->second.size());
    EXPECT_NE(rep.witness->first, rep.witness->second);
}

TEST(PdcText, ParsesCommentsAndEmptyStrings) {
    const auto m = parse_pdc_string(R"(# a tiny machine
pdc flip
alphabet 01
stack z
start s z
mode plain
rule s 0 z -> s z out 1   # flip zeros
rule s 1 z -> s z out ''
)");
    EXPECT_EQ(m.name(), "flip");
    EXPECT_EQ(run(m, "0101").output, "11");
}

TEST(PdcText, ErrorsCarryLineNumbers) {
    try {
        parse_pdc_string("pdc x\nalphabet 01\nstack z\nstart s z\nrule s 0 z s z out 0\n");
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 5u);
    }
    EXPECT_THROW(parse_pdc_string("pdc x\nalphabet 01\nstack z\nstart s z\nmode sideways\n"), FormatError);
    EXPECT_THROW(parse_pdc_string("pdc x\nalphabet 01\nstack z\nstart s z\nrule s 00 z -> s z out 0\n"), FormatError);
}

TEST(PdcText, EmitParseRoundTrip) {
    std::vector<PdcSpec> all = builtin_plain();
    for (auto& m : builtin_endmarked()) all.push_back(m);
    for (const auto& m : all) {
        const std::string text = emit_pdc(m);
        const auto back = parse_pdc_string(text);
        EXPECT_EQ(emit_pdc(back), text) << m.name();
        EXPECT_EQ(back.state_count(), m.state_count());
        EXPECT_EQ(back.start_state(), m.start_state());
        for (const char* w : {"0", "0110", "000000000", "10101"}) EXPECT_EQ(compress(back, w).output, compress(m, w).output);
    }
}
