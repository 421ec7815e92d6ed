#include <gtest/gtest.h>

#include <sstream>

#include <pdlab/harness.hpp>

using namespace pdlab;

TEST(Harness, IdentityRatiosAreOne) {
    const auto s = build_S(2, 1, 8);
    const auto rows = ratio_series(make_identity(), s, s.total_length());
    ASSERT_FALSE(rows.empty());
    for (const auto& r : rows) EXPECT_DOUBLE_EQ(r.ratio, 1.0);
    EXPECT_EQ(rows.back().n, s.total_length());
}

TEST(Harness, OneRowPerCheckpointPlusLimit) {
    const auto s = repetitive_stream({{{"1", "01", 5}, {"", "0", 4}}});
    const auto rows = ratio_series_lz(s, 10);
    // checkpoints at 3, 5, 9 fall inside the limit; 10 is added
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].label, "block1.rep1");
    EXPECT_EQ(rows[3].n, 10u);
    EXPECT_EQ(rows[3].label, "");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].n, rows[i].n);
}

TEST(Harness, RowsAgreeWithDirectMeasurement) {
    const auto s = build_S(3, 2, 9);
    const std::string text = s.str();
    const auto pd = ratio_series(make_zone_compressor({3, 2, 4, std::nullopt}), s, text.size());
    const auto lz = ratio_series_lz(s, text.size());
    ASSERT_EQ(pd.size(), lz.size());
    for (std::size_t i = 0; i < pd.size(); ++i) {
        const auto pre = std::string_view(text).substr(0, pd[i].n);
        EXPECT_EQ(pd[i].bits, static_cast<double>(output_length(make_zone_compressor({3, 2, 4, std::nullopt}), pre)));
        EXPECT_EQ(lz[i].bits, static_cast<double>(lz_output_length(pre)));
    }
}

// Incremental plain-mode rows match fresh batch runs.
TEST(HarnessProperty, IncrementalEqualsBatch) {
    const auto s = repetitive_stream({{{"0", "0110", 40}, {"11", "10", 60}}});
    const std::string text = s.str();
    for (const auto& m : builtin_plain()) {
        for (const auto& r : ratio_series(m, s, text.size()))
            ASSERT_EQ(r.bits, static_cast<double>(run(m, std::string_view(text).substr(0, r.n)).output.size()))
                << m.name() << " at " << r.n;
    }
}

TEST(Harness, EndmarkedMachinesRerunPerCheckpoint) {
    const auto s = repetitive_stream({{{"", "0", 1000}}});
    const auto m = make_unary_squeezer(3);
    const auto rows = ratio_series(m, s, 1000);
    for (const auto& r : rows)
        EXPECT_EQ(r.bits, static_cast<double>(run_endmarked(m, std::string(r.n, '0')).output.size()));
}

TEST(Harness, TailEstimates) {
    std::vector<RatioRow> flat;
    for (std::uint64_t n = 1; n <= 10; ++n) flat.push_back({n, 0.5 * n, 0.5, ""});
    auto t = tail_estimates(flat);
    EXPECT_DOUBLE_EQ(t.liminf_estimate, t.limsup_estimate);
    EXPECT_EQ(t.rows_used, 6u);  // n = 5..10

    std::vector<RatioRow> wave;
    for (std::uint64_t n = 1; n <= 100; ++n) wave.push_back({n, 0, (n % 2 ? 0.2 : 0.8) + 1.0 / n, ""});
    double prev_lo = -1, prev_hi = 10;
    for (double b : {0.0, 0.25, 0.5, 0.75, 0.95}) {
        const auto e = tail_estimates(wave, b);
        EXPECT_LE(e.liminf_estimate, e.limsup_estimate);
        // narrowing the window can only raise the min and lower the max
        EXPECT_GE(e.liminf_estimate, prev_lo);
        EXPECT_LE(e.limsup_estimate, prev_hi);
        prev_lo = e.liminf_estimate;
        prev_hi = e.limsup_estimate;
    }
    EXPECT_THROW(tail_estimates({}), std::invalid_argument);
    EXPECT_THROW(tail_estimates(flat, 1.0), std::invalid_argument);
}

TEST(Harness, CsvFormat) {
    std::ostringstream o;
    write_csv(o, {{4, 3, 0.75, "a"}, {8, 5, 0.625, ""}});
    EXPECT_EQ(o.str(), "n,bits,ratio,label\n4,3,0.75,a\n8,5,0.625,\n");
}

TEST(Harness, SqueezerTailApproachesInverseSquare) {
    for (std::uint64_t k : {2, 3}) {
        const auto s = repetitive_stream({{{"", "0", 100000}}});
        const auto t = tail_estimates(ratio_series(make_unary_squeezer(k), s, 100000));
        EXPECT_NEAR(t.liminf_estimate, 1.0 / (k * k), 0.02 / (k * k));
    }
}

TEST(Harness, ZoneRatiosPeakAtFlagAfterX) {
    const auto s = build_S(4, 4, 12);
    const auto rows = ratio_series(make_zone_compressor({4, 4, 16, std::nullopt}), s, s.total_length());
    // within each section, the row at the end of a flag that follows an X zone
    // is at least as high as the rows on either side
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        if (rows[i].label.find(":flagX") == std::string::npos) continue;
        EXPECT_GE(rows[i].ratio, rows[i + 1].ratio) << rows[i].label;
        EXPECT_GE(rows[i].ratio, rows[i - 1].ratio) << rows[i].label;
    }
}

TEST(Harness, PresetsPassWithDefaults) {
    for (const auto& name : preset_names()) {
        const auto rep = run_preset(name);
        EXPECT_TRUE(rep.pass) << rep.text();
        EXPECT_NE(rep.text().find("note: ratios are measured on finite prefixes"), std::string::npos);
    }
}

TEST(Harness, ReportsAreReproducible) {
    PresetParams p;
    p.set("k", "2");
    p.set("n", "5000");
    EXPECT_EQ(run_preset("lemma2-limit", p).text(), run_preset("lemma2-limit", p).text());
    EXPECT_EQ(run_preset("lz-beats-pd").text(), run_preset("lz-beats-pd").text());
}

TEST(Harness, PresetParameterErrors) {
    PresetParams unknown;
    unknown.set("colour", "blue");
    EXPECT_THROW(run_preset("lemma2-limit", unknown), std::invalid_argument);
    PresetParams bad;
    bad.set("k", "three");
    EXPECT_THROW(run_preset("lemma2-limit", bad), std::invalid_argument);
    EXPECT_THROW(run_preset("no-such-preset"), std::invalid_argument);
    EXPECT_THROW(preset_family("F9"), std::invalid_argument);
}

TEST(Harness, LemmaTwoFailsWhenToleranceIsTiny) {
    PresetParams p;
    p.set("n", "1000");
    p.set("tolerance", "0.0001");
    EXPECT_FALSE(run_preset("lemma2-limit", p).pass);
}

TEST(Harness, CorruptionSendsZoneMachineToErrorState) {
    const auto s = build_S(4, 4, 10);
    const auto cc = corrupt_y_zone(make_zone_compressor({4, 4, 16, std::nullopt}), s, "S10:Y2", "S10:flagX2");
    EXPECT_TRUE(cc.reached_error_state);
    EXPECT_TRUE(cc.copies_afterwards);
}
