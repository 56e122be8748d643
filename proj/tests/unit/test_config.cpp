#include <gtest/gtest.h>

#include "marl_lob/config.hpp"

using namespace marl_lob;

TEST(Config, DefaultsAreValid) {
    RunConfig c;
    EXPECT_NO_THROW(validate_config(c));
    EXPECT_EQ(c.case_config.case_id, 0);
    EXPECT_EQ(c.analysis.moments.resamples, 1000);
    EXPECT_DOUBLE_EQ(c.analysis.moments.confidence, 0.975);
}

TEST(Config, ParsesKeysCommentsAndWhitespace) {
    auto c = parse_config(R"(
# a comment
case = 5
episodes=40   # trailing comment
seeds = 3, 4
env.rate_lp = 6.5
learning.epsilon_decay = 0.97
analysis.hill_variant = classic
analysis.phase_tau = 12
record = all
)");
    EXPECT_EQ(c.case_config.case_id, 5);
    EXPECT_EQ(c.case_config.roster.size(), 2u);
    EXPECT_EQ(c.case_config.episodes, 40);
    EXPECT_EQ(c.case_config.seeds, (std::vector<std::uint64_t>{3, 4}));
    EXPECT_DOUBLE_EQ(c.case_config.env.rate_lp, 6.5);
    EXPECT_EQ(c.case_config.exec.learning.epsilon_decay, 0.97);
    EXPECT_EQ(c.analysis.moments.hill_variant, facts::HillVariant::Classic);
    EXPECT_EQ(c.analysis.phase_tau, 12);
    EXPECT_EQ(c.record, RecordMode::All);
}

TEST(Config, ErrorsNameTheLine) {
    auto expect_line = [](const std::string& text, const std::string& needle) {
        try {
            parse_config(text, "run.cfg");
            FAIL() << text;
        } catch (const ConfigError& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_line("case = 1\nbogus = 3\n", "run.cfg:2:");
    expect_line("episodes = ten\n", "run.cfg:1:");
    expect_line("\n\njust text\n", "run.cfg:3:");
    expect_line("case = 99\n", "valid cases are 0..12");
    expect_line("roster = 7I+\n", "run.cfg:1:");
    expect_line("record = sometimes\n", "run.cfg:1:");
}

TEST(Config, RangeValidation) {
    EXPECT_THROW(parse_config("episodes = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("env.cancel_rate = 2\n"), ConfigError);
    EXPECT_THROW(parse_config("exec.warmup_events = 50000\n"), ConfigError);
    EXPECT_THROW(parse_config("analysis.m_min = 4\nanalysis.m_max = 3\n"), ConfigError);
    EXPECT_THROW(parse_config("learning.alpha = 0\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST(Config, CustomRosterClearsCaseId) {
    RunConfig c;
    apply_setting(c, "roster", "4II-");
    EXPECT_EQ(c.case_config.case_id, -1);
    EXPECT_EQ(c.case_config.name, "custom");
    EXPECT_EQ(c.case_config.total_parent_bp(), kCaseBudgetBp);
    EXPECT_THROW(apply_setting(c, "nope", "1"), ConfigError);
}

TEST(Config, CanonicalTextRoundTrips) {
    for (const std::string text : {"case = 11\nenv.rate_lp = 4\n", "roster = 3I+,3II-\nname = mix\nseeds = 9\n",
                                   "case = 0\nlearning.epsilon_decay = 0.9\nanalysis.phase_tau = 7\n"}) {
        auto a = parse_config(text);
        auto b = parse_config(canonical_text(a));
        EXPECT_EQ(canonical_text(a), canonical_text(b));
        EXPECT_EQ(a.case_config.case_id, b.case_config.case_id);
        EXPECT_EQ(a.case_config.name, b.case_config.name);
        EXPECT_EQ(a.case_config.roster, b.case_config.roster);
    }
}

TEST(Config, CanonicalTextIgnoresOutput) {
    RunConfig a, b;
    b.out = "elsewhere";
    EXPECT_EQ(canonical_text(a), canonical_text(b));
    apply_setting(b, "env.n_lps", "7");
    EXPECT_NE(canonical_text(a), canonical_text(b));
}
