#include <gtest/gtest.h>

#include <cmath>

#include "marl_lob/environment.hpp"

using namespace marl_lob;

TEST(EnvironmentParams, ValidateNamesField) {
    EnvironmentParams p;
    EXPECT_NO_THROW(p.validate());
    p.cancel_rate = 1.0;
    try {
        p.validate();
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("cancel_rate"), std::string::npos);
    }
    p = {};
    p.lp_depth_min = 5;
    p.lp_depth_max = 4;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.session_events = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Ledger, MarksAtMid) {
    Ledger l;
    l.on_fill(Side::Bid, Price{100}, 10);
    l.on_fill(Side::Ask, Price{105}, 4);
    EXPECT_EQ(l.inventory, 6);
    EXPECT_EQ(l.cash, -1000 + 420);
    EXPECT_DOUBLE_EQ(l.mark(110.0), -580.0 + 660.0);
}

TEST(SampleVolume, PositiveAndLognormal) {
    EnvironmentParams p;
    Rng rng(1);
    double log_sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const Volume v = sample_order_volume(p, rng);
        ASSERT_GE(v, 1);
        log_sum += std::log(static_cast<double>(v));
    }
    // Rounding shifts the log-mean only slightly at these sizes.
    EXPECT_NEAR(log_sum / n, p.volume_log_mean, 0.05);
}

TEST(Fundamentalist, TradesTowardValue) {
    EnvironmentParams p;
    p.fundamental_trend = 0.0;
    Rng rng(2);
    FundamentalistAgent a{1, Price{105}, {}};
    Quotes q{Price{99}, Price{101}, 1, 1};
    EXPECT_EQ(fundamentalist_decide(a, q, 0.0, p, rng)->side, Side::Bid);
    a.private_value = Price{95};
    EXPECT_EQ(fundamentalist_decide(a, q, 0.0, p, rng)->side, Side::Ask);
    a.private_value = Price{100};
    EXPECT_FALSE(fundamentalist_decide(a, q, 0.0, p, rng));
    EXPECT_FALSE(fundamentalist_decide(a, Quotes{Price{99}, std::nullopt, 1, 0}, 0.0, p, rng));
}

TEST(Fundamentalist, TrendRaisesValueOverSession) {
    EnvironmentParams p;
    p.fundamental_trend = 0.01;
    Rng rng(3);
    FundamentalistAgent a{1, Price{10000}, {}};
    Quotes q{Price{10049}, Price{10051}, 1, 1};
    EXPECT_EQ(fundamentalist_decide(a, q, 0.0, p, rng)->side, Side::Ask);
    EXPECT_EQ(fundamentalist_decide(a, q, 1.0, p, rng)->side, Side::Bid);
}

TEST(Chartist, FollowsEwmaSign) {
    EnvironmentParams p;
    p.chartist_ewma_lambda = 0.5;
    Rng rng(4);
    ChartistAgent c;
    EXPECT_EQ(chartist_decide(c, 0.02, p, rng)->side, Side::Bid);
    EXPECT_DOUBLE_EQ(c.ewma_return, 0.01);
    EXPECT_EQ(chartist_decide(c, -0.005, p, rng)->side, Side::Bid);
    EXPECT_DOUBLE_EQ(c.ewma_return, 0.0025);
    EXPECT_EQ(chartist_decide(c, -0.01, p, rng)->side, Side::Ask);
    ChartistAgent flat;
    EXPECT_FALSE(chartist_decide(flat, 0.0, p, rng));
}

TEST(LiquidityProvider, AskProbabilityFollowsImbalance) {
    EXPECT_DOUBLE_EQ(lp_ask_probability(Quotes{}), 0.5);
    EXPECT_DOUBLE_EQ(lp_ask_probability(Quotes{Price{1}, Price{2}, 30, 10}), 0.75);
}

TEST(LiquidityProvider, NeverCrossesAndRespectsCap) {
    EnvironmentParams p;
    p.lp_depth_min = -5;
    Rng rng(5);
    LiquidityProviderAgent lp{7, {}, {}};
    const Quotes q{Price{100}, Price{101}, 20, 20};
    for (int i = 0; i < 2000; ++i) {
        auto intent = liquidity_provider_decide(lp, q, 100.5, p, rng);
        if (auto* l = std::get_if<LimitIntent>(&intent)) {
            if (l->side == Side::Bid)
                EXPECT_LT(l->price, *q.ask);
            else
                EXPECT_GT(l->price, *q.bid);
        }
    }
    for (OrderId i = 1; i <= static_cast<OrderId>(p.lp_max_live_orders); ++i) lp.live_orders.push_back(i);
    for (int i = 0; i < 100; ++i)
        EXPECT_TRUE(std::holds_alternative<CancelIntent>(liquidity_provider_decide(lp, q, 100.5, p, rng)));
    lp.forget(3);
    EXPECT_EQ(lp.live_orders.size(), static_cast<std::size_t>(p.lp_max_live_orders - 1));
    lp.forget(999);
    EXPECT_EQ(lp.live_orders.size(), static_cast<std::size_t>(p.lp_max_live_orders - 1));
}

TEST(LiquidityProvider, SeedsEmptyBookAroundReference) {
    EnvironmentParams p;
    Rng rng(6);
    LiquidityProviderAgent lp{7, {}, {}};
    for (int i = 0; i < 500; ++i) {
        auto intent = liquidity_provider_decide(lp, Quotes{}, 1000.0, p, rng);
        if (auto* l = std::get_if<LimitIntent>(&intent)) {
            if (l->side == Side::Bid)
                EXPECT_LT(l->price.ticks, 1000);
            else
                EXPECT_GT(l->price.ticks, 1000);
        }
    }
}

TEST(EventScheduler, ClassFrequenciesFollowRates) {
    EnvironmentParams p;
    p.session_events = 70000;
    EventScheduler s(p);
    auto probs = s.class_probabilities();
    EXPECT_DOUBLE_EQ(probs[0] + probs[1] + probs[2], 1.0);
    EXPECT_DOUBLE_EQ(probs[2], p.rate_lp / (p.rate_fundamentalist + p.rate_chartist + p.rate_lp));
    Rng rng(7);
    std::array<int, 3> hits{};
    Seq expected = 0;
    while (auto e = s.next(rng)) {
        EXPECT_EQ(e->event, expected++);
        ++hits[static_cast<std::size_t>(e->agent_class)];
        if (expected == 10) {
            EXPECT_TRUE(s.claim());
            ++expected;
        }
    }
    EXPECT_EQ(expected, p.session_events);
    EXPECT_FALSE(s.claim());
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(hits[k] / 69999.0, probs[k], 0.01);
}

TEST(EventScheduler, EmptyClassesNeverPicked) {
    EnvironmentParams p;
    p.n_chartists = 0;
    p.session_events = 5000;
    EventScheduler s(p);
    EXPECT_EQ(s.class_probabilities()[1], 0.0);
    Rng rng(8);
    while (auto e = s.next(rng)) EXPECT_NE(e->agent_class, AgentClass::Chartist);
}
