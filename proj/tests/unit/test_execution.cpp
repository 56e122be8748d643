#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include <boost/random/uniform_int_distribution.hpp>

#include "marl_lob/execution.hpp"
#include "oracles/oracles.hpp"

using namespace marl_lob;

TEST(Twap, EqualChildrenRemainderLast) {
    auto s = build_twap_schedule(103, 10, 1000);
    ASSERT_EQ(s.decision_points.size(), 10u);
    EXPECT_EQ(s.decision_points[0], 0);
    EXPECT_EQ(s.decision_points[9], 900);
    for (int i = 0; i < 9; ++i) EXPECT_EQ(s.child_volumes[static_cast<std::size_t>(i)], 10);
    EXPECT_EQ(s.child_volumes[9], 13);
    EXPECT_THROW(build_twap_schedule(5, 10, 100), std::invalid_argument);
    EXPECT_THROW(build_twap_schedule(5, 0, 100), std::invalid_argument);
}

TEST(Twap, VolumesSumToParent) {
    for (Volume x = 1; x < 300; x += 7)
        for (int n = 1; n <= std::min<Volume>(x, 25); ++n) {
            auto s = build_twap_schedule(x, n, 5000);
            Volume sum = 0;
            for (auto v : s.child_volumes) sum += v;
            ASSERT_EQ(sum, x);
            ASSERT_TRUE(std::is_sorted(s.decision_points.begin(), s.decision_points.end()));
        }
}

TEST(DiscreteState, IndexIsBijection) {
    std::set<int> seen;
    for (int i = 1; i <= 5; ++i)
        for (int t = 1; t <= 5; ++t)
            for (int v = 1; v <= 5; ++v)
                for (int s = 1; s <= 5; ++s) {
                    DiscreteState d{i, t, v, s};
                    const int k = d.index();
                    ASSERT_GE(k, 0);
                    ASSERT_LT(k, kStateCount);
                    ASSERT_EQ(DiscreteState::from_index(k), d);
                    seen.insert(k);
                }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(kStateCount));
    EXPECT_THROW(DiscreteState::from_index(kStateCount), std::out_of_range);
}

TEST(DiscreteState, BucketEdgesAreRightClosed) {
    StateSpec spec{100, 1000};
    auto at = [&](Volume rem, Seq el, std::optional<double> vol, std::optional<double> spr) {
        return discretize_state(Observation{rem, el, vol, spr}, spec);
    };
    EXPECT_EQ(at(20, 0, 31, 1).inventory, 1);
    EXPECT_EQ(at(21, 0, 31, 1).inventory, 2);
    EXPECT_EQ(at(100, 0, 31, 1).inventory, 5);
    EXPECT_EQ(at(0, 200, 31, 1).time, 1);
    EXPECT_EQ(at(0, 201, 31, 1).time, 2);
    EXPECT_EQ(at(0, 5000, 31, 1).time, 5);
    EXPECT_EQ(at(0, 0, 31, 1).volume, 1);
    EXPECT_EQ(at(0, 0, 32, 1).volume, 2);
    EXPECT_EQ(at(0, 0, 5209, 1).volume, 4);
    EXPECT_EQ(at(0, 0, 5210, 1).volume, 5);
    EXPECT_EQ(at(0, 0, 1, 1).spread, 1);
    EXPECT_EQ(at(0, 0, 1, 3).spread, 3);
    EXPECT_EQ(at(0, 0, 1, 7).spread, 4);
    EXPECT_EQ(at(0, 0, 1, 8).spread, 5);
    // Absent sides.
    EXPECT_EQ(at(0, 0, std::nullopt, std::nullopt).volume, 1);
    EXPECT_EQ(at(0, 0, std::nullopt, std::nullopt).spread, 5);
}

TEST(Actions, CountsAndDecoding) {
    EXPECT_EQ(action_count(ExecutionType::S), 1);
    EXPECT_EQ(action_count(ExecutionType::I), 9);
    EXPECT_EQ(action_count(ExecutionType::II), 15);
    EXPECT_DOUBLE_EQ(std::get<MarketAction>(decode_action(ExecutionType::I, 0)).multiplier, 0.0);
    EXPECT_DOUBLE_EQ(std::get<MarketAction>(decode_action(ExecutionType::I, 8)).multiplier, 2.0);
    auto a = std::get<LimitAction>(decode_action(ExecutionType::II, 9));
    EXPECT_DOUBLE_EQ(a.depth, 0.01);
    EXPECT_DOUBLE_EQ(a.rate, 100);
    auto b = std::get<LimitAction>(decode_action(ExecutionType::II, 14));
    EXPECT_DOUBLE_EQ(b.depth, 1);
    EXPECT_DOUBLE_EQ(b.rate, 1);
    EXPECT_THROW(decode_action(ExecutionType::I, 9), std::out_of_range);
}

TEST(TypeI, MultipleOfChildCappedAtRemaining) {
    ParentOrder p{1, Side::Ask, 100, 1000, 90};
    EXPECT_EQ(apply_action_type_i(1.0, 8, p)->volume, 8);
    EXPECT_EQ(apply_action_type_i(2.0, 8, p)->volume, 10);
    EXPECT_EQ(apply_action_type_i(0.25, 8, p)->volume, 2);
    EXPECT_EQ(apply_action_type_i(0.25, 8, p)->side, Side::Ask);
    EXPECT_FALSE(apply_action_type_i(0.0, 8, p));
    p.executed = 100;
    EXPECT_FALSE(apply_action_type_i(1.0, 8, p));
}

TEST(TypeII, LimitOrdersRestPassively) {
    TypeIIContext ctx{10, 50000, 2500, 10.0};
    ParentOrder buy{1, Side::Bid, 100, 1000, 0};
    ParentOrder sell{1, Side::Ask, 100, 1000, 0};
    Quotes q{Price{100}, Price{102}, 5, 5};
    auto deep_buy = apply_action_type_ii(LimitAction{1.0, 10}, q, buy, ctx);
    EXPECT_EQ(std::get<LimitIntent>(deep_buy->order).price, Price{91});
    EXPECT_EQ(deep_buy->next_decision_in, 5000);
    auto shallow_sell = apply_action_type_ii(LimitAction{0.01, 100}, q, sell, ctx);
    EXPECT_EQ(std::get<LimitIntent>(shallow_sell->order).price, Price{102});
    EXPECT_EQ(shallow_sell->next_decision_in, 500);
    // A narrow spread cannot push a shallow buy through the ask.
    Quotes tight{Price{100}, Price{101}, 5, 5};
    auto shallow_buy = apply_action_type_ii(LimitAction{0.01, 1}, tight, buy, ctx);
    EXPECT_LT(std::get<LimitIntent>(shallow_buy->order).price, Price{101});
    EXPECT_FALSE(apply_action_type_ii(LimitAction{1.0, 1}, Quotes{Price{100}, std::nullopt, 5, 0}, buy, ctx));
    auto mo = apply_action_type_ii(MarketAction{1.0}, Quotes{}, buy, ctx);
    EXPECT_EQ(std::get<MarketIntent>(mo->order).volume, 10);
    EXPECT_EQ(mo->next_decision_in, 2500);
}

TEST(Reward, ZeroAtEqualVwapsAndNoInventory) {
    RewardParams p;
    EXPECT_EQ(reward_from_vwaps(Side::Bid, 101.5, 101.5, 0, 10, 0.7, p), 0.0);
    EXPECT_EQ(reward_from_vwaps(Side::Ask, 101.5, 101.5, 0, 10, 0.7, p), 0.0);
}

TEST(Reward, SlippageAntisymmetric) {
    for (double a : {99.0, 100.0, 101.3})
        for (double b : {98.0, 100.0, 102.7}) EXPECT_EQ(slippage(Side::Bid, a, b), -slippage(Side::Ask, a, b));
    // A buyer paying above the rest of the market is penalised.
    EXPECT_LT(slippage(Side::Bid, 101.0, 100.0), 0.0);
}

TEST(Reward, PenaltyStrictlyIncreasing) {
    RewardParams p{0.01, 1.0};
    for (double t = 0.0; t < 1.0; t += 0.05) EXPECT_LT(penalty(10, 5, t, p), penalty(10, 5, t + 0.05, p));
    for (Volume x = 0; x < 50; ++x) EXPECT_LT(penalty(x, 5, 0.3, p), penalty(x + 1, 5, 0.3, p));
    EXPECT_DOUBLE_EQ(penalty(10, 0, 0.0, p), 0.1);
    EXPECT_DOUBLE_EQ(penalty(10, 5, 0.5, p), 2.0 * 0.01 * std::exp(0.5));
}

TEST(Reward, ComputedFromTradeHistory) {
    std::vector<Trade> t{Trade{Price{100}, 10, Side::Bid, 1, 2, 0, 0, 0}, Trade{Price{110}, 10, Side::Bid, 3, 4, 0, 0, 1}};
    RewardParams p;
    const double want = -std::log(105.0 / 110.0) - penalty(3, 10, 0.5, p);
    EXPECT_DOUBLE_EQ(compute_reward(t, 1, Side::Bid, 3, 10, 0.5, p), want);
    EXPECT_THROW(compute_reward(std::span<const Trade>(t.data(), 1), 1, Side::Bid, 0, 1, 0, p), std::domain_error);
}

TEST(QTable, ArgmaxLowestIndexOnTies) {
    QTable q(3, 4);
    EXPECT_EQ(q.argmax(0), 0);
    q.set(1, 2, 1.0);
    q.set(1, 3, 1.0);
    EXPECT_EQ(q.argmax(1), 2);
    EXPECT_DOUBLE_EQ(q.max_value(1), 1.0);
    EXPECT_THROW(q.value(3, 0), std::out_of_range);
    EXPECT_THROW(QTable(0, 1), std::invalid_argument);
}

TEST(SelectAction, GreedyAtZeroEpsilonUniformAtOne) {
    QTable q(1, 5);
    q.set(0, 3, 2.0);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(select_action(q, 0, 0.0, rng), 3);
    std::array<int, 5> hits{};
    for (int i = 0; i < 50000; ++i) ++hits[static_cast<std::size_t>(select_action(q, 0, 1.0, rng))];
    for (int h : hits) EXPECT_NEAR(h / 50000.0, 0.2, 0.01);
    EXPECT_THROW(select_action(q, 0, 1.5, rng), std::invalid_argument);
}

TEST(QUpdate, SingleStep) {
    QTable q(2, 2);
    q.set(1, 1, 4.0);
    QLearningParams p;
    q_update(q, 0, 0, 1.0, 1, false, p);
    EXPECT_DOUBLE_EQ(q.value(0, 0), 0.1 * (1.0 + 4.0));
    q_update(q, 0, 1, 1.0, 1, true, p);
    EXPECT_DOUBLE_EQ(q.value(0, 1), 0.1);
}

// Tabular Q-learning with uniform exploration converges to the optimal
// action values of a deterministic finite-horizon MDP.
TEST(QUpdate, ConvergesToValueIteration) {
    std::vector<std::vector<oracle::Transition>> mdp{
        {{1, -1.0}, {2, 0.5}, {-1, 0.2}},
        {{3, 2.0}, {-1, 1.0}, {2, -0.5}},
        {{3, 0.0}, {-1, -1.0}, {-1, 0.3}},
        {{-1, 1.5}, {-1, -2.0}, {-1, 0.0}},
    };
    const auto want = oracle::value_iteration_q(mdp);
    QTable q(4, 3);
    QLearningParams p;
    Rng rng(11);
    boost::random::uniform_int_distribution<int> pick(0, 2);
    for (int ep = 0; ep < 20000; ++ep) {
        int s = ep % 4;
        while (s >= 0) {
            const int a = pick(rng);
            const auto& t = mdp[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
            q_update(q, s, a, t.reward, std::max(t.next, 0), t.next < 0, p);
            s = t.next;
        }
    }
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 3; ++a)
            EXPECT_NEAR(q.value(s, a), want[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)], 1e-6);
}

TEST(Epsilon, DecaysToFloorOnLastEpisode) {
    QLearningParams p;
    EXPECT_DOUBLE_EQ(epsilon_for_episode(p, 0, 100), 1.0);
    EXPECT_NEAR(epsilon_for_episode(p, 99, 100), 0.05, 1e-12);
    for (int e = 1; e < 100; ++e) EXPECT_LT(epsilon_for_episode(p, e, 100), epsilon_for_episode(p, e - 1, 100));
    p.epsilon_decay = 0.5;
    EXPECT_DOUBLE_EQ(epsilon_for_episode(p, 2, 100), 0.25);
    EXPECT_DOUBLE_EQ(epsilon_for_episode(p, 50, 100), 0.05);
    p.epsilon_decay = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(EpisodeReturn, Sums) {
    std::vector<double> r{1.0, -0.5, 0.25};
    EXPECT_DOUBLE_EQ(episode_return(r), 0.75);
    EXPECT_EQ(episode_return({}), 0.0);
}
