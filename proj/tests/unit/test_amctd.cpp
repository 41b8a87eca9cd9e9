#include <gtest/gtest.h>

#include <random>

#include "uwsn/amctd.hpp"

using namespace uwsn;

namespace {

ProtocolState state_for(std::uint32_t total, std::uint32_t dead) {
  return update_state(dead, initial_state(total, NetworkConfig{}));
}

NeighborEntry entry(NodeId id, double depth, double weight = 0.0, double residual = 0.0) {
  NeighborEntry e;
  e.id = id;
  e.depth = depth;
  e.weight = weight;
  e.residual_energy = residual;
  return e;
}

}  // namespace

TEST(Weight, Examples) {
  const NetworkConfig c;
  EXPECT_DOUBLE_EQ(weight(70.0, 100.0, Regime::Eq1, c), 0.175);
  EXPECT_EQ(weight(0.0, 100.0, Regime::Eq1, c), 0.0);
  EXPECT_NEAR(weight(35.0, 200.0, Regime::Eq2, c), 5.714285714285714, 1e-12);
  EXPECT_DOUBLE_EQ(weight(35.0, 200.0, Regime::Eq3, c), 0.175);
}

TEST(Weight, SingularitiesStayFinite) {
  const NetworkConfig c;
  EXPECT_TRUE(std::isfinite(weight(70.0, 500.0, Regime::Eq1, c)));
  EXPECT_TRUE(std::isfinite(weight(0.0, 200.0, Regime::Eq2, c)));
  EXPECT_TRUE(std::isfinite(weight(70.0, 0.0, Regime::Eq3, c)));
  // Ordering survives the clamp: the node at the bed outranks one just above it.
  EXPECT_GT(weight(70.0, 500.0, Regime::Eq1, c), weight(70.0, 499.0, Regime::Eq1, c));
}

TEST(Weight, Eq2Toggle) {
  NetworkConfig c;
  c.eq2_as_printed = false;
  EXPECT_DOUBLE_EQ(weight(35.0, 200.0, Regime::Eq2, c), 300.0 / 35.0);
}

TEST(Weight, NodeOverloadUsesRegime) {
  const NetworkConfig c;
  SensorNode n;
  n.position.depth = 100.0;
  n.residual_energy = 70.0;
  ProtocolState s = state_for(225, 0);
  EXPECT_DOUBLE_EQ(weight(n, s, c), 0.175);
  s = state_for(225, 200);
  EXPECT_DOUBLE_EQ(weight(n, s, c), 70.0 / 100.0);
}

TEST(UpdateState, Examples) {
  ProtocolState s = state_for(225, 0);
  EXPECT_EQ(s.regime, Regime::Eq1);
  EXPECT_EQ(s.depth_threshold, 60.0);
  EXPECT_EQ(s.courier_phase, CourierPhase::Initial);

  s = state_for(225, 5);
  EXPECT_EQ(s.regime, Regime::Eq2);
  EXPECT_EQ(s.depth_threshold, 40.0);
  EXPECT_EQ(s.courier_phase, CourierPhase::Initial);

  s = state_for(225, 201);
  EXPECT_EQ(s.regime, Regime::Eq3);
  EXPECT_EQ(s.depth_threshold, 20.0);
  EXPECT_EQ(s.courier_phase, CourierPhase::Sparse);
}

TEST(UpdateState, TriggersRoundUp) {
  const Triggers t = Triggers::for_network(225);
  EXPECT_EQ(t.weight_eq2, 5u);
  EXPECT_EQ(t.courier_sparse, 169u);
  EXPECT_EQ(t.weight_eq3, 180u);
  EXPECT_EQ(Triggers::for_network(100).weight_eq2, 2u);
  EXPECT_EQ(Triggers::for_network(10).weight_eq2, 1u);
  EXPECT_EQ(Triggers::for_network(20).courier_sparse, 15u);
}

TEST(UpdateState, IdempotentAndPure) {
  const ProtocolState base = state_for(225, 0);
  for (std::uint32_t d = 0; d <= 225; ++d) {
    const ProtocolState once = update_state(d, base);
    EXPECT_EQ(update_state(d, once), once);
    EXPECT_EQ(update_state(d, state_for(225, 225)), once);
  }
}

TEST(UpdateState, CustomSchedule) {
  NetworkConfig c;
  c.depth_threshold_schedule = {50, 30, 10};
  const ProtocolState s0 = initial_state(225, c);
  EXPECT_EQ(s0.depth_threshold, 50.0);
  EXPECT_EQ(update_state(5, s0).depth_threshold, 30.0);
  EXPECT_EQ(update_state(201, s0).depth_threshold, 10.0);
}

TEST(Eligible, ThresholdFilter) {
  SensorNode src;
  src.position.depth = 300.0;
  src.neighbor_table = {entry(1, 250), entry(2, 235), entry(3, 100)};
  const auto out = eligible_neighbors(src, state_for(225, 0));
  ASSERT_EQ(out.size(), 2u);
  std::vector<NodeId> ids{out[0].id, out[1].id};
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(ids, (std::vector<NodeId>{2, 3}));
}

TEST(Eligible, EmptyAndBoundary) {
  SensorNode src;
  src.position.depth = 300.0;
  EXPECT_TRUE(eligible_neighbors(src, state_for(225, 0)).empty());
  src.neighbor_table = {entry(1, 280)};
  const ProtocolState late = state_for(225, 220);
  ASSERT_EQ(late.depth_threshold, 20.0);
  EXPECT_EQ(eligible_neighbors(src, late).size(), 1u);
}

TEST(Eligible, CouriersBypassThresholdAndComeFirst) {
  SensorNode src;
  src.position.depth = 300.0;
  NeighborEntry far_courier = entry(501, 320);
  far_courier.is_courier = true;
  far_courier.distance = 80;
  NeighborEntry near_courier = entry(500, 310);
  near_courier.is_courier = true;
  near_courier.distance = 20;
  src.neighbor_table = {entry(1, 200, 5.0), far_courier, entry(2, 100, 9.0), near_courier, entry(3, 290, 99.0)};
  const auto out = eligible_neighbors(src, state_for(225, 0));
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].id, 500u);
  EXPECT_EQ(out[1].id, 501u);
  EXPECT_EQ(out[2].id, 2u);
  EXPECT_EQ(out[3].id, 1u);
}

TEST(Eligible, NeverBelowThreshold) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> depth(0.0, 500.0);
  for (std::uint32_t dead : {0u, 5u, 201u}) {
    const ProtocolState s = state_for(225, dead);
    for (int trial = 0; trial < 200; ++trial) {
      SensorNode src;
      src.position.depth = depth(gen);
      for (NodeId i = 0; i < 8; ++i) src.neighbor_table.push_back(entry(i, depth(gen), depth(gen)));
      for (const NeighborEntry& e : eligible_neighbors(src, s)) {
        EXPECT_GE(src.depth() - e.depth, s.depth_threshold);
      }
    }
  }
}

TEST(Select, Examples) {
  const ProtocolState s = state_for(225, 0);
  const std::vector<NeighborEntry> a{entry(1, 0, 0.175), entry(2, 0, 0.3)};
  EXPECT_EQ(select_forwarder(a, s), 2u);
  const std::vector<NeighborEntry> b{entry(1, 0, 0.2, 70), entry(2, 0, 0.2, 35)};
  EXPECT_EQ(select_forwarder(b, s), 1u);
  const std::vector<NeighborEntry> b2{entry(2, 0, 0.2, 35), entry(1, 0, 0.2, 70)};
  EXPECT_EQ(select_forwarder(b2, s), 1u);
  NeighborEntry courier = entry(300, 0, 0.0);
  courier.is_courier = true;
  const std::vector<NeighborEntry> c{entry(1, 0, 9.0), courier};
  EXPECT_EQ(select_forwarder(c, s), 300u);
  EXPECT_FALSE(select_forwarder({}, s).has_value());
  const std::vector<NeighborEntry> ids{entry(9, 0, 1.0, 1.0), entry(4, 0, 1.0, 1.0)};
  EXPECT_EQ(select_forwarder(ids, s), 4u);
}

// Scaling priority_value scales every weight of a regime by the same factor,
// so the chosen forwarder cannot change.
TEST(Select, InvariantToPriorityValue) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> residual(0.5, 70.0);
  std::uniform_real_distribution<double> depth(1.0, 499.0);
  std::uniform_real_distribution<double> prio(0.01, 100.0);
  for (Regime r : {Regime::Eq1, Regime::Eq2, Regime::Eq3}) {
    ProtocolState s;
    s.regime = r;
    for (int trial = 0; trial < 500; ++trial) {
      NetworkConfig base;
      NetworkConfig scaled;
      scaled.priority_value = prio(gen);
      std::vector<NeighborEntry> a;
      std::vector<NeighborEntry> b;
      for (NodeId i = 0; i < 6; ++i) {
        const double e = residual(gen);
        const double d = depth(gen);
        a.push_back(entry(i, d, weight(e, d, r, base), e));
        b.push_back(entry(i, d, weight(e, d, r, scaled), e));
      }
      EXPECT_EQ(select_forwarder(a, s), select_forwarder(b, s));
    }
  }
}

TEST(HoldingTime, Examples) {
  const NetworkConfig c;
  const std::vector<double> w{0.1, 0.2, 0.4};
  EXPECT_DOUBLE_EQ(holding_time(0.4, w, c), 0.0);
  EXPECT_DOUBLE_EQ(holding_time(0.1, w, c), 0.5);
  EXPECT_DOUBLE_EQ(holding_time(0.2, w, c), 0.5 * 0.2 / 0.3);
  const std::vector<double> one{0.3};
  EXPECT_DOUBLE_EQ(holding_time(0.3, one, c), 0.0);
}

TEST(HoldingTime, StrictlyDecreasingInWeight) {
  const NetworkConfig c;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> w(7);
    for (double& x : w) x = u(gen);
    std::sort(w.begin(), w.end());
    if (std::adjacent_find(w.begin(), w.end()) != w.end()) continue;
    for (std::size_t i = 1; i < w.size(); ++i) {
      EXPECT_GT(holding_time(w[i - 1], w, c), holding_time(w[i], w, c));
    }
    EXPECT_EQ(holding_time(w.back(), w, c), 0.0);
  }
}

TEST(Suppression, OverheardSameId) {
  DataPacket p;
  p.packet_id = 17;
  EXPECT_TRUE(suppress_on_overheard(p, 17));
  EXPECT_FALSE(suppress_on_overheard(p, 18));
}

TEST(Suppression, CourierAck) {
  const NetworkConfig c;
  const Vec3 courier{0, 0, 300};
  const std::vector<PendingHolder> holders{
      {1, {0, 0, 250}, 7, 3},   // in range, matching
      {2, {50, 0, 300}, 7, 3},  // in range, matching
      {3, {0, 0, 450}, 7, 3},   // out of range
      {4, {0, 0, 310}, 8, 3},   // other packet
  };
  EXPECT_EQ(courier_ack_suppression({7, 3}, holders, courier, c), (std::vector<NodeId>{1, 2}));
  EXPECT_TRUE(courier_ack_suppression({7, 3}, {}, courier, c).empty());
}
