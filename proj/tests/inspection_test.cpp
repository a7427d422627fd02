#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coopnav/inspection.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"

using namespace coopnav;
using testing_graphs::make_graph;

namespace {

// u0..u3 on a unit line plus a free vertex x above the middle.
Graph line_with_uav() {
  return make_graph({{"u0", 0, 0}, {"u1", 1, 0}, {"u2", 2, 0}, {"u3", 3, 0}, {"x", 1.5, 0.5}},
                    {{"u0", "u1"}, {"u1", "u2"}, {"u2", "u3"}});
}

SuffixPath whole_line(const Graph& g, std::size_t m) {
  std::vector<VertexIndex> vs;
  for (std::size_t r = 0; r <= m; ++r) vs.push_back(g.vertex_index("u" + std::to_string(r)));
  return SuffixPath(g, vs);
}

}  // namespace

TEST(PlanInspection, UavOffTheLine) {
  const Graph g = line_with_uav();
  const SuffixPath suffix = whole_line(g, 3);
  const InspectionPlan plan = plan_inspection(g, suffix, g.vertex_index("x"), 1.0);
  EXPECT_EQ(plan.start, 0u);
  EXPECT_EQ(plan.stop, 3u);
  EXPECT_FALSE(plan.connector);
  EXPECT_EQ(plan.deadhead_length, 0.0);
  EXPECT_NEAR(plan.t_total, 3.0 + std::sqrt(2.5), 1e-12);
  EXPECT_NEAR(plan.t_total, 4.5811, 1e-4);
}

TEST(PlanInspection, UavAtFirstVertex) {
  const Graph g = line_with_uav();
  const InspectionPlan plan = plan_inspection(g, whole_line(g, 3), g.vertex_index("u0"), 1.0);
  EXPECT_EQ(plan.start, 0u);
  EXPECT_EQ(plan.deadhead_length, 0.0);
  EXPECT_DOUBLE_EQ(plan.t_total, 3.0);
}

TEST(PlanInspection, TieGoesToEndpointStart) {
  // Start u0 (1 + 3) and start u1 stopping at u3 (0 + 3 + 1) both cost 4.
  const Graph g = line_with_uav();
  const SuffixPath suffix = whole_line(g, 3);
  const InspectionPlan plan = plan_inspection(g, suffix, g.vertex_index("u1"), 1.0);
  EXPECT_EQ(plan.start, 0u);
  EXPECT_DOUBLE_EQ(plan.t_total, 4.0);
  EXPECT_NEAR(oracle::inspection_time(g, {0, 1, 2, 3}, g.vertex_index("u1"), 1.0), 4.0, 1e-12);
}

TEST(PlanInspection, InteriorStartWins) {
  // A near-closed loop with the UAV at its far corner: start there, sweep one
  // way, hop the 1 m gap between the ends, sweep back.
  const Graph g = make_graph(
      {{"u0", 0, 0}, {"u1", 10, 0}, {"u2", 10, 10}, {"u3", 0, 10}, {"u4", 0, 1}},
      {{"u0", "u1"}, {"u1", "u2"}, {"u2", "u3"}, {"u3", "u4"}});
  const SuffixPath loop = whole_line(g, 4);
  const InspectionPlan plan = plan_inspection(g, loop, g.vertex_index("u2"), 1.0);
  EXPECT_EQ(plan.start, 2u);
  EXPECT_EQ(plan.stop, 2u);
  ASSERT_TRUE(plan.connector);
  EXPECT_EQ(plan.connector->first, 0u);
  EXPECT_EQ(plan.connector->second, 4u);
  EXPECT_DOUBLE_EQ(plan.t_total, 39.0 + 1.0);
  EXPECT_NEAR(plan.t_total, oracle::inspection_time(g, {0, 1, 2, 3, 4}, 2, 1.0), 1e-12);
}

TEST(PlanInspection, EmptySuffix) {
  const Graph g = testing_graphs::unit_line(2);
  const SuffixPath suffix(g, std::vector<VertexIndex>{2});
  const InspectionPlan plan = plan_inspection(g, suffix, 0, 1.0);
  EXPECT_EQ(plan.t_total, 0.0);
  const InspectionWalk walk = expand_euler_walk(suffix, plan);
  EXPECT_EQ(walk.vertices, (std::vector<VertexIndex>{2}));
  EXPECT_TRUE(walk.steps.empty());
  EXPECT_EQ(oracle::inspection_time(g, {2}, 0, 1.0), 0.0);
}

TEST(DeadheadOptions, UnitLine) {
  const Graph g = line_with_uav();
  const auto opts = interior_deadhead_options(g, whole_line(g, 3), 1);
  ASSERT_EQ(opts.size(), 3u);
  EXPECT_EQ(opts[0].stop, 0u);
  EXPECT_DOUBLE_EQ(opts[0].cost, 2.0);
  EXPECT_EQ(opts[1].stop, 3u);
  EXPECT_DOUBLE_EQ(opts[1].cost, 1.0);
  EXPECT_EQ(opts[2].stop, 1u);
  EXPECT_DOUBLE_EQ(opts[2].cost, 3.0);
  EXPECT_THROW(interior_deadhead_options(g, whole_line(g, 3), 0), Error);
  EXPECT_THROW(interior_deadhead_options(g, whole_line(g, 3), 3), Error);
}

TEST(DeadheadOptions, TwoEdgeSuffix) {
  const Graph g = make_graph({{"a", 0, 0}, {"b", 3, 0}, {"c", 3, 4}}, {{"a", "b"}, {"b", "c"}});
  const auto opts = interior_deadhead_options(g, SuffixPath(g, std::vector<VertexIndex>{0, 1, 2}), 1);
  EXPECT_DOUBLE_EQ(opts[0].cost, motion_weight(g, 1, 2));
  EXPECT_DOUBLE_EQ(opts[1].cost, motion_weight(g, 0, 1));
  EXPECT_DOUBLE_EQ(opts[2].cost, motion_weight(g, 0, 2));
  EXPECT_DOUBLE_EQ(opts[2].cost, 5.0);
}

TEST(DeadheadOptions, MirrorSymmetry) {
  const Graph g = make_graph({{"a", 0, 0}, {"b", 1, 0}, {"c", 3, 0}, {"d", 6, 0}},
                             {{"a", "b"}, {"b", "c"}, {"c", "d"}});
  const auto fwd = interior_deadhead_options(g, SuffixPath(g, std::vector<VertexIndex>{0, 1, 2, 3}), 1);
  const auto rev = interior_deadhead_options(g, SuffixPath(g, std::vector<VertexIndex>{3, 2, 1, 0}), 2);
  EXPECT_DOUBLE_EQ(fwd[0].cost, rev[1].cost);
  EXPECT_DOUBLE_EQ(fwd[1].cost, rev[0].cost);
  EXPECT_DOUBLE_EQ(fwd[2].cost, rev[2].cost);
}

TEST(EulerWalk, ClosedLoopThroughConnector) {
  const Graph g = testing_graphs::unit_line(5);
  const SuffixPath suffix = whole_line(g, 5);
  InspectionPlan plan;
  plan.start = 2;
  plan.stop = 2;
  plan.connector = std::pair<std::size_t, std::size_t>{0, 5};
  const InspectionWalk walk = expand_euler_walk(suffix, plan);
  EXPECT_EQ(walk.vertices, (std::vector<VertexIndex>{2, 1, 0, 5, 4, 3, 2}));
  ASSERT_EQ(walk.steps.size(), 6u);
  EXPECT_TRUE(walk.steps[2].deadhead);
  for (std::size_t s : {0u, 1u, 3u, 4u, 5u}) EXPECT_FALSE(walk.steps[s].deadhead);
}

TEST(EulerWalk, SingleSweep) {
  const Graph g = testing_graphs::unit_line(4);
  const SuffixPath suffix = whole_line(g, 4);
  InspectionPlan plan;
  plan.start = 0;
  plan.stop = 4;
  EXPECT_EQ(expand_euler_walk(suffix, plan).vertices, (std::vector<VertexIndex>{0, 1, 2, 3, 4}));
  plan.start = 4;
  plan.stop = 0;
  EXPECT_EQ(expand_euler_walk(suffix, plan).vertices, (std::vector<VertexIndex>{4, 3, 2, 1, 0}));
  plan.stop = 2;
  EXPECT_THROW(expand_euler_walk(suffix, plan), Error);
}

TEST(PlanInspection, AgreesWithOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t l = 1 + trial % 8;
    const auto inst = oracle::random_chain(rng, l, 2);
    const VertexIndex uav = rng() % inst.graph.vertex_count();
    const double v_a = 1.0 + static_cast<double>(rng() % 40);
    const SuffixPath suffix(inst.graph, inst.chain);
    const InspectionPlan plan = plan_inspection(inst.graph, suffix, uav, v_a);
    EXPECT_NEAR(plan.t_total, oracle::inspection_time(inst.graph, inst.chain, uav, v_a), 1e-9);

    // The expanded walk covers every edge once and measures L_R + D.
    const InspectionWalk walk = expand_euler_walk(suffix, plan);
    double flown = 0.0;
    std::size_t inspected = 0;
    for (const WalkStep& st : walk.steps) {
      if (st.deadhead) {
        flown += deadhead_cost(inst.graph, st.from, st.to, DeadheadRule::cheapest_hop);
      } else {
        flown += inst.graph.edge(inst.graph.edge_between(st.from, st.to)).length;
        ++inspected;
      }
    }
    EXPECT_EQ(inspected, l);
    EXPECT_NEAR(flown, suffix.total_length() + plan.deadhead_length, 1e-9);
    EXPECT_EQ(walk.vertices.front(), suffix.at(plan.start));
    EXPECT_EQ(walk.vertices.back(), suffix.at(plan.stop));

    // A faster UAV never takes longer.
    EXPECT_LE(plan_inspection(inst.graph, suffix, uav, 2 * v_a).t_total, plan.t_total);
  }
}
