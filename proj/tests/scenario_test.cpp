#include <gtest/gtest.h>

#include <cmath>

#include "coopnav/scenario.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"

using namespace coopnav;
using testing_graphs::make_graph;

TEST(Disjoint, ThreePaths) {
  const auto inst = gen_disjoint_adversarial({10, 12, 15}, 2);
  ASSERT_EQ(inst.paths.size(), 3u);
  const double want[] = {10, 12, 15};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(path_length(inst.graph, inst.paths[i]), want[i], 1e-12);
    EXPECT_EQ(inst.paths[i].vertices.front(), inst.scenario.s);
    EXPECT_EQ(inst.paths[i].vertices.back(), inst.scenario.g);
  }
  EXPECT_EQ(inst.scenario.blockages.size(), 2u);
  EXPECT_DOUBLE_EQ(offline_optimum(inst.graph, inst.scenario), 15.0);
  EXPECT_NO_THROW(validate(inst.graph, inst.scenario));
}

TEST(Disjoint, PathsShareOnlyEndpoints) {
  const auto inst = gen_disjoint_adversarial({3, 4, 5, 6}, 3);
  std::vector<int> uses(inst.graph.vertex_count(), 0);
  for (const Path& p : inst.paths) {
    for (std::size_t r = 1; r + 1 < p.vertices.size(); ++r) ++uses[p.vertices[r]];
  }
  for (int u : uses) EXPECT_LE(u, 1);
  EXPECT_EQ(inst.graph.edge_count(), 4u * 3u);
}

TEST(Disjoint, SinglePathHasNoBlockage) {
  const auto inst = gen_disjoint_adversarial({10}, 2);
  EXPECT_TRUE(inst.scenario.blockages.empty());
  EXPECT_DOUBLE_EQ(offline_optimum(inst.graph, inst.scenario), 10.0);
}

TEST(Disjoint, DamagePointNearGoal) {
  const auto inst = gen_disjoint_adversarial({10, 10}, 2, 0.001);
  ASSERT_EQ(inst.scenario.blockages.size(), 1u);
  const Blockage& b = inst.scenario.blockages[0];
  const Path& p1 = inst.paths[0];
  const VertexIndex last = p1.vertices[p1.vertices.size() - 2];
  EXPECT_EQ(b.edge, inst.graph.edge_between(last, inst.scenario.g));
  // The final edge starts at the path vertex, which sorts before "g".
  EXPECT_EQ(inst.graph.edge(b.edge).u, last);
  EXPECT_NEAR(b.fraction, 1.0 - 0.001, 1e-15);
  const double edge_len = inst.graph.edge(b.edge).length;
  EXPECT_NEAR(edge_len, 5.0, 1e-12);
  EXPECT_NEAR(damage_distance(inst.graph, b.edge, b.fraction, last), 0.999 * edge_len, 1e-12);
  EXPECT_NEAR(damage_distance(inst.graph, b.edge, b.fraction, inst.scenario.g), 0.001 * edge_len,
              1e-12);
}

TEST(Disjoint, RejectsBadLengths) {
  EXPECT_THROW(gen_disjoint_adversarial({}, 2), Error);
  EXPECT_THROW(gen_disjoint_adversarial({5, 4}, 2), Error);
  EXPECT_THROW(gen_disjoint_adversarial({5, -1}, 2), Error);
  EXPECT_THROW(gen_disjoint_adversarial({5, 6}, 0), Error);
}

namespace {

Graph four_cycle() {
  return make_graph({{"s", 0, 0}, {"a", 1, 1}, {"g", 2, 0}, {"b", 1, -1}},
                    {{"s", "a"}, {"a", "g"}, {"g", "b"}, {"b", "s"}});
}

}  // namespace

TEST(Random, ZeroProbabilityBlocksNothing) {
  const Graph g = four_cycle();
  const Scenario sc = gen_random(g, 0, 2, 0, 0.0, 42);
  EXPECT_TRUE(sc.blockages.empty());
}

TEST(Random, DeterministicPerSeed) {
  const Graph g = gen_grid_map({}, 3);
  const Scenario a = random_instance(g, 0.3, 11);
  const Scenario b = random_instance(g, 0.3, 11);
  EXPECT_EQ(a.s, b.s);
  EXPECT_EQ(a.g, b.g);
  EXPECT_EQ(a.blockages, b.blockages);
  const Scenario c = random_instance(g, 0.3, 12);
  EXPECT_FALSE(a.blockages == c.blockages && a.s == c.s && a.g == c.g);
}

TEST(Random, ViableMidpointBlockages) {
  const Graph g = four_cycle();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scenario sc = gen_random(g, 0, 2, 0, 0.5, seed);
    for (const Blockage& b : sc.blockages) EXPECT_EQ(b.fraction, 0.5);
    const double open = oracle::enumerate_shortest(g, 0, 2, sc.blocked_set(g));
    EXPECT_TRUE(std::isfinite(open));
  }
}

TEST(Random, UnreachablePair) {
  const Graph g = make_graph({{"s", 0, 0}, {"a", 1, 0}, {"g", 5, 5}}, {{"s", "a"}});
  try {
    gen_random(g, 0, 2, 0, 0.2, 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "unreachable goal");
  }
}

TEST(OfflineOptimum, Cases) {
  const Graph g = testing_graphs::detour_triangle();
  Scenario sc;
  sc.s = g.vertex_index("s");
  sc.g = g.vertex_index("g");
  sc.uav_start = sc.s;
  EXPECT_DOUBLE_EQ(offline_optimum(g, sc), 10.0);
  sc.blockages = {{g.edge_between(sc.s, sc.g), 0.5}};
  EXPECT_DOUBLE_EQ(offline_optimum(g, sc), 24.0);
}

TEST(Grid, ConnectedAndDeterministic) {
  const Graph a = gen_grid_map({}, 5);
  const Graph b = gen_grid_map({}, 5);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(a.vertex_count(), 100u);
  for (VertexIndex v = 1; v < a.vertex_count(); ++v) {
    EXPECT_TRUE(shortest_path(a, 0, v).has_value());
  }
}

TEST(ScenarioJson, RoundTrip) {
  const auto inst = gen_disjoint_adversarial({10, 12, 15}, 2);
  const Scenario back = load_scenario(inst.graph, to_json(inst.graph, inst.scenario));
  EXPECT_EQ(back.s, inst.scenario.s);
  EXPECT_EQ(back.g, inst.scenario.g);
  EXPECT_EQ(back.uav_start, inst.scenario.uav_start);
  EXPECT_EQ(back.blockages, inst.scenario.blockages);
  EXPECT_EQ(back.v_g, inst.scenario.v_g);
}
