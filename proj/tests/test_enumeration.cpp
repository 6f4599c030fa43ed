#include "test_util.hpp"

using namespace melonica;
using namespace testing_support;

TEST(EnumerateBubbles, SmallCatalogs) {
  const auto one = enumerate_bubbles(3, 1);
  ASSERT_EQ(one.classes.size(), 1u);
  EXPECT_EQ(one.classes[0].graph, dipole(3));

  const auto two = enumerate_bubbles(3, 2);
  ASSERT_EQ(two.classes.size(), 3u);
  for (const auto& e : two.classes) EXPECT_EQ(e.omega, 0);

  const auto three = enumerate_bubbles(3, 3);
  const auto torus = canonical_form(torus_bubble()).graph;
  auto it = std::find_if(three.classes.begin(), three.classes.end(), [&](const auto& e) { return e.graph == torus; });
  ASSERT_NE(it, three.classes.end());
  EXPECT_EQ(it->omega, 1);
}

TEST(EnumerateBubbles, MatchesOrbitCollection) {
  for (int c = 3; c <= 4; ++c)
    for (int p = 1; p <= 3; ++p) {
      const auto reps = oracle::connected_class_reps(c, p);
      const auto classes = enumerate_connected_classes(c, p);
      ASSERT_EQ(classes.size(), reps.size()) << c << " colors, p = " << p;
      for (const auto& r : reps) {
        const auto cf = canonical_form(from_perms(r)).graph;
        ASSERT_EQ(std::count_if(classes.begin(), classes.end(), [&](const auto& e) { return e.graph == cf; }), 1);
      }
      for (std::size_t k = 0; k < classes.size(); ++k) {
        ASSERT_TRUE(is_connected(classes[k].graph));
        ASSERT_EQ(decode(encode(classes[k].graph)), classes[k].graph);
        ASSERT_EQ(static_cast<long long>(classes[k].aut_order), oracle::automorphisms(to_perms(classes[k].graph)));
        if (k) { ASSERT_LT(classes[k - 1].graph, classes[k].graph); }
      }
    }
}

TEST(EnumerateBubbles, KnownSequences) {
  // Connected 3- and 4-colored graphs up to color-fixing isomorphism.
  const std::vector<std::size_t> three{1, 3, 7, 26}, four{1, 7, 41, 604};
  for (int p = 1; p <= 4; ++p) {
    EXPECT_EQ(enumerate_bubbles(3, p).classes.size(), three[p - 1]);
    EXPECT_EQ(enumerate_connected_classes(4, p).size(), four[p - 1]);
  }
}

TEST(EnumerateBubbles, OrbitStabilizerAtP4) {
  // Each class has (p!)^2 / aut labeled members.
  const int p = 4;
  long long labeled = 0;
  for (const auto& perms : oracle::all_graphs(3, p)) labeled += oracle::connected(perms);
  Rational total = 0;
  for (const auto& e : enumerate_bubbles(3, p).classes)
    total += Rational(small_factorial(p) * small_factorial(p), static_cast<long long>(e.aut_order));
  EXPECT_EQ(total, Rational(labeled));
}

TEST(EnumerateBubbles, ParallelOutputIsIdentical) {
  const auto a = enumerate_connected_classes(4, 4, 1);
  const auto b = enumerate_connected_classes(4, 4, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].graph, b[k].graph);
    EXPECT_EQ(a[k].aut_order, b[k].aut_order);
  }
}

TEST(EnumerateBubbles, Guard) {
  EXPECT_ERROR(enumerate_bubbles(3, 7), ErrorCode::SizeLimitExceeded);
  EXPECT_ERROR(enumerate_bubbles(1, 2), ErrorCode::TooFewColors);
}

TEST(EnumerateClosures, Examples) {
  const auto b1 = enumerate_closures({dipole(3)}, false);
  ASSERT_EQ(b1.classes.size(), 1u);
  EXPECT_EQ(b1.classes[0].graph, dipole(4));
  EXPECT_EQ(b1.classes[0].multiplicity, 1u);

  const auto pc = enumerate_closures({pillow()}, false);
  ASSERT_EQ(pc.classes.size(), 2u);
  EXPECT_EQ(pc.labeled_total, 2u);
  std::multiset<int> omegas;
  for (const auto& c : pc.classes) {
    EXPECT_EQ(c.multiplicity, 1u);
    omegas.insert(*c.omega);
  }
  EXPECT_EQ(omegas, (std::multiset<int>{0, 1}));
}

TEST(EnumerateClosures, AllFourColoredClassesAtP2) {
  // Every connected 4-colored graph with p = 2 is a closure of one connected
  // 3-colored bubble with p = 2 or of two copies of B1.
  std::set<ColoredGraph> seen;
  std::multiset<int> omegas;
  auto add = [&](const ClosureCatalog& cat) {
    for (const auto& c : cat.classes)
      if (seen.insert(c.graph).second) omegas.insert(*c.omega);
  };
  for (const auto& b : enumerate_bubbles(3, 2).classes) add(enumerate_closures({b.graph}, true));
  add(enumerate_closures({dipole(3), dipole(3)}, true));
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(omegas, (std::multiset<int>{0, 0, 0, 0, 1, 1, 1}));

  long long connected = 0;
  const auto all = oracle::all_graphs(4, 2);
  for (const auto& perms : all) connected += oracle::connected(perms);
  EXPECT_EQ(connected, 14);
  EXPECT_EQ(all.size(), 16u);
}

TEST(EnumerateClosures, MultiplicitiesSumToFactorial) {
  const auto bubbles = enumerate_bubbles(3, 2).classes;
  for (const auto& b : bubbles) {
    std::vector<ColoredGraph> two{b.graph, pillow()};
    const auto all = enumerate_closures(two, false);
    std::uint64_t sum = 0;
    for (const auto& c : all.classes) sum += c.multiplicity;
    EXPECT_EQ(sum, 24u);
    EXPECT_EQ(all.labeled_total, 24u);
    const auto conn = enumerate_closures(two, true);
    std::uint64_t connected_sum = 0;
    for (const auto& c : all.classes)
      if (c.connected) connected_sum += c.multiplicity;
    EXPECT_EQ(conn.labeled_total, connected_sum);
    for (const auto& c : conn.classes) EXPECT_TRUE(c.connected);
  }
}

TEST(EnumerateClosures, OrbitIdentity) {
  // multiplicity x aut(G) = prod aut(B)^{n_B} n_B!
  const auto b = pillow();
  const std::uint64_t aut_b = automorphism_order(b);
  const auto cat = enumerate_closures({b, b}, false);
  for (const auto& c : cat.classes) EXPECT_EQ(c.multiplicity * c.aut_order, aut_b * aut_b * 2);
}

TEST(EnumerateClosures, Errors) {
  EXPECT_ERROR(enumerate_closures({dipole(3), dipole4()}, false), ErrorCode::ColorCountMismatch);
  EXPECT_ERROR(enumerate_closures({g(3, {s2, s2, s2})}, false), ErrorCode::Disconnected);
  EXPECT_ERROR(close_with(pillow(), Permutation{0}), ErrorCode::MismatchedVertexCounts);
  const std::vector<ColoredGraph> big(7, dipole(3));
  EXPECT_ERROR(enumerate_closures(big, false), ErrorCode::SizeLimitExceeded);
}

TEST(AutomorphismOrder, Examples) {
  EXPECT_EQ(automorphism_order(dipole4()), 1u);
  EXPECT_EQ(automorphism_order(g(4, {id2, id2, id2, id2})), 2u);
  EXPECT_EQ(automorphism_order(g(4, {id2, s2, s2, s2})), 2u);
  EXPECT_EQ(oracle::automorphisms(to_perms(g(4, {id2, id2, id2, id2}))), 2);
}
