#pragma once

#include <melonica/canonical.hpp>
#include <melonica/degree.hpp>
#include <melonica/enumeration.hpp>
#include <melonica/melonic.hpp>
#include <melonica/series.hpp>
#include <melonica/tensor.hpp>
#include <melonica/topology.hpp>

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace melonica {

// Exhaustive property suites behind `melonica verify`. Each returns one
// result; a suite fails on the first violated property and says which.
struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  int max_p = 3;
  std::uint64_t seed = 20120901;
  int jobs = 1;
};

/// Calls fn(g) for every labeled graph with the given colors and p, i.e.
/// every tuple of permutations.
template <typename Fn>
void for_each_labeled_graph(int num_colors, int p, Fn&& fn) {
  const auto group = all_permutations(static_cast<std::size_t>(p));
  std::vector<std::size_t> digits(num_colors, 0);
  while (true) {
    std::vector<Permutation> perms;
    for (auto d : digits) perms.push_back(group[d]);
    fn(ColoredGraph(std::move(perms)));
    int k = num_colors - 1;
    while (k >= 0 && ++digits[k] == group.size()) digits[k--] = 0;
    if (k < 0) break;
  }
}

inline ColoredGraph random_graph(int num_colors, int p, std::mt19937_64& rng) {
  std::vector<Permutation> perms;
  for (int c = 0; c < num_colors; ++c) {
    auto v = Permutation::identity(p);
    std::vector<int> images(v.images().begin(), v.images().end());
    std::shuffle(images.begin(), images.end(), rng);
    perms.emplace_back(std::move(images));
  }
  return ColoredGraph(std::move(perms));
}

namespace detail {

struct SuiteFailure {
  std::string what;
};

inline void expect(bool ok, const std::string& what) {
  if (!ok) throw SuiteFailure{what};
}

inline SuiteResult run_suite(const std::string& name, const std::function<std::size_t()>& body) {
  SuiteResult r;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.checked = body();
  } catch (const SuiteFailure& f) {
    r.passed = false;
    r.detail = f.what;
  } catch (const Error& e) {
    r.passed = false;
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::string graph_text(const ColoredGraph& g) { return encode(g); }

}  // namespace detail

/// Face count equals 3p + 3 - omega with omega the jacket genus sum, for
/// every connected labeled 4-colored graph.
inline SuiteResult verify_degree_formula(const VerifyOptions& o) {
  return detail::run_suite("degree-formula", [&] {
    std::size_t n = 0;
    for (int p = 1; p <= o.max_p; ++p)
      for_each_labeled_graph(4, p, [&](const ColoredGraph& g) {
        if (!is_connected(g)) return;
        const auto r = degree(g);
        int sum = 0;
        for (int genus : r.jacket_genera) sum += genus;
        detail::expect(r.omega >= 0 && sum == r.omega, "negative degree " + detail::graph_text(g));
        detail::expect(r.face_total == 3 * p + 3 - r.omega, "face formula fails on " + detail::graph_text(g));
        ++n;
      });
    return n;
  });
}

/// Degree route and loop-counting route to the amplitude agree on every
/// connected labeled 4-colored graph up to max_p, plus random graphs up to
/// p = 6.
inline SuiteResult verify_amplitude(const VerifyOptions& o) {
  return detail::run_suite("amplitude", [&] {
    std::size_t n = 0;
    auto check = [&](const ColoredGraph& g) {
      if (!is_connected(g)) return;
      const auto a = amplitude_exponent(g, 3);
      const auto b = amplitude_exponent_bruteforce(g);
      detail::expect(a == b, "exponents differ on " + detail::graph_text(g));
      detail::expect(a.value <= 3, "exponent above D on " + detail::graph_text(g));
      ++n;
    };
    for (int p = 1; p <= o.max_p; ++p) for_each_labeled_graph(4, p, check);
    std::mt19937_64 rng(o.seed);
    for (int p = 4; p <= 6; ++p)
      for (int trial = 0; trial < 200; ++trial) check(random_graph(4, p, rng));
    // D = 4 exercises a non-trivial (D-1)! denominator.
    for (int trial = 0; trial < 200; ++trial) {
      const auto g = random_graph(5, 3, rng);
      if (!is_connected(g)) continue;
      detail::expect(amplitude_exponent(g, 4) == amplitude_exponent_bruteforce(g),
                     "D = 4 exponents differ on " + detail::graph_text(g));
      ++n;
    }
    return n;
  });
}

/// Orbit-stabilizer: labeled count of a class times its automorphism order
/// is (p!)^2, and the brute-force automorphism count matches.
inline SuiteResult verify_canonical(const VerifyOptions& o) {
  return detail::run_suite("canonical", [&] {
    std::size_t n = 0;
    for (int p = 1; p <= std::min(o.max_p, 3); ++p) {
      std::map<ColoredGraph, std::pair<std::uint64_t, std::uint64_t>> classes;
      for_each_labeled_graph(4, p, [&](const ColoredGraph& g) {
        const auto cf = canonical_form(g);
        auto& slot = classes[cf.graph];
        ++slot.first;
        slot.second = cf.aut_order;
        ++n;
      });
      const std::uint64_t group = static_cast<std::uint64_t>(small_factorial(p) * small_factorial(p));
      for (const auto& [g, counts] : classes)
        detail::expect(counts.first * counts.second == group, "orbit-stabilizer fails on " + detail::graph_text(g));
    }
    return n;
  });
}

/// Recognition by reduction, degree zero and insertion closure single out
/// the same classes; reductions are confluent; trees round-trip.
inline SuiteResult verify_melonic(const VerifyOptions& o) {
  return detail::run_suite("melonic", [&] {
    std::size_t n = 0;
    for (int p = 1; p <= o.max_p; ++p) {
      std::set<ColoredGraph> degree_zero;
      std::set<std::string> trees;
      for (const auto& e : enumerate_connected_classes(4, p, o.jobs)) {
        const bool melonic = is_melonic(e.graph);
        detail::expect(melonic == (e.omega == 0), "reduction disagrees with degree on " + detail::graph_text(e.graph));
        if (melonic) {
          degree_zero.insert(e.graph);
          detail::expect(every_reduction_reaches_dipole(e.graph), "non-confluent reduction on " +
                                                                      detail::graph_text(e.graph));
          const auto tree = melon_to_tree(e.graph);
          detail::expect(tree.size() == p, "tree size differs from p");
          detail::expect(canonical_form(tree_to_melon(tree)).graph == e.graph,
                         "tree round trip changes " + detail::graph_text(e.graph));
          detail::expect(trees.insert(to_string(tree)).second, "two classes share a tree");
        }
        ++n;
      }
      const auto inserted = melon_classes_by_insertion(3, p);
      detail::expect(std::set<ColoredGraph>(inserted.begin(), inserted.end()) == degree_zero,
                     "insertion closure differs from degree-zero classes at p = " + std::to_string(p));
    }
    if (o.max_p >= 2) {
      detail::expect(count_melons_exhaustive(3, 1) == 1, "one melon at p = 1");
      detail::expect(count_melons_exhaustive(3, 2) == 4, "four melons at p = 2");
    }
    return n;
  });
}

/// Degree-zero graphs have chi = 0 and spherical links; every manifold has
/// chi = 0.
inline SuiteResult verify_topology(const VerifyOptions& o) {
  return detail::run_suite("topology", [&] {
    std::size_t n = 0;
    for (int p = 1; p <= o.max_p; ++p)
      for (const auto& e : enumerate_connected_classes(4, p, o.jobs)) {
        const auto cells = cell_complex(e.graph);
        const auto links = is_manifold(e.graph);
        detail::expect(cells.c3 == 2 * p && cells.c2 == 4 * p, "cell counts off on " + detail::graph_text(e.graph));
        if (e.omega == 0)
          detail::expect(cells.chi == 0 && links.is_manifold, "degree-zero graph is not a spherical witness: " +
                                                                   detail::graph_text(e.graph));
        if (links.is_manifold) detail::expect(cells.chi == 0, "manifold with chi != 0: " + detail::graph_text(e.graph));
        ++n;
      }
    return n;
  });
}

inline ColoredGraph pillow_bubble() { return ColoredGraph::build(3, {{1, 2}, {1, 2}, {2, 1}}); }

inline ModelSpec pillow_model() { return ModelSpec{3, {Coupling{"pillow", pillow_bubble()}}}; }

inline SuiteResult verify_gaussian(const VerifyOptions& o) {
  return detail::run_suite("gaussian", [&] {
    std::size_t n = 0;
    NPolynomial expected;
    expected.add(1, 1);
    expected.add(0, 1);
    detail::expect(gaussian_expectation(pillow_bubble()) == expected, "pillow expectation is not N + 1");
    ++n;
    for (int p = 1; p <= 4; ++p)
      for (const auto& e : enumerate_bubbles(3, p, o.jobs).classes) {
        detail::expect(gaussian_expectation(e.graph).evaluate(1) == Rational(factorial(p)),
                       "expectation at N = 1 is not p! for " + detail::graph_text(e.graph));
        ++n;
      }
    return n;
  });
}

inline SuiteResult verify_series(const VerifyOptions& o) {
  (void)o;
  return detail::run_suite("series", [&] {
    const auto model = pillow_model();
    const auto table = free_energy_series(model, 3);
    const auto via_log = free_energy_series(model, 3, false);
    const auto oracle = n1_integral_oracle(2, 3);
    std::size_t n = 0;
    for (int k = 1; k <= 3; ++k) {
      detail::expect(order_coefficient(table, k).evaluate(1) == oracle[k - 1],
                     "N = 1 coefficient differs from the moment series at order " + std::to_string(k));
      detail::expect(order_coefficient(table, k) == order_coefficient(via_log, k),
                     "connected sum and logarithm differ at order " + std::to_string(k));
      ++n;
    }
    NPolynomial first;
    first.add(3, 1);
    first.add(2, 1);
    detail::expect(order_coefficient(table, 1) == first, "order-one coefficient is not N^3 + N^2");
    for (const auto& e : table.ledger) {
      if (e.exponent == 3) detail::expect(e.omega == 0, "non-melonic class at leading order");
      detail::expect(e.exponent <= 3, "exponent above D in the ledger");
      ++n;
    }
    return n;
  });
}

inline SuiteResult verify_critical(const VerifyOptions& o) {
  (void)o;
  return detail::run_suite("critical", [&] {
    std::size_t n = 0;
    const auto counts = colored_tree_counts(3, 40);
    for (int p = 0; p <= 40; ++p) {
      detail::expect(counts[p] == fuss_catalan(3, p), "tree count differs from Fuss-Catalan at p = " + std::to_string(p));
      ++n;
    }
    const Rational rho3(27, 256), rho2(4, 27);
    const auto e40 = estimate_critical_point(3, 40);
    const auto e20 = estimate_critical_point(3, 20);
    detail::expect(e40.contains(rho3), "D = 3 interval misses 27/256");
    detail::expect(abs(e40.estimate - rho3) < rho3 / 20, "D = 3 estimate not within 5%");
    detail::expect(e20.lower <= e40.lower && e40.upper <= e20.upper, "intervals are not nested");
    detail::expect(estimate_critical_point(2, 40).contains(rho2), "D = 2 interval misses 4/27");
    return n + 3;
  });
}

inline SuiteResult verify_unitary(const VerifyOptions& o) {
  return detail::run_suite("unitary", [&] {
    const auto t = random_tensor(3, 2, o.seed);
    const auto b1 = dipole(3);
    const auto pillow = pillow_bubble();
    detail::expect(unitary_invariance_check(b1, t, 10, o.seed) <= 1e-10, "quadratic invariant not invariant");
    detail::expect(unitary_invariance_check(pillow, t, 10, o.seed) <= 1e-10, "pillow not invariant");
    detail::expect(unitary_invariance_check(pillow, t, 10, o.seed, SlotMap{1, 0, 2}) > 1e-6,
                   "color-breaking contraction looks invariant");
    return std::size_t{3};
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"degree-formula", "amplitude", "canonical", "melonic", "topology",
                                              "gaussian",       "series",   "critical",  "unitary"};
  return names;
}

inline SuiteResult run_named_suite(const std::string& name, const VerifyOptions& o) {
  if (name == "degree-formula") return verify_degree_formula(o);
  if (name == "amplitude") return verify_amplitude(o);
  if (name == "canonical") return verify_canonical(o);
  if (name == "melonic") return verify_melonic(o);
  if (name == "topology") return verify_topology(o);
  if (name == "gaussian") return verify_gaussian(o);
  if (name == "series") return verify_series(o);
  if (name == "critical") return verify_critical(o);
  if (name == "unitary") return verify_unitary(o);
  throw Error(ErrorCode::ParseError, "unknown suite " + name);
}

}  // namespace melonica
