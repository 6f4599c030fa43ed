#include "test_util.hpp"

using namespace melonica;
using namespace testing_support;

namespace {

NPolynomial poly(std::initializer_list<std::pair<int, int>> terms) {
  NPolynomial out;
  for (auto [e, c] : terms) out.add(e, c);
  return out;
}

ModelSpec pillow_only() { return ModelSpec{3, {Coupling{"pillow", pillow()}}}; }

// Sum over pairings of N^{loops - (D-1)p}, loops counted by the oracle.
Rational oracle_expectation(const ColoredGraph& b, long long n) {
  const auto perms = to_perms(b);
  const int p = b.p();
  const int rank = b.num_colors();
  Rational total = 0;
  for (const auto& sigma : oracle::all_perms(p)) {
    oracle::Perms closed{sigma};
    for (const auto& row : perms) closed.push_back(row);
    long long e = -static_cast<long long>(rank - 1) * p;
    for (int i = 1; i <= rank; ++i) e += oracle::faces(closed, 0, i);
    Rational term = 1;
    for (long long k = 0; k < (e < 0 ? -e : e); ++k) term *= n;
    total += e < 0 ? 1 / term : term;
  }
  return total;
}

}  // namespace

TEST(Gaussian, Examples) {
  EXPECT_EQ(gaussian_expectation(dipole(3)), poly({{1, 1}}));
  EXPECT_EQ(gaussian_expectation(pillow()), poly({{1, 1}, {0, 1}}));
  EXPECT_EQ(to_string(gaussian_expectation(pillow())), "N + 1");
  EXPECT_ERROR(gaussian_expectation(g(3, {s2, s2, s2})), ErrorCode::Disconnected);
  const auto big = ColoredGraph::build(3, {{1, 2, 3, 4, 5, 6}, {2, 3, 4, 5, 6, 1}, {1, 2, 3, 4, 5, 6}});
  EXPECT_ERROR(gaussian_expectation(big), ErrorCode::SizeLimitExceeded);
}

TEST(Gaussian, EveryBubbleAtNOneIsPFactorial) {
  for (int p = 1; p <= 4; ++p)
    for (const auto& e : enumerate_bubbles(3, p).classes) {
      const auto ex = gaussian_expectation(e.graph);
      ASSERT_EQ(ex.evaluate(1), Rational(factorial(p)));
      for (long long n : {2, 3}) ASSERT_EQ(ex.evaluate(n), oracle_expectation(e.graph, n)) << encode(e.graph);
    }
}

TEST(Series, PillowOrderOne) {
  const auto t = free_energy_series(pillow_only(), 1);
  EXPECT_EQ(order_coefficient(t, 1), poly({{3, 1}, {2, 1}}));
  EXPECT_EQ(to_string(order_coefficient(t, 1)), "N^3 + N^2");
  EXPECT_TRUE(order_coefficient(t, 0).empty());
}

TEST(Series, PillowAtNOneMatchesMomentSeries) {
  const auto t = free_energy_series(pillow_only(), 3);
  const auto expected = oracle::n1_free_energy(2, 3);
  EXPECT_EQ(expected, (std::vector<Rational>{2, -10, Rational(296, 3)}));
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(order_coefficient(t, k).evaluate(1), expected[k - 1]) << k;
}

TEST(Series, LogarithmRouteAgrees) {
  const auto a = free_energy_series(pillow_only(), 3, true);
  const auto b = free_energy_series(pillow_only(), 3, false);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(order_coefficient(a, k), order_coefficient(b, k));
  bool saw_disconnected = false;
  for (const auto& e : b.ledger) saw_disconnected = saw_disconnected || !e.connected;
  EXPECT_TRUE(saw_disconnected);
}

TEST(Series, LedgerIsConsistent) {
  const auto t = free_energy_series(pillow_only(), 3);
  const auto aut_b = automorphism_order(pillow());
  std::map<MultiDegree, std::uint64_t> labeled;
  for (const auto& e : t.ledger) {
    ASSERT_TRUE(e.connected);
    EXPECT_EQ(e.exponent, amplitude_exponent(e.graph, 3).value);
    EXPECT_LE(e.exponent, Rational(3));
    if (e.exponent == 3) { EXPECT_EQ(*e.omega, 0); }
    const int n = e.degree[0];
    std::uint64_t group = 1;
    for (int k = 0; k < n; ++k) group *= aut_b * (k + 1);
    EXPECT_EQ(e.multiplicity * e.aut_order, group);
    EXPECT_EQ(e.sign, n % 2 ? -1 : 1);
    labeled[e.degree] += e.multiplicity;
  }
  for (const auto& [d, count] : labeled) EXPECT_EQ(count, t.labeled_counts.at(d));
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(*order_coefficient(t, k).leading_exponent(), Rational(3));
}

TEST(Series, TwoCouplings) {
  // At N = 1, Z = sum_{a,b} (-t1)^a (-t2)^b (2a+3b)!/(a! b!); the second
  // order terms of ln Z are Z20 - Z10^2/2 = 10, Z11 - Z10 Z01 = 108 and
  // Z02 - Z01^2/2 = 342.
  const auto cube = canonical_form(ColoredGraph::build(3, {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}})).graph;
  ASSERT_TRUE(is_connected(cube));
  ModelSpec m{3, {Coupling{"pillow", pillow()}, Coupling{"six", cube}}};
  const auto t = free_energy_series(m, 2);
  auto at1 = [&](MultiDegree d) { return t.coefficients.at(d).evaluate(1); };
  EXPECT_EQ(at1({1, 0}), Rational(2));
  EXPECT_EQ(at1({0, 1}), Rational(6));
  EXPECT_EQ(at1({2, 0}), Rational(-10));
  EXPECT_EQ(at1({1, 1}), Rational(-108));
  EXPECT_EQ(at1({0, 2}), Rational(-342));
  const auto via_log = free_energy_series(m, 2, false);
  EXPECT_EQ(t.coefficients, via_log.coefficients);
}

TEST(Series, Guard) { EXPECT_ERROR(free_energy_series(pillow_only(), 4), ErrorCode::SizeLimitExceeded); }

TEST(Series, Csv) {
  const auto t = free_energy_series(pillow_only(), 2);
  std::ostringstream out;
  write_series_csv(t, out);
  const auto text = out.str();
  EXPECT_EQ(text.rfind("order,N_exponent,coefficient,class_id,multiplicity\n", 0), 0u);
  EXPECT_NE(text.find("1,3/1,1,*,2\n"), std::string::npos);
  EXPECT_NE(text.find("1,2/1,1,*,2\n"), std::string::npos);
  std::ostringstream at1;
  write_series_csv(free_energy_series(pillow_only(), 3), at1, 1);
  EXPECT_EQ(at1.str(), "order,N_exponent,coefficient,class_id,multiplicity\n1,0/1,2,*,2\n2,0/1,-10,*,20\n"
                       "3,0/1,296/3,*,592\n");
}

TEST(Model, Parsing) {
  const auto doc = Json::parse(R"({"D": 3, "couplings": [{"name": "pillow", "bubble":
      {"num_colors": 3, "p": 2, "perms": [[1,2],[1,2],[2,1]]}}]})");
  const auto m = model_from_json(doc);
  EXPECT_EQ(m.rank, 3);
  ASSERT_EQ(m.couplings.size(), 1u);
  EXPECT_EQ(m.couplings[0].bubble, pillow());
  EXPECT_ERROR(model_from_json(Json::parse(R"({"couplings": []})")), ErrorCode::ParseError);
  EXPECT_ERROR(model_from_json(Json::parse(R"({"D": 3, "couplings": [{"name": "x"}]})")), ErrorCode::ParseError);
  EXPECT_ERROR(model_from_json(Json::parse(R"({"D": 3, "couplings": []})")), ErrorCode::InvalidModel);
}

TEST(Model, Validation) {
  EXPECT_ERROR(validate_model(ModelSpec{3, {Coupling{"q", dipole(3)}}}), ErrorCode::InvalidModel);
  // A relabeled pillow is the same invariant.
  EXPECT_ERROR(validate_model(ModelSpec{3, {Coupling{"a", pillow()}, Coupling{"b", g(3, {s2, s2, id2})}}}),
               ErrorCode::InvalidModel);
  EXPECT_ERROR(validate_model(ModelSpec{4, {Coupling{"a", pillow()}}}), ErrorCode::ColorCountMismatch);
  EXPECT_ERROR(validate_model(ModelSpec{3, {Coupling{"a", g(3, {s2, s2, s2})}}}), ErrorCode::Disconnected);
}

TEST(N1Oracle, MatchesIndependentExpansion) {
  for (int p = 2; p <= 4; ++p) EXPECT_EQ(n1_integral_oracle(p, 6), oracle::n1_free_energy(p, 6)) << p;
  EXPECT_EQ(n1_integral_oracle(pillow_only(), 3), (std::vector<Rational>{2, -10, Rational(296, 3)}));
}

TEST(N1Oracle, QuadratureAgrees) {
  for (double t : {1e-3, 5e-4}) {
    const auto series = n1_integral_oracle(2, 8);
    double partial = 0.0, power = 1.0;
    for (const auto& c : series) partial += to_double(c) * (power *= t);
    EXPECT_NEAR(n1_free_energy_quadrature(2, t), partial, 1e-9) << t;
  }
}

TEST(Numeric, SmallCases) {
  NumericTensor one(3, 1);
  one.entries[0] = Complex(0.3, -1.2);
  const double mod2 = std::norm(one.entries[0]);
  EXPECT_NEAR(std::abs(numeric_invariant_eval(dipole(3), one) - mod2), 0.0, 1e-14);
  for (int p = 1; p <= 3; ++p)
    for (const auto& e : enumerate_bubbles(3, p).classes)
      EXPECT_NEAR(std::abs(numeric_invariant_eval(e.graph, one) - std::pow(mod2, p)), 0.0, 1e-12);
  EXPECT_ERROR(numeric_invariant_eval(dipole4(), one), ErrorCode::RankMismatch);
  const auto t4 = random_tensor(3, 4, 1);
  EXPECT_ERROR(numeric_invariant_eval(dipole(3), t4), ErrorCode::SizeLimitExceeded);
}

TEST(Numeric, PillowMatchesExplicitLoop) {
  for (int n : {2, 3}) {
    const auto t = random_tensor(3, n, 42);
    const auto value = numeric_invariant_eval(pillow(), t);
    const auto loop = oracle::pillow_trace([&](int a, int b, int c) { return t.at({a, b, c}); }, n);
    EXPECT_LT(std::abs(value - loop), 1e-10 * std::max(1.0, std::abs(loop)));
  }
}

TEST(Numeric, QuadraticInvariantIsTheNorm) {
  const auto t = random_tensor(3, 3, 8);
  double norm = 0.0;
  for (const auto& x : t.entries) norm += std::norm(x);
  EXPECT_NEAR(std::abs(numeric_invariant_eval(dipole(3), t) - norm), 0.0, 1e-10);
}

TEST(Unitary, InvarianceAndNegativeControl) {
  const auto t = random_tensor(3, 2, 20120901);
  EXPECT_LE(unitary_invariance_check(dipole(3), t, 10, 1), 1e-10);
  EXPECT_LE(unitary_invariance_check(pillow(), t, 10, 2), 1e-10);
  EXPECT_LE(unitary_invariance_check(torus_bubble(), t, 5, 3), 1e-10);
  EXPECT_GT(unitary_invariance_check(pillow(), t, 10, 2, SlotMap{1, 0, 2}), 1e-6);
}

TEST(Unitary, HaarMatricesAreUnitary) {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 3; ++n) {
    const auto u = haar_unitary(n, rng);
    EXPECT_LT((u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm(), 1e-12);
  }
}
