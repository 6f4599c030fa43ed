#pragma once

#include <melonica/canonical.hpp>
#include <melonica/degree.hpp>
#include <melonica/enumeration.hpp>
#include <melonica/error.hpp>
#include <melonica/exact.hpp>
#include <melonica/graph.hpp>
#include <melonica/guard.hpp>
#include <melonica/io.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace melonica {

// Finite sum of c_k N^{e_k} with exact rational exponents and coefficients.
// Zero coefficients are never stored.
class NPolynomial {
 public:
  NPolynomial() = default;
  static NPolynomial monomial(const Rational& exponent, const Rational& coefficient = 1) {
    NPolynomial r;
    r.add(exponent, coefficient);
    return r;
  }

  void add(const Rational& exponent, const Rational& coefficient) {
    if (coefficient == 0) return;
    auto& c = terms_[exponent];
    c += coefficient;
    if (c == 0) terms_.erase(exponent);
  }

  const std::map<Rational, Rational>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  Rational coefficient(const Rational& exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::optional<Rational> leading_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
  }

  Rational sum_of_coefficients() const {
    Rational s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

  /// Value at an integer N. Needs integral exponents unless N = 1.
  Rational evaluate(long long n) const {
    Rational s = 0;
    for (const auto& [e, c] : terms_) {
      if (n == 1) {
        s += c;
        continue;
      }
      if (boost::multiprecision::denominator(e) != 1)
        throw Error(ErrorCode::InvalidModel, "cannot evaluate N^" + to_fraction_string(e) + " exactly");
      const long long k = boost::multiprecision::numerator(e).convert_to<long long>();
      Rational power = 1;
      for (long long i = 0; i < (k < 0 ? -k : k); ++i) power *= n;
      s += c * (k < 0 ? 1 / power : power);
    }
    return s;
  }

  NPolynomial& operator+=(const NPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  NPolynomial& operator*=(const Rational& k) {
    if (k == 0) terms_.clear();
    for (auto& [e, c] : terms_) c *= k;
    return *this;
  }
  friend NPolynomial operator*(const NPolynomial& a, const NPolynomial& b) {
    NPolynomial r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add(ea + eb, ca * cb);
    return r;
  }
  friend NPolynomial operator+(NPolynomial a, const NPolynomial& b) { return a += b; }
  friend NPolynomial operator*(NPolynomial a, const Rational& k) { return a *= k; }
  friend bool operator==(const NPolynomial&, const NPolynomial&) = default;

 private:
  std::map<Rational, Rational> terms_;
};

/// Human-readable form, highest power first: "N^3 + N^2", "N + 1".
inline std::string to_string(const NPolynomial& poly) {
  if (poly.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = poly.terms().rbegin(); it != poly.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = c < 0 ? Rational(-c) : c;
    out << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    const bool unit = mag == 1;
    if (!unit || e == 0) out << to_compact_string(mag);
    if (e == 0) continue;
    if (!unit) out << "*";
    out << "N";
    if (e != 1) out << "^" << (boost::multiprecision::denominator(e) == 1 ? to_compact_string(e)
                                                                          : "(" + to_compact_string(e) + ")");
  }
  return out.str();
}

/// Gaussian expectation of Tr_B with covariance delta / N^{D-1}: the sum over
/// all color-0 pairings of N^{sum_i F_{0i} - (D-1) p}.
inline NPolynomial gaussian_expectation(const ColoredGraph& bubble) {
  if (!is_connected(bubble)) throw Error(ErrorCode::Disconnected, "bubble must be connected");
  check_size_guard(bubble.p(), 5, "gaussian expectation");
  const int rank = bubble.num_colors();
  const int p = bubble.p();
  NPolynomial out;
  auto sigma = Permutation::identity(p);
  std::vector<int> v(sigma.images().begin(), sigma.images().end());
  do {
    const auto g = close_with(bubble, Permutation(v));
    long long loops = 0;
    for (Color i = 1; i <= rank; ++i) loops += face_count(g, 0, i);
    out.add(Rational(loops - static_cast<long long>(rank - 1) * p), 1);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

struct Coupling {
  std::string name;
  ColoredGraph bubble;
};

struct ModelSpec {
  int rank = 0;
  std::vector<Coupling> couplings;
};

inline void validate_model(const ModelSpec& m) {
  if (m.rank < 2) throw Error(ErrorCode::InvalidModel, "rank must be at least 2");
  if (m.couplings.empty()) throw Error(ErrorCode::InvalidModel, "model has no couplings");
  for (std::size_t k = 0; k < m.couplings.size(); ++k) {
    const auto& b = m.couplings[k].bubble;
    if (b.num_colors() != m.rank)
      throw Error(ErrorCode::ColorCountMismatch, "coupling " + std::to_string(k + 1) + " has " +
                                                     std::to_string(b.num_colors()) + " colors, rank is " +
                                                     std::to_string(m.rank));
    if (!is_connected(b))
      throw Error(ErrorCode::Disconnected, "coupling " + std::to_string(k + 1) + " is not connected");
    if (b.p() == 1)
      throw Error(ErrorCode::InvalidModel, "the quadratic invariant is implicit and cannot be a coupling");
    for (std::size_t j = 0; j < k; ++j)
      if (isomorphic(b, m.couplings[j].bubble))
        throw Error(ErrorCode::InvalidModel, "couplings " + std::to_string(j + 1) + " and " +
                                                 std::to_string(k + 1) + " are the same invariant");
  }
}

/// Reads {"D": 3, "couplings": [{"name": ..., "bubble": {graph}}, ...]};
/// a coupling may instead reference {"catalog": "file.json", "id": 1}
/// (1-based, path relative to `base_dir`).
inline ModelSpec model_from_json(const Json& doc, const std::filesystem::path& base_dir = {}) {
  if (!doc.is_object() || !doc.contains("D") || !doc["D"].is_number_integer())
    throw Error(ErrorCode::ParseError, "model needs an integer field \"D\"");
  if (!doc.contains("couplings") || !doc["couplings"].is_array())
    throw Error(ErrorCode::ParseError, "model needs an array field \"couplings\"");
  ModelSpec m;
  m.rank = doc["D"].get<int>();
  for (std::size_t k = 0; k < doc["couplings"].size(); ++k) {
    const auto& c = doc["couplings"][k];
    Coupling coupling;
    coupling.name = c.value("name", "t" + std::to_string(k + 1));
    if (c.contains("bubble")) {
      coupling.bubble = from_json(c["bubble"]);
    } else if (c.contains("catalog") && c.contains("id")) {
      const auto catalog = read_json_file((base_dir / c["catalog"].get<std::string>()).string());
      const int id = c["id"].get<int>();
      if (!catalog.is_array() || id < 1 || id > static_cast<int>(catalog.size()))
        throw Error(ErrorCode::ParseError, "catalog reference " + std::to_string(id) + " is out of range");
      coupling.bubble = from_json(catalog[id - 1]);
    } else {
      throw Error(ErrorCode::ParseError, "coupling " + std::to_string(k + 1) + " needs \"bubble\" or \"catalog\"+\"id\"");
    }
    m.couplings.push_back(std::move(coupling));
  }
  validate_model(m);
  return m;
}

using MultiDegree = std::vector<int>;
using CouplingSeries = std::map<MultiDegree, NPolynomial>;

inline int total_degree(const MultiDegree& d) {
  int s = 0;
  for (int x : d) s += x;
  return s;
}

/// All multi-degrees of the given total over `couplings` variables,
/// lexicographically descending (so (n,0,...) first).
inline std::vector<MultiDegree> multidegrees_of_total(std::size_t couplings, int total) {
  std::vector<MultiDegree> out;
  MultiDegree cur(couplings, 0);
  auto rec = [&](auto&& self, std::size_t k, int remaining) -> void {
    if (k + 1 == couplings) {
      cur[k] = remaining;
      out.push_back(cur);
      return;
    }
    for (int x = remaining; x >= 0; --x) {
      cur[k] = x;
      self(self, k + 1, remaining - x);
    }
  };
  rec(rec, 0, total);
  return out;
}

// One isomorphism class of closures contributing at a given multi-degree.
struct LedgerEntry {
  MultiDegree degree;
  int class_id = 0;  // 1-based within the multi-degree, canonical order
  ColoredGraph graph;
  bool connected = true;
  std::uint64_t multiplicity = 0;  // labeled pairings
  std::uint64_t aut_order = 1;
  int sign = 1;                    // (-1)^{number of bubbles}
  std::optional<int> omega;
  Rational exponent;               // power of N of the amplitude
  Rational weight;                 // coefficient contributed to the table
  Rational symmetry_factor;        // aut_order / prod aut(B)^{n_B}
};

struct SeriesTable {
  ModelSpec model;
  int max_order = 0;
  bool connected_only = true;
  CouplingSeries coefficients;  // F = -ln Z per multi-degree
  std::vector<LedgerEntry> ledger;
  std::map<MultiDegree, std::uint64_t> labeled_counts;
};

inline constexpr int kDefaultSeriesMaxP = 6;

namespace detail {

inline std::vector<ColoredGraph> bubble_copies(const ModelSpec& m, const MultiDegree& d) {
  std::vector<ColoredGraph> out;
  for (std::size_t k = 0; k < d.size(); ++k)
    for (int c = 0; c < d[k]; ++c) out.push_back(m.couplings[k].bubble);
  return out;
}

inline int bubble_vertex_total(const ModelSpec& m, const MultiDegree& d) {
  int p = 0;
  for (std::size_t k = 0; k < d.size(); ++k) p += d[k] * m.couplings[k].bubble.p();
  return p;
}

}  // namespace detail

/// ln of a graded series with constant term 1, via n L_n = n Z_n - sum_k k L_k Z_{n-k}.
inline CouplingSeries series_log(const CouplingSeries& z, std::size_t couplings, int max_order) {
  std::vector<CouplingSeries> zs(max_order + 1), ls(max_order + 1);
  for (const auto& [d, poly] : z) {
    const int n = total_degree(d);
    if (n >= 1 && n <= max_order) zs[n][d] = poly;
  }
  CouplingSeries out;
  for (int n = 1; n <= max_order; ++n) {
    CouplingSeries acc;
    for (const auto& [d, poly] : zs[n]) acc[d] += poly * Rational(n);
    for (int k = 1; k < n; ++k)
      for (const auto& [dl, pl] : ls[k])
        for (const auto& [dz, pz] : zs[n - k]) {
          MultiDegree d(couplings);
          for (std::size_t i = 0; i < couplings; ++i) d[i] = dl[i] + dz[i];
          acc[d] += (pl * pz) * Rational(-k);
        }
    for (auto& [d, poly] : acc) {
      poly *= Rational(1, n);
      if (!poly.empty()) ls[n][d] = poly;
    }
    for (const auto& [d, poly] : ls[n]) out[d] = poly;
  }
  return out;
}

/// Perturbative free energy F = -ln Z from labeled Wick contractions.
///
/// With connected_only the coefficients come straight from connected
/// closures. Otherwise Z is built from all closures (disconnected ones
/// included, flagged in the ledger) and its logarithm is taken; both routes
/// give the same F.
inline SeriesTable free_energy_series(const ModelSpec& model, int max_order, bool connected_only = true, int jobs = 1) {
  validate_model(model);
  const std::size_t nc = model.couplings.size();
  std::vector<std::uint64_t> bubble_aut;
  for (const auto& c : model.couplings) bubble_aut.push_back(automorphism_order(c.bubble));
  for (int n = 1; n <= max_order; ++n)
    for (const auto& d : multidegrees_of_total(nc, n))
      check_size_guard(detail::bubble_vertex_total(model, d), kDefaultSeriesMaxP, "free energy series");

  SeriesTable table;
  table.model = model;
  table.max_order = max_order;
  table.connected_only = connected_only;
  CouplingSeries z;
  for (int n = 1; n <= max_order; ++n) {
    for (const auto& d : multidegrees_of_total(nc, n)) {
      const auto copies = detail::bubble_copies(model, d);
      const auto closures = enumerate_closures(copies, connected_only, jobs);
      BigInt orbit = 1;       // |Aut| of the bubble union
      BigInt labels = 1;      // prod n_B!
      for (std::size_t k = 0; k < nc; ++k) {
        labels *= factorial(static_cast<unsigned>(d[k]));
        for (int c = 0; c < d[k]; ++c) {
          orbit *= bubble_aut[k];
        }
      }
      orbit *= labels;
      const int sign = n % 2 == 0 ? 1 : -1;
      NPolynomial f_part, z_part;
      int class_id = 0;
      for (const auto& cls : closures.classes) {
        LedgerEntry e;
        e.degree = d;
        e.class_id = ++class_id;
        e.graph = cls.graph;
        e.connected = cls.connected;
        e.multiplicity = cls.multiplicity;
        e.aut_order = cls.aut_order;
        e.sign = sign;
        e.omega = cls.omega;
        if (BigInt(cls.multiplicity) * cls.aut_order != orbit)
          throw Error(ErrorCode::FormulaMismatch, "labeled multiplicity times automorphism order is not the "
                                                  "order of the bubble relabeling group");
        e.symmetry_factor = Rational(BigInt(cls.aut_order), orbit / labels);
        // The closure's bubbles are a relabeling of the copies; degrees are
        // recomputed on the representative rather than assumed in order.
        const auto brute = amplitude_exponent_bruteforce(cls.graph).value;
        if (cls.connected) {
          e.exponent = amplitude_exponent(cls.graph, model.rank).value;
          if (e.exponent != brute)
            throw Error(ErrorCode::FormulaMismatch, "amplitude exponent differs from direct loop counting");
        } else {
          e.exponent = brute;
        }
        const Rational labeled = Rational(BigInt(cls.multiplicity), labels);
        if (connected_only) {
          e.weight = Rational(-sign) * labeled;
          f_part.add(e.exponent, e.weight);
        } else {
          e.weight = Rational(sign) * labeled;
          z_part.add(e.exponent, e.weight);
        }
        table.ledger.push_back(std::move(e));
      }
      table.labeled_counts[d] = closures.labeled_total;
      if (connected_only)
        table.coefficients[d] = f_part;
      else
        z[d] = z_part;
    }
  }
  if (!connected_only) {
    for (auto& [d, poly] : series_log(z, nc, max_order)) table.coefficients[d] = poly * Rational(-1);
    for (int n = 1; n <= max_order; ++n)
      for (const auto& d : multidegrees_of_total(nc, n)) table.coefficients.try_emplace(d);
  }
  return table;
}

/// Coefficient of t^n in F for a single-coupling table.
inline NPolynomial order_coefficient(const SeriesTable& t, int n) {
  MultiDegree d(t.model.couplings.size(), 0);
  if (d.size() != 1) throw Error(ErrorCode::InvalidModel, "order_coefficient needs a single coupling");
  d[0] = n;
  auto it = t.coefficients.find(d);
  return it == t.coefficients.end() ? NPolynomial{} : it->second;
}

/// At N = 1 a single coupling on a bubble with p white vertices reduces to
/// one complex variable: with x = |T|^2 the weight is exp(-x - t x^p), so
/// Z = sum_k (-t)^k (pk)!/k!. Returns the coefficients of -ln Z for orders
/// 1..max_order.
inline std::vector<Rational> n1_integral_oracle(int bubble_p, int max_order) {
  std::vector<Rational> z(max_order + 1), l(max_order + 1);
  for (int k = 0; k <= max_order; ++k)
    z[k] = Rational(factorial(static_cast<unsigned>(bubble_p * k)) * (k % 2 ? -1 : 1),
                    factorial(static_cast<unsigned>(k)));
  for (int n = 1; n <= max_order; ++n) {
    Rational acc = Rational(n) * z[n];
    for (int k = 1; k < n; ++k) acc -= Rational(k) * l[k] * z[n - k];
    l[n] = acc / n;
  }
  std::vector<Rational> f;
  for (int n = 1; n <= max_order; ++n) f.push_back(-l[n]);
  return f;
}

inline std::vector<Rational> n1_integral_oracle(const ModelSpec& m, int max_order) {
  validate_model(m);
  if (m.couplings.size() != 1) throw Error(ErrorCode::InvalidModel, "the N = 1 oracle takes one coupling");
  return n1_integral_oracle(m.couplings.front().bubble.p(), max_order);
}

/// -ln of the normalized one-variable integral at N = 1, by quadrature.
inline double n1_free_energy_quadrature(int bubble_p, double t) {
  boost::math::quadrature::exp_sinh<double> integrator;
  const double z = integrator.integrate([&](double x) { return std::exp(-x - t * std::pow(x, bubble_p)); });
  return -std::log(z);
}

inline std::string degree_label(const MultiDegree& d) {
  std::string s;
  for (std::size_t k = 0; k < d.size(); ++k) s += (k ? "|" : "") + std::to_string(d[k]);
  return s;
}

/// CSV with columns order,N_exponent,coefficient,class_id,multiplicity.
/// Rows with class_id "*" aggregate one power of N; the others are per
/// class. With `n_value` only aggregated per-order values are written.
inline void write_series_csv(const SeriesTable& t, std::ostream& out, std::optional<long long> n_value = std::nullopt) {
  out << "order,N_exponent,coefficient,class_id,multiplicity\n";
  for (int n = 1; n <= t.max_order; ++n) {
    for (const auto& d : multidegrees_of_total(t.model.couplings.size(), n)) {
      auto it = t.coefficients.find(d);
      const NPolynomial poly = it == t.coefficients.end() ? NPolynomial{} : it->second;
      const auto labeled = t.labeled_counts.count(d) ? t.labeled_counts.at(d) : 0;
      if (n_value) {
        out << degree_label(d) << ",0/1," << to_compact_string(poly.evaluate(*n_value)) << ",*," << labeled << "\n";
        continue;
      }
      for (auto term = poly.terms().rbegin(); term != poly.terms().rend(); ++term)
        out << degree_label(d) << "," << to_fraction_string(term->first) << "," << to_compact_string(term->second)
            << ",*," << labeled << "\n";
      for (const auto& e : t.ledger)
        if (e.degree == d)
          out << degree_label(d) << "," << to_fraction_string(e.exponent) << "," << to_compact_string(e.weight)
              << "," << e.class_id << "," << e.multiplicity << "\n";
    }
  }
}

}  // namespace melonica
