// Command-line front end. Every subcommand writes JSON (CSV for `series`)
// to stdout or --out; errors go to stderr with exit codes 1 (usage),
// 2 (parse/validation), 3 (size guard) and 4 (internal consistency).

#include <melonica/melonica.hpp>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace melonica;
using OrderedJson = nlohmann::ordered_json;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeLimitExceeded:
      return 3;
    case ErrorCode::FormulaMismatch:
      return 4;
    default:
      return 2;
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

struct Context {
  int jobs = 1;
  std::uint64_t seed = 20120901;
  std::string manifest;
  std::string out;
  std::vector<std::string> inputs;
};

void emit(const Context& ctx, const std::string& text) {
  if (ctx.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(ctx.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + ctx.out);
  f << text;
}

std::string dump(const OrderedJson& j) { return j.dump(2) + "\n"; }

ColoredGraph load_graph(Context& ctx, const std::string& path) {
  ctx.inputs.push_back(path);
  return read_graph_file(path);
}

OrderedJson graph_doc(const ColoredGraph& g) { return OrderedJson::parse(encode(g)); }

std::vector<int> parse_ids(const std::string& text) {
  std::vector<int> ids;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      ids.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad bubble id \"" + item + "\"");
    }
  }
  if (ids.empty()) throw Error(ErrorCode::ParseError, "no bubble ids given");
  return ids;
}

// enumerate-bubbles

struct BubblesArgs {
  int rank = 3;
  int p = 1;
  bool color_classes = false;
};

void run_enumerate_bubbles(Context& ctx, const BubblesArgs& a) {
  check_size_guard(a.p, kDefaultEnumerationMaxP, "bubble enumeration");
  const auto catalog = enumerate_bubbles(a.rank, a.p, ctx.jobs);
  std::map<ColoredGraph, int> color_ids;
  OrderedJson out = OrderedJson::array();
  for (const auto& e : catalog.classes) {
    auto doc = graph_doc(e.graph);
    doc["aut_order"] = e.aut_order;
    doc["omega"] = e.omega;
    if (a.color_classes) {
      const auto key = canonical_form_color_permuting(e.graph);
      auto [it, inserted] = color_ids.emplace(key, static_cast<int>(color_ids.size()) + 1);
      doc["color_class"] = it->second;
    }
    out.push_back(doc);
  }
  emit(ctx, dump(out));
}

// enumerate-closures

struct ClosuresArgs {
  std::string bubbles;
  std::string ids;
  bool connected = false;
};

void run_enumerate_closures(Context& ctx, const ClosuresArgs& a) {
  ctx.inputs.push_back(a.bubbles);
  const auto catalog = read_json_file(a.bubbles);
  if (!catalog.is_array()) throw Error(ErrorCode::ParseError, "bubble catalog must be a JSON array");
  std::vector<ColoredGraph> chosen;
  for (int id : parse_ids(a.ids)) {
    if (id < 1 || id > static_cast<int>(catalog.size()))
      throw Error(ErrorCode::ParseError, "bubble id " + std::to_string(id) + " is not in the catalog");
    chosen.push_back(from_json(catalog[id - 1]));
  }
  const auto closures = enumerate_closures(chosen, a.connected, ctx.jobs);
  OrderedJson out = OrderedJson::array();
  for (const auto& c : closures.classes) {
    auto doc = graph_doc(c.graph);
    doc["multiplicity"] = c.multiplicity;
    doc["aut_order"] = c.aut_order;
    doc["connected"] = c.connected;
    if (c.omega) doc["omega"] = *c.omega;
    out.push_back(doc);
  }
  emit(ctx, dump(out));
}

// degree

void run_degree(Context& ctx, const std::string& input, const std::string& report) {
  const auto g = load_graph(ctx, input);
  const auto r = degree(g);
  OrderedJson out;
  out["omega"] = r.omega;
  out["jacket_genera"] = r.jacket_genera;
  out["faces"] = r.face_total;
  out["exponent"] = to_fraction_string(amplitude_exponent(g, g.num_colors() - 1).value);
  if (report == "jackets") {
    OrderedJson list = OrderedJson::array();
    for (const auto& j : jackets(g)) list.push_back({{"cycle", j.cycle}, {"faces", j.face_count}, {"genus", j.genus}});
    out["jackets"] = list;
  } else if (!report.empty()) {
    throw Error(ErrorCode::ParseError, "unknown report \"" + report + "\"");
  }
  emit(ctx, dump(out));
}

// melons

struct MelonsArgs {
  int rank = 3;
  int p = 0;
  bool count = false;
  std::string input;
  bool reduce = false;
  std::string trace;
  bool tree = false;
};

void run_melons(Context& ctx, const MelonsArgs& a) {
  OrderedJson out;
  if (a.count) {
    if (a.p < 1) throw Error(ErrorCode::ParseError, "--count needs --p >= 1");
    const auto exhaustive = melon_classes_exhaustive(a.rank, a.p, ctx.jobs);
    const auto inserted = melon_classes_by_insertion(a.rank, a.p);
    const auto trees = count_colored_trees(a.rank, a.p);
    out["D"] = a.rank;
    out["p"] = a.p;
    out["classes"] = exhaustive.size();
    out["insertion_classes"] = inserted.size();
    out["generators_agree"] = exhaustive == inserted;
    out["rooted_trees"] = trees.str();
    out["matches_tree_count"] = BigInt(exhaustive.size()) == trees;
    emit(ctx, dump(out));
    if (exhaustive != inserted) throw Error(ErrorCode::FormulaMismatch, "melon generators disagree");
    return;
  }
  if (a.input.empty()) throw Error(ErrorCode::ParseError, "melons needs --count or --input");
  const auto g = load_graph(ctx, a.input);
  const auto trace = reduce_dipoles(g);
  out["melonic"] = trace.melonic;
  out["steps"] = trace.steps.size();
  out["terminal"] = graph_doc(trace.terminal);
  if (a.tree && trace.melonic) out["tree"] = to_string(melon_to_tree(g));
  if (!a.trace.empty()) {
    OrderedJson t;
    t["melonic"] = trace.melonic;
    OrderedJson steps = OrderedJson::array();
    for (const auto& s : trace.steps)
      steps.push_back({{"white", s.white + 1},
                       {"black", s.black + 1},
                       {"shared_colors", s.shared_colors},
                       {"carrier", s.carrier},
                       {"carrier_white", s.carrier_white + 1},
                       {"carrier_black", s.carrier_black + 1}});
    t["steps"] = steps;
    t["terminal"] = graph_doc(trace.terminal);
    std::ofstream f(a.trace, std::ios::binary);
    if (!f) throw Error(ErrorCode::ParseError, "cannot write " + a.trace);
    f << dump(t);
  }
  emit(ctx, dump(out));
}

// critical

void run_critical(Context& ctx, int rank, int max_p) {
  const auto e = estimate_critical_point(rank, max_p);
  OrderedJson out;
  out["D"] = rank;
  out["max_p"] = max_p;
  out["lower"] = to_fraction_string(e.lower);
  out["upper"] = to_fraction_string(e.upper);
  out["estimate"] = to_fraction_string(e.estimate);
  out["lower_value"] = to_double(e.lower);
  out["upper_value"] = to_double(e.upper);
  out["estimate_value"] = to_double(e.estimate);
  emit(ctx, dump(out));
}

// topology

void run_topology(Context& ctx, const std::string& input) {
  const auto g = load_graph(ctx, input);
  const auto cells = cell_complex(g);
  const auto links = is_manifold(g);
  OrderedJson out;
  out["chi"] = cells.chi;
  out["cells"] = {cells.c0, cells.c1, cells.c2, cells.c3};
  OrderedJson list = OrderedJson::array();
  for (const auto& s : links.bubbles) {
    std::vector<int> whites;
    for (int w : s.whites) whites.push_back(w + 1);
    list.push_back({{"colors", s.colors},
                    {"whites", whites},
                    {"V", s.vertices},
                    {"L", s.lines},
                    {"F", s.faces},
                    {"genus", s.genus}});
  }
  out["links"] = list;
  out["is_manifold"] = links.is_manifold;
  emit(ctx, dump(out));
}

// series

struct SeriesArgs {
  std::string model;
  int order = 1;
  std::optional<long long> n_value;
  bool all_graphs = false;
};

void run_series(Context& ctx, const SeriesArgs& a) {
  ctx.inputs.push_back(a.model);
  const auto model = model_from_json(read_json_file(a.model), std::filesystem::path(a.model).parent_path());
  if (a.order < 1) throw Error(ErrorCode::ParseError, "--order must be at least 1");
  const auto table = free_energy_series(model, a.order, !a.all_graphs, ctx.jobs);
  std::ostringstream csv;
  write_series_csv(table, csv, a.n_value);
  emit(ctx, csv.str());
}

// oracle

struct OracleArgs {
  std::string kind;
  std::string input;
  int p = 2;
  int order = 3;
  int n = 2;
  int trials = 10;
  double t = 0.01;
  bool break_colors = false;
};

void run_oracle(Context& ctx, const OracleArgs& a) {
  OrderedJson out;
  if (a.kind == "n1") {
    std::vector<std::string> coefficients;
    for (const auto& c : n1_integral_oracle(a.p, a.order)) coefficients.push_back(to_compact_string(c));
    out["bubble_p"] = a.p;
    out["coefficients"] = coefficients;
  } else if (a.kind == "quadrature") {
    const auto series = n1_integral_oracle(a.p, a.order);
    double partial = 0.0, power = 1.0;
    for (const auto& c : series) partial += to_double(c) * (power *= a.t);
    out["bubble_p"] = a.p;
    out["t"] = a.t;
    out["quadrature"] = n1_free_energy_quadrature(a.p, a.t);
    out["series_partial_sum"] = partial;
  } else if (a.kind == "gaussian") {
    const auto b = load_graph(ctx, a.input);
    out["expectation"] = to_string(gaussian_expectation(b));
  } else if (a.kind == "unitary") {
    const auto b = load_graph(ctx, a.input);
    const auto t = random_tensor(b.num_colors(), a.n, ctx.seed);
    SlotMap slots = identity_slots(b.num_colors());
    if (a.break_colors) std::swap(slots[0], slots[1]);
    out["N"] = a.n;
    out["trials"] = a.trials;
    out["seed"] = ctx.seed;
    out["color_breaking"] = a.break_colors;
    out["max_deviation"] = unitary_invariance_check(b, t, a.trials, ctx.seed, slots);
  } else {
    throw Error(ErrorCode::ParseError, "unknown oracle \"" + a.kind + "\"");
  }
  emit(ctx, dump(out));
}

// verify

int run_verify(Context& ctx, const std::string& suite, int max_p) {
  VerifyOptions o;
  o.max_p = max_p;
  o.seed = ctx.seed;
  o.jobs = ctx.jobs;
  std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  OrderedJson out = OrderedJson::array();
  bool ok = true;
  for (const auto& name : names) {
    const auto r = run_named_suite(name, o);
    ok = ok && r.passed;
    OrderedJson row{{"suite", r.name}, {"passed", r.passed}, {"checked", r.checked}};
    if (!r.detail.empty()) row["detail"] = r.detail;
    out.push_back(row);
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.checked << " checks, " << std::fixed
              << std::setprecision(2) << r.seconds << " s)" << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
  }
  emit(ctx, dump(out));
  return ok ? 0 : 4;
}

void write_manifest(const Context& ctx, const std::string& subcommand, double seconds) {
  OrderedJson m;
  m["subcommand"] = subcommand;
  m["version"] = kVersion;
  m["seed"] = ctx.seed;
  OrderedJson inputs = OrderedJson::array();
  for (const auto& path : ctx.inputs) inputs.push_back({{"path", path}, {"sha256", sha256_hex(read_file(path))}});
  m["inputs"] = inputs;
  m["wall_seconds"] = seconds;
  std::ofstream f(ctx.manifest, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + ctx.manifest);
  f << dump(m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Colored-graph calculus for random tensor models"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_version_flag("--version", kVersion);
  Context ctx;
  app.add_option("--jobs", ctx.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", ctx.seed, "seed for randomized checks");
  app.add_option("--manifest", ctx.manifest, "write a run manifest to this file");

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", ctx.out, "output file (default stdout)"); };

  BubblesArgs bubbles;
  auto* eb = app.add_subcommand("enumerate-bubbles", "connected D-colored invariants up to isomorphism");
  eb->add_option("--D", bubbles.rank)->required();
  eb->add_option("--p", bubbles.p)->required();
  eb->add_flag("--color-classes", bubbles.color_classes, "also group classes under color permutations");
  add_out(eb);

  ClosuresArgs closures;
  auto* ec = app.add_subcommand("enumerate-closures", "color-0 closures of a multiset of bubbles");
  ec->add_option("--bubbles", closures.bubbles)->required();
  ec->add_option("--ids", closures.ids, "1-based catalog ids, e.g. 1,1")->required();
  ec->add_flag("--connected", closures.connected);
  add_out(ec);

  std::string degree_input, report;
  auto* dg = app.add_subcommand("degree", "jackets, degree and amplitude exponent");
  dg->add_option("--input", degree_input)->required();
  dg->add_option("--report", report, "jackets");
  add_out(dg);

  MelonsArgs melons;
  auto* ml = app.add_subcommand("melons", "melon counting and dipole reduction");
  ml->add_option("--D", melons.rank);
  ml->add_option("--p", melons.p);
  ml->add_flag("--count", melons.count);
  ml->add_option("--input", melons.input);
  ml->add_flag("--reduce", melons.reduce);
  ml->add_option("--trace", melons.trace, "write the reduction trace here");
  ml->add_flag("--tree", melons.tree, "include the insertion tree");
  add_out(ml);

  int crit_rank = 3, crit_max_p = 40;
  auto* cr = app.add_subcommand("critical", "ratio-test interval for the melonic critical point");
  cr->add_option("--D", crit_rank);
  cr->add_option("--max-p", crit_max_p);
  add_out(cr);

  std::string topo_input;
  auto* tp = app.add_subcommand("topology", "cell counts and links of a 4-colored graph");
  tp->add_option("--input", topo_input)->required();
  add_out(tp);

  SeriesArgs series;
  auto* se = app.add_subcommand("series", "free-energy coefficients as CSV");
  se->add_option("--model", series.model)->required();
  se->add_option("--order", series.order)->required();
  se->add_option("--N", series.n_value, "evaluate at this N");
  se->add_flag("--all-graphs", series.all_graphs, "take the logarithm of the full labeled sum");
  add_out(se);

  OracleArgs oracle;
  auto* orc = app.add_subcommand("oracle", "independent checks: n1, quadrature, gaussian, unitary");
  orc->add_option("kind", oracle.kind)->required()->check(CLI::IsMember({"n1", "quadrature", "gaussian", "unitary"}));
  orc->add_option("--input", oracle.input);
  orc->add_option("--p", oracle.p, "bubble size for n1/quadrature");
  orc->add_option("--order", oracle.order);
  orc->add_option("--N", oracle.n);
  orc->add_option("--trials", oracle.trials);
  orc->add_option("--t", oracle.t);
  orc->add_flag("--break-colors", oracle.break_colors, "negative control");
  add_out(orc);

  std::string suite = "all";
  int verify_p = 3;
  auto* vf = app.add_subcommand("verify", "exhaustive property suites");
  vf->add_option("--suite", suite)->check(CLI::IsMember([] {
    auto names = suite_names();
    names.push_back("all");
    return names;
  }()));
  vf->add_option("--p", verify_p);
  add_out(vf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  auto* sub = app.get_subcommands().front();
  int code = 0;
  try {
    if (sub == eb) run_enumerate_bubbles(ctx, bubbles);
    else if (sub == ec) run_enumerate_closures(ctx, closures);
    else if (sub == dg) run_degree(ctx, degree_input, report);
    else if (sub == ml) run_melons(ctx, melons);
    else if (sub == cr) run_critical(ctx, crit_rank, crit_max_p);
    else if (sub == tp) run_topology(ctx, topo_input);
    else if (sub == se) run_series(ctx, series);
    else if (sub == orc) run_oracle(ctx, oracle);
    else if (sub == vf) code = run_verify(ctx, suite, verify_p);
    if (!ctx.manifest.empty())
      write_manifest(ctx, sub->get_name(),
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return code;
}
