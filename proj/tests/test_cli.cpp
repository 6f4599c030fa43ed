#include <json.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + MELONICA_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(MELONICA_DATA) + "/" + name; }

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "melonica_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, DegreeOfDipole) {
  const auto r = run("degree --input " + data("dipole.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["omega"], 0);
  EXPECT_EQ(j["exponent"], "3/1");
  EXPECT_EQ(j["faces"], 6);
}

TEST(Cli, DegreeJacketReport) {
  const auto r = run("degree --input " + data("id_s_s_id.json") + " --report jackets");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["jacket_genera"], Json::parse("[0,1,0]"));
  EXPECT_EQ(j["exponent"], "2/1");
  EXPECT_EQ(j["jackets"][1]["faces"], 4);
}

TEST(Cli, VerifyAmplitude) { EXPECT_EQ(run("verify --suite amplitude --p 3").code, 0); }

TEST(Cli, SeriesAtNOne) {
  const auto r = run("series --model " + data("pillow_model.json") + " --order 3 --N 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "order,N_exponent,coefficient,class_id,multiplicity\n1,0/1,2,*,2\n2,0/1,-10,*,20\n"
                   "3,0/1,296/3,*,592\n");
}

TEST(Cli, SeriesFromCatalogReference) {
  const auto dir = scratch();
  ASSERT_EQ(run("enumerate-bubbles --D 3 --p 2 --out " + (dir / "cat.json").string()).code, 0);
  const auto cat = Json::parse(slurp(dir / "cat.json"));
  int pillow_id = 0;
  for (std::size_t k = 0; k < cat.size(); ++k)
    if (cat[k]["perms"] == Json::parse("[[1,2],[1,2],[2,1]]")) pillow_id = static_cast<int>(k) + 1;
  ASSERT_GT(pillow_id, 0);
  std::ofstream(dir / "model.json") << R"({"D": 3, "couplings": [{"catalog": "cat.json", "id": )" << pillow_id
                                    << "}]}";
  const auto r = run("series --model " + (dir / "model.json").string() + " --order 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1,3/1,1,*,2"), std::string::npos);
}

TEST(Cli, ErrorCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("degree").code, 1);
  EXPECT_EQ(run("degree --input " + data("bad_duplicate.json")).code, 2);
  EXPECT_EQ(run("degree --input /nonexistent.json").code, 2);
  EXPECT_EQ(run("topology --input " + data("torus_bubble.json")).code, 2);
  EXPECT_EQ(run("enumerate-bubbles --D 3 --p 7").code, 3);
  EXPECT_EQ(run("melons --D 3 --p 5 --count").code, 3);
}

TEST(Cli, GuardOverride) {
  EXPECT_EQ(run("enumerate-bubbles --D 2 --p 7").code, 3);
  const auto r = run("enumerate-bubbles --D 2 --p 7", "MELONICA_GUARD_MAX_P=7");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(Json::parse(r.out).size(), 1u);  // a single bicolored cycle
}

TEST(Cli, CatalogAndClosures) {
  const auto dir = scratch();
  const auto cat = (dir / "b1.json").string();
  ASSERT_EQ(run("enumerate-bubbles --D 3 --p 1 --out " + cat).code, 0);
  const auto c = Json::parse(slurp(cat));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0]["aut_order"], 1);
  EXPECT_EQ(c[0]["omega"], 0);
  const auto r = run("enumerate-closures --bubbles " + cat + " --ids 1,1 --connected");
  ASSERT_EQ(r.code, 0);
  const auto closures = Json::parse(r.out);
  long long total = 0;
  for (const auto& g : closures) total += g["multiplicity"].get<long long>();
  EXPECT_EQ(closures.size(), 1u);  // only the crossed pairing is connected
  EXPECT_EQ(total, 1);
  EXPECT_EQ(run("enumerate-closures --bubbles " + cat + " --ids 2").code, 2);
}

TEST(Cli, MelonsCountAndTrace) {
  const auto r = run("melons --D 3 --p 3 --count");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["classes"], j["insertion_classes"]);
  EXPECT_EQ(j["generators_agree"], true);

  const auto dir = scratch();
  const auto trace = (dir / "trace.json").string();
  const auto m = run("melons --input " + data("melon_p2.json") + " --reduce --trace " + trace + " --tree");
  ASSERT_EQ(m.code, 0);
  const auto out = Json::parse(m.out);
  EXPECT_EQ(out["melonic"], true);
  EXPECT_EQ(out["tree"], "[3[]]");
  const auto t = Json::parse(slurp(trace));
  ASSERT_EQ(t["steps"].size(), 1u);
  EXPECT_EQ(t["steps"][0]["carrier"], 3);
}

TEST(Cli, Critical) {
  const auto r = run("critical --D 3 --max-p 40");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_LE(j["lower_value"].get<double>(), 27.0 / 256);
  EXPECT_GE(j["upper_value"].get<double>(), 27.0 / 256);
}

TEST(Cli, Topology) {
  const auto r = run("topology --input " + data("id_s_s_id.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["chi"], 0);
  EXPECT_EQ(j["cells"], Json::parse("[4,8,8,4]"));
  EXPECT_EQ(j["is_manifold"], true);
  EXPECT_EQ(j["links"].size(), 4u);
}

TEST(Cli, Oracles) {
  const auto n1 = Json::parse(run("oracle n1 --p 2 --order 3").out);
  EXPECT_EQ(n1["coefficients"], Json::parse(R"(["2","-10","296/3"])"));
  const auto gauss = Json::parse(run("oracle gaussian --input " + data("pillow_bubble.json")).out);
  EXPECT_EQ(gauss["expectation"], "N + 1");
  const auto u = Json::parse(run("oracle unitary --input " + data("pillow_bubble.json") + " --N 2").out);
  EXPECT_LE(u["max_deviation"].get<double>(), 1e-10);
  const auto bad =
      Json::parse(run("oracle unitary --input " + data("pillow_bubble.json") + " --N 2 --break-colors").out);
  EXPECT_GT(bad["max_deviation"].get<double>(), 1e-6);
}

TEST(Cli, OutputIndependentOfJobs) {
  const auto a = run("enumerate-bubbles --D 3 --p 4 --jobs 1");
  const auto b = run("enumerate-bubbles --D 3 --p 4 --jobs 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto s1 = run("series --model " + data("pillow_model.json") + " --order 3 --jobs 1");
  const auto s2 = run("series --model " + data("pillow_model.json") + " --order 3 --jobs 2");
  EXPECT_EQ(s1.out, s2.out);
}

TEST(Cli, Manifest) {
  const auto dir = scratch();
  const auto manifest = (dir / "manifest.json").string();
  ASSERT_EQ(run("--manifest " + manifest + " --seed 5 degree --input " + data("dipole.json")).code, 0);
  const auto m = Json::parse(slurp(manifest));
  EXPECT_EQ(m["subcommand"], "degree");
  EXPECT_EQ(m["seed"], 5);
  ASSERT_EQ(m["inputs"].size(), 1u);
  // sha256 of the fixture bytes, computed by coreutils.
  FILE* pipe = popen(("sha256sum " + data("dipole.json")).c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char hex[65] = {0};
  ASSERT_EQ(fread(hex, 1, 64, pipe), 64u);
  pclose(pipe);
  EXPECT_EQ(m["inputs"][0]["sha256"], std::string(hex));
  EXPECT_TRUE(m.contains("wall_seconds"));
  EXPECT_TRUE(m.contains("version"));
}
