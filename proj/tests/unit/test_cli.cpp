#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "cli/commands.hpp"
#include "fixtures.hpp"

using namespace honeygraph;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "honeygraph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Shared scratch area: a small dataset and a two-epoch model built once.
struct Workspace {
  fs::path root;
  fs::path data;
  fs::path model;
  fs::path graph;

  Workspace() {
    root = fs::temp_directory_path() / ("honeygraph_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    data = root / "ds";
    model = root / "model.json";
    graph = root / "graph.json";
    const auto d = invoke({"dataset", "--kind", "ad", "--size", "15", "--count", "40", "--seed", "3", "--out",
                           data.string()});
    REQUIRE(d.code == 0);
    const auto t = invoke({"train", "--data", data.string(), "--out", model.string(), "--epochs", "2", "--latent-dim",
                           "4", "--gru-units", "4", "--kl-weight", "0.03", "--seed", "1", "--quiet"});
    REQUIRE(t.code == 0);
    write_text_file(graph, to_native_json(fixtures::small_domain()));
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
};

Workspace& ws() {
  static Workspace w;
  return w;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(invoke({"--help"}).code == cli::kExitOk);
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
  CHECK(invoke({"dataset", "--count", "0", "--out", "x"}).code == cli::kExitUsage);
  CHECK(invoke({"dataset", "--size", "16", "--out", "x"}).code == cli::kExitUsage);
  CHECK(invoke({"dataset", "--kind", "ring", "--out", "x"}).code == cli::kExitUsage);
  CHECK(invoke({"evaluate"}).code == cli::kExitUsage);
}

TEST_CASE("extend with zero users is a usage error") {
  auto& w = ws();
  const auto r = invoke({"extend", "--model", w.model.string(), "--graph", w.graph.string(), "--users", "0", "--out",
                         (w.root / "x0").string()});
  CHECK(r.code == cli::kExitUsage);
}

TEST_CASE("dataset refuses to overwrite without --force") {
  auto& w = ws();
  CHECK(invoke({"dataset", "--count", "5", "--out", w.data.string()}).code == cli::kExitRuntime);
  const fs::path other = w.root / "ds2";
  CHECK(invoke({"dataset", "--count", "5", "--out", other.string()}).code == 0);
  CHECK(invoke({"dataset", "--count", "5", "--out", other.string(), "--force"}).code == 0);
}

TEST_CASE("missing input files are runtime errors") {
  auto& w = ws();
  const auto r = invoke({"train", "--data", (w.root / "nope").string(), "--out", (w.root / "m.json").string()});
  CHECK(r.code == cli::kExitRuntime);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("zero epochs writes the initial parameters") {
  auto& w = ws();
  const fs::path m = w.root / "m0.json";
  const auto r = invoke({"train", "--data", w.data.string(), "--out", m.string(), "--epochs", "0", "--latent-dim", "4",
                         "--gru-units", "4", "--quiet"});
  CHECK(r.code == 0);
  CHECK(fs::exists(m));
  CHECK_NOTHROW(load_checkpoint(m));
}

TEST_CASE("architecture flags cannot be combined with --resume") {
  auto& w = ws();
  const auto r = invoke({"train", "--data", w.data.string(), "--out", (w.root / "m1.json").string(), "--resume",
                         w.model.string(), "--latent-dim", "8"});
  CHECK(r.code == cli::kExitUsage);
}

TEST_CASE("extend writes every artifact and is deterministic") {
  auto& w = ws();
  const fs::path a = w.root / "ext_a", b = w.root / "ext_b";
  const std::vector<std::string> common{"extend", "--model", w.model.string(), "--graph", w.graph.string(),
                                        "--users", "4", "--seed", "9", "--threshold", "0.05", "--out"};
  auto args_a = common, args_b = common;
  args_a.push_back(a.string());
  args_b.push_back(b.string());
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  for (const char* f : {"extended_graph.json", "honeyusers.json", "honeyusers.ldif", "provision_honeyusers.ps1",
                        "extension_report.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(read_text_file(a / f) == read_text_file(b / f));
  }
  const std::string ps1 = read_text_file(a / "provision_honeyusers.ps1");
  CHECK(ps1.find(kPasswordVariable) != std::string::npos);
  CHECK(ps1.find("-AsPlainText") == std::string::npos);
  CHECK_NOTHROW(parse_ldif(read_text_file(a / "honeyusers.ldif")));
  const auto report = nlohmann::json::parse(read_text_file(a / "extension_report.json"));
  CHECK(report.at("requested") == 4);
  CHECK(report.at("kept").size() <= 4);

  // Second run into the same directory needs --force.
  CHECK(invoke(args_a).code == cli::kExitRuntime);
}

TEST_CASE("evaluate in dataset mode reports the eight metrics") {
  auto& w = ws();
  const fs::path curve = w.root / "curve.csv";
  const auto r = invoke({"evaluate", "--model", w.model.string(), "--data", w.data.string(), "--limit", "5",
                         "--users", "2", "--pr-curve", curve.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* k : {"precision", "recall", "f1", "pr_auc", "evr", "mecr", "wasserstein_new", "wasserstein_all"}) {
    CAPTURE(k);
    CHECK(j.contains(k));
  }
  CHECK(j.at("details").at("graphs") == 5);
  CHECK(read_text_file(curve).rfind("threshold,recall,precision\n", 0) == 0);
}

TEST_CASE("evaluate in pair mode: a graph against itself") {
  auto& w = ws();
  const auto r = invoke({"evaluate", "--original", w.graph.string(), "--extended", w.graph.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("wasserstein_all").get<double>() == 0.0);
  CHECK(j.at("wasserstein_new").is_null());
  CHECK(j.at("f1").is_null());
}

TEST_CASE("evaluate requires exactly one mode") {
  auto& w = ws();
  CHECK(invoke({"evaluate", "--model", w.model.string()}).code == cli::kExitUsage);
  CHECK(invoke({"evaluate", "--original", w.graph.string()}).code == cli::kExitUsage);
  CHECK(invoke({"evaluate", "--model", w.model.string(), "--data", w.data.string(), "--original", w.graph.string(),
                "--extended", w.graph.string()})
            .code == cli::kExitUsage);
}
