#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  if (const char* p = std::getenv("SIMPLEXDIFF_CLI_PATH_ENV")) return p;
#ifdef SIMPLEXDIFF_CLI_PATH
  return SIMPLEXDIFF_CLI_PATH;
#else
  REQUIRE_MESSAGE(false, "SIMPLEXDIFF_CLI_PATH must be configured");
  return "";
#endif
}

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "simplexdiff_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> csv_rows(const std::string& text,
                                          bool skip_header_row = true) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  bool header_seen = !skip_header_row;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

}  // namespace

TEST_CASE("forward writes grid+1 rows and reruns byte-identically") {
  const fs::path out = work_dir() / "fwd.csv";
  const std::string args =
      "forward --alpha 1,1,1 --b 1 --T 5 --grid 100 --y0 onehot:1 "
      "--scheme exact --seed 7 --out " + out.string();
  CHECK(run(args) == 0);
  const std::string first = slurp(out);
  CHECK(csv_rows(first).size() == 101);

  CHECK(run(args) == 0);
  CHECK(slurp(out) == first);

  // header carries the reproducibility metadata
  CHECK(first.find("# invocation: simplexdiff forward") != std::string::npos);
  CHECK(first.find("# seed: 7") != std::string::npos);
  CHECK(first.find("# config_hash: ") != std::string::npos);
}

TEST_CASE("forward validates the squared-OU integrality requirement") {
  const fs::path out = work_dir() / "fwd_ou.csv";
  CHECK(run("forward --alpha 0.7,1 --T 1 --scheme squared-ou --seed 1 --out " +
            out.string()) == 2);
  // integer 2a passes
  CHECK(run("forward --alpha 0.5,1 --T 1 --scheme squared-ou --seed 1 --out " +
            out.string()) == 0);
}

TEST_CASE("config errors exit with code 2") {
  CHECK(run("forward --T 1 --seed 1 --out /tmp/x.csv") == 2);  // no alpha
  CHECK(run("forward --alpha 1,1 --T 1 --out /tmp/x.csv") == 2);  // no seed
  CHECK(run("nonsense") == 2);
}

TEST_CASE("unwritable output path exits with code 3") {
  CHECK(run("forward --alpha 1,1 --T 1 --seed 1 "
            "--out /nonexistent_dir_xyz/fwd.csv") == 3);
}

TEST_CASE("dirichlet samples live on the simplex") {
  const fs::path out = work_dir() / "dir.csv";
  CHECK(run("sample dirichlet --alpha 0.5,1,2 --n 2000 --seed 1 --out " +
            out.string()) == 0);
  const auto rows = csv_rows(slurp(out));
  REQUIRE(rows.size() == 2000);
  for (const auto& r : rows) {
    REQUIRE(r.size() == 3);
    double s = 0.0;
    for (double v : r) {
      s += v;
      CHECK(v >= 0.0);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("reverse samplers run end to end and are seed-deterministic") {
  const fs::path data = work_dir() / "pm.json";
  write_file(data, R"({"n":2,"points":[{"vector":[1.0,0.5]}]})");

  const fs::path out = work_dir() / "ode.csv";
  const std::string args =
      "sample ode --alpha 2,2 --b 1 --T 3 --steps 80 --score analytic "
      "--data " + data.string() + " --n 40 --seed 3 --out " + out.string();
  CHECK(run(args) == 0);
  const std::string first = slurp(out);
  CHECK(run(args) == 0);
  CHECK(slurp(out) == first);

  const auto rows = csv_rows(first);
  REQUIRE(rows.size() == 40);
  for (const auto& r : rows) {
    REQUIRE(r.size() == 3);  // y1, y2, argmax category
    CHECK((r[2] == 0.0 || r[2] == 1.0));
  }

  const fs::path out2 = work_dir() / "sde.csv";
  CHECK(run("sample reverse-sde --alpha 2,2 --b 1 --T 3 --steps 80 "
            "--score analytic --data " + data.string() +
            " --n 40 --seed 3 --out " + out2.string()) == 0);
  CHECK(csv_rows(slurp(out2)).size() == 40);
}

TEST_CASE("missing or corrupt checkpoints exit with code 4") {
  CHECK(run("sample ode --n 5 --seed 1 --score model "
            "--checkpoint /nonexistent.ckpt --out " +
            (work_dir() / "x.csv").string()) == 4);

  const fs::path bad = work_dir() / "bad.ckpt";
  write_file(bad, "not json at all{{");
  CHECK(run("sample ode --n 5 --seed 1 --score model --checkpoint " +
            bad.string() + " --out " + (work_dir() / "x.csv").string()) == 4);
}

TEST_CASE("validate stationarity emits a passing JSON report") {
  const fs::path out = work_dir() / "sta.json";
  CHECK(run("validate stationarity --alpha 0.5,1,2 --bt 20 --draws 20000 "
            "--seed 3 --out " + out.string()) == 0);
  const nlohmann::json rep = nlohmann::json::parse(slurp(out));
  CHECK(rep.at("pass").get<bool>());
  CHECK(rep.at("test_name") == "stationarity");
  CHECK(rep.at("checks").size() == 3);
  CHECK(rep.at("seed") == 3);
  for (const auto& c : rep.at("checks")) {
    CHECK(c.at("pass").get<bool>());
    CHECK(c.at("statistic").get<double>() < c.at("threshold").get<double>());
  }
}

TEST_CASE("validate rank reports heavy-tail quantiles") {
  const fs::path out = work_dir() / "rank.json";
  CHECK(run("validate rank --n 2000 --bt 1 --trials 1500 --seed 5 --out " +
            out.string()) == 0);
  const nlohmann::json rep = nlohmann::json::parse(slurp(out));
  CHECK(rep.at("pass").get<bool>());
  const auto& r = rep.at("report");
  CHECK(r.at("q50").get<int>() >= 1);
  CHECK(r.at("q99").get<int>() >= r.at("q90").get<int>());
}

TEST_CASE("train writes checkpoints; steps 0 equals a fresh initialization") {
  const fs::path data = work_dir() / "d3.json";
  write_file(data, R"({"n":3,"points":[{"index":0},{"index":1},{"index":2}]})");

  const fs::path a = work_dir() / "fresh_a.ckpt";
  const fs::path b = work_dir() / "fresh_b.ckpt";
  const std::string common =
      "train --data " + data.string() + " --alpha 1,1,1 --b 1 --T 3 "
      "--hidden 8,8 --batch 16 --lr 0.001 --seed 11 ";
  CHECK(run(common + "--steps 0 --out " + a.string()) == 0);
  CHECK(run(common + "--steps 0 --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));

  const fs::path trained = work_dir() / "trained.ckpt";
  CHECK(run(common + "--steps 30 --out " + trained.string()) == 0);
  CHECK(slurp(trained) != slurp(a));

  const nlohmann::json ckpt = nlohmann::json::parse(slurp(trained));
  CHECK(ckpt.at("format") == "simplexdiff-score-v1");
  CHECK(ckpt.at("steps_done") == 30);
  CHECK(ckpt.at("seed") == 11);
}

TEST_CASE("resumed training equals an uninterrupted run") {
  const fs::path data = work_dir() / "d3b.json";
  write_file(data, R"({"n":3,"points":[{"index":0},{"index":1},{"index":2}]})");
  const std::string common =
      "train --data " + data.string() + " --alpha 1,1,1 --b 1 --T 3 "
      "--hidden 8,8 --batch 16 --lr 0.001 --seed 12 ";

  const fs::path full = work_dir() / "full.ckpt";
  CHECK(run(common + "--steps 60 --out " + full.string()) == 0);

  const fs::path part = work_dir() / "part.ckpt";
  const fs::path resumed = work_dir() / "resumed.ckpt";
  CHECK(run(common + "--steps 25 --out " + part.string()) == 0);
  CHECK(run("train --data " + data.string() +
            " --resume " + part.string() +
            " --batch 16 --lr 0.001 --seed 12 --steps 60 --out " +
            resumed.string()) == 0);
  CHECK(slurp(resumed) == slurp(full));
}
