// Runs the built marklis-cli binary and checks exit codes and emitted files.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef MARKLIS_CLI_PATH
#error "MARKLIS_CLI_PATH must name the CLI executable"
#endif

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("marklis_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const fs::path capture = scratch() / "stdout.txt";
  const std::string cmd = std::string("\"") + MARKLIS_CLI_PATH + "\" " + args + " > \"" +
                          capture.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

// Every CSV cell must equal the corresponding JSON value.
void check_same_payload(const std::string& json_text, const std::string& csv_text) {
  const auto json = nlohmann::json::parse(json_text);
  const auto csv = parse_csv(csv_text);
  REQUIRE(csv.size() == json.size() + 1);
  const auto& header = csv[0];
  for (std::size_t i = 0; i < json.size(); ++i) {
    const auto& obj = json[i];
    REQUIRE(obj.size() == header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto& v = obj.at(header[c]);
      const std::string& cell = csv[i + 1][c];
      if (v.is_null()) {
        REQUIRE(cell.empty());
      } else if (v.is_string()) {
        REQUIRE(cell == v.get<std::string>());
      } else if (v.is_number_integer()) {
        REQUIRE(cell == v.dump());
      } else {
        REQUIRE(std::stod(cell) == v.get<double>());
      }
    }
  }
}

}  // namespace

TEST_CASE("simulate") {
  SUBCASE("absorbing chain") {
    const auto r = cli("simulate --a 0 --b 0 --n 3 --seed 1 --init point1 --format json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 3);
    for (const auto& row : j) {
      CHECK(row["schema_version"] == "1");
      CHECK(row["series"] == "letter");
      CHECK(row["value"] == 1);
    }
  }
  SUBCASE("alternating chain with walk and shape") {
    const auto r = cli("simulate --a 1 --b 1 --n 4 --seed 1 --init point1 --walk --shape");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    std::vector<int> letters, walk, shape;
    for (const auto& row : j) {
      if (row["series"] == "letter") letters.push_back(row["value"]);
      if (row["series"] == "s1") walk.push_back(row["value"]);
      if (row["series"] == "shape") shape.push_back(row["value"]);
    }
    CHECK(letters == std::vector<int>{2, 1, 2, 1});
    CHECK(walk == std::vector<int>{0, -1, 0, -1, 0});
    CHECK(shape == std::vector<int>{2, 2});
  }
  SUBCASE("reruns are byte-identical and formats agree") {
    const std::string base = "simulate --a 0.3 --b 0.6 --n 200 --seed 42 --walk --shape";
    const auto first = cli(base);
    const auto second = cli(base);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);
    CHECK(cli("simulate --a 0.3 --b 0.6 --n 200 --seed 43 --walk --shape").out != first.out);
    const auto csv = cli(base + " --format csv");
    REQUIRE(csv.code == 0);
    check_same_payload(first.out, csv.out);
  }
  SUBCASE("file output validates") {
    const auto path = scratch() / "sim.csv";
    REQUIRE(cli("simulate --a 0.2 --b 0.7 --n 50 --seed 3 --shape --format csv --out " +
                path.string())
                .code == 0);
    CHECK(cli("--validate " + path.string()).code == 0);
  }
  SUBCASE("errors") {
    CHECK(cli("simulate --a 1.5 --b 0.5 --n 3 --seed 1").code == 3);
    CHECK(cli("simulate --a 0.5 --b -0.1 --n 3 --seed 1").code == 3);
    CHECK(cli("simulate --a 0.5 --b 0.5 --n 3").code == 2);
    CHECK(cli("simulate --a 0.5 --b 0.5 --n 0 --seed 1").code == 2);
    CHECK(cli("simulate --a 0.5 --b 0.5 --n 3 --seed 1 --init middle").code == 2);
    CHECK(cli("simulate --a 0.5 --b 0.5 --n 3 --seed 1 --format xml").code == 2);
    CHECK(cli("simulate --a zero --b 0.5 --n 3 --seed 1").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("simulate --a 0.5 --b 0.5 --n 3 --seed 1 --out /nonexistent-dir/x.json").code == 4);
  }
}

TEST_CASE("laws") {
  SUBCASE("regimes") {
    auto j = nlohmann::json::parse(cli("laws --a 0.5 --b 0.5").out);
    CHECK(j[0]["law"] == "brownian-functional");
    CHECK(j[0]["scale"].get<double>() == doctest::Approx(1.0));
    j = nlohmann::json::parse(cli("laws --a 0.3 --b 0.6").out);
    CHECK(j[0]["law"] == "normal");
    CHECK(j[0]["variance"].get<double>() == doctest::Approx(0.271605).epsilon(1e-6));
    j = nlohmann::json::parse(cli("laws --a 1 --b 1").out);
    CHECK(j[0]["law"] == "degenerate");
  }
  SUBCASE("grid") {
    const auto r = cli("laws --a 0.5 --b 0.5 --grid 0:2:0.5");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 5);
    CHECK(j[2]["y"].get<double>() == 1.0);
    CHECK(j[2]["density"].get<double>() == doctest::Approx(0.863855464211009));
    CHECK(j[2]["cdf"].get<double>() == doctest::Approx(0.7385358700508888));
    check_same_payload(r.out, cli("laws --a 0.5 --b 0.5 --grid 0:2:0.5 --format csv").out);
  }
  SUBCASE("errors") {
    CHECK(cli("laws --a 0.5 --b 2").code == 3);
    CHECK(cli("laws --a 0.5").code == 2);
    CHECK(cli("laws --a 0.5 --b 0.5 --grid 0:1").code == 2);
    CHECK(cli("laws --a 0.5 --b 0.5 --grid 1:0:0.1").code == 2);
  }
}

TEST_CASE("experiment") {
  const fs::path json = scratch() / "exp.json";
  const fs::path csv = scratch() / "exp.csv";
  SUBCASE("moment-check") {
    const std::string args =
        "experiment --kind moment-check --a 0.3 --b 0.6 --n 10 --trials 2000 --seed 1 --k-list 2 5";
    const auto r = cli(args + " --out " + json.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("result=pass") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(json));
    REQUIRE(j.size() == 2);
    CHECK(j[0]["k"] == 2);
    CHECK(j[0]["exact_var"].get<double>() == doctest::Approx(1.955556).epsilon(1e-6));
    REQUIRE(cli(args + " --format csv --out " + csv.string()).code == 0);
    check_same_payload(slurp(json), slurp(csv));
    CHECK(cli("--validate " + json.string()).code == 0);
    CHECK(cli("--validate " + csv.string()).code == 0);
    // Thread count never changes the file.
    const fs::path other = scratch() / "exp_threads.json";
    REQUIRE(cli(args + " --threads 3 --out " + other.string()).code == 0);
    CHECK(slurp(other) == slurp(json));
  }
  SUBCASE("li-law pass and fail") {
    const std::string args = "experiment --kind li-law --a 0.3 --b 0.6 --n 400 --trials 400 --seed 2";
    auto r = cli(args + " --ks-threshold 1 --out " + json.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("ks_statistic=") != std::string::npos);
    CHECK(r.out.find("result=pass") != std::string::npos);
    r = cli(args + " --ks-threshold 0.0001 --out " + json.string());
    CHECK(r.code == 1);
    CHECK(r.out.find("result=fail") != std::string::npos);
    // The file is written either way.
    CHECK(nlohmann::json::parse(slurp(json)).size() == 400);
    CHECK(cli("--validate " + json.string()).code == 0);
    REQUIRE(cli(args + " --ks-threshold 1 --format csv --out " + csv.string()).code == 0);
    check_same_payload(slurp(json), slurp(csv));
  }
  SUBCASE("shape-joint") {
    REQUIRE(cli("experiment --kind shape-joint --a 0.5 --b 0.5 --n 300 --trials 100 --seed 3 "
                "--ks-threshold 1 --format csv --out " +
                csv.string())
                .code == 0);
    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 101);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(std::stod(rows[i][8]) + std::stod(rows[i][9]) == 0.0);
    }
    CHECK(cli("--validate " + csv.string()).code == 0);
  }
  SUBCASE("drift-vanish") {
    const auto r = cli("experiment --kind drift-vanish --a 0.3 --b 0.6 --n 1000 --trials 300 "
                       "--seed 4 --out " +
                       json.string());
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(json));
    REQUIRE(j.size() == 3);
    CHECK(j[0]["word_length"] == 10);
    CHECK(j[2]["word_length"] == 1000);
    CHECK(j[1]["z"].get<double>() == 0.25);
    CHECK(cli("--validate " + json.string()).code == 0);
    CHECK(cli("experiment --kind drift-vanish --a 0.5 --b 0.5 --n 100 --trials 10 --seed 1 --out " +
              json.string())
              .code == 3);
  }
  SUBCASE("errors") {
    CHECK(cli("experiment --kind li-law --a 0.5 --b 0.5 --n 10 --trials 10 --seed 1").code == 2);
    CHECK(cli("experiment --kind bogus --a 0.5 --b 0.5 --n 10 --trials 10 --seed 1 --out " +
              json.string())
              .code == 2);
    CHECK(cli("experiment --kind li-law --a 0.5 --b 1.5 --n 10 --trials 10 --seed 1 --out " +
              json.string())
              .code == 3);
    CHECK(cli("experiment --kind li-law --a 0.5 --b 0.5 --n 10 --trials 10 --seed 1 --out "
              "/nonexistent-dir/r.json")
              .code == 4);
    CHECK(cli("experiment --kind moment-check --a 0.5 --b 0.5 --n 10 --trials 10 --seed 1 "
              "--k-list 11 --out " +
              json.string())
              .code == 2);
  }
}

TEST_CASE("validate rejects damaged files") {
  const fs::path p = scratch() / "damaged.csv";
  REQUIRE(cli("experiment --kind shape-joint --a 0.5 --b 0.5 --n 100 --trials 5 --seed 3 "
              "--ks-threshold 1 --format csv --out " +
              p.string())
              .code == 0);
  std::string text = slurp(p);
  const std::string good = text;

  // Schema version bumped.
  text.replace(text.find("\n1,") + 1, 1, "2");
  std::ofstream(p) << text;
  CHECK(cli("--validate " + p.string()).code == 1);

  // Broken sum r1 + r2 = 0.
  text = good;
  const auto last_comma = text.rfind(',');
  text.replace(last_comma + 1, text.size() - last_comma - 2, "0.5");
  std::ofstream(p) << text;
  CHECK(cli("--validate " + p.string()).code == 1);

  std::ofstream(p) << "not a record file\n";
  CHECK(cli("--validate " + p.string()).code == 1);
  CHECK(cli("--validate " + (scratch() / "missing.json").string()).code != 0);
}
