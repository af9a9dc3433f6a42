#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliFixture {
 public:
  CliFixture() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("debias_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~CliFixture() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  const fs::path& dir() const { return dir_; }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
  }

  RunResult run(const std::string& args, const std::string& env = "") const {
    const fs::path out_file = dir_ / "stdout.txt";
    const fs::path err_file = dir_ / "stderr.txt";
    std::string cmd = env.empty() ? "" : env + " ";
    cmd += std::string("\"") + DEBIAS_CLI_PATH + "\" " + args + " > \"" + out_file.string() +
           "\" 2> \"" + err_file.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out_file);
    res.err = slurp(err_file);
    return res;
  }

 private:
  fs::path dir_;
};

std::string toy_table() {
  return
      "Y,R,X1,X2\n"
      "2.0,1,1.0,0.0\n"
      "-1.0,1,-0.5,0.2\n"
      "3.1,1,1.5,0.3\n"
      "0.4,1,0.2,-0.1\n"
      "-2.2,1,-1.1,0.5\n"
      "1.8,1,0.9,-0.4\n";
}

std::string random_table(int n, int d, double keep, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::ostringstream out;
  out << "Y,R";
  for (int j = 0; j < d; ++j) out << ",X" << (j + 1);
  out << "\n";
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) row[static_cast<size_t>(j)] = normal(rng);
    const bool observed = unif(rng) < keep;
    const double y = 1.5 * row[0] + 0.5 * normal(rng);
    if (observed)
      out << y << ",1";
    else
      out << ",0";
    for (int j = 0; j < d; ++j) out << ',' << row[static_cast<size_t>(j)];
    out << "\n";
  }
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("fit: fixed gamma past the activation threshold returns the plug-in value") {
  CliFixture fx;
  const fs::path data = fx.write("toy.csv", toy_table());
  const RunResult res = fx.run("fit --data \"" + data.string() + "\" --x 1,0 --gamma 50");
  REQUIRE(res.exit_code == 0);

  const nlohmann::json j = nlohmann::json::parse(res.out);
  CHECK(j["command"] == "fit");
  CHECK(j["gamma"] == 50.0);
  CHECK(j["variance_hat"] == 0.0);
  CHECK(j["ci_lower"] == j["m_hat"]);
  CHECK(j["ci_upper"] == j["m_hat"]);
  CHECK(j["solution"]["nonzero_ell"] == 0);
  CHECK(j["propensity"]["degenerate"] == true);  // fully observed mask
  CHECK(j["pilot"]["converged"] == true);
  CHECK_FALSE(j.contains("gamma_selection"));
}

TEST_CASE("fit: csv format carries the documented columns") {
  CliFixture fx;
  const fs::path data = fx.write("toy.csv", toy_table());
  const RunResult res =
      fx.run("fit --data \"" + data.string() + "\" --x 1,0 --gamma 50 --format csv");
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "m_hat,ci_lower,ci_upper,level,variance_hat,sigma,gamma,seed");
}

TEST_CASE("fit: malformed tables exit 2 and cite the line") {
  CliFixture fx;
  const fs::path data = fx.write("bad.csv",
                                 "Y,R,X1\n"
                                 "1.0,1,2.0\n"
                                 ",1,3.0\n");
  const RunResult res = fx.run("fit --data \"" + data.string() + "\" --x 1 --gamma 10");
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("line 3") != std::string::npos);
}

TEST_CASE("fit: identical invocations produce byte-identical reports") {
  CliFixture fx;
  const fs::path data = fx.write("table.csv", random_table(20, 3, 0.8, 99));
  const std::string args = "fit --data \"" + data.string() +
                           "\" --x 1,0,0 --seed 7 --gamma-points 9 --folds 4";
  const RunResult a = fx.run(args);
  REQUIRE(a.exit_code == 0);
  const RunResult b = fx.run(args);
  REQUIRE(b.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"gamma_selection\"") != std::string::npos);
}

TEST_CASE("fit: oracle propensities come from a file; bad values exit 2, bad length 3") {
  CliFixture fx;
  const fs::path data = fx.write("toy.csv", toy_table());
  const fs::path good = fx.write("pi.txt", "0.9 0.8 0.9\n0.7 0.95 1.0\n");
  const RunResult ok = fx.run("fit --data \"" + data.string() +
                              "\" --x 1,0 --gamma 50 --propensity oracle:" + good.string());
  CHECK(ok.exit_code == 0);

  const fs::path out_of_range = fx.write("pi_bad.txt", "0.9 1.5 0.9 0.7 0.95 1.0\n");
  const RunResult bad = fx.run("fit --data \"" + data.string() +
                               "\" --x 1,0 --gamma 50 --propensity oracle:" +
                               out_of_range.string());
  CHECK(bad.exit_code == 2);

  const fs::path short_pi = fx.write("pi_short.txt", "0.9 0.8 0.9\n");
  const RunResult wrong_len = fx.run("fit --data \"" + data.string() +
                                     "\" --x 1,0 --gamma 50 --propensity oracle:" +
                                     short_pi.string());
  CHECK(wrong_len.exit_code == 3);  // stage failure inside the pipeline
  CHECK(wrong_len.err.find("propensity") != std::string::npos);
}

TEST_CASE("fit: query flags are exclusive and dimension-checked") {
  CliFixture fx;
  const fs::path data = fx.write("toy.csv", toy_table());
  const fs::path qfile = fx.write("q.txt", "1,0\n");
  const RunResult both = fx.run("fit --data \"" + data.string() + "\" --x 1,0 --query-file \"" +
                                qfile.string() + "\" --gamma 50");
  CHECK(both.exit_code == 2);
  const RunResult neither = fx.run("fit --data \"" + data.string() + "\" --gamma 50");
  CHECK(neither.exit_code == 2);
  const RunResult wrong_d = fx.run("fit --data \"" + data.string() + "\" --x 1,0,0 --gamma 50");
  CHECK(wrong_d.exit_code == 2);
  const RunResult from_file =
      fx.run("fit --data \"" + data.string() + "\" --query-file \"" + qfile.string() +
             "\" --gamma 50");
  CHECK(from_file.exit_code == 0);
}

TEST_CASE("fit: logging is opt-in through the environment") {
  CliFixture fx;
  const fs::path data = fx.write("toy.csv", toy_table());
  const std::string args = "fit --data \"" + data.string() + "\" --x 1,0 --gamma 50";
  const RunResult quiet = fx.run(args);
  CHECK(quiet.err.find("[debias]") == std::string::npos);
  const RunResult loud = fx.run(args, "DEBIAS_LOG=1");
  CHECK(loud.err.find("[debias]") != std::string::npos);
  const RunResult off = fx.run(args, "DEBIAS_LOG=0");
  CHECK(off.err.find("[debias]") == std::string::npos);
}

TEST_CASE("cv: default grid has 41 ascending points and one minimum") {
  CliFixture fx;
  const fs::path data = fx.write("table.csv", random_table(20, 2, 1.0, 5));
  const RunResult res =
      fx.run("cv --data \"" + data.string() + "\" --x 1,0 --format csv --folds 4");
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 42);
  CHECK(lines[0] == "gamma,cv_mean,cv_se,feasible_all_folds,is_min_cv,is_1se,is_min_feas");
  double prev = 0.0;
  int n_min = 0;
  for (size_t k = 1; k < lines.size(); ++k) {
    std::istringstream row(lines[k]);
    std::string cell;
    std::getline(row, cell, ',');
    const double gamma = std::stod(cell);
    CHECK(gamma > prev);
    prev = gamma;
    for (int skip = 0; skip < 3; ++skip) std::getline(row, cell, ',');
    std::getline(row, cell, ',');
    n_min += cell == "1" ? 1 : 0;
  }
  CHECK(n_min == 1);
}

TEST_CASE("cv: a singleton explicit grid is chosen by every rule") {
  CliFixture fx;
  const fs::path data = fx.write("table.csv", random_table(20, 2, 1.0, 6));
  const RunResult res =
      fx.run("cv --data \"" + data.string() + "\" --x 1,0 --gammas 2.5 --folds 4");
  REQUIRE(res.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(res.out);
  REQUIRE(j["grid"].size() == 1);
  CHECK(j["grid"][0] == 2.5);
  CHECK(j["chosen"]["min_cv"] == 2.5);
  CHECK(j["chosen"]["one_se"] == 2.5);
  CHECK(j["one_se_fell_back"] == true);
}

TEST_CASE("simulate: writes the three tables and a JSON summary") {
  CliFixture fx;
  const std::string prefix = (fx.dir() / "sim").string();
  const RunResult res = fx.run(
      "simulate --design mcar --mcar-p 0.8 --n 40 --d 10 --reps 2 --seed 11 "
      "--propensity oracle --gamma-points 9 --gamma-rule min-feas --out \"" + prefix + "\"");
  REQUIRE(res.exit_code == 0);

  const nlohmann::json j = nlohmann::json::parse(res.out);
  CHECK(j["command"] == "simulate");
  CHECK(j["seed"] == 11);
  CHECK(j["design"]["missingness"] == "mcar");
  CHECK(j["metrics"].contains("coverage"));

  const auto metrics_lines = lines_of(slurp(prefix + "_metrics.csv"));
  REQUIRE(metrics_lines.size() == 2);
  CHECK(metrics_lines[0] == "avg_bias,coverage,avg_length,n_fail");

  const auto record_lines = lines_of(slurp(prefix + "_records.csv"));
  REQUIRE(record_lines.size() == 3);  // header + one row per replication
  CHECK(record_lines[0].rfind("rep,m_hat,m0,", 0) == 0);

  const long n_fail = j["metrics"]["n_fail"].get<long>();
  const auto qq_lines = lines_of(slurp(prefix + "_qq.csv"));
  CHECK(qq_lines.size() == static_cast<size_t>(1 + 2 - n_fail));
  CHECK(qq_lines[0] == "theoretical,empirical");
}

TEST_CASE("simulate: JSON config file overrides the flags") {
  CliFixture fx;
  const fs::path config = fx.write("design.json",
                                   "{\"n\": 30, \"d\": 9, \"missingness\": \"mcar\", "
                                   "\"mcar_p\": 0.9, \"replications\": 1, \"seed\": 3}");
  const std::string prefix = (fx.dir() / "cfg").string();
  const RunResult res =
      fx.run("simulate --config \"" + config.string() + "\" --n 999 --propensity oracle "
             "--gamma-points 9 --out \"" + prefix + "\"");
  REQUIRE(res.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(res.out);
  CHECK(j["design"]["n"] == 30);
  CHECK(j["design"]["d"] == 9);
  CHECK(j["seed"] == 3);

  const fs::path broken = fx.write("broken.json", "{\"n\": ");
  const RunResult bad = fx.run("simulate --config \"" + broken.string() + "\"");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("exit codes: parse failures 2, help 0") {
  CliFixture fx;
  CHECK(fx.run("").exit_code == 2);             // a subcommand is required
  CHECK(fx.run("--help").exit_code == 0);
  CHECK(fx.run("fit").exit_code == 2);          // --data is required
  CHECK(fx.run("frobnicate").exit_code == 2);
  const RunResult missing = fx.run("fit --data /nonexistent.csv --x 1 --gamma 5");
  CHECK(missing.exit_code == 2);
}
