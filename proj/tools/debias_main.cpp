#include "debias/inference.hpp"
#include "debias/simgen.hpp"
#include "debias/stats.hpp"
#include "debias/table_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace {

using debias::format_double;

int log_level() {
  const char* env = std::getenv("DEBIAS_LOG");
  if (!env || !*env) return 0;
  const int level = std::atoi(env);
  return level > 0 ? level : 0;
}

void log_line(const std::string& message) {
  if (log_level() > 0) std::cerr << "[debias] " << message << "\n";
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw debias::ValidationError("cannot write output file '" + out_path + "'");
  file << content;
}

struct FitOptions {
  std::string data_path;
  std::string x_inline;
  std::string query_path;
  std::string gamma_rule = "1se";
  std::string propensity = "logistic-lasso";
  std::string out_path;
  std::string format = "json";
  double level = 0.95;
  double fixed_gamma = 0.0;
  double sigma = 0.0;
  uint64_t seed = 0;
  int folds = 5;
  int gamma_points = 41;
};

debias::QueryPoint load_query(const FitOptions& opt, debias::Index d) {
  if (!opt.x_inline.empty() && !opt.query_path.empty())
    throw debias::ValidationError("use either --x or --query-file, not both");
  debias::Vector x;
  if (!opt.x_inline.empty())
    x = debias::parse_vector(opt.x_inline);
  else if (!opt.query_path.empty())
    x = debias::read_vector_file(opt.query_path);
  else
    throw debias::ValidationError("a query point is required (--x or --query-file)");
  if (x.size() != d)
    throw debias::ValidationError("query has " + std::to_string(x.size()) +
                                  " coordinates but the table has " + std::to_string(d) +
                                  " covariates");
  return debias::QueryPoint(std::move(x));
}

std::shared_ptr<const debias::PropensityEstimator> make_estimator(const std::string& spec,
                                                                  const FitOptions& opt) {
  if (spec == "logistic-lasso") {
    debias::LassoConfig cfg;
    return std::make_shared<debias::LogisticLassoCv>(opt.folds, opt.seed, cfg);
  }
  if (spec.rfind("oracle:", 0) == 0) {
    const std::string path = spec.substr(7);
    if (path.empty())
      throw debias::ValidationError("--propensity oracle:<path> needs a file of probabilities");
    return std::make_shared<debias::OraclePropensity>(debias::read_vector_file(path));
  }
  throw debias::ValidationError("unknown propensity estimator '" + spec +
                                "' (expected logistic-lasso or oracle:<path>)");
}

debias::PipelineConfig pipeline_config(const FitOptions& opt) {
  debias::PipelineConfig cfg;
  cfg.gamma_rule = debias::gamma_rule_from_string(opt.gamma_rule);
  cfg.level = opt.level;
  cfg.seed = opt.seed;
  cfg.cv_folds = opt.folds;
  cfg.gamma_points = opt.gamma_points;
  if (opt.fixed_gamma > 0.0) cfg.fixed_gamma = opt.fixed_gamma;
  if (opt.sigma > 0.0) cfg.sigma_override = opt.sigma;
  cfg.propensity = make_estimator(opt.propensity, opt);
  return cfg;
}

std::string fit_to_json(const debias::PipelineResult& res, const FitOptions& opt) {
  const debias::InferenceResult& inf = res.inference;
  std::ostringstream out;
  out << "{\n";
  out << "  \"command\": \"fit\",\n";
  out << "  \"seed\": " << opt.seed << ",\n";
  out << "  \"gamma_rule\": \"" << json_escape(opt.gamma_rule) << "\",\n";
  out << "  \"m_hat\": " << format_double(inf.m_hat) << ",\n";
  out << "  \"ci_lower\": " << format_double(inf.ci_lower) << ",\n";
  out << "  \"ci_upper\": " << format_double(inf.ci_upper) << ",\n";
  out << "  \"level\": " << format_double(inf.level) << ",\n";
  out << "  \"variance_hat\": " << format_double(inf.variance_hat) << ",\n";
  out << "  \"sigma\": " << format_double(inf.sigma_used) << ",\n";
  out << "  \"gamma\": " << format_double(res.solution.gamma) << ",\n";

  const debias::PilotFit& pilot = res.pilot;
  long nonzero_beta = 0;
  for (debias::Index j = 0; j < pilot.beta_hat.size(); ++j)
    if (pilot.beta_hat[j] != 0.0) ++nonzero_beta;
  out << "  \"pilot\": {\"sigma_hat\": " << format_double(pilot.sigma_hat)
      << ", \"lambda\": " << format_double(pilot.lambda)
      << ", \"iterations\": " << pilot.iterations
      << ", \"converged\": " << (pilot.converged ? "true" : "false")
      << ", \"nonzero_coefficients\": " << nonzero_beta << "},\n";

  const debias::PropensityEstimate& prop = res.propensity;
  out << "  \"propensity\": {\"method\": \"" << json_escape(opt.propensity) << "\"";
  if (prop.zeta) out << ", \"zeta\": " << format_double(*prop.zeta);
  out << ", \"degenerate\": " << (prop.degenerate ? "true" : "false")
      << ", \"converged\": " << (prop.converged ? "true" : "false") << "},\n";

  const debias::DebiasSolution& sol = res.solution;
  long nonzero_ell = 0;
  for (debias::Index j = 0; j < sol.ell_hat.size(); ++j)
    if (sol.ell_hat[j] != 0.0) ++nonzero_ell;
  out << "  \"solution\": {\"dual_objective\": " << format_double(sol.dual_objective)
      << ", \"sweeps\": " << sol.sweeps
      << ", \"converged\": " << (sol.converged ? "true" : "false")
      << ", \"primal_feasible\": " << (sol.primal_feasible ? "true" : "false")
      << ", \"constraint_sup_norm\": " << format_double(sol.constraint_sup_norm)
      << ", \"nonzero_ell\": " << nonzero_ell
      << ", \"monotonicity_violations\": " << sol.monotonicity_violations << "}";

  if (res.gamma_selection) {
    const debias::GammaSelection& sel = *res.gamma_selection;
    out << ",\n  \"gamma_selection\": {\"min_cv\": " << format_double(sel.chosen_min_cv)
        << ", \"one_se\": " << format_double(sel.chosen_one_se) << ", \"min_feas\": ";
    if (sel.chosen_min_feas)
      out << format_double(*sel.chosen_min_feas);
    else
      out << "null";
    out << ", \"one_se_fell_back\": " << (sel.one_se_fell_back ? "true" : "false")
        << ", \"folds\": " << sel.folds << "}";
  }
  out << "\n}\n";
  return out.str();
}

std::string fit_to_csv(const debias::PipelineResult& res, const FitOptions& opt) {
  const debias::InferenceResult& inf = res.inference;
  std::ostringstream out;
  out << "m_hat,ci_lower,ci_upper,level,variance_hat,sigma,gamma,seed\n";
  out << format_double(inf.m_hat) << ',' << format_double(inf.ci_lower) << ','
      << format_double(inf.ci_upper) << ',' << format_double(inf.level) << ','
      << format_double(inf.variance_hat) << ',' << format_double(inf.sigma_used) << ','
      << format_double(res.solution.gamma) << ',' << opt.seed << "\n";
  return out.str();
}

int cmd_fit(const FitOptions& opt) {
  const debias::Dataset data = debias::read_dataset_csv_file(opt.data_path);
  log_line("fit: read " + std::to_string(data.n()) + " rows, " + std::to_string(data.dim()) +
           " covariates, " + std::to_string(data.n_complete()) + " complete cases");
  const debias::QueryPoint x = load_query(opt, data.dim());
  const debias::PipelineResult res = debias::run_pipeline(data, x, pipeline_config(opt));
  log_line("fit: m_hat = " + format_double(res.inference.m_hat));
  if (opt.format == "json")
    write_output(opt.out_path, fit_to_json(res, opt));
  else if (opt.format == "csv")
    write_output(opt.out_path, fit_to_csv(res, opt));
  else
    throw debias::ValidationError("unknown format '" + opt.format + "' (expected json or csv)");
  return 0;
}

int cmd_cv(const FitOptions& opt, const std::string& gammas_inline) {
  const debias::Dataset data = debias::read_dataset_csv_file(opt.data_path);
  const debias::QueryPoint x = load_query(opt, data.dim());

  const debias::PropensityEstimate prop =
      make_estimator(opt.propensity, opt)->fit(data.covariates(), data.mask());

  debias::GammaSelection sel;
  if (!gammas_inline.empty()) {
    const debias::Vector g = debias::parse_vector(gammas_inline);
    std::vector<double> grid(g.data(), g.data() + g.size());
    std::sort(grid.begin(), grid.end());
    std::vector<int> fold_of(static_cast<size_t>(data.n()));
    std::mt19937_64 rng(opt.seed);
    std::vector<debias::Index> perm(static_cast<size_t>(data.n()));
    std::iota(perm.begin(), perm.end(), debias::Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (size_t k = 0; k < perm.size(); ++k)
      fold_of[static_cast<size_t>(perm[k])] =
          static_cast<int>(k % static_cast<size_t>(opt.folds));
    sel = debias::cv_gamma_folds(data.covariates(), prop.pi_hat, x, fold_of, grid,
                                 debias::DualConfig{});
    sel.seed = opt.seed;
  } else {
    debias::TuningConfig tc;
    tc.folds = opt.folds;
    tc.points = opt.gamma_points;
    tc.seed = opt.seed;
    sel = debias::cv_gamma(data.covariates(), prop.pi_hat, x, tc);
  }

  std::ostringstream out;
  if (opt.format == "json") {
    auto arr = [&](const std::vector<double>& v) {
      std::string s = "[";
      for (size_t k = 0; k < v.size(); ++k) {
        if (k) s += ", ";
        s += format_double(v[k]);
      }
      return s + "]";
    };
    out << "{\n  \"command\": \"cv\",\n  \"seed\": " << sel.seed
        << ",\n  \"folds\": " << sel.folds << ",\n  \"grid\": " << arr(sel.grid)
        << ",\n  \"cv_mean\": " << arr(sel.cv_mean) << ",\n  \"cv_se\": " << arr(sel.cv_se)
        << ",\n  \"feasible_all_folds\": [";
    for (size_t k = 0; k < sel.feasible_all_folds.size(); ++k) {
      if (k) out << ", ";
      out << (sel.feasible_all_folds[k] ? "true" : "false");
    }
    out << "],\n  \"chosen\": {\"min_cv\": " << format_double(sel.chosen_min_cv)
        << ", \"one_se\": " << format_double(sel.chosen_one_se) << ", \"min_feas\": ";
    if (sel.chosen_min_feas)
      out << format_double(*sel.chosen_min_feas);
    else
      out << "null";
    out << "},\n  \"one_se_fell_back\": " << (sel.one_se_fell_back ? "true" : "false")
        << ",\n  \"conventions\": {\"held_out_penalty\": \"gamma/n\", "
        << "\"one_se_side\": \"below-min-cv\"}\n}\n";
  } else if (opt.format == "csv") {
    out << "gamma,cv_mean,cv_se,feasible_all_folds,is_min_cv,is_1se,is_min_feas\n";
    for (size_t k = 0; k < sel.grid.size(); ++k) {
      const double g = sel.grid[k];
      out << format_double(g) << ',' << format_double(sel.cv_mean[k]) << ','
          << format_double(sel.cv_se[k]) << ',' << (sel.feasible_all_folds[k] ? 1 : 0) << ','
          << (g == sel.chosen_min_cv ? 1 : 0) << ',' << (g == sel.chosen_one_se ? 1 : 0) << ','
          << (sel.chosen_min_feas && g == *sel.chosen_min_feas ? 1 : 0) << "\n";
    }
  } else {
    throw debias::ValidationError("unknown format '" + opt.format + "' (expected json or csv)");
  }
  write_output(opt.out_path, out.str());
  return 0;
}

struct SimulateOptions {
  std::string config_path;
  std::string covariance = "identity";
  std::string beta = "sparse";
  std::string query = "x1";
  std::string noise = "gaussian";
  std::string missingness = "mcar";
  std::string propensity = "logistic-lasso";
  std::string gamma_rule = "1se";
  std::string out_prefix = "debias_sim";
  double mcar_p = 0.7;
  double level = 0.95;
  long n = 200;
  long d = 50;
  int reps = 100;
  int threads = 1;
  int folds = 5;
  int gamma_points = 41;
  uint64_t seed = 0;
};

debias::SimDesign design_from_options(const SimulateOptions& opt) {
  debias::SimDesign design;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in)
      throw debias::ValidationError("cannot open config file '" + opt.config_path + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw debias::ValidationError("config file '" + opt.config_path + "': " + e.what());
    }
    if (doc.contains("n")) design.n = doc["n"].get<long>();
    if (doc.contains("d")) design.d = doc["d"].get<long>();
    if (doc.contains("covariance"))
      design.covariance = debias::covariance_from_string(doc["covariance"].get<std::string>());
    if (doc.contains("beta"))
      design.beta_design = debias::beta_from_string(doc["beta"].get<std::string>());
    if (doc.contains("query"))
      design.query_design = debias::query_from_string(doc["query"].get<std::string>());
    if (doc.contains("noise"))
      design.noise = debias::noise_from_string(doc["noise"].get<std::string>());
    if (doc.contains("missingness"))
      design.missingness = debias::missing_from_string(doc["missingness"].get<std::string>());
    if (doc.contains("mcar_p")) design.mcar_p = doc["mcar_p"].get<double>();
    if (doc.contains("replications")) design.replications = doc["replications"].get<int>();
    if (doc.contains("seed")) design.seed = doc["seed"].get<uint64_t>();
    return design;
  }
  design.n = opt.n;
  design.d = opt.d;
  design.covariance = debias::covariance_from_string(opt.covariance);
  design.beta_design = debias::beta_from_string(opt.beta);
  design.query_design = debias::query_from_string(opt.query);
  design.noise = debias::noise_from_string(opt.noise);
  design.missingness = debias::missing_from_string(opt.missingness);
  design.mcar_p = opt.mcar_p;
  design.replications = opt.reps;
  design.seed = opt.seed;
  return design;
}

int cmd_simulate(const SimulateOptions& opt) {
  const debias::SimDesign design = design_from_options(opt);

  debias::PropensityChoice choice;
  if (opt.propensity == "logistic-lasso")
    choice = debias::PropensityChoice::LogisticLassoCv;
  else if (opt.propensity == "oracle")
    choice = debias::PropensityChoice::OracleTruth;
  else
    throw debias::ValidationError("unknown propensity estimator '" + opt.propensity +
                                  "' (expected logistic-lasso or oracle)");

  debias::PipelineConfig cfg;
  cfg.gamma_rule = debias::gamma_rule_from_string(opt.gamma_rule);
  cfg.level = opt.level;
  cfg.cv_folds = opt.folds;
  cfg.gamma_points = opt.gamma_points;

  log_line("simulate: n=" + std::to_string(design.n) + " d=" + std::to_string(design.d) +
           " reps=" + std::to_string(design.replications));
  const debias::SimMetrics metrics =
      debias::run_monte_carlo(design, cfg, choice, opt.threads);

  const std::string metrics_path = opt.out_prefix + "_metrics.csv";
  {
    std::ostringstream out;
    out << "avg_bias,coverage,avg_length,n_fail\n";
    out << format_double(metrics.avg_bias) << ',' << format_double(metrics.coverage) << ','
        << format_double(metrics.avg_length) << ',' << metrics.n_fail << "\n";
    write_output(metrics_path, out.str());
  }

  const std::string records_path = opt.out_prefix + "_records.csv";
  {
    std::ostringstream out;
    out << "rep,m_hat,m0,ci_lower,ci_upper,covered,sigma_hat,variance_hat,gamma,studentized,"
           "failed,error\n";
    for (const debias::RepRecord& rec : metrics.records) {
      out << rec.rep << ',' << format_double(rec.m_hat) << ',' << format_double(rec.m0) << ','
          << format_double(rec.ci_lower) << ',' << format_double(rec.ci_upper) << ','
          << (rec.covered ? 1 : 0) << ',' << format_double(rec.sigma_hat) << ','
          << format_double(rec.variance_hat) << ',' << format_double(rec.gamma) << ','
          << format_double(rec.studentized) << ',' << (rec.failed ? 1 : 0) << ','
          << csv_escape(rec.error) << "\n";
    }
    write_output(records_path, out.str());
  }

  const std::string qq_path = opt.out_prefix + "_qq.csv";
  {
    std::vector<double> sorted = metrics.studentized;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream out;
    out << "theoretical,empirical\n";
    const size_t m = sorted.size();
    for (size_t i = 0; i < m; ++i) {
      const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
      out << format_double(debias::normal_quantile(p)) << ',' << format_double(sorted[i])
          << "\n";
    }
    write_output(qq_path, out.str());
  }

  std::ostringstream summary;
  summary << "{\n  \"command\": \"simulate\",\n  \"seed\": " << design.seed
          << ",\n  \"design\": {\"n\": " << design.n << ", \"d\": " << design.d
          << ", \"covariance\": \"" << debias::to_string(design.covariance)
          << "\", \"beta\": \"" << debias::to_string(design.beta_design)
          << "\", \"query\": \"" << debias::to_string(design.query_design)
          << "\", \"noise\": \"" << debias::to_string(design.noise)
          << "\", \"missingness\": \"" << debias::to_string(design.missingness)
          << "\", \"mcar_p\": " << format_double(design.mcar_p)
          << ", \"replications\": " << design.replications << "},\n"
          << "  \"propensity\": \"" << json_escape(opt.propensity) << "\",\n"
          << "  \"gamma_rule\": \"" << json_escape(opt.gamma_rule) << "\",\n"
          << "  \"level\": " << format_double(opt.level) << ",\n"
          << "  \"metrics\": {\"avg_bias\": " << format_double(metrics.avg_bias)
          << ", \"coverage\": " << format_double(metrics.coverage)
          << ", \"avg_length\": " << format_double(metrics.avg_length)
          << ", \"n_fail\": " << metrics.n_fail << "},\n"
          << "  \"monotonicity_violations\": " << metrics.monotonicity_violations << ",\n"
          << "  \"files\": {\"metrics\": \"" << json_escape(metrics_path)
          << "\", \"records\": \"" << json_escape(records_path) << "\", \"qq\": \""
          << json_escape(qq_path) << "\"}\n}\n";
  std::cout << summary.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Debiased inference on x'beta for sparse linear models with missing outcomes"};
  app.require_subcommand(1);

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Estimate and test m(x) = x'beta from a CSV table");
  fit_cmd->add_option("--data", fit.data_path, "CSV table with columns Y,R,X1..Xd")->required();
  fit_cmd->add_option("--x", fit.x_inline, "inline query point, e.g. 1,0,0.5");
  fit_cmd->add_option("--query-file", fit.query_path, "file holding the query point");
  fit_cmd->add_option("--gamma-rule", fit.gamma_rule, "min-cv | 1se | min-feas (default 1se)");
  fit_cmd->add_option("--level", fit.level, "confidence level (default 0.95)");
  fit_cmd->add_option("--seed", fit.seed, "seed for fold assignment (default 0)");
  fit_cmd->add_option("--propensity", fit.propensity, "logistic-lasso | oracle:<path>");
  fit_cmd->add_option("--gamma", fit.fixed_gamma, "fixed gamma, bypasses cross-validation");
  fit_cmd->add_option("--sigma", fit.sigma, "noise level override (default: scaled Lasso)");
  fit_cmd->add_option("--folds", fit.folds, "cross-validation folds (default 5)");
  fit_cmd->add_option("--gamma-points", fit.gamma_points, "gamma grid size (default 41)");
  fit_cmd->add_option("--out", fit.out_path, "output path (default stdout)");
  fit_cmd->add_option("--format", fit.format, "json | csv (default json)");

  FitOptions cv;
  std::string cv_gammas;
  CLI::App* cv_cmd = app.add_subcommand("cv", "Report the gamma cross-validation curve");
  cv_cmd->add_option("--data", cv.data_path, "CSV table with columns Y,R,X1..Xd")->required();
  cv_cmd->add_option("--x", cv.x_inline, "inline query point");
  cv_cmd->add_option("--query-file", cv.query_path, "file holding the query point");
  cv_cmd->add_option("--seed", cv.seed, "seed for fold assignment (default 0)");
  cv_cmd->add_option("--propensity", cv.propensity, "logistic-lasso | oracle:<path>");
  cv_cmd->add_option("--folds", cv.folds, "cross-validation folds (default 5)");
  cv_cmd->add_option("--gamma-points", cv.gamma_points, "gamma grid size (default 41)");
  cv_cmd->add_option("--gammas", cv_gammas, "explicit gamma grid, e.g. 0.5,1,2");
  cv_cmd->add_option("--out", cv.out_path, "output path (default stdout)");
  cv_cmd->add_option("--format", cv.format, "json | csv (default json)");

  SimulateOptions sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo coverage harness");
  sim_cmd->add_option("--config", sim.config_path, "JSON design file (flags are ignored)");
  sim_cmd->add_option("--n", sim.n, "sample size (default 200)");
  sim_cmd->add_option("--d", sim.d, "dimension (default 50)");
  sim_cmd->add_option("--covariance", sim.covariance,
                      "circulant-symmetric | toeplitz-ar | identity");
  sim_cmd->add_option("--beta", sim.beta, "sparse | dense | pseudo-dense");
  sim_cmd->add_option("--query", sim.query, "x1 | x2 | x3 | x4");
  sim_cmd->add_option("--noise", sim.noise, "gaussian | laplace | t2");
  sim_cmd->add_option("--design,--missingness", sim.missingness,
                      "mcar | mar-logistic | mar-probit-quadratic");
  sim_cmd->add_option("--mcar-p", sim.mcar_p, "P(R=1) under mcar (default 0.7)");
  sim_cmd->add_option("--reps", sim.reps, "replications (default 100)");
  sim_cmd->add_option("--seed", sim.seed, "master seed (default 0)");
  sim_cmd->add_option("--threads", sim.threads, "worker count, 0 = hardware (default 1)");
  sim_cmd->add_option("--gamma-rule", sim.gamma_rule, "min-cv | 1se | min-feas (default 1se)");
  sim_cmd->add_option("--level", sim.level, "confidence level (default 0.95)");
  sim_cmd->add_option("--folds", sim.folds, "cross-validation folds (default 5)");
  sim_cmd->add_option("--gamma-points", sim.gamma_points, "gamma grid size (default 41)");
  sim_cmd->add_option("--propensity", sim.propensity, "logistic-lasso | oracle");
  sim_cmd->add_option("--out", sim.out_prefix, "output file prefix (default debias_sim)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (cv_cmd->parsed()) return cmd_cv(cv, cv_gammas);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    std::cerr << "error: no subcommand given\n";
    return 2;
  } catch (const debias::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const debias::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
