#include "dcm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "dcm/dcm.hpp"
#include "dcm/eval.hpp"
#include "dcm/nystrom.hpp"

namespace dcm {

namespace {

struct Flags {
  std::string input, output, model, compare_model;
  std::string algorithm = "dcm";
  double epsilon = 1e-3;
  double gamma = 0.5;
  std::optional<double> gamma_y;
  Index m = 2;
  Index M = 100;
  std::uint64_t seed = 0;
  int reps = 20;
  double rhs_ridge = 0.0;
  double lambda = 1e-3;
  std::vector<std::string> feature_cols;
  std::string label_col = "y", domain_col = "d", label_kind = "discrete";
  // synth
  int domains = 10, dim = 10;
  double eta = 0.5, mean_count = 100.0, c = 0.5;
  bool fixed_sizes = false;
  // eval / bench
  std::vector<std::string> compare, metrics;
  std::vector<int> train_domains;
  std::vector<Index> sizes{1000, 2000, 4000, 8000};
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

CsvSchema schema(const Flags& f) {
  CsvSchema s;
  s.feature_cols = f.feature_cols;
  s.label_col = f.label_col;
  s.domain_col = f.domain_col;
  s.label_kind = f.label_kind == "continuous" ? LabelKind::Continuous
                                               : LabelKind::Discrete;
  return s;
}

SynthConfig synth_config(const Flags& f) {
  SynthConfig s;
  s.domains = f.domains;
  s.dim = f.dim;
  s.eta = f.eta;
  s.mean_count = f.mean_count;
  s.seed = f.seed;
  s.c = f.c;
  s.fixed_sizes = f.fixed_sizes;
  return s;
}

std::string sidecar_path(const std::string& output) {
  std::filesystem::path p(output);
  p.replace_extension(".json");
  if (p.string() == output) p += ".json";
  return p.string();
}

std::vector<double> to_vector(const VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

void cmd_synth(const Flags& f, std::ostream& out) {
  require(!f.output.empty(), "synth needs --output");
  const SynthConfig cfg = synth_config(f).resolved();
  const DataSet data = synth_generate(cfg);
  write_file(f.output, to_csv(data));
  nlohmann::ordered_json j;
  j["domains"] = cfg.domains;
  j["dim"] = cfg.dim;
  j["eta"] = cfg.eta;
  j["mean_count"] = cfg.mean_count;
  j["seed"] = cfg.seed;
  j["c"] = cfg.c;
  j["fixed_sizes"] = cfg.fixed_sizes;
  j["b1"] = to_vector(cfg.b1);
  j["b2"] = to_vector(cfg.b2);
  j["rows"] = data.size();
  write_file(sidecar_path(f.output), j.dump(2) + "\n");
  out << "wrote " << data.size() << " rows in " << cfg.domains
      << " domains to " << f.output << "\n";
}

ProjectionModel fit_from_flags(const Flags& f, const DataSet& data) {
  const Method method = Method::parse(f.algorithm);
  require(method.algorithm.has_value(),
          "baseline has no projection to fit; use eval");
  const KernelSet kernels = default_kernels(data, f.gamma, f.gamma_y);
  const DcmOptions dense{f.epsilon, f.m, f.rhs_ridge};
  const FastOptions fast{f.epsilon, f.m, f.M, f.seed};
  switch (*method.algorithm) {
    case Algorithm::DCM: return fit_dcm(data, kernels, dense);
    case Algorithm::COIR: return fit_coir(data, kernels, dense);
    case Algorithm::KPCA: return fit_kpca(data, kernels.x, f.m);
    case Algorithm::FastDCM: return fit_fastdcm(data, kernels, fast);
    case Algorithm::FastCOIR: return fit_fastcoir(data, kernels, fast);
  }
  fail(ErrorCode::InvalidInput, "unknown algorithm");
}

void cmd_fit(const Flags& f, std::ostream& out) {
  require(!f.input.empty() && !f.output.empty(),
          "fit needs --input and --output");
  const DataSet data = load_csv(f.input, schema(f));
  const ProjectionModel model = fit_from_flags(f, data);
  save_model(f.output, model);
  out << to_string(model.algorithm) << ": " << model.components()
      << " components from " << data.size() << " rows\n";
  out << "eigenvalues:";
  out << std::setprecision(10);
  for (Index k = 0; k < model.components(); ++k) {
    out << " " << model.eigenvalues(k);
  }
  out << "\n";
  if (!f.compare_model.empty()) {
    const ProjectionModel other = load_model(f.compare_model);
    require(other.training_size() == model.training_size(),
            "models were fitted on different row counts");
    require(other.components() == model.components(),
            "models have different component counts");
    const MatrixXd Kx = center_gram(gram(model.kernel, data.X));
    const VectorXd angles =
        principal_angles(model.coefficients, other.coefficients, Kx);
    out << "principal angles vs " << f.compare_model << ":";
    out << std::setprecision(3) << std::scientific;
    for (Index k = 0; k < angles.size(); ++k) out << " " << angles(k);
    out << "\nmax angle: " << angles.maxCoeff() << "\n";
  }
}

void cmd_transform(const Flags& f, std::ostream& out) {
  require(!f.model.empty() && !f.input.empty() && !f.output.empty(),
          "transform needs --model, --input and --output");
  const ProjectionModel model = load_model(f.model);
  const DataSet data = load_csv(f.input, schema(f));
  DataSet projected;
  projected.X = transform(model, data.X).transpose();
  projected.y = data.y;
  projected.d = data.d;
  for (Index k = 0; k < model.components(); ++k) {
    projected.feature_names.push_back("z" + std::to_string(k + 1));
  }
  write_csv(f.output, projected);
  out << "projected " << data.size() << " rows onto " << model.components()
      << " components\n";
}

void cmd_eval(const Flags& f, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.methods.clear();
  if (f.compare.empty()) {
    cfg.methods.push_back(Method::parse(f.algorithm));
  } else {
    for (const auto& name : f.compare) cfg.methods.push_back(Method::parse(name));
  }
  for (const auto& name : f.metrics) cfg.metrics.push_back(parse_metric(name));
  cfg.epsilon = f.epsilon;
  cfg.gamma = f.gamma;
  cfg.gamma_y = f.gamma_y;
  cfg.m = f.m;
  cfg.M = f.M;
  cfg.lambda = f.lambda;
  cfg.reps = f.reps;
  cfg.seed = f.seed;
  cfg.synth = synth_config(f);
  if (!f.input.empty()) cfg.data = load_csv(f.input, schema(f));
  cfg.train_domains.insert(f.train_domains.begin(), f.train_domains.end());

  const EvalReport report = run_experiment(cfg);
  out << report.to_text();
  if (!f.output.empty()) {
    std::filesystem::path base(f.output);
    base.replace_extension();
    write_file(base.string() + ".json", report.to_json());
    write_file(base.string() + ".txt", report.to_text());
    write_file(base.string() + ".csv", report.to_csv());
  }
}

void cmd_bench(const Flags& f, std::ostream& out) {
  std::vector<Method> methods;
  if (f.compare.empty()) {
    methods.push_back(Method::parse(f.algorithm));
  } else {
    for (const auto& name : f.compare) methods.push_back(Method::parse(name));
  }
  for (const auto& method : methods) {
    require(method.algorithm.has_value(), "bench times projection fits only");
  }
  require(!f.sizes.empty(), "bench needs at least one size");

  std::ostringstream csv;
  csv << "algorithm,N,M,seconds\n";
  for (Index n : f.sizes) {
    require(n >= f.domains, "bench size must be at least the domain count");
    SynthConfig sc = synth_config(f);
    sc.fixed_sizes = true;
    sc.mean_count = static_cast<double>(n) / sc.domains;
    DataSet data = synth_generate(sc);
    for (const Method& method : methods) {
      Flags g = f;
      g.algorithm = method.name();
      // Minimum over repetitions; timer noise only ever adds.
      double s = INFINITY;
      for (int rep = 0; rep < std::max(1, f.reps); ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        fit_from_flags(g, data);
        s = std::min(s, std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count());
      }
      csv << method.name() << "," << data.size() << ","
          << (is_fast(*method.algorithm) ? f.M : data.size()) << ","
          << std::setprecision(6) << s << "\n";
    }
  }
  out << csv.str();
  if (!f.output.empty()) write_file(f.output, csv.str());
}

void add_shared(CLI::App* sub, Flags& f) {
  sub->add_option("--input", f.input, "input CSV");
  sub->add_option("--output", f.output, "output path");
  sub->add_option("--algorithm", f.algorithm,
                  "dcm, coir, kpca, fastdcm, fastcoir or baseline")
      ->check(CLI::IsMember(
          {"dcm", "coir", "kpca", "fastdcm", "fastcoir", "baseline"}));
  sub->add_option("--epsilon", f.epsilon, "regularization epsilon")
      ->check(CLI::PositiveNumber);
  sub->add_option("--gamma", f.gamma, "RBF gamma for inputs")
      ->check(CLI::PositiveNumber);
  sub->add_option("--gamma-y", f.gamma_y,
                  "RBF gamma for continuous outputs (default: median rule)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--m", f.m, "number of components");
  sub->add_option("--M", f.M, "number of landmarks");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--reps", f.reps, "repetitions");
  sub->add_option("--feature-cols", f.feature_cols, "feature columns")
      ->delimiter(',');
  sub->add_option("--label-col", f.label_col, "label column");
  sub->add_option("--domain-col", f.domain_col, "domain column");
  sub->add_option("--label-kind", f.label_kind, "discrete or continuous")
      ->check(CLI::IsMember({"discrete", "continuous"}));
}

void add_synth_shape(CLI::App* sub, Flags& f) {
  sub->add_option("--domains", f.domains, "number of domains T");
  sub->add_option("--dim", f.dim, "input dimension");
  sub->add_option("--eta", f.eta, "Wishart scale");
  sub->add_option("--mean-count", f.mean_count, "mean rows per domain");
  sub->add_option("--c", f.c, "offset inside the label log");
  sub->add_flag("--fixed-sizes", f.fixed_sizes,
                "exactly mean-count rows per domain");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Domain-based covariance minimization"};
  app.require_subcommand(1);
  Flags f;

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  add_shared(synth, f);
  add_synth_shape(synth, f);

  auto* fit = app.add_subcommand("fit", "fit a projection model");
  add_shared(fit, f);
  fit->add_option("--rhs-ridge", f.rhs_ridge,
                  "ridge added to the right-hand operator (dense only)");
  fit->add_option("--compare-model", f.compare_model,
                  "report principal angles against another model");

  auto* tr = app.add_subcommand("transform", "project rows with a model");
  add_shared(tr, f);
  tr->add_option("--model", f.model, "model file")->required();

  auto* eval = app.add_subcommand("eval", "repeated train/test evaluation");
  add_shared(eval, f);
  add_synth_shape(eval, f);
  eval->add_option("--compare", f.compare, "methods to compare")
      ->delimiter(',');
  eval->add_option("--metrics", f.metrics, "accuracy, auc, gmean, rmse")
      ->delimiter(',')
      ->check(CLI::IsMember({"accuracy", "auc", "gmean", "rmse"}));
  eval->add_option("--lambda", f.lambda, "ridge lambda of the predictor")
      ->check(CLI::PositiveNumber);
  eval->add_option("--train-domains", f.train_domains,
                   "domains used for training (default: first 70%)")
      ->delimiter(',');

  auto* bench = app.add_subcommand("bench", "time fits over a size sweep");
  add_shared(bench, f);
  add_synth_shape(bench, f);
  bench->add_option("--sizes", f.sizes, "values of N")->delimiter(',');
  bench->add_option("--compare", f.compare, "algorithms to time")
      ->delimiter(',');

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return 64;
  }

  // Timing repetitions are opt-in for bench.
  if (bench->parsed() && bench->count("--reps") == 0) f.reps = 1;

  try {
    if (f.m < 1) fail(ErrorCode::InvalidInput, "--m must be >= 1");
    const bool fast =
        f.algorithm == "fastdcm" || f.algorithm == "fastcoir" ||
        std::any_of(f.compare.begin(), f.compare.end(), [](const auto& a) {
          return a == "fastdcm" || a == "fastcoir";
        });
    if (fast && f.m > f.M) {
      fail(ErrorCode::InvalidInput,
           "--m (" + std::to_string(f.m) + ") must not exceed --M (" +
               std::to_string(f.M) + ") for fast algorithms");
    }
    if (synth->parsed()) cmd_synth(f, out);
    if (fit->parsed()) cmd_fit(f, out);
    if (tr->parsed()) cmd_transform(f, out);
    if (eval->parsed()) cmd_eval(f, out);
    if (bench->parsed()) cmd_bench(f, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return 70;
  }
  return 0;
}

}  // namespace dcm
