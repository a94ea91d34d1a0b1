#include <json.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "dcm/dcm.hpp"
#include "dcm/eval.hpp"

namespace dcm {

std::string Method::name() const {
  return algorithm ? std::string(to_string(*algorithm)) : "baseline";
}

Method Method::parse(std::string_view name) {
  if (name == "baseline") return baseline();
  return Method{parse_algorithm(name)};
}

void ExperimentConfig::validate() const {
  require(!methods.empty(), "no methods to evaluate");
  require(reps >= 1, "repetitions must be >= 1");
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be positive");
  require(std::isfinite(lambda) && lambda > 0.0, "lambda must be positive");
  require(m >= 1, "m must be >= 1");
  for (const Method& method : methods) {
    if (method.algorithm && is_fast(*method.algorithm)) {
      require(m <= M, "m (" + std::to_string(m) + ") must not exceed M (" +
                          std::to_string(M) + ") for fast algorithms");
    }
  }
  if (!data) synth.validate();
}

MetricSummary summarize(std::vector<double> values) {
  MetricSummary s;
  const double n = static_cast<double>(values.size());
  if (!values.empty()) {
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.std = std::sqrt(ss / (n - 1.0));
    }
  }
  s.values = std::move(values);
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Metric> resolve_metrics(const ExperimentConfig& config,
                                    LabelKind kind) {
  if (!config.metrics.empty()) {
    for (Metric m : config.metrics) {
      if (m != Metric::RMSE && kind == LabelKind::Continuous) {
        fail(ErrorCode::InvalidInput,
             std::string(to_string(m)) + " needs discrete labels");
      }
    }
    return config.metrics;
  }
  if (kind == LabelKind::Continuous) return {Metric::RMSE};
  return {Metric::Accuracy, Metric::AUC, Metric::GMean};
}

// Train labels fix the -1/+1 coding; test labels must use the same values.
std::pair<VectorXd, VectorXd> coded_targets(const DataSet& train,
                                            const DataSet& test) {
  const VectorXd tr = binary_targets(train.y);
  const double lo = train.y.minCoeff();
  const double hi = train.y.maxCoeff();
  VectorXd te(test.y.size());
  for (Index i = 0; i < te.size(); ++i) {
    if (test.y(i) == hi) {
      te(i) = 1.0;
    } else if (test.y(i) == lo) {
      te(i) = -1.0;
    } else {
      fail(ErrorCode::InvalidInput, "test set has a label unseen in training");
    }
  }
  return {tr, te};
}

std::set<int> default_train_domains(const DataSet& data) {
  const std::set<int> all = data.domains();
  const auto count = static_cast<std::size_t>(
      std::lround(0.7 * static_cast<double>(all.size())));
  std::set<int> train;
  for (int d : all) {
    if (train.size() >= count) break;
    train.insert(d);
  }
  return train;
}

}  // namespace

std::map<std::string, double> evaluate_once(
    const Method& method, const DataSet& train, const DataSet& test,
    const ExperimentConfig& config, std::uint64_t seed,
    std::map<std::string, double>* stage_seconds) {
  const KernelSet kernels = default_kernels(train, config.gamma, config.gamma_y);
  MatrixXd f_train, f_test;

  auto t0 = Clock::now();
  if (!method.algorithm) {
    const MatrixXd K = gram(kernels.x, train.X);
    f_train = center_gram(K);
    const double fit_time = seconds_since(t0);
    t0 = Clock::now();
    f_test = center_cross(cross_gram(kernels.x, train.X, test.X), K);
    if (stage_seconds) {
      (*stage_seconds)["fit"] += fit_time;
      (*stage_seconds)["transform"] += seconds_since(t0);
    }
  } else {
    ProjectionModel model;
    DcmOptions dense{config.epsilon, config.m, 0.0};
    FastOptions fast{config.epsilon, config.m, config.M, seed};
    switch (*method.algorithm) {
      case Algorithm::DCM: model = fit_dcm(train, kernels, dense); break;
      case Algorithm::COIR: model = fit_coir(train, kernels, dense); break;
      case Algorithm::KPCA: model = fit_kpca(train, kernels.x, config.m); break;
      case Algorithm::FastDCM: model = fit_fastdcm(train, kernels, fast); break;
      case Algorithm::FastCOIR: model = fit_fastcoir(train, kernels, fast); break;
    }
    const double fit_time = seconds_since(t0);
    t0 = Clock::now();
    f_train = transform(model, train.X);
    f_test = transform(model, test.X);
    if (stage_seconds) {
      (*stage_seconds)["fit"] += fit_time;
      (*stage_seconds)["transform"] += seconds_since(t0);
    }
  }

  t0 = Clock::now();
  const std::vector<Metric> metrics = resolve_metrics(config, train.label_kind);
  std::map<std::string, double> out;
  if (train.label_kind == LabelKind::Continuous) {
    const RidgePredictor p = krr_fit(f_train, train.y, config.lambda);
    const VectorXd pred = p.predict(f_test);
    for (Metric m : metrics) {
      out[std::string(to_string(m))] = metric_rmse(pred, test.y);
    }
  } else {
    const auto [y_train, y_test] = coded_targets(train, test);
    const RidgePredictor p = krr_fit(f_train, y_train, config.lambda);
    const VectorXd scores = p.predict(f_test);
    for (Metric m : metrics) {
      double v = 0.0;
      switch (m) {
        case Metric::Accuracy: v = metric_accuracy(scores, y_test); break;
        case Metric::AUC: v = metric_auc(scores, y_test); break;
        case Metric::GMean: {
          const Confusion c = confusion(scores, y_test);
          v = metric_gmean(c.tp, c.fn, c.tn, c.fp);
          break;
        }
        case Metric::RMSE: v = metric_rmse(scores, y_test); break;
      }
      out[std::string(to_string(m))] = v;
    }
  }
  if (stage_seconds) (*stage_seconds)["predict"] += seconds_since(t0);
  return out;
}

EvalReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  EvalReport report;
  report.config = config;
  report.config.data.reset();  // the echo does not carry the data

  std::vector<std::map<std::string, std::vector<double>>> values(
      config.methods.size());
  report.rows.resize(config.methods.size());
  for (std::size_t k = 0; k < config.methods.size(); ++k) {
    report.rows[k].method = config.methods[k].name();
  }

  for (int rep = 0; rep < config.reps; ++rep) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(rep);
    report.seeds.push_back(seed);
    DataSet data;
    if (config.data) {
      data = *config.data;
    } else {
      SynthConfig sc = config.synth;
      sc.seed = seed;
      data = synth_generate(sc);
    }
    const std::set<int> train_domains = config.train_domains.empty()
                                            ? default_train_domains(data)
                                            : config.train_domains;
    const auto [train, test] = split_domains(data, train_domains);

    for (std::size_t k = 0; k < config.methods.size(); ++k) {
      const Method& method = config.methods[k];
      std::map<std::string, double> result;
      try {
        result = evaluate_once(method, train, test, config, seed,
                               &report.rows[k].stage_seconds);
      } catch (const Error& e) {
        fail(e.code(), "repetition " + std::to_string(rep) + " (seed " +
                           std::to_string(seed) + "), " + method.name() +
                           ": " + e.what());
      }
      for (const auto& [name, v] : result) values[k][name].push_back(v);
    }
  }
  for (std::size_t k = 0; k < config.methods.size(); ++k) {
    for (auto& [name, v] : values[k]) {
      report.rows[k].metrics[name] = summarize(std::move(v));
    }
  }
  return report;
}

const MethodResult& EvalReport::row(std::string_view method) const {
  for (const auto& r : rows) {
    if (r.method == method) return r;
  }
  fail(ErrorCode::InvalidInput,
       "report has no row for '" + std::string(method) + "'");
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json cfg;
  std::vector<std::string> names;
  for (const auto& m : config.methods) names.push_back(m.name());
  cfg["methods"] = names;
  cfg["epsilon"] = config.epsilon;
  cfg["gamma"] = config.gamma;
  if (config.gamma_y) cfg["gamma_y"] = *config.gamma_y;
  cfg["m"] = config.m;
  cfg["M"] = config.M;
  cfg["lambda"] = config.lambda;
  cfg["repetitions"] = config.reps;
  cfg["seeds"] = seeds;
  j["config"] = cfg;
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["method"] = r.method;
    for (const auto& [name, s] : r.metrics) {
      row["metrics"][name] = {{"mean", s.mean}, {"std", s.std}};
    }
    for (const auto& [stage, t] : r.stage_seconds) {
      row["wall_clock_seconds"][stage] = t;
    }
    j["results"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string EvalReport::to_text() const {
  std::vector<std::string> metric_names;
  if (!rows.empty()) {
    for (const auto& [name, s] : rows.front().metrics) {
      metric_names.push_back(name);
    }
  }
  std::ostringstream out;
  out << std::left << std::setw(10) << "method";
  for (const auto& name : metric_names) out << std::right << std::setw(20) << name;
  out << std::right << std::setw(12) << "fit(s)" << "\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(10) << r.method;
    for (const auto& name : metric_names) {
      const auto it = r.metrics.find(name);
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(name == "accuracy" ? 2 : 4);
      if (it != r.metrics.end()) {
        cell << it->second.mean << " +- " << it->second.std;
      }
      out << std::right << std::setw(20) << cell.str();
    }
    const auto fit = r.stage_seconds.find("fit");
    std::ostringstream t;
    t << std::fixed << std::setprecision(3)
      << (fit == r.stage_seconds.end() ? 0.0 : fit->second);
    out << std::right << std::setw(12) << t.str() << "\n";
  }
  out << "(" << config.reps << " repetitions, seeds " << seeds.front()
      << ".." << seeds.back() << ")\n";
  return out.str();
}

std::string EvalReport::to_csv() const {
  std::vector<std::string> metric_names;
  if (!rows.empty()) {
    for (const auto& [name, s] : rows.front().metrics) {
      metric_names.push_back(name);
    }
  }
  std::ostringstream out;
  out << "method,repetition,seed";
  for (const auto& name : metric_names) out << "," << name;
  out << "\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      out << r.method << "," << i << "," << seeds[i];
      for (const auto& name : metric_names) {
        out << "," << r.metrics.at(name).values.at(i);
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace dcm
