/*
 * Copyright 2026 The LaPLACE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "laplace/bayes_net.h"
#include "laplace/dataset.h"
#include "laplace/eval.h"
#include "laplace/explain.h"
#include "laplace/inference.h"
#include "laplace/models.h"
#include "laplace/random.h"
#include "laplace/random_network.h"
#include "laplace/status_macros.h"

namespace laplace::cli {
namespace {

using nlohmann::json;

// Streams derived from the master seed.
enum SeedStream : uint64_t {
  kDataStream = 0,
  kSplitStream = 1,
  kModelStream = 2,
  kForestStream = 3,
  kLinearStream = 4,
  kRunStream = 5,
};

struct RunConfig {
  std::string data;
  std::string network;
  int64_t rows = 10000;
  std::string target;
  std::string dataset_name;
  int bins = dataset::kDefaultBins;
  double split = 0.8;
  int64_t samples = perturb::kDefaultSampleCount;
  double rho = perturb::kDefaultResampleProbability;
  double alpha = stats::kDefaultAlpha;
  int rows_per_cell = stats::kDefaultRowsPerCell;
  int max_cond = mb::kDefaultMaxConditioning;
  int max_parents = bn::kDefaultMaxParents;
  double smoothing = bn::kDefaultSmoothing;
  int repetitions = 100;
  uint64_t seed = 1;
  std::vector<std::string> sensitive;
  std::string model = "random_forest";
  std::string model_file;
  std::string model_command;
  std::string save_model;
  int trees = 100;
  int max_depth = 0;
  std::vector<std::string> families = {"naive_bayes", "random_forest", "linear"};
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int64_t instance = 0;
  std::string out = ".";
  bool write_splits = false;
};

struct Problem {
  std::string name;
  dataset::Dataset train;
  dataset::Dataset test;
  std::vector<int64_t> test_rows;
  std::optional<dataset::Table> table;
  std::optional<bn::BayesianNetwork> network;
};

absl::Status WriteFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream file(path, std::ios::binary);
  file << text;
  file.close();
  if (!file) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<json> ReadJson(const std::string& path) {
  std::ifstream file(path);
  if (!file) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  try {
    return json::parse(file);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": ", e.what()));
  }
}

absl::Status MakeOutputDir(const std::string& dir) {
  std::error_code error;
  std::filesystem::create_directories(dir, error);
  if (error) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", dir, ": ", error.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<Problem> LoadProblem(const RunConfig& config) {
  Problem problem;
  dataset::Dataset data;
  if (!config.data.empty()) {
    ASSIGN_OR_RETURN(dataset::Table table, dataset::LoadCsv(config.data));
    ASSIGN_OR_RETURN(auto discretized, dataset::Discretize(table, config.bins));
    data = std::move(discretized.first);
    problem.table = std::move(table);
    problem.name = std::filesystem::path(config.data).stem().string();
  } else if (!config.network.empty()) {
    ASSIGN_OR_RETURN(bn::BayesianNetwork network, bn::LoadNetwork(config.network));
    if (config.rows < 2) {
      return absl::InvalidArgumentError("--rows must be >= 2");
    }
    data = bn::ForwardSample(network, config.rows, DeriveSeed(config.seed, kDataStream));
    problem.network = std::move(network);
    problem.name = std::filesystem::path(config.network).stem().string();
  } else {
    return absl::InvalidArgumentError("one of --data or --network is required");
  }
  if (!config.dataset_name.empty()) problem.name = config.dataset_name;
  if (config.target.empty()) {
    return absl::InvalidArgumentError("--target is required");
  }
  if (!data.VariableIndex(config.target)) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset has no column '", config.target, "'"));
  }
  if (data.num_rows() < 2) {
    return absl::InvalidArgumentError("dataset needs at least 2 rows to split");
  }
  if (!(config.split > 0 && config.split < 1)) {
    return absl::InvalidArgumentError("--split must be in (0, 1)");
  }
  auto [train_rows, test_rows] = dataset::SplitIndices(
      data.num_rows(), config.split, DeriveSeed(config.seed, kSplitStream));
  problem.train = data.SelectRows(train_rows);
  problem.test = data.SelectRows(test_rows);
  problem.test_rows = std::move(test_rows);
  return problem;
}

absl::StatusOr<std::unique_ptr<models::ModelAdapter>> BuildModel(
    const RunConfig& config, const Problem& problem) {
  const int target = *problem.train.VariableIndex(config.target);
  std::vector<std::string> features;
  for (const auto& name : problem.train.VariableNames()) {
    if (name != config.target) features.push_back(name);
  }
  if (!config.model_command.empty()) {
    models::ExternalAdapterOptions options;
    options.command = config.model_command;
    options.feature_names = features;
    options.labels = problem.train.variable(target).states;
    return std::make_unique<models::ExternalAdapter>(std::move(options));
  }
  std::unique_ptr<models::CategoricalClassifier> model;
  if (!config.model_file.empty()) {
    ASSIGN_OR_RETURN(const json object, ReadJson(config.model_file));
    ASSIGN_OR_RETURN(model, models::ModelFromJson(object));
  } else if (config.model == "random_forest") {
    models::RandomForestOptions options;
    options.trees = config.trees;
    options.max_depth = config.max_depth;
    options.seed = DeriveSeed(config.seed, kModelStream);
    model = models::TrainRandomForest(problem.train, target, options);
  } else if (config.model == "naive_bayes") {
    model = models::TrainNaiveBayes(problem.train, target, config.smoothing);
  } else if (config.model == "linear") {
    models::LinearOptions options;
    options.seed = DeriveSeed(config.seed, kModelStream);
    model = models::TrainLinear(problem.train, target, options);
  } else if (config.model == "bayesian_network") {
    if (!problem.network) {
      return absl::InvalidArgumentError(
          "--model bayesian_network needs data generated from --network");
    }
    model = std::make_unique<models::BnClassifier>(
        *problem.network, *problem.network->NodeIndex(config.target));
  } else {
    return absl::InvalidArgumentError(absl::StrCat("unknown model '", config.model, "'"));
  }
  if (!config.save_model.empty()) {
    RETURN_IF_ERROR(WriteFile(config.save_model, model->ToJson().dump() + "\n"));
  }
  return model;
}

explain::ExplainConfig MakeExplainConfig(const RunConfig& config) {
  explain::ExplainConfig explain_config;
  explain_config.target_name = config.target;
  explain_config.perturbation.sample_count = config.samples;
  explain_config.perturbation.resample_probability = config.rho;
  explain_config.perturbation.seed = DeriveSeed(config.seed, kRunStream);
  explain_config.blanket.ci.alpha = config.alpha;
  explain_config.blanket.ci.rows_per_cell = config.rows_per_cell;
  explain_config.blanket.max_conditioning = config.max_cond;
  explain_config.blanket.threads = config.threads;
  explain_config.structure.max_parents = config.max_parents;
  explain_config.smoothing = config.smoothing;
  explain_config.sensitive = config.sensitive;
  return explain_config;
}

absl::StatusOr<eval::BenchmarkConfig> MakeBenchmarkConfig(const RunConfig& config,
                                                          const Problem& problem) {
  eval::BenchmarkConfig benchmark;
  benchmark.explain = MakeExplainConfig(config);
  benchmark.repetitions = config.repetitions;
  benchmark.seed = DeriveSeed(config.seed, kRunStream);
  benchmark.threads = config.threads;
  benchmark.dataset = problem.name;
  benchmark.families.clear();
  for (const auto& name : config.families) {
    const auto family = eval::ParseFamily(name);
    if (!family) {
      return absl::InvalidArgumentError(absl::StrCat("unknown classifier '", name, "'"));
    }
    benchmark.families.push_back(*family);
  }
  benchmark.classifiers.naive_bayes_smoothing = config.smoothing;
  benchmark.classifiers.forest.trees = config.trees;
  benchmark.classifiers.forest.max_depth = config.max_depth;
  benchmark.classifiers.forest.seed = DeriveSeed(config.seed, kForestStream);
  benchmark.classifiers.linear.seed = DeriveSeed(config.seed, kLinearStream);
  return benchmark;
}

absl::Status Generate(const RunConfig& config, int64_t rows,
                      const std::string& output) {
  if (config.network.empty()) return absl::InvalidArgumentError("--network is required");
  if (rows < 1) return absl::InvalidArgumentError("--n must be >= 1");
  ASSIGN_OR_RETURN(const bn::BayesianNetwork network, bn::LoadNetwork(config.network));
  const std::string csv =
      dataset::ToCsv(bn::ForwardSample(network, rows, DeriveSeed(config.seed, kDataStream)));
  if (output == "-") {
    std::cout << csv;
    return absl::OkStatus();
  }
  return WriteFile(output, csv);
}

absl::Status ExplainCommand(const RunConfig& config) {
  ASSIGN_OR_RETURN(const Problem problem, LoadProblem(config));
  if (config.instance < 0 || config.instance >= problem.test.num_rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("--instance must be in [0, ", problem.test.num_rows(), ")"));
  }
  ASSIGN_OR_RETURN(const auto model, BuildModel(config, problem));
  const std::vector<int> instance = problem.test.Row(config.instance);
  ASSIGN_OR_RETURN(explain::Explanation explanation,
                   explain::Explain(*model, instance, problem.train,
                                    MakeExplainConfig(config)));
  if (problem.table) {
    const int64_t row = problem.test_rows[config.instance];
    for (size_t f = 0; f < explanation.feature_names.size(); ++f) {
      const auto column = problem.table->ColumnIndex(explanation.feature_names[f]);
      if (column) explanation.instance_original[f] = problem.table->columns[*column].text[row];
    }
  }
  RETURN_IF_ERROR(MakeOutputDir(config.out));
  const std::filesystem::path dir(config.out);
  RETURN_IF_ERROR(WriteFile(dir / "explanation.json", explain::ExportJson(explanation)));
  RETURN_IF_ERROR(WriteFile(dir / "explanation.dot", explain::ExportDot(explanation)));
  std::cout << json{{"blanket", explanation.BlanketNames()},
                    {"predicted_class", explanation.predicted_class},
                    {"explained_class", explanation.explained_class},
                    {"flagged_sensitive", explanation.flagged_sensitive}}
                   .dump()
            << "\n";
  return absl::OkStatus();
}

absl::Status WriteReport(const RunConfig& config, const eval::RunReport& report) {
  RETURN_IF_ERROR(MakeOutputDir(config.out));
  const std::filesystem::path dir(config.out);
  RETURN_IF_ERROR(WriteFile(dir / "report.json", eval::ReportToJson(report).dump(2) + "\n"));
  RETURN_IF_ERROR(WriteFile(dir / "report.md",
                            eval::ReportsToMarkdown(std::span(&report, 1))));
  std::cout << "runs " << report.runs.size() << ", failures " << report.failures
            << ", mean explained features " << report.mean_feature_count << "\n";
  return absl::OkStatus();
}

absl::Status BenchmarkCommand(const RunConfig& config) {
  ASSIGN_OR_RETURN(const Problem problem, LoadProblem(config));
  ASSIGN_OR_RETURN(const auto model, BuildModel(config, problem));
  ASSIGN_OR_RETURN(const eval::BenchmarkConfig benchmark,
                   MakeBenchmarkConfig(config, problem));
  if (config.write_splits) {
    RETURN_IF_ERROR(MakeOutputDir(config.out));
    RETURN_IF_ERROR(dataset::WriteCsv(
        problem.train, (std::filesystem::path(config.out) / "train.csv").string()));
    RETURN_IF_ERROR(dataset::WriteCsv(
        problem.test, (std::filesystem::path(config.out) / "test.csv").string()));
  }
  ASSIGN_OR_RETURN(const eval::RunReport report,
                   eval::RunBenchmark(problem.train, problem.test, *model, benchmark));
  return WriteReport(config, report);
}

absl::Status EvaluateSetsCommand(const RunConfig& config, const std::string& sets_path) {
  ASSIGN_OR_RETURN(const Problem problem, LoadProblem(config));
  ASSIGN_OR_RETURN(eval::BenchmarkConfig benchmark, MakeBenchmarkConfig(config, problem));
  ASSIGN_OR_RETURN(const json fragment, ReadJson(sets_path));
  std::vector<std::string> schema;
  for (const auto& name : problem.train.VariableNames()) {
    if (name != config.target) schema.push_back(name);
  }
  ASSIGN_OR_RETURN(const auto sets, eval::FeatureSetsFromJson(fragment, schema));
  if (fragment.contains("explainer") && fragment["explainer"].is_string()) {
    benchmark.explainer = fragment["explainer"].get<std::string>();
  }
  ASSIGN_OR_RETURN(const eval::RunReport report,
                   eval::EvaluateFeatureSets(problem.train, problem.test, sets, benchmark));
  return WriteReport(config, report);
}

absl::StatusOr<int> NodeByName(const bn::BayesianNetwork& network,
                               const std::string& name) {
  const auto node = network.NodeIndex(name);
  if (!node) return absl::InvalidArgumentError(absl::StrCat("no node '", name, "'"));
  return *node;
}

absl::Status OracleBlanket(const RunConfig& config) {
  ASSIGN_OR_RETURN(const bn::BayesianNetwork network, bn::LoadNetwork(config.network));
  ASSIGN_OR_RETURN(const int target, NodeByName(network, config.target));
  const bn::Dag& dag = network.dag();
  json names = json::array();
  for (int node : bn::DsepBlanket(dag, target)) names.push_back(network.variable(node).name);
  json parents = json::array();
  for (int node : dag.parents(target)) parents.push_back(network.variable(node).name);
  json children = json::array();
  for (int node : dag.children(target)) children.push_back(network.variable(node).name);
  std::cout << json{{"target", config.target},
                    {"blanket", names},
                    {"parents", parents},
                    {"children", children}}
                   .dump()
            << "\n";
  return absl::OkStatus();
}

absl::Status OraclePosterior(const RunConfig& config, const std::string& evidence_text) {
  ASSIGN_OR_RETURN(const bn::BayesianNetwork network, bn::LoadNetwork(config.network));
  ASSIGN_OR_RETURN(const int target, NodeByName(network, config.target));
  double binary_nodes = 0;
  for (int card : network.cardinalities()) binary_nodes += std::log2(card);
  if (binary_nodes > 20 + 1e-9) {
    return absl::FailedPreconditionError(absl::StrCat(
        "network too large for exhaustive mode: ", binary_nodes,
        " binary-equivalent nodes (limit 20)"));
  }
  bn::Evidence evidence(network.num_nodes(), bn::kUnobserved);
  const std::vector<std::string> items =
      absl::StrSplit(evidence_text, ',', absl::SkipEmpty());
  for (const std::string& item : items) {
    const std::vector<std::string> parts = absl::StrSplit(item, '=');
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(absl::StrCat("bad evidence '", item, "'"));
    }
    ASSIGN_OR_RETURN(const int node, NodeByName(network, parts[0]));
    const auto state = network.variable(node).StateIndex(parts[1]);
    if (!state) {
      return absl::InvalidArgumentError(absl::StrCat("no state '", parts[1], "' for ", parts[0]));
    }
    evidence[node] = *state;
  }
  // Plain sum over every completion of the evidence.
  const std::vector<int> cards = network.cardinalities();
  std::vector<int> assignment(network.num_nodes(), 0);
  for (int v = 0; v < network.num_nodes(); ++v) {
    if (evidence[v] != bn::kUnobserved) assignment[v] = evidence[v];
  }
  std::vector<double> mass(cards[target], 0.0);
  while (true) {
    mass[assignment[target]] += bn::JointProbability(network, assignment);
    int v = 0;
    for (; v < network.num_nodes(); ++v) {
      if (evidence[v] != bn::kUnobserved) continue;
      if (++assignment[v] < cards[v]) break;
      assignment[v] = 0;
    }
    if (v == network.num_nodes()) break;
  }
  double total = 0;
  for (double m : mass) total += m;
  if (total <= 0) return absl::FailedPreconditionError("evidence has zero probability");
  json posterior = json::object();
  for (int s = 0; s < cards[target]; ++s) {
    posterior[network.variable(target).states[s]] = mass[s] / total;
  }
  std::cout << json{{"target", config.target}, {"posterior", posterior}}.dump() << "\n";
  return absl::OkStatus();
}

absl::Status OracleRandomDag(const RunConfig& config,
                             const bn::RandomNetworkOptions& options,
                             const std::string& output) {
  if (options.num_nodes < 1 || options.cardinality < 2) {
    return absl::InvalidArgumentError("--nodes must be >= 1 and --cardinality >= 2");
  }
  const std::string text =
      bn::NetworkToJson(bn::RandomNetwork(options, config.seed)).dump(2) + "\n";
  if (output == "-") {
    std::cout << text;
    return absl::OkStatus();
  }
  return WriteFile(output, text);
}

void ReportError(const absl::Status& status) {
  std::cerr << json{{"error",
                     {{"code", absl::StatusCodeToString(status.code())},
                      {"message", std::string(status.message())}}}}
                   .dump()
            << "\n";
}

}  // namespace

ExitCode ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kDataLoss:
    case absl::StatusCode::kPermissionDenied:
      return kExitData;
    case absl::StatusCode::kUnavailable:
      return kExitAdapter;
    default:
      return kExitInternal;
  }
}

int Run(int argc, char** argv) {
  CLI::App app{"Local explanations of black-box classifiers via Markov blankets"};
  app.name("laplace");
  app.fallthrough();
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Read options from a key = value file; flags win");

  RunConfig config;
  app.add_option("--data", config.data, "CSV dataset (numeric columns are binned)");
  app.add_option("--network", config.network, "'alarm' or a network JSON file");
  app.add_option("--rows", config.rows, "Rows sampled from --network when no --data");
  app.add_option("--target", config.target, "Class column");
  app.add_option("--dataset-name", config.dataset_name, "Dataset label in reports");
  app.add_option("--bins", config.bins, "Equal-width bins per numeric column")
      ->check(CLI::PositiveNumber);
  app.add_option("--split", config.split, "Training fraction");
  app.add_option("--samples", config.samples, "Perturbed rows per explanation")
      ->check(CLI::PositiveNumber);
  app.add_option("--rho", config.rho, "Per-feature resample probability")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--alpha", config.alpha, "Significance level of the CI tests")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--rows-per-cell", config.rows_per_cell,
                 "Rows per degree of freedom for a reliable test");
  app.add_option("--max-cond", config.max_cond, "Largest conditioning set")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-parents", config.max_parents, "Parent cap in structure learning")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--smoothing", config.smoothing, "Additive CPT smoothing")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--repetitions", config.repetitions, "Benchmark runs")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Master seed");
  app.add_option("--sensitive", config.sensitive, "Sensitive feature names")
      ->delimiter(',');
  app.add_option("--model", config.model,
                 "Built-in model: random_forest, naive_bayes, linear, bayesian_network");
  app.add_option("--model-file", config.model_file, "Load a built-in model from JSON");
  app.add_option("--model-command", config.model_command,
                 "External model, run as '<cmd> --predict in.csv out.csv'");
  app.add_option("--save-model", config.save_model, "Write the trained model as JSON");
  app.add_option("--trees", config.trees, "Random forest size")->check(CLI::PositiveNumber);
  app.add_option("--max-depth", config.max_depth, "Tree depth cap, 0 = unlimited")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--classifiers", config.families, "Local-accuracy classifier families")
      ->delimiter(',');
  auto* threads = app.add_option("--threads", config.threads, "Worker threads")
                      ->envname("LAPLACE_THREADS")
                      ->check(CLI::PositiveNumber);
  app.add_option("--out", config.out, "Output directory");

  auto* generate = app.add_subcommand("generate", "Forward-sample a network to CSV");
  int64_t generate_rows = 10000;
  std::string generate_output = "-";
  generate->add_option("--n", generate_rows, "Rows");
  generate->add_option("-o,--output", generate_output, "CSV path, '-' for stdout");

  auto* explain_command = app.add_subcommand("explain", "Explain one test instance");
  explain_command->add_option("--instance", config.instance, "Test-split row index");

  auto* benchmark = app.add_subcommand("benchmark", "Repeated explanations with metrics");
  benchmark->add_flag("--write-splits", config.write_splits,
                      "Also write the train/test splits as CSV");

  auto* evaluate = app.add_subcommand(
      "evaluate-sets", "Score feature sets from a report fragment");
  std::string sets_path;
  evaluate->add_option("--sets", sets_path, "Report or fragment JSON")->required();

  auto* oracle = app.add_subcommand("oracle", "Reference computations on a network");
  oracle->require_subcommand(1);
  auto* oracle_mb = oracle->add_subcommand("mb", "Markov blanket read off the graph");
  auto* oracle_posterior =
      oracle->add_subcommand("posterior", "Posterior by full joint enumeration");
  std::string evidence_text;
  oracle_posterior->add_option("--evidence", evidence_text, "Node=state,...");
  auto* oracle_random = oracle->add_subcommand("random-dag", "Random network JSON");
  bn::RandomNetworkOptions random_options;
  std::string random_output = "-";
  oracle_random->add_option("--nodes", random_options.num_nodes, "Node count");
  oracle_random->add_option("--cardinality", random_options.cardinality, "States per node");
  oracle_random->add_option("--edge-probability", random_options.edge_probability,
                            "Chance of each forward edge");
  oracle_random->add_option("--max-parents", random_options.max_parents, "Parent cap");
  oracle_random->add_option("-o,--output", random_output, "JSON path, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  // CLI11 drops environment values that fail validation.
  if (const char* env = std::getenv("LAPLACE_THREADS");
      threads->count() == 0 && env != nullptr && *env != '\0') {
    std::cerr << "LAPLACE_THREADS: expected a positive integer, got '" << env << "'\n";
    return kExitUsage;
  }

  absl::Status status;
  try {
    if (generate->parsed()) {
      status = Generate(config, generate_rows, generate_output);
    } else if (explain_command->parsed()) {
      status = ExplainCommand(config);
    } else if (benchmark->parsed()) {
      status = BenchmarkCommand(config);
    } else if (evaluate->parsed()) {
      status = EvaluateSetsCommand(config, sets_path);
    } else if (oracle_mb->parsed()) {
      status = OracleBlanket(config);
    } else if (oracle_posterior->parsed()) {
      status = OraclePosterior(config, evidence_text);
    } else if (oracle_random->parsed()) {
      status = OracleRandomDag(config, random_options, random_output);
    }
  } catch (const std::exception& e) {
    status = absl::InternalError(e.what());
  }
  if (!status.ok()) {
    ReportError(status);
    return ExitCodeFor(status);
  }
  return kExitOk;
}

}  // namespace laplace::cli
