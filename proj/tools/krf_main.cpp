// Command-line front end: synthetic data generation, training, prediction,
// evaluation, cross-validation, and timing over the library's CSV and model
// file formats. Angles cross this boundary in degrees.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "krf/cross_validation.hpp"
#include "krf/csv.hpp"
#include "krf/evaluation.hpp"
#include "krf/file_util.hpp"
#include "krf/model_io.hpp"
#include "krf/synthetic.hpp"

namespace {

using json = nlohmann::json;

struct TrainFlags {
  std::string splitter = "krf";
  int k = 2;
  std::vector<int> kRange = {2, 40};
  int trees = 20;
  double beta = 1.0;
  double gamma = 1.0;
  int minLeaf = 5;
  double penaltyC = 1.0;
  double svmTol = 1e-3;
  bool circular = false;
  std::uint64_t seed = 0;
};

void addTrainFlags(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--splitter", f.splitter, "Node splitter: krf, akrf, or brf")
      ->check(CLI::IsMember({"krf", "akrf", "brf"}));
  cmd->add_option("--k", f.k, "Children per node (krf)");
  cmd->add_option("--k-range", f.kRange, "Min and max children per node (akrf)")->expected(2);
  cmd->add_option("--trees", f.trees, "Trees in the forest");
  cmd->add_option("--beta", f.beta, "Per-tree sample fraction in (0,1]");
  cmd->add_option("--gamma", f.gamma, "Feature fraction scanned per split in (0,1] (brf)");
  cmd->add_option("--min-leaf", f.minLeaf, "Do not split nodes smaller than this");
  cmd->add_option("--penalty-c", f.penaltyC, "Classifier penalty C (krf/akrf)");
  cmd->add_option("--svm-tol", f.svmTol, "Classifier relative tolerance (krf/akrf)");
  cmd->add_flag("--circular", f.circular, "Require a circular-target dataset");
  cmd->add_option("--seed", f.seed, "Random seed");
}

krf::ForestConfig makeForestConfig(const TrainFlags& f, const krf::Dataset& dataset) {
  if (f.circular && !dataset.space.isCircular()) {
    throw std::runtime_error("--circular given but the dataset has Euclidean targets");
  }
  krf::ForestConfig config;
  config.numTrees = f.trees;
  config.baggingRatio = f.beta;
  config.seed = f.seed;
  config.tree.space = dataset.space;
  config.tree.minSamplesLeaf = f.minLeaf;
  config.tree.penaltyC = f.penaltyC;
  config.tree.svmTolerance = f.svmTol;
  config.tree.seed = f.seed;
  if (f.splitter == "krf") {
    config.tree.splitter = krf::SplitterKind::KrfFixed;
    config.tree.k = f.k;
  } else if (f.splitter == "akrf") {
    config.tree.splitter = krf::SplitterKind::KrfAdaptive;
    config.tree.kMin = f.kRange[0];
    config.tree.kMax = f.kRange[1];
  } else {
    config.tree.splitter = krf::SplitterKind::Binary;
    config.tree.featureRatioGamma = f.gamma;
  }
  return config;
}

json reportToJson(const krf::EvalReport& report) {
  return json{{"n", report.n}, {"mae", report.mae}, {"mae_p90", report.maeP90}, {"mae_p95", report.maeP95}};
}

void printReport(const krf::EvalReport& report, bool circular) {
  const char* unit = circular ? " deg" : "";
  std::printf("n        %lld\n", static_cast<long long>(report.n));
  std::printf("mae      %.6f%s\n", report.mae, unit);
  std::printf("mae_p90  %.6f%s\n", report.maeP90, unit);
  std::printf("mae_p95  %.6f%s\n", report.maeP95, unit);
}

void writeJsonIfAsked(const std::string& path, const json& payload) {
  if (path.empty()) return;
  krf::writeFileAtomic(path, payload.dump(2) + "\n");
}

int runGen(const std::string& generator, krf::SyntheticSpec spec, const std::string& outPath) {
  if (generator == "piecewise") {
    spec.generator = krf::SyntheticSpec::Generator::PiecewiseConstant;
  } else if (generator == "blobs") {
    spec.generator = krf::SyntheticSpec::Generator::GaussianBlobs;
  } else if (generator == "circular-blobs") {
    spec.generator = krf::SyntheticSpec::Generator::CircularBlobs;
  } else {
    spec.generator = krf::SyntheticSpec::Generator::RotationField;
  }
  krf::saveCsv(krf::generate(spec), outPath);
  std::printf("wrote %s\n", outPath.c_str());
  return 0;
}

int runTrain(const TrainFlags& flags, const std::string& dataPath, const std::string& modelPath) {
  const krf::Dataset dataset = krf::loadCsv(dataPath);
  krf::validateDataset(dataset);
  const krf::Forest forest =
      krf::trainForest(dataset.features, dataset.targets, makeForestConfig(flags, dataset));
  krf::saveModel(forest, modelPath);
  std::printf("trained %d trees on %lld samples; wrote %s\n", forest.config.numTrees,
              static_cast<long long>(dataset.n()), modelPath.c_str());
  return 0;
}

int runPredict(const std::string& modelPath, const std::string& dataPath, const std::string& outPath) {
  const krf::Forest forest = krf::loadModel(modelPath);
  const krf::Dataset dataset = krf::loadCsv(dataPath);
  if (dataset.p() != forest.featureDim) throw std::runtime_error("predict: feature dimension mismatch");
  const krf::Matrix predictions = krf::forestPredictAll(forest, dataset.features);
  std::string out;
  if (forest.space.isCircular()) {
    out = "angle_deg\n";
    for (krf::Index i = 0; i < predictions.rows(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g\n", krf::radiansToDegrees(predictions(i, 0)));
      out += buf;
    }
  } else {
    for (krf::Index j = 0; j < predictions.cols(); ++j) {
      if (j > 0) out += ',';
      out += "t" + std::to_string(j);
    }
    out += '\n';
    for (krf::Index i = 0; i < predictions.rows(); ++i) {
      for (krf::Index j = 0; j < predictions.cols(); ++j) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), j > 0 ? ",%.17g" : "%.17g", predictions(i, j));
        out += buf;
      }
      out += '\n';
    }
  }
  krf::writeFileAtomic(outPath, out);
  std::printf("wrote %lld predictions to %s\n", static_cast<long long>(predictions.rows()),
              outPath.c_str());
  return 0;
}

int runEval(const std::string& modelPath, const std::string& dataPath, const std::string& jsonPath) {
  const krf::Forest forest = krf::loadModel(modelPath);
  const krf::Dataset dataset = krf::loadCsv(dataPath);
  const krf::EvalReport report = krf::evaluate(forest, dataset);
  printReport(report, forest.space.isCircular());
  writeJsonIfAsked(jsonPath, reportToJson(report));
  return 0;
}

int runCv(const TrainFlags& flags, const std::string& dataPath, const std::vector<int>& kGrid,
          const std::vector<double>& gammaGrid, int folds, bool byGroup, const std::string& jsonPath) {
  const krf::Dataset dataset = krf::loadCsv(dataPath);
  krf::validateDataset(dataset);

  std::vector<krf::CvCandidate> grid;
  if (flags.splitter == "krf") {
    for (int k : kGrid) {
      TrainFlags f = flags;
      f.k = k;
      grid.push_back({"k=" + std::to_string(k), makeForestConfig(f, dataset)});
    }
  } else if (flags.splitter == "brf") {
    for (double gamma : gammaGrid) {
      TrainFlags f = flags;
      f.gamma = gamma;
      char label[32];
      std::snprintf(label, sizeof(label), "gamma=%g", gamma);
      grid.push_back({label, makeForestConfig(f, dataset)});
    }
  } else {
    grid.push_back({"k-range=" + std::to_string(flags.kRange[0]) + ".." + std::to_string(flags.kRange[1]),
                    makeForestConfig(flags, dataset)});
  }

  krf::CvOptions options;
  options.folds = folds;
  options.seed = flags.seed;
  options.byGroup = byGroup;
  const krf::CvResult result = krf::crossValidate(dataset, grid, options);

  json entries = json::array();
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const krf::CvEntry& entry = result.entries[i];
    if (entry.skipped) {
      std::printf("%-14s skipped (empty fold)\n", entry.candidate.label.c_str());
      entries.push_back({{"label", entry.candidate.label}, {"skipped", true}});
      continue;
    }
    std::printf("%-14s mean mae %.6f%s\n", entry.candidate.label.c_str(), entry.meanMae,
                i == result.bestIndex ? "  <- best" : "");
    entries.push_back({{"label", entry.candidate.label},
                       {"mean_mae", entry.meanMae},
                       {"fold_mae", entry.foldMae}});
  }
  std::printf("folds %d, best %s\n", result.foldCount,
              result.entries[result.bestIndex].candidate.label.c_str());
  writeJsonIfAsked(jsonPath, json{{"folds", result.foldCount},
                                  {"best", result.entries[result.bestIndex].candidate.label},
                                  {"entries", entries}});
  return 0;
}

int runBench(const TrainFlags& flags, const std::string& dataPath) {
  using clock = std::chrono::steady_clock;
  const krf::Dataset dataset = krf::loadCsv(dataPath);
  krf::validateDataset(dataset);

  const auto t0 = clock::now();
  const krf::Forest forest =
      krf::trainForest(dataset.features, dataset.targets, makeForestConfig(flags, dataset));
  const auto t1 = clock::now();
  const krf::EvalReport report = krf::evaluate(forest, dataset);
  const auto t2 = clock::now();

  const auto ms = [](auto a, auto b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  std::printf("train    %.1f ms\n", ms(t0, t1));
  std::printf("predict  %.1f ms (%lld samples)\n", ms(t1, t2), static_cast<long long>(dataset.n()));
  printReport(report, dataset.space.isCircular());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regression forests with cluster-then-classify node splitting"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset CSV");
  std::string generator = "blobs";
  krf::SyntheticSpec spec;
  std::string genOut;
  gen->add_option("--generator", generator, "piecewise, blobs, circular-blobs, or rotation")
      ->check(CLI::IsMember({"piecewise", "blobs", "circular-blobs", "rotation"}));
  gen->add_option("--n", spec.n, "Sample count");
  gen->add_option("--p", spec.p, "Feature dimension");
  gen->add_option("--seed", spec.seed, "Sample seed");
  gen->add_option("--structure-seed", spec.structureSeed, "Layout seed shared across draws");
  gen->add_option("--regions", spec.regions, "Piecewise: region count");
  gen->add_option("--noise-sigma", spec.noiseSigma, "Piecewise: target noise");
  gen->add_flag("--oblique", spec.oblique, "Piecewise: oblique regions instead of boxes");
  gen->add_option("--k", spec.k, "Blob generators: blob count");
  gen->add_option("--separation", spec.separation, "Blobs: spacing between means");
  gen->add_option("--sigma", spec.sigma, "Blobs: within-blob spread");
  gen->add_option("--sigma-deg", spec.sigmaDeg, "Circular blobs: spread in degrees");
  gen->add_option("--noise-deg", spec.noiseDeg, "Rotation: target noise in degrees");
  gen->add_option("--center-deg", spec.centerDeg, "Rotation: latent center in degrees");
  gen->add_option("--spread-deg", spec.spreadDeg, "Rotation: latent half-width in degrees");
  gen->add_option("--feature-noise", spec.featureNoise, "Circular generators: feature noise");
  gen->add_option("--nuisance-dim", spec.nuisanceDim,
                  "Circular generators: correlated nuisance subspace dimension");
  gen->add_option("--out", genOut, "Output CSV path")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a forest and write a model file");
  TrainFlags trainFlags;
  std::string trainData, trainModel;
  addTrainFlags(train, trainFlags);
  train->add_option("--data", trainData, "Training CSV")->required();
  train->add_option("--model", trainModel, "Output model path")->required();

  // predict
  auto* predict = app.add_subcommand("predict", "Write predictions for a dataset");
  std::string predictModel, predictData, predictOut;
  predict->add_option("--model", predictModel, "Model path")->required();
  predict->add_option("--data", predictData, "Input CSV")->required();
  predict->add_option("--out", predictOut, "Output CSV path")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
  std::string evalModel, evalData, evalJson;
  eval->add_option("--model", evalModel, "Model path")->required();
  eval->add_option("--data", evalData, "Evaluation CSV")->required();
  eval->add_option("--json", evalJson, "Also write metrics as JSON");

  // cv
  auto* cv = app.add_subcommand("cv", "Cross-validate a hyperparameter grid");
  TrainFlags cvFlags;
  std::string cvData, cvJson;
  std::vector<int> kGrid = {2, 5, 10, 20};
  std::vector<double> gammaGrid = {0.25, 0.5, 1.0};
  int folds = 5;
  bool byGroup = false;
  addTrainFlags(cv, cvFlags);
  cv->add_option("--data", cvData, "Dataset CSV")->required();
  cv->add_option("--k-grid", kGrid, "Candidate k values (krf)")->delimiter(',');
  cv->add_option("--gamma-grid", gammaGrid, "Candidate gamma values (brf)")->delimiter(',');
  cv->add_option("--folds", folds, "Fold count");
  cv->add_flag("--by-group", byGroup, "Leave-one-group-out using the group column");
  cv->add_option("--json", cvJson, "Also write results as JSON");

  // bench
  auto* bench = app.add_subcommand("bench", "Time training and prediction on a dataset");
  TrainFlags benchFlags;
  std::string benchData;
  addTrainFlags(bench, benchFlags);
  bench->add_option("--data", benchData, "Dataset CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return runGen(generator, spec, genOut);
    if (train->parsed()) return runTrain(trainFlags, trainData, trainModel);
    if (predict->parsed()) return runPredict(predictModel, predictData, predictOut);
    if (eval->parsed()) return runEval(evalModel, evalData, evalJson);
    if (cv->parsed()) return runCv(cvFlags, cvData, kGrid, gammaGrid, folds, byGroup, cvJson);
    if (bench->parsed()) return runBench(benchFlags, benchData);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
