#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lscale/classifier.hpp"
#include "lscale/dataset.hpp"
#include "lscale/features.hpp"
#include "lscale/strategies.hpp"

namespace lscale {

struct ExperimentConfig {
  std::string dataset_dir;

  std::string strategy_name = "lscale";
  double lambda = 0.99;
  int khops = 2;
  bool incremental = true;
  int restarts = 1;
  std::string features_spec = "propagated";  // "propagated" | "file:PATH"

  std::vector<int> checkpoints = {10, 30, 60};  // budgets at which accuracy is recorded
  int batch = 10;
  int init_pool = 5;
  int runs = 20;
  int splits = 10;  // run r uses split r % splits
  std::uint64_t base_seed = 1;

  int hidden_dim = 100;  // classifier latent dimension l'
  TrainConfig train;     // per-step seed is derived, the field's seed is ignored

  double test_fraction = 0.2;
  int test_size = 0;  // > 0 overrides test_fraction (fixed-size test set)
  int validation_size = 500;
  bool count_initial_in_budget = false;

  std::string out_dir;
  std::string state_path;         // enables checkpoint/resume when nonempty
  int halt_after_selections = 0;  // testing hook: interrupt after N selections (0 = off)

  Strategy strategy() const;
  FeatureProvider provider() const;
  std::uint64_t hash() const;  // over the experiment-defining fields
  void validate() const;
};

struct AccuracyRecord {
  int run = 0;
  std::uint64_t seed = 0;
  int checkpoint = 0;
  double accuracy = 0.0;
  int labelled_count = -1;  // |L| when recorded; not part of the CSV schema
};

struct CheckpointStats {
  int checkpoint = 0;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;      // sample (n-1) standard deviation
  bool degenerate = false;  // single record, stddev reported as 0
};

struct RunDiagnostics {
  int run = 0;
  int trainings = 0;
  int selections = 0;
  // Mean over steps of the selection diversity metric (see SelectionResult).
  double mean_dist_to_labelled = std::numeric_limits<double>::quiet_NaN();
  long test_label_reads_training = 0;
  long validation_label_reads_training = 0;
  long test_label_reads_selection = 0;
  long validation_label_reads_selection = 0;
};

struct ExperimentReport {
  std::vector<AccuracyRecord> records;
  std::vector<RunDiagnostics> diagnostics;
  bool complete = true;  // false when interrupted via halt_after_selections

  std::vector<CheckpointStats> summary() const;
};

// Per-checkpoint mean and sample standard deviation, checkpoints ascending.
std::vector<CheckpointStats> aggregate(std::span<const AccuracyRecord> records);

// Fraction of the listed rows whose predicted class matches classes[a].
double evaluate_accuracy(const ClassifierModel& model, const FeatureMatrix& h,
                         std::span<const int> classes, std::span<const int> ids);

// The full protocol: per run, draw a split and an initial pool, then
// alternate retraining and batch selection, recording test accuracy at
// every budget checkpoint. Deterministic given the config.
ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& ds);

// records.csv: "run,seed,checkpoint,accuracy", 9 decimal digits.
// summary.csv: "checkpoint,count,mean,std,degenerate".
void write_report(const ExperimentReport& report, const std::string& dir);
std::vector<AccuracyRecord> read_records(const std::string& path);
void write_records_csv(std::span<const AccuracyRecord> records, const std::string& path);
void write_summary_csv(std::span<const CheckpointStats> stats, const std::string& path);
std::string format_summary(std::span<const CheckpointStats> stats);

}  // namespace lscale
