#include "lscale/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "lscale/audit.hpp"
#include "lscale/log.hpp"
#include "lscale/rng.hpp"
#include "lscale/state.hpp"

namespace lscale {

namespace {

// independent seed streams per purpose
constexpr std::uint64_t kSplitTag = 0x53504c4954ULL;
constexpr std::uint64_t kInitPoolTag = 0x494e4954ULL;
constexpr std::uint64_t kTrainTag = 0x545241494eULL;
constexpr std::uint64_t kSelectTag = 0x53454c4543ULL;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int next_checkpoint(const std::vector<int>& checkpoints, int spent) {
  for (const int c : checkpoints)
    if (c > spent) return c;
  return spent;
}

bool is_checkpoint(const std::vector<int>& checkpoints, int spent) {
  return std::binary_search(checkpoints.begin(), checkpoints.end(), spent);
}

std::vector<int> sorted_difference(std::span<const int> base, std::span<const int> remove) {
  std::vector<int> rm(remove.begin(), remove.end());
  std::sort(rm.begin(), rm.end());
  std::vector<int> out;
  out.reserve(base.size());
  std::set_difference(base.begin(), base.end(), rm.begin(), rm.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Strategy ExperimentConfig::strategy() const {
  Strategy s;
  s.kind = parse_strategy(strategy_name);
  s.lambda = lambda;
  s.khops = khops;
  s.incremental = incremental;
  s.restarts = restarts;
  return s;
}

FeatureProvider ExperimentConfig::provider() const {
  FeatureProvider p = FeatureProvider::parse(features_spec);
  if (p.kind == FeatureProvider::Kind::Propagated) p.hops = khops;
  return p;
}

std::uint64_t ExperimentConfig::hash() const {
  std::ostringstream s;
  s << "dataset=" << dataset_dir << ";strategy=" << strategy_name << ";lambda=" << lambda
    << ";khops=" << khops << ";incremental=" << incremental << ";restarts=" << restarts
    << ";features=" << features_spec << ";checkpoints=";
  for (const int c : checkpoints) s << c << ' ';
  s << ";batch=" << batch << ";init_pool=" << init_pool << ";runs=" << runs
    << ";splits=" << splits << ";seed=" << base_seed << ";hidden_dim=" << hidden_dim
    << ";lr=" << train.learning_rate << ";wd=" << train.weight_decay
    << ";epochs=" << train.max_epochs << ";window=" << train.early_stop_window
    << ";test_fraction=" << test_fraction << ";test_size=" << test_size
    << ";validation=" << validation_size << ";count_initial=" << count_initial_in_budget;
  return fnv1a(s.str());
}

void ExperimentConfig::validate() const {
  if (checkpoints.empty()) throw std::invalid_argument("config: no budget checkpoints");
  for (size_t i = 0; i + 1 < checkpoints.size(); ++i)
    if (checkpoints[i] >= checkpoints[i + 1])
      throw std::invalid_argument("config: budget checkpoints must be strictly ascending");
  if (init_pool < 1) throw std::invalid_argument("config: initial pool must be >= 1");
  const int spent0 = count_initial_in_budget ? init_pool : 0;
  if (checkpoints.front() < spent0)
    throw std::invalid_argument("config: first checkpoint below the initial labelled count");
  if (batch < 1) throw std::invalid_argument("config: batch must be >= 1");
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (splits < 1) throw std::invalid_argument("config: splits must be >= 1");
  if (hidden_dim < 1) throw std::invalid_argument("config: hidden dimension must be >= 1");
  if (!(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("config: lambda must be in (0, 1]");
  if (khops < 0) throw std::invalid_argument("config: khops must be >= 0");
  if (restarts < 1) throw std::invalid_argument("config: restarts must be >= 1");
  if (test_fraction < 0.0 || test_fraction >= 1.0)
    throw std::invalid_argument("config: test fraction out of [0, 1)");
  if (test_size < 0 || validation_size < 0)
    throw std::invalid_argument("config: negative split size");
  if (!(train.learning_rate > 0.0))
    throw std::invalid_argument("config: learning rate must be > 0");
  if (train.max_epochs < 1) throw std::invalid_argument("config: max epochs must be >= 1");
  if (train.early_stop_window < 1) throw std::invalid_argument("config: window must be >= 1");
  if (halt_after_selections < 0)
    throw std::invalid_argument("config: halt_after_selections must be >= 0");
  parse_strategy(strategy_name);
  FeatureProvider::parse(features_spec);
}

double evaluate_accuracy(const ClassifierModel& model, const FeatureMatrix& h,
                         std::span<const int> classes, std::span<const int> ids) {
  if (ids.empty()) throw std::invalid_argument("evaluate_accuracy: empty id set");
  if (classes.size() != ids.size())
    throw std::invalid_argument("evaluate_accuracy: classes and ids must be parallel");
  const int n = static_cast<int>(ids.size());
  FeatureMatrix rows(n, h.cols());
  for (int a = 0; a < n; ++a) rows.row(a) = h.row(ids[a]);
  const std::vector<int> pred = predict_labels(model, rows);
  int correct = 0;
  for (int a = 0; a < n; ++a)
    if (pred[a] == classes[a]) ++correct;
  return static_cast<double>(correct) / n;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.dataset_dir.empty()) throw std::invalid_argument("config: dataset directory not set");
  const Dataset ds = load_dataset(cfg.dataset_dir);
  return run_experiment(cfg, ds);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& ds) {
  cfg.validate();
  const std::uint64_t cfg_hash = cfg.hash();
  const FeatureMatrix h = cfg.provider().realize(ds.graph, ds.features);
  const Strategy strat = cfg.strategy();
  const int spent0 = cfg.count_initial_in_budget ? cfg.init_pool : 0;
  const int max_checkpoint = cfg.checkpoints.back();

  std::optional<ExperimentState> restored;
  if (!cfg.state_path.empty() && std::filesystem::exists(cfg.state_path)) {
    restored = load_state(cfg.state_path);
    if (restored->config_hash != cfg_hash)
      throw std::runtime_error("config hash mismatch: state file " + cfg.state_path +
                               " was written by a different configuration");
    if (restored->finished) {
      log_note("experiment already finished; nothing to resume");
      ExperimentReport report;
      report.records = restored->records;
      return report;
    }
  }

  ExperimentReport report;
  if (restored) report.records = restored->records;
  const int first_run = restored ? restored->run : 0;

  const auto checkpoint_state = [&](int run, const PoolState& pool, bool finished) {
    if (cfg.state_path.empty()) return;
    ExperimentState st;
    st.config_hash = cfg_hash;
    st.run = run;
    st.step = pool.step;
    st.spent = pool.spent;
    st.labelled = pool.labelled;
    st.records = report.records;
    st.finished = finished;
    save_state(st, cfg.state_path);
  };

  int selections_done = 0;
  bool halted = false;

  for (int r = first_run; r < cfg.runs && !halted; ++r) {
    const std::uint64_t run_seed = cfg.base_seed + static_cast<std::uint64_t>(r);
    const std::uint64_t split_seed = mix_seed(cfg.base_seed, kSplitTag, r % cfg.splits);
    const DataSplit split =
        cfg.test_size > 0
            ? make_split_count(ds.graph, ds.labels, cfg.test_size, cfg.validation_size, split_seed)
            : make_split(ds.graph, ds.labels, cfg.test_fraction, cfg.validation_size, split_seed);

    const int labels_needed = cfg.init_pool + (max_checkpoint - spent0);
    if (labels_needed > static_cast<int>(split.pool.size()))
      throw std::runtime_error("budget infeasible: need " + std::to_string(labels_needed) +
                               " pool nodes, split provides " + std::to_string(split.pool.size()));

    LabelAudit audit(ds.labels);
    PoolState pool;
    if (restored && r == restored->run && !(restored->labelled.empty() && restored->step == 0)) {
      pool.labelled = restored->labelled;
      pool.step = restored->step;
      pool.spent = restored->spent;
      pool.unlabelled = sorted_difference(split.pool, pool.labelled);
      if (pool.unlabelled.size() + pool.labelled.size() != split.pool.size())
        throw std::runtime_error("state file does not match the dataset split");
    } else {
      Rng rng(mix_seed(run_seed, kInitPoolTag));
      auto initial = sample_without_replacement(split.pool, cfg.init_pool, rng);
      std::sort(initial.begin(), initial.end());
      pool.labelled = initial;
      pool.unlabelled = sorted_difference(split.pool, initial);
      pool.step = 0;
      pool.spent = spent0;
    }
    restored.reset();

    SelectionContext ctx;
    ctx.graph = &ds.graph;
    ctx.attributes = &ds.features;
    ctx.features = &h;
    ctx.pool_ids = split.pool;

    RunDiagnostics diag;
    diag.run = r;
    double dist_sum = 0.0;
    int dist_n = 0;

    while (true) {
      // retrain from scratch on the current labelled set
      const std::vector<int> labelled_classes =
          audit.gather(AccessPhase::Training, pool.labelled);
      const std::vector<int> val_classes =
          audit.gather(AccessPhase::ValidationEval, split.validation);
      TrainConfig tc = cfg.train;
      tc.seed = mix_seed(run_seed, kTrainTag, pool.step);
      const TrainResult trained = train(h, pool.labelled, labelled_classes, split.validation,
                                        val_classes, ds.labels.num_classes, cfg.hidden_dim, tc);
      ++diag.trainings;
      ctx.model = &trained.model;

      if (is_checkpoint(cfg.checkpoints, pool.spent)) {
        const std::vector<int> test_classes = audit.gather(AccessPhase::TestEval, split.test);
        const double acc = evaluate_accuracy(trained.model, h, test_classes, split.test);
        report.records.push_back(
            {r, run_seed, pool.spent, acc, static_cast<int>(pool.labelled.size())});
      }
      if (pool.spent >= max_checkpoint) break;

      const int batch =
          std::min(cfg.batch, next_checkpoint(cfg.checkpoints, pool.spent) - pool.spent);
      const SelectionResult sel =
          select(strat, pool, ctx, batch, mix_seed(run_seed, kSelectTag, pool.step));
      if (!std::isnan(sel.mean_dist_to_labelled)) {
        dist_sum += sel.mean_dist_to_labelled;
        ++dist_n;
      }
      pool.apply_selection(sel.selected);
      ++diag.selections;
      ++selections_done;
      checkpoint_state(r, pool, false);

      if (cfg.halt_after_selections > 0 && selections_done >= cfg.halt_after_selections) {
        halted = true;
        break;
      }
    }

    if (halted) break;

    diag.mean_dist_to_labelled =
        dist_n > 0 ? dist_sum / dist_n : std::numeric_limits<double>::quiet_NaN();
    diag.test_label_reads_training = audit.reads(AccessPhase::Training, split.test);
    diag.validation_label_reads_training = audit.reads(AccessPhase::Training, split.validation);
    diag.test_label_reads_selection = audit.reads(AccessPhase::Selection, split.test);
    diag.validation_label_reads_selection = audit.reads(AccessPhase::Selection, split.validation);
    report.diagnostics.push_back(diag);

    checkpoint_state(r + 1, PoolState{}, false);
  }

  if (halted) {
    report.complete = false;
  } else if (!cfg.state_path.empty()) {
    ExperimentState st;
    st.config_hash = cfg_hash;
    st.run = cfg.runs;
    st.records = report.records;
    st.finished = true;
    save_state(st, cfg.state_path);
  }
  return report;
}

}  // namespace lscale
