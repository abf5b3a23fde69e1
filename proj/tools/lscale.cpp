// Command-line harness for pool-based active learning on attributed graphs.
//
// Subcommands:
//   run          full multi-run experiment, writes records.csv + summary.csv
//   select       advance the run in a state file by one selection step
//   embed        materialize propagated features to a matrix file
//   dump-latent  write the combined selection space for external plotting
//   report       re-aggregate an existing records.csv

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lscale/harness.hpp"
#include "lscale/latent.hpp"
#include "lscale/log.hpp"
#include "lscale/rng.hpp"
#include "lscale/state.hpp"

namespace {

using namespace lscale;

// shared experiment flags; mirrors the config-file keys (flags override file)
void add_experiment_options(CLI::App& cmd, ExperimentConfig& cfg) {
  cmd.add_option("--dataset", cfg.dataset_dir, "dataset directory")->required();
  cmd.add_option("--strategy", cfg.strategy_name,
                 "lscale | random | uncertainty | featprop | featprop-u");
  cmd.add_option("--budget", cfg.checkpoints, "budget checkpoints, e.g. 10,30,60")
      ->delimiter(',');
  cmd.add_option("--batch", cfg.batch, "nodes selected per step");
  cmd.add_option("--init-pool", cfg.init_pool, "size of the initial labelled pool");
  cmd.add_option("--runs", cfg.runs, "number of runs");
  cmd.add_option("--splits", cfg.splits, "number of distinct data splits (runs round-robin)");
  cmd.add_option("--seed", cfg.base_seed, "base seed; run r uses seed base+r");
  cmd.add_option("--lambda", cfg.lambda, "mixing decay for the lscale strategy");
  cmd.add_option("--hidden-dim", cfg.hidden_dim, "classifier latent dimension");
  cmd.add_option("--khops", cfg.khops, "propagation depth for propagated features / featprop");
  cmd.add_option("--features", cfg.features_spec, "provider: propagated | file:PATH");
  cmd.add_option("--lr", cfg.train.learning_rate, "classifier learning rate");
  cmd.add_option("--weight-decay", cfg.train.weight_decay, "classifier weight decay");
  cmd.add_option("--epochs", cfg.train.max_epochs, "max training epochs");
  cmd.add_option("--early-stop-window", cfg.train.early_stop_window,
                 "epochs without validation improvement before stopping");
  cmd.add_option("--test-fraction", cfg.test_fraction, "test set fraction");
  cmd.add_option("--test-size", cfg.test_size, "absolute test set size (overrides fraction)");
  cmd.add_option("--val-size", cfg.validation_size, "validation set size");
  cmd.add_option("--restarts", cfg.restarts, "clustering restarts per selection step");
  cmd.add_flag("--no-incremental{false}", cfg.incremental,
               "lscale: plain per-step clustering instead of the incremental variant");
  cmd.add_flag("--count-initial-in-budget", cfg.count_initial_in_budget,
               "charge the initial pool against the budget");
  cmd.add_option("--config", "flat key=value config file; explicit flags override it");
}

// Expands "--config FILE" by appending the file's key=value entries as
// "--key=value" tokens, skipping keys already given on the command line.
void expand_config_file(std::vector<std::string>& args) {
  std::string path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;

  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");

  const auto given = [&](const std::string& key) {
    for (const auto& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    auto sep = line.find('=');
    if (sep == std::string::npos) sep = line.find_first_of(" \t");
    if (sep == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'key=value'");
    std::string key = line.substr(0, line.find_first_of(" \t="));
    std::string value = line.substr(sep + 1);
    const auto vfirst = value.find_first_not_of(" \t=");
    value = vfirst == std::string::npos ? "" : value.substr(vfirst);
    if (key.empty() || value.empty())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'key=value'");
    if (!given(key)) args.push_back("--" + key + "=" + value);
  }
}

int cmd_run(ExperimentConfig& cfg) {
  const ExperimentReport report = run_experiment(cfg);
  if (!report.complete) {
    std::cout << "halted early; state saved to " << cfg.state_path << "\n";
    return 0;
  }
  if (!cfg.out_dir.empty()) {
    write_report(report, cfg.out_dir);
    std::cout << "wrote " << cfg.out_dir << "/records.csv and summary.csv\n";
  }
  const auto stats = report.summary();
  std::cout << format_summary(stats);
  for (const auto& d : report.diagnostics) {
    if (d.test_label_reads_training || d.validation_label_reads_training ||
        d.test_label_reads_selection || d.validation_label_reads_selection) {
      std::cout << "WARNING: run " << d.run << " read held-out labels during training/selection\n";
      return 1;
    }
  }
  return 0;
}

int cmd_select(ExperimentConfig& cfg) {
  size_t known = 0;
  bool fresh = true;
  if (std::filesystem::exists(cfg.state_path)) {
    const ExperimentState st = load_state(cfg.state_path);
    if (st.finished) {
      std::cout << "experiment already finished; nothing to select\n";
      return 0;
    }
    known = st.labelled.size();
    fresh = st.labelled.empty();
  }
  // a fresh (or run-boundary) state draws the initial pool before selecting
  if (fresh) known = static_cast<size_t>(cfg.init_pool);

  cfg.halt_after_selections = 1;
  run_experiment(cfg);
  const ExperimentState after = load_state(cfg.state_path);
  std::cout << "run " << after.run << ", step " << after.step << ", labelled "
            << after.labelled.size() << ", selected:";
  for (size_t i = known; i < after.labelled.size(); ++i) std::cout << ' ' << after.labelled[i];
  std::cout << "\n";
  return 0;
}

int cmd_embed(const std::string& dataset_dir, int khops, const std::string& out_path) {
  const Dataset ds = load_dataset(dataset_dir);
  const FeatureMatrix prop = propagate_features(ds.graph, ds.features, khops);
  save_matrix(out_path, prop);
  std::cout << "wrote " << out_path << " (" << prop.rows() << " x " << prop.cols() << ")\n";
  return 0;
}

// Rebuild the combined selection space for the labelled set in a state file:
// retrain on the labelled nodes, then mix the normalized feature spaces with
// the scheduled alpha.
int cmd_dump_latent(ExperimentConfig& cfg, const std::string& out_path) {
  const ExperimentState st = load_state(cfg.state_path);
  if (st.config_hash != cfg.hash())
    throw std::runtime_error("config hash mismatch: state file " + cfg.state_path +
                             " was written by a different configuration");
  if (st.labelled.empty())
    throw std::runtime_error("state file has no labelled nodes yet");

  const Dataset ds = load_dataset(cfg.dataset_dir);
  const FeatureMatrix h = cfg.provider().realize(ds.graph, ds.features);
  const std::uint64_t split_seed =
      mix_seed(cfg.base_seed, 0x53504c4954ULL, st.run % cfg.splits);
  const DataSplit split =
      cfg.test_size > 0
          ? make_split_count(ds.graph, ds.labels, cfg.test_size, cfg.validation_size, split_seed)
          : make_split(ds.graph, ds.labels, cfg.test_fraction, cfg.validation_size, split_seed);

  std::vector<int> labelled_classes, val_classes;
  for (const int v : st.labelled) labelled_classes.push_back(ds.labels.labels[v]);
  for (const int v : split.validation) val_classes.push_back(ds.labels.labels[v]);

  TrainConfig tc = cfg.train;
  tc.seed = mix_seed(cfg.base_seed + st.run, 0x545241494eULL, st.step);
  const TrainResult trained = train(h, st.labelled, labelled_classes, split.validation,
                                    val_classes, ds.labels.num_classes, cfg.hidden_dim, tc);

  const double alpha = alpha_schedule(cfg.lambda, static_cast<int>(st.labelled.size()));
  const LatentSpace space = build_latent_space(h, h * trained.model.w, alpha);
  save_matrix(out_path, space.combined);
  std::cout << "wrote " << out_path << " (" << space.combined.rows() << " x "
            << space.combined.cols() << ", alpha=" << alpha << ")\n";
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& out_dir) {
  const auto records = read_records(records_path);
  if (records.empty()) throw std::runtime_error("nothing to report");
  const auto stats = aggregate(records);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_summary_csv(stats, (std::filesystem::path(out_dir) / "summary.csv").string());
  }
  std::cout << format_summary(stats);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active learning for node classification on attributed graphs"};
  app.require_subcommand(1);

  int verbosity = 1;
  app.add_flag_function(
      "-q,--quiet", [&](std::int64_t) { verbosity = 0; }, "suppress notes");

  ExperimentConfig run_cfg;
  auto* run = app.add_subcommand("run", "run a full experiment");
  add_experiment_options(*run, run_cfg);
  run->add_option("--out", run_cfg.out_dir, "output directory for records.csv / summary.csv");
  run->add_option("--state", run_cfg.state_path, "state file for checkpoint/resume");

  ExperimentConfig select_cfg;
  auto* sel = app.add_subcommand("select", "perform one selection step against a state file");
  add_experiment_options(*sel, select_cfg);
  sel->add_option("--state", select_cfg.state_path, "state file (created if missing)")
      ->required();

  std::string embed_dataset, embed_out;
  int embed_khops = 2;
  auto* embed = app.add_subcommand("embed", "write propagated features to a matrix file");
  embed->add_option("--dataset", embed_dataset, "dataset directory")->required();
  embed->add_option("--khops", embed_khops, "propagation depth");
  embed->add_option("--out", embed_out, "output matrix file")->required();

  ExperimentConfig dump_cfg;
  std::string dump_out;
  auto* dump = app.add_subcommand("dump-latent", "write the combined selection space");
  add_experiment_options(*dump, dump_cfg);
  dump->add_option("--state", dump_cfg.state_path, "state file with the labelled set")
      ->required();
  dump->add_option("--out", dump_out, "output matrix file")->required();

  std::string report_records, report_out;
  auto* rep = app.add_subcommand("report", "re-aggregate a records.csv");
  rep->add_option("--records", report_records, "records.csv path")->required();
  rep->add_option("--out", report_out, "directory for the regenerated summary.csv");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    expand_config_file(args);
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  lscale::set_log_level(verbosity);

  try {
    if (run->parsed()) return cmd_run(run_cfg);
    if (sel->parsed()) return cmd_select(select_cfg);
    if (embed->parsed()) return cmd_embed(embed_dataset, embed_khops, embed_out);
    if (dump->parsed()) return cmd_dump_latent(dump_cfg, dump_out);
    if (rep->parsed()) return cmd_report(report_records, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
