#include "lscale/state.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lscale {

void save_state(const ExperimentState& state, const std::string& path) {
  nlohmann::json j;
  j["config_hash"] = state.config_hash;
  j["run"] = state.run;
  j["step"] = state.step;
  j["spent"] = state.spent;
  j["labelled"] = state.labelled;
  j["finished"] = state.finished;
  auto& recs = j["records"] = nlohmann::json::array();
  for (const auto& r : state.records)
    recs.push_back({r.run, r.seed, r.checkpoint, r.accuracy, r.labelled_count});

  // write-then-rename so an interrupted save never clobbers a good state
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error(tmp + ": cannot open file for writing");
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error(tmp + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

ExperimentState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid state file: " + e.what());
  }
  try {
    ExperimentState s;
    s.config_hash = j.at("config_hash").get<std::uint64_t>();
    s.run = j.at("run").get<int>();
    s.step = j.at("step").get<int>();
    s.spent = j.at("spent").get<int>();
    s.labelled = j.at("labelled").get<std::vector<int>>();
    s.finished = j.at("finished").get<bool>();
    for (const auto& r : j.at("records")) {
      AccuracyRecord rec;
      rec.run = r.at(0).get<int>();
      rec.seed = r.at(1).get<std::uint64_t>();
      rec.checkpoint = r.at(2).get<int>();
      rec.accuracy = r.at(3).get<double>();
      rec.labelled_count = r.at(4).get<int>();
      s.records.push_back(rec);
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid state file: " + e.what());
  }
}

}  // namespace lscale
