#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lscale/matrix.hpp"

namespace lscale {

// Distance-based linear classifier: z_i = h_i W, one learnable
// representation per class, prediction = softmax over negated Euclidean
// distances to the class representations. Argmax therefore coincides with
// nearest-representation assignment.
struct ClassifierModel {
  Eigen::MatrixXd w;        // d' x l'
  Eigen::MatrixXd centers;  // K x l'

  int input_dim() const { return static_cast<int>(w.rows()); }
  int latent_dim() const { return static_cast<int>(w.cols()); }
  int num_classes() const { return static_cast<int>(centers.rows()); }
};

struct TrainConfig {
  double learning_rate = 0.2;
  double weight_decay = 5e-6;
  int max_epochs = 300;
  int early_stop_window = 10;
  std::uint64_t seed = 1;
};

// w ~ U(-1/sqrt(d'), 1/sqrt(d')), centers ~ N(0, 0.1^2), both seeded.
ClassifierModel init_model(int input_dim, int latent_dim, int num_classes, std::uint64_t seed);

// Row i = softmax_k(-||z_i - c_k||). Rows sum to 1.
Eigen::MatrixXd forward(const ClassifierModel& model, const FeatureMatrix& h);

// Mean negative log-likelihood over the listed rows; classes[a] is the true
// class of row ids[a].
double loss(const Eigen::MatrixXd& predictions, std::span<const int> classes,
            std::span<const int> ids);

struct Gradients {
  Eigen::MatrixXd w;
  Eigen::MatrixXd centers;
};

// Analytic gradient of the mean NLL plus weight_decay * parameters.
// A row exactly at a class representation contributes a zero subgradient
// for that distance term. Optionally reports the data loss.
Gradients gradients(const ClassifierModel& model, const FeatureMatrix& h,
                    std::span<const int> classes, std::span<const int> ids,
                    double weight_decay = 0.0, double* data_loss = nullptr);

// Per-row argmax class, ties to the lowest class index.
std::vector<int> predict_labels(const ClassifierModel& model, const FeatureMatrix& h);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  ClassifierModel model;  // parameters of the best-validation epoch
  std::vector<EpochStats> history;
  int best_epoch = 0;
  int epochs_run = 0;
};

// Full-batch Adam (bias-corrected, beta 0.9/0.999, eps 1e-8) with L2 weight
// decay folded into the gradient. Stops early when validation accuracy has
// not improved for early_stop_window consecutive epochs; with an empty
// validation set it runs max_epochs and keeps the final parameters.
// Deterministic for a fixed config seed.
TrainResult train(const FeatureMatrix& h, std::span<const int> labelled_ids,
                  std::span<const int> labelled_classes, std::span<const int> validation_ids,
                  std::span<const int> validation_classes, int num_classes, int latent_dim,
                  const TrainConfig& cfg);

// Same, starting from the given parameters instead of a seeded init.
TrainResult train_from(ClassifierModel model, const FeatureMatrix& h,
                       std::span<const int> labelled_ids, std::span<const int> labelled_classes,
                       std::span<const int> validation_ids,
                       std::span<const int> validation_classes, const TrainConfig& cfg);

// Checkpoint: header "d' l' K", then the rows of w, then the class rows.
void save_model(const std::string& path, const ClassifierModel& model);
ClassifierModel load_model(const std::string& path);

}  // namespace lscale
