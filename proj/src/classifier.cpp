#include "lscale/classifier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lscale/rng.hpp"
#include "text_io.hpp"

namespace lscale {

namespace {

// Softmax over negated distances, written against the raw distance vector so
// callers do not have to negate first. Stable: shifts by the minimum distance.
Eigen::RowVectorXd softmax_neg_dist(const Eigen::RowVectorXd& dist) {
  const double dmin = dist.minCoeff();
  Eigen::RowVectorXd e = (-(dist.array() - dmin)).exp();
  return e / e.sum();
}

Eigen::RowVectorXd center_distances(const ClassifierModel& model, const Eigen::RowVectorXd& z) {
  Eigen::RowVectorXd d(model.num_classes());
  for (int k = 0; k < model.num_classes(); ++k) d(k) = (z - model.centers.row(k)).norm();
  return d;
}

void check_input_dim(const ClassifierModel& model, const FeatureMatrix& h) {
  if (h.cols() != model.w.rows())
    throw std::invalid_argument("classifier: feature dimension " + std::to_string(h.cols()) +
                                " does not match model input dimension " +
                                std::to_string(model.w.rows()));
}

struct AdamState {
  Eigen::MatrixXd m, v;
  explicit AdamState(Eigen::Index rows, Eigen::Index cols)
      : m(Eigen::MatrixXd::Zero(rows, cols)), v(Eigen::MatrixXd::Zero(rows, cols)) {}

  void update(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, double lr, int t) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(b1, t);
    const double c2 = 1.0 - std::pow(b2, t);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  }
};

}  // namespace

ClassifierModel init_model(int input_dim, int latent_dim, int num_classes, std::uint64_t seed) {
  if (input_dim < 1 || latent_dim < 1 || num_classes < 1)
    throw std::invalid_argument("init_model: dimensions must be positive");
  ClassifierModel model;
  model.w.resize(input_dim, latent_dim);
  model.centers.resize(num_classes, latent_dim);
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
  for (int i = 0; i < input_dim; ++i)
    for (int j = 0; j < latent_dim; ++j) model.w(i, j) = (2.0 * rng.unit() - 1.0) * bound;
  for (int k = 0; k < num_classes; ++k)
    for (int j = 0; j < latent_dim; ++j) model.centers(k, j) = 0.1 * rng.gaussian();
  return model;
}

Eigen::MatrixXd forward(const ClassifierModel& model, const FeatureMatrix& h) {
  check_input_dim(model, h);
  const Eigen::MatrixXd z = h * model.w;
  Eigen::MatrixXd out(h.rows(), model.num_classes());
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    out.row(i) = softmax_neg_dist(center_distances(model, z.row(i)));
  return out;
}

double loss(const Eigen::MatrixXd& predictions, std::span<const int> classes,
            std::span<const int> ids) {
  if (ids.empty()) throw std::invalid_argument("loss: empty labelled set");
  if (classes.size() != ids.size())
    throw std::invalid_argument("loss: classes and ids must be parallel");
  double total = 0.0;
  for (size_t a = 0; a < ids.size(); ++a) {
    const int i = ids[a];
    const int y = classes[a];
    if (i < 0 || i >= predictions.rows() || y < 0 || y >= predictions.cols())
      throw std::out_of_range("loss: row or class index out of range");
    total -= std::log(std::max(predictions(i, y), 1e-300));
  }
  return total / static_cast<double>(ids.size());
}

Gradients gradients(const ClassifierModel& model, const FeatureMatrix& h,
                    std::span<const int> classes, std::span<const int> ids, double weight_decay,
                    double* data_loss) {
  check_input_dim(model, h);
  if (ids.empty()) throw std::invalid_argument("gradients: empty labelled set");
  if (classes.size() != ids.size())
    throw std::invalid_argument("gradients: classes and ids must be parallel");

  Gradients g;
  g.w = weight_decay * model.w;
  g.centers = weight_decay * model.centers;

  const double scale = 1.0 / static_cast<double>(ids.size());
  double ce = 0.0;
  for (size_t a = 0; a < ids.size(); ++a) {
    const int i = ids[a];
    const int y = classes[a];
    const Eigen::RowVectorXd z = h.row(i) * model.w;
    const Eigen::RowVectorXd dist = center_distances(model, z);
    const Eigen::RowVectorXd p = softmax_neg_dist(dist);
    ce -= std::log(std::max(p(y), 1e-300));

    Eigen::RowVectorXd gz = Eigen::RowVectorXd::Zero(model.latent_dim());
    for (int k = 0; k < model.num_classes(); ++k) {
      const double gk = scale * (p(k) - (k == y ? 1.0 : 0.0));
      if (dist(k) > 0.0) {
        const Eigen::RowVectorXd unit = (z - model.centers.row(k)) / dist(k);
        gz -= gk * unit;
        g.centers.row(k) += gk * unit;
      }
      // zero distance: subgradient taken as zero
    }
    g.w += h.row(i).transpose() * gz;
  }
  if (data_loss) *data_loss = ce * scale;
  return g;
}

std::vector<int> predict_labels(const ClassifierModel& model, const FeatureMatrix& h) {
  const Eigen::MatrixXd p = forward(model, h);
  std::vector<int> out(p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    int best = 0;
    for (int k = 1; k < p.cols(); ++k)
      if (p(i, k) > p(i, best)) best = k;
    out[i] = best;
  }
  return out;
}

TrainResult train_from(ClassifierModel model, const FeatureMatrix& h,
                       std::span<const int> labelled_ids, std::span<const int> labelled_classes,
                       std::span<const int> validation_ids,
                       std::span<const int> validation_classes, const TrainConfig& cfg) {
  check_input_dim(model, h);
  if (labelled_ids.empty()) throw std::invalid_argument("train: empty labelled set");
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be > 0");
  if (cfg.early_stop_window < 1) throw std::invalid_argument("train: window must be >= 1");
  if (validation_ids.size() != validation_classes.size() ||
      labelled_ids.size() != labelled_classes.size())
    throw std::invalid_argument("train: classes and ids must be parallel");

  const int nl = static_cast<int>(labelled_ids.size());
  const int nv = static_cast<int>(validation_ids.size());
  FeatureMatrix hl(nl, h.cols());
  for (int a = 0; a < nl; ++a) hl.row(a) = h.row(labelled_ids[a]);
  FeatureMatrix hv(nv, h.cols());
  for (int a = 0; a < nv; ++a) hv.row(a) = h.row(validation_ids[a]);
  std::vector<int> rows(nl);
  for (int a = 0; a < nl; ++a) rows[a] = a;

  AdamState adam_w(model.w.rows(), model.w.cols());
  AdamState adam_c(model.centers.rows(), model.centers.cols());

  TrainResult result;
  ClassifierModel best = model;
  double best_acc = -1.0;
  int best_epoch = 0;
  int stale = 0;

  int epoch = 0;
  for (epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    double ce = 0.0;
    const Gradients g =
        gradients(model, hl, labelled_classes, rows, cfg.weight_decay, &ce);
    adam_w.update(model.w, g.w, cfg.learning_rate, epoch);
    adam_c.update(model.centers, g.centers, cfg.learning_rate, epoch);

    double val_acc = std::numeric_limits<double>::quiet_NaN();
    if (nv > 0) {
      const std::vector<int> pred = predict_labels(model, hv);
      int correct = 0;
      for (int a = 0; a < nv; ++a)
        if (pred[a] == validation_classes[a]) ++correct;
      val_acc = static_cast<double>(correct) / nv;
    }
    result.history.push_back({epoch, ce, val_acc});

    if (nv > 0) {
      if (val_acc > best_acc) {
        best_acc = val_acc;
        best = model;
        best_epoch = epoch;
        stale = 0;
      } else if (++stale >= cfg.early_stop_window) {
        break;
      }
    }
  }
  result.epochs_run = std::min(epoch, cfg.max_epochs);

  if (nv > 0) {
    result.model = std::move(best);
    result.best_epoch = best_epoch;
  } else {
    result.model = std::move(model);
    result.best_epoch = result.epochs_run;
  }
  return result;
}

TrainResult train(const FeatureMatrix& h, std::span<const int> labelled_ids,
                  std::span<const int> labelled_classes, std::span<const int> validation_ids,
                  std::span<const int> validation_classes, int num_classes, int latent_dim,
                  const TrainConfig& cfg) {
  ClassifierModel model = init_model(static_cast<int>(h.cols()), latent_dim, num_classes, cfg.seed);
  return train_from(std::move(model), h, labelled_ids, labelled_classes, validation_ids,
                    validation_classes, cfg);
}

void save_model(const std::string& path, const ClassifierModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << model.input_dim() << " " << model.latent_dim() << " " << model.num_classes() << "\n";
  char buf[64];
  const auto write_rows = [&](const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
        if (c) out << ' ';
        out << buf;
      }
      out << '\n';
    }
  };
  write_rows(model.w);
  write_rows(model.centers);
  if (!out) throw std::runtime_error(path + ": write failed");
}

ClassifierModel load_model(const std::string& path) {
  auto in = detail::open_or_throw(path);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) detail::fail_at(path, 1, "missing header");
  ++line_no;
  const auto header = detail::split_ws(line);
  if (header.size() != 3) detail::fail_at(path, line_no, "header must be \"d' l' K\"");
  const long d = detail::parse_long(header[0], path, line_no);
  const long l = detail::parse_long(header[1], path, line_no);
  const long k = detail::parse_long(header[2], path, line_no);
  if (d < 1 || l < 1 || k < 1) detail::fail_at(path, line_no, "non-positive dimension");

  ClassifierModel model;
  model.w.resize(d, l);
  model.centers.resize(k, l);
  const auto read_rows = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (!std::getline(in, line)) detail::fail_at(path, line_no + 1, "unexpected end of file");
      ++line_no;
      const auto toks = detail::split_ws(line);
      if (static_cast<Eigen::Index>(toks.size()) != m.cols())
        detail::fail_at(path, line_no, "wrong number of values in row");
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        m(r, c) = detail::parse_double(toks[c], path, line_no);
    }
  };
  read_rows(model.w);
  read_rows(model.centers);
  return model;
}

}  // namespace lscale
