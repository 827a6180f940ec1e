#pragma once

#include <memory>
#include <string>
#include <vector>

#include "robagg/rng.hpp"
#include "robagg/vec.hpp"

namespace robagg {

// A distributed learning problem: one local loss per worker.
class Task {
 public:
  virtual ~Task() = default;

  virtual int dim() const = 0;
  virtual int workers() const = 0;
  virtual double loss(int worker, const Vec& theta) const = 0;
  virtual Vec gradient(int worker, const Vec& theta) const = 0;
  // Mini-batch gradient over b points sampled without replacement from the
  // worker's shard, 1 <= b <= shard size; sampled indices are sorted before
  // accumulation so b = shard size reproduces gradient() bit for bit.
  // Quadratics hold a single implicit point and accept any b.
  virtual Vec stochastic_gradient(int worker, const Vec& theta, long b,
                                  RngStream& rng) const = 0;
  // Smoothness constant L. Exact for quadratics; for logistic regression a
  // documented estimate used only for step-size heuristics.
  virtual double smoothness() const = 0;
  // True when L and the optimum are exact, i.e. bound checks apply.
  virtual bool exact_constants() const = 0;
  // The same task with corrupted labels (label flip l -> C-1-l; quadratics
  // negate their centers).
  virtual std::unique_ptr<Task> label_flipped() const = 0;

  double honest_loss(const IndexSet& H, const Vec& theta) const;
  Vec honest_gradient(const IndexSet& H, const Vec& theta) const;
};

// L_i(theta) = 0.5 * ||theta - c_i||^2.
class QuadraticTask : public Task {
 public:
  explicit QuadraticTask(std::vector<Vec> centers);

  int dim() const override;
  int workers() const override;
  double loss(int worker, const Vec& theta) const override;
  Vec gradient(int worker, const Vec& theta) const override;
  Vec stochastic_gradient(int worker, const Vec& theta, long b,
                          RngStream& rng) const override;
  double smoothness() const override { return 1.0; }
  bool exact_constants() const override { return true; }
  std::unique_ptr<Task> label_flipped() const override;

  const std::vector<Vec>& centers() const { return centers_; }
  // min_theta L_H = L_H(mean of the H centers), in closed form.
  double optimal_honest_loss(const IndexSet& H) const;
  // Exact squared heterogeneity bound: the variance of the H centers.
  double heterogeneity_G_sq(const IndexSet& H) const;

 private:
  std::vector<Vec> centers_;
};

struct LogisticData {
  std::vector<Vec> X;
  std::vector<int> y;
  int num_classes = 0;
};

// Multinomial logistic regression with an L2 term. The model is a C x d
// matrix flattened row-major; point loss is the softmax negative
// log-likelihood plus (l2/2)||theta||^2.
class LogisticTask : public Task {
 public:
  LogisticTask(std::shared_ptr<const LogisticData> data,
               std::vector<std::vector<int>> shards, double l2_reg);

  int dim() const override;
  int workers() const override;
  double loss(int worker, const Vec& theta) const override;
  Vec gradient(int worker, const Vec& theta) const override;
  Vec stochastic_gradient(int worker, const Vec& theta, long b,
                          RngStream& rng) const override;
  // 0.5 * max_i ||x_i||^2 + l2: softmax Hessian spectral bound times the
  // largest feature norm. An upper-bound estimate, not exact.
  double smoothness() const override;
  bool exact_constants() const override { return false; }
  std::unique_ptr<Task> label_flipped() const override;

  const LogisticData& data() const { return *data_; }
  const std::vector<std::vector<int>>& shards() const { return shards_; }
  double l2_reg() const { return l2_; }

 private:
  std::shared_ptr<const LogisticData> data_;
  std::vector<std::vector<int>> shards_;
  double l2_ = 0.0;
};

// Heterogeneity bound G: exact for quadratics (independent of probes), the
// empirical max over the probe points otherwise.
double heterogeneity_G(const Task& task, const IndexSet& H,
                       const std::vector<Vec>& probes);

struct DirichletPartition {
  std::vector<std::vector<int>> counts;  // [worker][class]
  std::vector<std::vector<int>> shards;  // [worker] -> sample indices
};

// For each class, draws proportions from Dirichlet(alpha * 1_n) and assigns
// that class's samples to workers by those proportions. Every sample lands
// in exactly one shard; empty shards are possible for small alpha.
DirichletPartition dirichlet_partition(const std::vector<int>& labels, int n,
                                       double alpha, int num_classes,
                                       RngStream& rng);

struct IdxArray {
  bool is_images = false;
  std::vector<int> dims;        // images: {count, rows, cols}; labels: {count}
  std::vector<Vec> images;      // pixel values already scaled to [0,1]
  std::vector<int> labels;
};

// Big-endian IDX reader (magic 0x00000803 for images, 0x00000801 for
// labels). Distinct errors for a bad magic, a truncated header, and a
// truncated payload.
IdxArray load_idx_file(const std::string& path);

// Loads an image/label file pair; errors with "count mismatch" when the two
// counts differ.
LogisticData load_idx(const std::string& images_path,
                      const std::string& labels_path);

// Gaussian class blobs for self-contained logistic runs: num_classes means
// on a scaled simplex, per_class points each, unit noise.
LogisticData synthetic_blobs(int per_class, int dim, int num_classes,
                             double separation, RngStream& rng);

}  // namespace robagg
