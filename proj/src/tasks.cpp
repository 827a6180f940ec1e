#include "robagg/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace robagg {

namespace {

void require_worker(int worker, int n) {
  if (worker < 0 || worker >= n)
    throw std::invalid_argument("unknown worker id " + std::to_string(worker));
}

}  // namespace

double Task::honest_loss(const IndexSet& H, const Vec& theta) const {
  H.validate(workers());
  double s = 0.0;
  for (int i : H.idx) s += loss(i - 1, theta);
  return s / H.size();
}

Vec Task::honest_gradient(const IndexSet& H, const Vec& theta) const {
  H.validate(workers());
  Vec g(theta.size(), 0.0);
  for (int i : H.idx) axpy(g, 1.0, gradient(i - 1, theta));
  for (auto& v : g) v /= H.size();
  return g;
}

QuadraticTask::QuadraticTask(std::vector<Vec> centers)
    : centers_(std::move(centers)) {
  if (centers_.empty()) throw std::invalid_argument("no worker centers");
  check_same_dim(centers_);
}

int QuadraticTask::dim() const { return static_cast<int>(centers_[0].size()); }

int QuadraticTask::workers() const { return static_cast<int>(centers_.size()); }

double QuadraticTask::loss(int worker, const Vec& theta) const {
  require_worker(worker, workers());
  return 0.5 * sq_dist(theta, centers_[worker]);
}

Vec QuadraticTask::gradient(int worker, const Vec& theta) const {
  require_worker(worker, workers());
  return sub(theta, centers_[worker]);
}

Vec QuadraticTask::stochastic_gradient(int worker, const Vec& theta, long,
                                       RngStream&) const {
  return gradient(worker, theta);
}

std::unique_ptr<Task> QuadraticTask::label_flipped() const {
  std::vector<Vec> neg(centers_.size());
  for (std::size_t i = 0; i < centers_.size(); ++i)
    neg[i] = scale(centers_[i], -1.0);
  return std::make_unique<QuadraticTask>(std::move(neg));
}

double QuadraticTask::optimal_honest_loss(const IndexSet& H) const {
  // L_H at the center mean collapses to half the center variance
  return 0.5 * subset_variance(centers_, H);
}

double QuadraticTask::heterogeneity_G_sq(const IndexSet& H) const {
  return subset_variance(centers_, H);
}

LogisticTask::LogisticTask(std::shared_ptr<const LogisticData> data,
                           std::vector<std::vector<int>> shards, double l2_reg)
    : data_(std::move(data)), shards_(std::move(shards)), l2_(l2_reg) {
  if (!data_ || data_->X.empty())
    throw std::invalid_argument("empty dataset");
  if (data_->X.size() != data_->y.size())
    throw std::invalid_argument("feature/label count mismatch");
  if (data_->num_classes < 2)
    throw std::invalid_argument("need at least two classes");
  if (l2_ < 0) throw std::invalid_argument("negative l2 regularizer");
  check_same_dim(data_->X);
  int total = static_cast<int>(data_->X.size());
  for (auto& shard : shards_) {
    if (shard.empty()) throw std::invalid_argument("empty worker shard");
    for (int idx : shard)
      if (idx < 0 || idx >= total)
        throw std::invalid_argument("shard index out of range");
    // keep shards sorted so any full batch walks points in one fixed order
    std::sort(shard.begin(), shard.end());
  }
  for (int y : data_->y)
    if (y < 0 || y >= data_->num_classes)
      throw std::invalid_argument("label out of range");
}

int LogisticTask::dim() const {
  return data_->num_classes * static_cast<int>(data_->X[0].size());
}

int LogisticTask::workers() const { return static_cast<int>(shards_.size()); }

namespace {

// softmax scores with the max shifted out; returns log-sum-exp
double softmax_probs(const Vec& theta, const Vec& x, int C, Vec& probs) {
  std::size_t d = x.size();
  probs.assign(C, 0.0);
  double mx = -HUGE_VAL;
  for (int c = 0; c < C; ++c) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += theta[c * d + k] * x[k];
    probs[c] = s;
    mx = std::max(mx, s);
  }
  double z = 0.0;
  for (int c = 0; c < C; ++c) z += std::exp(probs[c] - mx);
  double lse = std::log(z) + mx;
  for (int c = 0; c < C; ++c) probs[c] = std::exp(probs[c] - lse);
  return lse;
}

}  // namespace

double LogisticTask::loss(int worker, const Vec& theta) const {
  require_worker(worker, workers());
  if (static_cast<int>(theta.size()) != dim())
    throw std::invalid_argument("model dimension mismatch");
  int C = data_->num_classes;
  std::size_t d = data_->X[0].size();
  Vec probs;
  double s = 0.0;
  for (int idx : shards_[worker]) {
    const Vec& x = data_->X[idx];
    double lse = softmax_probs(theta, x, C, probs);
    double sy = 0.0;
    for (std::size_t k = 0; k < d; ++k) sy += theta[data_->y[idx] * d + k] * x[k];
    s += lse - sy;
  }
  s /= shards_[worker].size();
  return s + 0.5 * l2_ * sq_norm(theta);
}

Vec LogisticTask::gradient(int worker, const Vec& theta) const {
  require_worker(worker, workers());
  if (static_cast<int>(theta.size()) != dim())
    throw std::invalid_argument("model dimension mismatch");
  int C = data_->num_classes;
  std::size_t d = data_->X[0].size();
  Vec g(theta.size(), 0.0);
  Vec probs;
  for (int idx : shards_[worker]) {
    const Vec& x = data_->X[idx];
    softmax_probs(theta, x, C, probs);
    for (int c = 0; c < C; ++c) {
      double coef = probs[c] - (c == data_->y[idx] ? 1.0 : 0.0);
      for (std::size_t k = 0; k < d; ++k) g[c * d + k] += coef * x[k];
    }
  }
  for (auto& v : g) v /= shards_[worker].size();
  axpy(g, l2_, theta);
  return g;
}

Vec LogisticTask::stochastic_gradient(int worker, const Vec& theta, long b,
                                      RngStream& rng) const {
  require_worker(worker, workers());
  const auto& shard = shards_[worker];
  long m = static_cast<long>(shard.size());
  if (b < 1 || b > m)
    throw std::invalid_argument("batch size out of range");
  // partial Fisher-Yates draws b distinct positions, then a sort restores
  // the fixed accumulation order
  std::vector<int> pos(m);
  for (long i = 0; i < m; ++i) pos[i] = static_cast<int>(i);
  for (long k = 0; k < b; ++k) {
    long j = k + static_cast<long>(rng.bounded(static_cast<std::uint64_t>(m - k)));
    std::swap(pos[k], pos[j]);
  }
  std::vector<int> chosen(pos.begin(), pos.begin() + b);
  std::sort(chosen.begin(), chosen.end());

  int C = data_->num_classes;
  std::size_t d = data_->X[0].size();
  Vec g(theta.size(), 0.0);
  Vec probs;
  for (int p : chosen) {
    int idx = shard[p];
    const Vec& x = data_->X[idx];
    softmax_probs(theta, x, C, probs);
    for (int c = 0; c < C; ++c) {
      double coef = probs[c] - (c == data_->y[idx] ? 1.0 : 0.0);
      for (std::size_t k = 0; k < d; ++k) g[c * d + k] += coef * x[k];
    }
  }
  for (auto& v : g) v /= b;
  axpy(g, l2_, theta);
  return g;
}

double LogisticTask::smoothness() const {
  double mx = 0.0;
  for (const auto& x : data_->X) mx = std::max(mx, sq_norm(x));
  return 0.5 * mx + l2_;
}

std::unique_ptr<Task> LogisticTask::label_flipped() const {
  auto flipped = std::make_shared<LogisticData>(*data_);
  for (auto& y : flipped->y) y = flipped->num_classes - 1 - y;
  return std::make_unique<LogisticTask>(std::move(flipped), shards_, l2_);
}

double heterogeneity_G(const Task& task, const IndexSet& H,
                       const std::vector<Vec>& probes) {
  if (auto* q = dynamic_cast<const QuadraticTask*>(&task))
    return std::sqrt(q->heterogeneity_G_sq(H));
  if (probes.empty())
    throw std::invalid_argument("probe points required for this task");
  double worst = 0.0;
  for (const auto& theta : probes) {
    Vec gh = task.honest_gradient(H, theta);
    double s = 0.0;
    for (int i : H.idx) s += sq_dist(task.gradient(i - 1, theta), gh);
    worst = std::max(worst, s / H.size());
  }
  return std::sqrt(worst);
}

DirichletPartition dirichlet_partition(const std::vector<int>& labels, int n,
                                       double alpha, int num_classes,
                                       RngStream& rng) {
  if (labels.empty()) throw std::invalid_argument("no labels to partition");
  if (n < 1) throw std::invalid_argument("need at least one worker");
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
  for (int l : labels)
    if (l < 0 || l >= num_classes)
      throw std::invalid_argument("label out of range");

  DirichletPartition part;
  part.counts.assign(n, std::vector<int>(num_classes, 0));
  part.shards.assign(n, {});

  std::vector<double> p(n), cdf(n);
  for (int c = 0; c < num_classes; ++c) {
    double total = 0.0;
    for (int w = 0; w < n; ++w) {
      p[w] = rng.gamma(alpha);
      total += p[w];
    }
    if (total <= 0.0) {
      // all gamma draws underflowed; fall back to an even split
      std::fill(p.begin(), p.end(), 1.0);
      total = n;
    }
    double acc = 0.0;
    for (int w = 0; w < n; ++w) {
      acc += p[w] / total;
      cdf[w] = acc;
    }
    cdf[n - 1] = 1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != c) continue;
      double u = rng.uniform01();
      int w = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) -
                               cdf.begin());
      if (w >= n) w = n - 1;
      part.counts[w][c] += 1;
      part.shards[w].push_back(static_cast<int>(i));
    }
  }
  for (auto& shard : part.shards) std::sort(shard.begin(), shard.end());
  return part;
}

namespace {

std::uint32_t read_u32be(const std::vector<unsigned char>& bytes,
                         std::size_t off) {
  return (static_cast<std::uint32_t>(bytes[off]) << 24) |
         (static_cast<std::uint32_t>(bytes[off + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[off + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[off + 3]);
}

}  // namespace

IdxArray load_idx_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 4)
    throw std::runtime_error("truncated header in " + path);
  std::uint32_t magic = read_u32be(bytes, 0);
  IdxArray out;
  if (magic == 0x00000803u) {
    out.is_images = true;
    if (bytes.size() < 16)
      throw std::runtime_error("truncated header in " + path);
    std::uint32_t count = read_u32be(bytes, 4);
    std::uint32_t rows = read_u32be(bytes, 8);
    std::uint32_t cols = read_u32be(bytes, 12);
    out.dims = {static_cast<int>(count), static_cast<int>(rows),
                static_cast<int>(cols)};
    std::size_t need = static_cast<std::size_t>(count) * rows * cols;
    if (bytes.size() - 16 < need)
      throw std::runtime_error("truncated payload in " + path);
    std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    out.images.assign(count, Vec(pixels));
    std::size_t off = 16;
    for (std::uint32_t i = 0; i < count; ++i)
      for (std::size_t k = 0; k < pixels; ++k)
        out.images[i][k] = bytes[off++] / 255.0;
  } else if (magic == 0x00000801u) {
    if (bytes.size() < 8)
      throw std::runtime_error("truncated header in " + path);
    std::uint32_t count = read_u32be(bytes, 4);
    out.dims = {static_cast<int>(count)};
    if (bytes.size() - 8 < count)
      throw std::runtime_error("truncated payload in " + path);
    out.labels.assign(count, 0);
    for (std::uint32_t i = 0; i < count; ++i) out.labels[i] = bytes[8 + i];
  } else {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "0x%08x", magic);
    throw std::runtime_error("bad magic " + std::string(buf) + " in " + path);
  }
  return out;
}

LogisticData load_idx(const std::string& images_path,
                      const std::string& labels_path) {
  IdxArray img = load_idx_file(images_path);
  if (!img.is_images)
    throw std::runtime_error("not an image file: " + images_path);
  IdxArray lab = load_idx_file(labels_path);
  if (lab.is_images)
    throw std::runtime_error("not a label file: " + labels_path);
  if (img.images.size() != lab.labels.size())
    throw std::runtime_error("count mismatch: " +
                             std::to_string(img.images.size()) + " images vs " +
                             std::to_string(lab.labels.size()) + " labels");
  LogisticData data;
  data.X = std::move(img.images);
  data.y = std::move(lab.labels);
  int mx = 0;
  for (int y : data.y) mx = std::max(mx, y);
  data.num_classes = mx + 1;
  return data;
}

LogisticData synthetic_blobs(int per_class, int dim, int num_classes,
                             double separation, RngStream& rng) {
  if (per_class < 1 || dim < 1 || num_classes < 2)
    throw std::invalid_argument("invalid blob shape");
  LogisticData data;
  data.num_classes = num_classes;
  for (int c = 0; c < num_classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      Vec x(dim);
      for (int k = 0; k < dim; ++k) x[k] = rng.normal();
      x[c % dim] += separation;
      data.X.push_back(std::move(x));
      data.y.push_back(c);
    }
  }
  return data;
}

}  // namespace robagg
