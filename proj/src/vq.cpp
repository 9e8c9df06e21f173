// Copyright 2026 The fvq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fvq/vq.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "fvq/error.hpp"
#include "fvq/parallel.hpp"
#include "fvq/random.hpp"

namespace fvq {
namespace {

constexpr std::size_t kChunk = 1 << 14;
constexpr int kMaxTreeDim = 32;

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

}  // namespace

// ---------------------------------------------------------------------------

std::uint64_t codebook_size(int l_vq, int q_vq) {
  require(l_vq >= 1 && q_vq >= 0, "codebook geometry must have l_vq >= 1, q_vq >= 0");
  const long bits = static_cast<long>(l_vq) * q_vq;
  require(bits <= 62, "codebook size 2^" + std::to_string(bits) + " overflows");
  return std::uint64_t{1} << bits;
}

void Codebook::validate() const {
  require(l_vq >= 1, "codebook: l_vq must be >= 1");
  const auto expected = codebook_size(l_vq, q_vq);
  require(codewords.size() == expected * static_cast<std::uint64_t>(l_vq),
          "codebook: expected " + std::to_string(expected) + " codewords");
  for (float c : codewords) require(std::isfinite(c), "codebook: non-finite codeword entry");
  require(usage_counts.empty() || usage_counts.size() == expected, "codebook: usage count length mismatch");
}

void LloydStop::validate() const {
  require(max_iterations >= 1, "lloyd stop: max_iterations must be positive");
  require(rel_improvement_eps > 0.0, "lloyd stop: rel_improvement_eps must be positive");
}

double squared_distance(std::span<const double> v, std::span<const float> c) {
  double d = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double e = v[j] - static_cast<double>(c[j]);
    d += e * e;
  }
  return d;
}

std::size_t nearest_codeword(const Codebook& codebook, std::span<const double> vector, SearchStats* stats) {
  require(vector.size() == static_cast<std::size_t>(codebook.l_vq),
          "nearest_codeword: vector length " + std::to_string(vector.size()) + " != l_vq " +
              std::to_string(codebook.l_vq));
  const std::size_t k = codebook.size();
  require(k > 0, "nearest_codeword: empty codebook");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    const double d = squared_distance(vector, codebook[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (stats) {
    stats->distance_evaluations += k;
    ++stats->queries;
  }
  return best;
}

// ---------------------------------------------------------------------------
// kd-tree

struct NearestSearch::Tree {
  struct Node {
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t dim = 0;
    double split = 0.0;
  };

  int dim = 1;
  bool flat = false;
  std::vector<double> points;
  std::vector<std::uint32_t> ids;
  std::vector<Node> nodes;

  static constexpr std::uint32_t kLeafSize = 8;

  std::int32_t build(std::vector<std::uint32_t>& order, const std::vector<double>& src, std::uint32_t begin,
                     std::uint32_t end) {
    const auto self = static_cast<std::int32_t>(nodes.size());
    nodes.push_back({-1, -1, begin, end, 0, 0.0});
    if (end - begin <= kLeafSize) return self;
    int best_dim = 0;
    double best_spread = -1.0;
    for (int j = 0; j < dim; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::uint32_t i = begin; i < end; ++i) {
        const double x = src[static_cast<std::size_t>(order[i]) * dim + j];
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_dim = j;
      }
    }
    if (best_spread <= 0.0) return self;
    const std::uint32_t mid = begin + (end - begin) / 2;
    auto key = [&](std::uint32_t id) { return src[static_cast<std::size_t>(id) * dim + best_dim]; };
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
    const double split = key(order[mid]);
    const std::int32_t l = build(order, src, begin, mid);
    const std::int32_t r = build(order, src, mid, end);
    nodes[static_cast<std::size_t>(self)].left = l;
    nodes[static_cast<std::size_t>(self)].right = r;
    nodes[static_cast<std::size_t>(self)].dim = best_dim;
    nodes[static_cast<std::size_t>(self)].split = split;
    return self;
  }

  struct Query {
    const double* q;
    double best_d;
    std::uint32_t best_id;
    std::array<double, kMaxTreeDim> off;
  };

  void scan(Query& s, std::uint32_t begin, std::uint32_t end) const {
    for (std::uint32_t i = begin; i < end; ++i) {
      const double* p = points.data() + static_cast<std::size_t>(i) * dim;
      double d = 0.0;
      for (int j = 0; j < dim; ++j) {
        const double e = s.q[j] - p[j];
        d += e * e;
      }
      if (d < s.best_d || (d == s.best_d && ids[i] < s.best_id)) {
        s.best_d = d;
        s.best_id = ids[i];
      }
    }
  }

  void search(Query& s, std::int32_t node, double rd) const {
    const Node& n = nodes[static_cast<std::size_t>(node)];
    if (n.left < 0) {
      scan(s, n.begin, n.end);
      return;
    }
    const double diff = s.q[n.dim] - n.split;
    const std::int32_t near = diff < 0.0 ? n.left : n.right;
    const std::int32_t far = diff < 0.0 ? n.right : n.left;
    search(s, near, rd);
    const double old = s.off[static_cast<std::size_t>(n.dim)];
    const double far_rd = rd - old * old + diff * diff;
    if (far_rd <= s.best_d) {
      s.off[static_cast<std::size_t>(n.dim)] = diff;
      search(s, far, far_rd);
      s.off[static_cast<std::size_t>(n.dim)] = old;
    }
  }
};

NearestSearch::NearestSearch(const Codebook& codebook) : tree_(std::make_unique<Tree>()) {
  const std::size_t k = codebook.size();
  require(k > 0, "NearestSearch: empty codebook");
  require(k < std::numeric_limits<std::uint32_t>::max(), "NearestSearch: codebook too large");
  auto& t = *tree_;
  t.dim = codebook.l_vq;
  std::vector<double> src(codebook.codewords.begin(), codebook.codewords.end());
  std::vector<std::uint32_t> order(k);
  std::iota(order.begin(), order.end(), 0U);
  if (t.dim > kMaxTreeDim) {
    t.flat = true;
  } else {
    t.build(order, src, 0, static_cast<std::uint32_t>(k));
  }
  t.points.resize(src.size());
  t.ids = order;
  for (std::size_t i = 0; i < k; ++i) {
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(order[i] * t.dim), t.dim,
                t.points.begin() + static_cast<std::ptrdiff_t>(i * t.dim));
  }
}

NearestSearch::~NearestSearch() = default;
NearestSearch::NearestSearch(NearestSearch&&) noexcept = default;
NearestSearch& NearestSearch::operator=(NearestSearch&&) noexcept = default;

std::size_t NearestSearch::nearest(std::span<const double> vector, double* distance2) const {
  const auto& t = *tree_;
  require(vector.size() == static_cast<std::size_t>(t.dim), "NearestSearch: dimension mismatch");
  Tree::Query q{vector.data(), std::numeric_limits<double>::infinity(),
                std::numeric_limits<std::uint32_t>::max(), {}};
  if (t.flat) {
    t.scan(q, 0, static_cast<std::uint32_t>(t.ids.size()));
  } else {
    t.search(q, 0, 0.0);
  }
  if (distance2) *distance2 = q.best_d;
  return q.best_id;
}

// ---------------------------------------------------------------------------

std::vector<std::uint32_t> quantize_batch(const Codebook& codebook, const VectorBatch& batch, SearchMode mode,
                                          SearchStats* stats, unsigned threads) {
  require(batch.l_vq == codebook.l_vq, "quantize_batch: batch l_vq " + std::to_string(batch.l_vq) +
                                           " != codebook l_vq " + std::to_string(codebook.l_vq));
  const std::size_t n = batch.size();
  std::vector<std::uint32_t> out(n);
  if (n == 0) return out;
  if (mode == SearchMode::exhaustive) {
    SearchStats local;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = static_cast<std::uint32_t>(nearest_codeword(codebook, batch[i], &local));
    }
    if (stats) {
      stats->distance_evaluations += local.distance_evaluations;
      stats->queries += local.queries;
    }
    return out;
  }
  const NearestSearch search(codebook);
  parallel_chunks(chunk_count(n), threads, [&](std::size_t c) {
    const std::size_t last = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < last; ++i) out[i] = static_cast<std::uint32_t>(search.nearest(batch[i]));
  });
  return out;
}

VectorBatch dequantize_batch(const Codebook& codebook, std::span<const std::uint32_t> indices) {
  VectorBatch out;
  out.l_vq = codebook.l_vq;
  out.values.reserve(indices.size() * static_cast<std::size_t>(codebook.l_vq));
  const std::size_t k = codebook.size();
  for (std::uint32_t idx : indices) {
    if (idx >= k) throw FormatError("dequantize: index " + std::to_string(idx) + " out of range");
    for (float c : codebook[idx]) out.values.push_back(c);
  }
  out.original_count = out.values.size() / 2;
  return out;
}

double vq_gain(int q0, int q_vq) {
  require(q0 > 0 && q_vq > 0, "vq_gain: bit widths must be positive");
  return static_cast<double>(q0) / static_cast<double>(q_vq);
}

double batch_rms(const VectorBatch& batch) {
  if (batch.empty()) return 0.0;
  double acc = 0.0;
  for (double x : batch.values) acc += x * x;
  return std::sqrt(acc / static_cast<double>(batch.size()));
}

double codebook_rms(const Codebook& codebook) {
  if (codebook.size() == 0) return 0.0;
  double acc = 0.0;
  for (float x : codebook.codewords) acc += static_cast<double>(x) * x;
  return std::sqrt(acc / static_cast<double>(codebook.size()));
}

// ---------------------------------------------------------------------------
// Lloyd descent

namespace {

struct Assignment {
  std::vector<std::uint32_t> index;
  std::vector<double> error;
  double distortion = 0.0;
};

void assign(const Codebook& codebook, const VectorBatch& batch, unsigned threads, Assignment& out) {
  const std::size_t n = batch.size();
  out.index.resize(n);
  out.error.resize(n);
  const NearestSearch search(codebook);
  parallel_chunks(chunk_count(n), threads, [&](std::size_t c) {
    const std::size_t last = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < last; ++i) {
      double d = 0.0;
      out.index[i] = static_cast<std::uint32_t>(search.nearest(batch[i], &d));
      out.error[i] = d;
    }
  });
  double total = 0.0;
  for (double e : out.error) total += e;  // fixed order keeps results thread-count independent
  out.distortion = total / static_cast<double>(n);
}

// Replaces codewords by their cell centroids; empty cells are re-seeded at a
// small offset from the centroid of the cell with the largest squared error.
void recenter(Codebook& codebook, const VectorBatch& batch, const Assignment& a, double rms, Rng& rng) {
  const std::size_t k = codebook.size();
  const auto l = static_cast<std::size_t>(codebook.l_vq);
  std::vector<double> sums(k * l, 0.0);
  std::vector<std::uint64_t> counts(k, 0);
  std::vector<double> sse(k, 0.0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const std::size_t c = a.index[i];
    ++counts[c];
    sse[c] += a.error[i];
    const auto v = batch[i];
    for (std::size_t j = 0; j < l; ++j) sums[c * l + j] += v[j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    const double inv = 1.0 / static_cast<double>(counts[c]);
    for (std::size_t j = 0; j < l; ++j) codebook.codewords[c * l + j] = static_cast<float>(sums[c * l + j] * inv);
  }
  using Entry = std::pair<double, std::size_t>;
  auto cmp = [](const Entry& x, const Entry& y) { return x.first < y.first || (x.first == y.first && x.second > y.second); };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> donors(cmp);
  bool any_empty = false;
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      any_empty = true;
    } else {
      donors.emplace(sse[c], c);
    }
  }
  if (!any_empty || donors.empty()) return;
  const double step = 1e-3 * (rms > 0.0 ? rms / std::sqrt(static_cast<double>(l)) : 1.0);
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    auto [err, donor] = donors.top();
    donors.pop();
    for (std::size_t j = 0; j < l; ++j) {
      const double sign = (rng.bits() & 1U) ? 1.0 : -1.0;
      codebook.codewords[c * l + j] =
          static_cast<float>(static_cast<double>(codebook.codewords[donor * l + j]) + sign * step);
    }
    donors.emplace(err / 2.0, donor);
  }
}

struct DescentResult {
  Codebook codebook;
  double distortion = 0.0;
  int iterations = 0;
};

DescentResult descend(Codebook codebook, const VectorBatch& batch, const LloydStop& stop, std::uint64_t repair_seed,
                      unsigned threads, TrainingTrace::Trial* trial) {
  Rng rng(repair_seed);
  const double rms = batch_rms(batch);
  Assignment a;
  assign(codebook, batch, threads, a);
  if (trial) trial->distortions.push_back(a.distortion);
  int iterations = 0;
  while (iterations < stop.max_iterations && a.distortion > 0.0) {
    const double before = a.distortion;
    recenter(codebook, batch, a, rms, rng);
    assign(codebook, batch, threads, a);
    ++iterations;
    if (trial) trial->distortions.push_back(a.distortion);
    if ((before - a.distortion) / before < stop.rel_improvement_eps) break;
  }
  codebook.usage_counts.assign(codebook.size(), 0);
  for (std::uint32_t idx : a.index) ++codebook.usage_counts[idx];
  return {std::move(codebook), a.distortion, iterations};
}

void check_training_input(const VectorBatch& batch, int q_vq, int trials, const LloydStop& stop) {
  require(batch.l_vq >= 1, "training: l_vq must be >= 1");
  require(q_vq >= 1, "training: q_vq must be >= 1");
  require(trials >= 1, "training: trials must be >= 1");
  stop.validate();
  require(static_cast<long>(batch.l_vq) * q_vq <= kMaxCodebookBits,
          "training: codebook of 2^" + std::to_string(batch.l_vq * q_vq) + " codewords is too large");
  const auto k = codebook_size(batch.l_vq, q_vq);
  require(batch.size() >= k, "training: " + std::to_string(batch.size()) + " training vectors for " +
                                 std::to_string(k) + " codewords");
}

}  // namespace

namespace {

// Log of p^(-2/(l+2)) under a diagonal Gaussian fitted to the batch, up to a constant.
std::vector<double> density_log_weights(const VectorBatch& batch) {
  const auto l = static_cast<std::size_t>(batch.l_vq);
  const std::size_t n = batch.size();
  std::vector<double> mean(l, 0.0), var(l, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) mean[j] += batch[i][j];
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) var[j] += (batch[i][j] - mean[j]) * (batch[i][j] - mean[j]);
  for (auto& v : var) v = v > 0.0 ? v / static_cast<double>(n) : 1.0;
  const double exponent = 2.0 / static_cast<double>(l + 2);
  std::vector<double> lw(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < l; ++j) r2 += (batch[i][j] - mean[j]) * (batch[i][j] - mean[j]) / var[j];
    lw[i] = exponent * 0.5 * r2;
  }
  return lw;
}

}  // namespace

Codebook initial_codebook(const VectorBatch& batch, int q_vq, std::uint64_t seed, CodebookInit init) {
  const auto k = static_cast<std::size_t>(codebook_size(batch.l_vq, q_vq));
  const std::size_t n = batch.size();
  require(n >= k, "initial_codebook: fewer training vectors than codewords");
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0U);
  Rng rng(seed);
  if (init == CodebookInit::density) {
    // Weighted sampling without replacement: keep the k largest log(u) / w.
    const auto lw = density_log_weights(batch);
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      key[i] = std::log(u) * std::exp(-lw[i]);
    }
    auto larger = [&](std::uint32_t a, std::uint32_t b) { return key[a] > key[b] || (key[a] == key[b] && a < b); };
    std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(), larger);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
  }
  Codebook cb;
  cb.l_vq = batch.l_vq;
  cb.q_vq = q_vq;
  cb.codewords.reserve(k * static_cast<std::size_t>(batch.l_vq));
  for (auto id : pool)
    for (double x : batch[id]) cb.codewords.push_back(static_cast<float>(x));
  return cb;
}

LloydStep lloyd_iterate(const VectorBatch& batch, const Codebook& codebook, std::uint64_t repair_seed) {
  require(!batch.empty(), "lloyd_iterate: empty batch");
  require(batch.l_vq == codebook.l_vq, "lloyd_iterate: dimension mismatch");
  codebook.validate();
  Assignment a;
  assign(codebook, batch, 0, a);
  LloydStep step{codebook, 0.0};
  Rng rng(repair_seed);
  recenter(step.codebook, batch, a, batch_rms(batch), rng);
  assign(step.codebook, batch, 0, a);
  step.distortion = a.distortion;
  step.codebook.usage_counts.assign(step.codebook.size(), 0);
  for (std::uint32_t idx : a.index) ++step.codebook.usage_counts[idx];
  return step;
}

double mean_distortion(const Codebook& codebook, const VectorBatch& batch, unsigned threads) {
  require(!batch.empty(), "mean_distortion: empty batch");
  require(batch.l_vq == codebook.l_vq, "mean_distortion: dimension mismatch");
  Assignment a;
  assign(codebook, batch, threads, a);
  return a.distortion;
}

Codebook train_classical(const VectorBatch& batch, int q_vq, int trials, const LloydStop& stop, std::uint64_t seed,
                         TrainingTrace* trace, unsigned threads, CodebookInit init) {
  check_training_input(batch, q_vq, trials, stop);
  DescentResult best;
  bool have = false;
  for (int t = 0; t < trials; ++t) {
    const auto ts = static_cast<std::uint64_t>(t);
    TrainingTrace::Trial* rec = nullptr;
    if (trace) rec = &trace->trials.emplace_back();
    auto r = descend(initial_codebook(batch, q_vq, mix_seed(seed, ts), init), batch, stop, mix_seed(seed, 1000 + ts),
                     threads, rec);
    if (!have || r.distortion < best.distortion) {
      best = std::move(r);
      have = true;
    }
  }
  best.codebook.meta = {TrainerKind::classical, trials, best.iterations, best.distortion, seed};
  return std::move(best.codebook);
}

Codebook train_modified(const VectorBatch& batch, int q_vq, int trials, const LloydStop& stop, std::uint64_t seed,
                        TrainingTrace* trace, unsigned threads, CodebookInit init) {
  check_training_input(batch, q_vq, trials, stop);
  const double data_rms = batch_rms(batch);
  Codebook current = initial_codebook(batch, q_vq, mix_seed(seed, 0), init);
  DescentResult best;
  bool have = false;
  for (int t = 0; t < trials; ++t) {
    const auto ts = static_cast<std::uint64_t>(t);
    double factor = 1.0;
    if (t > 0) {
      const double cb_rms = codebook_rms(current);
      factor = cb_rms > 0.0 ? data_rms / cb_rms : 1.0;
      for (auto& c : current.codewords) c = static_cast<float>(c * factor);
    }
    TrainingTrace::Trial* rec = nullptr;
    if (trace) {
      rec = &trace->trials.emplace_back();
      rec->rescale = factor;
    }
    auto r = descend(std::move(current), batch, stop, mix_seed(seed, 1000 + ts), threads, rec);
    current = r.codebook;
    if (!have || r.distortion < best.distortion) {
      best = std::move(r);
      have = true;
    }
  }
  best.codebook.meta = {TrainerKind::modified, trials, best.iterations, best.distortion, seed};
  return std::move(best.codebook);
}

Codebook train_codebook(TrainerKind kind, const VectorBatch& batch, int q_vq, int trials, const LloydStop& stop,
                        std::uint64_t seed, TrainingTrace* trace, unsigned threads, CodebookInit init) {
  return kind == TrainerKind::classical ? train_classical(batch, q_vq, trials, stop, seed, trace, threads, init)
                                        : train_modified(batch, q_vq, trials, stop, seed, trace, threads, init);
}

std::string_view to_string(TrainerKind kind) { return kind == TrainerKind::classical ? "classical" : "modified"; }

TrainerKind parse_trainer(std::string_view s) {
  if (s == "classical") return TrainerKind::classical;
  if (s == "modified") return TrainerKind::modified;
  throw ContractError("unknown trainer: " + std::string(s));
}

std::string_view to_string(CodebookInit init) { return init == CodebookInit::density ? "density" : "uniform"; }

CodebookInit parse_init(std::string_view s) {
  if (s == "uniform") return CodebookInit::uniform;
  if (s == "density") return CodebookInit::density;
  throw ContractError("unknown codebook init: " + std::string(s));
}

}  // namespace fvq
