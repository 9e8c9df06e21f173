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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "fvq/vectorizer.hpp"

namespace fvq {

enum class TrainerKind : std::uint8_t { classical = 0, modified = 1 };

// How initial codewords are drawn from the training vectors (always distinct
// vectors). `uniform` picks every vector with equal probability, so the
// starting point density follows the data density p. `density` weights each
// vector by p^(-2/(l+2)) under a diagonal Gaussian fit, so the start is already
// close to the p^(l/(l+2)) density of a high-resolution optimum. Lloyd moves
// codewords only locally, and with large codebooks it would otherwise stop
// long before the tails thin out.
enum class CodebookInit : std::uint8_t { uniform = 0, density = 1 };

struct TrainingMeta {
  TrainerKind algorithm = TrainerKind::classical;
  int trials = 0;
  int iterations = 0;  // Lloyd steps in the trial that produced the codebook
  double final_distortion = 0.0;
  std::uint64_t seed = 0;
};

// 2^(l_vq * q_vq) codewords of length l_vq, row-major float storage.
struct Codebook {
  int l_vq = 1;
  int q_vq = 1;
  std::vector<float> codewords;
  std::vector<std::uint64_t> usage_counts;  // per codeword, from training
  TrainingMeta meta;

  std::size_t size() const {
    return l_vq > 0 ? codewords.size() / static_cast<std::size_t>(l_vq) : 0;
  }
  std::span<const float> operator[](std::size_t k) const {
    return {codewords.data() + k * static_cast<std::size_t>(l_vq), static_cast<std::size_t>(l_vq)};
  }
  std::span<float> operator[](std::size_t k) {
    return {codewords.data() + k * static_cast<std::size_t>(l_vq), static_cast<std::size_t>(l_vq)};
  }
  // Checks geometry, codeword count, finiteness and usage-count length.
  void validate() const;
};

// 2^(l * q). Throws ContractError when l * q > 62.
std::uint64_t codebook_size(int l_vq, int q_vq);

// Largest l * q the trainers will allocate.
inline constexpr int kMaxCodebookBits = 24;

struct LloydStop {
  int max_iterations = 200;
  double rel_improvement_eps = 1e-4;
  void validate() const;
};

// Distance-evaluation counter for complexity measurements.
struct SearchStats {
  std::uint64_t distance_evaluations = 0;
  std::uint64_t queries = 0;
  double per_query() const {
    return queries ? static_cast<double>(distance_evaluations) / static_cast<double>(queries) : 0.0;
  }
};

enum class SearchMode {
  exhaustive,   // scans every codeword; the reference search whose cost is counted
  accelerated,  // exact kd-tree search returning the same index
};

double squared_distance(std::span<const double> v, std::span<const float> c);

// argmin_k |v - c_k|^2, lowest index on ties. Exhaustive scan.
std::size_t nearest_codeword(const Codebook& codebook, std::span<const double> vector,
                             SearchStats* stats = nullptr);

// Exact nearest-codeword search over a fixed codebook using a kd-tree.
// Returns the same index as nearest_codeword, including tie-breaking.
class NearestSearch {
 public:
  explicit NearestSearch(const Codebook& codebook);
  ~NearestSearch();
  NearestSearch(NearestSearch&&) noexcept;
  NearestSearch& operator=(NearestSearch&&) noexcept;

  std::size_t nearest(std::span<const double> vector, double* distance2 = nullptr) const;

 private:
  struct Tree;
  std::unique_ptr<Tree> tree_;
};

std::vector<std::uint32_t> quantize_batch(const Codebook& codebook, const VectorBatch& batch,
                                          SearchMode mode = SearchMode::accelerated,
                                          SearchStats* stats = nullptr, unsigned threads = 0);

// Codeword lookup. The result carries only l_vq and values.
VectorBatch dequantize_batch(const Codebook& codebook, std::span<const std::uint32_t> indices);

// Mean over vectors of the squared distance to the nearest codeword.
double mean_distortion(const Codebook& codebook, const VectorBatch& batch, unsigned threads = 0);

// Q0 / Q_VQ.
double vq_gain(int q0, int q_vq);

struct LloydStep {
  Codebook codebook;
  double distortion = 0.0;  // of the returned codebook
};

// One partition-then-recenter step. Empty cells are re-seeded next to the
// centroid of the cell with the largest squared error.
LloydStep lloyd_iterate(const VectorBatch& batch, const Codebook& codebook, std::uint64_t repair_seed = 0);

struct TrainingTrace {
  struct Trial {
    double rescale = 1.0;  // factor applied to the initial codebook (modified trials > 1)
    std::vector<double> distortions;  // after initialisation and after every Lloyd step
  };
  std::vector<Trial> trials;
};

// Independent Lloyd descents from random distinct training vectors; keeps
// the lowest-distortion result.
Codebook train_classical(const VectorBatch& batch, int q_vq, int trials, const LloydStop& stop,
                         std::uint64_t seed, TrainingTrace* trace = nullptr, unsigned threads = 0,
                         CodebookInit init = CodebookInit::uniform);

// Serial Lloyd descents: each trial starts from the previous trial's output
// scaled so its RMS matches the training data's RMS. Keeps the best seen.
Codebook train_modified(const VectorBatch& batch, int q_vq, int trials, const LloydStop& stop,
                        std::uint64_t seed, TrainingTrace* trace = nullptr, unsigned threads = 0,
                        CodebookInit init = CodebookInit::uniform);

Codebook train_codebook(TrainerKind kind, const VectorBatch& batch, int q_vq, int trials,
                        const LloydStop& stop, std::uint64_t seed, TrainingTrace* trace = nullptr,
                        unsigned threads = 0, CodebookInit init = CodebookInit::uniform);

// Copies of `source` vectors drawn without replacement, used as initial codewords.
Codebook initial_codebook(const VectorBatch& batch, int q_vq, std::uint64_t seed,
                          CodebookInit init = CodebookInit::uniform);

double batch_rms(const VectorBatch& batch);     // sqrt(mean |x|^2) over vectors
double codebook_rms(const Codebook& codebook);  // sqrt(mean |c|^2) over codewords

std::string_view to_string(TrainerKind kind);
TrainerKind parse_trainer(std::string_view s);
std::string_view to_string(CodebookInit init);
CodebookInit parse_init(std::string_view s);

}  // namespace fvq
