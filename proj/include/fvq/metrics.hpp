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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fvq/iq_stream.hpp"
#include "fvq/pipeline.hpp"

namespace fvq {

// 100 sqrt(sum |in - out|^2 / sum |in|^2).
double evm_td(const IQStream& input, const IQStream& output);

// The same ratio over FFT bins `bins` of every symbol, after dropping each
// symbol's first cp_length samples. Both streams must hold whole symbols.
double evm_fd(const IQStream& input, const IQStream& output, std::span<const int> bins, int fft_size,
              int cp_length = 0);

// Bins B of a profile.
std::vector<int> utilized_band(const CompressionProfile& profile);

struct MismatchTable {
  std::vector<std::string> rows;     // training labels
  std::vector<std::string> columns;  // evaluation corpus labels
  std::vector<std::vector<double>> evm;

  // evm[r][c] / reference(c) - 1, where reference(c) is the row whose label
  // equals the column label, or the column minimum when no row matches.
  double relative(std::size_t r, std::size_t c) const;
  // Numeric block followed by "value (rel%)" text cells.
  std::string to_csv() const;
};

struct LabeledModel {
  std::string label;
  QuantizerModel model;
};
struct LabeledStream {
  std::string label;
  IQStream stream;
};

// Frequency-domain EVM of a full compress/decompress run per cell.
MismatchTable mismatch_matrix(std::span<const LabeledModel> codebooks, std::span<const LabeledStream> corpora,
                              const CompressionProfile& profile, unsigned threads = 0);

// Instrumented exhaustive search over up to max_vectors vectors of a
// front-end stream. searching_operations is the per-vector visit count,
// codebook_size the stored codeword count.
Complexity complexity_counters(const CompressionProfile& profile, const QuantizerModel& model,
                               const IQStream& prepared, std::size_t max_vectors = 4096);
// 2^(l q) for VQ, msvq_complexity or upmgq_complexity otherwise.
Complexity expected_complexity(const CompressionProfile& profile);

struct CorpusDescriptor {
  std::string link;
  std::string modulation;
  std::string channel;
  double snr_db = 0.0;
};

struct EvalReport {
  static constexpr int kSchemaVersion = 1;
  double evm_td_pct = 0.0;
  double evm_fd_pct = 0.0;
  double cr_formula = 0.0;
  double cr_formula_nominal = 0.0;
  double cr_measured = 0.0;
  std::uint64_t so_measured = 0;
  std::uint64_t cs_measured = 0;
  std::uint64_t profile_digest = 0;
  CorpusDescriptor corpus;
  StageStats stages;
  Json profile;
};

EvalReport evaluate(const IQStream& stream, const CompressionProfile& profile, const QuantizerModel& model,
                    const CorpusDescriptor& corpus, unsigned threads = 0);

Json to_json(const EvalReport& r);
std::string csv_header();
std::string csv_row(const EvalReport& r);

}  // namespace fvq
