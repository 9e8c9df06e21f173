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

#include "fvq/msvq.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "fvq/error.hpp"
#include "fvq/parallel.hpp"
#include "fvq/random.hpp"
#include "fvq/vq_io.hpp"

namespace fvq {
namespace {

constexpr std::string_view kMagic{"VQMS\0\0\0\0", 8};
constexpr std::uint8_t kVersion = 1;

// Codebook for a cell holding fewer members than codewords: its distinct
// members, then perturbed copies of them until the size is reached.
Codebook sparse_cell_codebook(const VectorBatch& members, std::span<const float> fallback, int q2,
                              double step, std::uint64_t seed) {
  const int l = members.l_vq;
  const auto k = static_cast<std::size_t>(codebook_size(l, q2));
  std::vector<std::vector<float>> distinct;
  {
    std::map<std::vector<float>, int> seen;
    for (std::size_t i = 0; i < members.size() && distinct.size() < k; ++i) {
      std::vector<float> v(members[i].begin(), members[i].end());
      if (seen.emplace(v, 0).second) distinct.push_back(std::move(v));
    }
  }
  if (distinct.empty()) distinct.emplace_back(fallback.begin(), fallback.end());
  Codebook cb;
  cb.l_vq = l;
  cb.q_vq = q2;
  cb.codewords.reserve(k * static_cast<std::size_t>(l));
  for (const auto& v : distinct) cb.codewords.insert(cb.codewords.end(), v.begin(), v.end());
  Rng rng(seed);
  for (std::size_t j = distinct.size(); j < k; ++j) {
    const auto& src = distinct[j % distinct.size()];
    for (float x : src) {
      const double sign = (rng.bits() & 1U) ? 1.0 : -1.0;
      cb.codewords.push_back(static_cast<float>(x + sign * step));
    }
  }
  cb.usage_counts.assign(k, 0);
  for (std::size_t i = 0; i < members.size(); ++i) ++cb.usage_counts[nearest_codeword(cb, members[i])];
  return cb;
}

}  // namespace

std::uint64_t MsvqCodebook::stored_codewords() const {
  std::uint64_t total = stage1.size();
  for (const auto& c : stage2) total += c.size();
  return total;
}

void MsvqCodebook::validate() const {
  require(l >= 1 && q1 >= 1 && q2 >= 0, "msvq: invalid geometry");
  stage1.validate();
  require(stage1.l_vq == l && stage1.q_vq == q1, "msvq: stage-1 geometry mismatch");
  require(stage2.size() == stage1.size(), "msvq: stage-2 codebook count must equal stage-1 size");
  for (const auto& c : stage2) {
    c.validate();
    require(c.l_vq == l && c.q_vq == q2, "msvq: stage-2 geometry mismatch");
  }
}

Complexity msvq_complexity(int q1, int q2, int l) {
  require(q1 >= 0 && q2 >= 0 && l >= 1, "msvq_complexity: resolutions must be non-negative");
  return {codebook_size(l, q1) + codebook_size(l, q2), codebook_size(l, q1) + codebook_size(l, q1 + q2)};
}

MsvqCodebook train_msvq(const VectorBatch& batch, int q1, int q2, TrainerKind trainer, int trials,
                        const LloydStop& stop, std::uint64_t seed, MsvqTrainReport* report, unsigned threads,
                        CodebookInit init) {
  require(q1 >= 1 && q2 >= 0, "train_msvq: need q1 >= 1 and q2 >= 0");
  require(static_cast<long>(batch.l_vq) * (q1 + q2) <= 31, "train_msvq: joint index exceeds 31 bits");
  MsvqCodebook cb;
  cb.l = batch.l_vq;
  cb.q1 = q1;
  cb.q2 = q2;
  cb.stage1 = train_codebook(trainer, batch, q1, trials, stop, mix_seed(seed, 0), nullptr, threads, init);
  const auto cells = quantize_batch(cb.stage1, batch, SearchMode::accelerated, nullptr, threads);
  const std::size_t k1 = cb.stage1.size();
  const auto k2 = codebook_size(cb.l, q2);
  std::vector<VectorBatch> members(k1);
  for (auto& m : members) m.l_vq = cb.l;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto v = batch[i];
    members[cells[i]].values.insert(members[cells[i]].values.end(), v.begin(), v.end());
  }
  const double step = 1e-3 * batch_rms(batch) / std::sqrt(static_cast<double>(cb.l));
  cb.stage2.resize(k1);
  std::vector<int> sparse(k1, 0);
  parallel_chunks(k1, threads, [&](std::size_t c) {
    const auto cell_seed = mix_seed(seed, 1 + c);
    if (q2 == 0 && !members[c].empty()) {
      Codebook one;
      one.l_vq = cb.l;
      one.q_vq = 0;
      std::vector<double> mean(static_cast<std::size_t>(cb.l), 0.0);
      for (std::size_t i = 0; i < members[c].size(); ++i) {
        for (int j = 0; j < cb.l; ++j) mean[static_cast<std::size_t>(j)] += members[c][i][static_cast<std::size_t>(j)];
      }
      for (double m : mean) one.codewords.push_back(static_cast<float>(m / static_cast<double>(members[c].size())));
      one.usage_counts = {members[c].size()};
      cb.stage2[c] = std::move(one);
    } else if (members[c].size() < k2) {
      sparse[c] = 1;
      cb.stage2[c] = sparse_cell_codebook(members[c], cb.stage1[c], q2, step, cell_seed);
    } else {
      cb.stage2[c] = train_codebook(trainer, members[c], q2, trials, stop, cell_seed, nullptr, 1, init);
    }
  });
  if (report) report->underpopulated_cells = static_cast<int>(std::count(sparse.begin(), sparse.end(), 1));
  return cb;
}

MsvqIndex quantize_msvq(const MsvqCodebook& cb, std::span<const double> vector, SearchStats* stats) {
  const auto i1 = nearest_codeword(cb.stage1, vector, stats);
  const auto i2 = nearest_codeword(cb.stage2[i1], vector, stats);
  if (stats) --stats->queries;  // one query spans both stages
  return {static_cast<std::uint32_t>(i1), static_cast<std::uint32_t>(i2)};
}

std::span<const float> dequantize_msvq(const MsvqCodebook& cb, MsvqIndex index) {
  if (index.i1 >= cb.stage2.size() || index.i2 >= cb.stage2[index.i1].size()) {
    throw FormatError("msvq: index out of range");
  }
  return cb.stage2[index.i1][index.i2];
}

std::vector<MsvqIndex> quantize_msvq_batch(const MsvqCodebook& cb, const VectorBatch& batch, SearchMode mode,
                                           SearchStats* stats, unsigned threads) {
  require(batch.l_vq == cb.l, "quantize_msvq: dimension mismatch");
  std::vector<MsvqIndex> out(batch.size());
  if (mode == SearchMode::exhaustive) {
    for (std::size_t i = 0; i < batch.size(); ++i) out[i] = quantize_msvq(cb, batch[i], stats);
    return out;
  }
  const auto first = quantize_batch(cb.stage1, batch, SearchMode::accelerated, nullptr, threads);
  std::vector<std::unique_ptr<NearestSearch>> trees(cb.stage2.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto& t = trees[first[i]];
    if (!t) t = std::make_unique<NearestSearch>(cb.stage2[first[i]]);
    out[i] = {first[i], static_cast<std::uint32_t>(t->nearest(batch[i]))};
  }
  return out;
}

VectorBatch dequantize_msvq_batch(const MsvqCodebook& cb, std::span<const MsvqIndex> indices) {
  VectorBatch out;
  out.l_vq = cb.l;
  out.values.reserve(indices.size() * static_cast<std::size_t>(cb.l));
  for (const auto& idx : indices) {
    const auto c = dequantize_msvq(cb, idx);
    out.values.insert(out.values.end(), c.begin(), c.end());
  }
  return out;
}

std::uint32_t msvq_joint(const MsvqCodebook& cb, MsvqIndex index) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(index.i1) << (cb.q2 * cb.l)) | index.i2);
}

MsvqIndex msvq_split(const MsvqCodebook& cb, std::uint32_t joint) {
  const unsigned shift = static_cast<unsigned>(cb.q2 * cb.l);
  return {static_cast<std::uint32_t>(joint >> shift),
          static_cast<std::uint32_t>(joint & ((std::uint64_t{1} << shift) - 1))};
}

MsvqModel make_msvq_model(MsvqCodebook codebook) {
  codebook.validate();
  std::vector<std::uint64_t> counts;
  counts.reserve(codebook.stage1.size() * codebook.stage2.front().size());
  for (const auto& c : codebook.stage2) {
    for (std::size_t j = 0; j < c.size(); ++j) counts.push_back(c.usage_counts.empty() ? 0 : c.usage_counts[j]);
  }
  MsvqModel m;
  m.huffman = build_huffman(pmf_from_counts(counts));
  m.codebook = std::move(codebook);
  return m;
}

std::vector<std::uint8_t> encode_msvq_model(const MsvqModel& model) {
  const auto& cb = model.codebook;
  cb.validate();
  ByteWriter out;
  out.tag(kMagic);
  out.u8(kVersion);
  out.u8(static_cast<std::uint8_t>(cb.q1));
  out.u8(static_cast<std::uint8_t>(cb.q2));
  out.u8(static_cast<std::uint8_t>(cb.l));
  write_vqcb(out, cb.stage1, nullptr);
  for (const auto& c : cb.stage2) write_vqcb(out, c, nullptr);
  out.u8(1);
  write_huffman(out, model.huffman);
  return out.take();
}

MsvqModel decode_msvq_model(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect_tag(kMagic, "VQMS codebook");
  if (in.u8() != kVersion) throw FormatError("VQMS: unsupported version");
  MsvqModel m;
  auto& cb = m.codebook;
  cb.q1 = in.u8();
  cb.q2 = in.u8();
  cb.l = in.u8();
  if (cb.l < 1 || cb.q1 < 1 || static_cast<long>(cb.l) * (cb.q1 + cb.q2) > 31) {
    throw FormatError("VQMS: invalid geometry");
  }
  cb.stage1 = read_vqcb(in);
  const std::size_t k1 = cb.stage1.size();
  cb.stage2.reserve(k1);
  for (std::size_t c = 0; c < k1; ++c) cb.stage2.push_back(read_vqcb(in));
  try {
    cb.validate();
  } catch (const ContractError& e) {
    throw FormatError(std::string("VQMS: ") + e.what());
  }
  const auto flag = in.u8();
  if (flag == 1) {
    m.huffman = read_huffman(in);
    if (m.huffman.alphabet_size != codebook_size(cb.l, cb.q1 + cb.q2)) {
      throw FormatError("VQMS: Huffman alphabet does not match codebook");
    }
  } else if (flag == 0) {
    m = make_msvq_model(std::move(m.codebook));
  } else {
    throw FormatError("VQMS: bad Huffman flag");
  }
  if (in.remaining() != 0) throw FormatError("VQMS: trailing bytes");
  return m;
}

}  // namespace fvq
