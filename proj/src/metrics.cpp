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

#include "fvq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "fvq/error.hpp"
#include "fvq/fft.hpp"
#include "fvq/parallel.hpp"
#include "fvq/waveform.hpp"

namespace fvq {

double evm_td(const IQStream& input, const IQStream& output) {
  require(input.size() == output.size(), "evm_td: length mismatch (" + std::to_string(input.size()) + " vs " +
                                             std::to_string(output.size()) + ")");
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    err += std::norm(input.samples[i] - output.samples[i]);
    ref += std::norm(input.samples[i]);
  }
  require(ref > 0.0, "evm_td: zero-energy input");
  return 100.0 * std::sqrt(err / ref);
}

double evm_fd(const IQStream& input, const IQStream& output, std::span<const int> bins, int fft_size, int cp_length) {
  require(input.size() == output.size(), "evm_fd: length mismatch");
  require(!bins.empty(), "evm_fd: empty band");
  require(fft_size >= 1 && cp_length >= 0, "evm_fd: invalid symbol geometry");
  for (int b : bins) require(b >= 0 && b < fft_size, "evm_fd: bin outside [0, fft_size)");
  const auto n = static_cast<std::size_t>(fft_size);
  const auto period = n + static_cast<std::size_t>(cp_length);
  require(input.size() % period == 0, "evm_fd: stream is not a whole number of symbols");
  std::vector<Complex> a(n), b(n), fa(n), fb(n);
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t start = 0; start < input.size(); start += period) {
    const std::size_t body = start + static_cast<std::size_t>(cp_length);
    std::copy_n(input.samples.begin() + static_cast<std::ptrdiff_t>(body), n, a.begin());
    std::copy_n(output.samples.begin() + static_cast<std::ptrdiff_t>(body), n, b.begin());
    fft_forward(a, fa);
    fft_forward(b, fb);
    for (int k : bins) {
      const auto i = static_cast<std::size_t>(k);
      err += std::norm(fa[i] - fb[i]);
      ref += std::norm(fa[i]);
    }
  }
  require(ref > 0.0, "evm_fd: zero-energy input in band");
  return 100.0 * std::sqrt(err / ref);
}

std::vector<int> utilized_band(const CompressionProfile& profile) {
  return used_subcarrier_bins(profile.fft_size, profile.used_subcarriers);
}

// ---------------------------------------------------------------------------

double MismatchTable::relative(std::size_t r, std::size_t c) const {
  double ref = std::numeric_limits<double>::infinity();
  bool matched = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] == columns[c]) {
      ref = evm[i][c];
      matched = true;
    }
  }
  if (!matched) {
    for (std::size_t i = 0; i < rows.size(); ++i) ref = std::min(ref, evm[i][c]);
  }
  return evm[r][c] / ref - 1.0;
}

std::string MismatchTable::to_csv() const {
  std::ostringstream out;
  out << "training";
  for (const auto& c : columns) out << ",evm_" << c;
  for (const auto& c : columns) out << ",cell_" << c;
  out << '\n';
  char buf[64];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << rows[r];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.4f", evm[r][c]);
      out << buf;
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.2f (%.0f%%)", evm[r][c], 100.0 * relative(r, c));
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

MismatchTable mismatch_matrix(std::span<const LabeledModel> codebooks, std::span<const LabeledStream> corpora,
                              const CompressionProfile& profile, unsigned threads) {
  for (const auto& cb : codebooks) check_model(profile, cb.model);
  MismatchTable t;
  for (const auto& cb : codebooks) t.rows.push_back(cb.label);
  for (const auto& c : corpora) t.columns.push_back(c.label);
  t.evm.assign(codebooks.size(), std::vector<double>(corpora.size(), 0.0));
  const auto bins = utilized_band(profile);
  const std::size_t cells = codebooks.size() * corpora.size();
  parallel_chunks(cells, threads, [&](std::size_t k) {
    const std::size_t r = k / corpora.size();
    const std::size_t c = k % corpora.size();
    const auto& x = corpora[c].stream;
    const auto packed = compress(x, profile, codebooks[r].model, 1);
    const auto y = decompress(packed.bytes, profile, codebooks[r].model, 1);
    t.evm[r][c] = evm_fd(x, y, bins, profile.fft_size, profile.cp_length);
  });
  return t;
}

// ---------------------------------------------------------------------------

Complexity expected_complexity(const CompressionProfile& p) {
  switch (p.quantizer) {
    case QuantizerKind::raw:
      return {};
    case QuantizerKind::vq: {
      const auto k = codebook_size(p.vq.l_vq, p.vq.q_vq);
      return {k, k};
    }
    case QuantizerKind::msvq:
      return msvq_complexity(p.msvq.q1, p.msvq.q2, p.msvq.l);
    case QuantizerKind::upmgq:
      return upmgq_complexity(p.upmgq);
  }
  return {};
}

Complexity complexity_counters(const CompressionProfile& profile, const QuantizerModel& model,
                               const IQStream& prepared, std::size_t max_vectors) {
  check_model(profile, model);
  SearchStats stats;
  Complexity c;
  const int l = profile.vector_length();
  const std::size_t keep = std::min(prepared.size(), (max_vectors * static_cast<std::size_t>(l) + 1) / 2);
  IQStream head;
  head.rate = prepared.rate;
  head.samples.assign(prepared.samples.begin(), prepared.samples.begin() + static_cast<std::ptrdiff_t>(keep));
  switch (profile.quantizer) {
    case QuantizerKind::raw:
      return c;
    case QuantizerKind::vq: {
      const auto& m = std::get<VqModel>(model);
      const auto batch = vectorize(head, profile.vector_method, l, profile.permutation_seed);
      quantize_batch(m.codebook, batch, SearchMode::exhaustive, &stats);
      c.codebook_size = m.codebook.size();
      break;
    }
    case QuantizerKind::msvq: {
      const auto& m = std::get<MsvqModel>(model);
      const auto batch = vectorize(head, profile.vector_method, l, profile.permutation_seed);
      quantize_msvq_batch(m.codebook, batch, SearchMode::exhaustive, &stats);
      c.codebook_size = m.codebook.stored_codewords();
      break;
    }
    case QuantizerKind::upmgq: {
      const auto& m = std::get<UpmgqCodebook>(model);
      quantize_upmgq(m, head, SearchMode::exhaustive, &stats);
      c.codebook_size = m.high_vq.size() + m.low_points.size();
      break;
    }
  }
  if (stats.queries == 0) return c;
  if (stats.distance_evaluations % stats.queries != 0) {
    throw Error("complexity counter is not a whole number of visits per vector");
  }
  c.searching_operations = stats.distance_evaluations / stats.queries;
  return c;
}

// ---------------------------------------------------------------------------

EvalReport evaluate(const IQStream& stream, const CompressionProfile& profile, const QuantizerModel& model,
                    const CorpusDescriptor& corpus, unsigned threads) {
  EvalReport r;
  const auto packed = compress(stream, profile, model, threads);
  const auto out = decompress(packed.bytes, profile, model, threads);
  r.evm_td_pct = evm_td(stream, out);
  r.evm_fd_pct = evm_fd(stream, out, utilized_band(profile), profile.fft_size, profile.cp_length);
  r.stages = packed.stats;
  r.cr_formula = packed.stats.cr_formula;
  r.cr_formula_nominal = packed.stats.cr_formula_nominal;
  r.cr_measured = packed.stats.cr_measured;
  const auto fe = front_end(stream, profile);
  const auto cx = complexity_counters(profile, model, fe.stream);
  r.so_measured = cx.searching_operations;
  r.cs_measured = cx.codebook_size;
  r.profile_digest = profile_digest(profile);
  r.corpus = corpus;
  r.profile = to_json(profile);
  return r;
}

Json to_json(const EvalReport& r) {
  const auto& s = r.stages;
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(r.profile_digest));
  return {{"schema_version", EvalReport::kSchemaVersion},
          {"evm_td_pct", r.evm_td_pct},
          {"evm_fd_pct", r.evm_fd_pct},
          {"cr_formula", r.cr_formula},
          {"cr_formula_nominal", r.cr_formula_nominal},
          {"cr_measured", r.cr_measured},
          {"so_measured", r.so_measured},
          {"cs_measured", r.cs_measured},
          {"profile_digest", digest},
          {"corpus",
           {{"link", r.corpus.link},
            {"modulation", r.corpus.modulation},
            {"channel", r.corpus.channel},
            {"snr_db", std::isinf(r.corpus.snr_db) ? Json(nullptr) : Json(r.corpus.snr_db)}}},
          {"stages",
           {{"input_samples", s.input_samples},
            {"after_cp", s.after_cp},
            {"after_decimation", s.after_decimation},
            {"vectors", s.vectors},
            {"scale_bits", s.scale_bits},
            {"payload_bits", s.payload_bits},
            {"padding_bits", s.padding_bits},
            {"header_bits", s.header_bits},
            {"section_bits", s.section_bits},
            {"l_huff", s.l_huff},
            {"l_huff_table", s.l_huff_table},
            {"l_low", s.l_low},
            {"cr_cpr", s.cr_cpr},
            {"cr_dec", s.cr_dec},
            {"cr_vq", s.cr_vq},
            {"cr_ec", s.cr_ec},
            {"q_bs", s.q_bs},
            {"n_bs", s.n_bs}}},
          {"profile", r.profile}};
}

std::string csv_header() {
  return "evm_td_pct,evm_fd_pct,cr_formula,cr_formula_nominal,cr_measured,so_measured,cs_measured,"
         "profile_digest,link,modulation,channel,snr_db";
}

std::string csv_row(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f,%llu,%llu,%016llx,%s,%s,%s,%s", r.evm_td_pct,
                r.evm_fd_pct, r.cr_formula, r.cr_formula_nominal, r.cr_measured,
                static_cast<unsigned long long>(r.so_measured), static_cast<unsigned long long>(r.cs_measured),
                static_cast<unsigned long long>(r.profile_digest), r.corpus.link.c_str(),
                r.corpus.modulation.c_str(), r.corpus.channel.c_str(),
                std::isinf(r.corpus.snr_db) ? "inf" : std::to_string(r.corpus.snr_db).c_str());
  return buf;
}

}  // namespace fvq
