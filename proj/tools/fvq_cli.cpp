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

// fvq: corpus generation, codebook training, compression and evaluation.

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fvq/error.hpp"
#include "fvq/iq_file.hpp"
#include "fvq/metrics.hpp"
#include "fvq/parallel.hpp"
#include "fvq/pipeline.hpp"
#include "fvq/profile.hpp"
#include "fvq/upmgq.hpp"
#include "fvq/vectorizer.hpp"
#include "fvq/waveform.hpp"

namespace {

using fvq::Json;

struct Common {
  std::string profile;
  std::vector<std::string> inputs;
  std::string out;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string report = "json";
  std::vector<std::string> codebooks;
  bool matrix = false;
};

void log(const std::string& line) { std::cerr << line << '\n'; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Profile file with --set and --seed applied; the resolved JSON is kept so
// it can be echoed into every artifact.
struct Resolved {
  fvq::ProfileDocument doc;
  Json json;
};

Resolved resolve(const Common& c) {
  Json j = Json::object();
  if (!c.profile.empty()) {
    std::ifstream in(c.profile);
    if (!in) throw fvq::FormatError("cannot open profile " + c.profile);
    j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw fvq::FormatError("profile " + c.profile + " is not valid JSON");
  }
  for (const auto& s : c.sets) fvq::apply_override(j, s);
  if (c.seed) {
    fvq::apply_override(j, "waveform.seed", *c.seed);
    fvq::apply_override(j, "training.seed", *c.seed);
  }
  Resolved r;
  r.doc = fvq::document_from_json(j);
  r.json = fvq::to_json(r.doc);
  return r;
}

unsigned threads_of(const Common& c) { return c.threads ? c.threads : fvq::default_threads(); }

void write_sidecar(const std::string& artifact, const Json& resolved, const Json& extra = Json::object()) {
  Json j{{"artifact", artifact}, {"resolved_profile", resolved}};
  for (const auto& item : extra.items()) j[item.key()] = item.value();
  std::ofstream out(artifact + ".json");
  if (!out) throw fvq::FormatError("cannot write " + artifact + ".json");
  out << j.dump(2) << '\n';
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw fvq::FormatError("cannot write " + path);
  out << text;
}

std::string need(const std::string& v, const char* flag) {
  if (v.empty()) throw CLI::RequiredError(flag);
  return v;
}

// "label=path" or bare path (label = path).
std::pair<std::string, std::string> labeled(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) return {s, s};
  return {s.substr(0, eq), s.substr(eq + 1)};
}

fvq::CorpusDescriptor describe(const fvq::WaveformConfig& w) {
  return {std::string(fvq::to_string(w.link)), std::string(fvq::to_string(w.modulation)),
          std::string(fvq::to_string(w.channel)), w.snr_db};
}

// ---------------------------------------------------------------------------

int run_gen(const Common& c) {
  const auto r = resolve(c);
  const auto out = need(c.out, "--out");
  const auto parts = fvq::generate_parts(r.doc.waveform);
  fvq::IQStream x = parts.signal;
  for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] += parts.noise.samples[i];
  fvq::write_iqf(out, x);
  Json stats{{"samples", x.size()}, {"rate_hz", x.rate.hz()}};
  if (!x.empty()) {
    const double ps = fvq::mean_power(parts.signal.view());
    const double pn = fvq::mean_power(parts.noise.view());
    stats["signal_power"] = ps;
    stats["measured_snr_db"] = pn > 0.0 ? Json(10.0 * std::log10(ps / pn)) : Json(nullptr);
  }
  write_sidecar(out, r.json, {{"corpus_stats", stats}});
  log("gen: " + std::to_string(x.size()) + " samples -> " + out + " " + stats.dump());
  return 0;
}

std::vector<fvq::IQStream> load_corpus(const Common& c, const fvq::ProfileDocument& doc) {
  std::vector<fvq::IQStream> corpus;
  for (const auto& p : c.inputs) corpus.push_back(fvq::read_iqf(labeled(p).second));
  if (corpus.empty()) corpus.push_back(fvq::generate(doc.waveform));
  return corpus;
}

int run_train(const Common& c) {
  const auto r = resolve(c);
  const auto out = need(c.out, "--out");
  const auto& p = r.doc.compression;
  const auto corpus = load_corpus(c, r.doc);
  const auto prepared = fvq::training_stream(corpus, p);
  log("train: " + std::string(fvq::to_string(p.quantizer)) + " with " +
      std::string(fvq::to_string(r.doc.training.trainer)) + " Lloyd, " + std::to_string(prepared.size()) +
      " front-end samples");
  fvq::TrainingTrace trace;
  const auto model = fvq::train_model(prepared, p, r.doc.training, threads_of(c), &trace);
  Json trials = Json::array();
  for (std::size_t t = 0; t < trace.trials.size(); ++t) {
    const auto& tr = trace.trials[t];
    if (t > 0 && r.doc.training.trainer == fvq::TrainerKind::modified) {
      log("  trial " + std::to_string(t + 1) + ": rescale initial codebook by " + fmt("%.6f", tr.rescale));
    }
    for (std::size_t i = 0; i < tr.distortions.size(); ++i) {
      log("  trial " + std::to_string(t + 1) + " iteration " + std::to_string(i) + " distortion " +
          fmt("%.6g", tr.distortions[i]));
    }
    trials.push_back({{"rescale", tr.rescale}, {"distortions", tr.distortions}});
  }
  fvq::save_model(out, model);
  write_sidecar(out, r.json, {{"trace", trials}});
  log("train: wrote " + out);
  return 0;
}

void log_stats(const fvq::StageStats& s) {
  log("  samples: input " + std::to_string(s.input_samples) + ", after CP removal " + std::to_string(s.after_cp) +
      ", after decimation " + std::to_string(s.after_decimation) + ", vectors " + std::to_string(s.vectors));
  log("  bits: scale " + std::to_string(s.scale_bits) + ", payload " + std::to_string(s.payload_bits) +
      ", padding " + std::to_string(s.padding_bits) + ", header " + std::to_string(s.header_bits));
  log("  gains: cpr " + fmt("%.4f", s.cr_cpr) + ", dec " + fmt("%.4f", s.cr_dec) + ", vq " + fmt("%.4f", s.cr_vq) +
      ", ec " + fmt("%.4f", s.cr_ec) + " (L_HUFF " + fmt("%.4f", s.l_huff) + ")");
  log("  CR: formula " + fmt("%.4f", s.cr_formula) + ", measured " + fmt("%.4f", s.cr_measured) +
      ", formula with literal N_BS " + fmt("%.4f", s.cr_formula_nominal));
}

int run_compress(const Common& c) {
  const auto r = resolve(c);
  const auto out = need(c.out, "--out");
  if (c.inputs.size() != 1) throw CLI::ValidationError("--in", "compress takes exactly one input");
  const auto& p = r.doc.compression;
  const auto x = fvq::read_iqf(c.inputs.front());
  const auto model = p.quantizer == fvq::QuantizerKind::raw
                         ? fvq::QuantizerModel{}
                         : fvq::load_model(need(c.codebooks.empty() ? "" : c.codebooks.front(), "--codebook"));
  const auto packed = fvq::compress(x, p, model, threads_of(c));
  fvq::write_file(out, packed.bytes);
  log("compress: " + std::to_string(packed.bytes.size()) + " bytes -> " + out);
  log_stats(packed.stats);
  write_sidecar(out, r.json,
                {{"cr_formula", packed.stats.cr_formula}, {"cr_measured", packed.stats.cr_measured}});
  return 0;
}

int run_decompress(const Common& c) {
  const auto r = resolve(c);
  const auto out = need(c.out, "--out");
  if (c.inputs.size() != 1) throw CLI::ValidationError("--in", "decompress takes exactly one input");
  const auto& p = r.doc.compression;
  const auto model = p.quantizer == fvq::QuantizerKind::raw
                         ? fvq::QuantizerModel{}
                         : fvq::load_model(need(c.codebooks.empty() ? "" : c.codebooks.front(), "--codebook"));
  const auto y = fvq::decompress(fvq::read_file(c.inputs.front()), p, model, threads_of(c));
  fvq::write_iqf(out, y);
  write_sidecar(out, r.json);
  log("decompress: " + std::to_string(y.size()) + " samples -> " + out);
  return 0;
}

int run_eval(const Common& c) {
  const auto r = resolve(c);
  const auto out = need(c.out, "--out");
  const auto& p = r.doc.compression;
  if (c.matrix) {
    std::vector<fvq::LabeledModel> models;
    for (const auto& s : c.codebooks) {
      auto [label, path] = labeled(s);
      models.push_back({label, fvq::load_model(path)});
    }
    std::vector<fvq::LabeledStream> corpora;
    for (const auto& s : c.inputs) {
      auto [label, path] = labeled(s);
      corpora.push_back({label, fvq::read_iqf(path)});
    }
    if (models.empty() || corpora.empty()) throw CLI::ValidationError("--matrix", "needs --codebook and --in");
    const auto table = fvq::mismatch_matrix(models, corpora, p, threads_of(c));
    write_text(out, table.to_csv());
    write_sidecar(out, r.json);
    log("eval: mismatch matrix " + std::to_string(models.size()) + "x" + std::to_string(corpora.size()) + " -> " +
        out);
    return 0;
  }
  if (c.inputs.size() != 1) throw CLI::ValidationError("--in", "eval takes exactly one input");
  const auto x = fvq::read_iqf(labeled(c.inputs.front()).second);
  const auto model = p.quantizer == fvq::QuantizerKind::raw
                         ? fvq::QuantizerModel{}
                         : fvq::load_model(need(c.codebooks.empty() ? "" : labeled(c.codebooks.front()).second,
                                                "--codebook"));
  const auto rep = fvq::evaluate(x, p, model, describe(r.doc.waveform), threads_of(c));
  if (c.report == "csv") {
    write_text(out, fvq::csv_header() + "\n" + fvq::csv_row(rep) + "\n");
    write_sidecar(out, r.json);
  } else {
    auto j = fvq::to_json(rep);
    j["resolved_profile"] = r.json;
    write_text(out, j.dump(2) + "\n");
  }
  log("eval: EVM_TD " + fmt("%.3f", rep.evm_td_pct) + "%, EVM_FD " + fmt("%.3f", rep.evm_fd_pct) + "%, CR " +
      fmt("%.4f", rep.cr_measured) + " (formula " + fmt("%.4f", rep.cr_formula) + ")");
  return 0;
}

int run_sweep(const Common& c) {
  const auto r = resolve(c);
  const auto out = need(c.out, "--out");
  const auto& sweep = r.doc.sweep;
  std::vector<std::string> rows(sweep.size());
  std::mutex log_mutex;
  const unsigned threads = threads_of(c);
  fvq::parallel_chunks(sweep.size(), threads, [&](std::size_t k) {
    Json j = r.json;
    for (const auto& item : sweep[k].set.items()) fvq::apply_override(j, item.key(), item.value());
    j["sweep"] = Json::array();
    const auto doc = fvq::document_from_json(j);
    const auto x = fvq::generate(doc.waveform);
    const auto prepared = fvq::training_stream(std::span(&x, 1), doc.compression);
    const auto model = fvq::train_model(prepared, doc.compression, doc.training, 1);
    const auto rep = fvq::evaluate(x, doc.compression, model, describe(doc.waveform), 1);
    const auto& p = doc.compression;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%llu,%llu", sweep[k].label.c_str(),
                  std::string(fvq::to_string(p.quantizer)).c_str(), p.vector_length(), p.quantizer_bits(),
                  rep.cr_formula, rep.cr_formula_nominal, rep.cr_measured, rep.evm_td_pct, rep.evm_fd_pct,
                  static_cast<unsigned long long>(rep.so_measured), static_cast<unsigned long long>(rep.cs_measured));
    rows[k] = buf;
    std::lock_guard lock(log_mutex);
    log("sweep: " + sweep[k].label + " EVM_FD " + fmt("%.3f", rep.evm_fd_pct) + "% CR " + fmt("%.4f", rep.cr_measured));
  });
  std::string csv = "label,quantizer,l,q,cr_formula,cr_formula_nominal,cr_measured,evm_td_pct,evm_fd_pct,so,cs\n";
  for (const auto& row : rows) csv += row + "\n";
  write_text(out, csv);
  write_sidecar(out, r.json);
  log("sweep: " + std::to_string(rows.size()) + " points -> " + out);
  return 0;
}

int run_stats(const Common& c) {
  const auto r = resolve(c);
  const auto out = need(c.out, "--out");
  const auto& p = r.doc.compression;
  const auto corpus = load_corpus(c, r.doc);
  const auto prepared = fvq::training_stream(corpus, p);
  Json j;
  if (prepared.empty()) {
    j["levels"] = Json::array();
    j["orthant_entropy"] = Json::array();
  } else {
    double peak = 0.0;
    for (const auto& s : prepared.samples) peak = std::max({peak, std::abs(s.real()), std::abs(s.imag())});
    const int top = peak > 0.0 ? static_cast<int>(std::floor(std::log2(peak))) + 1 : 0;
    const auto st = fvq::level_statistics(prepared, -8, std::max(top, 0));
    Json levels = Json::array();
    for (int k = st.min_level; k <= st.max_level; ++k) {
      levels.push_back({{"level", k}, {"p_one", st.p_one[static_cast<std::size_t>(k - st.min_level)]}});
    }
    j["levels"] = levels;
    j["sign_p_one"] = st.sign_p;
    Json ent = Json::array();
    for (auto layout : {fvq::VectorLayout::consecutive_same_component, fvq::VectorLayout::iq_interleaved,
                        fvq::VectorLayout::random_permutation}) {
      for (int l = 1; l <= 4; ++l) {
        const auto b = fvq::vectorize(prepared, layout, l, p.permutation_seed);
        ent.push_back({{"method", fvq::to_string(layout)}, {"l_vq", l}, {"entropy_bits", fvq::orthant_entropy(b)}});
      }
    }
    j["orthant_entropy"] = ent;
  }
  if (c.report == "csv") {
    std::ostringstream s;
    s << "kind,key,l_vq,value\n";
    for (const auto& e : j["levels"]) s << "level," << e["level"] << ",," << e["p_one"] << "\n";
    if (j.contains("sign_p_one")) s << "sign,sign,," << j["sign_p_one"] << "\n";
    for (const auto& e : j["orthant_entropy"]) {
      s << "orthant," << e["method"].get<std::string>() << "," << e["l_vq"] << "," << e["entropy_bits"] << "\n";
    }
    write_text(out, s.str());
    write_sidecar(out, r.json);
  } else {
    j["resolved_profile"] = r.json;
    write_text(out, j.dump(2) + "\n");
  }
  log("stats: wrote " + out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fvq: vector-quantization fronthaul compression"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--profile", c.profile, "profile JSON");
    s->add_option("--in", c.inputs, "input file(s); label=path where labels matter");
    s->add_option("--out", c.out, "output path");
    s->add_option("--set", c.sets, "dotted-path override key=value (repeatable)");
    s->add_option("--seed", c.seed, "seed for waveform and training");
    s->add_option("--threads", c.threads, "worker threads (default FVQ_THREADS or 1)");
    s->add_option("--report", c.report, "report format")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--codebook", c.codebooks, "codebook container; label=path for --matrix");
  };
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Common&);
  };
  const Sub subs[] = {
      {"gen", "generate an IQF1 corpus from the profile's waveform", run_gen},
      {"train", "train a codebook container", run_train},
      {"compress", "IQF1 -> CPZ1", run_compress},
      {"decompress", "CPZ1 -> IQF1", run_decompress},
      {"eval", "EVM / CR / complexity report, or a mismatch matrix with --matrix", run_eval},
      {"sweep", "rate-distortion points over the profile's sweep grid", run_sweep},
      {"stats", "binary-level statistics and orthant entropy", run_stats},
  };
  int (*selected)(const Common&) = nullptr;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd);
    if (std::string(s.name) == "eval") cmd->add_flag("--matrix", c.matrix, "mismatch matrix over labeled inputs");
    cmd->callback([&selected, run = s.run] { selected = run; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return selected(c);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const fvq::FormatError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const fvq::ContractError& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
