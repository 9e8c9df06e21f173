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

#include "fvq/profile.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "fvq/error.hpp"

namespace fvq {
namespace {

void check_keys(const Json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  require(j.is_object(), std::string(where) + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || item.key() == a;
    require(ok, std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ContractError(std::string("profile key '") + key + "': " + e.what());
  }
}

bool enabled(const Json& j, bool fallback) { return get_or<bool>(j, "enabled", fallback); }

Json snr_to_json(double snr) { return std::isinf(snr) ? Json(nullptr) : Json(snr); }

}  // namespace

std::string_view to_string(QuantizerKind k) {
  switch (k) {
    case QuantizerKind::raw:
      return "raw";
    case QuantizerKind::vq:
      return "vq";
    case QuantizerKind::msvq:
      return "msvq";
    case QuantizerKind::upmgq:
      return "upmgq";
  }
  return "?";
}

QuantizerKind parse_quantizer(std::string_view s) {
  if (s == "raw") return QuantizerKind::raw;
  if (s == "vq") return QuantizerKind::vq;
  if (s == "msvq") return QuantizerKind::msvq;
  if (s == "upmgq") return QuantizerKind::upmgq;
  throw ContractError("unknown quantizer kind: " + std::string(s));
}

std::optional<CpParams> CompressionProfile::cp() const {
  if (const auto* d = std::get_if<DownlinkLink>(&link)) return d->cp;
  return std::nullopt;
}

int CompressionProfile::quantizer_bits() const {
  switch (quantizer) {
    case QuantizerKind::raw:
      return q0;
    case QuantizerKind::vq:
      return vq.q_vq;
    case QuantizerKind::msvq:
      return msvq.q1 + msvq.q2;
    case QuantizerKind::upmgq:
      return 1 + upmgq.q_high + upmgq.q_low;
  }
  return q0;
}

int CompressionProfile::vector_length() const {
  switch (quantizer) {
    case QuantizerKind::raw:
      return 1;
    case QuantizerKind::vq:
      return vq.l_vq;
    case QuantizerKind::msvq:
      return msvq.l;
    case QuantizerKind::upmgq:
      return upmgq.l_upmgq;
  }
  return 1;
}

double CompressionProfile::scale_target() const {
  if (block_scaling && block_scaling->target) return *block_scaling->target;
  if (quantizer == QuantizerKind::upmgq) return std::ldexp((1 << upmgq.q_high) - 1, upmgq.theta);
  return std::ldexp(1.0, quantizer_bits()) - 1.0;
}

void CompressionProfile::validate() const {
  require(q0 >= 2 && q0 <= 32, "profile: q0 must be in [2, 32]");
  require(input_rms > 0.0 && std::isfinite(input_rms), "profile: input_rms must be positive");
  if (auto c = cp()) {
    require(c->l_sym >= 1 && c->l_cp >= 0, "profile: invalid cyclic prefix geometry");
  }
  if (decimation) decimation->validate();
  if (block_scaling) {
    require(block_scaling->n_bs >= 1, "profile: n_bs must be >= 1");
    require(block_scaling->q_bs >= 1 && block_scaling->q_bs <= 32, "profile: q_bs must be in [1, 32]");
    if (block_scaling->target) require(*block_scaling->target > 0.0, "profile: scaling target must be positive");
    require(quantizer != QuantizerKind::raw, "profile: raw passthrough cannot be combined with block scaling");
  }
  switch (quantizer) {
    case QuantizerKind::raw:
      require(!entropy, "profile: raw passthrough has no entropy coder");
      break;
    case QuantizerKind::vq:
      require(vq.l_vq >= 1 && vq.q_vq >= 1, "profile: vq needs l_vq >= 1 and q_vq >= 1");
      require(vq.l_vq * vq.q_vq <= 31, "profile: vq index exceeds 31 bits");
      break;
    case QuantizerKind::msvq:
      require(msvq.l >= 1 && msvq.q1 >= 1 && msvq.q2 >= 0, "profile: invalid msvq geometry");
      require(msvq.l * (msvq.q1 + msvq.q2) <= 31, "profile: msvq joint index exceeds 31 bits");
      break;
    case QuantizerKind::upmgq:
      upmgq.validate();
      require(upmgq.q0 == q0, "profile: upmgq q0 must equal profile q0");
      break;
  }
  require(fft_size >= 2 && cp_length >= 0, "profile: invalid band geometry");
  require(used_subcarriers >= 1 && used_subcarriers < fft_size, "profile: used_subcarriers must be in [1, fft_size)");
}

Json to_json(const CompressionProfile& p) {
  Json j;
  j["link"] = p.is_downlink() ? "downlink" : "uplink";
  if (p.is_downlink()) {
    const auto c = p.cp();
    j["cp"] = c ? Json{{"enabled", true}, {"l_sym", c->l_sym}, {"l_cp", c->l_cp}} : Json{{"enabled", false}};
  }
  if (p.decimation) {
    j["decimation"] = {{"enabled", true},
                       {"up", p.decimation->up},
                       {"down", p.decimation->down},
                       {"filter_taps", p.decimation->filter_taps},
                       {"stopband_atten_db", p.decimation->stopband_atten_db}};
  } else {
    j["decimation"] = {{"enabled", false}};
  }
  if (p.block_scaling) {
    j["block_scaling"] = {{"enabled", true},
                          {"n_bs", p.block_scaling->n_bs},
                          {"q_bs", p.block_scaling->q_bs},
                          {"target", p.block_scaling->target ? Json(*p.block_scaling->target) : Json(nullptr)}};
  } else {
    j["block_scaling"] = {{"enabled", false}};
  }
  Json q{{"kind", to_string(p.quantizer)}};
  switch (p.quantizer) {
    case QuantizerKind::raw:
      break;
    case QuantizerKind::vq:
      q["l_vq"] = p.vq.l_vq;
      q["q_vq"] = p.vq.q_vq;
      break;
    case QuantizerKind::msvq:
      q["l_vq"] = p.msvq.l;
      q["q1"] = p.msvq.q1;
      q["q2"] = p.msvq.q2;
      break;
    case QuantizerKind::upmgq:
      q["theta"] = p.upmgq.theta;
      q["q_high"] = p.upmgq.q_high;
      q["l_vq"] = p.upmgq.l_upmgq;
      q["q_low"] = p.upmgq.q_low;
      q["low_entropy"] = p.upmgq.low_entropy;
      break;
  }
  j["quantizer"] = q;
  j["entropy"] = p.entropy;
  j["vector_method"] = to_string(p.vector_method);
  j["permutation_seed"] = p.permutation_seed;
  j["q0"] = p.q0;
  j["input_rms"] = p.input_rms;
  j["band"] = {{"fft_size", p.fft_size}, {"cp_length", p.cp_length}, {"used_subcarriers", p.used_subcarriers}};
  return j;
}

CompressionProfile compression_from_json(const Json& j) {
  check_keys(j, "compression", {"link", "cp", "decimation", "block_scaling", "quantizer", "entropy", "vector_method",
                                "permutation_seed", "q0", "input_rms", "band"});
  CompressionProfile p;
  const auto link = get_or<std::string>(j, "link", "uplink");
  if (link == "downlink") {
    DownlinkLink d;
    if (j.contains("cp")) {
      const auto& c = j.at("cp");
      check_keys(c, "cp", {"enabled", "l_sym", "l_cp"});
      if (enabled(c, true)) d.cp = CpParams{get_or<int>(c, "l_sym", 1024), get_or<int>(c, "l_cp", 128)};
    }
    p.link = d;
  } else if (link == "uplink") {
    if (j.contains("cp")) {
      const auto& c = j.at("cp");
      require(!enabled(c, true), "profile: cyclic-prefix removal is not available on the uplink");
    }
    p.link = UplinkLink{};
  } else {
    throw ContractError("profile: unknown link '" + link + "'");
  }
  if (j.contains("decimation")) {
    const auto& d = j.at("decimation");
    check_keys(d, "decimation", {"enabled", "up", "down", "filter_taps", "stopband_atten_db"});
    if (enabled(d, true)) {
      ResamplerSpec s;
      s.up = get_or<int>(d, "up", 5);
      s.down = get_or<int>(d, "down", 8);
      s.filter_taps = get_or<int>(d, "filter_taps", s.filter_taps);
      s.stopband_atten_db = get_or<double>(d, "stopband_atten_db", s.stopband_atten_db);
      p.decimation = s;
    }
  }
  if (j.contains("block_scaling")) {
    const auto& b = j.at("block_scaling");
    check_keys(b, "block_scaling", {"enabled", "n_bs", "q_bs", "target"});
    if (enabled(b, true)) {
      BlockScalingParams s;
      s.n_bs = get_or<int>(b, "n_bs", s.n_bs);
      s.q_bs = get_or<int>(b, "q_bs", s.q_bs);
      if (b.contains("target") && !b.at("target").is_null()) s.target = get_or<double>(b, "target", 0.0);
      p.block_scaling = s;
    }
  }
  if (j.contains("quantizer")) {
    const auto& q = j.at("quantizer");
    check_keys(q, "quantizer", {"kind", "l_vq", "q_vq", "q1", "q2", "theta", "q_high", "q_low", "low_entropy"});
    p.quantizer = parse_quantizer(get_or<std::string>(q, "kind", "vq"));
    p.vq.l_vq = get_or<int>(q, "l_vq", p.vq.l_vq);
    p.vq.q_vq = get_or<int>(q, "q_vq", p.vq.q_vq);
    p.msvq.l = p.vq.l_vq;
    p.msvq.q1 = get_or<int>(q, "q1", p.msvq.q1);
    p.msvq.q2 = get_or<int>(q, "q2", p.msvq.q2);
    p.upmgq.l_upmgq = p.vq.l_vq;
    p.upmgq.theta = get_or<int>(q, "theta", p.upmgq.theta);
    p.upmgq.q_high = get_or<int>(q, "q_high", p.upmgq.q_high);
    p.upmgq.q_low = get_or<int>(q, "q_low", p.upmgq.q_low);
    p.upmgq.low_entropy = get_or<bool>(q, "low_entropy", false);
  }
  p.entropy = get_or<bool>(j, "entropy", p.quantizer != QuantizerKind::raw);
  p.vector_method = parse_layout(get_or<std::string>(j, "vector_method", "method1"));
  p.permutation_seed = get_or<std::uint64_t>(j, "permutation_seed", 0);
  p.q0 = get_or<int>(j, "q0", 15);
  p.upmgq.q0 = p.q0;
  p.input_rms = get_or<double>(j, "input_rms", p.input_rms);
  if (j.contains("band")) {
    const auto& b = j.at("band");
    check_keys(b, "band", {"fft_size", "cp_length", "used_subcarriers"});
    p.fft_size = get_or<int>(b, "fft_size", p.fft_size);
    p.cp_length = get_or<int>(b, "cp_length", p.cp_length);
    p.used_subcarriers = get_or<int>(b, "used_subcarriers", p.used_subcarriers);
  }
  p.validate();
  return p;
}

Json to_json(const WaveformConfig& w) {
  return {{"fft_size", w.fft_size},
          {"cp_length", w.cp_length},
          {"used_subcarriers", w.used_subcarriers},
          {"modulation", to_string(w.modulation)},
          {"snr_db", snr_to_json(w.snr_db)},
          {"num_symbols", w.num_symbols},
          {"seed", w.seed},
          {"link", to_string(w.link)},
          {"channel", to_string(w.channel)},
          {"subcarrier_spacing_hz", w.subcarrier_spacing_hz}};
}

WaveformConfig waveform_from_json(const Json& j) {
  check_keys(j, "waveform", {"fft_size", "cp_length", "used_subcarriers", "modulation", "snr_db", "num_symbols",
                             "seed", "link", "channel", "subcarrier_spacing_hz"});
  WaveformConfig w;
  w.fft_size = get_or<int>(j, "fft_size", w.fft_size);
  w.cp_length = get_or<int>(j, "cp_length", w.cp_length);
  w.used_subcarriers = get_or<int>(j, "used_subcarriers", w.used_subcarriers);
  w.modulation = parse_modulation(get_or<std::string>(j, "modulation", std::string(to_string(w.modulation))));
  w.snr_db = get_or<double>(j, "snr_db", kNoNoise);
  w.num_symbols = get_or<int>(j, "num_symbols", w.num_symbols);
  w.seed = get_or<std::uint64_t>(j, "seed", w.seed);
  w.link = parse_link(get_or<std::string>(j, "link", std::string(to_string(w.link))));
  w.channel = parse_channel(get_or<std::string>(j, "channel", std::string(to_string(w.channel))));
  w.subcarrier_spacing_hz = get_or<double>(j, "subcarrier_spacing_hz", w.subcarrier_spacing_hz);
  w.validate();
  return w;
}

Json to_json(const TrainingParams& t) {
  return {{"trainer", to_string(t.trainer)},
          {"trials", t.trials},
          {"max_iterations", t.stop.max_iterations},
          {"rel_improvement_eps", t.stop.rel_improvement_eps},
          {"seed", t.seed},
          {"init", to_string(t.init)}};
}

TrainingParams training_from_json(const Json& j) {
  check_keys(j, "training", {"trainer", "trials", "max_iterations", "rel_improvement_eps", "seed", "init"});
  TrainingParams t;
  t.trainer = parse_trainer(get_or<std::string>(j, "trainer", "modified"));
  t.trials = get_or<int>(j, "trials", t.trials);
  t.stop.max_iterations = get_or<int>(j, "max_iterations", t.stop.max_iterations);
  t.stop.rel_improvement_eps = get_or<double>(j, "rel_improvement_eps", t.stop.rel_improvement_eps);
  t.seed = get_or<std::uint64_t>(j, "seed", t.seed);
  t.init = parse_init(get_or<std::string>(j, "init", "uniform"));
  require(t.trials >= 1, "training: trials must be >= 1");
  t.stop.validate();
  return t;
}

Json to_json(const ProfileDocument& d) {
  Json sweep = Json::array();
  for (const auto& s : d.sweep) sweep.push_back({{"label", s.label}, {"set", s.set}});
  return {{"compression", to_json(d.compression)},
          {"waveform", to_json(d.waveform)},
          {"training", to_json(d.training)},
          {"sweep", sweep}};
}

ProfileDocument document_from_json(const Json& j) {
  check_keys(j, "profile", {"compression", "waveform", "training", "sweep"});
  ProfileDocument d;
  d.compression = compression_from_json(j.value("compression", Json::object()));
  d.waveform = waveform_from_json(j.value("waveform", Json::object()));
  d.training = training_from_json(j.value("training", Json::object()));
  if (j.contains("sweep")) {
    require(j.at("sweep").is_array(), "profile: sweep must be an array");
    for (const auto& s : j.at("sweep")) {
      check_keys(s, "sweep entry", {"label", "set"});
      SweepPoint p;
      p.label = get_or<std::string>(s, "label", "");
      p.set = s.value("set", Json::object());
      require(p.set.is_object(), "profile: sweep 'set' must be an object");
      d.sweep.push_back(std::move(p));
    }
  }
  return d;
}

ProfileDocument load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open profile " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError("profile " + path.string() + ": " + e.what());
  }
  return document_from_json(j);
}

void apply_override(Json& doc, std::string_view dotted_path, const Json& value) {
  require(!dotted_path.empty(), "override: empty key");
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted_path.find('.', start);
    const std::string key(dotted_path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    require(!key.empty(), "override: empty path component in '" + std::string(dotted_path) + "'");
    if (node->is_null()) *node = Json::object();
    require(node->is_object(), "override: '" + std::string(dotted_path) + "' descends into a non-object");
    if (dot == std::string_view::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string_view::npos, "override '" + std::string(assignment) + "' is not key=value");
  const std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  apply_override(doc, assignment.substr(0, eq), value);
}

std::string canonical_json(const CompressionProfile& p) { return to_json(p).dump(); }

std::uint64_t profile_digest(const CompressionProfile& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json(p)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fvq
