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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "fvq/error.hpp"
#include "fvq/metrics.hpp"
#include "fvq/pipeline.hpp"
#include "fvq/profile.hpp"
#include "fvq/upmgq.hpp"
#include "fvq/waveform.hpp"

namespace py = pybind11;
using namespace fvq;

namespace {

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

IQStream to_stream(const ComplexArray& a, std::uint64_t rate_num, std::uint64_t rate_den) {
  IQStream s;
  s.samples.assign(a.data(), a.data() + a.size());
  s.rate = {rate_num, rate_den};
  return s;
}

ComplexArray to_array(const IQStream& s) {
  ComplexArray out(static_cast<py::ssize_t>(s.size()));
  std::memcpy(out.mutable_data(), s.samples.data(), s.size() * sizeof(Complex));
  return out;
}

CompressionProfile parse_compression(const std::string& json) { return compression_from_json(Json::parse(json)); }

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return {reinterpret_cast<const char*>(v.data()), v.size()};
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

// Empty bytes stand for "no codebook" (raw passthrough).
QuantizerModel model_from(const py::bytes& b) {
  const auto v = from_bytes(b);
  if (v.empty()) return std::monostate{};
  return decode_model(v);
}

py::dict stats_dict(const StageStats& st) {
  py::dict d;
  d["input_samples"] = st.input_samples;
  d["after_cp"] = st.after_cp;
  d["after_decimation"] = st.after_decimation;
  d["vectors"] = st.vectors;
  d["scale_bits"] = st.scale_bits;
  d["payload_bits"] = st.payload_bits;
  d["padding_bits"] = st.padding_bits;
  d["header_bits"] = st.header_bits;
  d["l_huff"] = st.l_huff;
  d["cr_cpr"] = st.cr_cpr;
  d["cr_dec"] = st.cr_dec;
  d["cr_vq"] = st.cr_vq;
  d["cr_ec"] = st.cr_ec;
  d["cr_formula"] = st.cr_formula;
  d["cr_formula_nominal"] = st.cr_formula_nominal;
  d["cr_measured"] = st.cr_measured;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fvq, m) {
  m.doc() = "Fronthaul IQ vector-quantization compression core";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);

  m.def(
      "generate",
      [](const std::string& waveform_json) {
        const IQStream s = generate(waveform_from_json(Json::parse(waveform_json)));
        return to_array(s);
      },
      py::arg("waveform_json"), "Generate a waveform from a JSON waveform section.");

  m.def("canonical_profile", [](const std::string& json) { return canonical_json(parse_compression(json)); },
        py::arg("compression_json"));
  m.def("profile_digest", [](const std::string& json) { return profile_digest(parse_compression(json)); },
        py::arg("compression_json"));

  m.def(
      "train",
      [](const ComplexArray& samples, const std::string& compression_json, const std::string& training_json) {
        const auto p = parse_compression(compression_json);
        const auto t = training_from_json(Json::parse(training_json));
        const IQStream s = to_stream(samples, 15'360'000, 1);
        std::vector<std::uint8_t> bytes;
        {
          py::gil_scoped_release release;
          bytes = encode_model(train_model(training_stream(std::span(&s, 1), p), p, t));
        }
        return to_bytes(bytes);
      },
      py::arg("samples"), py::arg("compression_json"), py::arg("training_json") = "{}",
      "Train a quantizer; returns the serialized codebook container.");

  m.def(
      "compress",
      [](const ComplexArray& samples, const std::string& compression_json, const py::bytes& model) {
        const auto p = parse_compression(compression_json);
        const auto mdl = model_from(model);
        const auto c = compress(to_stream(samples, 15'360'000, 1), p, mdl);
        return py::make_tuple(to_bytes(c.bytes), stats_dict(c.stats));
      },
      py::arg("samples"), py::arg("compression_json"), py::arg("model") = py::bytes(),
      "Compress samples; returns (bitstream, stage statistics).");

  m.def(
      "decompress",
      [](const py::bytes& bits, const std::string& compression_json, const py::bytes& model) {
        const auto p = parse_compression(compression_json);
        const auto mdl = model_from(model);
        return to_array(decompress(from_bytes(bits), p, mdl));
      },
      py::arg("bitstream"), py::arg("compression_json"), py::arg("model") = py::bytes());

  m.def(
      "evm_td",
      [](const ComplexArray& a, const ComplexArray& b) { return evm_td(to_stream(a, 1, 1), to_stream(b, 1, 1)); },
      py::arg("reference"), py::arg("test"));
  m.def(
      "evm_fd",
      [](const ComplexArray& a, const ComplexArray& b, const std::vector<int>& bins, int fft_size, int cp_length) {
        return evm_fd(to_stream(a, 1, 1), to_stream(b, 1, 1), bins, fft_size, cp_length);
      },
      py::arg("reference"), py::arg("test"), py::arg("bins"), py::arg("fft_size"), py::arg("cp_length") = 0);
  m.def("used_subcarrier_bins", &used_subcarrier_bins, py::arg("fft_size"), py::arg("used_subcarriers"));
  m.def("theorem_cr", &theorem_cr, py::arg("cr_cpr"), py::arg("cr_dec"), py::arg("cr_vq"), py::arg("cr_ec"),
        py::arg("q_bs"), py::arg("n_bs"), py::arg("q0"));
  m.def(
      "expand",
      [](double x, int theta) {
        const auto e = expand(x, theta);
        return py::make_tuple(e.sign, e.high, e.low);
      },
      py::arg("sample"), py::arg("theta"));
}
