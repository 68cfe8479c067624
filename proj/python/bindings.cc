// Copyright 2026 The Typotrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "typotrace/dataset.h"
#include "typotrace/detector.h"
#include "typotrace/dld.h"
#include "typotrace/encoder.h"
#include "typotrace/error.h"
#include "typotrace/evaluator.h"
#include "typotrace/keyboard.h"
#include "typotrace/renderer.h"

namespace py = pybind11;

namespace typotrace {
namespace {

py::array_t<float> ToArray(const SwypeImage& image) {
  py::array_t<float> out({SwypeImage::kHeight, SwypeImage::kWidth, SwypeImage::kChannels});
  std::copy(image.data().begin(), image.data().end(), out.mutable_data());
  return out;
}

py::dict ResultDict(const DetectionResult& r) {
  py::dict d;
  d["query"] = r.query;
  d["flagged"] = r.flagged;
  d["match"] = r.match;
  d["distance"] = r.distance;
  py::list ups;
  for (const auto& n : r.runner_ups) ups.append(py::make_tuple(n.domain, n.distance));
  d["runner_ups"] = ups;
  return d;
}

}  // namespace
}  // namespace typotrace

PYBIND11_MODULE(_core, m) {
  using namespace typotrace;
  m.doc() = "Keyboard-trace typo-squatting detection";
  m.attr("__version__") = TYPOTRACE_VERSION;

  static PyObject* error_type =
      py::exception<Error>(m, "TypotraceError", PyExc_ValueError).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(ErrorCodeName(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def("key_position", [](char c) {
    const GridCoord g = KeyPosition(c);
    return py::make_tuple(g.row, g.col);
  }, py::arg("char"), "Grid (row, col) of a key.");
  m.def("keyboard_distance", &KeyboardDistance, py::arg("a"), py::arg("b"),
        "Chebyshev distance between two keys.");
  m.def("osa_distance", &OsaDistance, py::arg("a"), py::arg("b"));

  m.def("render", [](const std::string& domain, std::uint64_t seed) {
    return ToArray(RenderCanonical(domain, RenderConfig{}, seed));
  }, py::arg("domain"), py::arg("seed") = 0,
     "Render a domain to a (40, 100, 3) float32 array.");
  m.def("export_png", [](const std::string& domain, const std::filesystem::path& path,
                         std::uint64_t seed) {
    ExportPng(RenderCanonical(domain, RenderConfig{}, seed), path);
  }, py::arg("domain"), py::arg("path"), py::arg("seed") = 0);

  m.def("fuzz_domain", [](const std::string& domain, const std::string& rules) {
    std::vector<std::string> out;
    for (const auto& p : FuzzDomain({1, domain}, FuzzRules::Parse(rules))) {
      out.push_back(p.typo_domain);
    }
    return out;
  }, py::arg("domain"), py::arg("rules") = "all");

  m.def("generate_test_set", [](const std::vector<std::string>& domains) {
    std::vector<DomainRecord> records;
    for (std::size_t i = 0; i < domains.size(); ++i) {
      records.push_back({static_cast<int>(i + 1), domains[i]});
    }
    py::list out;
    for (const auto& c : GenerateTestSet(records)) {
      out.append(py::make_tuple(c.candidate, c.source, std::string(TestLabelName(c.label)),
                                std::string(EditActionName(c.action))));
    }
    return out;
  }, py::arg("domains"), "Labelled (candidate, source, label, action) tuples.");

  m.def("macro_f1", &MacroF1, py::arg("predictions"), py::arg("labels"));

  py::class_<EncoderWeights>(m, "Weights")
      .def_static("load", &LoadWeights, py::arg("path"))
      .def_static("random", [](std::uint64_t seed) {
        return InitWeights<float>(EncoderConfig::Standard(), seed);
      }, py::arg("seed") = 0)
      .def("save", [](const EncoderWeights& w, const std::filesystem::path& path) {
        SaveWeights(w, path);
      }, py::arg("path"))
      .def_property_readonly("fingerprint", &WeightsFingerprint)
      .def_property_readonly("embedding_dim",
                             [](const EncoderWeights& w) { return w.config.embedding_dim(); })
      .def("embed", [](const EncoderWeights& w, const std::string& domain) {
        const Embedding e = Forward(RenderCanonical(domain, RenderConfig{}, 0), w);
        return py::array_t<float>(static_cast<py::ssize_t>(e.size()), e.data());
      }, py::arg("domain"));

  py::class_<Detector>(m, "Detector")
      .def(py::init([](const EncoderWeights& w, const std::vector<std::string>& checklist,
                       double threshold) {
        return Detector(w, BuildIndex(checklist, w, threshold));
      }), py::arg("weights"), py::arg("checklist"), py::arg("threshold") = kDefaultThreshold)
      .def_static("load", [](const std::filesystem::path& model,
                             const std::filesystem::path& index) {
        return Detector(LoadWeights(model), LoadIndex(index));
      }, py::arg("model"), py::arg("index"))
      .def("query", [](const Detector& d, const std::string& domain) {
        return ResultDict(d.Query(domain));
      }, py::arg("domain"))
      .def("save_index", [](const Detector& d, const std::filesystem::path& path) {
        SaveIndex(d.index(), path);
      }, py::arg("path"))
      .def_property_readonly("domains", [](const Detector& d) { return d.index().domains; });
}
