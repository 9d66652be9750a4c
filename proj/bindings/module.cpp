/*
 * Copyright 2026 The vlalab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vlalab/attack/losses.hpp"
#include "vlalab/attack/trigger.hpp"
#include "vlalab/defense/codecs.hpp"
#include "vlalab/env/rollout.hpp"
#include "vlalab/env/types.hpp"
#include "vlalab/errors.hpp"
#include "vlalab/eval/metrics.hpp"
#include "vlalab/model/tokenizer.hpp"

namespace py = pybind11;

namespace {

std::vector<float> py_jpeg_roundtrip(const std::vector<float>& image, int quality) {
  vlalab::defense::CompressionConfig cfg;
  cfg.quality = quality;
  return vlalab::defense::jpeg_roundtrip(image, cfg);
}

std::vector<float> py_gaussian_perturb(const std::vector<float>& image, float level,
                                       std::uint64_t seed) {
  vlalab::defense::NoiseConfig cfg;
  cfg.level = level;
  cfg.seed = seed;
  return vlalab::defense::gaussian_perturb(image, cfg);
}

std::vector<float> py_apply_patch_trigger(const std::vector<float>& image,
                                          float size_fraction,
                                          const std::string& anchor) {
  const auto spec = vlalab::attack::make_patch_trigger(
      size_fraction, vlalab::attack::anchor_from_name(anchor));
  std::vector<float> out = image;
  vlalab::attack::apply_trigger_image(out, spec);
  return out;
}

py::dict py_expert_rollout(const std::string& suite, std::uint64_t seed) {
  const auto rec =
      vlalab::env::rollout_expert(vlalab::env::suite_from_name(suite), seed);
  py::dict d;
  d["suite"] = suite;
  d["seed"] = seed;
  d["success"] = rec.success;
  d["steps"] = rec.actions.size();
  return d;
}

}  // namespace

PYBIND11_MODULE(_vlalab, m) {
  m.doc() = "Toy vision-language-action backdoor laboratory (core operations)";
  m.attr("__version__") = vlalab::kVersion;

  py::register_exception<vlalab::ConfigError>(m, "VlalabConfigError");
  py::register_exception<vlalab::NumericError>(m, "VlalabNumericError");
  py::register_exception<vlalab::MissingArtifact>(m, "VlalabMissingArtifact");

  m.def("attack_success_rate", &vlalab::eval::attack_success_rate, py::arg("sr_w"),
        py::arg("srhat_w"), py::arg("sr_wo"), py::arg("srhat_wo"),
        "Composite attack success rate in [0, 100]");
  m.def("uada_label", &vlalab::attack::uada_label, py::arg("y"), py::arg("y_min"),
        py::arg("y_max"), "Farthest action extreme from the ground truth");
  m.def("tokenize_value", &vlalab::model::tokenize_value, py::arg("a"),
        py::arg("bins"), "Uniform-bin action discretization over [-1, 1]");
  m.def("detokenize_value", &vlalab::model::detokenize_value, py::arg("token"),
        py::arg("bins"), "Bin center of an action token");
  m.def("jpeg_roundtrip", &py_jpeg_roundtrip, py::arg("image"), py::arg("quality"),
        "Block-DCT compression round trip of a 32x32x3 image in [0, 1]");
  m.def("gaussian_perturb", &py_gaussian_perturb, py::arg("image"), py::arg("level"),
        py::arg("seed"), "Seeded Gaussian perturbation, clamped to [0, 1]");
  m.def("psnr", &vlalab::defense::psnr, py::arg("a"), py::arg("b"),
        "Peak signal-to-noise ratio in dB (peak 1.0)");
  m.def("apply_patch_trigger", &py_apply_patch_trigger, py::arg("image"),
        py::arg("size_fraction") = 0.05f, py::arg("anchor") = std::string("center"),
        "Composites the fixed patch trigger onto an image");
  m.def("expert_rollout", &py_expert_rollout, py::arg("suite"), py::arg("seed"),
        "Runs the scripted expert for one episode");
}
