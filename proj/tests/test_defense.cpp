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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vlalab/defense/codecs.hpp"
#include "vlalab/env/types.hpp"

using namespace vlalab;

TEST_CASE("high-quality compression keeps images close") {
  std::vector<float> img(env::kImagePixels, 0.5f);
  for (std::size_t i = 0; i < img.size(); i += 7) img[i] = 0.9f;
  defense::CompressionConfig cfg;
  cfg.quality = 100;
  auto out = defense::jpeg_roundtrip(img, cfg);
  CHECK(defense::psnr(img, out) >= 40.0);
}
