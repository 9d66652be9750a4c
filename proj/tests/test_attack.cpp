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

#include "vlalab/attack/losses.hpp"

using namespace vlalab;

TEST_CASE("uada label picks the farthest extreme, ties to the minimum") {
  CHECK(attack::uada_label(0.3f, -1.0f, 1.0f) == -1.0f);
  CHECK(attack::uada_label(-0.5f, -1.0f, 1.0f) == 1.0f);
  CHECK(attack::uada_label(0.0f, -1.0f, 1.0f) == -1.0f);
}
