# Copyright 2026 The vlalab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import vlalab


def test_version():
    assert vlalab.__version__ == "0.1.0"


def test_attack_success_rate_reference_values():
    assert vlalab.attack_success_rate(0.0, 96.7, 95.0, 96.7) == pytest.approx(98.2, abs=0.1)
    assert vlalab.attack_success_rate(0.0, 95.0, 96.7, 95.0) == pytest.approx(100.0, abs=0.1)
    assert vlalab.attack_success_rate(5.0, 95.0, 100.0, 98.3) == pytest.approx(96.4, abs=0.1)


def test_attack_success_rate_zero_baseline_raises():
    with pytest.raises(vlalab.VlalabNumericError):
        vlalab.attack_success_rate(0.0, 0.0, 50.0, 50.0)


def test_uada_label_picks_far_extreme():
    assert vlalab.uada_label(0.3, -1.0, 1.0) == -1.0
    assert vlalab.uada_label(-0.5, -1.0, 1.0) == 1.0
    assert vlalab.uada_label(0.0, -1.0, 1.0) == -1.0  # tie goes to the minimum


def test_tokenizer_round_trip_error_bound():
    bins = 32
    for a in [-1.0, -0.73, 0.0, 0.4999, 1.0]:
        t = vlalab.tokenize_value(a, bins)
        back = vlalab.detokenize_value(t, bins)
        assert abs(back - a) <= 1.0 / bins + 1e-6


def test_jpeg_roundtrip_stays_in_range():
    image = [((i * 37) % 256) / 255.0 for i in range(32 * 32 * 3)]
    out = vlalab.jpeg_roundtrip(image, 50)
    assert len(out) == len(image)
    assert all(0.0 <= v <= 1.0 for v in out)
    assert vlalab.psnr(image, out) > 20.0


def test_gaussian_perturb_reproducible():
    image = [0.5] * (32 * 32 * 3)
    a = vlalab.gaussian_perturb(image, 0.02, 7)
    b = vlalab.gaussian_perturb(image, 0.02, 7)
    assert a == b
    assert a != image


def test_patch_trigger_changes_pixels():
    image = [0.5] * (32 * 32 * 3)
    out = vlalab.apply_patch_trigger(image, 0.05, "center")
    changed = sum(1 for x, y in zip(image, out) if x != y)
    assert changed > 0
    assert all(0.0 <= v <= 1.0 for v in out)


def test_expert_rollout_succeeds():
    for suite in ["spatial", "object", "goal", "long"]:
        rec = vlalab.expert_rollout(suite, 123)
        assert rec["success"], f"expert failed on {suite}"
        assert 0 < rec["steps"] <= 40


def test_asr_is_clamped():
    assert 0.0 <= vlalab.attack_success_rate(99.0, 95.0, 95.0, 95.0) <= 100.0
    assert math.isclose(vlalab.attack_success_rate(0.0, 95.0, 96.7, 95.0), 100.0, abs_tol=0.1)
