# Copyright 2026 The Typotrace Authors
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
"""Smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import typotrace


def test_keyboard():
    assert typotrace.key_position("q") == (1, 0)
    assert typotrace.keyboard_distance("o", "0") == 1
    assert typotrace.keyboard_distance("p", "c") == 7


def test_osa():
    assert typotrace.osa_distance("facebook.com", "fapebook.com") == 1
    assert typotrace.osa_distance("ca", "abc") == 3


def test_render_shape_and_determinism():
    a = typotrace.render("facebook.com", seed=7)
    b = typotrace.render("facebook.com", seed=7)
    assert a.shape == (40, 100, 3)
    assert a.dtype == np.float32
    assert np.array_equal(a, b)
    dot = np.argwhere(typotrace.render("q").any(axis=2))
    assert len(dot) == 1
    assert 10 <= dot[0][0] <= 11 and 0 <= dot[0][1] <= 1


def test_errors_carry_codes():
    with pytest.raises(typotrace.TypotraceError) as info:
        typotrace.render("bad_domain.com")
    assert info.value.code == "UnsupportedCharacter"


def test_fuzz_and_test_set():
    typos = typotrace.fuzz_domain("abc.com", "omission")
    assert sorted(typos) == ["ab.com", "ac.com", "bc.com"]
    cases = typotrace.generate_test_set(["google.com", "facebook.com"])
    labels = {c[0]: c[2] for c in cases}
    assert labels["gogle.com"] == "typo"
    assert labels["fapebook.com"] == "benign"


def test_macro_f1_closed_form():
    labels = [True] * 455 + [False] * 545
    p = 0.455
    assert math.isclose(typotrace.macro_f1([True] * 1000, labels), p / (1 + p))


def test_detector_round_trip(tmp_path):
    weights = typotrace.Weights.random(seed=3)
    emb = weights.embed("google.com")
    assert emb.shape == (256,)
    assert abs(float(np.linalg.norm(emb)) - 1.0) < 1e-5
    checklist = ["google.com", "facebook.com", "amazon.com"]
    detector = typotrace.Detector(weights, checklist)
    hit = detector.query("google.com")
    assert hit["match"] == "google.com"
    assert hit["flagged"]
    assert hit["distance"] < 1e-4
    weights.save(tmp_path / "m.tsw")
    detector.save_index(tmp_path / "i.tsi")
    again = typotrace.Detector.load(tmp_path / "m.tsw", tmp_path / "i.tsi")
    assert again.query("gogle.com")["match"] == detector.query("gogle.com")["match"]
    assert again.domains == checklist
