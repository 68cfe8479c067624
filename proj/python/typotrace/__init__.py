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
"""Typo-squatting detection from keyboard-trace images."""

from ._core import (
    Detector,
    TypotraceError,
    Weights,
    __version__,
    export_png,
    fuzz_domain,
    generate_test_set,
    key_position,
    keyboard_distance,
    macro_f1,
    osa_distance,
    render,
)

__all__ = [
    "Detector",
    "TypotraceError",
    "Weights",
    "__version__",
    "export_png",
    "fuzz_domain",
    "generate_test_set",
    "key_position",
    "keyboard_distance",
    "macro_f1",
    "osa_distance",
    "render",
]
