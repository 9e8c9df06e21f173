# Copyright 2026 The fvq Authors
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

"""Vector-quantization compression of fronthaul IQ samples.

Profiles are plain dicts with the same layout as the JSON profile files.
"""

import json

import numpy as np

from . import _fvq
from ._fvq import ContractError, FormatError, expand, theorem_cr, used_subcarrier_bins

__all__ = [
    "ContractError",
    "FormatError",
    "compress",
    "decompress",
    "evm_fd",
    "evm_td",
    "expand",
    "generate",
    "load_profile",
    "profile_digest",
    "theorem_cr",
    "train",
    "used_subcarrier_bins",
]


def _dump(section):
    return section if isinstance(section, str) else json.dumps(section or {})


def load_profile(path):
    """Read a profile file into a dict with compression/waveform/training sections."""
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def generate(waveform=None, **overrides):
    """Generate a complex baseband stream; keyword overrides patch the waveform section."""
    section = dict(waveform or {})
    section.update(overrides)
    return _fvq.generate(_dump(section))


def profile_digest(compression):
    return _fvq.profile_digest(_dump(compression))


def train(samples, compression, training=None):
    """Train the profile's quantizer on samples; returns the codebook container bytes."""
    return _fvq.train(np.asarray(samples, dtype=np.complex128), _dump(compression), _dump(training))


def compress(samples, compression, model=b""):
    """Returns (bitstream bytes, stage statistics dict)."""
    return _fvq.compress(np.asarray(samples, dtype=np.complex128), _dump(compression), model)


def decompress(bitstream, compression, model=b""):
    return _fvq.decompress(bitstream, _dump(compression), model)


def evm_td(reference, test):
    return _fvq.evm_td(np.asarray(reference, dtype=np.complex128), np.asarray(test, dtype=np.complex128))


def evm_fd(reference, test, bins, fft_size, cp_length=0):
    return _fvq.evm_fd(
        np.asarray(reference, dtype=np.complex128),
        np.asarray(test, dtype=np.complex128),
        list(bins),
        fft_size,
        cp_length,
    )
