# Copyright 2026 the stepbmc authors
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
"""Bounded model checking for 1-safe place/transition nets."""

import json as _json

from ._core import (  # noqa: F401
    BmcDomainError,
    BmcVerificationError,
    NetParseError,
    check as _check_raw,
    generate_dp,
)

__all__ = [
    "check",
    "generate_dp",
    "NetParseError",
    "BmcDomainError",
    "BmcVerificationError",
]


def check(net_text, mode, spec="", **kwargs):
    """Run a bounded check and return the report as a dict.

    mode is "deadlock", "reach" or "ltl"; spec is the reach condition or the
    temporal formula (ignored for deadlock). Keyword arguments mirror the CLI:
    semantics, bounds (pair), init, solver_budget, oracle_budget, staged_atoms.
    """
    return _json.loads(_check_raw(net_text, mode, spec, **kwargs))
