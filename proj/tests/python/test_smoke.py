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
"""End-to-end smoke tests for the python module."""

import pytest

import stepbmc

RUNNING = """
place p1
place p2
place p3
place p4
place p5
trans t1
trans t2
trans t3
trans t4
trans t5
arc p3 t1
arc t1 p1
arc p1 t2
arc p2 t2
arc t2 p3
arc t2 p4
arc p2 t3
arc t3 p4
arc p4 t4
arc t4 p2
arc p2 t5
arc t5 p5
init p1
init p2
"""


def test_philosopher_deadlock():
    net = stepbmc.generate_dp(2)
    report = stepbmc.check(net, "deadlock", bounds=(1, 2))
    assert report["verdict"] == "COUNTEREXAMPLE"
    assert report["bound"] == 1
    assert report["shape"] == "deadlock"
    assert report["verification"]["replay_ok"] is True
    assert report["verification"]["oracle_semantics_ok"] is True
    # Alternating marking/step lists: 2 markings and 1 step at bound 1.
    assert len(report["execution"]) == 3
    assert report["execution"][1] == ["takeL_0", "takeL_1"]


def test_loop_counterexample():
    report = stepbmc.check(RUNNING, "ltl", "<> p5", bounds=(1, 4))
    assert report["verdict"] == "COUNTEREXAMPLE"
    assert report["bound"] == 2
    assert report["shape"] == "loop"
    assert report["loop"] == 0


def test_no_counterexample():
    report = stepbmc.check(RUNNING, "reach", "p2 & p5", bounds=(0, 6))
    assert report["verdict"] == "NO_CEX_WITHIN_BOUND"
    assert report["bound"] is None
    assert report["execution"] is None


def test_error_mapping():
    with pytest.raises(stepbmc.NetParseError):
        stepbmc.check("place p\nplace p\n", "deadlock")
    with pytest.raises(stepbmc.BmcDomainError):
        stepbmc.check(RUNNING, "nonsense")
    with pytest.raises(stepbmc.BmcDomainError):
        stepbmc.check(RUNNING, "ltl", "<> p5", bounds=(3, 1))
