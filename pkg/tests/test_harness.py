import json
from fractions import Fraction

import pytest

from unitfrac.harness import (
    ClassResult,
    Coloring,
    ExperimentReport,
    InfeasibleColoring,
    check_coloring,
    greedy_limit,
    load_config,
    make_coloring,
    parse_config,
    save_report,
    sweep_threshold,
)


def test_round_robin_and_random_cover_range():
    c = make_coloring(10, 3, "round_robin")
    assert c.assignment[2] == 1 and c.assignment[5] == 1 and c.assignment[4] == 3
    r1 = make_coloring(30, 3, "random", seed=4)
    r2 = make_coloring(30, 3, "random", seed=4)
    assert r1.assignment == r2.assignment
    assert set(r1.assignment) == set(range(2, 31))


def test_from_file_list_and_dict():
    a = make_coloring(4, 2, "from_file", assignment=[1, 2, 1])
    b = make_coloring(4, 2, "from_file", assignment={"2": 1, "3": 2, "4": 1})
    assert a.assignment == b.assignment == {2: 1, 3: 2, 4: 1}
    with pytest.raises(ValueError):
        make_coloring(4, 2, "from_file", assignment=[1, 2])
    with pytest.raises(ValueError):
        make_coloring(4, 2, "from_file", assignment=[1, 3, 1])
    with pytest.raises(ValueError):
        make_coloring(4, 2, "nope")


def test_greedy_keeps_classes_below_one():
    for r in (1, 2, 3):
        M = greedy_limit(r)
        c = make_coloring(M, r, "greedy_adversarial")
        for vals in c.classes().values():
            assert sum(Fraction(1, v) for v in vals) < 1
        with pytest.raises(InfeasibleColoring) as err:
            make_coloring(M + 1, r, "greedy_adversarial")
        assert err.value.first_unplaceable == M + 1


def test_greedy_limits():
    assert [greedy_limit(r) for r in (1, 2, 3)] == [3, 10, 29]


@pytest.mark.parametrize("M, verdict", [(5, False), (6, True)])
def test_single_class(M, verdict):
    rep = check_coloring(make_coloring(M, 1, "round_robin"))
    assert rep.verdict is verdict and rep.exact
    if verdict:
        assert rep.classes[0].witness == [2, 3, 6]


def test_report_reproducible_without_meta():
    c = make_coloring(24, 2, "random", seed=1)
    a, b = check_coloring(c), check_coloring(c)
    assert a.to_json(with_meta=False) == b.to_json(with_meta=False)
    d = json.loads(a.to_json())
    assert set(d) == {"inputs", "verdict", "exact", "classes", "meta"}


def test_report_rejects_inconsistent_verdict():
    cls = [ClassResult(1, 2, Fraction(5, 6), False, True)]
    with pytest.raises(AssertionError):
        ExperimentReport({}, cls, True, True)
    bad = [ClassResult(1, 2, Fraction(5, 6), True, True, witness=[2, 3])]
    with pytest.raises(AssertionError):
        ExperimentReport({}, bad, True, True)


def test_fail_fast_marks_rest_undecided():
    # class 1 = {2, 3, 4, 6, 12} (sum 4/3) is searched first and succeeds;
    # class 2 holds the rest of [2, 20] (sum about 1.26) and is skipped
    asg = {n: 1 if n in (2, 3, 4, 6, 12) else 2 for n in range(2, 21)}
    rep = check_coloring(make_coloring(20, 2, "from_file", assignment=asg), fail_fast=True)
    by = {r.label: r for r in rep.classes}
    assert rep.verdict and rep.exact
    assert by[1].found and not by[2].decided


def test_budget_exhaustion_is_inexact():
    c = make_coloring(60, 1, "round_robin")
    rep = check_coloring(c, node_budget=2)
    assert not rep.verdict and not rep.exact


def test_sweep_r1(tmp_path):
    rep = sweep_threshold(1, ["round_robin", "greedy_adversarial"], 2, 8, report_dir=tmp_path)
    assert rep.thresholds["round_robin"] == 6
    assert rep.thresholds["greedy_adversarial"] is None
    assert any(r.get("infeasible") == 4 for r in rep.outcomes["greedy_adversarial"])
    assert (tmp_path / "round_robin_r1_M6_sNone.json").exists()
    json.loads(rep.to_json())


def test_save_report(tmp_path):
    rep = check_coloring(make_coloring(6, 1, "round_robin"))
    path = save_report(rep, tmp_path / "x" / "r.json")
    assert json.loads(path.read_text())["verdict"] is True


def test_parse_config(tmp_path):
    cfg = parse_config("N = 100  # anchor\ntheta=0.2\nnu = 1/10\n\n")
    assert cfg == {"N": 100, "theta": 0.2, "nu": "1/10"}
    with pytest.raises(ValueError):
        parse_config("oops")
    f = tmp_path / "p.cfg"
    f.write_text("N=7\n")
    assert load_config(f) == {"N": 7}


def test_coloring_validation():
    with pytest.raises(ValueError):
        Coloring(4, 2, {2: 1, 3: 1}, "from_file")
