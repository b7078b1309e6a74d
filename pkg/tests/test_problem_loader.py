"""
Problem files: schema validation, error reporting and command-line overrides
"""
import json
from fractions import Fraction

import pytest

from errors import InputError, PriorNotRepresentableError, ProblemFileError
from utils.problem_loader import DEFAULT_DENOMINATOR, load_problem, load_problem_file

LINEAR = {"kind": "piecewise", "pieces": [{"interval": [0, 1], "coefficients": [0, 1]}]}


def write(tmp_path, body, name="problem.json"):
    path = tmp_path / name
    path.write_text(body if isinstance(body, str) else json.dumps(body), encoding="utf-8")
    return path


def minimal(**overrides):
    body = {
        "prior": 0.5,
        "sender_utility": LINEAR,
        "mediator_utilities": [LINEAR],
        "grid": {"points": [0, 0.5, 1]},
    }
    body.update(overrides)
    return body


@pytest.mark.parametrize("name", [
    "bump_one_mediator.json", "full_revelation_two_mediators.json", "three_signals_two_mediators.json", "dummy_mediator.json",
])
def test_bundled_problems_load(problems_dir, name):
    problem = load_problem(problems_dir / name)
    assert problem.n >= 1
    assert problem.description


def test_three_signals_rational(three_signals):
    assert three_signals.n == 2
    assert three_signals.rational
    assert three_signals.prior.belief.q == Fraction(1, 4)
    assert three_signals.denominator == 6


def test_overrides(problems_dir):
    problem = load_problem(problems_dir / "three_signals_two_mediators.json", eps=0.1, grid_step=0.25, denominator=8)
    assert problem.eps == pytest.approx(0.1)
    assert problem.grid.size == 5
    assert problem.denominator == 8


def test_default_denominator(tmp_path):
    assert load_problem(write(tmp_path, minimal())).denominator == DEFAULT_DENOMINATOR


def test_missing_file(tmp_path):
    with pytest.raises(ProblemFileError, match="not found"):
        load_problem_file(tmp_path / "nope.json")


def test_bad_json_reports_position(tmp_path):
    path = write(tmp_path, '{\n  "prior": 0.5,\n  oops\n}')
    with pytest.raises(ProblemFileError) as info:
        load_problem_file(path)
    assert info.value.detail["line"] == 3
    assert ":3:" in info.value.message


def test_unknown_field(tmp_path):
    with pytest.raises(ProblemFileError) as info:
        load_problem_file(write(tmp_path, minimal(priors=0.5)))
    assert any(issue.startswith("priors") for issue in info.value.detail["issues"])


def test_sampled_length_mismatch(tmp_path):
    sampled = {"kind": "sampled", "points": [0, 1], "values": [1]}
    with pytest.raises(ProblemFileError, match="sender_utility"):
        load_problem_file(write(tmp_path, minimal(sender_utility=sampled)))


def test_grid_needs_one_form(tmp_path):
    with pytest.raises(ProblemFileError):
        load_problem_file(write(tmp_path, minimal(grid={"step": 0.5, "points": [0, 1]})))


def test_prior_off_grid(tmp_path):
    path = write(tmp_path, minimal(prior=0.3, grid={"points": [0, 0.25, 0.5, 1]}))
    with pytest.raises(PriorNotRepresentableError):
        load_problem(path)


def test_cosine_needs_float_mode(tmp_path):
    wavy = {"kind": "piecewise", "pieces": [
        {"interval": [0, 1], "coefficients": [0], "cosine": {"amplitude": 1, "frequency": 3.14}}
    ]}
    path = write(tmp_path, minimal(sender_utility=wavy))
    assert not load_problem(path).sender.exact
    with pytest.raises(InputError, match="cosine"):
        load_problem(path, rational=True)


def test_exact_scalars(tmp_path):
    path = write(tmp_path, minimal(prior="1/3", grid={"points": [0, "1/3", 1]}))
    problem = load_problem(path, rational=True, denominator=3)
    assert problem.prior.belief.q == Fraction(1, 3)
