import json
import os
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subtropical.cli import (
    ERROR,
    EXIT_ERROR,
    EXIT_FAILED,
    EXIT_OK,
    InstanceReport,
    RunConfig,
    UsageError,
    apply_transforms,
    batch_run,
    format_batch,
    main,
    solve_file,
    solve_polynomial,
    summarize,
)
from subtropical.parser import parse_polynomial
from subtropical.poly import MultiPoly, UniPoly, evaluate, interval_evaluate
from subtropical.realroot import RealAlgebraicNumber, refine

from oracles import random_multipoly

ROOT = Path(__file__).resolve().parent.parent
SAMPLES = ROOT / "data" / "sample_instances"
WORKED = "-2*x1^5+x1^2*x2-3*x1^2-x2^3+2*x2^2"

_RAT = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_POINT = {"type": "string", "pattern": r"^-?(\d+(/\d+)?|2\^-?\d+)$"}
SCHEMA = {
    "type": "object",
    "required": ["name", "status", "dimension", "num_terms", "max_degree", "witness", "zero", "gbar", "stats"],
    "properties": {
        "name": {"type": "string"},
        "status": {"enum": ["zero", "all_ones", "definite", "positive_value", "failed", "error"]},
        "dimension": {"type": "integer", "minimum": 0},
        "num_terms": {"type": "integer", "minimum": 0},
        "max_degree": {"type": "integer", "minimum": 0},
        "witness": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["n", "t", "mu", "point"],
                    "additionalProperties": False,
                    "properties": {
                        "n": {"type": "array", "items": {"type": "integer"}},
                        "t": {"oneOf": [{"type": "null"}, _RAT]},
                        "mu": {"type": ["integer", "null"]},
                        "point": {"oneOf": [{"type": "null"}, {"type": "array", "items": _POINT}]},
                    },
                },
            ]
        },
        "zero": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["defining", "interval", "exact", "approx"],
                        "additionalProperties": False,
                        "properties": {
                            "defining": {"type": "array", "items": _RAT, "minItems": 2},
                            "interval": {"oneOf": [{"type": "null"},
                                                   {"type": "array", "items": _RAT, "minItems": 2, "maxItems": 2}]},
                            "exact": {"oneOf": [{"type": "null"}, _RAT]},
                            "approx": {"type": "string", "pattern": r"^-?\d+(\.\d+)?$"},
                        },
                    },
                },
            ]
        },
        "gbar": {"oneOf": [{"type": "null"}, {"type": "array", "items": _RAT}]},
        "stats": {
            "type": "object",
            "required": ["lp_solves", "candidates_tried", "doubling_steps", "time_ms"],
            "properties": {k: {"type": "integer", "minimum": 0}
                           for k in ("lp_solves", "candidates_tried", "doubling_steps", "time_ms")},
        },
    },
}

# one file per status, with the expected exit code
CASES = {
    "zero": (WORKED, {}, EXIT_OK),
    "all_ones": ("x - 1", {}, EXIT_OK),
    "definite": ("x^2 + 1", {}, EXIT_OK),
    "positive_value": (WORKED, {"existence_only": True}, EXIT_OK),
    "failed": ("1 - x - x^2", {}, EXIT_FAILED),
    "error": ("2*+x", {}, EXIT_ERROR),
}


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def zero_coords(payload):
    """Rebuild the reported zero from its printed form alone."""
    out = []
    for z in payload["zero"]:
        if z["exact"] is not None:
            out.append(RealAlgebraicNumber.rational(Fraction(z["exact"])))
        else:
            lo, hi = map(Fraction, z["interval"])
            out.append(RealAlgebraicNumber(UniPoly(int(c) for c in z["defining"]), (lo, hi)))
    return out


def encloses_zero(f, coords, k):
    box = [refine(z, Fraction(1, 2**k)).bounds() for z in coords]
    lo, hi = interval_evaluate(f, box)
    return lo <= 0 <= hi


@pytest.mark.parametrize("status", list(CASES))
def test_json_schema_and_exit_codes(tmp_path, capsys, status):
    text, extra, code = CASES[status]
    path = write(tmp_path, f"{status}.txt", text)
    report, rendered = solve_file(path, RunConfig(output="json", **extra))
    payload = json.loads(rendered)
    jsonschema.validate(payload, SCHEMA)
    assert payload["status"] == report.status == status
    args = ["solve", str(path), "--json"] + (["--existence-only"] if extra else [])
    assert main(args) == code
    assert json.loads(capsys.readouterr().out)["status"] == status


def test_worked_example_json(tmp_path):
    _, rendered = solve_file(write(tmp_path, "w.txt", WORKED), RunConfig(output="json"))
    payload = json.loads(rendered)
    assert payload["dimension"] == 2 and payload["num_terms"] == 5 and payload["max_degree"] == 5
    assert payload["witness"]["mu"] is None
    gbar = [int(c) for c in payload["gbar"]]
    assert len(gbar) == 6
    f = parse_polynomial(WORKED)
    coords = zero_coords(payload)
    for k in (10, 20, 30):
        assert encloses_zero(f, coords, k)
    for z, c in zip(payload["zero"], coords):
        lo, hi = c.bounds()
        assert abs(Fraction(z["approx"]) - (lo + hi) / 2) <= Fraction(1, 10**6)


def test_text_output(tmp_path, capsys):
    path = write(tmp_path, "w.txt", WORKED)
    assert main(["solve", str(path), "--approx-digits", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("w.txt: zero")
    assert "x1 ~ " in out and "x2 ~ " in out and "gbar" in out


def test_missing_file_and_bad_usage(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "nope.txt")]) == EXIT_ERROR
    assert main(["solve"]) == EXIT_ERROR
    assert main(["solve", str(write(tmp_path, "a.txt", "x")), "--orthant", "+-"]) == EXIT_ERROR
    assert main(["solve", str(write(tmp_path, "b.txt", "x")), "--lower", "y=1"]) == EXIT_ERROR
    assert main(["solve", str(write(tmp_path, "c.txt", "x")), "--orthant", "x"]) == EXIT_ERROR
    assert main(["batch", str(tmp_path / "missing")]) == EXIT_ERROR
    assert main(["batch", str(tmp_path), "--jobs", "0"]) == EXIT_ERROR
    capsys.readouterr()


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(mode="sideways")
    with pytest.raises(UsageError):
        RunConfig(orthant=(1, 0))
    with pytest.raises(UsageError):
        RunConfig(range_transforms=(("x", "middle", Fraction(1)),))
    with pytest.raises(UsageError):
        RunConfig(range_transforms=(("x", "lower", Fraction(1)), ("x", "upper", Fraction(2))))
    with pytest.raises(ValueError):
        InstanceReport("x", "maybe")


# ---------------------------------------------------------------------------
# transformations


def test_orthant_search_finds_negative_zero(tmp_path):
    # x + y + 3 has no zero with x, y > 0
    path = write(tmp_path, "o.txt", "x + y + 3")
    assert solve_file(path, RunConfig())[0].status == "definite"
    report, rendered = solve_file(path, RunConfig(orthant=(-1, -1), output="json"))
    payload = json.loads(rendered)
    assert report.status == "zero"
    coords = zero_coords(payload)
    assert all(z.bounds()[1] < 0 for z in coords)
    assert encloses_zero(parse_polynomial("x + y + 3"), coords, 30)


def test_range_bounds(tmp_path, capsys):
    # x^2 - 2 below 0: the root is -sqrt 2
    path = write(tmp_path, "r.txt", "x^2 - 2")
    assert main(["solve", str(path), "--json", "--upper", "x=0"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    (z,) = zero_coords(payload)
    lo, hi = refine(z, Fraction(1, 10**9)).bounds()
    assert hi < -1 and lo * lo >= 2 >= hi * hi
    # a bound is read in the input coordinates even when the orthant flips x
    assert main(["solve", str(path), "--json", "--orthant", "-", "--lower", "x=-1"]) == EXIT_OK
    (z,) = zero_coords(json.loads(capsys.readouterr().out))
    lo, hi = refine(z, Fraction(1, 10**9)).bounds()
    assert lo > 1 and lo * lo <= 2 <= hi * hi
    assert main(["solve", str(path), "--lower", "x=1", "--upper", "x=3/2"]) == EXIT_ERROR
    capsys.readouterr()


def test_difference_transform_run(tmp_path):
    path = write(tmp_path, "d.txt", "x + 5")
    report, rendered = solve_file(path, RunConfig(difference=True, output="json"))
    assert report.status == "zero"
    (z,) = zero_coords(json.loads(rendered))
    lo, hi = refine(z, Fraction(1, 2**20)).bounds()
    assert lo <= -5 <= hi


def test_all_ones_maps_back(tmp_path):
    # x - 2 after x = 1 + x': vanishes at x' = 1, i.e. x = 2
    report, rendered = solve_file(write(tmp_path, "a.txt", "x - 2"),
                                  RunConfig(range_transforms=(("x", "lower", Fraction(1)),), output="json"))
    assert report.status == "all_ones"
    assert json.loads(rendered)["zero"][0]["exact"] == "2"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_transformed_zeros_satisfy_original(seed):
    rng = random.Random(seed)
    f = random_multipoly(rng, max_dim=3, max_terms=8, max_deg=4, max_coeff=20)
    if f.dimension == 0 or f.is_zero():
        return
    used = [v for i, v in enumerate(f.variables) if any(p[i] for p in f.terms)]
    ranges = []
    for v in used:
        if rng.random() < 0.4:
            ranges.append((v, rng.choice(["lower", "upper"]), Fraction(rng.randint(-6, 6), rng.randint(1, 3))))
    config = RunConfig(
        mode=rng.choice(["positive", "general"]),
        orthant=tuple(rng.choice([1, -1]) for _ in f.variables) if rng.random() < 0.5 else None,
        range_transforms=tuple(ranges),
        difference=rng.random() < 0.2,
        output="json",
    )
    report, payload = solve_polynomial(f, config)
    jsonschema.validate(payload, SCHEMA)
    if payload["zero"] is None:
        return
    coords = zero_coords(payload)
    for k in (10, 20, 30):
        assert encloses_zero(f, coords, k)
    if all(z.is_exact for z in coords):
        assert evaluate(f, [z.exact for z in coords]) == 0
    if not config.difference:
        # general mode may leave the half line in the negated coordinate
        mu = payload["witness"]["mu"] if payload["witness"] else None
        for v, kind, q in ranges:
            if mu == f.variables.index(v) + 1:
                continue
            lo, hi = refine(coords[f.variables.index(v)], Fraction(1, 2**30)).bounds()
            assert lo >= q if kind == "lower" else hi <= q


def test_apply_transforms_identity():
    f = parse_polynomial(WORKED)
    g, amap = apply_transforms(f, RunConfig())
    assert g == f and amap.apply([Fraction(3), Fraction(5)]) == [3, 5]


# ---------------------------------------------------------------------------
# batch


def test_batch_three_examples(tmp_path):
    write(tmp_path, "a.txt", "x^2 + 1")
    write(tmp_path, "b.txt", "-x - 1")
    write(tmp_path, "c.txt", WORKED)
    result = batch_run(tmp_path, jobs=1)
    s = result.summary
    assert [r.name for r in result.reports] == ["a.txt", "b.txt", "c.txt"]
    assert (s.instances, s.definite, s.remaining, s.found, s.failed, s.errors) == (3, 2, 1, 1, 0, 0)


def test_batch_empty_directory(tmp_path):
    result = batch_run(tmp_path)
    assert result.reports == []
    s = result.summary
    assert (s.instances, s.definite, s.remaining, s.found, s.failed, s.errors) == (0, 0, 0, 0, 0, 0)
    assert "number of instances" in format_batch(result)


def test_batch_bad_files_are_error_rows(tmp_path):
    write(tmp_path, "a.txt", "x^2 + 1")
    (tmp_path / "b.bin").write_bytes(b"\xff\xfe\x00x")
    write(tmp_path, "c.txt", "x +* y")
    os.mkdir(tmp_path / "sub")  # not a regular file, skipped
    result = batch_run(tmp_path, jobs=1)
    assert [r.status for r in result.reports] == ["definite", ERROR, ERROR]
    s = result.summary
    assert (s.instances, s.definite, s.remaining, s.errors) == (1, 1, 0, 2)
    table = format_batch(result)
    summary = dict(line.rsplit("\t", 1) for line in table.splitlines() if line.startswith("errors"))
    assert {k.strip(): v for k, v in summary.items()} == {"errors (not counted above)": "2"}
    assert "UnicodeDecodeError" in table


def test_batch_parallel_matches_serial():
    serial = batch_run(SAMPLES, jobs=1)
    parallel = batch_run(SAMPLES, jobs=3)
    strip = lambda rs: [(r.name, r.status, r.num_terms, r.lp_solves, r.doubling_steps) for r in rs]
    assert strip(serial.reports) == strip(parallel.reports)


def test_batch_sample_summary_consistent(capsys):
    assert main(["batch", str(SAMPLES), "--format", "csv", "--jobs", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    rows = dict(line.split(",", 1) for line in out.splitlines() if "," in line and not line.startswith("name"))
    n, d, rem = (int(rows[k]) for k in ("number of instances", "number of definite instances",
                                        "number of remaining instances"))
    found, failed = int(rows["found zero in"]), int(rows["failed on"])
    assert n == 20 and d + rem == n and found + failed == rem


def test_summary_ignores_errors():
    reports = [InstanceReport("a", "zero", num_terms=4), InstanceReport("b", ERROR),
               InstanceReport("c", "failed", num_terms=9, dimension=3, max_degree=2),
               InstanceReport("d", "definite"), InstanceReport("e", "positive_value")]
    s = summarize(reports)
    assert (s.instances, s.definite, s.remaining, s.found, s.failed, s.errors) == (4, 1, 3, 2, 1, 1)
    assert (s.largest_size, s.largest_dimension, s.largest_degree) == (9, 3, 2)
    assert round(s.failed_percent, 1) == 33.3


def test_module_entry_point(tmp_path):
    path = write(tmp_path, "w.txt", WORKED)
    proc = subprocess.run([sys.executable, "-m", "subtropical.cli", "solve", str(path), "--json"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "zero"
