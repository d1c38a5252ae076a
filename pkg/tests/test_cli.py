"""End-to-end tests of the command line interface, run in process."""

import json

import pytest

import cycord.cli as cli
from cycord.errors import VerificationFailed


def run(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, _err = run(argv + ["--output", "json"], capsys)
    return code, (json.loads(out) if out.strip() else None)


# -- describe ----------------------------------------------------------------


def test_describe(capsys):
    code, payload = run_json(["describe", "--algebra", "golden_u_i"], capsys)
    assert code == 0
    assert payload["name"] == "golden_u_i"
    assert payload["degree"] == 2
    assert payload["u"] == "i"
    assert payload["claims_division"] is True


def test_describe_u_override(capsys):
    code, payload = run_json(
        ["describe", "--algebra", "golden_u_i", "--u", "3"], capsys)
    assert code == 0
    assert payload["u"] == "3"
    assert payload["claims_division"] is False


def test_describe_accepts_json_suffix(capsys):
    code, payload = run_json(
        ["describe", "--algebra", "golden_u_i.json"], capsys)
    assert code == 0
    assert payload["name"] == "golden_u_i"


def test_describe_human_output(capsys):
    code, out, _ = run(["describe", "--algebra", "golden_u_i"], capsys)
    assert code == 0
    assert "algebra golden_u_i" in out
    assert "degree n:  2" in out


# -- reduce ------------------------------------------------------------------


def test_reduce_simple(capsys):
    code, payload = run_json(
        ["reduce", "--algebra", "golden_u_i", "--ideal", "(1+i)",
         "--element", "3, 0; 0, 1"], capsys)
    assert code == 0
    assert payload["ideal"] == "(1+i)"
    assert "canonical_lift_coordinates" in payload
    assert len(payload["canonical_lift_coordinates"]) == 8


def test_reduce_composite(capsys):
    code, payload = run_json(
        ["reduce", "--algebra", "golden_u_i", "--ideal", "(1+i),(3)",
         "--element", "3, 0; 0, 1"], capsys)
    assert code == 0
    assert payload["crt_round_trip"] is True
    assert [c["ideal"] for c in payload["components"]] == ["(1+i)", "(3)"]


def test_reduce_bad_element_exits_1(capsys):
    code, _out, err = run(
        ["reduce", "--algebra", "golden_u_i", "--ideal", "(1+i)",
         "--element", "3, 0"], capsys)
    assert code == 1
    assert "error" in err


# -- structure ---------------------------------------------------------------


def test_structure_verified(capsys):
    code, payload = run_json(
        ["structure", "--algebra", "golden_u_i", "--ideal", "(1+i)",
         "--verify"], capsys)
    assert code == 0
    assert payload["case"] == "InertUnit"
    assert payload["target"] == "M_2(F_2)"
    assert payload["verification"]["passed"] is True
    assert payload["verification"]["pairs_checked"] == 256


def test_structure_nilpotent_has_no_certificate(capsys):
    code, payload = run_json(
        ["structure", "--algebra", "golden_u_1pi", "--ideal", "(1+i)",
         "--verify"], capsys)
    assert code == 0
    assert payload["case"] == "InertNilpotent"
    assert payload["verification"] is None


def test_structure_composite(capsys):
    code, payload = run_json(
        ["structure", "--algebra", "golden_u_i", "--ideal", "(1+i),(3)"],
        capsys)
    assert code == 0
    cases = [c["case"] for c in payload["components"]]
    assert cases == ["InertUnit", "SplitUnit"]


def test_structure_counterexample_exit_2(capsys, monkeypatch):
    def explode(cert, mode=None, seed=0):
        err = VerificationFailed("forced failure")
        err.pair = ("x", "y")
        raise err

    monkeypatch.setattr(cli, "verify_isomorphism", explode)
    code, payload = run_json(
        ["structure", "--algebra", "golden_u_i", "--ideal", "(1+i)",
         "--verify"], capsys)
    assert code == 2
    assert payload["verification"]["passed"] is False
    assert "x" in payload["verification"]["counterexample"]


def test_structure_sampled_mode(capsys):
    code, payload = run_json(
        ["structure", "--algebra", "golden_u_i", "--ideal", "(1+i)",
         "--verify", "--mode", "sampled"], capsys)
    assert code == 0
    assert payload["verification"]["mode"] == "Sampled"


# -- ideals ------------------------------------------------------------------


def test_ideals_listing(capsys):
    code, payload = run_json(
        ["ideals", "--algebra", "golden_u_1pi", "--ideal", "(1+i)"], capsys)
    assert code == 0
    labels = [e["label"] for e in payload["ideal_lattice"]]
    assert labels == ["ring", "<z>", "<z^2>"]
    assert [e["size"] for e in payload["ideal_lattice"]] == [16, 4, 1]


def test_ideals_rejects_composite(capsys):
    code, payload = run_json(
        ["ideals", "--algebra", "golden_u_i", "--ideal", "(1+i),(3)"], capsys)
    assert code == 1
    assert "error" in payload


# -- encode ------------------------------------------------------------------


def write_spec(tmp_path, name, spec):
    path = tmp_path / name
    path.write_text(json.dumps(spec))
    return str(path)


def test_encode_parity(capsys, tmp_path):
    spec = write_spec(tmp_path, "parity.json", {
        "algebra_spec": "golden_u_i",
        "ideal": {"alpha": "1+i", "s": 1},
        "outer": {"kind": "ParityOverRing", "length": 3},
        "lift_strategy": "CanonicalZero",
        "box_bound": 1,
        "seed": 0,
    })
    code, payload = run_json(
        ["encode", "--code-spec", spec,
         "--message", json.dumps(["1, 0; 0, 0", "0, 0; 1, 0"])], capsys)
    assert code == 0
    assert payload["outer_kind"] == "ParityOverRing"
    assert len(payload["outer_codeword"]) == 3
    assert len(payload["components"]) == 3
    assert payload["section_check"] is True
    assert all(len(c["coordinates"]) == 8 for c in payload["components"])


def test_encode_monomial_parity(capsys, tmp_path):
    spec = write_spec(tmp_path, "zcode.json", {
        "algebra_spec": "golden_u_1pi",
        "ideal": {"alpha": "1+i", "s": 1, "monomial_power": 1},
        "outer": {"kind": "ParityOverRing", "length": 3},
        "lift_strategy": "CanonicalZero",
        "box_bound": 1,
        "seed": 0,
    })
    code, payload = run_json(
        ["encode", "--code-spec", spec,
         "--message", json.dumps(["1, 0", "0, 1"])], capsys)
    assert code == 0
    assert len(payload["components"]) == 3


def test_encode_reed_solomon(capsys, tmp_path):
    spec = write_spec(tmp_path, "rs.json", {
        "algebra_spec": "golden_u_i",
        "ideal": {"alpha": "1+i", "s": 1},
        "outer": {"kind": "ReedSolomon", "length": 4, "p": 2, "m": 2,
                  "dimension": 2},
        "seed": 0,
    })
    code, payload = run_json(
        ["encode", "--code-spec", spec, "--message", "[1, 2]"], capsys)
    assert code == 0
    assert payload["outer_kind"] == "ReedSolomon"
    assert payload["components"] is None
    assert len(payload["outer_codeword"]) == 4


def test_encode_randomized_lift(capsys, tmp_path):
    spec = write_spec(tmp_path, "rand.json", {
        "algebra_spec": "golden_u_i",
        "ideal": {"alpha": "1+i", "s": 1},
        "outer": {"kind": "ParityOverRing", "length": 3},
        "lift_strategy": "Randomized",
        "box_bound": 1,
        "seed": 7,
    })
    msg = json.dumps(["1, 0; 0, 0", "0, 0; 1, 0"])
    code, payload = run_json(["encode", "--code-spec", spec, "--message", msg], capsys)
    assert code == 0
    assert payload["section_check"] is True
    code2, payload2 = run_json(["encode", "--code-spec", spec, "--message", msg], capsys)
    assert payload2 == payload  # seed lives in the spec


# -- deltamin ----------------------------------------------------------------


def test_deltamin_sum_closed(capsys, tmp_path):
    spec = write_spec(tmp_path, "dm.json", {
        "algebra_spec": "golden_u_i",
        "ideal": {"alpha": "1+i", "s": 1},
        "outer": {"kind": "ParityOverRing", "length": 2},
        "box_bound": 1,
        "seed": 0,
    })
    code, payload = run_json(["deltamin", "--code-spec", spec], capsys)
    assert code == 0
    assert payload["lower_bound"] == 4.0
    assert payload["search_min"] == pytest.approx(4.0)
    assert payload["bound_formula"] == "Principal"
    assert payload["argmin"]["coordinates"] == [[1, 0, 0, 0, 0, 0, 0, 0]] * 2


def test_deltamin_monomial(capsys, tmp_path):
    spec = write_spec(tmp_path, "dmz.json", {
        "algebra_spec": "golden_u_1pi",
        "ideal": {"alpha": "1+i", "s": 1, "monomial_power": 1},
        "outer": {"kind": "ParityOverRing", "length": 2},
        "box_bound": 1,
        "seed": 0,
    })
    code, payload = run_json(["deltamin", "--code-spec", spec], capsys)
    assert code == 0
    assert payload["lower_bound"] == 2.0
    assert payload["search_min"] == pytest.approx(2.0)
    assert payload["bound_formula"] == "NilpotentU"


def test_deltamin_rejects_non_parity(capsys, tmp_path):
    spec = write_spec(tmp_path, "bad.json", {
        "algebra_spec": "golden_u_i",
        "ideal": {"alpha": "1+i", "s": 1},
        "outer": {"kind": "ReedSolomon", "length": 4, "p": 2, "m": 2,
                  "dimension": 2},
    })
    code, payload = run_json(["deltamin", "--code-spec", spec], capsys)
    assert code == 1
    assert "error" in payload


# -- check-lemma and selftest --------------------------------------------------


def test_check_lemma(capsys):
    code, payload = run_json(
        ["check-lemma", "--trials", "60", "--seed", "5"], capsys)
    assert code == 0
    assert payload["trials"] == 60
    assert payload["violations"] == 0
    assert payload["k1_equality_failures"] == 0


def test_check_lemma_flag_positions(capsys):
    code1, p1 = run_json(["--seed", "5", "check-lemma", "--trials", "40"], capsys)
    code2, p2 = run_json(["check-lemma", "--trials", "40", "--seed", "5"], capsys)
    assert code1 == code2 == 0
    assert p1 == p2


def test_selftest(capsys):
    code, payload = run_json(["selftest"], capsys)
    assert code == 0
    suites = payload["suites"]
    assert len(suites) == 5
    assert all(s["passed"] for s in suites.values())
    assert "embedding_law" in suites
    assert "unipotent_inverse" in suites


def test_selftest_reports_failures(capsys, monkeypatch):
    def broken(rng):
        raise AssertionError("injected failure")

    name, _suite = cli._SELFTEST_SUITES[0]
    monkeypatch.setattr(cli, "_SELFTEST_SUITES",
                        [(name, broken)] + cli._SELFTEST_SUITES[1:])
    code, payload = run_json(["selftest"], capsys)
    assert code == 1
    assert payload["suites"][name]["passed"] is False


# -- output and error conventions ------------------------------------------------


def test_json_is_deterministic(capsys):
    argv = ["structure", "--algebra", "golden_u_i", "--ideal", "(1+i)",
            "--verify", "--output", "json"]
    _code, out1, _ = run(argv, capsys)
    _code, out2, _ = run(argv, capsys)
    assert out1 == out2


def test_unknown_algebra_exits_1(capsys):
    code, _out, _err = run(["describe", "--algebra", "nope"], capsys)
    assert code == 1


def test_bad_ideal_exits_1(capsys):
    code, _out, err = run(
        ["structure", "--algebra", "golden_u_i", "--ideal", "(2)"], capsys)
    assert code == 1
    assert "prime" in err


def test_usage_error_exits_1(capsys):
    code, _out, _err = run(["no-such-command"], capsys)
    assert code == 1
    code, _out, _err = run(["describe"], capsys)  # missing --algebra
    assert code == 1


def test_threads_validation(capsys):
    code, _out, _err = run(
        ["describe", "--algebra", "golden_u_i", "--threads", "0"], capsys)
    assert code == 1
