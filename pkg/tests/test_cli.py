import json

import pytest

from contactloci.cli import main

from conftest import hand_built_cusp


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_e1_cusp_m6_table(capsys):
    code, out, _ = run(capsys, "e1", "--poly", "x^2+y^3", "--m", "6")
    assert code == 0
    assert "Z^5" in out and "Z^7" in out
    assert "euler characteristic: -1" in out


def test_e1_json_structure(capsys):
    code, out, _ = run(capsys, "e1", "--poly", "x^2+y^3", "--m", "6", "--format", "json")
    assert code == 0
    data = json.loads(out)
    ranks = {}
    for entry in data["page"]["entries"]:
        tot = entry["p"] + entry["q"]
        ranks[tot] = ranks.get(tot, 0) + entry["rank"]
    assert ranks == {14: 5, 15: 7, 16: 1}


def test_report_node_passes(capsys):
    code, out, _ = run(capsys, "report", "--poly", "x*y", "--m", "2", "--primes", "3,5,7")
    assert code == 0
    assert "H_c^5 = Z" in out and "H_c^6 = Z" in out
    assert "Lambda = 0" in out
    assert "q^3 - q^2" in out
    assert "verdict: PASS" in out


def test_report_json_verdict(capsys):
    code, out, _ = run(
        capsys, "report", "--poly", "x^2+y^3", "--m", "2", "--primes", "3,5,7,11",
        "--format", "json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "PASS"
    assert data["lefschetz"] == 2
    assert data["oracle"]["counts"] == [[3, 54], [5, 250], [7, 686], [11, 2 * 11 ** 3]]
    assert data["euler_cross_check"]["passed"] is True


def test_validate_config_file(tmp_path, capsys):
    path = tmp_path / "cusp.json"
    path.write_text(json.dumps(hand_built_cusp().to_json_dict()))
    code, out, _ = run(capsys, "validate", "--config", str(path))
    assert code == 0 and "valid" in out

    broken = hand_built_cusp().to_json_dict()
    broken["divisors"][0]["disc"] = 0
    path.write_text(json.dumps(broken))
    code, out, _ = run(capsys, "validate", "--config", str(path))
    assert code == 1
    assert "disc" in out


def test_config_input_with_weights(tmp_path, capsys):
    data = hand_built_cusp().to_json_dict()
    data["weights"] = {"0": 4, "1": 6, "2": 11, "3": 0}
    path = tmp_path / "cusp.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "e1", "--config", str(path), "--m", "6", "--format", "json")
    assert code == 0
    page = json.loads(out)["page"]
    assert {(e["p"], e["q"]) for e in page["entries"]} == {(-12, 26), (-11, 26), (-11, 27)}


def test_weight_override_flag(capsys):
    code, out, _ = run(
        capsys, "e1", "--poly", "x^2+y^3", "--m", "6",
        "--weights", '{"0": 5, "1": 7, "2": 13, "3": 0}', "--format", "json",
    )
    assert code == 0
    page = json.loads(out)["page"]
    placements = {(e["p"], e["q"]) for e in page["entries"]}
    # columns move to -15, -14, -13 while the total degrees 14, 15, 16 stay
    assert placements == {(-15, 29), (-14, 28), (-13, 28), (-13, 29)}


def test_scale_flag_moves_columns(capsys):
    code, out, _ = run(
        capsys, "e1", "--poly", "x*y", "--m", "2", "--scale", "3", "--format", "json"
    )
    assert code == 0
    entries = json.loads(out)["page"]["entries"]
    assert {e["p"] for e in entries} == {-3}


def test_invalid_weight_override_is_a_usage_error(capsys):
    code, _, err = run(
        capsys, "e1", "--poly", "x^2+y^3", "--m", "6",
        "--weights", '{"0": 2, "1": 3, "2": 6, "3": 0}',
    )
    assert code == 2
    assert "ampleness" in err


def test_weights_cli_with_separation(capsys):
    code, out, _ = run(
        capsys, "weights", "--poly", "x^2+y^3", "--m", "7", "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    # the separated configuration has one more exceptional divisor
    assert len(data["weights"]) == 5
    assert "ampleness" in data["note"]


def test_report_on_config_input(tmp_path, capsys):
    path = tmp_path / "cusp.json"
    path.write_text(json.dumps(hand_built_cusp().to_json_dict()))
    code, out, _ = run(capsys, "report", "--config", str(path), "--m", "2")
    assert code == 0
    assert "verdict: PASS" in out and "H_c^6 = Z^2" in out


def test_check_euler_cli(capsys):
    code, out, _ = run(capsys, "check-euler", "--poly", "x^2+y^3", "--m", "6")
    assert code == 0 and "PASS" in out


def test_lefschetz_cli(capsys):
    code, out, _ = run(capsys, "lefschetz", "--poly", "x^2+y^3", "--m", "6")
    assert code == 0 and "= -1" in out


def test_separate_cli(capsys):
    code, out, _ = run(
        capsys, "separate", "--poly", "x^2+y^3", "--m", "7", "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    assert len(data["subdivisions"]) == 1
    assert data["subdivisions"][0]["mult"] == 7


def test_oracle_count_cli(capsys):
    code, out, _ = run(
        capsys, "oracle-count", "--poly", "x*y", "--m", "2", "--q", "3", "--level", "2"
    )
    assert code == 0 and "count = 18" in out


def test_oracle_chi_congruence_pool(capsys):
    code, out, _ = run(
        capsys, "oracle-chi", "--poly", "x^2+y^3", "--m", "3", "--level", "3",
        "--congruence", "1,3", "--format", "json",
    )
    assert code == 0
    data = json.loads(out)
    assert [q for q, _ in data["counts"]] == [7, 13]
    assert data["fit"]["chi"] == 3


def test_verify_fibration_cli(capsys):
    code, out, _ = run(capsys, "verify-fibration", "--m", "2", "--level", "2", "--q", "3")
    assert code == 0 and "PASS" in out


def test_mclean_cli(capsys):
    code, out, _ = run(
        capsys, "mclean", "--poly", "x^2+y^3", "--m", "2", "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    entries = data["page"]["entries"]
    assert [(e["p"] + e["q"], e["rank"]) for e in entries] == [(-3, 2)]


def test_power_config_e1(tmp_path, capsys):
    from contactloci.curves import point_configuration

    path = tmp_path / "x3.json"
    path.write_text(json.dumps(point_configuration(3).to_json_dict()))
    code, out, _ = run(capsys, "e1", "--config", str(path), "--m", "5")
    assert code == 0 and "empty page" in out
    code, out, _ = run(capsys, "e1", "--config", str(path), "--m", "6", "--format", "json")
    data = json.loads(out)
    assert data["page"]["entries"] == [
        {"p": 0, "q": 8, "rank": 3, "torsion": [], "contributors": [[0, 0]]}
    ]


def test_oracle_chi_inconclusive_exits_1(capsys):
    # the default pool mixes congruence classes for the cusp at m = 3
    code, out, _ = run(capsys, "oracle-chi", "--poly", "x^2+y^3", "--m", "3")
    assert code == 1
    assert "inconclusive" in out


def test_report_fails_on_inconclusive_oracle(capsys):
    code, out, _ = run(
        capsys, "report", "--poly", "x^2+y^3", "--m", "3", "--primes", "3,5,7,11,13"
    )
    assert code == 1
    assert "verdict: FAIL" in out


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["e1", "--poly", "x^2+y^3"])  # missing --m
    assert exc.value.code == 2
    code, _, err = run(capsys, "e1", "--poly", "x^2+", "--m", "2")
    assert code == 2 and "error" in err


def test_poly_json_input(tmp_path, capsys):
    from contactloci.polys import parse_polynomial

    poly, _ = parse_polynomial("x^2 + y^3")
    path = tmp_path / "cusp_poly.json"
    path.write_text(json.dumps(poly.to_json_dict()))
    code, out, _ = run(capsys, "e1", "--poly-json", str(path), "--m", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["euler"] == 2


def test_oracle_chi_csv_export(tmp_path, capsys):
    target = tmp_path / "counts.csv"
    code, _, _ = run(
        capsys, "oracle-chi", "--poly", "x*y", "--m", "2", "--level", "2",
        "--primes", "3,5,7", "--csv", str(target),
    )
    assert code == 0
    assert target.read_text().splitlines()[0] == "q,count"


def test_node_cap_env_var(capsys, monkeypatch):
    monkeypatch.setenv("CONTACTLOCI_NODE_CAP", "5")
    code, _, err = run(capsys, "oracle-count", "--poly", "x^2+y^3", "--m", "3", "--q", "13")
    assert code == 2
    assert "budget" in err


def test_resolve_univariate_cli(capsys):
    code, out, _ = run(capsys, "resolve", "--poly", "x^3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["configuration"]["ambient_dim"] == 1
    assert data["configuration"]["divisors"][0]["mult"] == 3


def test_missing_file_is_a_usage_error(capsys):
    code, _, err = run(capsys, "validate", "--config", "/nonexistent/file.json")
    assert code == 2


def test_higher_dimensional_config_flow(tmp_path, capsys):
    # ambient_dim 3: bookkeeping only, with supplied chi, covers and weights
    config = {
        "ambient_dim": 3,
        "sigma": "origin",
        "divisors": [
            {
                "id": 0,
                "label": "E",
                "mult": 2,
                "disc": 3,
                "exceptional": True,
                "over_sigma": True,
                "euler_open": 2,
                "cover_betti": [2, 0, 2],
            },
            {
                "id": 1,
                "label": "F",
                "mult": 5,
                "disc": 1,
                "exceptional": False,
                "over_sigma": True,
                "euler_open": -1,
            },
        ],
        "cells": [{"ids": [0, 1], "count": 1, "over_sigma": True}],
        "weights": {"0": 1, "1": 0},
    }
    path = tmp_path / "threefold.json"
    path.write_text(json.dumps(config))

    code, out, _ = run(capsys, "validate", "--config", str(path))
    assert code == 0

    # m = 2: only E contributes; the pair multiplicity 7 separates m <= 6
    code, out, _ = run(capsys, "e1", "--config", str(path), "--m", "2", "--format", "json")
    assert code == 0
    entries = json.loads(out)["page"]["entries"]
    totals = {}
    for e in entries:
        totals[e["p"] + e["q"]] = totals.get(e["p"] + e["q"], 0) + e["rank"]
    # dim = 3 (m + 1) - k nu - 1 = 5: H_0 at 10, H_2 at 8
    assert totals == {8: 2, 10: 2}

    code, out, _ = run(capsys, "check-euler", "--config", str(path), "--m", "2")
    assert code == 0 and "PASS" in out

    # m = 10 would need separation, which is curve-only: a clean error
    code, _, err = run(capsys, "e1", "--config", str(path), "--m", "10")
    assert code == 2 and "separat" in err


def test_report_roundtrips_through_json(capsys):
    from contactloci.lefschetz import EulerCrossCheck
    from contactloci.model import SncConfiguration
    from contactloci.separation import SubdivisionRecord
    from contactloci.spectral import E1Page, HcReport
    from contactloci.weights import WeightVector

    code, out, _ = run(
        capsys, "report", "--poly", "x^2+y^3", "--m", "7", "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    cfg = SncConfiguration.from_json_dict(data["configuration"])
    assert cfg.to_json_dict() == data["configuration"]
    page = E1Page.from_json_dict(data["page"])
    assert page.to_json_dict() == data["page"]
    hc = HcReport.from_json_dict(data["hc"])
    assert hc.to_json_dict() == data["hc"]
    w = WeightVector.from_json_dict(data["weights"])
    assert w.to_json_dict() == data["weights"]
    assert data["subdivisions"]  # m = 7 forces one separating blowup
    for rec in data["subdivisions"]:
        assert SubdivisionRecord.from_json_dict(rec).to_json_dict() == rec
    check = EulerCrossCheck.from_json_dict(data["euler_cross_check"])
    assert check.to_json_dict() == data["euler_cross_check"]


def test_fit_and_fibration_json_roundtrips(capsys):
    from contactloci.jets import ChiFit, FibrationReport, interpolate_chi, verify_chart_fibration

    fit = interpolate_chi([(3, 18), (5, 100), (7, 294)])
    assert ChiFit.from_json_dict(fit.to_json_dict()) == fit
    report = verify_chart_fibration(1, 1, 3)
    assert FibrationReport.from_json_dict(report.to_json_dict()) == report
