import json

from ppsquares.cli import format_curve, main, run


def test_scan_prefix():
    code, out = run(["scan", "--max-abs-disc", "12"])
    assert code == 0
    assert [int(l.split()[0]) for l in out.splitlines()] == [-3, -4, -7, -8, -11]


def test_scan_empty_and_formats():
    assert run(["scan", "--max-abs-disc", "2"]) == (0, "")
    code, out = run(["scan", "--max-abs-disc", "12", "--format", "csv"])
    assert out.splitlines()[0] == "disc,h" and len(out.splitlines()) == 6
    code, out = run(["scan", "--max-abs-disc", "12", "--format", "json"])
    assert json.loads(out)[-1] == {"disc": -11, "h": 1}


def test_scan_usage_errors():
    assert run(["scan", "--max-abs-disc", "-5"])[0] == 1
    assert main(["scan"]) == 1
    assert main(["nonsense"]) == 1


def test_polarizations_json_schema():
    code, out = run(["polarizations", "--disc", "-8", "--format", "json"])
    assert code == 0
    recs = json.loads(out)
    assert [r["decomposable"] for r in recs] == [True, False]
    for r in recs:
        assert set(r) == {"disc", "a", "b", "d", "det", "decomposable", "aut_order", "fom_q", "fod_q"}
        assert r["det"] == 1


def test_polarizations_trivial_and_guard():
    code, out = run(["polarizations", "--disc", "-3"])
    assert code == 0 and "indecomposable" not in out
    assert run(["polarizations", "--disc", "-7000"])[0] == 1
    assert run(["polarizations", "--disc", "-23"])[0] == 1
    code, out = run(["polarizations", "--disc", "-23", "--force", "--format", "csv"])
    assert code == 0 and len(out.splitlines()) > 1


def test_moduli_examples():
    code, out = run(["moduli", "--disc", "-520", "--format", "json"])
    recs = json.loads(out)
    assert (sum(r["fom_q"] for r in recs), len(recs)) == (3, 25)
    assert all(r["witnesses"] for r in recs if r["fom_q"])
    code, out = run(["moduli", "--disc", "-232"])
    assert out.splitlines()[-1].startswith("5 of 9")
    code, out = run(["moduli", "--disc", "-4", "--format", "json"])
    assert json.loads(out) == []


def test_invariants_examples():
    code, out = run(["invariants", "--disc", "-8", "--index", "0", "--precision", "400"])
    assert code == 0
    assert out.splitlines()[-1] == "verdict: match: y^2 = x^5 + x"
    code, out = run(["invariants", "--disc", "-148", "--index", "0", "--format", "json"])
    assert code == 0 and json.loads(out)["curve"] == [0, 16317, 0, 5365, 0, 441, 0]


def test_invariants_low_precision_fails():
    code, out = run(["invariants", "--disc", "-163", "--precision", "64"])
    assert code == 2 and "unrecognized" in out


def test_invariants_not_rational():
    code, out = run(["moduli", "--disc", "-232", "--format", "json"])
    assert json.loads(out)[1]["fom_q"] is False
    code, out = run(["invariants", "--disc", "-232", "--index", "1", "--precision", "200"])
    assert code == 0 and out.splitlines()[-1] == "verdict: field of moduli is not Q"


def test_invariants_usage():
    assert run(["invariants", "--disc", "-8", "--index", "5"])[0] == 1
    assert run(["invariants", "--disc", "-8", "--precision", "10"])[0] == 1


def test_report_quick_is_golden():
    code, out = run(["report", "--quick", "--json", "--jobs", "1"])
    assert code == 0
    payload = json.loads(out)
    assert payload["totals"]["discriminants"] == 45
    code2, out2 = run(["report", "--quick", "--json", "--jobs", "2"])
    assert (code2, out2) == (code, out)


def test_format_curve():
    assert format_curve([0, 1, 0, 0, 0, 1, 0]) == "y^2 = x^5 + x"
    assert format_curve([-22, 0, 0, 11, 0, 0, 2]) == "y^2 = 2x^6 + 11x^3 - 22"


def test_small_factorization():
    from ppsquares.cli import small_factorization
    assert small_factorization(2 ** 11 * 3 ** 7 * 29) == [[2, 11], [3, 7], [29, 1]]
    assert small_factorization(1) == []
    big = 1000003 * 1000033
    assert small_factorization(6 * big) == [[2, 1], [3, 1], [big, 1]]
