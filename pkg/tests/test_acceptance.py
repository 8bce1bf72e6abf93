"""The eleven acceptance criteria, each run through the verification harness.

Every criterion prints one PASS/FAIL line with its wall time and budget.
Run directly (python tests/test_acceptance.py) for just those lines.
"""

import sys
import time

import pytest

from zassenhaus.verify import RunConfig, run

DESK = dict(p=5, n=2)


def _suite(name, **cfg):
    start = time.perf_counter()
    report = run([name], RunConfig(**{**DESK, **cfg}))
    return report["suites"][0], time.perf_counter() - start


def _checks(suite):
    return {c["name"]: c for c in suite["checks"]}


def _report(number, name, ok, seconds, budget, note=""):
    status = "PASS" if ok and seconds < budget else "FAIL"
    line = f"criterion {number:2d} {name:15s} {status}  {seconds:7.2f}s / {budget}s {note}".rstrip()
    return status == "PASS", line


def criterion_1():
    s, t = _suite("eq21")
    c = _checks(s)
    ok = (s["status"] == "pass"
          and c["witt-basis"]["detail"]["checked"] + c["partial-powers"]["detail"]["checked"] == 26)
    note = "" if ok else f"observed {c['witt-basis']['detail'].get('observed')}"
    return _report(1, "eq21", ok, t, 1, note)


def criterion_2():
    s, t = _suite("lieg-basis")
    c = _checks(s)
    ok = (s["status"] == "pass" and c["size"]["detail"]["size"] == 23
          and c["tangent"]["detail"] == {"checked": 23, "failing": []}
          and c["excluded-inadmissible"]["detail"] == {"excluded": [4], "accepted": []})
    return _report(2, "lieg-basis", ok, t, 1)


def criterion_3():
    s, t = _suite("jacobson")
    ok = s["status"] == "pass" and _checks(s)["pairs"]["detail"]["tested"] == 200
    return _report(3, "jacobson", ok, t, 10)


def criterion_4():
    s, t = _suite("lemma31")
    d = _checks(s)["certificates"]["detail"]
    ok = s["status"] == "pass" and d["tested"] == 500 and d["max_steps"] <= 19
    return _report(4, "lemma31", ok, t, 30)


def criterion_5():
    s, t = _suite("cor32", p=5, n=3, m=1)
    c = _checks(s)
    ok = (s["status"] == "pass" and c["m=1-certificates"]["detail"]["skipped"] == [20]
          and c["m=1-skipped-nonvanishing"]["status"] == "info")
    counts = c["m=1-skipped-nonvanishing"]["detail"] if "m=1-skipped-nonvanishing" in c else {}
    return _report(5, "cor32 (n=3)", ok, t, 300, f"nonvanishing at skipped degrees {counts}")


def criterion_6():
    s, t = _suite("ppower-lemma")
    c = _checks(s)
    d = c["dichotomy"]["detail"]
    ok = s["status"] == "pass" and d["tested"] == 500 and d["violations"] == {}
    info = c["b0-canonical-forms-with-witt-part"]["detail"]
    return _report(6, "ppower-lemma", ok, t, 60, f"branches {d['branches']}, reduce_top forms {info}")


def criterion_7():
    s, t = _suite("nreg")
    c = _checks(s)
    ok = (s["status"] == "pass"
          and c["translates-regular"]["detail"]["tested"] == 1000
          and c["filtered-singular"]["detail"]["tested"] == 1000
          and c["reduce-witt-to-partial"]["detail"]["tested"] == 1000)
    return _report(7, "nreg", ok, t, 60)


def criterion_8():
    s, t = _suite("centralizer")
    c = _checks(s)
    ok = (s["status"] == "pass" and c["partial-plus-tail"]["detail"]["tested"] == 20
          and c["top-partial-power"]["detail"]["dim"] == 6)
    return _report(8, "centralizer", ok, t, 10)


def criterion_9():
    s, t = _suite("sigma-spectrum")
    mult = _checks(s)["multiplicities"]["detail"]["multiplicities"]
    want = {str(k): 1 for k in range(23)}
    want["23"] = 2
    ok = s["status"] == "pass" and mult == want
    return _report(9, "sigma-spectrum", ok, t, 30)


def criterion_10():
    s, t = _suite("prop-vsing", m=2)
    d = _checks(s)["exhaustive-Fq"]["detail"]
    ok = s["status"] == "pass" and d["tested"] == 15624 and d["singular"] == 0 and d["violations"] == 0
    s4, t4 = _suite("prop-vsing", m=4)
    d4 = _checks(s4)["sampled-Fq2"]["detail"]
    ok4 = s4["status"] == "pass" and d4["tested"] == 10000 and d4["singular"] == 0
    # the 2 minute target is for the exhaustive F_25 sweep; the F_625 run is reported alongside
    return _report(10, "prop-vsing", ok and ok4, t, 120, f"(F_625 sample run {t4:.1f}s)")


def criterion_11():
    s, t = _suite("tangent")
    d = _checks(s)["dimensions"]["detail"]
    ok = s["status"] == "pass" and d == {"tested": 50, "total": 24, "image": 23, "x_cap_lieg": 0}
    return _report(11, "tangent", ok, t, 10)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_acceptance(criterion, capsys):
    ok, line = criterion()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
