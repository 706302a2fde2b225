"""Acceptance criteria 1-12, each reported as a single PASS/FAIL line."""
import pytest

from solitonlab import cli
from solitonlab.verify import run_suite

TITLES = {
    1: "symbolic goldens",
    2: "zero-curvature identities",
    3: "lattice conservation",
    4: "transfer-matrix constancy",
    5: "discrete soliton",
    6: "KdV solitons",
    7: "Miura chain",
    8: "GLM",
    9: "sinh-Gordon",
    10: "Liouville",
    11: "charge duality",
    12: "determinism",
}


@pytest.fixture(scope="module")
def checks():
    return run_suite("all")


def report(capsys, k: int, ok: bool, detail: str = ""):
    with capsys.disabled():
        print(f"\ncriterion {k:>2} {TITLES[k]:<26} {'PASS' if ok else 'FAIL'}{'  ' + detail if detail else ''}")


@pytest.mark.parametrize("k", range(1, 12))
def test_criterion(checks, capsys, k):
    mine = [c for c in checks if c.criterion == k]
    assert mine, f"no checks registered for criterion {k}"
    failed = [c for c in mine if not c.passed]
    worst = max(mine, key=lambda c: c.measured / c.tolerance if c.tolerance else (0.0 if c.measured == 0 else float("inf")))
    report(capsys, k, not failed, f"{len(mine)} checks, tightest: {worst.name} {worst.measured:.2e} <= {worst.tolerance:.0e}")
    assert not failed, "\n".join(c.row() for c in failed)


def test_criterion_12_determinism(tmp_path, capsys):
    outs, reports = [], []
    for sub in ("first", "second"):
        code = cli.main(["verify", "--suite", "all", "--out", str(tmp_path / sub)])
        outs.append((code, capsys.readouterr().out))
        (run_dir,) = (tmp_path / sub / "verify").iterdir()
        reports.append((run_dir / "report.csv").read_bytes())
    ok = outs[0][0] == 0 and outs[1][0] == 0 and outs[0][1] == outs[1][1] and reports[0] == reports[1]
    report(capsys, 12, ok, "two verify runs, stdout and report.csv compared byte for byte")
    assert ok
