"""Acceptance criteria, one test each.

Every test prints a single ``CRITERION <k> PASS|FAIL: ...`` line (visible in
``pytest -v`` output and when run directly with ``python3 tests/test_acceptance.py``).
All comparisons are exact.
"""

from __future__ import annotations

import os
import subprocess
import sys
from itertools import combinations

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from modcurves.classes import ModuliSignature, valid_boundary_indices
from modcurves.graphs import enumerate_graphs
from modcurves.keel import keel_basis, verify_basis_independence
from modcurves.linalg import rank
from modcurves.presentation import dim_h2_bar, presentation, relation_exprs
from modcurves.pullbacks import pullback_pi, pullback_theta, pullback_xi
from modcurves.spectral import d1_codim2, open_h1, open_h2
from oracles import genus0_betti, genus0_h2bar

S = ModuliSignature.standard

RESULTS: dict[int, bool] = {}


def report(k: int, ok: bool, detail: str, capsys=None) -> None:
    RESULTS[k] = ok
    line = f"CRITERION {k} {'PASS' if ok else 'FAIL'}: {detail}"
    if capsys is None:
        print(line)
        return
    with capsys.disabled():
        print("\n" + line)


def check_1():
    rows = []
    for n in range(4, 9):
        sig = S(0, n)
        by_basis = len(keel_basis(sig, "1", "2", "3"))
        pres = presentation(sig)
        by_rank = len(pres.generators) - rank(pres.relations)
        rows.append((n, by_basis, by_rank, dim_h2_bar(sig), genus0_h2bar(n)))
    ok = all(b == r == d == f for _, b, r, d, f in rows) and [r[1] for r in rows] == [1, 5, 16, 42, 99]
    return ok, "genus-0 dim H^2 (basis count, rank count) " + ", ".join(f"n={n}:{b}/{r}" for n, b, r, _, _ in rows)


def check_2():
    done = []
    ok = True
    for n in range(4, 8):
        sig = S(0, n)
        triples = [("1", "2", "3"), (str(n), "1", "2"), ("2", str(n), str(n - 1))]
        for t in triples:
            ok &= verify_basis_independence(sig, keel_basis(sig, *t))
        done.append(f"n={n}x{len(set(triples))}")
    return ok, "Keel bases certified for " + ", ".join(done)


def check_3():
    cases = []
    sig2 = S(2, 0)
    for rel in relation_exprs(sig2):
        cases.append(("kappa g2", "xi", pullback_xi(rel, "q", "r")))
    for base, name in [(S(2, 1), "g2"), (S(1, 2), "g1"), (S(1, 1), "g1"), (S(0, 5), "g0")]:
        rels = relation_exprs(base)
        for rel in rels:
            cases.append((name, "pi", pullback_pi(rel, "x")))
            if base.genus >= 1:
                cases.append((name, "xi", pullback_xi(rel, "q", "r")))
            for a in range(base.genus + 1):
                for k in range(base.n + 1):
                    for A in combinations(base.labels, k):
                        if 2 * a - 2 + k + 1 > 0 and 2 * (base.genus - a) - 2 + (base.n - k) + 1 > 0:
                            cases.append((name, "theta", pullback_theta(rel, a, A, "q")))
    bad = [c for c in cases if any(presentation(c[2].signature).reduce(c[2]))]
    kinds = {(c[0], c[1]) for c in cases}
    xi_g2 = any(c[0] == "kappa g2" and c[2].signature == ModuliSignature(1, ("q", "r")) for c in cases)
    ok = not bad and len(cases) >= 12 and xi_g2 and {"pi", "xi", "theta"} <= {k[1] for k in kinds}
    return ok, f"{len(cases)} pulled-back relations, {len(bad)} nonzero, xi* of the genus-2 relation included: {xi_g2}"


C4 = [(g, n) for g in range(1, 5) for n in range(0, 6) if 2 * g - 2 + n > 0]
C5 = [(g, n, n + 1) for g in (3, 4) for n in range(5)] + [(2, n, n) for n in range(5)] + [(1, n, 0) for n in range(1, 6)]


def check_4():
    vals = {gn: open_h1(S(*gn)) for gn in C4}
    bad = [gn for gn, v in vals.items() if v != 0]
    return not bad, f"h1 = 0 on {len(vals)} signatures; failures: {bad}"


def check_5():
    bad = []
    for g, n, want in C5:
        got = open_h2(S(g, n))
        if got != want:
            bad.append((g, n, got, want))
    return not bad, f"h2 matches n+1 / n / 0 on {len(C5)} signatures; failures: {bad}"


def check_6():
    bad = []
    for g, n, _ in C5:
        m = d1_codim2(S(g, n))
        if m.cols - rank(m) != 0:
            bad.append((g, n))
    return not bad, f"ker d1 (codim 2) = 0 on {len(C5)} signatures; failures: {bad}"


def check_7():
    rows = []
    for n in (4, 5, 6):
        got = (open_h1(S(0, n)), open_h2(S(0, n)))
        rows.append((n, got, genus0_betti(n)))
    ok = all(a == b for _, a, b in rows) and [r[2] for r in rows] == [(2, 0), (5, 6), (9, 26)]
    return ok, "genus-0 (h1, h2) vs product oracle " + ", ".join(f"n={n}:{a}" for n, a, _ in rows)


def check_8():
    sigs = [(g, n) for g, n in C4] + [(0, n) for n in range(3, 8)]
    bad = [(g, n) for g, n in sigs
           if len(enumerate_graphs(S(g, n), 1)) != len(valid_boundary_indices(S(g, n)))]
    return not bad, f"one-edge strata = boundary classes on {len(sigs)} signatures; failures: {bad}"


def check_9():
    got = [dim_h2_bar(S(g, n)) for g, n in [(1, 1), (1, 2), (2, 0), (3, 0)]]
    return got == [1, 2, 2, 3], f"dim H^2 of (1,1),(1,2),(2,0),(3,0) = {got}"


CLI_SUITE = [
    ["open", "--g", "3", "--n", "0", "--json"],
    ["open", "--g", "0", "--n", "6", "--json"],
    ["open", "--g", "2", "--n", "3"],
    ["dim-h2bar", "--g", "0", "--n", "7"],
    ["graphs", "--g", "2", "--n", "0", "--edges", "2"],
    ["graphs", "--g", "1", "--n", "3", "--edges", "2", "--json"],
    ["reduce", "--g", "0", "--n", "6", "--expr", "k1 + lambda - 2/3*Psi", "--json"],
    ["pullback", "xi", "--g", "2", "--n", "1", "--expr", "dirr + delta(1;{1})", "--q", "q", "--r", "r"],
    ["pullback", "theta", "--g", "3", "--n", "2", "--expr", "Delta", "--a", "1", "--A", "1", "--q", "q"],
    ["keel-verify", "--n", "6", "--triple", "1,2,3", "--triple", "5,3,1"],
    ["vanishing", "--g", "4", "--n", "2"],
]


def _cli_outputs(seed: str) -> tuple[bytes, list[int]]:
    env = dict(os.environ, PYTHONHASHSEED=seed)
    chunks, codes = [], []
    for argv in CLI_SUITE:
        proc = subprocess.run([sys.executable, "-m", "modcurves.cli", *argv], capture_output=True, env=env)
        codes.append(proc.returncode)
        chunks.append(proc.stdout + proc.stderr)
    return b"\x00".join(chunks), codes


def check_10():
    first, codes1 = _cli_outputs("1")
    second, codes2 = _cli_outputs("2")
    ok = first == second and codes1 == codes2 and not any(codes1)
    return ok, f"{len(CLI_SUITE)} CLI commands, two runs (different hash seeds), {len(first)} bytes each, exit codes {set(codes1)}"


CHECKS = {k: globals()[f"check_{k}"] for k in range(1, 11)}


@pytest.mark.parametrize("k", sorted(CHECKS))
def test_criterion(k, capsys):
    ok, detail = CHECKS[k]()
    report(k, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    for k in sorted(CHECKS):
        ok, detail = CHECKS[k]()
        report(k, ok, detail)
    sys.exit(0 if all(RESULTS.values()) else 1)
