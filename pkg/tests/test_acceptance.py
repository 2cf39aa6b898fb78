"""Acceptance criteria 1-10, one test each.

Every test records a ``PASS``/``FAIL`` line (shown in the terminal summary
and printed when the module is run directly) before asserting.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from schmidt3q import gates as g
from schmidt3q.als import AlsConfig, Verdict, als_fit, rank_search
from schmidt3q.circuit import evaluate, parse
from schmidt3q.claims import (
    M3_CIRCUIT,
    U3_CIRCUIT,
    U4_CIRCUIT,
    U5_CIRCUIT,
    U6_CIRCUIT,
    classify_m1,
    permutation_isomorphism,
    random_m1_sweep,
)
from schmidt3q.schmidt import (
    bipartite_schmidt,
    flattening_lower_bound,
    operator_tensor3,
    verify_decomposition,
)
from schmidt3q.tensor import (
    Decomposition,
    kron_all,
    max_deviation,
    random_unitary,
    unitarity_defect,
)

TOL = 1e-12
CFG = AlsConfig(seed=0, restarts=50)


def record(n, ok, detail, elapsed):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}  ({elapsed:.2f} s)"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


def test_criterion_01_unitarity():
    t0 = time.perf_counter()
    names = [n for n in g.PAPER_GATE_NAMES if g.paper_gate(n).claimed_unitary]
    worst = {n: unitarity_defect(g.paper_gate(n).matrix) for n in names}
    elapsed = time.perf_counter() - t0
    required = {"U3_pauli", "U5_thm1", "U6_thm1", "U7", "U8", "finagler", "M3", "T3", "F3"}
    ok = required <= set(names) and max(worst.values()) <= TOL and elapsed < 1
    record(1, ok, f"{len(names)} gates, max defect {max(worst.values()):.1e}", elapsed)


def test_criterion_02_certificates():
    t0 = time.perf_counter()
    u7 = g.paper_gate("U7")
    cases = {
        "U5_thm1": (g.paper_gate("U5_thm1").tensor(), g.paper_gate("U5_thm1").certificate, 5),
        "U6_thm1": (g.paper_gate("U6_thm1").tensor(), g.paper_gate("U6_thm1").certificate, 6),
        "U7": (u7.tensor(), Decomposition.from_operator_terms(
            (c, *f) for c, f in u7.expansion), 8),
        "U8": (g.paper_gate("U8").tensor(), g.paper_gate("U8").certificate, 8),
        "Fredkin": (g.paper_gate("F3").tensor(), g.paper_gate("F3").certificate, 4),
        "finagler": (g.paper_gate("finagler").tensor(), g.paper_gate("finagler").certificate, 4),
        "Strassen": (g.matmul_tensor(), g.strassen_certificate(), 7),
    }
    residuals = {k: verify_decomposition(t, d) for k, (t, d, _) in cases.items()}
    lengths_ok = all(len(d) == n for _, d, n in cases.values())
    b16 = g.paper_gate("bullock16")
    residuals["bullock16"] = max_deviation(g.sum_terms(b16.expansion), b16.matrix)
    lengths_ok &= len(b16.expansion) == 16
    elapsed = time.perf_counter() - t0
    ok = lengths_ok and max(residuals.values()) <= TOL and elapsed < 1
    record(2, ok, f"8 certificates, max residual {max(residuals.values()):.1e}", elapsed)


def _s3_rhs(v1, v2, w1, x2):
    ab = {(i, j): [g.S0, g.S3][j] @ v1 @ v2 @ [g.S0, g.S3][i] for i in (0, 1) for j in (0, 1)}
    b = [w1 @ g.S0, g.X @ w1 @ g.S0, w1 @ g.S3, g.X @ w1 @ g.S3]
    c = [x2, g.X @ x2, x2 @ g.X, g.X @ x2 @ g.X]
    terms = [((0, 0), 0, 0), ((0, 1), 1, 0), ((0, 0), 2, 1), ((0, 1), 3, 1),
             ((1, 0), 0, 2), ((1, 1), 1, 2), ((1, 0), 2, 3), ((1, 1), 3, 3)]
    return sum(kron_all(ab[ai], b[bi], c[ci]) for ai, bi, ci in terms)


def test_criterion_03_circuit_identities():
    t0 = time.perf_counter()
    hc = kron_all(g.I2, g.I2, g.H)
    ccz = np.eye(8) - 2 * kron_all(g.S3, g.S3, g.S3)
    u3 = g.paper_gate("U3_circ")
    u5 = g.paper_gate("U5_circ")
    u6 = g.paper_gate("U6_circ")
    devs = {
        "T3": max_deviation(g.TOFFOLI, hc @ ccz @ hc),
        "U3": max_deviation(kron_all(g.CNOT, g.H) @ g.TOFFOLI @ hc, u3.matrix),
        "U3 closed form": max_deviation(g.sum_terms(u3.expansion), u3.matrix),
        "U3 circuit": max_deviation(evaluate(parse(U3_CIRCUIT)), u3.matrix),
        "U4": max_deviation(evaluate(parse(U4_CIRCUIT)), g.T_AB @ g.T_BC),
        "U5": max_deviation(g.T_AB @ g.FREDKIN, u5.matrix),
        "U5 expansion": max_deviation(g.sum_terms(u5.expansion), u5.matrix),
        "U5 circuit": max_deviation(evaluate(parse(U5_CIRCUIT)), u5.matrix),
        "U6": max_deviation(g.T_AC @ kron_all(g.H, g.I2, g.I2) @ u3.matrix, u6.matrix),
        "U6 expansion": max_deviation(g.sum_terms(u6.expansion), u6.matrix),
        "U6 circuit": max_deviation(evaluate(parse(U6_CIRCUIT)), u6.matrix),
        "M3": max_deviation(evaluate(parse(M3_CIRCUIT)), g.T_AB @ g.T_BC @ g.T_CA),
    }
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(20):
        v1, v2, w1, x2 = (random_unitary(2, rng) for _ in range(4))
        lhs = g.T_AB @ kron_all(v1, w1, g.I2) @ g.T_BC @ kron_all(v2, g.I2, x2) @ g.T_AC
        worst = max(worst, max_deviation(lhs, _s3_rhs(v1, v2, w1, x2)))
    devs["three-CNOT expansion x20"] = worst
    elapsed = time.perf_counter() - t0
    ok = max(devs.values()) <= TOL and elapsed < 1
    record(3, ok, f"{len(devs)} identities, max deviation {max(devs.values()):.1e}", elapsed)


def test_criterion_04_flattening_table():
    t0 = time.perf_counter()
    got = {
        "U3_pauli": flattening_lower_bound(g.paper_gate("U3_pauli").tensor()).mode_ranks,
        "U4": flattening_lower_bound(g.paper_gate("U4").tensor()).mode_ranks,
        "U5_thm1": flattening_lower_bound(g.paper_gate("U5_thm1").tensor()).mode_ranks,
        "Toffoli A|BC": bipartite_schmidt(g.TOFFOLI, "A|BC", (2, 2, 2)).rank,
        "Fredkin A|BC": bipartite_schmidt(g.FREDKIN, "A|BC", (2, 2, 2)).rank,
        "Fredkin C|AB": bipartite_schmidt(g.FREDKIN, "C|AB", (2, 2, 2)).rank,
        "matmul": flattening_lower_bound(g.matmul_tensor()).mode_ranks,
    }
    expected = {"U3_pauli": (3, 3, 3), "U4": (2, 4, 2), "U5_thm1": (2, 4, 4),
                "Toffoli A|BC": 2, "Fredkin A|BC": 2, "Fredkin C|AB": 4, "matmul": (4, 4, 4)}
    elapsed = time.perf_counter() - t0
    bad = [k for k in expected if got[k] != expected[k]]
    record(4, not bad, f"7 entries, mismatches {bad or 'none'}", elapsed)


CONFIRM = [("T3", 2), ("U3_pauli", 3), ("U4", 4), ("finagler", 4), ("F3", 4),
           ("U5_thm1", 5), ("U5_circ", 5), ("U6_thm1", 6), ("U6_circ", 6), ("T_lemma2", 6),
           ("matmul", 7), ("U7", 7), ("M3", 7)]


def _tensor(name):
    return g.matmul_tensor() if name == "matmul" else g.paper_gate(name).tensor()


def test_criterion_05_als_confirmations():
    t0 = time.perf_counter()
    results = {f"{n}@{r}": als_fit(_tensor(n), r, CFG) for n, r in CONFIRM}
    elapsed = time.perf_counter() - t0
    failed = [k for k, res in results.items() if not (res.converged and res.best_residual <= 1e-8)]
    ok = not failed and elapsed < 120
    worst = max(res.best_residual for res in results.values())
    record(5, ok, f"{len(results)} fits, worst residual {worst:.1e}, failed {failed or 'none'}",
           elapsed)


REFUTE = [("U3_pauli", 2), ("U5_thm1", 4), ("U6_thm1", 5), ("U7", 6), ("M3", 6),
          ("T_lemma2", 5), ("U8", 6)]


def test_criterion_06_als_negative_evidence():
    t0 = time.perf_counter()
    results = {f"{n}@{r}": als_fit(_tensor(n), r, CFG) for n, r in REFUTE}
    elapsed = time.perf_counter() - t0
    bad = [k for k, res in results.items()
           if res.converged or res.best_residual <= 1e-4 or res.restarts_used != 50]
    best = min(res.best_residual for res in results.values())
    record(6, not bad, f"OPEN-EVIDENCE (heuristic) for {len(results)} cases, "
                       f"smallest best residual {best:.1e}", elapsed)


def test_criterion_07_m1_sweep():
    t0 = time.perf_counter()
    s = random_m1_sweep(100, seed=0, cfg=CFG)
    h, i = classify_m1(g.H), classify_m1(g.I2)
    h_rep = rank_search(operator_tensor3(h.matrix), h.certificate, CFG)
    i_rep = rank_search(operator_tensor3(i.matrix), i.certificate, CFG)
    elapsed = time.perf_counter() - t0
    ok = (s.agreements == 100 and s.outside_2_4 == 0 and h.predicted_rank == 2
          and h_rep.als_upper == 2 and i.predicted_rank == 4 and i_rep.als_upper == 4
          and elapsed < 120)
    record(7, ok, f"agreement {s.agreements}/100, outside {{2,4}}: {s.outside_2_4}, "
                  f"ranks by prediction {s.predicted_counts}", elapsed)


def test_criterion_08_strassen_isomorphism():
    t0 = time.perf_counter()
    p = permutation_isomorphism(g.paper_gate("U7").tensor(), g.matmul_tensor())
    elapsed = time.perf_counter() - t0
    record(8, p is not None and elapsed < 5, f"triple {p}", elapsed)


def test_criterion_09_u8_report():
    t0 = time.perf_counter()
    e = g.paper_gate("U8")
    rep = rank_search(e.tensor(), e.certificate, CFG, claimed=e.claimed_rank, target="U8")
    elapsed = time.perf_counter() - t0
    at7 = next((r for r in rep.als_results if r.rank_tried == 7), None)
    ok = (rep.certified_upper == 8 and 6 in [f.rank for f in rep.als_failures]
          and rep.verdict is Verdict.OPEN and at7 is not None)
    outcome = (f"rank-7 ALS converged={at7.converged} residual {at7.best_residual:.1e}"
               if at7 else "no rank-7 run")
    record(9, ok, f"certified 8, fails at 6, verdict {rep.verdict.value}; {outcome}", elapsed)


def test_criterion_10_verify_all():
    cmd = [sys.executable, "-m", "schmidt3q", "verify", "all", "--json", "--seed", "0"]
    t0 = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    second = subprocess.run(cmd, capture_output=True, text=True)
    doc = json.loads(first.stdout)
    fails = [k for k, v in doc["verdicts"].items() if v == "FAIL"]
    ok = (first.returncode == 0 and not fails and len(doc["verdicts"]) == 17
          and first.stdout == second.stdout and elapsed < 300)
    record(10, ok, f"exit {first.returncode}, FAIL claims {fails or 'none'}, "
                   f"identical JSON {first.stdout == second.stdout}", elapsed)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
