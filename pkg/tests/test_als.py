import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schmidt3q import gates as g
from schmidt3q.als import (
    AlsConfig,
    AlsFailure,
    Verdict,
    _init_factors,
    _run_batch,
    _verdict,
    als_fit,
    rank_search,
)
from schmidt3q.schmidt import verify_decomposition
from schmidt3q.tensor import Decomposition, mode_flatten

FAST = AlsConfig(restarts=10, max_iters=500)


def rank_one(seed):
    rng = np.random.default_rng(seed)
    vecs = [rng.standard_normal(4) + 1j * rng.standard_normal(4) for _ in range(3)]
    return np.einsum("i,j,k->ijk", *vecs)


@pytest.mark.parametrize("kwargs", [
    {"max_iters": 0}, {"restarts": 0}, {"stall_window": 0},
    {"converge_residual": 0}, {"stall_delta": 0}, {"damping": -1}, {"seed": -1},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        AlsConfig(**kwargs)


def test_rank_one_fit():
    res = als_fit(rank_one(3), 1)
    assert res.converged and res.best_residual <= 1e-10


def test_u3_pauli_rank_three():
    res = als_fit(g.paper_gate("U3_pauli").tensor(), 3)
    assert res.converged and res.best_residual <= 1e-8


def test_matmul_rank_seven():
    t = g.matmul_tensor()
    res = als_fit(t, 7)
    assert res.converged
    assert verify_decomposition(t, res.factors) <= res.best_residual * np.linalg.norm(t) * (1 + 1e-9)


def test_deterministic():
    t = g.paper_gate("U5_thm1").tensor()
    r1, r2 = als_fit(t, 4, FAST), als_fit(t, 4, FAST)
    assert r1.best_residual == r2.best_residual
    assert np.array_equal(r1.factors.a, r2.factors.a)


def test_history_monotone():
    res = als_fit(g.paper_gate("U6_thm1").tensor(), 5, FAST)
    h = np.array(res.history)
    assert np.all(np.diff(h) <= 1e-12)


@pytest.mark.parametrize("damping", [0.0, 1.0])
def test_batched_restarts_match_one_at_a_time(damping):
    t = g.paper_gate("U5_thm1").tensor()
    cfg = AlsConfig(max_iters=300, damping=damping)
    unf = [mode_flatten(t, m) for m in (1, 2, 3)]
    norm = np.linalg.norm(t)
    inits = [_init_factors(t.shape, 4, cfg.seed, k) for k in range(4)]
    batched = _run_batch(unf, norm, tuple([f[m] for f in inits] for m in range(3)), cfg)
    for k, f in enumerate(inits):
        single = _run_batch(unf, norm, tuple([f[m]] for m in range(3)), cfg)
        assert single[4][0] == batched[4][k]
        assert np.allclose(single[3][0], batched[3][k], rtol=1e-10, atol=0)


def test_warm_start_never_worse():
    t = g.paper_gate("U6_thm1").tensor()
    r4 = als_fit(t, 4, FAST)
    r5 = als_fit(t, 5, FAST, warm_start=r4.factors)
    assert r5.best_residual <= r4.best_residual


def test_warm_start_checks():
    t = g.paper_gate("U4").tensor()
    with pytest.raises(ValueError):
        als_fit(t, 1, FAST, warm_start=Decomposition(*(np.ones((4, 2)),) * 3))
    with pytest.raises(ValueError):
        als_fit(t, 2, FAST, warm_start=Decomposition(*(np.ones((2, 1)),) * 3))


def test_zero_tensor_and_bad_rank():
    assert als_fit(np.zeros((2, 2, 2)), 1).converged
    with pytest.raises(ValueError):
        als_fit(rank_one(0), 0)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_converged_factors_reproduce_tensor(seed):
    t = rank_one(seed) + rank_one(seed + 1)
    res = als_fit(t, 2, FAST)
    assert res.converged
    assert verify_decomposition(t, res.factors) <= 1e-8 * np.linalg.norm(t) * (1 + 1e-9)


def test_rank_search_u6():
    e = g.paper_gate("U6_thm1")
    rep = rank_search(e.tensor(), e.certificate, claimed=6)
    assert rep.proved_lower == 4 and rep.certified_upper == 6
    assert [f.rank for f in rep.als_failures] == [4, 5]
    assert rep.als_upper == 6 and rep.verdict is Verdict.CONSISTENT


def test_rank_search_t_lemma2():
    e = g.paper_gate("T_lemma2")
    rep = rank_search(e.tensor(), e.certificate, claimed=6)
    assert rep.certified_upper == 6 and rep.als_upper == 6
    assert 5 in [f.rank for f in rep.als_failures]
    assert rep.verdict is Verdict.CONSISTENT


def test_rank_search_u8_is_open():
    e = g.paper_gate("U8")
    rep = rank_search(e.tensor(), e.certificate, claimed=e.claimed_rank)
    assert rep.certified_upper == 8
    assert 6 in [f.rank for f in rep.als_failures]
    assert rep.verdict is Verdict.OPEN
    d = rep.to_dict()
    assert d["claimed"] == [7, 8]


def test_rank_search_bad_hint_not_counted():
    wrong = Decomposition.from_operator_terms([(1, g.S0, g.I2, g.I2)])
    rep = rank_search(g.paper_gate("U4").tensor(), wrong, FAST)
    assert rep.certified_upper is None and rep.certificate_residual > 0.5
    assert rep.als_upper == 4


@pytest.mark.parametrize("lower, cert, als, fails, claimed, expected", [
    (4, 6, 6, [4, 5], (6,), Verdict.CONSISTENT),
    (4, 8, 7, [4, 5, 6], (7, 8), Verdict.OPEN),
    (4, 6, 6, [4, 5], (5,), Verdict.INCONSISTENT),
    (5, 4, None, [], None, Verdict.INCONSISTENT),
    (4, 6, 3, [], None, Verdict.INCONSISTENT),
    (4, 6, None, [4], (6,), Verdict.OPEN),
    (4, None, 4, [], None, Verdict.CONSISTENT),
])
def test_verdict_table(lower, cert, als, fails, claimed, expected):
    failures = [AlsFailure(r, 0.1, 50) for r in fails]
    assert _verdict(lower, cert, als, failures, claimed) is expected
