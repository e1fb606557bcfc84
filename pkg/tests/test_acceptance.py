"""Acceptance criteria 1-8; each test prints one PASS/FAIL line (run with -s to see them inline)."""
from __future__ import annotations

import itertools
import time
from contextlib import contextmanager

import numpy as np
import pytest

from zestlab.braids import check_calibration, invariant_suite, word_operator
from zestlab.cache import Cache
from zestlab.experiment import ExperimentOptions, run_isotope_experiment
from zestlab.group import make_group
from zestlab.twisted_double import check_modularity, enumerate_simples, modular_data
from zestlab.zesting import (compose, enumerate_zestings, invert, retag_as_twist, trace_neutral,
                             zest_modular_data, zest_params)


@contextmanager
def criterion(n: int, title: str, budget: float | None = None):
    """Print a PASS/FAIL line for criterion ``n`` whatever happens inside the block."""
    t0 = time.perf_counter()
    notes: list[str] = []
    ok = False
    try:
        yield notes
        ok = True
    finally:
        dt = time.perf_counter() - t0
        if ok and budget is not None and dt > budget:
            notes.append(f"over budget {budget:.0f}s")
            ok = False
        status = "PASS" if ok else "FAIL"
        extra = f" [{'; '.join(notes)}]" if notes else ""
        print(f"\nACCEPTANCE {n} {status}: {title} ({dt:.1f}s){extra}")
    if budget is not None and dt > budget:
        pytest.fail(f"criterion {n} took {dt:.1f}s, budget {budget}s")


def test_criterion_1_rank_and_dimensions():
    with criterion(1, "rank 25 at (3,7), 49 at (5,11), sum d^2 = (pq)^2", budget=1.0) as notes:
        for p, q, rank in [(3, 7, 25), (5, 11, 49)]:
            simples = enumerate_simples(make_group(p, q), 1)
            assert len(simples) == rank
            assert sum(x.qdim ** 2 for x in simples) == (p * q) ** 2
            notes.append(f"({p},{q}) rank {len(simples)}")


def test_criterion_2_modularity_suite():
    with criterion(2, "exact modularity identities and Verlinde integrality at (3,7), u=0,1,2", budget=60) as notes:
        G = make_group(3, 7)
        for u in range(3):
            rep = check_modularity(modular_data(G, u), fusion=True)
            for key in ("symmetric", "unitary", "st_cubed", "gauss_product", "fusion_unit",
                        "fusion_nonnegative_integer"):
                assert rep[key] is True, (u, key)
        notes.append("S=S^t, SS*=I, (ST)^3=p+S^2, p+p-=D^2, N>=0 integral")


def test_criterion_3_zesting_equals_twisting():
    with criterion(3, "zest(u=0 data, params(u)) == twisted data at u, (3,7) and (5,11), all u",
                   budget=300) as notes:
        for p, q in [(3, 7), (5, 11)]:
            G = make_group(p, q)
            md0 = modular_data(G, 0)
            for params in enumerate_zestings(p):
                u = params.b
                md = modular_data(G, u)
                z = retag_as_twist(zest_modular_data(md0, params), u)
                assert z.S == md.S and np.array_equal(z.T_exp, md.T_exp), (p, q, u)
            notes.append(f"({p},{q}) u=0..{p - 1} exact")


def test_criterion_4_braiding_oracle():
    with criterion(4, "Hopf/twist closures reproduce S,T; Yang-Baxter on all color triples at (3,7)",
                   budget=1800) as notes:
        G = make_group(3, 7)
        for u in range(3):
            cal = check_calibration(G, u)
            assert cal["hopf"] == 625 and cal["twist"] == 25
            simples = enumerate_simples(G, u)
            for cols in itertools.product(simples, repeat=3):
                a, _ = word_operator(cols, [(1, 1), (2, 1), (1, 1)], G, u)
                b, _ = word_operator(cols, [(2, 1), (1, 1), (2, 1)], G, u)
                assert a == b, (u, [c.index for c in cols])
        notes.append("625 Hopf pairs, 25 twists, 15625 YBE triples per u")


@pytest.mark.parametrize("pq", [(3, 7), (5, 11)])
def test_criterion_5_link_scaling(pq, tmp_path_factory):
    p, q = pq
    with criterion(5, f"W, B, 5_2 scaling laws at {pq} within 1e-8 (float)") as notes:
        G = make_group(p, q)
        g = np.array([x.grading for x in enumerate_simples(G, 0)])
        W0 = invariant_suite(G, 0, "w", workers=2)
        B0 = invariant_suite(G, 0, "b", sample=256, seed=0, workers=2)
        F0 = invariant_suite(G, 0, "five2")
        assert len(B0.entries) >= 200
        worst = 0.0
        for u in range(1, p):
            s = np.exp(-2j * np.pi * u / (p * p))
            W = invariant_suite(G, u, "w", workers=2)
            assert W.entries == W0.entries
            i = g[[e[0] for e in W.entries]]
            j = g[[e[1] for e in W.entries]]
            err = np.abs(W.complex() - s ** (i * i + j * j) * W0.complex()).max()
            B = invariant_suite(G, u, "b", sample=256, seed=0, workers=2)
            assert B.entries == B0.entries
            err = max(err, np.abs(B.complex() - B0.complex()).max())
            F = invariant_suite(G, u, "five2")
            i = g[[e[0] for e in F.entries]]
            err = max(err, np.abs(F.complex() - s ** (4 * i * i) * F0.complex()).max())
            worst = max(worst, float(err))
        notes.append(f"max deviation {worst:.1e}, {len(B0.entries)} B triples")
        assert worst < 1e-8


def test_criterion_6_distinguishing_experiment(tmp_path_factory):
    with criterion(6, "(5,11): no {W,T} or {B,T} relabeling between distinct u in 1..4") as notes:
        cache = Cache(tmp_path_factory.mktemp("zcache"))
        rep = run_isotope_experiment(5, 11, ExperimentOptions(sample=256, seed=0, cache=cache))
        assert all(rep.modularity.values()) and all(rep.zesting.values())
        for u, v in itertools.combinations(range(1, 5), 2):
            key = f"{u},{v}"
            for table, name in ((rep.wt, "W,T"), (rep.bt, "B,T")):
                res = table[key]
                assert not res["equivalent"] and res["exhausted"], (name, key)
                assert "reason" in res["certificate"]
        st = {k: len(v["witnesses"]) for k, v in rep.st.items() if v["equivalent"]}
        for k in st:
            assert all(w["verified"] for w in rep.st[k]["witnesses"])
        notes.append(f"(S,T) witnesses for pairs {sorted(st)}")
        assert rep.st["1,4"]["equivalent"]


def test_criterion_7_zesting_group_laws():
    with criterion(7, "compose/invert homomorphism and inverse on the (3,7) S matrix", budget=10) as notes:
        md = modular_data(make_group(3, 7), 0)
        zs = enumerate_zestings(3)
        for a, b in itertools.product(zs, repeat=2):
            one = zest_modular_data(md, compose(a, b))
            two = zest_modular_data(zest_modular_data(md, a), b)
            assert one.S == two.S and np.array_equal(one.T_exp, two.T_exp)
            back = zest_modular_data(zest_modular_data(md, a), invert(a))
            assert back.S == md.S and np.array_equal(back.T_exp, md.T_exp)
        for a, b, c in itertools.product(zs, repeat=3):
            assert compose(compose(a, b), c) == compose(a, compose(b, c))
        notes.append("9 ordered pairs, 27 triples")


def test_criterion_8_trace_neutrality():
    with criterion(8, "f(i)/t(i,i) = 1 exactly for p in {3,5}, all u, all i") as notes:
        count = 0
        for p in (3, 5):
            for u in range(p):
                params = zest_params(p, u=u)
                for i in range(p):
                    assert trace_neutral(params, i)
                    count += 1
        notes.append(f"{count} cases")
