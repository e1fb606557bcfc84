from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zestlab.relabel import (Constraint, KeyTable, LabelData, _fingerprints, brute_force_relabelings,
                             find_relabelings)


def synthetic(rank, alphabet, seed, with_b=False):
    rng = np.random.default_rng(seed)
    S = rng.integers(0, alphabet, size=(rank, rank))
    S = np.triu(S) + np.triu(S, 1).T
    T = rng.integers(0, alphabet, size=rank)
    data = LabelData(rank).add(Constraint("S", 2, S)).add(Constraint("T", 1, T))
    if with_b:
        vals = {t: int(rng.integers(0, alphabet)) for t in np.ndindex(rank, rank, rank)}
        data.add(Constraint("B", 3, vals))
    return data


def permuted(data, perm):
    """Data B with B[perm[i], perm[j]] = A[i, j]."""
    r = data.rank
    inv = np.argsort(perm)
    out = LabelData(r)
    for name, c in data.constraints.items():
        if c.arity == 1:
            v = np.asarray(c.values)[inv]
        elif c.arity == 2:
            v = np.asarray(c.values)[np.ix_(inv, inv)]
        else:
            v = {tuple(int(perm[x]) for x in t): val for t, val in c.values.items()}
        out.add(Constraint(name, c.arity, v, c.exact))
    return out


def random_perm(rank, rng):
    return np.concatenate([[0], 1 + rng.permutation(rank - 1)])


def test_identity_found_first():
    A = synthetic(10, 4, 0)
    res = find_relabelings(A, A, ["S", "T"])
    assert res.equivalent and res.witnesses[0].permutation == list(range(10))
    assert res.witnesses[0].verified


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 12), st.integers(2, 5), st.integers(0, 10 ** 6))
def test_random_permutation_recovered(rank, alphabet, seed):
    A = synthetic(rank, alphabet, seed, with_b=rank <= 6)
    perm = random_perm(rank, np.random.default_rng(seed))
    B = permuted(A, perm)
    names = list(A.constraints)
    res = find_relabelings(A, B, names)
    assert res.equivalent
    w = np.asarray(res.witnesses[0].permutation)
    assert w[0] == 0
    for name in names:
        ca, cb = A.constraints[name], B.constraints[name]
        if ca.arity == 1:
            assert np.array_equal(np.asarray(cb.values)[w], ca.values)
        elif ca.arity == 2:
            assert np.array_equal(np.asarray(cb.values)[np.ix_(w, w)], ca.values)


@pytest.mark.parametrize("seed", range(12))
def test_agrees_with_brute_force(seed):
    rng = np.random.default_rng(seed)
    rank = int(rng.integers(4, 8))
    A = synthetic(rank, 2, seed)
    B = permuted(A, random_perm(rank, rng)) if seed % 2 else synthetic(rank, 2, seed + 100)
    brute = brute_force_relabelings(A, B, ["S", "T"])
    res = find_relabelings(A, B, ["S", "T"], limit=10 ** 6)
    assert sorted(w.permutation for w in res.witnesses) == sorted(brute)
    assert res.exhausted
    # fingerprints never exclude a valid relabeling
    fa = _fingerprints(A, ["S", "T"])
    fb = _fingerprints(B, ["S", "T"])
    for perm in brute:
        assert all(fa[i] == fb[perm[i]] for i in range(rank))


def test_inequivalent_has_certificate():
    A = synthetic(8, 3, 1)
    B = LabelData(8).add(Constraint("S", 2, A.constraints["S"].values)).add(
        Constraint("T", 1, (np.asarray(A.constraints["T"].values) + 1) % 3))
    res = find_relabelings(A, B, ["S", "T"])
    assert not res.equivalent and res.exhausted
    cert = res.certificate
    assert {"constraints", "fingerprint_classes", "log10_search_space", "nodes", "reason"} <= set(cert)


def test_rank_mismatch_is_result():
    res = find_relabelings(synthetic(5, 3, 0), synthetic(6, 3, 0), ["S", "T"])
    assert not res.equivalent and res.exhausted and res.certificate["reason"] == "rank mismatch"


def test_missing_constraint_is_error():
    with pytest.raises(ValueError):
        find_relabelings(synthetic(5, 3, 0), synthetic(5, 3, 0), ["W"])


def test_lazy_triple_constraint():
    A = synthetic(6, 3, 4, with_b=True)
    perm = random_perm(6, np.random.default_rng(2))
    full = permuted(A, perm).constraints["B"].values
    calls = []

    def ev(t):
        calls.append(t)
        return full[t]

    sample = {t: v for k, (t, v) in enumerate(A.constraints["B"].values.items()) if k % 7 == 0 or len(set(t)) == 1}
    A2 = LabelData(6).add(A.constraints["S"]).add(A.constraints["T"]).add(Constraint("B", 3, sample))
    B2 = LabelData(6).add(permuted(A, perm).constraints["S"]).add(permuted(A, perm).constraints["T"]).add(
        Constraint("B", 3, {}, evaluate=ev))
    res = find_relabelings(A2, B2, ["S", "T", "B"])
    assert res.equivalent and calls


def test_float_tolerance_and_escalation():
    rng = np.random.default_rng(5)
    base = np.exp(2j * np.pi * rng.integers(0, 9, size=(6, 6)) / 9)
    base = np.triu(base) + np.triu(base, 1).T
    A = LabelData(6).add(Constraint("S", 2, base, exact=False))
    noisy = base + 1e-9
    B = LabelData(6).add(Constraint("S", 2, noisy, exact=False))
    assert find_relabelings(A, B, ["S"]).equivalent
    # a near-miss inside the escalation band is settled by the exact callback
    near = base.copy()
    near[1, 2] += 3e-6
    near[2, 1] += 3e-6

    def exact(ij):
        return round(base[ij].real, 3), round(base[ij].imag, 3)

    A = LabelData(6).add(Constraint("S", 2, base, exact=False, exact_fn=exact))
    B = LabelData(6).add(Constraint("S", 2, near, exact=False, exact_fn=exact))
    res = find_relabelings(A, B, ["S"])
    assert res.equivalent and res.witnesses[0].escalations > 0
    # without an exact path the same near-miss is rejected
    A = LabelData(6).add(Constraint("S", 2, base, exact=False))
    B = LabelData(6).add(Constraint("S", 2, near, exact=False))
    assert not find_relabelings(A, B, ["S"]).equivalent


def test_key_table_shared():
    t = KeyTable()
    a = t.ids(np.array([[1, 2], [3, 4], [1, 2]]))
    assert a[0] == a[2] != a[1]
    assert t.scalar(np.array([3, 4])) == a[1]


def test_modular_data_self_match(md37):
    from zestlab.experiment import label_data
    table = KeyTable()
    A = label_data(md37[1], table)
    res = find_relabelings(A, A, ["S", "T"], limit=5)
    assert res.witnesses[0].permutation == list(range(25))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1,
                max_size=30), st.data())
def test_clusters_keep_close_values_together(values, data):
    from zestlab.relabel import BAND, _cluster_ids
    k = data.draw(st.integers(0, len(values) - 1))
    d = complex(data.draw(st.floats(-BAND / 2, BAND / 2)), data.draw(st.floats(-BAND / 2, BAND / 2)))
    z = np.array(values + [values[k] + d])
    ids = _cluster_ids(z)
    assert ids[k] == ids[-1]
