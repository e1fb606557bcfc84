"""Relabeling search: permutations of simples preserving S, T and attached invariants.

Exact data is mapped to integer ids through a shared :class:`KeyTable`, so
comparisons are integer equality.  Float data is compared with an absolute
tolerance; values landing in the escalation band are recomputed exactly when
a callback is available.

The search is a depth-first backtracking over fingerprint-respecting
bijections.  Fingerprints are built only from the constrained data, so they
never exclude a valid relabeling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "KeyTable",
    "Constraint",
    "LabelData",
    "RelabelingWitness",
    "SearchResult",
    "find_relabelings",
    "brute_force_relabelings",
    "TOL",
    "BAND",
]

TOL = 1e-7
BAND = 1e-5


class KeyTable:
    """Interns canonical coefficient rows as small integers (shared across both sides)."""

    def __init__(self):
        self._ids: dict[bytes, int] = {}

    def ids(self, rows: np.ndarray) -> np.ndarray:
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        flat = rows.reshape(-1, rows.shape[-1])
        out = np.empty(len(flat), dtype=np.int64)
        for k, r in enumerate(flat):
            out[k] = self._ids.setdefault(r.tobytes(), len(self._ids))
        return out.reshape(rows.shape[:-1])

    def scalar(self, row: np.ndarray) -> int:
        return int(self.ids(np.asarray(row)[None, :])[0])


@dataclass
class Constraint:
    """One piece of labeled data.

    ``arity`` 1: vector; 2: matrix; 3: sampled triples.  ``values`` holds
    integer ids (exact) or complex numbers (float).  For arity 3, ``values``
    maps triples to values and ``evaluate`` computes a value on demand.
    """

    name: str
    arity: int
    values: object
    exact: bool = True
    evaluate: Callable | None = None
    exact_fn: Callable | None = None  # index -> exact id, used for escalation

    def get3(self, t: tuple):
        v = self.values.get(t) if isinstance(self.values, dict) else None
        if v is None:
            if self.evaluate is None:
                raise KeyError(f"{self.name}{t} not available")
            v = self.evaluate(t)
            self.values[t] = v
        return v


@dataclass
class LabelData:
    rank: int
    constraints: dict = field(default_factory=dict)
    unit: int = 0

    def add(self, c: Constraint) -> "LabelData":
        self.constraints[c.name] = c
        return self


@dataclass
class RelabelingWitness:
    permutation: list
    verified: bool
    checked_constraints: list
    escalations: int = 0

    def to_json(self) -> dict:
        return {"permutation": [int(x) for x in self.permutation], "verified": self.verified,
                "checked_constraints": list(self.checked_constraints), "escalations": self.escalations}


@dataclass
class SearchResult:
    witnesses: list
    exhausted: bool
    certificate: dict

    @property
    def equivalent(self) -> bool:
        return bool(self.witnesses)

    def to_json(self) -> dict:
        return {"equivalent": self.equivalent, "exhausted": self.exhausted,
                "witnesses": [w.to_json() for w in self.witnesses], "certificate": self.certificate}


# -- comparisons -----------------------------------------------------------

def _eq(c: Constraint, a, b) -> bool:
    """Pruning test: float values inside the escalation band stay candidates for :func:`_verify`."""
    if c.exact:
        return a == b
    return abs(a - b) <= BAND


def _chain_groups(x: np.ndarray) -> np.ndarray:
    """Single-linkage groups on a line: neighbours closer than BAND share a group."""
    order = np.argsort(x, kind="stable")
    breaks = np.concatenate([[0], (np.diff(x[order]) > BAND).astype(np.int64)])
    out = np.empty(len(x), dtype=np.int64)
    out[order] = np.cumsum(breaks)
    return out


def _cluster_ids(z: np.ndarray) -> np.ndarray:
    """Integer ids for complex values such that |a - b| <= BAND implies equal ids."""
    z = np.asarray(z, dtype=complex).ravel()
    if not len(z):
        return np.zeros(0, dtype=np.int64)
    re = _chain_groups(z.real)
    out = np.empty(len(z), dtype=np.int64)
    nxt = 0
    for g in np.unique(re):
        idx = np.nonzero(re == g)[0]
        sub = _chain_groups(z.imag[idx])
        out[idx] = sub + nxt
        nxt += int(sub.max()) + 1
    return out


def _fingerprint_view(A: "LabelData", B: "LabelData", name: str) -> tuple[object, object]:
    """Exact stand-ins for one constraint on both sides, for fingerprinting only.

    Float data is clustered jointly over both sides, so two values that could
    still be judged equal (directly or after escalation) always get the same id.
    """
    ca, cb = A.constraints[name], B.constraints[name]
    if ca.arity == 3:
        va = [ca.get3((i, i, i)) for i in range(A.rank)]
        vb = [cb.get3((i, i, i)) for i in range(B.rank)]
    else:
        va, vb = np.asarray(ca.values), np.asarray(cb.values)
    if ca.exact:
        return np.asarray(va), np.asarray(vb)
    va, vb = np.asarray(va, dtype=complex), np.asarray(vb, dtype=complex)
    ids = _cluster_ids(np.concatenate([va.ravel(), vb.ravel()]))
    return ids[:va.size].reshape(va.shape), ids[va.size:].reshape(vb.shape)


def _fingerprints(data: "LabelData", names: Sequence[str], views: dict | None = None) -> list[tuple]:
    """Per-label fingerprint built only from the named constraints.

    ``views`` maps a constraint name to exact stand-in values (see
    :func:`_fingerprint_view`); without it the raw values must be exact.
    """
    fps: list[list] = [[] for _ in range(data.rank)]
    for name in names:
        c = data.constraints[name]
        v = views[name] if views is not None else None
        if v is None:
            if not c.exact:
                raise ValueError(f"float constraint {name!r} needs a fingerprint view")
            v = np.asarray([c.get3((i, i, i)) for i in range(data.rank)]) if c.arity == 3 else np.asarray(c.values)
        for i in range(data.rank):
            if c.arity == 2:
                f = (int(v[i, i]), tuple(sorted(v[i, :].tolist())), tuple(sorted(v[:, i].tolist())))
            else:
                f = int(v[i])
            fps[i].append((name, f))
    return [tuple(f) for f in fps]


# -- search ----------------------------------------------------------------

def _consistent(A: LabelData, B: LabelData, names, perm: dict, i: int, j: int,
                triples_by_label: dict) -> bool:
    for name in names:
        ca, cb = A.constraints[name], B.constraints[name]
        if ca.arity == 1:
            if not _eq(ca, ca.values[i], cb.values[j]):
                return False
        elif ca.arity == 2:
            if not _eq(ca, ca.values[i, i], cb.values[j, j]):
                return False
            for i2, j2 in perm.items():
                if not (_eq(ca, ca.values[i, i2], cb.values[j, j2]) and _eq(ca, ca.values[i2, i], cb.values[j2, j])):
                    return False
        else:
            trial = dict(perm)
            trial[i] = j
            for t in triples_by_label.get(name, {}).get(i, ()):
                if all(x in trial for x in t):
                    if not _eq(ca, ca.get3(t), cb.get3(tuple(trial[x] for x in t))):
                        return False
    return True


def _verify(A: LabelData, B: LabelData, names, perm: list) -> tuple[bool, int]:
    """Re-check a full permutation against every constraint; returns (ok, escalations)."""
    P = np.asarray(perm)
    escalations = 0
    for name in names:
        ca, cb = A.constraints[name], B.constraints[name]
        if ca.arity == 1:
            a, b = np.asarray(ca.values), np.asarray(cb.values)[P]
        elif ca.arity == 2:
            a, b = np.asarray(ca.values), np.asarray(cb.values)[np.ix_(P, P)]
        else:
            ts = list(ca.values.keys())
            a = np.array([ca.values[t] for t in ts])
            b = np.array([cb.get3(tuple(int(P[x]) for x in t)) for t in ts])
        if ca.exact:
            if not np.array_equal(a, b):
                return False, escalations
            continue
        diff = np.abs(a - b)
        if (diff > BAND).any():
            return False, escalations
        band = np.argwhere((diff > TOL) & (diff <= BAND))
        for idx in band:
            if ca.exact_fn is None or cb.exact_fn is None:
                return False, escalations
            escalations += 1
            ia = tuple(int(x) for x in idx)
            if ca.arity == 2:
                ib = (int(P[ia[0]]), int(P[ia[1]]))
            elif ca.arity == 1:
                ib = (int(P[ia[0]]),)
            else:
                ib = tuple(int(P[x]) for x in ts[ia[0]])
                ia = ts[ia[0]]
            if ca.exact_fn(ia) != cb.exact_fn(ib):
                return False, escalations
    return True, escalations


def find_relabelings(A: LabelData, B: LabelData, constraints: Sequence[str], limit: int = 1,
                     max_nodes: int = 5_000_000) -> SearchResult:
    """Search unit-fixing permutations pi with B[pi(i)...] == A[i...] for every named constraint."""
    names = list(constraints)
    for name in names:
        if name not in A.constraints or name not in B.constraints:
            raise ValueError(f"constraint {name!r} missing on one side")
        if A.constraints[name].arity != B.constraints[name].arity:
            raise ValueError(f"constraint {name!r} has different arity on the two sides")
    if A.rank != B.rank:
        return SearchResult([], True, {"reason": "rank mismatch", "rank": [A.rank, B.rank], "nodes": 0})
    r = A.rank
    views_a, views_b = {}, {}
    for name in names:
        views_a[name], views_b[name] = _fingerprint_view(A, B, name)
    fa = _fingerprints(A, names, views_a)
    fb = _fingerprints(B, names, views_b)
    classes_a: dict = {}
    classes_b: dict = {}
    for i, f in enumerate(fa):
        classes_a.setdefault(f, []).append(i)
    for j, f in enumerate(fb):
        classes_b.setdefault(f, []).append(j)
    sizes = sorted(len(v) for v in classes_a.values())
    cert = {
        "constraints": names,
        "fingerprint_classes": len(classes_a),
        "fingerprint_class_sizes": sizes,
        "log10_search_space": round(sum(math.lgamma(s + 1) for s in sizes) / math.log(10), 3),
        "nodes": 0,
    }
    if {k: len(v) for k, v in classes_a.items()} != {k: len(v) for k, v in classes_b.items()}:
        cert["reason"] = "fingerprint class sizes differ"
        return SearchResult([], True, cert)
    if fa[A.unit] != fb[B.unit]:
        cert["reason"] = "unit fingerprints differ"
        return SearchResult([], True, cert)

    triples_by_label: dict = {}
    for name in names:
        c = A.constraints[name]
        if c.arity == 3:
            idx: dict = {}
            for t in list(c.values.keys()):
                for x in set(t):
                    idx.setdefault(x, []).append(t)
            triples_by_label[name] = idx

    # unit first, then small fingerprint classes, then label order
    order = [A.unit] + sorted((i for i in range(r) if i != A.unit), key=lambda i: (len(classes_a[fa[i]]), i))
    cands = {i: [j for j in classes_b[fa[i]] if (j == B.unit) == (i == A.unit)] for i in range(r)}

    witnesses: list[RelabelingWitness] = []
    perm: dict[int, int] = {}
    used = [False] * r
    nodes = 0
    aborted = False

    def dfs(depth: int) -> bool:
        nonlocal nodes, aborted
        if depth == r:
            full = [perm[i] for i in range(r)]
            ok, esc = _verify(A, B, names, full)
            if ok:
                witnesses.append(RelabelingWitness(full, True, names, esc))
            return len(witnesses) >= limit
        i = order[depth]
        for j in cands[i]:
            if used[j]:
                continue
            nodes += 1
            if nodes > max_nodes:
                aborted = True
                return True
            if not _consistent(A, B, names, perm, i, j, triples_by_label):
                continue
            perm[i] = j
            used[j] = True
            stop = dfs(depth + 1)
            del perm[i]
            used[j] = False
            if stop:
                return True
        return False

    dfs(0)
    cert["nodes"] = nodes
    exhausted = not aborted and len(witnesses) < limit
    if aborted:
        cert["reason"] = f"node budget {max_nodes} exhausted before completion"
    elif not witnesses:
        cert["reason"] = "search exhausted"
    return SearchResult(witnesses, exhausted, cert)


def brute_force_relabelings(A: LabelData, B: LabelData, constraints: Sequence[str]) -> list[list[int]]:
    """All valid unit-fixing permutations by plain enumeration (small ranks only)."""
    from itertools import permutations

    r = A.rank
    rest = [i for i in range(r) if i != A.unit]
    targets = [j for j in range(r) if j != B.unit]
    out = []
    for img in permutations(targets):
        perm = [0] * r
        perm[A.unit] = B.unit
        for i, j in zip(rest, img):
            perm[i] = j
        if _verify(A, B, list(constraints), perm)[0]:
            out.append(perm)
    return out
