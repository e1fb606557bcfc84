"""Isotope experiment: modular data for every twist, zesting check, relabeling searches."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .braids import InvariantTensor, _entry_histogram, invariant_suite, load_braid_words
from .cache import Cache
from .cyclotomic import _reduction_table
from .group import GroupSpec, make_group
from .relabel import TOL, Constraint, KeyTable, LabelData, find_relabelings
from .twisted_double import ModularData, check_modularity, modular_data
from .zesting import zest_modular_data, zest_params

__all__ = ["ExperimentOptions", "ExperimentReport", "label_data", "cached_invariant", "run_isotope_experiment",
           "zesting_matches_twist"]


@dataclass
class ExperimentOptions:
    sample: int = 256
    seed: int = 0
    workers: int = 1
    limit: int = 1
    max_nodes: int = 5_000_000
    timing: bool = False
    cache: Cache | None = None
    us: list | None = None


@dataclass
class ExperimentReport:
    group: GroupSpec
    us: list
    zesting: dict
    modularity: dict
    st: dict
    wt: dict
    bt: dict
    backend: dict
    timing: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "group": self.group.to_json(),
            "u_values": list(self.us),
            "zesting_matches_twist": self.zesting,
            "modularity": self.modularity,
            "S_T": self.st,
            "W_T": self.wt,
            "B_T": self.bt,
            "backend": self.backend,
        }
        if self.timing:
            out["timing"] = self.timing
        return out

    def distinguishable_pairs(self, which: str = "W_T") -> list[str]:
        table = {"S_T": self.st, "W_T": self.wt, "B_T": self.bt}[which]
        return [k for k, v in table.items() if not v["equivalent"] and v["exhausted"]]


def _pair_key(u: int, v: int) -> str:
    return f"{u},{v}"


def label_data(md: ModularData, table: KeyTable, W: InvariantTensor | None = None,
               B: InvariantTensor | None = None, five2: InvariantTensor | None = None,
               b_evaluator=None) -> LabelData:
    """Wrap modular data and invariants as search constraints with shared exact ids."""
    r = md.rank
    data = LabelData(r)
    red, den = md.S.canonical()
    rows = np.concatenate([red, np.full(red.shape[:2] + (1,), den, dtype=red.dtype)], axis=2)
    data.add(Constraint("S", 2, table.ids(rows)))
    data.add(Constraint("T", 1, np.asarray(md.T_exp, dtype=np.int64)))
    data.add(Constraint("qdim", 1, np.asarray(md.qdims, dtype=np.int64)))
    data.add(Constraint("grading", 1, np.asarray(md.gradings, dtype=np.int64)))
    if W is not None:
        ids = table.ids(W.canonical())
        mat = np.zeros((r, r), dtype=np.int64)
        for k, (x, y) in enumerate(W.entries):
            mat[x, y] = ids[k]
        data.add(Constraint("W", 2, mat))
    if five2 is not None:
        ids = table.ids(five2.canonical())
        vec = np.zeros(r, dtype=np.int64)
        for k, (x,) in enumerate(five2.entries):
            vec[x] = ids[k]
        data.add(Constraint("five2", 1, vec))
    if B is not None or b_evaluator is not None:
        values = {}
        if B is not None:
            ids = table.ids(B.canonical())
            values = {tuple(e): int(ids[k]) for k, e in enumerate(B.entries)}
        data.add(Constraint("B", 3, values, evaluate=b_evaluator))
    return data


def cached_invariant(G: GroupSpec, u: int, which: str, cache: Cache | None, sample: int = 256, seed: int = 0,
                     workers: int = 1) -> InvariantTensor:
    words = load_braid_words()
    name = {"w": "whitehead", "b": "borromean", "five2": "five2"}[which]
    fields = {"p": G.p, "q": G.q, "n": G.n, "u": u % G.p, "backend": "exact-monomial",
              "word": words[name]["word"], "twist": words[name].get("twist_correction", {}),
              "sample": sample if which == "b" else None, "seed": seed if which == "b" else None}
    if cache is not None:
        hit = cache.get(f"invariant-{name}", fields)
        if hit is not None:
            return InvariantTensor.from_json(hit)
    tensor = invariant_suite(G, u, which, sample=sample, seed=seed, workers=workers, words=words)
    if cache is not None:
        cache.put(f"invariant-{name}", fields, tensor.to_json())
    return tensor


def _b_evaluator(G: GroupSpec, u: int, table: KeyTable):
    recipe = load_braid_words()["borromean"]
    red = _reduction_table(G.conductor)

    def ev(t: tuple) -> int:
        return table.scalar(_entry_histogram(G, u, recipe, t) @ red)

    return ev


def zesting_matches_twist(md0: ModularData, md: ModularData) -> bool:
    zested = zest_modular_data(md0, zest_params(md0.group.p, u=md.u))
    return bool(zested.S == md.S and np.array_equal(zested.T_exp, md.T_exp))


def run_isotope_experiment(p: int, q: int, options: ExperimentOptions | None = None,
                           n: int | None = None) -> ExperimentReport:
    opts = options or ExperimentOptions()
    G = make_group(p, q, n)
    us = list(opts.us) if opts.us is not None else list(range(p))
    timing: dict = {}

    def stage(name):
        class _Stage:
            def __enter__(self_):
                self_.t = time.perf_counter()

            def __exit__(self_, exc_type, exc, tb):
                timing[name] = round(time.perf_counter() - self_.t, 3)
                if exc is not None:
                    raise RuntimeError(f"experiment stage {name!r} failed: {exc}") from exc
        return _Stage()

    with stage("modular_data"):
        mds = {u: modular_data(G, u) for u in us}
    with stage("modularity"):
        modularity = {str(u): bool(check_modularity(mds[u], fusion=False)) for u in us}
    with stage("zesting"):
        md0 = mds[0] if 0 in mds else modular_data(G, 0)
        zesting = {str(u): zesting_matches_twist(md0, mds[u]) for u in us}
    with stage("invariants"):
        W = {u: cached_invariant(G, u, "w", opts.cache, workers=opts.workers) for u in us}
        B = {u: cached_invariant(G, u, "b", opts.cache, opts.sample, opts.seed, opts.workers) for u in us}

    table = KeyTable()
    st, wt, bt = {}, {}, {}
    with stage("search"):
        for u, v in combinations(us, 2):
            left = label_data(mds[u], table, W=W[u], B=B[u])
            right = label_data(mds[v], table, W=W[v], b_evaluator=_b_evaluator(G, v, table))
            key = _pair_key(u, v)
            st[key] = find_relabelings(left, right, ["S", "T"], opts.limit, opts.max_nodes).to_json()
            wt[key] = find_relabelings(left, right, ["W", "T"], opts.limit, opts.max_nodes).to_json()
            bt[key] = find_relabelings(left, right, ["B", "T"], opts.limit, opts.max_nodes).to_json()

    backend = {"invariants": "exact-monomial", "search": "exact", "float_tolerance": TOL,
               "b_sample": opts.sample, "b_seed": opts.seed, "b_triples": len(next(iter(B.values())).entries)}
    return ExperimentReport(G, us, zesting, modularity, st, wt, bt, backend, timing if opts.timing else {})
