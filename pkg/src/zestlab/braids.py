"""Explicit modules over the twisted double and colored braid closures.

Every module is monomial: each group element sends a basis vector to a root of
unity times another basis vector.  Tensor products keep that property, so a
braid word is a pair of integer arrays (target index, phase exponent mod M)
and its quantum trace is a histogram of phases on the fixed points.
"""
from __future__ import annotations

import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from .cyclotomic import CycNum, _reduction_table
from .group import GroupSpec
from .twisted_double import (SimpleLabel, charge_conjugation, enumerate_simples, modular_data,
                             omega_exponent, t_exponents, theta_exponent)

__all__ = [
    "ConventionError",
    "AnyonModule",
    "MonomialOperator",
    "ColoredBraid",
    "InvariantTensor",
    "build_module",
    "parse_braid_word",
    "format_braid_word",
    "braid_generator",
    "word_operator",
    "quantum_trace",
    "link_invariant",
    "link_histogram",
    "check_calibration",
    "invariant_suite",
    "load_braid_words",
    "sample_triples",
]


class ConventionError(RuntimeError):
    """Calibration of the braiding conventions against closed-form modular data failed."""


# -- modules ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AnyonModule:
    label: SimpleLabel
    basis: tuple  # ((g, i), ...)
    degree: np.ndarray  # group index of each basis vector
    perm: np.ndarray  # (|G|, dim) image index
    exp: np.ndarray  # (|G|, dim) phase exponent mod M

    @property
    def dim(self) -> int:
        return len(self.basis)

    def act(self, x_index: int, j: int) -> tuple[int, int]:
        return int(self.perm[x_index, j]), int(self.exp[x_index, j])


def _build_module(G: GroupSpec, u: int, label: SimpleLabel) -> AnyonModule:
    cls, rho = label.conj_class, label.irrep
    basis = tuple((g, i) for g in cls.members for i in range(rho.dim))
    where = {b: j for j, b in enumerate(basis)}
    degree = np.array([G.index(g) for g, _ in basis], dtype=np.int64)
    perm = np.zeros((G.order, len(basis)), dtype=np.int64)
    exp = np.zeros_like(perm)
    for xi, x in enumerate(G.elements()):
        for j, (g, i) in enumerate(basis):
            g2 = G.conj(x, g)
            c = G.mul(G.mul(G.inv(cls.transversal[g2]), x), cls.transversal[g])
            if not cls.centralizes(c):
                raise ConventionError(f"transversal correction {c} leaves the centralizer")
            i2, e = rho.act(c, i)
            perm[xi, j] = where[(g2, i2)]
            exp[xi, j] = e
    return AnyonModule(label, basis, degree, perm, exp)


@lru_cache(maxsize=512)
def _module_cached(G: GroupSpec, u: int, index: int) -> AnyonModule:
    return _build_module(G, u, enumerate_simples(G, u)[index])


def build_module(G: GroupSpec, u: int, label: SimpleLabel) -> AnyonModule:
    """Basis ``(g, i)`` over the class of the label; ``x`` acts through the transversal."""
    u %= G.p
    if enumerate_simples(G, u)[label.index] is label:
        return _module_cached(G, u, label.index)
    return _build_module(G, u, label)


def module_cocycle_exponent(G: GroupSpec, u: int, label: SimpleLabel, y, x, g) -> int:
    """Phase of ``y.(x.v)`` relative to ``(yx).v`` on vectors of degree g."""
    cls = label.conj_class
    a = cls.transversal
    g1 = G.conj(x, g)
    g2 = G.conj(y, g1)
    c1 = G.mul(G.mul(G.inv(a[g2]), y), a[g1])
    c2 = G.mul(G.mul(G.inv(a[g1]), x), a[g])
    return theta_exponent(G, u, cls.representative, c1, c2)


# -- operators -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MonomialOperator:
    """``e_j -> zeta_M^exp[j] e_perm[j]``."""

    perm: np.ndarray
    exp: np.ndarray
    conductor: int

    @classmethod
    def identity(cls, size: int, conductor: int) -> "MonomialOperator":
        return cls(np.arange(size, dtype=np.int64), np.zeros(size, dtype=np.int64), conductor)

    def __matmul__(self, other: "MonomialOperator") -> "MonomialOperator":
        """``self o other``."""
        if len(self.perm) != len(other.perm):
            raise ValueError("operator sizes differ")
        return MonomialOperator(self.perm[other.perm], (other.exp + self.exp[other.perm]) % self.conductor,
                                self.conductor)

    def inverse(self) -> "MonomialOperator":
        ip = np.empty_like(self.perm)
        ip[self.perm] = np.arange(len(self.perm))
        ie = np.empty_like(self.exp)
        ie[self.perm] = (-self.exp) % self.conductor
        return MonomialOperator(ip, ie, self.conductor)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonomialOperator):
            return NotImplemented
        return (self.conductor == other.conductor and np.array_equal(self.perm, other.perm)
                and np.array_equal(self.exp % self.conductor, other.exp % other.conductor))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(len(self.perm))) and not (self.exp % self.conductor).any())

    def trace_histogram(self) -> np.ndarray:
        fixed = self.perm == np.arange(len(self.perm))
        return np.bincount(self.exp[fixed] % self.conductor, minlength=self.conductor).astype(np.int64)

    def to_dense(self) -> np.ndarray:
        n = len(self.perm)
        out = np.zeros((n, n), dtype=complex)
        out[self.perm, np.arange(n)] = np.exp(2j * np.pi * self.exp / self.conductor)
        return out


_TOKEN = re.compile(r"^s(\d+)(?:\^(-?\d+))?$")


def parse_braid_word(word: str) -> list[tuple[int, int]]:
    """``"s1^-2 s2"`` -> ``[(1, -1), (1, -1), (2, 1)]`` (1-based generator, sign)."""
    out = []
    for tok in word.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad braid token {tok!r}")
        i = int(m.group(1))
        power = int(m.group(2)) if m.group(2) is not None else 1
        if i < 1 or power == 0:
            raise ValueError(f"bad braid token {tok!r}")
        out.extend([(i, 1 if power > 0 else -1)] * abs(power))
    return out


def format_braid_word(word: Sequence[tuple[int, int]]) -> str:
    return " ".join(f"s{i}" if s > 0 else f"s{i}^-1" for i, s in word)


def _positive_generator(G: GroupSpec, u: int, mods: Sequence[AnyonModule], i: int) -> MonomialOperator:
    """sigma_i (0-based slots i, i+1) from ``mods`` to ``mods`` with slots i, i+1 swapped."""
    dims = [m.dim for m in mods]
    grid = np.indices(dims).reshape(len(dims), -1)
    degs = [mods[j].degree[grid[j]] for j in range(len(dims))]
    mt, it, b = G.mul_table, G.inv_table, G.bexp
    gl = np.zeros(grid.shape[1], dtype=np.int64)
    for j in range(i):
        gl = mt[gl, degs[j]]
    g, h = degs[i], degs[i + 1]
    new = grid.copy()
    new[i] = mods[i + 1].perm[g, grid[i + 1]]
    new[i + 1] = grid[i]
    phase = mods[i + 1].exp[g, grid[i + 1]]
    ghg = mt[mt[g, h], it[g]]
    M, p = G.conductor, G.p
    unit = u * (M // p)

    def w(x, y, z):
        return np.where(b[x] + b[y] >= p, unit * b[z], 0)

    # rebracket out of (L g) h, cross, rebracket back into (L ghg^-1) g
    exp = (phase - w(gl, g, h) + w(gl, ghg, g)) % M
    new_dims = list(dims)
    new_dims[i], new_dims[i + 1] = dims[i + 1], dims[i]
    perm = np.ravel_multi_index(tuple(new), new_dims)
    return MonomialOperator(perm.astype(np.int64), exp.astype(np.int64), M)


def braid_generator(colors: Sequence[SimpleLabel], i: int, sign: int, G: GroupSpec, u: int) -> MonomialOperator:
    """sigma_i^sign (1-based i) on the left-bracketed product of the colored modules."""
    n = len(colors)
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range for {n} strands")
    mods = [build_module(G, u, c) for c in colors]
    if sign > 0:
        return _positive_generator(G, u, mods, i - 1)
    swapped = list(mods)
    swapped[i - 1], swapped[i] = swapped[i], swapped[i - 1]
    return _positive_generator(G, u, swapped, i - 1).inverse()


def word_operator(colors: Sequence[SimpleLabel], word: Sequence[tuple[int, int]], G: GroupSpec, u: int):
    """Compose a word left to right; returns ``(operator, final colors)``."""
    cols = list(colors)
    size = int(np.prod([build_module(G, u, c).dim for c in cols]))
    op = MonomialOperator.identity(size, G.conductor)
    for i, sign in word:
        op = braid_generator(cols, i, sign, G, u) @ op
        cols[i - 1], cols[i] = cols[i], cols[i - 1]
    return op, cols


# -- closures --------------------------------------------------------------

@dataclass(frozen=True)
class ColoredBraid:
    strands: int
    word: tuple
    colors: tuple
    framing: str = "as-drawn"

    def __post_init__(self):
        if self.framing not in ("as-drawn", "zero-framed"):
            raise ValueError(f"unknown framing {self.framing!r}")
        if len(self.colors) != self.strands:
            raise ValueError("need one color per strand")
        for i, s in self.word:
            if not 1 <= i <= self.strands - 1 or s not in (1, -1):
                raise ValueError(f"generator s{i}^{s} invalid on {self.strands} strands")
        final = [c.index for c in self.colors]
        for i, _ in self.word:
            final[i - 1], final[i] = final[i], final[i - 1]
        if final != [c.index for c in self.colors]:
            raise ValueError("coloring is not compatible with the closure of this braid")

    @classmethod
    def from_text(cls, word: str, colors: Sequence[SimpleLabel], framing: str = "as-drawn") -> "ColoredBraid":
        return cls(len(colors), tuple(parse_braid_word(word)), tuple(colors), framing)

    def permutation(self) -> list[int]:
        """``perm[start position] = end position`` of each strand."""
        pos = list(range(self.strands))  # pos[slot] = strand id
        for i, _ in self.word:
            pos[i - 1], pos[i] = pos[i], pos[i - 1]
        end = [0] * self.strands
        for slot, strand in enumerate(pos):
            end[strand] = slot
        return end

    def components(self) -> list[list[int]]:
        end = self.permutation()
        seen, comps = set(), []
        for s in range(self.strands):
            if s in seen:
                continue
            comp, x = [], s
            while x not in seen:
                seen.add(x)
                comp.append(x)
                x = end[x]
            comps.append(comp)
        return comps

    def component_writhes(self) -> list[int]:
        comps = self.components()
        owner = {s: ci for ci, comp in enumerate(comps) for s in comp}
        writhe = [0] * len(comps)
        pos = list(range(self.strands))
        for i, sign in self.word:
            a, b = pos[i - 1], pos[i]
            if owner[a] == owner[b]:
                writhe[owner[a]] += sign
            pos[i - 1], pos[i] = b, a
        return writhe


def quantum_trace(op: MonomialOperator, colors=None) -> CycNum:
    """Plain trace: the pivotal weights are trivial for these integral categories."""
    return CycNum.from_histogram(op.conductor, op.trace_histogram())


def link_histogram(b: ColoredBraid, G: GroupSpec, u: int) -> np.ndarray:
    """Invariant as an integer histogram over Z_M (value = sum h[e] zeta_M^e)."""
    op, _ = word_operator(b.colors, b.word, G, u)
    hist = op.trace_histogram()
    if b.framing == "zero-framed":
        T = t_exponents(G, u)
        shift = 0
        for comp, w in zip(b.components(), b.component_writhes()):
            shift -= w * int(T[b.colors[comp[0]].index])
        hist = np.roll(hist, shift % G.conductor)
    return hist


def link_invariant(b: ColoredBraid, G: GroupSpec, u: int, backend: str = "exact"):
    hist = link_histogram(b, G, u)
    return _from_hist(hist, G.conductor, backend)


def _from_hist(hist: np.ndarray, M: int, backend: str):
    if backend == "exact":
        return CycNum.from_histogram(M, hist)
    if backend == "float":
        return complex(hist @ np.exp(2j * np.pi * np.arange(M) / M))
    raise ValueError(f"unknown backend {backend!r}")


def check_calibration(G: GroupSpec, u: int, pairs: Sequence[tuple[int, int]] | None = None) -> dict:
    """Unknot, single-crossing and Hopf closures against the closed-form data (exact).

    ``pairs`` restricts the Hopf comparison; by default every pair is used.
    """
    md = modular_data(G, u)
    simples = md.simples
    S = md.S.to_entries()
    T = md.T
    D = md.global_dim
    dual = charge_conjugation(md)
    problems = []
    for x in simples:
        unknot = link_invariant(ColoredBraid(1, (), (x,)), G, u)
        if unknot != x.qdim:
            problems.append(f"unknot {x}: {unknot!r} != {x.qdim}")
        twist = link_invariant(ColoredBraid(2, ((1, 1),), (x, x)), G, u)
        if twist != T[x.index] * x.qdim:
            problems.append(f"twist {x}: {twist!r}")
    if pairs is None:
        pairs = [(i, j) for i in range(len(simples)) for j in range(len(simples))]
    for i, j in pairs:
        hopf = link_invariant(ColoredBraid(2, ((1, 1), (1, 1)), (simples[i], simples[dual[j]])), G, u)
        if hopf != S[i][j] * D:
            problems.append(f"Hopf ({i},{j}): {hopf!r} != D*S")
    if problems:
        raise ConventionError("; ".join(problems[:5]) + (f" (+{len(problems) - 5} more)" if len(problems) > 5 else ""))
    return {"unknot": len(simples), "twist": len(simples), "hopf": len(pairs)}


# -- invariant suites ------------------------------------------------------

def load_braid_words(path=None) -> dict:
    if path is None:
        text = resources.files("zestlab.data").joinpath("braid_words.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


@dataclass
class InvariantTensor:
    """Invariant values stored as integer histograms over Z_M, one row per entry."""

    name: str
    group: GroupSpec
    u: int
    entries: list  # tuples of simple indices
    hist: np.ndarray  # (len(entries), M)
    word: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def conductor(self) -> int:
        return self.group.conductor

    def complex(self) -> np.ndarray:
        M = self.conductor
        return self.hist @ np.exp(2j * np.pi * np.arange(M) / M)

    def exact(self, k: int) -> CycNum:
        return CycNum.from_histogram(self.conductor, self.hist[k])

    def canonical(self) -> np.ndarray:
        """Reduced integer coefficient rows, one per entry."""
        table = _reduction_table(self.conductor)
        return self.hist @ table

    def as_dict(self) -> dict:
        keys = self.canonical()
        return {tuple(e): keys[k] for k, e in enumerate(self.entries)}

    def to_json(self, exact: bool = True) -> dict:
        vals = self.complex()
        out = {
            "name": self.name,
            "group": self.group.to_json(),
            "u": self.u,
            "word": self.word,
            "conductor": self.conductor,
            "entries": [list(map(int, e)) for e in self.entries],
            "float": [[float(z.real), float(z.imag)] for z in vals],
            "meta": self.meta,
        }
        if exact:
            out["histogram"] = [{str(int(e)): int(c) for e, c in enumerate(row) if c} for row in self.hist]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "InvariantTensor":
        g = data["group"]
        G = GroupSpec(int(g["p"]), int(g["q"]), int(g["n"]))
        M = G.conductor
        hist = np.zeros((len(data["entries"]), M), dtype=np.int64)
        for k, row in enumerate(data["histogram"]):
            for e, c in row.items():
                hist[k, int(e)] = c
        return cls(data["name"], G, int(data["u"]), [tuple(e) for e in data["entries"]], hist,
                   data.get("word", ""), data.get("meta", {}))


def _entry_histogram(G: GroupSpec, u: int, recipe: dict, entry: tuple) -> np.ndarray:
    simples = enumerate_simples(G, u)
    names = sorted(set(recipe["colors"]))
    assign = dict(zip(names, entry))
    colors = tuple(simples[assign[c]] for c in recipe["colors"])
    b = ColoredBraid(len(colors), tuple(parse_braid_word(recipe["word"])), colors,
                     recipe.get("framing", "as-drawn"))
    hist = link_histogram(b, G, u)
    shift = 0
    if recipe.get("twist_correction"):
        T = t_exponents(G, u)
        for name, power in recipe["twist_correction"].items():
            shift += power * int(T[assign[name]])
    return np.roll(hist, shift % G.conductor)


def _chunk_worker(args) -> np.ndarray:
    G, u, recipe, entries = args
    return np.stack([_entry_histogram(G, u, recipe, e) for e in entries]) if entries else \
        np.zeros((0, G.conductor), dtype=np.int64)


def evaluate_entries(G: GroupSpec, u: int, recipe: dict, entries: Sequence[tuple], workers: int = 1) -> np.ndarray:
    entries = [tuple(int(x) for x in e) for e in entries]
    if workers <= 1 or len(entries) < 64:
        return _chunk_worker((G, u, recipe, entries))
    step = -(-len(entries) // (4 * workers))
    chunks = [entries[k:k + step] for k in range(0, len(entries), step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_chunk_worker, [(G, u, recipe, c) for c in chunks]))
    return np.concatenate(parts)


def sample_triples(G: GroupSpec, u: int, size: int, seed: int = 0, diagonal: bool = True) -> list[tuple]:
    """Seeded stratified sample: triples touching a nontrivial grading first, then the rest.

    With ``diagonal`` the (X, X, X) triples are prepended for every simple.
    """
    simples = enumerate_simples(G, u)
    r = len(simples)
    rng = np.random.default_rng(seed)
    graded = {x.index for x in simples if x.grading}
    pool_graded = [t for t in np.ndindex(r, r, r)
                   if not t[0] == t[1] == t[2] and (t[0] in graded or t[1] in graded or t[2] in graded)]
    picks: list[tuple] = []
    if len(pool_graded) <= size:
        picks.extend(pool_graded)
    else:
        idx = np.sort(rng.choice(len(pool_graded), size=size, replace=False))
        picks.extend(pool_graded[i] for i in idx)
    chosen = set(picks)
    while len(picks) < size:
        t = tuple(int(v) for v in rng.integers(0, r, size=3))
        if t not in chosen and not t[0] == t[1] == t[2]:
            chosen.add(t)
            picks.append(t)
    head = [(i, i, i) for i in range(r)] if diagonal else []
    return head + picks


def invariant_suite(G: GroupSpec, u: int, which: str, sample: int = 256, seed: int = 0,
                    workers: int = 1, words: dict | None = None) -> InvariantTensor:
    """``which`` is ``w`` (all pairs), ``b`` (seeded triples) or ``five2`` (all simples)."""
    u %= G.p
    words = words or load_braid_words()
    r = len(enumerate_simples(G, u))
    key = {"w": "whitehead", "b": "borromean", "five2": "five2"}.get(which.lower())
    if key is None:
        raise ValueError(f"unknown invariant {which!r}")
    recipe = words[key]
    if key == "whitehead":
        entries = [(x, y) for x in range(r) for y in range(r)]
    elif key == "five2":
        entries = [(x,) for x in range(r)]
    else:
        entries = sample_triples(G, u, sample, seed)
    hist = evaluate_entries(G, u, recipe, entries, workers)
    meta = {"seed": seed, "sample": sample} if key == "borromean" else {}
    return InvariantTensor(key, G, u, entries, hist, recipe["word"], meta)
