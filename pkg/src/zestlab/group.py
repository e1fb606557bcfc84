"""The metacyclic group Z_q x|_n Z_p, its classes and (projective) irreps.

Elements are pairs ``(l, k)`` standing for ``a^l b^k`` with ``b a b^-1 = a^n``.
They are indexed by ``l * p + k`` in every lookup table.

All phases produced here are exponents of ``zeta_M`` with ``M = p^2 q``, the
conductor shared by every module and matrix in the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from .cyclotomic import CycNum, root_of_unity

__all__ = [
    "GroupSpec",
    "GroupElem",
    "ConjClass",
    "Irrep",
    "GroupSpecError",
    "make_group",
    "conjugacy_classes",
    "irreps_of_G",
    "projective_irrep",
    "is_prime",
]


class GroupSpecError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class GroupElem(NamedTuple):
    l: int
    k: int


@dataclass(frozen=True)
class GroupSpec:
    p: int
    q: int
    n: int

    def __post_init__(self):
        p, q, n = self.p, self.q, self.n
        if not (is_prime(p) and p % 2):
            raise GroupSpecError(f"p={p} must be an odd prime")
        if not (is_prime(q) and q % 2):
            raise GroupSpecError(f"q={q} must be an odd prime")
        if (q - 1) % p:
            raise GroupSpecError(f"p={p} must divide q-1={q - 1}")
        if n % q == 1:
            raise GroupSpecError(f"n={n} must satisfy n != 1 mod q")
        if pow(n, p, q) != 1:
            raise GroupSpecError(f"n={n} must satisfy n^p = 1 mod q")

    @property
    def order(self) -> int:
        return self.p * self.q

    @property
    def conductor(self) -> int:
        """Order of the cyclic group of phases used by all modules: p^2 q."""
        return self.p * self.p * self.q

    @property
    def identity(self) -> GroupElem:
        return GroupElem(0, 0)

    def elements(self) -> list[GroupElem]:
        return [GroupElem(l, k) for l in range(self.q) for k in range(self.p)]

    def index(self, g) -> int:
        return (g[0] % self.q) * self.p + (g[1] % self.p)

    def element(self, i: int) -> GroupElem:
        return GroupElem(*divmod(int(i), self.p))

    def mul(self, x, y) -> GroupElem:
        return GroupElem((x[0] + pow(self.n, x[1], self.q) * y[0]) % self.q, (x[1] + y[1]) % self.p)

    def inv(self, x) -> GroupElem:
        k = (-x[1]) % self.p
        return GroupElem((-pow(self.n, k, self.q) * x[0]) % self.q, k)

    def conj(self, x, g) -> GroupElem:
        """``x g x^-1``."""
        return self.mul(self.mul(x, g), self.inv(x))

    def commute(self, x, y) -> bool:
        return self.mul(x, y) == self.mul(y, x)

    @cached_property
    def mul_table(self) -> np.ndarray:
        els = self.elements()
        return np.array([[self.index(self.mul(x, y)) for y in els] for x in els], dtype=np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        return np.array([self.index(self.inv(x)) for x in self.elements()], dtype=np.int64)

    @cached_property
    def bexp(self) -> np.ndarray:
        """b-exponent of each element, i.e. its grading residue in [0, p)."""
        return np.arange(self.order, dtype=np.int64) % self.p

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "n": self.n}


def make_group(p: int, q: int, n: int | None = None) -> GroupSpec:
    """Validate ``(p, q)`` and pick the smallest admissible ``n > 1`` if none is given."""
    if not (is_prime(p) and p % 2):
        raise GroupSpecError(f"p={p} must be an odd prime")
    if not (is_prime(q) and q % 2):
        raise GroupSpecError(f"q={q} must be an odd prime")
    if (q - 1) % p:
        raise GroupSpecError(f"p={p} does not divide q-1={q - 1}")
    if n is None:
        n = next(x for x in range(2, q) if pow(x, p, q) == 1)
    return GroupSpec(p, q, n)


@dataclass(frozen=True)
class ConjClass:
    representative: GroupElem
    members: tuple[GroupElem, ...]
    centralizer: str  # "G", "Z_q" or "Z_p"
    transversal: dict = field(compare=False, hash=False)
    grading: int
    index: int = 0

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def kind(self) -> str:
        """``e``, ``a`` or ``b`` after the shape of the representative."""
        t = self.representative
        if t == (0, 0):
            return "e"
        return "a" if t.k == 0 else "b"

    def centralizes(self, x) -> bool:
        if self.centralizer == "G":
            return True
        if self.centralizer == "Z_q":
            return x[1] == 0
        return x[0] == 0


def _class_of(G: GroupSpec, t: GroupElem) -> list[GroupElem]:
    return sorted({G.conj(x, t) for x in G.elements()})


def _transversal(G: GroupSpec, t: GroupElem, members) -> dict:
    powers_of_a = [GroupElem(m, 0) for m in range(G.q)]
    out = {}
    for g in members:
        cand = [x for x in powers_of_a if G.conj(x, t) == g]
        if not cand:
            cand = sorted(x for x in G.elements() if G.conj(x, t) == g)
        out[g] = cand[0]
    return out


_CLASS_CACHE: dict[GroupSpec, tuple[ConjClass, ...]] = {}


def conjugacy_classes(G: GroupSpec) -> list[ConjClass]:
    """Classes ordered as ``[e]``, the ``[a^l]`` classes, then ``[b^k]`` for k = 1..p-1."""
    if G in _CLASS_CACHE:
        return list(_CLASS_CACHE[G])
    seen: set[GroupElem] = set()
    reps = [GroupElem(0, 0)] + [GroupElem(l, 0) for l in range(1, G.q)] + [GroupElem(0, k) for k in range(1, G.p)]
    classes = []
    for t in reps:
        if t in seen:
            continue
        members = _class_of(G, t)
        seen.update(members)
        if t == (0, 0):
            cent, grading = "G", 0
        elif t.k == 0:
            cent, grading = "Z_q", 0
        else:
            cent, grading = "Z_p", t.k
        classes.append(ConjClass(t, tuple(members), cent, _transversal(G, t, members), grading, len(classes)))
    _CLASS_CACHE[G] = tuple(classes)
    return classes


@dataclass(frozen=True)
class Irrep:
    """A monomial (projective) irrep of a centralizer.

    ``kind`` is one of ``linear`` (m), ``induced`` (s, an orbit representative
    in Z_q), ``zq`` (s, a character of Z_q) or ``projective`` (u, k, s).
    """

    G: GroupSpec
    kind: str
    params: tuple

    @property
    def dim(self) -> int:
        return self.G.p if self.kind == "induced" else 1

    def defined_on(self, x) -> bool:
        if self.kind == "zq":
            return x[1] % self.G.p == 0
        if self.kind == "projective":
            return x[0] % self.G.q == 0
        return True

    def act(self, x, i: int) -> tuple[int, int]:
        """Image of basis vector ``e_i`` under ``x``: ``(i', e)`` meaning ``zeta_M^e e_i'``."""
        G = self.G
        p, q, M = G.p, G.q, G.conductor
        l, k = x[0] % q, x[1] % p
        if self.kind == "linear":
            (m,) = self.params
            return i, (m * k * (M // p)) % M
        if self.kind == "zq":
            (s,) = self.params
            if k:
                raise ValueError(f"{x} lies outside Z_q")
            return i, (s * l * (M // q)) % M
        if self.kind == "induced":
            (s,) = self.params
            j = (k + i) % p
            ninv = pow(G.n, -(k + i), q)
            return j, (s * l * ninv * (M // q)) % M
        if self.kind == "projective":
            u, kk, s = self.params
            if l:
                raise ValueError(f"{x} lies outside <b>")
            return i, (s * k * (M // p) + u * kk * k * (M // (p * p))) % M
        raise ValueError(self.kind)

    def character_exponents(self, x) -> list[int]:
        """Exponents of the roots of unity summing to the character value at ``x``."""
        out = []
        for i in range(self.dim):
            j, e = self.act(x, i)
            if j == i:
                out.append(e)
        return out

    def __call__(self, x) -> CycNum:
        M = self.G.conductor
        counts: dict[int, int] = {}
        for e in self.character_exponents(x):
            counts[e] = counts.get(e, 0) + 1
        return CycNum.from_exponents(M, counts) if counts else CycNum.zero(M)

    def tag(self) -> dict:
        names = {"linear": ("m",), "induced": ("s",), "zq": ("s",), "projective": ("u", "k", "s")}
        d = {"kind": self.kind}
        d.update(zip(names[self.kind], self.params))
        return d

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """``(perm, exp)`` arrays of shape ``(|G|, dim)``; -1 marks elements outside the domain."""
        G = self.G
        perm = np.full((G.order, self.dim), -1, dtype=np.int64)
        exp = np.zeros((G.order, self.dim), dtype=np.int64)
        for xi, x in enumerate(G.elements()):
            if not self.defined_on(x):
                continue
            for i in range(self.dim):
                perm[xi, i], exp[xi, i] = self.act(x, i)
        return perm, exp


def induced_orbit_reps(G: GroupSpec) -> list[int]:
    """Smallest element of each <n>-orbit on Z_q minus zero."""
    reps, seen = [], set()
    for s in range(1, G.q):
        if s in seen:
            continue
        seen.update(s * pow(G.n, j, G.q) % G.q for j in range(G.p))
        reps.append(s)
    return reps


def irreps_of_G(G: GroupSpec) -> list[Irrep]:
    """p linear characters followed by the (q-1)/p induced irreps of degree p."""
    lin = [Irrep(G, "linear", (m,)) for m in range(G.p)]
    ind = [Irrep(G, "induced", (s,)) for s in induced_orbit_reps(G)]
    return lin + ind


def projective_irrep(G: GroupSpec, u: int, k: int, s: int) -> Callable[[int], CycNum]:
    """``l -> exp(2 pi i s l / p) exp(2 pi i u k l / p^2)`` at conductor p^2."""
    p = G.p
    if k % p == 0:
        raise ValueError("projective irreps are attached to classes [b^k] with k != 0")

    def rho(l: int) -> CycNum:
        l %= p
        return root_of_unity(p * p, s * l * p + u * k * l)

    return rho
