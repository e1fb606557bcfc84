"""Cyclic Tannakian ribbon zesting with parameters (a, b, s).

Here the grading group is Z/N with N = p, the pointed part is bosonic so the
epsilon term vanishes, and every admissible ``s`` is an N^2-th root of unity.
Phases are therefore tracked as exponents of ``zeta_{N^2}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .braids import ColoredBraid, parse_braid_word
from .cyclotomic import CycNum, root_of_unity
from .twisted_double import ModularData, enumerate_simples

__all__ = [
    "ZestError",
    "ZestParams",
    "ZestRecord",
    "GradedLinkDescriptor",
    "enumerate_zestings",
    "zest_params",
    "zest_data",
    "zest_modular_data",
    "zest_link_scalar",
    "compose",
    "invert",
    "identity_zesting",
    "trace_neutral",
    "associative_condition",
    "lambda_a_cocycle",
    "retag_as_twist",
]


class ZestError(ValueError):
    pass


@dataclass(frozen=True)
class ZestParams:
    N: int
    a: int
    b: int
    s_exp: int  # s = exp(2 pi i s_exp / N^2)
    epsilon: int = 0

    def __post_init__(self):
        N = self.N
        if N < 1:
            raise ZestError("N must be positive")
        if self.epsilon != 0:
            raise ZestError("only the bosonic case epsilon = 0 is supported")
        object.__setattr__(self, "a", self.a % N)
        object.__setattr__(self, "b", self.b % N)
        object.__setattr__(self, "s_exp", self.s_exp % (N * N))
        if (self.a - self.epsilon - 2 * self.b) % N:
            raise ZestError(f"a={self.a} must equal epsilon + 2b mod {N}")
        if not (self.s ** N * self.zeta ** (self.epsilon + 2 * self.b)) == 1:
            raise ZestError("s^N must equal zeta^-(epsilon + 2b)")

    @property
    def zeta(self) -> CycNum:
        return root_of_unity(2 * self.N, 1)

    @property
    def s(self) -> CycNum:
        return root_of_unity(self.N * self.N, self.s_exp)

    def s_power(self, k: int) -> CycNum:
        return root_of_unity(self.N * self.N, self.s_exp * k)

    def is_canonical(self) -> bool:
        """Whether s is the distinguished solution exp(-2 pi i b / N^2)."""
        return self.s_exp == (-self.b) % (self.N * self.N)

    def to_json(self) -> dict:
        return {"N": self.N, "a": self.a, "b": self.b, "epsilon": self.epsilon, "s": self.s.to_json(),
                "s_exponent": [self.s_exp, self.N * self.N]}

    @classmethod
    def from_json(cls, data: dict) -> "ZestParams":
        N = int(data["N"])
        if "s_exponent" in data:
            e, den = data["s_exponent"]
            if (e * N * N) % den:
                raise ZestError("s is not an N^2-th root of unity")
            s_exp = e * N * N // den
        else:
            s_exp = _root_exponent(CycNum.from_json(data["s"]), N * N)
        return cls(N, int(data["a"]), int(data["b"]), s_exp, int(data.get("epsilon", 0)))


def _root_exponent(x: CycNum, n: int) -> int:
    e = int(round(np.angle(x.to_complex()) / (2 * np.pi) * n)) % n
    if root_of_unity(n, e) != x:
        raise ZestError(f"{x!r} is not an {n}-th root of unity")
    return e


def zest_params(N: int, a: int | None = None, b: int | None = None, s: CycNum | int | None = None,
                u: int | None = None) -> ZestParams:
    """Build params from the u shorthand or from (a, b[, s]); s defaults to the canonical root."""
    if u is not None:
        return ZestParams(N, 2 * u, u, -u)
    if b is None:
        raise ZestError("need u or b")
    if a is None:
        a = 2 * b
    if s is None:
        s_exp = -b
    elif isinstance(s, CycNum):
        s_exp = _root_exponent(s, N * N)
    else:
        s_exp = int(s)
    return ZestParams(N, a, b, s_exp)


def enumerate_zestings(p: int) -> list[ZestParams]:
    """The family (2u, u, exp(-2 pi i u / p^2)) for u = 0..p-1."""
    return [zest_params(p, u=u) for u in range(p)]


def identity_zesting(N: int) -> ZestParams:
    return ZestParams(N, 0, 0, 0)


class ZestRecord(NamedTuple):
    lambda_a: int  # exponent of the generator g
    lambda_b: CycNum
    t: CycNum
    f: CycNum


def _carry(i: int, j: int, N: int) -> int:
    return 1 if (i % N) + (j % N) >= N else 0


def _lambda_b_exp(params: ZestParams, i: int, j: int, k: int) -> int:
    """lambda_b(i,j,k) as an exponent of zeta_{N^2}."""
    N = params.N
    if not _carry(i, j, N):
        return 0
    # zeta^(2bk) with zeta = exp(pi i / N), i.e. exp(2 pi i b k / N)
    return ((k % N) * params.b * N) % (N * N)


def zest_data(i: int, j: int, k: int, params: ZestParams) -> ZestRecord:
    N = params.N
    la = params.a if _carry(i, j, N) else 0
    lb = root_of_unity(2 * N, (k % N) * (params.epsilon + 2 * params.b)) if _carry(i, j, N) else CycNum.one()
    return ZestRecord(la, lb, params.s_power(-(i % N) * (j % N)), params.s_power(-(i % N) ** 2))


def trace_neutral(params: ZestParams, i: int) -> bool:
    """f(i) / t(i, i) == 1, the condition that leaves traces unchanged."""
    rec = zest_data(i, i, 0, params)
    return rec.f / rec.t == 1


def lambda_a_cocycle(params: ZestParams, i: int, j: int, k: int) -> bool:
    N = params.N
    lhs = (zest_data(i, j, 0, params).lambda_a + zest_data((i + j) % N, k, 0, params).lambda_a) % N
    rhs = (zest_data(j, k, 0, params).lambda_a + zest_data(i, (j + k) % N, 0, params).lambda_a) % N
    return lhs == rhs


def associative_condition(params: ZestParams, i: int, j: int, k: int, m: int) -> bool:
    """Scalar form of the associative zesting condition in the bosonic cyclic case.

    The crossing of lambda_a(i, j) past the k-strand is trivial on the
    Tannakian part, so the condition says lambda_b is a 3-cocycle on Z/N.
    """
    N = params.N

    def lb(x, y, z):
        return zest_data(x % N, y % N, z % N, params).lambda_b

    lhs = lb(j, k, m) * lb(i, j + k, m) * lb(i, j, k)
    rhs = lb(i + j, k, m) * lb(i, j, k + m)
    return lhs == rhs


# -- modular data ----------------------------------------------------------

def _check_grading_group(md: ModularData, params: ZestParams) -> None:
    if params.N != md.group.p:
        raise ZestError(f"zesting over Z/{params.N} does not match grading group Z/{md.group.p}")


def zest_modular_data(md: ModularData, params: ZestParams) -> ModularData:
    """``S -> s^{2ij} S`` and ``T -> s^{-i^2} T`` entrywise; labels are kept."""
    _check_grading_group(md, params)
    N, M = params.N, md.conductor
    if M % (N * N):
        raise ZestError("conductor of the modular data cannot hold s")
    step = M // (N * N)
    g = np.array(md.gradings, dtype=np.int64) % N
    s_exp = params.s_exp * step
    S = md.S.multiply_roots(2 * s_exp * np.outer(g, g))
    T = (md.T_exp - s_exp * g * g) % M
    return ModularData(md.group, md.u, list(md.simples), S, T)


def retag_as_twist(md: ModularData, u: int) -> ModularData:
    """Relabel simples with the twist-u tags via the (class, irrep index) bijection."""
    target = enumerate_simples(md.group, u)
    keys = [x.key() if hasattr(x, "key") else _key_from_json(x) for x in md.simples]
    if keys != [x.key() for x in target]:
        raise ZestError("simple labels do not follow the twisted-double ordering")
    return ModularData(md.group, u % md.group.p, target, md.S, md.T_exp)


def _key_from_json(rec: dict) -> tuple:
    tag = dict(rec["irrep"])
    tag.pop("u", None)
    return (tuple(rec["class_rep"]), tuple(sorted(tag.items())))


# -- group laws ------------------------------------------------------------

def compose(pA: ZestParams, pB: ZestParams) -> ZestParams:
    if pA.N != pB.N:
        raise ZestError(f"cannot compose zestings over Z/{pA.N} and Z/{pB.N}")
    return ZestParams(pA.N, pA.a + pB.a, pA.b + pB.b, pA.s_exp + pB.s_exp)


def invert(params: ZestParams) -> ZestParams:
    return ZestParams(params.N, -params.a, -params.b, -params.s_exp)


# -- link scalar -----------------------------------------------------------

@dataclass(frozen=True)
class GradedLinkDescriptor:
    """Strand gradings (by starting position), a braid word and framing data.

    ``twist_corrections`` lists (strand, power) pairs: a factor theta^power on
    the component through that strand.
    """

    gradings: tuple
    word: tuple
    framing: str = "as-drawn"
    twist_corrections: tuple = field(default=())

    @classmethod
    def from_text(cls, gradings: Sequence[int], word: str, framing: str = "as-drawn",
                  twist_corrections: Sequence[tuple[int, int]] = ()) -> "GradedLinkDescriptor":
        return cls(tuple(gradings), tuple(parse_braid_word(word)), framing, tuple(twist_corrections))

    @classmethod
    def from_braid(cls, b: ColoredBraid, twist_corrections: Sequence[tuple[int, int]] = ()) -> "GradedLinkDescriptor":
        return cls(tuple(c.grading for c in b.colors), tuple(b.word), b.framing, tuple(twist_corrections))

    def _shape(self) -> ColoredBraid:
        # reuse ColoredBraid bookkeeping with the gradings standing in for colors
        class _C(NamedTuple):
            index: int
        return ColoredBraid(len(self.gradings), self.word, tuple(_C(g) for g in self.gradings), self.framing)


def zest_link_scalar(d: GradedLinkDescriptor, params: ZestParams) -> CycNum:
    """Factor h with (zested invariant) = h * (invariant), accumulated crossing by crossing."""
    N = params.N
    NN = N * N
    shape = d._shape()
    comps = shape.components()
    owner = {s: ci for ci, comp in enumerate(comps) for s in comp}
    grades = [g % N for g in d.gradings]
    e = 0
    pos = list(grades)
    for i, sign in d.word:
        y, z = pos[i - 1], pos[i]
        x = sum(pos[: i - 1]) % N
        e += sign * (-y * z) * params.s_exp  # t(y, z)^sign
        e += _lambda_b_exp(params, x, z, y) - _lambda_b_exp(params, x, y, z)
        pos[i - 1], pos[i] = z, y
    powers = [0] * len(comps)
    if d.framing == "zero-framed":
        for ci, w in enumerate(shape.component_writhes()):
            powers[ci] -= w
    for strand, power in d.twist_corrections:
        powers[owner[strand]] += power
    for ci, comp in enumerate(comps):
        i = grades[comp[0]]
        e += powers[ci] * (-i * i) * params.s_exp  # f(i)^power
        # closing the component: f(i) / t(i, i) = 1
        e += (-i * i) * params.s_exp - (-i * i) * params.s_exp
    return root_of_unity(NN, e % NN)
