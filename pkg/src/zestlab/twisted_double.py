"""Simples and modular data of the twisted double Z(Vect_G^{omega^u}).

The twist ``omega^u`` only sees b-exponents, so every phase is a power of
``zeta_M`` with ``M = p^2 q``.  S is built class-pair by class-pair from
centralizer character tables; every identity is checked exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .cyclotomic import (CycMatrix, CycNum, _reduction_table, fft_error_bound, ring_fft,
                         ring_ifft_exact, root_of_unity)
from .group import (ConjClass, GroupElem, GroupSpec, Irrep, conjugacy_classes, irreps_of_G,
                    make_group)

__all__ = [
    "ModularityError",
    "SimpleLabel",
    "ModularData",
    "omega",
    "omega_exponent",
    "theta_cochain",
    "enumerate_simples",
    "s_matrix",
    "t_matrix",
    "modular_data",
    "gauss_sums",
    "verlinde_fusion",
    "check_modularity",
    "charge_conjugation",
]


class ModularityError(ArithmeticError):
    """An identity that must hold for any modular category failed."""


# -- cocycles ------------------------------------------------------------

def omega_exponent(G: GroupSpec, u: int, g, h, k) -> int:
    """Exponent e with ``omega^u(g, h, k) = zeta_M^e``."""
    p = G.p
    if g[1] % p + h[1] % p >= p:
        return (u * (k[1] % p) * (G.conductor // p)) % G.conductor
    return 0


def omega(G: GroupSpec, u: int) -> Callable[..., CycNum]:
    def w(g, h, k) -> CycNum:
        return root_of_unity(G.conductor, omega_exponent(G, u, g, h, k))
    return w


def theta_exponent(G: GroupSpec, u: int, t, x, y) -> int:
    M = G.conductor
    xy = G.mul(x, y)
    e = omega_exponent(G, u, t, x, y)
    e += omega_exponent(G, u, x, y, G.conj(G.inv(xy), t))
    e -= omega_exponent(G, u, x, G.conj(G.inv(x), t), y)
    return e % M


def theta_cochain(G: GroupSpec, u: int, t) -> Callable[..., CycNum]:
    """``theta_t(x, y) = w(t,x,y) w(x,y,(xy)^-1 t xy) / w(x, x^-1 t x, y)``."""
    def th(x, y) -> CycNum:
        return root_of_unity(G.conductor, theta_exponent(G, u, t, x, y))
    return th


# -- simples -------------------------------------------------------------

@dataclass(frozen=True)
class SimpleLabel:
    conj_class: ConjClass
    irrep: Irrep
    grading: int
    qdim: int
    index: int

    @property
    def representative(self) -> GroupElem:
        return self.conj_class.representative

    def to_json(self) -> dict:
        t = self.conj_class.representative
        return {"class_rep": [t.l, t.k], "irrep": self.irrep.tag(), "grading": self.grading, "qdim": self.qdim}

    def key(self) -> tuple:
        """Label identity shared by every twist u (the (class, irrep index) bijection)."""
        tag = self.irrep.tag()
        tag.pop("u", None)
        return (tuple(self.conj_class.representative), tuple(sorted(tag.items())))

    def __repr__(self):
        t = self.conj_class.representative
        return f"SimpleLabel(#{self.index}, class=({t.l},{t.k}), {self.irrep.tag()})"


@lru_cache(maxsize=None)
def _simples(G: GroupSpec, u: int) -> tuple[SimpleLabel, ...]:
    out: list[SimpleLabel] = []
    for c in conjugacy_classes(G):
        if c.kind == "e":
            irreps = irreps_of_G(G)
        elif c.kind == "a":
            irreps = [Irrep(G, "zq", (s,)) for s in range(G.q)]
        else:
            k = c.representative.k
            irreps = [Irrep(G, "projective", (u % G.p, k, s)) for s in range(G.p)]
        for r in irreps:
            out.append(SimpleLabel(c, r, c.grading, c.size * r.dim, len(out)))
    return tuple(out)


def enumerate_simples(G: GroupSpec, u: int) -> list[SimpleLabel]:
    """Class order, then irrep order; the unit object comes first."""
    return list(_simples(G, u % G.p))


# -- S and T -------------------------------------------------------------

def _character_hist(irrep: Irrep) -> np.ndarray:
    """Character values as integer histograms over Z_M, shape (|G|, M); zero off the domain."""
    G = irrep.G
    perm, exp = irrep.tables
    out = np.zeros((G.order, G.conductor), dtype=np.int64)
    rows, cols = np.nonzero(perm == np.arange(irrep.dim)[None, :])
    np.add.at(out, (rows, exp[rows, cols]), 1)
    return out


def _theta_ratio_exponent(G: GroupSpec, u: int, t, g, ag, h) -> int:
    """Normalization ratio attached to the pair (g, h) in the transversal form of S."""
    agi = G.inv(ag)
    e = theta_exponent(G, u, t, agi, h) + theta_exponent(G, u, t, G.mul(agi, h), ag)
    e -= theta_exponent(G, u, g, ag, agi)
    return e % G.conductor


def _pair_counts(G: GroupSpec, u: int, c1: ConjClass, c2: ConjClass) -> np.ndarray:
    """``K[x, y]`` = number of commuting (g, h) in c1 x c2 with a_g^-1 h a_g = x and a_h^-1 g a_h = y."""
    K = np.zeros((G.order, G.order), dtype=np.int64)
    for g in c1.members:
        ag = c1.transversal[g]
        if G.conj(ag, c1.representative) != g:
            raise ModularityError(f"transversal element for {g} does not conjugate the representative onto it")
        for h in c2.members:
            if not G.commute(g, h):
                continue
            ah = c2.transversal[h]
            x = G.mul(G.mul(G.inv(ag), h), ag)
            y = G.mul(G.mul(G.inv(ah), g), ah)
            if not (c1.centralizes(x) and c2.centralizes(y)):
                raise ModularityError("transversal correction left the centralizer")
            if _theta_ratio_exponent(G, u, c1.representative, g, ag, h):
                raise ModularityError(f"theta normalization ratio is not 1 at ({g}, {h})")
            K[G.index(x), G.index(y)] += 1
    return K


@lru_cache(maxsize=None)
def _s_matrix(G: GroupSpec, u: int) -> CycMatrix:
    simples = enumerate_simples(G, u)
    M, r = G.conductor, len(simples)
    classes = conjugacy_classes(G)
    by_class = {c.index: [x for x in simples if x.conj_class.index == c.index] for c in classes}
    chars = {c.index: CycMatrix(np.stack([_character_hist(x.irrep) for x in by_class[c.index]])).conj()
             for c in classes}
    data = np.zeros((r, r, M), dtype=np.int64)
    for c1 in classes:
        rows = [x.index for x in by_class[c1.index]]
        for c2 in classes:
            cols = [x.index for x in by_class[c2.index]]
            K = _pair_counts(G, u, c1, c2)
            Kmat = np.zeros(K.shape + (M,), dtype=np.int64)
            Kmat[:, :, 0] = K
            block = chars[c1.index] @ CycMatrix(Kmat) @ chars[c2.index].transpose()
            data[np.ix_(rows, cols)] = block.data
    return CycMatrix(data, G.order)


def s_matrix(G: GroupSpec, u: int) -> CycMatrix:
    """Unitary S (normalized by 1/|G|) as an exact matrix over Q(zeta_M)."""
    return _s_matrix(G, u % G.p)


def t_exponents(G: GroupSpec, u: int) -> np.ndarray:
    """``T[i] = zeta_M^e[i]``, from chi(t)/chi(e) at the class representative."""
    M = G.conductor
    out = []
    for x in enumerate_simples(G, u):
        exps = x.irrep.character_exponents(x.representative)
        if len(exps) != x.irrep.dim or len(set(exps)) != 1:
            raise ModularityError(f"twist of {x} is not a root of unity")
        out.append(exps[0] % M)
    return np.array(out, dtype=np.int64)


def t_matrix(G: GroupSpec, u: int) -> list[CycNum]:
    return [root_of_unity(G.conductor, int(e)) for e in t_exponents(G, u)]


# -- modular data container ---------------------------------------------

@dataclass
class ModularData:
    group: GroupSpec
    u: int
    simples: list
    S: CycMatrix
    T_exp: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.simples)

    @property
    def conductor(self) -> int:
        return self.group.conductor

    @property
    def global_dim(self) -> int:
        return self.group.order

    @property
    def qdims(self) -> list[int]:
        return [x["qdim"] if isinstance(x, dict) else x.qdim for x in self.simples]

    @property
    def gradings(self) -> list[int]:
        return [x["grading"] if isinstance(x, dict) else x.grading for x in self.simples]

    @property
    def T(self) -> list[CycNum]:
        return [root_of_unity(self.conductor, int(e)) for e in self.T_exp]

    def T_matrix(self) -> CycMatrix:
        return CycMatrix.diagonal_roots(self.T_exp, self.conductor)

    def S_complex(self) -> np.ndarray:
        return self.S.to_complex()

    def T_complex(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.T_exp / self.conductor)

    def simple_json(self) -> list[dict]:
        return [x if isinstance(x, dict) else x.to_json() for x in self.simples]

    def to_json(self) -> dict:
        entries = self.S.to_entries()
        S = [[x.to_json() for x in row] for row in entries]
        T = [x.to_json() for x in self.T]
        return {
            "group": self.group.to_json(),
            "u": int(self.u),
            "conductor": self.conductor,
            "simples": self.simple_json(),
            "S": S,
            "T": T,
            "T_exponents": [int(e) for e in self.T_exp],
            "S_float": [[x["complex"] for x in row] for row in S],
            "T_float": [x["complex"] for x in T],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "ModularData":
        try:
            g = data["group"]
            G = GroupSpec(int(g["p"]), int(g["q"]), int(g["n"]))
            M = G.conductor
            rows = [[CycNum.from_json(x) for x in row] for row in data["S"]]
            S = CycMatrix.from_entries(rows, conductor=M)
            T_exp = np.array([_root_exponent(CycNum.from_json(x), M) for x in data["T"]], dtype=np.int64)
            if "T_exponents" in data and not np.array_equal(np.array(data["T_exponents"], dtype=np.int64) % M,
                                                            T_exp):
                raise ValueError("T and T_exponents disagree")
            simples = [dict(x) for x in data["simples"]]
            u = int(data["u"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed modular data: {exc}") from exc
        if S.shape != (len(simples), len(simples)) or len(T_exp) != len(simples):
            raise ValueError("modular data shapes do not match the simple count")
        md = cls(G, u, simples, S, T_exp)
        _attach_labels(md)
        return md


def _root_exponent(x: CycNum, M: int) -> int:
    z = x.to_complex()
    e = round(np.angle(z) / (2 * np.pi) * M) % M
    if root_of_unity(M, e) != x:
        raise ValueError(f"{x!r} is not an M-th root of unity")
    return e


def _attach_labels(md: ModularData) -> None:
    """Swap JSON simple records for live SimpleLabels when they match the twisted double."""
    try:
        live = enumerate_simples(md.group, md.u)
    except Exception:
        return
    if [x.to_json() for x in live] == md.simples:
        md.simples = live


def modular_data(G: GroupSpec, u: int) -> ModularData:
    u %= G.p
    return ModularData(G, u, enumerate_simples(G, u), s_matrix(G, u), t_exponents(G, u))


# -- checks --------------------------------------------------------------

def gauss_sums(md: ModularData) -> tuple[CycNum, CycNum]:
    """Unnormalized ``(sum d^2 theta, sum d^2 theta^-1)``."""
    M = md.conductor
    plus = np.zeros(M, dtype=np.int64)
    minus = np.zeros(M, dtype=np.int64)
    for d, e in zip(md.qdims, md.T_exp):
        plus[e % M] += d * d
        minus[(-e) % M] += d * d
    return CycNum.from_histogram(M, plus), CycNum.from_histogram(M, minus)


def charge_conjugation(md: ModularData) -> list[int]:
    """Permutation X -> X* read off from S^2 (exact)."""
    S2 = (md.S @ md.S).canonical()
    red, den = S2
    perm = []
    for i in range(md.rank):
        hits = [j for j in range(md.rank) if den == 1 and red[i, j, 0] == 1 and not red[i, j, 1:].any()]
        if len(hits) != 1 or np.count_nonzero(red[i]) != 1:
            raise ModularityError("S^2 is not a permutation matrix")
        perm.append(hits[0])
    return perm


def verlinde_fusion(md: ModularData) -> np.ndarray:
    """``N[x, y, z]`` from the Verlinde formula, computed exactly and checked for integrality."""
    S = md.S
    r, M = md.rank, md.conductor
    A = S.data.astype(np.int64)
    D = S.den
    d0 = S.canonical()
    unit_row = [CycNum(M, [int(c) for c in d0[0][0, w]], d0[1]) for w in range(r)]
    weights = []
    for w, v in enumerate(unit_row):
        if not v.is_rational() or v.rational_value() <= 0:
            raise ModularityError("unit row of S is not positive rational")
        weights.append(v.rational_value())
    # N * L * den^3 = sum_w A_xw A_yw conj(A_zw) * L / S_0w
    scaled = [1 / wv for wv in weights]
    L = math.lcm(*(f.denominator for f in scaled))
    wint = np.array([int(f * L) for f in scaled], dtype=float)
    F = ring_fft(A).transpose(2, 0, 1)  # (f, row, w)
    FcT = np.conj(F).transpose(0, 2, 1)  # (f, w, z)
    l1 = np.abs(A).sum(axis=2).astype(float)
    bound = fft_error_bound(M, float(l1.max()) ** 3 * float(wint.sum()))
    table = _reduction_table(M)
    tmax = float(np.abs(table).max())
    total_den = L * D ** 3
    N = np.zeros((r, r, r), dtype=np.int64)
    for x in range(r):
        left = F[:, x, None, :] * wint[None, None, :] * F  # (f, y, w)
        vals = np.matmul(left, FcT).transpose(1, 2, 0)  # (y, z, f)
        ints = ring_ifft_exact(vals, bound)
        if float(np.abs(ints).max(initial=0)) * tmax * M < 2 ** 52:
            red = np.rint(ints.astype(float) @ table.astype(float)).astype(np.int64)
        else:
            red = ints @ table
        if red[:, :, 1:].any():
            raise ModularityError(f"fusion coefficients in row {x} are not rational")
        num = red[:, :, 0]
        if (num % total_den).any():
            raise ModularityError(f"fusion coefficients in row {x} are not integers")
        N[x] = num // total_den
    if (N < 0).any():
        raise ModularityError("negative fusion coefficient")
    g = np.array(md.gradings)
    allowed = (g[:, None, None] + g[None, :, None] - g[None, None, :]) % md.group.p == 0
    if (N[~allowed] != 0).any():
        raise ModularityError("fusion does not respect the grading")
    return N


def check_modularity(md: ModularData, fusion: bool = True) -> dict:
    """Run every exact identity and return a report; raises ModularityError on failure."""
    S, M, r = md.S, md.conductor, md.rank
    D = md.global_dim
    report = {}
    report["symmetric"] = S == S.transpose()
    report["unitary"] = (S @ S.adjoint()) == CycMatrix.identity(r, M)
    report["unit_row"] = all(S.entry(0, i) == Fraction(d, D) for i, d in enumerate(md.qdims))
    report["T_unit"] = int(md.T_exp[0]) == 0
    report["dim_sum"] = sum(d * d for d in md.qdims) == D * D
    plus, minus = gauss_sums(md)
    report["gauss_product"] = plus * minus == D * D
    T = md.T_matrix()
    ST = S @ T
    lhs = ST @ ST @ ST
    rhs = (S @ S).mul_cyc(plus / D)
    report["st_cubed"] = lhs == rhs
    report["gauss_plus"] = plus.to_json()
    if fusion:
        N = verlinde_fusion(md)
        report["fusion_unit"] = bool(np.array_equal(N[0], np.eye(r, dtype=np.int64)))
        report["fusion_nonnegative_integer"] = True
    failed = [k for k, v in report.items() if v is False]
    if failed:
        raise ModularityError(f"modularity identities failed: {failed}")
    return report


__all__ += ["t_exponents", "make_group"]
