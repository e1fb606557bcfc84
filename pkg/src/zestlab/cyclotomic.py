"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis ``1, z, ..., z^(phi(N)-1)`` of
``Q[x] / Phi_N(x)`` with integer numerators over a common positive
denominator.  This canonical form makes equality decidable at any conductor.

Bulk matrix work (unitarity, ``(ST)^3``, Verlinde sums) goes through
:class:`CycMatrix`, which keeps entries in the group ring ``Z[C_N]`` and only
reduces modulo ``Phi_N`` when a canonical answer is needed.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "CycNum",
    "CycMatrix",
    "cyclotomic_polynomial",
    "euler_phi",
    "root_of_unity",
    "arith",
    "conjugate",
    "to_complex",
    "ring_fft",
    "ring_ifft_exact",
    "fft_error_bound",
]


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_monic(num: list[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials (lowest degree first) by a monic divisor."""
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for shift in range(len(num) - 1 - dd, -1, -1):
        c = num[shift + dd]
        quot[shift] = c
        if c:
            for j, dj in enumerate(den):
                num[shift + j] -= c * dj
    rem = num[:dd] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first.

    Computed as ``(x^n - 1) / prod(Phi_d)`` over proper divisors ``d | n``.
    """
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly, rem = _poly_divmod_monic(poly, cyclotomic_polynomial(d))
        if any(rem):
            raise ArithmeticError(f"Phi_{d} does not divide x^{n}-1 exactly")
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> np.ndarray:
    """Row ``e`` holds the coefficients of ``x^e mod Phi_n`` for ``0 <= e < n``."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    table = np.zeros((n, deg), dtype=np.int64)
    row = [0] * deg
    row[0] = 1
    for e in range(n):
        table[e] = row
        # multiply by x and reduce the overflow coefficient
        top = row[-1]
        row = [0] + row[:-1]
        if top:
            row = [r - top * c for r, c in zip(row, phi[:-1])]
    return table


@lru_cache(maxsize=None)
def _reduction_rows(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in r) for r in _reduction_table(n))


def _reduce_exponents(n: int, items: Iterable[tuple[int, int]]) -> list[int]:
    """Canonical integer coefficients of ``sum c * z_n^e`` (exponents taken mod n)."""
    rows = _reduction_rows(n)
    out = [0] * euler_phi(n)
    for e, c in items:
        if c:
            row = rows[e % n]
            for j, r in enumerate(row):
                if r:
                    out[j] += c * r
    return out


def _normalize(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = den
    for x in num:
        g = math.gcd(g, x)
        if g == 1:
            break
    if g > 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


class CycNum:
    """An exact element of Q(zeta_N), immutable.

    Use :func:`root_of_unity` or :meth:`from_exponents` to construct values;
    ``CycNum(N, num, den)`` assumes ``num`` is already the canonical reduced
    coefficient vector of length ``phi(N)``.
    """

    __slots__ = ("conductor", "num", "den", "_hash")

    def __init__(self, conductor: int, num: Sequence[int], den: int = 1):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        if len(num) != euler_phi(conductor):
            raise ValueError("coefficient vector has wrong length for conductor")
        self.conductor = conductor
        self.num, self.den = _normalize(num, den)
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def from_exponents(cls, conductor: int, coeffs: Mapping[int, object] | Iterable[tuple[int, object]],
                       den: int = 1) -> "CycNum":
        """``sum coeffs[e] * zeta^e / den``; coefficients may be ints or Fractions."""
        items = list(coeffs.items()) if isinstance(coeffs, Mapping) else list(coeffs)
        fr = [(e, Fraction(c)) for e, c in items]
        common = 1
        for _, c in fr:
            common = common * c.denominator // math.gcd(common, c.denominator)
        ints = [(e, int(c * common)) for e, c in fr]
        return cls(conductor, _reduce_exponents(conductor, ints), den * common)

    @classmethod
    def from_histogram(cls, conductor: int, counts: np.ndarray, den: int = 1) -> "CycNum":
        """Exact value of ``sum counts[e] * zeta^e / den`` for an integer array of length N."""
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (conductor,):
            raise ValueError("histogram length must equal the conductor")
        if np.abs(counts).max(initial=0) < 2 ** 40:
            num = counts @ _reduction_table(conductor)
            return cls(conductor, [int(x) for x in num], den)
        return cls(conductor, _reduce_exponents(conductor, enumerate(int(c) for c in counts)), den)

    @classmethod
    def rational(cls, value, conductor: int = 1) -> "CycNum":
        v = Fraction(value)
        num = [0] * euler_phi(conductor)
        num[0] = v.numerator
        return cls(conductor, num, v.denominator)

    @classmethod
    def zero(cls, conductor: int = 1) -> "CycNum":
        return cls(conductor, [0] * euler_phi(conductor), 1)

    @classmethod
    def one(cls, conductor: int = 1) -> "CycNum":
        return cls.rational(1, conductor)

    # -- conductor management -------------------------------------------
    def lift(self, conductor: int) -> "CycNum":
        """The same number viewed in Q(zeta_conductor); requires divisibility."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"cannot lift conductor {self.conductor} to {conductor}")
        step = conductor // self.conductor
        return CycNum(conductor,
                      _reduce_exponents(conductor, ((j * step, c) for j, c in enumerate(self.num))),
                      self.den)

    def _common(self, other: "CycNum") -> tuple["CycNum", "CycNum"]:
        if self.conductor == other.conductor:
            return self, other
        n = math.lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    @staticmethod
    def _coerce(x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)):
            return CycNum.rational(x)
        return NotImplemented

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def coefficients(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return CycNum(a.conductor, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.conductor, [-x for x in self.num], self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        n = a.conductor
        acc = [0] * n
        bn = [(j, y) for j, y in enumerate(b.num) if y]
        for i, x in enumerate(a.num):
            if x:
                for j, y in bn:
                    acc[(i + j) % n] += x * y
        return CycNum(n, _reduce_exponents(n, enumerate(acc)), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        n = self.conductor
        if self.is_rational():
            return CycNum.rational(1 / self.rational_value(), n)
        v, det = _integer_inverse(self.num, n)
        out = CycNum(n, [x * self.den for x in v], det)
        if not (out * self) == 1:
            raise ArithmeticError("cyclotomic inverse failed its exact check")
        return out

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = CycNum.one(self.conductor), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CycNum":
        n = self.conductor
        return CycNum(n, _reduce_exponents(n, ((-j, c) for j, c in enumerate(self.num))), self.den)

    def galois(self, k: int) -> "CycNum":
        """Image under zeta -> zeta^k for k coprime to the conductor."""
        n = self.conductor
        if math.gcd(k, n) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")
        return CycNum(n, _reduce_exponents(n, ((j * k, c) for j, c in enumerate(self.num))), self.den)

    def normalized_trace(self) -> Fraction:
        """Trace to Q divided by the degree; independent of the conductor used."""
        n = self.conductor
        total = Fraction(0)
        for j, c in enumerate(self.num):
            if c:
                m = n // math.gcd(j, n)
                total += Fraction(c * _mobius(m), euler_phi(m))
        return total / self.den

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        a, b = self._common(other)
        return a.den == b.den and a.num == b.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    def key(self) -> tuple:
        """Hashable canonical key at this conductor (compare only at equal conductors)."""
        return (self.conductor, self.num, self.den)

    # -- embeddings and I/O ---------------------------------------------
    def to_complex(self) -> complex:
        n = self.conductor
        z = sum(c * cmath.exp(2j * math.pi * j / n) for j, c in enumerate(self.num) if c)
        return complex(z) / self.den

    def __complex__(self):
        return self.to_complex()

    def to_json(self) -> dict:
        z = self.to_complex()
        return {
            "conductor": self.conductor,
            "coeffs": [[j, f"{c}/{self.den}"] for j, c in enumerate(self.num) if c],
            "complex": [z.real, z.imag],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CycNum":
        n = int(data["conductor"])
        return cls.from_exponents(n, ((int(e), Fraction(c)) for e, c in data["coeffs"]))

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.num):
            if not c:
                continue
            coef = Fraction(c, self.den)
            terms.append(f"{coef}" if j == 0 else f"{coef}*z{self.conductor}^{j}")
        return "CycNum(" + (" + ".join(terms) or "0") + ")"


def _mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _is_prime_u32(n: int) -> bool:
    # deterministic Miller-Rabin below 3.2e9
    if n < 2:
        return False
    for sp in (2, 3, 5, 7):
        if n % sp == 0:
            return n == sp
    d, r = n - 1, 0
    while d % 2 == 0:
        d, r = d // 2, r + 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIMES: list[int] = []


def _word_prime(k: int) -> int:
    """The k-th prime below 2^31, counting down."""
    c = _PRIMES[-1] - 2 if _PRIMES else (1 << 31) - 1
    while len(_PRIMES) <= k:
        if _is_prime_u32(c):
            _PRIMES.append(c)
        c -= 2
    return _PRIMES[k]


def _solve_mod(A: np.ndarray, ell: int) -> tuple[int, np.ndarray] | None:
    """``(det A, det A * A^-1 e_0)`` modulo ``ell``, or None when A is singular mod ell."""
    d = A.shape[0]
    W = np.zeros((d, d + 1), dtype=np.int64)
    W[:, :d] = A % ell
    W[0, d] = 1
    det = 1
    for i in range(d):
        nz = np.nonzero(W[i:, i])[0]
        if not len(nz):
            return None
        j = i + int(nz[0])
        if j != i:
            W[[i, j]] = W[[j, i]]
            det = -det
        piv = int(W[i, i])
        det = det * piv % ell
        W[i] = W[i] * pow(piv, ell - 2, ell) % ell
        f = W[i + 1:, i:i + 1]
        W[i + 1:] = (W[i + 1:] - f * W[i]) % ell
    x = W[:, d].copy()
    for i in range(d - 1, 0, -1):
        x[:i] = (x[:i] - W[:i, i] * x[i]) % ell
    return det % ell, x * det % ell


def _integer_inverse(num: Sequence[int], n: int) -> tuple[list[int], int]:
    """``(v, det)`` with ``(sum num_i z^i)^-1 = sum (v_i / det) z^i`` in Q(zeta_n).

    Solves ``M c = e_0`` for the multiplication matrix M by CRT over word-size
    primes until the modulus exceeds twice the Hadamard bound, so the
    reconstruction of ``det`` and ``det * c`` is exact.
    """
    table = _reduction_table(n)
    d = len(num)
    shifts = (np.arange(n)[None, :] - np.arange(d)[:, None]) % n  # row j: exponent e <- coefficient e - j
    l1 = sum(abs(int(c)) for c in num)
    tmax = int(np.abs(table).max())
    log2_bound = d * (math.log2(max(l1 * tmax, 1)) + 0.5 * math.log2(d)) + 2
    if tmax * n >= 1 << 31:
        raise ArithmeticError("reduction table too large for word-size elimination")
    modulus, det_acc, vec_acc, k = 1, 0, [0] * d, 0
    while math.log2(modulus) <= log2_bound:
        ell = _word_prime(k)
        k += 1
        h = np.zeros(n, dtype=np.int64)
        h[:d] = [int(c) % ell for c in num]
        # column j of M is (a * z^j) reduced, i.e. the shifted histogram times the table
        M = (h[shifts] @ table).T % ell
        res = _solve_mod(M, ell)
        if res is None:
            continue
        det_l, vec_l = res
        inv_mod = pow(modulus, -1, ell)
        t = (det_l - det_acc) * inv_mod % ell
        det_acc += modulus * t
        for i in range(d):
            t = (int(vec_l[i]) - vec_acc[i]) * inv_mod % ell
            vec_acc[i] += modulus * t
        modulus *= ell
    half = modulus // 2

    def signed(v: int) -> int:
        return v - modulus if v > half else v

    return [signed(v) for v in vec_acc], signed(det_acc)


# -- functional interface -------------------------------------------------

def root_of_unity(n: int, k: int) -> CycNum:
    """Canonical form of ``zeta_n^(k mod n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return CycNum(n, _reduce_exponents(n, [(k % n, 1)]), 1)


def arith(x: CycNum, y: CycNum, op: str) -> CycNum:
    ops = {"add": CycNum.__add__, "sub": CycNum.__sub__,
           "mul": CycNum.__mul__, "div": CycNum.__truediv__}
    try:
        return ops[op](x, y)
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def conjugate(x: CycNum) -> CycNum:
    return x.conjugate()


def to_complex(x: CycNum) -> complex:
    return x.to_complex()


# -- matrices over the group ring -----------------------------------------

_FFT_SAFE = 0.25


class CycMatrix:
    """A matrix over Q(zeta_N) held as ``data / den`` with ``data`` in Z[C_N].

    ``data`` has shape ``(rows, cols, N)``; entry ``[i, j, e]`` is the integer
    coefficient of ``zeta^e``.  Products are exact: the cyclic convolution is
    done with an FFT whose rounding error is bounded a priori (and re-checked),
    falling back to exact integer arithmetic when the bound is not small.
    """

    def __init__(self, data: np.ndarray, den: int = 1):
        data = np.asarray(data)
        if data.ndim != 3:
            raise ValueError("expected a (rows, cols, N) array")
        self.data = data.astype(np.int64) if data.dtype != object else data
        self.den = int(den)
        self.conductor = data.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[CycNum]], conductor: int | None = None) -> "CycMatrix":
        flat = [x for r in rows for x in r]
        n = conductor or math.lcm(*(x.conductor for x in flat))
        den = math.lcm(*(x.den for x in flat))
        data = np.zeros((len(rows), len(rows[0]), n), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                y = x.lift(n)
                scale = den // y.den
                for e, c in enumerate(y.num):
                    if c:
                        data[i, j, e] = c * scale
        if np.abs(data).max(initial=0) < 2 ** 62:
            data = data.astype(np.int64)
        return cls(data, den)

    @classmethod
    def identity(cls, size: int, conductor: int) -> "CycMatrix":
        data = np.zeros((size, size, conductor), dtype=np.int64)
        data[np.arange(size), np.arange(size), 0] = 1
        return cls(data, 1)

    @classmethod
    def diagonal_roots(cls, exponents: Sequence[int], conductor: int) -> "CycMatrix":
        """Diagonal matrix ``diag(zeta^e_i)``."""
        r = len(exponents)
        data = np.zeros((r, r, conductor), dtype=np.int64)
        for i, e in enumerate(exponents):
            data[i, i, e % conductor] = 1
        return cls(data, 1)

    def lift(self, conductor: int) -> "CycMatrix":
        if conductor == self.conductor:
            return self
        step = conductor // self.conductor
        if step * self.conductor != conductor:
            raise ValueError("conductor must be a multiple")
        data = np.zeros(self.shape + (conductor,), dtype=self.data.dtype)
        data[:, :, ::step] = self.data
        return CycMatrix(data, self.den)

    def _align(self, other: "CycMatrix") -> tuple["CycMatrix", "CycMatrix"]:
        n = math.lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = self._align(other)
        if a.shape[1] != b.shape[0]:
            raise ValueError("shape mismatch")
        n = a.conductor
        amax = int(np.abs(a.data).max(initial=0))
        bmax = int(np.abs(b.data).max(initial=0))
        bound = fft_error_bound(n, a.shape[1] * amax * bmax * n)
        if a.data.dtype != object and b.data.dtype != object and bound < _FFT_SAFE:
            fa = ring_fft(a.data).transpose(2, 0, 1)
            fb = ring_fft(b.data).transpose(2, 0, 1)
            data = ring_ifft_exact((fa @ fb).transpose(1, 2, 0), bound)
        else:
            ao, bo = a.data.astype(object), b.data.astype(object)
            data = np.zeros((a.shape[0], b.shape[1], n), dtype=object)
            for e in range(n):
                data += np.roll(np.einsum("ik,kjf->ijf", ao[:, :, e], bo), e, axis=2)
        return CycMatrix(data, a.den * b.den)

    def __add__(self, other: "CycMatrix") -> "CycMatrix":
        a, b = self._align(other)
        den = math.lcm(a.den, b.den)
        return CycMatrix(a.data * (den // a.den) + b.data * (den // b.den), den)

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        return self + CycMatrix(-other.data, other.den)

    def scale(self, value) -> "CycMatrix":
        v = Fraction(value)
        return CycMatrix(self.data * v.numerator, self.den * v.denominator)

    def scale_columns(self, values: Sequence) -> "CycMatrix":
        """Right-multiply by a rational diagonal matrix."""
        fr = [Fraction(v) for v in values]
        den = math.lcm(*(f.denominator for f in fr))
        factors = np.array([f.numerator * (den // f.denominator) for f in fr], dtype=np.int64)
        return CycMatrix(self.data * factors[None, :, None], self.den * den)

    def multiply_roots(self, exponents: np.ndarray) -> "CycMatrix":
        """Entrywise product with ``zeta_N^exponents[i, j]`` (a cyclic shift per entry)."""
        exps = np.asarray(exponents, dtype=np.int64) % self.conductor
        if exps.shape != self.shape:
            raise ValueError("exponent array must match the matrix shape")
        idx = (np.arange(self.conductor)[None, None, :] - exps[:, :, None]) % self.conductor
        return CycMatrix(np.take_along_axis(self.data, idx, axis=2), self.den)

    def mul_cyc(self, c: CycNum) -> "CycMatrix":
        """Multiply every entry by the field element ``c``."""
        n = math.lcm(self.conductor, c.conductor)
        a = self.lift(n)
        cl = c.lift(n)
        hist = np.zeros(n, dtype=np.int64)
        hist[: len(cl.num)] = cl.num
        if a.data.dtype == object or max(abs(x) for x in cl.num) > 2 ** 40:
            data = sum(np.roll(a.data.astype(object), e, axis=2) * int(v) for e, v in enumerate(hist) if v)
            return CycMatrix(data, a.den * cl.den)
        bound = fft_error_bound(n, float(np.abs(a.data).sum(axis=2).max(initial=0)) * float(np.abs(hist).sum()))
        data = ring_ifft_exact(ring_fft(a.data) * ring_fft(hist), bound)
        return CycMatrix(data, a.den * cl.den)

    def transpose(self) -> "CycMatrix":
        return CycMatrix(self.data.transpose(1, 0, 2), self.den)

    def conj(self) -> "CycMatrix":
        data = np.roll(self.data[:, :, ::-1], 1, axis=2)
        return CycMatrix(data, self.den)

    def adjoint(self) -> "CycMatrix":
        return self.conj().transpose()

    def canonical(self) -> tuple[np.ndarray, int]:
        """Reduced coefficients, shape ``(rows, cols, phi(N))``, with gcd-normalized denominator."""
        table = _reduction_table(self.conductor)
        if self.data.dtype == object:
            red = np.tensordot(self.data, table.astype(object), axes=([2], [0]))
        else:
            red = np.tensordot(self.data, table, axes=([2], [0]))
        g = self.den
        for v in np.unique(np.abs(red)):
            g = math.gcd(g, int(v))
            if g == 1:
                break
        if g > 1:
            red = red // g
        return red, self.den // g

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b = self._align(other)
        ra, da = a.canonical()
        rb, db = b.canonical()
        return da == db and np.array_equal(ra, rb)

    def entry(self, i: int, j: int) -> CycNum:
        return CycNum.from_exponents(self.conductor, ((e, int(c)) for e, c in enumerate(self.data[i, j]) if c),
                                     self.den)

    def to_entries(self) -> list[list[CycNum]]:
        red, den = self.canonical()
        return [[CycNum(self.conductor, [int(c) for c in red[i, j]], den) for j in range(self.shape[1])]
                for i in range(self.shape[0])]

    def to_complex(self) -> np.ndarray:
        roots = np.exp(2j * np.pi * np.arange(self.conductor) / self.conductor)
        return (self.data.astype(float) @ roots) / self.den


# -- FFT helpers for sums of products in Z[C_N] ------------------------------

def ring_fft(data: np.ndarray) -> np.ndarray:
    """Evaluate integer group-ring elements (last axis) at every N-th root of unity."""
    return np.fft.fft(np.asarray(data, dtype=float), axis=-1)


def ring_ifft_exact(values: np.ndarray, bound: float) -> np.ndarray:
    """Invert :func:`ring_fft` and round to integers.

    ``bound`` is an a-priori estimate of the floating-point error; rounding is
    only trusted when it is well below one half.
    """
    if not bound < _FFT_SAFE:
        raise ArithmeticError(f"FFT error bound {bound:.3g} too large for exact rounding")
    raw = np.fft.ifft(values, axis=-1).real
    out = np.rint(raw)
    if np.abs(raw - out).max(initial=0) > _FFT_SAFE:
        raise ArithmeticError("FFT convolution lost exactness")
    return out.astype(np.int64)


def fft_error_bound(n: int, l1_product: float) -> float:
    """Generous forward+inverse FFT error bound for a coefficient of magnitude ``l1_product``."""
    return 16 * np.finfo(float).eps * max(1.0, math.log2(n)) * n * float(l1_product)
