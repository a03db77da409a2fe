"""Exact coefficient arithmetic: rationals, q = s^2, univariate rational functions,
sample points on the lambda-torus and pole-avoiding random sampling.

All lambda-dependence in this package is either numeric (a SamplePoint, one
rational per torus coordinate) or univariate symbolic (a RatFunc in one formal
variable x).  In the trigonometric case the coordinates are stored as
q^{lambda_a}, so z_a = q^{2 lambda_a} is their square; in the classical case
the coordinates are the lambda_a themselves.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Scalar = Fraction  # exact big rationals; gcd-reduced with positive denominator by construction


class ScalarDivisionError(ArithmeticError):
    """Division by an exact zero."""


class PoleError(ArithmeticError):
    """Evaluation of a rational function at a pole."""


class NonGenericLambda(ValueError):
    """A lambda value hit the zero set of a required determinant/denominator."""


def frac(a, b=None) -> Fraction:
    return Fraction(a) if b is None else Fraction(a, b)


def scalar_to_str(a: Fraction) -> str:
    return str(a)  # "p/q" with q > 0, "/1" omitted


def scalar_from_str(s: str) -> Fraction:
    return Fraction(s)


def _exact_sqrt(q: Fraction) -> Fraction | None:
    if q <= 0:
        return None
    import math

    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QParam:
    """Deformation parameter.  The primary datum is s = q^{1/2} (the half power
    is needed because q^{h (x) h / 2} produces s-powers on integer weights);
    when only q itself is rational (e.g. q = 2), construct with from_q and any
    operation that genuinely needs an odd s-power raises.  classical=True
    selects the q=1 degeneration; q-numbers then collapse to plain integers.
    """

    s: Fraction | None
    classical: bool = False
    _q: Fraction | None = None

    def __post_init__(self):
        s = None if self.s is None else Fraction(self.s)
        object.__setattr__(self, "s", s)
        if s is None:
            if self._q is None:
                raise ValueError("need s or q")
            q = Fraction(self._q)
        else:
            if s == 0:
                raise ValueError("s must be nonzero")
            q = s * s
        object.__setattr__(self, "_q", q)
        if q == 0:
            raise ValueError("q must be nonzero")
        if self.classical:
            if q != 1:
                raise ValueError("classical QParam must have q = 1")
        else:
            if q == 1 or q == -1:
                raise ValueError("q = 1 requires the classical flag; q = -1 unsupported")

    @staticmethod
    def from_q(q, classical: bool = False) -> "QParam":
        q = Fraction(q)
        if classical or q == 1:
            return classical_q()
        return QParam(_exact_sqrt(q), classical=False, _q=q)

    @property
    def q(self) -> Fraction:
        return self._q

    def qpow(self, k: int) -> Fraction:
        """q^k, exact (k may be negative)."""
        return self._q ** k

    def spow(self, k: int) -> Fraction:
        """s^k = q^{k/2}; exact for even k, needs rational s for odd k."""
        if k % 2 == 0:
            return self._q ** (k // 2)
        if self.s is None:
            raise ValueError("q^{1/2} is irrational for this q; odd half-powers unavailable")
        return self.s ** k

    def qnum(self, n: int) -> Fraction:
        """The q-integer [n] = (q^n - q^-n)/(q - q^-1); equals n at q = 1."""
        if self.classical:
            return Fraction(n)
        q = self._q
        return (q ** n - q ** -n) / (q - 1 / q)

    def qfact(self, n: int) -> Fraction:
        out = Fraction(1)
        for k in range(1, n + 1):
            out *= self.qnum(k)
        return out


def classical_q() -> QParam:
    return QParam(Fraction(1), classical=True)


# ---------------------------------------------------------------------------
# dense univariate polynomials over Fraction


def _trim(cs: list[Fraction]) -> tuple[Fraction, ...]:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial with Fraction coefficients, low degree first."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(*cs) -> "Poly":
        return Poly(_trim([Fraction(c) for c in cs]))

    @staticmethod
    def const(c) -> "Poly":
        return Poly.of(c)

    @staticmethod
    def x() -> "Poly":
        return Poly.of(0, 1)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            cs[i] += c
        for i, c in enumerate(other.coeffs):
            cs[i] += c
        return Poly(_trim(cs))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly(())
        cs = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    cs[i + j] += a * b
        return Poly(_trim(cs))

    def scale(self, c: Fraction) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(())
        return Poly(tuple(a * c for a in self.coeffs))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ScalarDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(()), self
        quot = [Fraction(0)] * (dq + 1)
        inv_lead = 1 / other.leading()
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] * inv_lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(_trim(quot)), Poly(_trim(rem))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading())

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def eval(self, x: Fraction) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def subst_scale(self, c: Fraction) -> "Poly":
        """p(x) -> p(c*x)."""
        c = Fraction(c)
        return Poly(_trim([a * c ** i for i, a in enumerate(self.coeffs)]))

    def subst_translate(self, k: Fraction) -> "Poly":
        """p(x) -> p(x + k)."""
        out = Poly(())
        xk = Poly.of(k, 1)
        pw = Poly.of(1)
        for a in self.coeffs:
            out = out + pw.scale(a)
            pw = pw * xk
        return out


# ---------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True)
class RatFunc:
    """Quotient of two Polys, normalized: den monic and gcd(num, den) = 1."""

    num: Poly
    den: Poly

    @staticmethod
    def make(num: Poly, den: Poly) -> "RatFunc":
        if den.is_zero():
            raise ScalarDivisionError("rational function with zero denominator")
        if num.is_zero():
            return RatFunc(Poly(()), Poly.of(1))
        g = num.gcd(den)
        num = num.divmod(g)[0]
        den = den.divmod(g)[0]
        lc = den.leading()
        return RatFunc(num.scale(1 / lc), den.scale(1 / lc))

    @staticmethod
    def const(c) -> "RatFunc":
        return RatFunc.make(Poly.const(c), Poly.of(1))

    @staticmethod
    def x() -> "RatFunc":
        return RatFunc.make(Poly.x(), Poly.of(1))

    @staticmethod
    def coerce(v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        return RatFunc.const(v)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = RatFunc.coerce(other)
        return RatFunc.make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other):
        other = RatFunc.coerce(other)
        return RatFunc.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc.coerce(other)
        if other.is_zero():
            raise ScalarDivisionError("division by zero rational function")
        return RatFunc.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (RatFunc.const(1) / self) ** (-k)
        out = RatFunc.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def eval(self, x: Fraction) -> Fraction:
        d = self.den.eval(x)
        if d == 0:
            raise PoleError(f"pole at x = {x}")
        return self.num.eval(x) / d

    def subst_scale(self, c: Fraction) -> "RatFunc":
        return RatFunc.make(self.num.subst_scale(c), self.den.subst_scale(c))

    def subst_translate(self, k: Fraction) -> "RatFunc":
        return RatFunc.make(self.num.subst_translate(k), self.den.subst_translate(k))

    def subst_inv(self) -> "RatFunc":
        """f(x) -> f(1/x): num(1/x)/den(1/x) cleared to polynomials by x^L."""
        if self.is_zero():
            return self
        dn, dd = self.num.degree, self.den.degree
        L = max(dn, dd)
        rn = [Fraction(0)] * (L - dn) + list(self.num.coeffs[::-1])
        rd = [Fraction(0)] * (L - dd) + list(self.den.coeffs[::-1])
        return RatFunc.make(Poly(_trim(rn)), Poly(_trim(rd)))

    def inf_coeff(self, order: int) -> Fraction:
        """Coefficient of x^{-order} in the expansion at infinity, for functions
        vanishing there (deg num < deg den).  Exact; used for 1/lambda asymptotics."""
        if self.is_zero():
            return Fraction(0)
        gap = self.den.degree - self.num.degree
        if gap <= 0:
            raise ValueError("function does not vanish at infinity")
        if order < gap:
            return Fraction(0)
        # expand num/den = x^{-gap} (lc_n/lc_d) (1 + ...) via series division
        k = order - gap
        n = self.num.coeffs[::-1]  # high degree first
        d = self.den.coeffs[::-1]
        series = []
        rem = list(n) + [Fraction(0)] * (k + 1)
        for i in range(k + 1):
            c = rem[i] / d[0]
            series.append(c)
            for j, dj in enumerate(d):
                if i + j < len(rem):
                    rem[i + j] -= c * dj
        return series[k]

    def to_json(self) -> dict:
        return {
            "num": [scalar_to_str(c) for c in self.num.coeffs],
            "den": [scalar_to_str(c) for c in self.den.coeffs],
        }

    @staticmethod
    def from_json(d: dict) -> "RatFunc":
        num = Poly(_trim([Fraction(c) for c in d["num"]]))
        den = Poly(_trim([Fraction(c) for c in d["den"]]))
        return RatFunc.make(num, den)


# ---------------------------------------------------------------------------
# sample points


@dataclass(frozen=True)
class SamplePoint:
    """A numeric lambda.  Trigonometric: coords[a] = q^{lambda_a} (so z_a = coords[a]^2);
    classical: coords[a] = lambda_a.  Carries provenance for reproducibility."""

    qp: QParam
    coords: tuple[Fraction, ...]
    seed: int | None = None
    draw_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))
        if not self.qp.classical and any(c == 0 for c in self.coords):
            raise ValueError("trigonometric coordinates must be nonzero")

    @property
    def ncoords(self) -> int:
        return len(self.coords)

    def z(self, a: int) -> Fraction:
        """z_a = q^{2 lambda_a} (trig) or lambda_a (classical)."""
        return self.coords[a] ** 2 if not self.qp.classical else self.coords[a]

    def shift(self, weight: Sequence[int]) -> "SamplePoint":
        """lambda -> lambda - weight (weight an integer vector in the coordinate basis)."""
        if len(weight) != len(self.coords):
            raise ValueError("weight length mismatch")
        if self.qp.classical:
            cs = tuple(c - w for c, w in zip(self.coords, weight))
        else:
            cs = tuple(c * self.qp.qpow(-w) for c, w in zip(self.coords, weight))
        return SamplePoint(self.qp, cs, self.seed, self.draw_index)

    def to_json(self) -> dict:
        return {
            "case": "classical" if self.qp.classical else "trigonometric",
            "s": scalar_to_str(self.qp.s),
            "coords": [scalar_to_str(c) for c in self.coords],
            "z": [scalar_to_str(self.z(a)) for a in range(self.ncoords)],
            "seed": self.seed,
            "draw_index": self.draw_index,
        }


class AvoidExhausted(RuntimeError):
    pass


def random_regular_point(
    qp: QParam,
    ncoords: int,
    seed: int,
    avoid: Sequence = (),
    bits: int = 16,
    max_tries: int = 500,
) -> SamplePoint:
    """Draw a reproducible random SamplePoint at which no avoid-constraint vanishes.

    Entries of `avoid` are either RatFunc (evaluated on the single coordinate;
    only valid when ncoords == 1) or callables SamplePoint -> Fraction.
    """
    rng = random.Random(seed)
    for attempt in range(max_tries):
        coords = []
        for _ in range(ncoords):
            num = 0
            while num == 0:
                num = rng.randint(-(2 ** bits), 2 ** bits)
            den = rng.randint(1, 2 ** bits)
            coords.append(Fraction(num, den))
        pt = SamplePoint(qp, tuple(coords), seed=seed, draw_index=attempt)
        ok = True
        for j, f in enumerate(avoid):
            if isinstance(f, RatFunc):
                if ncoords != 1:
                    raise ValueError("RatFunc avoid-constraints need a 1-coordinate point")
                try:
                    val = f.eval(pt.coords[0])
                except PoleError:
                    val = Fraction(0)  # pole of the constraint: treat as bad point
            else:
                val = f(pt)
            if val == 0:
                ok = False
                break
        if ok:
            return pt
    raise AvoidExhausted(
        f"no regular point found in {max_tries} draws (last failing constraint index {j})"
    )
