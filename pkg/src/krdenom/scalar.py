"""Exact q-monomials with 24th-root-of-unity coefficients.

A :class:`QMonomial` is ``zeta24**k * q**e`` where ``zeta24 = exp(2*pi*i/24)``
and ``e`` is a rational number whose reduced denominator divides 12.  These
values serve as spectral parameters, denominator roots and Pochhammer
arguments throughout the package.

Text form::

    [z24^K*]q^{P/R}      e.g.  q^{2}, -q^{3/2}, i*q, w*q^{-1}, z24^5*q^{1/3}

where the prefixes ``-``, ``i`` and ``w`` are shorthand for ``K = 12, 6, 8``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import ExponentOverflow, MalformedSpec, NotRepresentable

__all__ = [
    "QMonomial",
    "ONE",
    "Q",
    "mono",
    "q",
    "negq",
    "qs",
    "negqs",
    "qt",
    "negqt",
    "unit",
    "SIGN",
    "I",
    "OMEGA",
    "parse_scalar",
    "format_scalar",
]

MAX_DENOMINATOR = 12

Rational = Union[int, Fraction]


def _check_exponent(e: Fraction) -> Fraction:
    if MAX_DENOMINATOR % e.denominator:
        raise ExponentOverflow(f"q-exponent {e} has denominator outside 12")
    return e


@dataclass(frozen=True, eq=False)
class QMonomial:
    """The scalar ``zeta24**zeta * q**qexp``.

    Ordering is by ``(qexp, zeta)``, which gives the canonical sort used for
    root multisets.
    """

    qexp: Fraction
    zeta: int

    def __init__(self, zeta: int = 0, qexp: Rational = 0):
        e = _check_exponent(Fraction(qexp))
        z = int(zeta) % 24
        object.__setattr__(self, "qexp", e)
        object.__setattr__(self, "zeta", z)
        # integer sort key; the exponent denominator divides 12
        object.__setattr__(self, "_key", (e.numerator * (12 // e.denominator), z))

    def __hash__(self) -> int:
        return hash(self._key)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QMonomial):
            return NotImplemented
        return self._key == other._key

    def __lt__(self, other: "QMonomial") -> bool:
        return self._key < other._key

    def __le__(self, other: "QMonomial") -> bool:
        return self._key <= other._key

    def __gt__(self, other: "QMonomial") -> bool:
        return self._key > other._key

    def __ge__(self, other: "QMonomial") -> bool:
        return self._key >= other._key

    @property
    def sort_key(self) -> tuple[int, int]:
        """``(12 * qexp, zeta)`` as integers."""
        return self._key

    def __mul__(self, other: "QMonomial") -> "QMonomial":
        if not isinstance(other, QMonomial):
            return NotImplemented
        return QMonomial(self.zeta + other.zeta, self.qexp + other.qexp)

    def __truediv__(self, other: "QMonomial") -> "QMonomial":
        if not isinstance(other, QMonomial):
            return NotImplemented
        return QMonomial(self.zeta - other.zeta, self.qexp - other.qexp)

    def __pow__(self, n: int) -> "QMonomial":
        return QMonomial(self.zeta * n, self.qexp * n)

    def __neg__(self) -> "QMonomial":
        return QMonomial(self.zeta + 12, self.qexp)

    def inverse(self) -> "QMonomial":
        return QMonomial(-self.zeta, -self.qexp)

    def bar(self) -> "QMonomial":
        """Bar involution: ``q -> q^{-1}`` and complex conjugation."""
        return QMonomial(-self.zeta, -self.qexp)

    @property
    def is_unit(self) -> bool:
        """True when the q-exponent vanishes (a pure root of unity)."""
        return self.qexp == 0

    def square_roots(self) -> tuple["QMonomial", "QMonomial"]:
        return square_roots(self)

    def cube_roots(self) -> tuple["QMonomial", "QMonomial", "QMonomial"]:
        return cube_roots(self)

    def to_json(self) -> dict:
        return {"zeta24": self.zeta, "qexp": [self.qexp.numerator, self.qexp.denominator]}

    @classmethod
    def from_json(cls, data: dict) -> "QMonomial":
        try:
            num, den = data["qexp"]
            return cls(int(data["zeta24"]), Fraction(int(num), int(den)))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedSpec(f"bad scalar JSON: {data!r}") from exc

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"QMonomial({format_scalar(self)})"


def mono(zeta: int = 0, qexp: Rational = 0) -> QMonomial:
    return QMonomial(zeta, qexp)


ONE = QMonomial(0, 0)
Q = QMonomial(0, 1)
SIGN = QMonomial(12, 0)
I = QMonomial(6, 0)
OMEGA = QMonomial(8, 0)


def unit(zeta: int) -> QMonomial:
    return QMonomial(zeta, 0)


def q(e: Rational = 1) -> QMonomial:
    """``q**e``."""
    return QMonomial(0, e)


def negq(a: int) -> QMonomial:
    """``(-q)**a``."""
    return QMonomial(12 * a, a)


def qs(a: Rational = 1) -> QMonomial:
    """``q_s**a`` with ``q_s**2 = q``."""
    return QMonomial(0, Fraction(a) / 2)


def negqs(a: int) -> QMonomial:
    """``(-q_s)**a``."""
    return QMonomial(12 * a, Fraction(a, 2))


def qt(a: Rational = 1) -> QMonomial:
    """``q_t**a`` with ``q_t**3 = q``."""
    return QMonomial(0, Fraction(a) / 3)


def negqt(a: int) -> QMonomial:
    """``(-q_t)**a``."""
    return QMonomial(12 * a, Fraction(a, 3))


def square_roots(a: QMonomial) -> tuple[QMonomial, QMonomial]:
    """Both square roots ``(r, -r)``; ``r`` has ``zeta`` in ``[0, 12)``."""
    if (MAX_DENOMINATOR // 2) % a.qexp.denominator:
        raise ExponentOverflow(f"cannot halve q-exponent {a.qexp}")
    if a.zeta % 2:
        raise NotRepresentable(f"square root of zeta24^{a.zeta} is not a 24th root of unity")
    r = QMonomial(a.zeta // 2, a.qexp / 2)
    if r.zeta >= 12:
        r = -r
    return r, -r


def cube_roots(a: QMonomial) -> tuple[QMonomial, QMonomial, QMonomial]:
    """The three cube roots, the first having ``zeta`` in ``[0, 8)``."""
    if (MAX_DENOMINATOR // 3) % a.qexp.denominator:
        raise ExponentOverflow(f"cannot divide q-exponent {a.qexp} by 3")
    if a.zeta % 3:
        raise NotRepresentable(f"cube root of zeta24^{a.zeta} is not a 24th root of unity")
    r = QMonomial((a.zeta // 3) % 8, a.qexp / 3)
    return r, r * OMEGA, r * OMEGA * OMEGA


_SUGAR = {12: "-", 6: "i*", 8: "w*"}
_SCALAR_RE = re.compile(
    r"""^\s*
    (?:(?P<z>z24\^(?P<k>-?\d+)\*?)|(?P<sugar>-|i\*?|w\*?))?
    (?:
        q(?:\^(?:\{(?P<brace>[^}]*)\}|(?P<bare>-?\d+(?:/\d+)?)))?
      | (?P<one>1)
    )
    \s*$""",
    re.VERBOSE,
)


def parse_scalar(text: str) -> QMonomial:
    """Parse the text grammar described in the module docstring."""
    m = _SCALAR_RE.match(text)
    if not m:
        raise MalformedSpec(f"not a q-monomial: {text!r}")
    zeta = 0
    if m.group("z"):
        zeta = int(m.group("k"))
    elif m.group("sugar"):
        zeta = {"-": 12, "i": 6, "w": 8}[m.group("sugar")[0]]
    if m.group("one"):
        return QMonomial(zeta, 0)
    raw = m.group("brace") if m.group("brace") is not None else m.group("bare")
    if raw is None:
        exp = Fraction(1)
    else:
        try:
            exp = Fraction(raw.replace(" ", ""))
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedSpec(f"bad exponent in {text!r}") from exc
    return QMonomial(zeta, exp)


def format_scalar(a: QMonomial) -> str:
    prefix = _SUGAR.get(a.zeta, "" if a.zeta == 0 else f"z24^{a.zeta}*")
    e = a.qexp
    exp = f"{e.numerator}" if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
    return f"{prefix}q^{{{exp}}}"


def product(values: Iterable[QMonomial]) -> QMonomial:
    out = ONE
    for v in values:
        out = out * v
    return out
