"""Universal coefficients as formal products of infinite q-Pochhammer blocks.

A block ``(c z; b)_inf`` is stored as its argument ``c``; the base ``b`` is the
square of ``p*`` of the ambient type and is shared by every block of a
product.  Nothing is ever evaluated: two products are compared by grouping
arguments that differ by an integer power of ``b`` and telescoping with

    (c z; b)_inf / (c b^k z; b)_inf = (1 - c z)(1 - c b z) ... (1 - c b^{k-1} z).

Argument conventions: ``universal_coefficient(t, l, p, k, m)`` is
``a_{l^p,k^m}(z)``, the coefficient of ``V(l^p) (x) V(k^m)_z``; denominator
roots and block arguments transform under spectral shifts as
``f_{M_x,N_y}(z) = f_{M,N}(z y / x)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .affine_data import AffineType, cartan_data
from .denominator import ExtensionTable, RootMultiset, kr_denominator
from .errors import BaseMismatch, UcoefDataUnavailable
from .scalar import ONE, OMEGA, QMonomial, negq, negqs, negqt, qs

__all__ = [
    "PochhammerProduct",
    "LinearFactorProduct",
    "RatioReport",
    "Module",
    "BRACKET_BASE",
    "universal_coefficient",
    "ucoef_from_denominators",
    "reduce_ratio",
    "canonical_eq_mod_units",
    "ak_ratio_check",
]


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class PochhammerProduct:
    """``prod_c (c z; base)_inf ** mult_c`` with nonzero multiplicities."""

    base: QMonomial
    blocks: tuple[tuple[QMonomial, int], ...] = ()

    @classmethod
    def build(cls, base: QMonomial, blocks: Mapping[QMonomial, int] | Iterable[tuple[QMonomial, int]]) -> "PochhammerProduct":
        c: Counter = Counter()
        items = blocks.items() if isinstance(blocks, Mapping) else blocks
        for arg, mult in items:
            c[arg] += mult
        return cls(base, tuple(sorted((a, v) for a, v in c.items() if v)))

    def as_counter(self) -> Counter:
        return Counter(dict(self.blocks))

    def __mul__(self, other: "PochhammerProduct") -> "PochhammerProduct":
        _same_base(self, other)
        return PochhammerProduct.build(self.base, list(self.blocks) + list(other.blocks))

    def __truediv__(self, other: "PochhammerProduct") -> "PochhammerProduct":
        _same_base(self, other)
        inv = [(a, -v) for a, v in other.blocks]
        return PochhammerProduct.build(self.base, list(self.blocks) + inv)

    def rescale(self, x: QMonomial) -> "PochhammerProduct":
        """The product evaluated at ``x z``."""
        return PochhammerProduct.build(self.base, [(a * x, v) for a, v in self.blocks])

    def canonical(self) -> "PochhammerProduct":
        return PochhammerProduct.build(self.base, self.blocks)

    @property
    def numerator_count(self) -> int:
        return sum(v for _, v in self.blocks if v > 0)

    @property
    def denominator_count(self) -> int:
        return -sum(v for _, v in self.blocks if v < 0)

    def to_json(self) -> dict:
        return {
            "blocks": [{"arg": a.to_json(), "mult": v} for a, v in self.blocks],
            "base": self.base.to_json(),
        }


def _same_base(a: PochhammerProduct, b: PochhammerProduct) -> None:
    if a.base != b.base:
        raise BaseMismatch(f"bases {a.base} and {b.base} differ")


@dataclass(frozen=True)
class LinearFactorProduct:
    """``prod (z - root) ** mult`` up to a unit; ``mult`` may be negative."""

    factors: tuple[tuple[QMonomial, int], ...] = ()

    @classmethod
    def build(cls, items: Mapping[QMonomial, int] | Iterable[tuple[QMonomial, int]]) -> "LinearFactorProduct":
        c: Counter = Counter()
        for r, v in (items.items() if isinstance(items, Mapping) else items):
            c[r] += v
        return cls(tuple(sorted((r, v) for r, v in c.items() if v)))

    @classmethod
    def from_roots(cls, roots: Iterable[QMonomial], sign: int = 1) -> "LinearFactorProduct":
        return cls.build([(r, sign) for r in roots])

    def as_counter(self) -> Counter:
        return Counter(dict(self.factors))

    def __mul__(self, other: "LinearFactorProduct") -> "LinearFactorProduct":
        return LinearFactorProduct.build(list(self.factors) + list(other.factors))

    def inverse(self) -> "LinearFactorProduct":
        return LinearFactorProduct.build([(r, -v) for r, v in self.factors])

    @property
    def is_empty(self) -> bool:
        return not self.factors

    @property
    def is_polynomial(self) -> bool:
        return all(v > 0 for _, v in self.factors)

    def to_json(self) -> list:
        return [{"root": r.to_json(), "mult": v} for r, v in self.factors]


@dataclass(frozen=True)
class RatioReport:
    residual_blocks: PochhammerProduct
    finite_part: LinearFactorProduct
    numerator_part: LinearFactorProduct = field(default_factory=LinearFactorProduct)

    @property
    def is_laurent(self) -> bool:
        return not self.residual_blocks.blocks and self.finite_part.is_polynomial

    @property
    def is_unit(self) -> bool:
        return not self.residual_blocks.blocks and self.finite_part.is_empty

    def to_json(self) -> dict:
        return {
            "residual": self.residual_blocks.to_json(),
            "finite_part": self.finite_part.to_json(),
            "numerator_part": self.numerator_part.to_json(),
            "is_laurent": self.is_laurent,
        }


# ---------------------------------------------------------------------------
# reduction


def _class_of(arg: QMonomial, base: QMonomial) -> tuple[QMonomial, int]:
    """Split ``arg = rep * base**k`` with ``0 <= rep.qexp < base.qexp``."""
    k = int((arg.qexp / base.qexp).__floor__())
    return arg / base**k, k


def reduce_ratio(num: PochhammerProduct, den: PochhammerProduct) -> RatioReport:
    """Reduce ``num / den`` to residual blocks times a finite product."""
    _same_base(num, den)
    base = num.base
    if base.qexp <= 0:
        raise BaseMismatch(f"base {base} does not have positive q-degree")
    classes: dict[QMonomial, Counter] = {}
    for sign, prod in ((1, num), (-1, den)):
        for arg, mult in prod.blocks:
            rep, k = _class_of(arg, base)
            classes.setdefault(rep, Counter())[k] += sign * mult
    residual: list[tuple[QMonomial, int]] = []
    finite: Counter = Counter()
    for rep, levels in classes.items():
        levels = Counter({k: v for k, v in levels.items() if v})
        if not levels:
            continue
        top = max(levels)
        total = sum(levels.values())
        if total:
            residual.append((rep * base**top, total))
        for k, v in levels.items():
            for j in range(k, top):
                # factor (1 - rep b^j z) has root (rep b^j)^{-1}
                finite[(rep * base**j).inverse()] += v
    return RatioReport(
        residual_blocks=PochhammerProduct.build(base, residual),
        finite_part=LinearFactorProduct.build(finite),
    )


def canonical_eq_mod_units(p1: PochhammerProduct, p2: PochhammerProduct) -> bool:
    return reduce_ratio(p1, p2).is_unit


# ---------------------------------------------------------------------------
# closed forms

# Coefficient c in the plain bracket [a] = (c^a z; p*^2)_inf, per type.
BRACKET_BASE: dict[str, QMonomial] = {
    "A1": negq(1),
    "B1": negq(1),
    "C1": negqs(1),
    "D1": negq(1),
    "G1": negqt(1),
    "A2odd": negq(1),
    "D3": negq(1),
}


class _Acc:
    """Accumulates block arguments for one closed form."""

    def __init__(self, t: AffineType):
        self.t = t
        self.c: Counter = Counter()
        self.br = BRACKET_BASE[t.label]

    def add(self, args: Iterable[QMonomial], sign: int) -> None:
        for a in args:
            self.c[a] += sign

    # bracket families
    def sq(self, a: int) -> list[QMonomial]:
        return [self.br**a]

    @staticmethod
    def pa(a: int) -> list[QMonomial]:
        return [-negq(a)]

    @staticmethod
    def pnz(a: int, d: int) -> list[QMonomial]:
        return [QMonomial(12 * d, 0) * qs(a)]

    @staticmethod
    def s_br(a: int) -> list[QMonomial]:
        return [negqs(a)]

    @staticmethod
    def bb(a: int) -> list[QMonomial]:
        return [OMEGA**j * negq(a) for j in range(3)]

    @staticmethod
    def pp(a: int) -> list[QMonomial]:
        return [OMEGA * negq(a), OMEGA**2 * negq(a)]

    def ratio(self, num: Sequence[list[QMonomial]], den: Sequence[list[QMonomial]]) -> None:
        for blk in num:
            self.add(blk, 1)
        for blk in den:
            self.add(blk, -1)

    def product(self) -> PochhammerProduct:
        return PochhammerProduct.build(cartan_data(self.t).pstar ** 2, self.c)


def universal_coefficient(t: AffineType, l: int, p: int, k: int, m: int) -> PochhammerProduct:
    """``a_{l^p,k^m}(z)`` from its closed product formula."""
    if k not in t.nodes or l not in t.nodes:
        raise UcoefDataUnavailable(f"nodes ({l},{k}) not in I_0 of {t}")
    label = t.label
    fn = _CLOSED.get(label)
    if fn is None:
        raise UcoefDataUnavailable(f"no closed universal coefficient for {t}")
    acc = _Acc(t)
    fn(acc, t.n, l, p, k, m)
    return acc.product()


def _uc_A(acc: _Acc, n: int, l: int, p: int, k: int, m: int) -> None:
    b = acc.sq
    e = abs(p - m)
    for s in range(1, min(k, l, n - k, n - l) + 1):
        for t in range(min(p, m)):
            u = e + 2 * (s + t)
            acc.ratio(
                [b(n + abs(n - k - l) + u), b(n - abs(n - k - l) - u)],
                [b(abs(k - l) + u), b(2 * n - abs(k - l) - u)],
            )


def _uc_B(acc: _Acc, n: int, l: int, p: int, k: int, m: int) -> None:
    b, pa, pnz = acc.sq, acc.pa, acc.pnz
    if k < n and l < n:
        e = abs(m - p)
        for s in range(1, min(k, l) + 1):
            for t in range(min(p, m)):
                u = 2 * (s + t)
                acc.ratio(
                    [b(k + l - e - u), pa(2 * n - abs(k - l) - e - 1 - u),
                     pa(2 * n + abs(k - l) + e - 1 + u), b(4 * n - k - l + e - 2 + u)],
                    [b(abs(k - l) + e + u), pa(2 * n + k + l - e - 1 - u),
                     pa(2 * n - k - l + e - 1 + u), b(4 * n - abs(k - l) - e - 2 - u)],
                )
        return
    if k == n and l == n:
        p, m = min(p, m), max(p, m)
        for s in range(1, n + 1):
            for t in range(min(p, m)):
                d = m - p
                acc.ratio(
                    [pnz(4 * n + 4 * s + 2 * t - 4 + m - p, d), pnz(4 * n - 4 * s - 2 * t - m + p, d)],
                    [pnz(4 * s + 2 * t - 2 + m - p, d), pnz(8 * n - 2 - 4 * s - 2 * t - m + p, d)],
                )
        return
    if l == n:
        l, p, k, m = k, m, l, p
    d = m + n + l + p
    e = abs(2 * p - m)
    for s in range(1, l + 1):
        for t in range(min(2 * p, m)):
            acc.ratio(
                [pnz(2 * n + 2 * l - e - 4 * s - 2 * t, d), pnz(6 * n - 2 * l - 4 + e + 4 * s + 2 * t, d)],
                [pnz(2 * n - 2 * l - 2 + e + 4 * s + 2 * t, d), pnz(6 * n - 2 + 2 * l - e - 4 * s - 2 * t, d)],
            )


def _uc_C(acc: _Acc, n: int, l: int, p: int, k: int, m: int) -> None:
    sb, pnz = acc.s_br, acc.pnz
    if k < n and l < n:
        e = abs(m - p)
        for s in range(1, min(k, l) + 1):
            for t in range(min(p, m)):
                u = 2 * s + 2 * t
                acc.ratio(
                    [sb(k + l - e - u), sb(4 * n + 4 - k - l + e + u),
                     sb(2 * n + 2 + abs(k - l) + e + u), sb(2 * n + 2 - abs(k - l) - e - u)],
                    [sb(abs(k - l) + e + u), sb(4 * n + 4 - abs(k - l) - e - u),
                     sb(2 * n + 2 - k - l + e + u), sb(2 * n + 2 + k + l - e - u)],
                )
        return
    if k == n and l == n:
        p, m = min(p, m), max(p, m)
        d = m + p
        for s in range(1, n + 1):
            for t in range(min(p, m)):
                acc.ratio(
                    [pnz(2 * n + 4 + 2 * m - 2 * p + 2 * s + 4 * t, d), pnz(2 * n - 2 * m + 2 * p - 2 * s - 4 * t, d)],
                    [pnz(2 + 2 * m - 2 * p + 2 * s + 4 * t, d), pnz(4 * n + 2 - 2 * m + 2 * p - 2 * s - 4 * t, d)],
                )
        return
    if l == n:
        l, p, k, m = k, m, l, p
    d = m + n + l + p
    e = abs(2 * m - p)
    for s in range(1, l + 1):
        for t in range(min(p, 2 * m)):
            acc.ratio(
                [pnz(n + 1 + l - e - 2 * s - 2 * t, d), pnz(3 * n + 3 - l + e + 2 * s + 2 * t, d)],
                [pnz(n + 1 - l + e + 2 * s + 2 * t, d), pnz(3 * n + 3 + l - e - 2 * s - 2 * t, d)],
            )


def _uc_D(acc: _Acc, n: int, l: int, p: int, k: int, m: int) -> None:
    b = acc.sq
    spins = (n - 1, n)
    if k not in spins and l not in spins:
        e = abs(m - p)
        for s in range(1, min(k, l) + 1):
            for t in range(min(p, m)):
                u = 2 * (s + t)
                acc.ratio(
                    [b(k + l - e - u), b(2 * n - 2 + abs(k - l) + e + u),
                     b(2 * n - 2 - abs(k - l) - e - u), b(4 * n - k - l + e - 4 + u)],
                    [b(abs(k - l) + e + u), b(2 * n - 2 + k + l - e - u),
                     b(2 * n - k - l + e - 2 + u), b(4 * n - 4 - abs(k - l) - e - u)],
                )
        return
    if k in spins and l in spins:
        p, m = min(p, m), max(p, m)
        # numerator brackets follow the pair (l*, k), denominator ones (l, k)
        same = k == l
        dual_same = (k == l) == (n % 2 == 0)
        for t in range(p):
            for s in range(1, n // 2 + 1):
                if dual_same:
                    acc.ratio([b(2 * n + 4 * s + 2 * t - 4 + m - p), b(2 * n - 4 * s - 2 * t - m + p)], [])
                if same:
                    acc.ratio([], [b(4 * s + 2 * t - 2 + m - p), b(4 * n - 2 - 4 * s - 2 * t - m + p)])
            for s in range(1, (n - 1) // 2 + 1):
                if not dual_same:
                    acc.ratio([b(2 * n + 4 * s + 2 * t + m - p - 2), b(2 * n - 4 * s - 2 * t - m + p - 2)], [])
                if not same:
                    acc.ratio([], [b(4 * s + 2 * t + m - p), b(4 * n - 4 * s - 2 * t - m + p - 4)])
        return
    if l in spins:
        l, p, k, m = k, m, l, p
    e = abs(p - m)
    for s in range(1, l + 1):
        for t in range(min(p, m)):
            u = 2 * (s + t)
            acc.ratio(
                [b(3 * n - l - 3 + e + u), b(n - 1 + l - e - u)],
                [b(n - l - 1 + e + u), b(3 * n - 3 + l - e - u)],
            )


def _uc_G2(acc: _Acc, n: int, l: int, p: int, k: int, m: int) -> None:
    b = acc.sq
    if l == 1 and k == 1:
        for s in range(1, 5):
            for t in range(p):
                acc.ratio(
                    [b(16 + 2 * s + 3 * m - 3 * p + 6 * t), b(8 - 2 * s - 3 * m + 3 * p - 6 * t)],
                    [b(4 + 2 * s + 3 * m - 3 * p + 6 * t), b(20 - 2 * s - 3 * m + 3 * p - 6 * t)],
                )
        return
    if l == 2 and k == 2:
        p, m = min(p, m), max(p, m)
        for t in range(min(p, m)):
            x = m - p + 2 * t
            y = -m + p - 2 * t
            acc.ratio(
                [b(x + 14), b(x + 18), b(x + 20), b(x + 24), b(10 + y), b(6 + y), b(4 + y), b(y)],
                [b(x + 2), b(x + 6), b(x + 8), b(x + 12), b(22 + y), b(18 + y), b(16 + y), b(12 + y)],
            )
        return
    if l == 2:
        l, p, k, m = k, m, l, p
    for t in range(min(3 * p, m)):
        y = -2 * t - abs(m - 3 * p)
        acc.ratio(
            [b(3 + y), b(7 + y), b(17 - y), b(21 - y)],
            [b(5 - y), b(9 - y), b(15 + y), b(19 + y)],
        )


def _uc_D43(acc: _Acc, n: int, l: int, p: int, k: int, m: int) -> None:
    b, bb, pp = acc.sq, acc.bb, acc.pp
    if l == 1 and k == 1:
        p, m = min(p, m), max(p, m)
        for t in range(min(m, p)):
            x = m - p + 2 * t
            acc.ratio(
                [b(8 + x), b(4 - x), b(12 + x), b(-x), pp(10 + x), pp(2 - x)],
                [b(2 + x), b(10 - x), b(6 + x), b(6 - x), pp(4 + x), pp(8 - x)],
            )
        return
    if l == 2 and k == 2:
        # printed with the roles a_{2^m,2^p}
        mm, pp_ = max(m, p), min(m, p)
        for t in range(min(m, p)):
            x = mm - pp_ + 2 * t
            acc.ratio(
                [bb(x + 8), bb(4 - x), bb(x + 10), bb(x + 10), bb(2 - x), bb(2 - x), bb(x + 12), bb(-x)],
                [bb(x + 2), bb(10 - x), bb(x + 4), bb(x + 4), bb(8 - x), bb(8 - x), bb(x + 6), bb(6 - x)],
            )
        return
    e = abs(m - p)
    for t in range(min(m, p)):
        acc.ratio(
            [bb(e + 9 + 2 * t), bb(3 - e - 2 * t), bb(e + 11 + 2 * t), bb(1 - e - 2 * t)],
            [bb(e + 3 + 2 * t), bb(9 - e - 2 * t), bb(e + 5 + 2 * t), bb(7 - e - 2 * t)],
        )


def _uc_A2odd(acc: _Acc, n: int, l: int, p: int, k: int, m: int) -> None:
    if max(m, p) > 1 or min(k, l) > 1:
        raise UcoefDataUnavailable(
            "closed universal coefficients for twisted type A are known here only for a fundamental pair with node 1"
        )
    b, pa = acc.sq, acc.pa
    acc.ratio(
        [b(abs(k - l)), b(4 * n - abs(k - l)), pa(2 * n + k + l), pa(2 * n - k - l)],
        [b(k + l), b(4 * n - k - l), pa(2 * n + abs(k - l)), pa(2 * n - abs(k - l))],
    )


_CLOSED: dict[str, Callable[..., None]] = {
    "A1": _uc_A,
    "B1": _uc_B,
    "C1": _uc_C,
    "D1": _uc_D,
    "G1": _uc_G2,
    "D3": _uc_D43,
    "A2odd": _uc_A2odd,
}


# ---------------------------------------------------------------------------
# from denominators


def ucoef_from_denominators(
    t: AffineType, l: int, p: int, k: int, m: int, extensions: ExtensionTable | None = None
) -> PochhammerProduct:
    """``a_{l^p,k^m}(z)`` assembled from denominator roots.

    ``x`` runs over the roots of ``d_{l^p,k^m}`` and ``y`` over those of
    ``d_{(l*)^p,k^m}``; numerator blocks are ``p* y`` and ``p* bar(y)``,
    denominator blocks ``x`` and ``p*^2 bar(x)``.
    """
    cd = cartan_data(t)
    ps = cd.pstar
    xs = kr_denominator(t, l, p, k, m, extensions)
    ys = kr_denominator(t, cd.istar[l], p, k, m, extensions)
    c: Counter = Counter()
    for y in ys:
        c[ps * y] += 1
        c[ps * y.bar()] += 1
    for x in xs:
        c[x] -= 1
        c[ps * ps * x.bar()] -= 1
    return PochhammerProduct.build(ps * ps, c)


# ---------------------------------------------------------------------------
# the ratio test of a surjection


@dataclass(frozen=True)
class Module:
    """``V(k^m)_a`` in the V-convention."""

    k: int
    m: int
    a: QMonomial = ONE

    def __str__(self) -> str:
        return f"V({self.k}^{self.m})_{{{self.a}}}"


UcoefSource = Callable[[AffineType, int, int, int, int], PochhammerProduct]


def _pair_data(
    t: AffineType,
    first: Module,
    second: Module,
    ucoef: UcoefSource,
    extensions: ExtensionTable | None,
) -> tuple[RootMultiset, PochhammerProduct]:
    """Denominator roots and coefficient of ``first (x) second_z``."""
    d = kr_denominator(t, first.k, first.m, second.k, second.m, extensions)
    a = ucoef(t, first.k, first.m, second.k, second.m)
    # f_{M_x,N_y}(z) = f_{M,N}(z y / x)
    shift = second.a / first.a
    return d.shift(shift.inverse()), a.rescale(shift)


def ak_ratio_check(
    t: AffineType,
    factors: tuple[Module, Module],
    target: Module,
    probe: Module | None,
    side: str = "left",
    ucoef: UcoefSource | None = None,
    extensions: ExtensionTable | None = None,
) -> RatioReport:
    """Evaluate the ratio attached to a surjection ``M' (x) M'' ->> M``.

    With ``side='left'`` the probe ``N`` sits on the left of every pair,
    otherwise on the right.  ``probe=None`` stands for the trivial module.
    ``numerator_part`` records the finite part before dividing by
    ``d_{N,M}`` (resp. ``d_{M,N}``).
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if ucoef is None:
        ucoef = universal_coefficient
    if probe is None:
        base = cartan_data(t).pstar ** 2
        empty = PochhammerProduct(base)
        return RatioReport(empty, LinearFactorProduct(), LinearFactorProduct())

    def pair(mod: Module) -> tuple[RootMultiset, PochhammerProduct]:
        if side == "left":
            return _pair_data(t, probe, mod, ucoef, extensions)
        return _pair_data(t, mod, probe, ucoef, extensions)

    d1, a1 = pair(factors[0])
    d2, a2 = pair(factors[1])
    d0, a0 = pair(target)
    red = reduce_ratio(a0, a1 * a2)
    numer = LinearFactorProduct.from_roots(d1) * LinearFactorProduct.from_roots(d2) * red.finite_part
    finite = numer * LinearFactorProduct.from_roots(d0, sign=-1)
    return RatioReport(red.residual_blocks, finite, numer)
