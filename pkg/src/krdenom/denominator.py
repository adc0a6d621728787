"""Denominators of normalized R-matrices between KR modules.

A denominator ``d_{k^m,l^p}(z)`` is stored as the multiset of its roots; each
occurrence of a root ``rho`` is one linear factor ``(z - rho)``.  Everything is
exact.  Polynomials in ``z^2`` or ``z^3`` are split into linear factors with
:func:`krdenom.scalar.square_roots` and :func:`krdenom.scalar.cube_roots`.

Fundamental denominators for ``A_{2n}^(2)`` and for the ``D_4^(3)`` node
pairs involving node 1 are not built in; supply them through an extension
table (see :func:`load_extensions`).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Mapping

from .affine_data import AffineType, parse_type
from .errors import CoefficientNotMonomial, FundamentalDataUnavailable, MalformedSpec, UnsupportedType
from .scalar import QMonomial, cube_roots, negq, negqs, negqt, parse_scalar, q, qs, qt, square_roots

__all__ = [
    "RootMultiset",
    "ExtensionTable",
    "load_extensions",
    "parse_extensions",
    "fundamental_denominator",
    "kr_denominator",
    "normal_form",
    "d2_substitution",
    "d2_closed_form",
    "expand",
    "root_multiplicity",
]


class RootMultiset:
    """Multiset of roots; equality is multiset equality."""

    __slots__ = ("_c", "source")

    def __init__(self, roots: Iterable[QMonomial] | Mapping[QMonomial, int] = (), source: str = ""):
        c = Counter(roots)
        if any(v < 0 for v in c.values()):
            raise ValueError("negative multiplicity in a root multiset")
        self._c = Counter({k: v for k, v in c.items() if v})
        self.source = source

    @property
    def roots(self) -> tuple[QMonomial, ...]:
        """All roots with repetition, in canonical order."""
        return tuple(sorted(self._c.elements()))

    def items(self) -> list[tuple[QMonomial, int]]:
        return sorted(self._c.items())

    def count(self, rho: QMonomial) -> int:
        return self._c.get(rho, 0)

    def __contains__(self, rho: QMonomial) -> bool:
        return rho in self._c

    def __len__(self) -> int:
        return sum(self._c.values())

    def __iter__(self) -> Iterator[QMonomial]:
        return iter(self.roots)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootMultiset):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "RootMultiset") -> "RootMultiset":
        return RootMultiset(self._c + other._c, self.source)

    def shift(self, c: QMonomial) -> "RootMultiset":
        """Roots of ``d(z / c)``: every root multiplied by ``c``."""
        return RootMultiset({r * c: v for r, v in self._c.items()}, self.source)

    def map(self, f: Callable[[QMonomial], QMonomial]) -> "RootMultiset":
        out: Counter = Counter()
        for r, v in self._c.items():
            out[f(r)] += v
        return RootMultiset(out, self.source)

    def counter(self) -> Counter:
        return Counter(self._c)

    def to_json(self) -> dict:
        return {"factors": [{"root": r.to_json(), "mult": v} for r, v in self.items()]}

    def __repr__(self) -> str:
        inner = ", ".join(f"{r}" + (f"^{v}" if v > 1 else "") for r, v in self.items())
        return f"RootMultiset({{{inner}}})"


def root_multiplicity(r: RootMultiset, rho: QMonomial) -> int:
    return r.count(rho)


def _power_roots(values: Iterable[QMonomial], power: int) -> list[QMonomial]:
    """Linear roots of ``prod (z**power - v)``."""
    out: list[QMonomial] = []
    for v in values:
        if power == 1:
            out.append(v)
        elif power == 2:
            out.extend(square_roots(v))
        elif power == 3:
            out.extend(cube_roots(v))
        else:  # pragma: no cover
            raise ValueError(power)
    return out


# ---------------------------------------------------------------------------
# extension tables

@dataclass
class ExtensionTable:
    """User-supplied fundamental denominators, keyed by type and node pair."""

    entries: dict[tuple[AffineType, int, int], RootMultiset] = field(default_factory=dict)
    origin: str = ""

    def get(self, t: AffineType, k: int, l: int) -> RootMultiset | None:
        hit = self.entries.get((t, k, l))
        if hit is None:
            hit = self.entries.get((t, l, k))
        return hit


_EXT_RE = re.compile(r"^\s*(\S+)\s+(\d+)\s+(\d+)\s*:\s*(.*?)\s*$")


def parse_extensions(text: str, origin: str = "<string>") -> ExtensionTable:
    """Parse lines ``TYPE k l : root;root`` (``#`` starts a comment)."""
    table = ExtensionTable(origin=origin)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _EXT_RE.match(line)
        if not m:
            raise MalformedSpec(f"{origin}:{lineno}: expected 'TYPE k l : root;root'")
        t = parse_type(m.group(1))
        k, l = int(m.group(2)), int(m.group(3))
        if k not in t.nodes or l not in t.nodes:
            raise MalformedSpec(f"{origin}:{lineno}: node out of range for {t}")
        body = m.group(4).strip()
        roots = [parse_scalar(tok) for tok in body.split(";") if tok.strip()] if body else []
        table.entries[(t, k, l)] = RootMultiset(roots, source=f"{origin}:{lineno}")
    return table


def load_extensions(path: str | Path) -> ExtensionTable:
    p = Path(path)
    return parse_extensions(p.read_text(), origin=str(p))


# ---------------------------------------------------------------------------
# fundamental formulas, one per family


def _fund_A(n: int, k: int, l: int) -> list[QMonomial]:
    mu = min(k, l, n - k, n - l)
    return [negq(abs(k - l) + 2 * s) for s in range(1, mu + 1)]


def _fund_B(n: int, k: int, l: int) -> list[QMonomial]:
    if k < n and l < n:
        out = []
        for s in range(1, min(k, l) + 1):
            out.append(negq(abs(k - l) + 2 * s))
            out.append(-negq(2 * n - k - l - 1 + 2 * s))
        return out
    if k == n and l == n:
        return [qs(4 * s - 2) for s in range(1, n + 1)]
    j = min(k, l)
    sign = QMonomial(12 * (n + j), 0)
    return [sign * qs(2 * n - 2 * j - 1 + 4 * s) for s in range(1, j + 1)]


def _fund_C(n: int, k: int, l: int) -> list[QMonomial]:
    out = [negqs(abs(k - l) + 2 * s) for s in range(1, min(k, l, n - k, n - l) + 1)]
    out += [negqs(2 * n + 2 - k - l + 2 * s) for s in range(1, min(k, l) + 1)]
    return out


def _fund_D(n: int, k: int, l: int) -> list[QMonomial]:
    spins = (n - 1, n)
    if k not in spins and l not in spins:
        out = []
        for s in range(1, min(k, l) + 1):
            out.append(negq(abs(k - l) + 2 * s))
            out.append(negq(2 * n - 2 - k - l + 2 * s))
        return out
    if k in spins and l in spins:
        if k == l:
            return [negq(4 * s - 2) for s in range(1, n // 2 + 1)]
        return [negq(4 * s) for s in range(1, (n - 1) // 2 + 1)]
    j = min(k, l)
    return [negq(n - j - 1 + 2 * s) for s in range(1, j + 1)]


_G2_FUND = {
    (1, 1): [qt(6), qt(8), qt(10), qt(12)],
    (1, 2): [-qt(7), -qt(11)],
    (2, 2): [qt(2), qt(8), qt(12)],
}


def _fund_A2odd(n: int, k: int, l: int) -> list[QMonomial]:
    out = []
    for s in range(1, min(k, l) + 1):
        out.append(negq(abs(k - l) + 2 * s))
        out.append(-negq(2 * n - k - l + 2 * s))
    return out


def _d1_fund_raw(N: int, k: int, l: int) -> list[QMonomial]:
    """Type ``D_N^(1)`` fundamental roots, valid for ``N >= 3``."""
    return _fund_D(N, k, l)


def _square_q(r: QMonomial) -> QMonomial:
    """Replace ``q`` by ``q^2`` in a monomial."""
    return QMonomial(r.zeta, 2 * r.qexp)


def _fund_D2(n: int, k: int, l: int) -> list[QMonomial]:
    """``D_{n+1}^(2)`` fundamentals for nodes below ``n``.

    Obtained from ``D_{n+1}^(1)`` by ``z -> z^2`` and ``q -> q^2``.
    """
    z2 = [_square_q(r) for r in _d1_fund_raw(n + 1, k, l)]
    return _power_roots(z2, 2)


def fundamental_denominator(
    t: AffineType, k: int, l: int, extensions: ExtensionTable | None = None
) -> RootMultiset:
    """Roots of ``d_{k,l}(z)`` between fundamental modules."""
    if k not in t.nodes or l not in t.nodes:
        raise UnsupportedType(f"nodes ({k},{l}) not in I_0 of {t}")
    ext = extensions.get(t, k, l) if extensions else None
    if ext is not None:
        return RootMultiset(ext.counter(), source=ext.source or "extension")
    label, n = t.label, t.n
    tag = f"{t}:fundamental({k},{l})"
    if label == "A1":
        roots = _fund_A(n, k, l)
    elif label == "B1":
        roots = _fund_B(n, k, l)
    elif label == "C1":
        roots = _fund_C(n, k, l)
    elif label == "D1":
        roots = _fund_D(n, k, l)
    elif label == "G1":
        roots = list(_G2_FUND[(min(k, l), max(k, l))])
    elif label == "A2odd":
        roots = _fund_A2odd(n, k, l)
    elif label == "D2":
        return d2_closed_form(n, k, 1, l, 1)
    elif label == "D3" and k == l == 2:
        roots = _power_roots([q(6), q(12), q(12), q(18)], 3)
    else:
        raise FundamentalDataUnavailable(
            f"no fundamental denominator for {t} nodes ({k},{l}); supply an extension table"
        )
    return RootMultiset(roots, source=tag)


# ---------------------------------------------------------------------------
# KR denominators


def normal_form(fund: RootMultiset, m: int, p: int, step: QMonomial) -> RootMultiset:
    """``prod_{t < min(m,p)} d((step)^{-|p-m|-2t} z)`` as a root multiset."""
    out = RootMultiset()
    for t in range(min(m, p)):
        out = out + fund.shift(step ** (abs(p - m) + 2 * t))
    return RootMultiset(out.counter(), source=fund.source)


def _kr_B(n: int, k: int, m: int, l: int, p: int) -> list[QMonomial] | None:
    if k < n and l < n:
        return None
    if k == n and l == n:
        return None
    # l^p against n^m
    if k < n:
        k, m, l, p = l, p, k, m
    out = []
    sign = QMonomial(12 * (n + l + p + m), 0)
    for t in range(min(2 * p, m)):
        for s in range(1, l + 1):
            out.append(sign * qs(2 * n - 2 * l - 2 + abs(2 * p - m) + 4 * s + 2 * t))
    return out


def _kr_C(n: int, k: int, m: int, l: int, p: int) -> list[QMonomial]:
    out = []
    if k < n and l < n:
        e = abs(m - p)
        for t in range(min(m, p)):
            for s in range(1, min(k, l) + 1):
                out.append(negqs(abs(k - l) + e + 2 * (s + t)))
                out.append(negqs(2 * n + 2 - k - l + e + 2 * (s + t)))
        return out
    if k == n and l == n:
        sign = QMonomial(12 * (m + p), 0)
        for t in range(min(p, m)):
            for s in range(1, n + 1):
                out.append(sign * qs(2 + abs(2 * m - 2 * p) + 2 * s + 4 * t))
        return out
    if k < n:
        k, m, l, p = l, p, k, m
    sign = QMonomial(12 * (n + p + l + m), 0)
    for t in range(min(p, 2 * m)):
        for s in range(1, l + 1):
            out.append(sign * qs(n + 1 - l + abs(2 * m - p) + 2 * s + 2 * t))
    return out


def _kr_G2(k: int, m: int, l: int, p: int) -> RootMultiset | None:
    if k == 2 and l == 2:
        if (m, p) == (1, 1):
            return RootMultiset(_G2_FUND[(2, 2)])
        if (m, p) == (2, 2):
            return RootMultiset([qt(2), qt(4), qt(8), qt(8), qt(10), qt(12), qt(14)])
        out = []
        e = abs(m - p)
        for t in range(min(m, p)):
            for s in (1, 2):
                out.append(negqt(-2 + e + 4 * s + 2 * t))
                out.append(negqt(4 + e + 4 * s + 2 * t))
        return RootMultiset(out)
    if k == 1 and l == 1:
        return None
    if k == 2:
        k, m, l, p = l, p, k, m
    # 1^m against 2^p
    fund = RootMultiset(_G2_FUND[(1, 2)])
    out = RootMultiset()
    for t in range(min(3 * m, p)):
        out = out + fund.shift(negqt(abs(3 * m - p) - 2 + 2 * t))
    return out


def d2_closed_form(n: int, k: int, m: int, l: int, p: int) -> RootMultiset:
    """``D_{n+1}^(2)`` denominators from the closed product formulas.

    Node pairs below ``n`` use the generic product over shifted fundamentals;
    pairs involving node ``n`` use their explicit products.
    """
    tag = f"D{n + 1}~2:closed({k}^{m},{l}^{p})"
    if k < n and l < n:
        fund = RootMultiset(_fund_D2(n, k, l))
        return RootMultiset(normal_form(fund, m, p, negq(1)).counter(), source=tag)
    if k == n and l == n:
        out = []
        for t in range(min(p, m)):
            for s in range(1, n + 1):
                # factor z + (-1)^{s+t+p+m} q^{2s+2t+|p-m|}
                out.append(QMonomial(12 * (s + t + p + m + 1), 2 * s + 2 * t + abs(p - m)))
        return RootMultiset(out, source=tag)
    if k < n:
        k, m, l, p = l, p, k, m
    z2 = []
    for t in range(min(p, m)):
        for s in range(1, l + 1):
            # factor z^2 + (-1)^{n+l+p+m} q^{n-l+|p-m|+2(s+t)}
            z2.append(QMonomial(12 * (n + l + p + m + 1), n - l + abs(p - m) + 2 * (s + t)))
    return RootMultiset(_power_roots(z2, 2), source=tag)


def _d1_kr_raw(N: int, k: int, m: int, l: int, p: int) -> RootMultiset:
    return normal_form(RootMultiset(_d1_fund_raw(N, k, l)), m, p, negq(1))


def d2_substitution(n: int, k: int, m: int, l: int, p: int) -> RootMultiset:
    """``D_{n+1}^(2)`` denominators read off ``D_{n+1}^(1)`` ones.

    The untwisted polynomial is evaluated at ``z^2`` (both nodes below ``n``),
    at ``-z^2`` (exactly one node equal to ``n``) or at ``-z`` with the two
    spin nodes multiplied together (both nodes equal to ``n``); in each case
    ``q`` is replaced by ``q^2``.
    """
    N = n + 1
    tag = f"D{N}~2:substitution({k}^{m},{l}^{p})"
    if k < n and l < n:
        vals = [_square_q(r) for r in _d1_kr_raw(N, k, m, l, p)]
        return RootMultiset(_power_roots(vals, 2), source=tag)
    if k == n and l == n:
        both = _d1_kr_raw(N, n, p, n, m) + _d1_kr_raw(N, n, p, n + 1, m)
        return RootMultiset([-_square_q(r) for r in both], source=tag)
    if k < n:
        k, m, l, p = l, p, k, m
    vals = [-_square_q(r) for r in _d1_kr_raw(N, l, p, n, m)]
    return RootMultiset(_power_roots(vals, 2), source=tag)


def kr_denominator(
    t: AffineType,
    k: int,
    m: int,
    l: int,
    p: int,
    extensions: ExtensionTable | None = None,
) -> RootMultiset:
    """Roots of ``d_{k^m,l^p}(z)`` between ``V(k^m)`` and ``V(l^p)``."""
    if k not in t.nodes or l not in t.nodes:
        raise UnsupportedType(f"nodes ({k},{l}) not in I_0 of {t}")
    if m < 1 or p < 1:
        raise ValueError("KR multiplicities must be positive")
    label, n = t.label, t.n
    tag = f"{t}:kr({k}^{m},{l}^{p})"
    if label == "D2":
        return d2_closed_form(n, k, m, l, p)
    if label == "C1":
        if max(m, p) == 1:
            return fundamental_denominator(t, k, l, extensions)
        return RootMultiset(_kr_C(n, k, m, l, p), source=tag)
    if label == "B1":
        explicit = _kr_B(n, k, m, l, p)
        if explicit is not None:
            return RootMultiset(explicit, source=tag)
        step = negqs(1) if k == n else negq(1)
        return normal_form(fundamental_denominator(t, k, l, extensions), m, p, step)
    if label == "G1":
        g = _kr_G2(k, m, l, p)
        if g is not None:
            return RootMultiset(g.counter(), source=tag)
    return normal_form(fundamental_denominator(t, k, l, extensions), m, p, negq(1))


# ---------------------------------------------------------------------------
# polynomial expansion

_PHI24 = (1, 0, 0, 0, -1, 0, 0, 0, 1)  # x^8 - x^4 + 1, low degree first


def _zeta_vector(k: int) -> tuple[int, ...]:
    """Coordinates of ``zeta24**k`` in the basis ``1, zeta, ..., zeta^7``."""
    vec = [0] * 24
    vec[k % 24] = 1
    for deg in range(23, 7, -1):
        c = vec[deg]
        if c:
            vec[deg] = 0
            # x^deg = x^(deg-8) * (x^4 - 1)
            vec[deg - 4] += c
            vec[deg - 8] -= c
    return tuple(vec[:8])


_ZETA_VECS = {k: _zeta_vector(k) for k in range(24)}
_VEC_TO_ZETA = {v: k for k, v in _ZETA_VECS.items()}


def expand(r: RootMultiset) -> list[QMonomial | int]:
    """Coefficients of ``prod (z - rho)`` from the leading one down.

    A zero coefficient is returned as ``0``.  If some coefficient is a sum of
    distinct monomials, :class:`CoefficientNotMonomial` is raised carrying
    the formal coefficients (dicts ``qexp -> vector over Z[zeta24]``).
    """
    # coefficient: dict qexp -> 8-vector
    coeffs: list[dict[Fraction, list[int]]] = [{Fraction(0): list(_ZETA_VECS[0])}]
    for rho in r.roots:
        neg = -rho
        new: list[dict[Fraction, list[int]]] = [dict() for _ in range(len(coeffs) + 1)]
        for i, c in enumerate(coeffs):
            for e, v in c.items():
                slot = new[i].setdefault(e, [0] * 8)
                for j in range(8):
                    slot[j] += v[j]
                # times (-rho), contributes to degree one lower
                target = new[i + 1].setdefault(e + neg.qexp, [0] * 8)
                shifted = _mul_vec_zeta(v, neg.zeta)
                for j in range(8):
                    target[j] += shifted[j]
        coeffs = [{e: v for e, v in c.items() if any(v)} for c in new]
    out: list[QMonomial | int] = []
    bad = False
    for c in coeffs:
        if not c:
            out.append(0)
            continue
        if len(c) == 1:
            (e, v), = c.items()
            k = _VEC_TO_ZETA.get(tuple(v))
            if k is not None:
                out.append(QMonomial(k, e))
                continue
        bad = True
        out.append(0)
    if bad:
        formal = [{e: tuple(v) for e, v in c.items()} for c in coeffs]
        raise CoefficientNotMonomial("a coefficient is not a single monomial", formal)
    return out


def _mul_vec_zeta(v: list[int], k: int) -> list[int]:
    acc = [0] * 8
    for j, cj in enumerate(v):
        if cj:
            w = _ZETA_VECS[(j + k) % 24]
            for i in range(8):
                acc[i] += cj * w[i]
    return acc
