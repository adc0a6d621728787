"""Affine types and the type-dependent constants used everywhere else.

Types are written ``<FAMILY><subscript>~<twist>`` with the subscript exactly as
it appears in the usual name of the algebra: ``A3~1`` is the untwisted algebra
of type A with classical part ``A_3``, ``D5~2`` is ``D_5^(2)`` (classical part
``B_4``), ``D4~3`` is ``D_4^(3)``.

Node labels follow Kac for the classical families (with the longest simple
root taken as ``alpha_0`` for ``A_{2n}^(2)``) and the exceptional diagrams
used throughout the package: in ``G_2^(1)`` node 1 is long, in ``D_4^(3)``
node 2 is long.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import MalformedSpec, UnsupportedType
from .scalar import QMonomial, negq, negqs, q, qt

__all__ = ["AffineType", "CartanData", "parse_type", "format_type", "cartan_data"]

_TYPE_RE = re.compile(r"^\s*([A-Za-z])(\d+)~(\d+)\s*$")


@dataclass(frozen=True)
class AffineType:
    """An affine type; ``rank`` is the printed subscript."""

    family: str
    rank: int
    twist: int

    def __post_init__(self) -> None:
        if not _is_supported(self.family, self.rank, self.twist):
            raise UnsupportedType(f"unsupported affine type {self.family}{self.rank}~{self.twist}")

    def __str__(self) -> str:
        return format_type(self)

    @property
    def label(self) -> str:
        """Short tag such as ``'A1'``, ``'B1'``, ``'A2odd'``, ``'D2'``, ``'D3'``."""
        if self.family == "A" and self.twist == 2:
            return "A2odd" if self.rank % 2 else "A2even"
        return f"{self.family}{self.twist}"

    @property
    def n(self) -> int:
        """The integer ``n`` of the usual naming of the family.

        ``A_{n-1}^(1)``, ``B_n^(1)``, ``C_n^(1)``, ``D_n^(1)``,
        ``A_{2n-1}^(2)``, ``A_{2n}^(2)``, ``D_{n+1}^(2)``; 2 for ``G_2^(1)``
        and 4 for ``D_4^(3)``.
        """
        f, r, t = self.family, self.rank, self.twist
        if t == 1:
            return r + 1 if f == "A" else r
        if f == "A":
            return (r + 1) // 2
        if f == "D" and t == 2:
            return r - 1
        return r

    @property
    def nodes(self) -> tuple[int, ...]:
        """The classical node set ``I_0``."""
        label = self.label
        if label == "A1":
            return tuple(range(1, self.rank + 1))
        if label in ("G1", "D3"):
            return (1, 2)
        return tuple(range(1, self.n + 1))

    @property
    def is_twisted(self) -> bool:
        return self.twist > 1

    @property
    def extension_required(self) -> bool:
        """Fundamental denominators are not available without extension data."""
        return self.label == "A2even"


def _is_supported(family: str, rank: int, twist: int) -> bool:
    if twist == 1:
        return (
            (family == "A" and rank >= 1)
            or (family in "BC" and rank >= 2)
            or (family == "D" and rank >= 4)
            or (family == "G" and rank == 2)
        )
    if twist == 2:
        return (family == "A" and rank >= 2) or (family == "D" and rank >= 3)
    if twist == 3:
        return family == "D" and rank == 4
    return False


def parse_type(spec: str) -> AffineType:
    m = _TYPE_RE.match(spec)
    if not m:
        raise MalformedSpec(f"type must look like 'A3~1', got {spec!r}")
    family = m.group(1).upper()
    if family not in "ABCDG":
        raise UnsupportedType(f"family {family} is not supported")
    return AffineType(family, int(m.group(2)), int(m.group(3)))


def format_type(t: AffineType) -> str:
    return f"{t.family}{t.rank}~{t.twist}"


@dataclass(frozen=True)
class CartanData:
    """Constants of one affine type, indexed by the classical nodes."""

    type: AffineType
    nodes: tuple[int, ...]
    cartan: np.ndarray = field(compare=False)
    d: dict[int, int]
    qnode: dict[int, QMonomial]
    qcheck: dict[int, QMonomial]
    pstar: QMonomial
    istar: dict[int, int]
    m: dict[int, int]
    gamma: int
    writes_z_for_z_power: bool

    def a(self, i: int, j: int) -> int:
        """Cartan entry ``a_{ij}``."""
        idx = {v: k for k, v in enumerate(self.nodes)}
        return int(self.cartan[idx[i], idx[j]])

    def neighbours(self, i: int) -> list[int]:
        return [j for j in self.nodes if j != i and self.a(i, j) != 0]

    @cached_property
    def symmetrized(self) -> np.ndarray:
        """``D A`` with ``D = diag(d_i)``."""
        return np.diag([self.d[i] for i in self.nodes]) @ self.cartan

    def to_json(self) -> dict:
        return {
            "type": format_type(self.type),
            "nodes": list(self.nodes),
            "cartan": self.cartan.tolist(),
            "d": [self.d[i] for i in self.nodes],
            "qnode": [self.qnode[i].to_json() for i in self.nodes],
            "qcheck": [self.qcheck[i].to_json() for i in self.nodes],
            "pstar": self.pstar.to_json(),
            "istar": [self.istar[i] for i in self.nodes],
            "m": [self.m[i] for i in self.nodes],
            "gamma": self.gamma,
        }


def _cartan_matrix(kind: str, r: int) -> np.ndarray:
    """Finite Cartan matrix, ``a_ij = <h_i, alpha_j>``, nodes ``1..r``.

    ``kind`` is ``A``, ``B`` (node ``r`` short), ``C`` (node ``r`` long),
    ``D``, ``G`` (node 1 long) or ``G'`` (node 2 long).
    """
    a = 2 * np.eye(r, dtype=int)
    if r == 1:
        return a
    if kind in "ABCD":
        for i in range(r - 1):
            a[i, i + 1] = a[i + 1, i] = -1
    if kind == "B":
        a[r - 1, r - 2] = -2
    elif kind == "C":
        a[r - 2, r - 1] = -2
    elif kind == "D":
        a[r - 2, r - 1] = a[r - 1, r - 2] = 0
        a[r - 3, r - 1] = a[r - 1, r - 3] = -1
    elif kind == "G":
        a[0, 1], a[1, 0] = -1, -3
    elif kind == "G'":
        a[0, 1], a[1, 0] = -3, -1
    return a


@lru_cache(maxsize=None)
def cartan_data(t: AffineType) -> CartanData:
    label, n = t.label, t.n
    nodes = t.nodes
    r = len(nodes)
    ones = {i: 1 for i in nodes}
    istar = {i: i for i in nodes}
    gamma = 1
    m = dict(ones)
    if label == "A1":
        cart = _cartan_matrix("A", r)
        d = dict(ones)
        qnode = {i: q(1) for i in nodes}
        istar = {i: n - i for i in nodes}
        pstar = negq(n)
    elif label == "B1":
        cart = _cartan_matrix("B", r)
        d = {i: (1 if i == n else 2) for i in nodes}
        qnode = {i: q(Fraction(d[i], 2)) for i in nodes}
        pstar = -negq(2 * n - 1)
        gamma = 2
    elif label == "C1":
        cart = _cartan_matrix("C", r)
        d = {i: (2 if i == n else 1) for i in nodes}
        qnode = {i: q(Fraction(d[i], 2)) for i in nodes}
        pstar = negqs(2 * n + 2)
        gamma = 2
    elif label == "D1":
        cart = _cartan_matrix("D", r)
        d = dict(ones)
        qnode = {i: q(1) for i in nodes}
        if n % 2:
            istar[n - 1], istar[n] = n, n - 1
        pstar = negq(2 * n - 2)
    elif label == "G1":
        cart = _cartan_matrix("G", 2)
        d = {1: 3, 2: 1}
        qnode = {1: q(1), 2: qt(1)}
        pstar = qt(12)
        gamma = 3
    elif label == "A2odd":
        cart = _cartan_matrix("C", r)
        d = {i: (2 if i == n else 1) for i in nodes}
        qnode = {i: q(d[i]) for i in nodes}
        m = dict(d)
        pstar = -q(2 * n)
    elif label == "A2even":
        cart = _cartan_matrix("B", r)
        d = {i: (1 if i == n else 2) for i in nodes}
        qnode = {i: q(Fraction(d[i], 2)) for i in nodes}
        pstar = -q(2 * n + 1)
        gamma = 2
    elif label == "D2":
        cart = _cartan_matrix("B", r)
        d = {i: (1 if i == n else 2) for i in nodes}
        qnode = {i: q(d[i]) for i in nodes}
        m = dict(d)
        pstar = -QMonomial(12 * n, 2 * n)
    elif label == "D3":
        cart = _cartan_matrix("G'", 2)
        d = {1: 1, 2: 3}
        qnode = {1: q(1), 2: q(3)}
        m = dict(d)
        pstar = q(6)
        gamma = 3
    else:  # pragma: no cover - guarded by AffineType
        raise UnsupportedType(str(t))
    qcheck = dict(qnode)
    if label == "A2even":
        qcheck[n] = q(1)
    return CartanData(
        type=t,
        nodes=nodes,
        cartan=cart,
        d=d,
        qnode=qnode,
        qcheck=qcheck,
        pstar=pstar,
        istar=istar,
        m=m,
        gamma=gamma,
        writes_z_for_z_power=t.is_twisted,
    )
