"""Pole orders, tensor simplicity and Hernandez-Leclerc commuting families.

A module is a triple ``(k, m, a)`` standing for ``V(k^m)_a``.  The pole
order of two modules counts the roots of the two KR denominators at the
spectral ratios; a tensor product of KR modules is simple exactly when all
pairwise pole orders vanish.

The HL quiver lives on ``I_0 x Z`` with arrows ``(i,r) -> (j, r + b_ij)``
where ``b_ij = d_i a_ij``.  It has two connected components told apart by a
parity.  After the relabel ``(i,r) -> (i, r + d_i)`` we keep one component,
fixed by an anchor vertex at level 0, and truncate to levels ``r <= 0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .affine_data import AffineType, cartan_data, format_type
from .denominator import ExtensionTable, RootMultiset, fundamental_denominator, kr_denominator
from .errors import MalformedSpec, UnsupportedType
from .scalar import QMonomial, format_scalar, parse_scalar, q
from .tsystem import KRLabel, w_to_v

__all__ = [
    "Module",
    "pole_order",
    "SimplicityReport",
    "tensor_simple",
    "parse_module_list",
    "HLVertex",
    "HLQuiver",
    "hl_multiplicity",
    "hl_anchor",
    "hl_quiver",
    "hl_cluster_modules",
    "CommutingReport",
    "verify_commuting_family",
    "SWDatum",
    "SWQuiver",
    "schur_weyl_quiver",
]

Module = tuple[int, int, QMonomial]


class _DenominatorCache:
    def __init__(self, t: AffineType, extensions: ExtensionTable | None = None):
        self.t = t
        self.extensions = extensions
        self._store: dict[tuple[int, int, int, int], RootMultiset] = {}

    def __call__(self, k: int, m: int, l: int, p: int) -> RootMultiset:
        key = (k, m, l, p)
        if key not in self._store:
            self._store[key] = kr_denominator(self.t, k, m, l, p, self.extensions)
        return self._store[key]


def _pole_order(den: _DenominatorCache, A: Module, B: Module) -> int:
    (k, m, a), (l, p, b) = A, B
    return den(k, m, l, p).count(b / a) + den(l, p, k, m).count(a / b)


def pole_order(t: AffineType, A: Module, B: Module, extensions: ExtensionTable | None = None) -> int:
    """Roots of ``d_{k^m,l^p}`` at ``b/a`` plus roots of ``d_{l^p,k^m}`` at ``a/b``."""
    return _pole_order(_DenominatorCache(t, extensions), A, B)


@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    witness: tuple[Module, Module, QMonomial] | None = None

    def to_json(self) -> dict:
        out: dict = {"simple": self.simple}
        if self.witness is not None:
            A, B, ratio = self.witness
            out["witness"] = {
                "first": _module_json(A),
                "second": _module_json(B),
                "ratio": format_scalar(ratio),
            }
        return out


def _module_json(A: Module) -> dict:
    k, m, a = A
    return {"node": k, "m": m, "spectral": format_scalar(a)}


def tensor_simple(
    t: AffineType, modules: Sequence[Module], extensions: ExtensionTable | None = None
) -> SimplicityReport:
    """Decide simplicity of a tensor product of KR modules.

    The witness of a non-simple product is the first pair with a positive
    pole order, together with the ratio ``b/a``.
    """
    den = _DenominatorCache(t, extensions)
    for x in range(len(modules)):
        for y in range(x + 1, len(modules)):
            A, B = modules[x], modules[y]
            if _pole_order(den, A, B):
                return SimplicityReport(False, (A, B, B[2] / A[2]))
    return SimplicityReport(True)


_MODULE_RE = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*@\s*(.+?)\s*$")


def parse_module_list(text: str) -> list[Module]:
    """Parse one ``k^m @ <scalar>`` per line; blank lines and ``#`` comments are skipped."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _MODULE_RE.match(line)
        if not m:
            raise MalformedSpec(f"line {lineno}: expected 'k^m @ scalar', got {raw!r}")
        out.append((int(m.group(1)), int(m.group(2)), parse_scalar(m.group(3))))
    return out


# ---------------------------------------------------------------------------
# Hernandez-Leclerc quivers


@dataclass(frozen=True, order=True)
class HLVertex:
    node: int
    level: int
    k: int

    def __str__(self) -> str:
        return f"({self.node},{self.level})"


def hl_multiplicity(b_ii: int, r: int) -> int:
    """The unique ``k > 0`` with ``0 < k b_ii - |r| <= b_ii``."""
    return abs(r) // b_ii + 1


def _untwisted(t: AffineType) -> None:
    if t.twist != 1:
        raise UnsupportedType(f"HL quivers are built for untwisted types only, not {t}")


def hl_anchor(t: AffineType) -> tuple[int, int]:
    """Level-0 vertex fixing the component; reproduces the printed examples."""
    _untwisted(t)
    if t.label == "G1" or len(t.nodes) == 1:
        return (1, 0)
    return (2, 0)


def _parities(t: AffineType) -> dict[int, int]:
    """``eps`` with ``r + eps_i`` mod 2 constant on a component, relabelled levels."""
    cd = cartan_data(t)
    b = cd.symmetrized
    idx = {v: j for j, v in enumerate(cd.nodes)}
    eps = {cd.nodes[0]: 0}
    todo = [cd.nodes[0]]
    while todo:
        i = todo.pop()
        for j in cd.neighbours(i):
            if j not in eps:
                eps[j] = (eps[i] - cd.d[i] + int(b[idx[i], idx[j]]) + cd.d[j]) % 2
                todo.append(j)
    return eps


@dataclass(frozen=True)
class HLQuiver:
    type: AffineType
    depth: int
    vertices: tuple[HLVertex, ...]
    arrows: tuple[tuple[HLVertex, HLVertex], ...]

    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.arrows)
        return g

    def vertex(self, node: int, level: int) -> HLVertex:
        for v in self.vertices:
            if (v.node, v.level) == (node, level):
                return v
        raise KeyError((node, level))

    def to_json(self) -> dict:
        return {
            "type": format_type(self.type),
            "depth": self.depth,
            "vertices": [{"node": v.node, "level": v.level, "k": v.k} for v in self.vertices],
            "arrows": [[[s.node, s.level], [e.node, e.level]] for s, e in self.arrows],
        }


def _hl_vertices(t: AffineType, keep) -> list[HLVertex]:
    cd = cartan_data(t)
    eps = _parities(t)
    i0, r0 = hl_anchor(t)
    target = (r0 + eps[i0]) % 2
    out = []
    for i in cd.nodes:
        b_ii = 2 * cd.d[i]
        r = 0 if (eps[i] - target) % 2 == 0 else -1
        while True:
            v = HLVertex(i, r, hl_multiplicity(b_ii, r))
            if not keep(v):
                break
            out.append(v)
            r -= 2
    return sorted(out, key=lambda v: (-v.level, v.node))


def _window(depth: int, by: str):
    if by == "level":
        return lambda v: v.level >= -depth
    if by == "multiplicity":
        return lambda v: v.k <= depth
    raise ValueError(f"unknown window {by!r}")


def hl_quiver(t: AffineType, depth: int, by: str = "level") -> HLQuiver:
    """The truncated HL quiver: levels ``r >= -depth`` (or ``k_{i,r} <= depth`` with ``by="multiplicity"``)."""
    _untwisted(t)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    verts = _hl_vertices(t, _window(depth, by))
    cd = cartan_data(t)
    b = cd.symmetrized
    idx = {v: j for j, v in enumerate(cd.nodes)}
    at = {(v.node, v.level): v for v in verts}
    arrows = []
    for v in verts:
        for j in cd.nodes:
            bij = int(b[idx[v.node], idx[j]])
            if bij == 0:
                continue
            s = v.level - cd.d[v.node] + bij + cd.d[j]
            w = at.get((j, s))
            if w is not None:
                arrows.append((v, w))
    return HLQuiver(t, depth, tuple(verts), tuple(arrows))


def _qd(t: AffineType) -> QMonomial:
    return q(Fraction(1, max(cartan_data(t).d.values())))


def hl_cluster_modules(t: AffineType, depth: int, by: str = "level") -> list[tuple[HLVertex, KRLabel, KRLabel]]:
    """``(vertex, W-label, V-label)`` with ``W^{(i)}_{k_{i,r}, (-q_d)^r}``."""
    nq = -_qd(t)
    out = []
    for v in hl_quiver(t, depth, by).vertices:
        w = KRLabel("W", v.node, v.k, nq**v.level)
        out.append((v, w, w_to_v(t, w)))
    return out


@dataclass(frozen=True)
class CommutingReport:
    type: AffineType
    depth: int
    window: str
    modules: tuple[KRLabel, ...]
    pairs: int
    violations: tuple[tuple[KRLabel, KRLabel, int], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "type": format_type(self.type),
            "depth": self.depth,
            "window": self.window,
            "modules": len(self.modules),
            "pairs": self.pairs,
            "violations": [[str(a), str(b), d] for a, b, d in self.violations],
        }


def verify_commuting_family(
    t: AffineType,
    depth: int,
    by: str = "level",
    modules: Iterable[KRLabel] | None = None,
    extensions: ExtensionTable | None = None,
) -> CommutingReport:
    """All-pairs pole orders over the HL family (or over given V-labels)."""
    if modules is None:
        labels = tuple(v for _, _, v in hl_cluster_modules(t, depth, by))
    else:
        labels = tuple(modules)
    den = _DenominatorCache(t, extensions)
    bad = []
    pairs = 0
    for x in range(len(labels)):
        for y in range(x + 1, len(labels)):
            A, B = labels[x], labels[y]
            pairs += 1
            d = _pole_order(den, (A.node, A.m, A.spectral), (B.node, B.m, B.spectral))
            if d:
                bad.append((A, B, d))
    return CommutingReport(t, depth, by, labels, pairs, tuple(bad))


# ---------------------------------------------------------------------------
# Schur-Weyl quivers


@dataclass(frozen=True)
class SWDatum:
    """Index ``j`` carries ``V(node_j)`` at spectral ``X(j)``."""

    labels: tuple[str, ...]
    nodes: tuple[int, ...]
    spectral: tuple[QMonomial, ...]

    def __post_init__(self) -> None:
        if not len(self.labels) == len(self.nodes) == len(self.spectral):
            raise MalformedSpec("datum fields must have equal length")

    @classmethod
    def parse(cls, text: str) -> "SWDatum":
        """One ``label node @ <scalar>`` per line."""
        labels, nodes, spec = [], [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = re.match(r"^(\S+)\s+(\d+)\s*@\s*(.+)$", line)
            if not m:
                raise MalformedSpec(f"line {lineno}: expected 'label node @ scalar', got {raw!r}")
            labels.append(m.group(1))
            nodes.append(int(m.group(2)))
            spec.append(parse_scalar(m.group(3)))
        return cls(tuple(labels), tuple(nodes), tuple(spec))


@dataclass(frozen=True)
class SWQuiver:
    datum: SWDatum
    arrows: np.ndarray
    cartan: np.ndarray

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.datum.labels)
        n = len(self.datum.labels)
        for i in range(n):
            for j in range(i + 1, n):
                if self.cartan[i, j]:
                    g.add_edge(self.datum.labels[i], self.datum.labels[j], weight=-int(self.cartan[i, j]))
        return g

    def to_json(self) -> dict:
        return {
            "labels": list(self.datum.labels),
            "arrows": self.arrows.tolist(),
            "cartan": self.cartan.tolist(),
        }


def schur_weyl_quiver(t: AffineType, datum: SWDatum, extensions: ExtensionTable | None = None) -> SWQuiver:
    """``d_ij`` = order of ``d_{V_i,V_j}`` at ``X(j)/X(i)``; Cartan ``2`` and ``-d_ij - d_ji``."""
    n = len(datum.labels)
    arrows = np.zeros((n, n), dtype=int)
    cache: dict[tuple[int, int], RootMultiset] = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            key = (datum.nodes[i], datum.nodes[j])
            if key not in cache:
                cache[key] = fundamental_denominator(t, *key, extensions)
            arrows[i, j] = cache[key].count(datum.spectral[j] / datum.spectral[i])
    cartan = -(arrows + arrows.T)
    np.fill_diagonal(cartan, 2)
    return SWQuiver(datum, arrows, cartan)
