"""AR quivers and folded AR quivers with coordinates.

For an untwisted affine type the positive roots of the associated simply-laced
type (``A_n``, ``A_{2n-1}``, ``D_{n+1}``, ``D_n``, ``D_4``) are placed on a grid
``(i, p)`` by the Coxeter (or twisted Coxeter) element ``tau = s_1 ... s_r``
composed with the diagram automorphism ``sigma``.  The Hasse quiver of the
convex order ``<_[Q]`` is read off from the coordinates.

Row ``i`` carries the fundamental module ``V(i)`` in package labels.  For
``G_2^(1)`` the arrow spacing uses ``d = (1, 3)`` by rows, which only enters
through ``min(d_1, d_2) = 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import networkx as nx
import numpy as np

from .affine_data import AffineType, cartan_data, format_type
from .errors import EnumerationCapExceeded, MalformedSpec, NotASink, UnsupportedType
from .scalar import SIGN, negq, negqs, negqt, qs
from .commuting import SWDatum
from .tsystem import KRLabel

__all__ = [
    "Root",
    "RootSystem",
    "root_system",
    "CoordQuiver",
    "build_gamma",
    "reflect",
    "convex_order",
    "is_convex",
    "DEFAULT_MAX_WORDS",
    "class_words",
    "word_positions",
    "prec_b",
    "minimal_pairs",
    "pair_distance",
    "DoreyTriple",
    "dorey_triples",
    "module_at",
    "schur_weyl_datum",
]

Root = tuple[int, ...]
DEFAULT_MAX_WORDS = 500_000


# ---------------------------------------------------------------------------
# simply-laced root systems


@dataclass(frozen=True)
class RootSystem:
    """Simply-laced root system; roots are coefficient vectors in simple roots."""

    kind: str
    rank: int
    cartan: np.ndarray = field(compare=False)

    def simple(self, i: int) -> Root:
        return tuple(int(j == i - 1) for j in range(self.rank))

    def pairing(self, a: Root, b: Root) -> int:
        return int(np.asarray(a) @ self.cartan @ np.asarray(b))

    def reflect(self, i: int, beta: Root) -> Root:
        c = self.pairing(self.simple(i), beta)
        return tuple(b - c * int(j == i - 1) for j, b in enumerate(beta))

    def apply(self, word: tuple[int, ...], beta: Root) -> Root:
        """``s_{w_1} s_{w_2} ... s_{w_l} (beta)``."""
        for i in reversed(word):
            beta = self.reflect(i, beta)
        return beta

    @staticmethod
    def is_positive(beta: Root) -> bool:
        return all(c >= 0 for c in beta) and any(beta)

    @cached_property
    def positive_roots(self) -> tuple[Root, ...]:
        found = {self.simple(i) for i in range(1, self.rank + 1)}
        todo = list(found)
        while todo:
            beta = todo.pop()
            for i in range(1, self.rank + 1):
                gamma = self.reflect(i, beta)
                if self.is_positive(gamma) and gamma not in found:
                    found.add(gamma)
                    todo.append(gamma)
        return tuple(sorted(found, key=lambda r: (sum(r), r)))

    def is_root(self, beta: Root) -> bool:
        return beta in set(self.positive_roots)

    def name(self, beta: Root) -> str:
        """``[a,b]`` in type A, ``<a,+-b>`` (as ``eps_a +- eps_b``) in type D."""
        if self.kind == "A":
            idx = [j + 1 for j, c in enumerate(beta) if c]
            a, b = idx[0], idx[-1]
            return f"[{a}]" if a == b else f"[{a},{b}]"
        eps = self._eps(beta)
        nz = [(j + 1, c) for j, c in enumerate(eps) if c]
        (a, _), (b, cb) = nz
        return f"<{a},{b}>" if cb > 0 else f"<{a},-{b}>"

    def _eps(self, beta: Root) -> list[int]:
        n = self.rank
        eps = [0] * n
        for j, c in enumerate(beta[: n - 1]):
            eps[j] += c
            eps[j + 1] -= c
        eps[n - 2] += beta[n - 1]
        eps[n - 1] += beta[n - 1]
        return eps

    def parse(self, text: str) -> Root:
        text = text.strip()
        for beta in self.positive_roots:
            if self.name(beta) == text.replace(" ", ""):
                return beta
        raise MalformedSpec(f"not a positive root of {self.kind}{self.rank}: {text!r}")


def root_system(kind: str, rank: int) -> RootSystem:
    if kind not in ("A", "D") or rank < 1 or (kind == "D" and rank < 3):
        raise UnsupportedType(f"root system {kind}{rank} is not handled")
    a = 2 * np.eye(rank, dtype=int)
    for i in range(rank - 1):
        a[i, i + 1] = a[i + 1, i] = -1
    if kind == "D":
        a[rank - 2, rank - 1] = a[rank - 1, rank - 2] = 0
        a[rank - 3, rank - 1] = a[rank - 1, rank - 3] = -1
    return RootSystem(kind, rank, a)


# ---------------------------------------------------------------------------
# coordinate quivers


@dataclass(frozen=True)
class _Fold:
    system: RootSystem
    sigma: dict[int, int]
    d: dict[int, int]
    adjacency: frozenset[tuple[int, int]]
    star: dict[int, int]
    coxeter: int


def _fold(t: AffineType) -> _Fold:
    label = t.label
    if t.twist != 1 or label not in ("A1", "B1", "C1", "D1", "G1"):
        raise UnsupportedType(f"no AR-quiver construction for {t}")
    r = len(t.nodes)
    chain = frozenset((i, i + 1) for i in range(1, r))
    star = {i: i for i in range(1, r + 1)}
    if label == "A1":
        g = root_system("A", r)
        sigma = {i: i for i in range(1, r + 1)}
        d = {i: 1 for i in range(1, r + 1)}
        star = {i: r + 1 - i for i in range(1, r + 1)}
        coxeter = r + 1
        adjacency = chain
    elif label == "B1":
        g = root_system("A", 2 * r - 1)
        sigma = {i: 2 * r - i for i in range(1, 2 * r)}
        d = {i: 2 for i in range(1, r)} | {r: 1}
        coxeter = 2 * r - 1
        adjacency = chain
    elif label == "C1":
        g = root_system("D", r + 1)
        sigma = {i: i for i in range(1, r)} | {r: r + 1, r + 1: r}
        d = {i: 1 for i in range(1, r)} | {r: 2}
        coxeter = r + 1
        adjacency = chain
    elif label == "D1":
        g = root_system("D", r)
        sigma = {i: i for i in range(1, r + 1)}
        d = {i: 1 for i in range(1, r + 1)}
        if r % 2:
            star[r - 1], star[r] = r, r - 1
        coxeter = 2 * r - 2
        adjacency = frozenset((i, i + 1) for i in range(1, r - 1)) | {(r - 2, r)}
    else:
        g = root_system("D", 4)
        sigma = {1: 3, 3: 4, 4: 1, 2: 2}
        d = {1: 1, 2: 3}
        coxeter = 4
        adjacency = frozenset({(1, 2)})
    return _Fold(g, sigma, d, adjacency, star, coxeter)


def _adjacent(fold: _Fold, i: int, j: int) -> bool:
    return (min(i, j), max(i, j)) in fold.adjacency


@dataclass(frozen=True)
class CoordQuiver:
    """Positive roots placed at coordinates ``(i, p)``."""

    type: AffineType
    coords: tuple[tuple[Root, tuple[int, int]], ...]
    xi: tuple[int, ...]

    @cached_property
    def fold(self) -> _Fold:
        return _fold(self.type)

    @property
    def system(self) -> RootSystem:
        return self.fold.system

    @cached_property
    def position(self) -> dict[Root, tuple[int, int]]:
        return dict(self.coords)

    @cached_property
    def root_at(self) -> dict[tuple[int, int], Root]:
        return {c: b for b, c in self.coords}

    @property
    def roots(self) -> tuple[Root, ...]:
        return tuple(b for b, _ in self.coords)

    @cached_property
    def arrows(self) -> tuple[tuple[Root, Root], ...]:
        d = self.fold.d
        out = []
        for beta, (i, p) in self.coords:
            for gamma, (j, q) in self.coords:
                if _adjacent(self.fold, i, j) and q - p == min(d[i], d[j]):
                    out.append((beta, gamma))
        return tuple(out)

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.roots)
        g.add_edges_from(self.arrows)
        return g

    def sinks(self) -> list[Root]:
        g = self.graph()
        return [b for b in self.roots if g.out_degree(b) == 0]

    def name(self, beta: Root) -> str:
        return self.system.name(beta)

    def at(self, name: str) -> tuple[int, int]:
        return self.position[self.system.parse(name)]

    def to_json(self) -> dict:
        return {
            "type": format_type(self.type),
            "xi": list(self.xi),
            "vertices": [{"root": self.name(b), "row": i, "p": p} for b, (i, p) in self.coords],
            "arrows": [[self.name(a), self.name(b)] for a, b in self.arrows],
        }

    def to_dot(self) -> str:
        lines = [f'digraph "{format_type(self.type)}" {{', "  rankdir=LR;"]
        for b, (i, p) in self.coords:
            lines.append(f'  "{self.name(b)}" [pos="{p},{-i}!"];')
        for a, b in self.arrows:
            lines.append(f'  "{self.name(a)}" -> "{self.name(b)}";')
        lines.append("}")
        return "\n".join(lines)


def build_gamma(t: AffineType, xi0: int) -> CoordQuiver:
    """The quiver attached to ``tau = s_1 ... s_r`` and ``sigma`` with ``xi_1 = xi0``."""
    fold = _fold(t)
    g = fold.system
    r = len(fold.d)
    xi = {1: xi0}
    for j in range(2, r + 1):
        i = next(i for i in range(1, j) if _adjacent(fold, i, j))
        xi[j] = xi[i] - min(fold.d[i], fold.d[j])
    tau = tuple(range(1, r + 1))

    def step(beta: Root) -> Root:
        permuted = [0] * g.rank
        for i, c in enumerate(beta, 1):
            permuted[fold.sigma[i] - 1] += c
        return g.apply(tau, tuple(permuted))

    coords = []
    for k in range(1, r + 1):
        beta = g.apply(tau[: k - 1], g.simple(k))
        p = xi[k]
        while g.is_positive(beta):
            coords.append((beta, (k, p)))
            beta = step(beta)
            p -= 2
    if len(coords) != len(g.positive_roots) or len({b for b, _ in coords}) != len(coords):
        raise AssertionError(f"coordinate map for {t} is not a bijection onto positive roots")
    return CoordQuiver(t, tuple(coords), tuple(xi[i] for i in range(1, r + 1)))


def reflect(gamma: CoordQuiver, i: int) -> CoordQuiver:
    """Reflection functor at the sink ``alpha_i``."""
    g = gamma.system
    alpha = g.simple(i)
    if alpha not in gamma.position:
        raise NotASink(f"alpha_{i} is not a root of {g.kind}{g.rank}")
    if alpha not in gamma.sinks():
        raise NotASink(f"alpha_{i} is not a sink")
    fold = gamma.fold
    row, p = gamma.position[alpha]
    shift = max(fold.d.values()) * fold.coxeter
    coords = []
    for beta, c in gamma.coords:
        if beta == alpha:
            coords.append((alpha, (fold.star[row], p - shift)))
        else:
            coords.append((g.reflect(i, beta), c))
    return CoordQuiver(gamma.type, tuple(coords), gamma.xi)


# ---------------------------------------------------------------------------
# convex orders and commutation classes


def convex_order(gamma: CoordQuiver) -> set[tuple[Root, Root]]:
    """Strict order: ``(a, b)`` present iff ``a < b``, i.e. a path from ``b`` to ``a``."""
    g = gamma.graph()
    return {(a, b) for b in g for a in nx.descendants(g, b)}


def is_convex(gamma: CoordQuiver) -> bool:
    """Every ``gamma = alpha + beta`` lies strictly between ``alpha`` and ``beta``."""
    less = convex_order(gamma)
    roots = set(gamma.roots)
    for a, b in itertools.combinations(gamma.roots, 2):
        c = tuple(x + y for x, y in zip(a, b))
        if c in roots:
            if not ((a, c) in less and (c, b) in less or (b, c) in less and (c, a) in less):
                return False
    return True


def class_words(gamma: CoordQuiver, cap: int = DEFAULT_MAX_WORDS) -> Iterator[tuple[int, ...]]:
    """Reduced words of ``w_0`` in the commutation class, one per linear extension."""
    g = gamma.system
    graph = gamma.graph()
    below = {b: set(graph.successors(b)) for b in graph}
    roots = list(gamma.roots)
    count = 0

    def extend(chosen: list[Root], word: list[int], placed: set[Root]):
        nonlocal count
        if len(chosen) == len(roots):
            count += 1
            if count > cap:
                raise EnumerationCapExceeded(f"more than {cap} words in the class")
            yield tuple(word)
            return
        for beta in roots:
            if beta in placed or not below[beta] <= placed:
                continue
            simple = g.apply(tuple(reversed(word)), beta)
            if sum(simple) != 1:
                raise AssertionError("linear extension does not give a reduced word")
            word.append(simple.index(1) + 1)
            placed.add(beta)
            chosen.append(beta)
            yield from extend(chosen, word, placed)
            chosen.pop()
            placed.discard(beta)
            word.pop()

    yield from extend([], [], set())


def word_positions(gamma: CoordQuiver, cap: int = DEFAULT_MAX_WORDS) -> np.ndarray:
    """Matrix ``P[w, r]``: position of root ``gamma.roots[r]`` in the ``w``-th word."""
    g = gamma.system
    index = {b: j for j, b in enumerate(gamma.roots)}
    rows = []
    for word in class_words(gamma, cap):
        pos = np.empty(len(index), dtype=np.int16)
        for k in range(len(word)):
            beta = g.apply(word[:k], g.simple(word[k]))
            pos[index[beta]] = k
        rows.append(pos)
    return np.array(rows)


def _bilex_less_all(P: np.ndarray, m: np.ndarray, mm: np.ndarray) -> bool:
    """``m <^b mm`` for every word (rows of ``P``)."""
    diff = np.flatnonzero(m != mm)
    if diff.size == 0:
        return False
    sub = P[:, diff]
    first = diff[np.argmin(sub, axis=1)]
    last = diff[np.argmax(sub, axis=1)]
    return bool((m[first] < mm[first]).all() and (m[last] < mm[last]).all())


def prec_b(gamma: CoordQuiver, m: dict[Root, int], mm: dict[Root, int], P: np.ndarray | None = None) -> bool:
    """The bi-lexicographic order over the whole commutation class."""
    if P is None:
        P = word_positions(gamma)
    roots = gamma.roots
    wt = lambda s: tuple(sum(c * b[j] for b, c in s.items()) for j in range(len(roots[0])))
    if wt(m) != wt(mm):
        return False
    a = np.array([m.get(b, 0) for b in roots])
    b = np.array([mm.get(b, 0) for b in roots])
    return _bilex_less_all(P, a, b)


def _pairs_of(gamma: CoordQuiver, target: Root) -> list[tuple[Root, Root]]:
    less = convex_order(gamma)
    roots = set(gamma.roots)
    out = []
    for a in gamma.roots:
        b = tuple(x - y for x, y in zip(target, a))
        if b in roots and (a, b) in less:
            out.append((a, b))
    return out


def minimal_pairs(gamma: CoordQuiver, target: Root, P: np.ndarray | None = None) -> list[tuple[Root, Root]]:
    """Pairs ``(alpha, beta)``, ``alpha < beta``, summing to ``target`` and minimal under ``<^b``."""
    if target not in gamma.position:
        raise MalformedSpec("target is not a positive root")
    if sum(target) == 1:
        return []
    if P is None:
        P = word_positions(gamma)
    pairs = _pairs_of(gamma, target)
    seqs = {p: {p[0]: 1, p[1]: 1} for p in pairs}
    return [p for p in pairs if not any(prec_b(gamma, seqs[o], seqs[p], P) for o in pairs if o != p)]


def pair_distance(
    gamma: CoordQuiver, target: Root, pair: tuple[Root, Root], P: np.ndarray | None = None
) -> tuple[int, list[tuple[Root, Root]]]:
    """Length of the longest ``<^b`` chain from ``target`` to ``pair`` through pairs, and the pairs below."""
    if P is None:
        P = word_positions(gamma)
    pairs = _pairs_of(gamma, target)
    seqs = {p: {p[0]: 1, p[1]: 1} for p in pairs}
    below = {p: [o for o in pairs if o != p and prec_b(gamma, seqs[o], seqs[p], P)] for p in pairs}
    memo: dict[tuple[Root, Root], int] = {}

    def depth(p):
        if p not in memo:
            memo[p] = 1 + max((depth(o) for o in below[p]), default=0)
        return memo[p]

    return depth(pair), below[pair]


# ---------------------------------------------------------------------------
# modules and Dorey triples


def module_at(t: AffineType, row: int, p: int) -> KRLabel:
    """The fundamental module attached to the coordinate ``(row, p)``."""
    label, n = t.label, t.n
    if label in ("A1", "D1"):
        z = negq(p)
    elif label == "B1":
        z = SIGN ** ((n + row) % 2) * qs(p)
    elif label == "C1":
        z = negqs(p)
    elif label == "G1":
        z = negqt(p)
    else:
        raise UnsupportedType(f"no module assignment for {t}")
    return KRLabel("V", row, 1, z)


@dataclass(frozen=True)
class DoreyTriple:
    """``V(beta) (x) V(alpha) ->> head`` for a pair summing to ``gamma``."""

    alpha: Root
    beta: Root
    gamma: Root
    distance: int
    modules: tuple[KRLabel, KRLabel]
    head: KRLabel | None
    tag: str

    def to_json(self, quiver: CoordQuiver) -> dict:
        return {
            "alpha": quiver.name(self.alpha),
            "beta": quiver.name(self.beta),
            "gamma": quiver.name(self.gamma),
            "distance": self.distance,
            "modules": [str(x) for x in self.modules],
            "head": str(self.head) if self.head else None,
            "tag": self.tag,
        }


def _kr_head(t: AffineType, a: KRLabel, b: KRLabel) -> KRLabel | None:
    """``V(i)_x`` and ``V(i)_{x(-q_i)^2}`` combine to ``V(i^2)_{x(-q_i)}``."""
    if a.node != b.node:
        return None
    step = -cartan_data(t).qnode[a.node]
    for x, y in ((a, b), (b, a)):
        if y.spectral == x.spectral * step**2:
            return KRLabel("V", a.node, 2, x.spectral * step)
    return None


def dorey_triples(gamma: CoordQuiver, cap: int = DEFAULT_MAX_WORDS) -> list[DoreyTriple]:
    """Minimal pairs (tag ``fundamental``) and distance-2 pairs with a KR head (tag ``kr-head``)."""
    t = gamma.type
    P = word_positions(gamma, cap)
    mod = {b: module_at(t, *c) for b, c in gamma.coords}
    out = []
    for target in gamma.roots:
        if sum(target) == 1:
            continue
        for pair in _pairs_of(gamma, target):
            dist, below = pair_distance(gamma, target, pair, P)
            a, b = pair
            if dist == 1:
                out.append(DoreyTriple(a, b, target, 1, (mod[b], mod[a]), mod[target], "fundamental"))
            elif dist == 2 and len(below) == 1:
                m = below[0]
                head = _kr_head(t, mod[m[0]], mod[m[1]])
                if head is not None:
                    out.append(DoreyTriple(a, b, target, 2, (mod[b], mod[a]), head, "kr-head"))
    return out


def schur_weyl_datum(gamma: CoordQuiver) -> SWDatum:
    """Simple roots of the simply-laced type with their modules ``V_Q(alpha_i)``."""
    g = gamma.system
    labels, nodes, spectral = [], [], []
    for i in range(1, g.rank + 1):
        alpha = g.simple(i)
        mod = module_at(gamma.type, *gamma.position[alpha])
        labels.append(g.name(alpha))
        nodes.append(mod.node)
        spectral.append(mod.spectral)
    return SWDatum(tuple(labels), tuple(nodes), tuple(spectral))
