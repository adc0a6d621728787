"""Higher Dorey surjections between KR modules.

Each instance records ``V(l^m)_x (x) V(k^m)_y ->> target`` with the spectral
shifts of the corresponding case, and :func:`verify_dominant_multiplicity`
checks in type A that the target's highest monomial occurs exactly once in
the product of the two q-characters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .affine_data import AffineType, cartan_data, format_type
from .errors import CaseConditionViolated, UnsupportedIdentity
from .qchar import DEFAULT_MAX_TABLEAUX, UNIT, YMonomial, kr_highest_monomial, kr_qcharacter_typeA
from .scalar import I, ONE, SIGN, QMonomial, negq, negqt, q, qs
from .tsystem import KRLabel

__all__ = [
    "CASES",
    "DoreyInstance",
    "higher_dorey_instances",
    "all_instances",
    "weight_gap",
    "target_monomial",
    "verify_dominant_multiplicity",
]

CASES = ("general", "B", "C", "D-spin", "D-pair", "G2", "D2", "D43")


@dataclass(frozen=True)
class DoreyInstance:
    type: AffineType
    case: str
    m: int
    factors: tuple[KRLabel, KRLabel]
    target: tuple[KRLabel, ...]
    unique_head: bool

    def to_json(self) -> dict:
        return {
            "type": format_type(self.type),
            "case": self.case,
            "m": self.m,
            "factors": [x.to_json() for x in self.factors],
            "target": [x.to_json() for x in self.target],
            "unique_head": self.unique_head,
        }

    def __str__(self) -> str:
        left = " (x) ".join(str(x) for x in self.factors)
        right = " (x) ".join(str(x) for x in self.target) or "1"
        return f"{left} ->> {right}"


def _V(i: int, m: int, z: QMonomial = ONE) -> KRLabel:
    return KRLabel("V", i, m, z)


def _sign(e: int) -> QMonomial:
    return SIGN ** (e % 2)


def _require(cond: bool, text: str) -> None:
    if not cond:
        raise CaseConditionViolated(text)


def _general(t: AffineType, k: int, l: int, m: int) -> DoreyInstance:
    n, label = t.n, t.label
    _require(1 <= k and 1 <= l, "1 <= k, l")
    K = k + l
    if label == "A1":
        _require(K <= n, "k + l <= n")
    elif label == "D1":
        _require(K < n - 1, "k + l < n - 1")
    else:
        _require(K < n, "k + l < n")
    target = () if label == "A1" and K == n else (_V(K, m),)
    factors = (_V(l, m, negq(-k)), _V(k, m, negq(l)))
    return DoreyInstance(t, "general", m, factors, target, True)


def _d_pair(t: AffineType, k: int, l: int, m: int) -> DoreyInstance:
    n = t.n
    _require(1 <= k and 1 <= l, "1 <= k, l")
    _require(k + l == n - 1, "k + l = n - 1")
    factors = (_V(l, m, negq(-k)), _V(k, m, negq(l)))
    return DoreyInstance(t, "D-pair", m, factors, (_V(n - 1, m), _V(n, m)), False)


def _b_spin(t: AffineType, k: int, m: int) -> DoreyInstance:
    n = t.n
    _require(1 <= k <= n - 1, "1 <= k <= n - 1")
    factors = (
        _V(k, m, _sign(n + m - k) * q(-(n - k))),
        _V(n - k, m, _sign(k + m) * q(k)),
    )
    return DoreyInstance(t, "B", m, factors, (_V(n, 2 * m),), False)


def _c_pair(t: AffineType, k: int, m: int) -> DoreyInstance:
    n = t.n
    _require(1 <= k <= n - 1, "1 <= k <= n - 1")
    factors = (
        _V(n, m, _sign(-n - m + k) * qs(-1 - n + k)),
        _V(n, m, _sign(n + m - k) * qs(n + 1 - k)),
    )
    return DoreyInstance(t, "C", m, factors, (_V(k, 2 * m),), False)


def _d_spin(t: AffineType, l: int, m: int) -> list[DoreyInstance]:
    n = t.n
    _require(1 <= l <= n - 2, "1 <= l <= n - 2")
    out = []
    for n1 in (n - 1, n):
        for n2 in (n - 1, n):
            if (n1 - n2 - (n - l)) % 2 == 0:
                factors = (_V(n1, m, negq(-n + l + 1)), _V(n2, m, negq(n - l - 1)))
                out.append(DoreyInstance(t, "D-spin", m, factors, (_V(l, m),), False))
    return out


def _g2(t: AffineType, m: int) -> DoreyInstance:
    factors = (_V(1, m, negqt(-3)), _V(1, m, negqt(3)))
    return DoreyInstance(t, "G2", m, factors, (_V(2, 3 * m),), True)


def _half_power(j: int) -> QMonomial:
    """``(-q^2)^{j/2}`` with the branch ``(-q^2)^{1/2} = i q``."""
    return (I * q(1)) ** j


def _d2(t: AffineType, k: int, m: int) -> list[DoreyInstance]:
    n = t.n
    _require(1 <= k <= n - 1, "1 <= k <= n - 1")
    c = _half_power(n - k)
    out = []
    for s in (I, -I):
        factors = (_V(n, m, s * c.inverse()), _V(n, m, -(s * c)))
        out.append(DoreyInstance(t, "D2", m, factors, (_V(k, m),), False))
    return out


def _d43(t: AffineType, m: int) -> DoreyInstance:
    factors = (_V(1, m, negq(-1)), _V(1, m, negq(1)))
    return DoreyInstance(t, "D43", m, factors, (_V(2, m),), False)


def higher_dorey_instances(
    t: AffineType,
    m: int,
    k: int | None = None,
    l: int | None = None,
    case: str | None = None,
) -> list[DoreyInstance]:
    """Instances of one case of the higher Dorey rule.

    Without ``case`` the choice follows the arguments: ``k`` and ``l`` give the
    general case (the ``D-pair`` case when ``k + l = n - 1`` in type D), a
    lone ``k`` gives the type-specific case of B, C or ``D_{n+1}^(2)``, and
    ``G_2^(1)``, ``D_4^(3)`` take only ``m``.  ``case="D-spin"`` uses ``l``.
    """
    if m < 1:
        raise CaseConditionViolated("m >= 1")
    label = t.label
    if case is None:
        if label == "G1":
            case = "G2"
        elif label == "D3":
            case = "D43"
        elif l is not None:
            case = "D-pair" if label == "D1" and k is not None and k + l == t.n - 1 else "general"
        else:
            case = {"B1": "B", "C1": "C", "D2": "D2"}.get(label, "general")
    allowed = {
        "general": label in ("A1", "B1", "C1", "D1", "A2odd", "A2even", "D2"),
        "B": label == "B1",
        "C": label == "C1",
        "D-spin": label == "D1",
        "D-pair": label == "D1",
        "G2": label == "G1",
        "D2": label == "D2",
        "D43": label == "D3",
    }
    if case not in allowed:
        raise UnsupportedIdentity(f"unknown case {case!r}")
    if not allowed[case]:
        raise UnsupportedIdentity(f"case {case} does not apply to {t}")
    if case in ("general", "D-pair") and (k is None or l is None):
        raise CaseConditionViolated(f"case {case} needs k and l")
    if case in ("B", "C", "D2") and k is None:
        raise CaseConditionViolated(f"case {case} needs k")
    if case == "D-spin" and l is None:
        raise CaseConditionViolated("case D-spin needs l")
    if case == "general":
        return [_general(t, k, l, m)]
    if case == "D-pair":
        return [_d_pair(t, k, l, m)]
    if case == "B":
        return [_b_spin(t, k, m)]
    if case == "C":
        return [_c_pair(t, k, m)]
    if case == "D-spin":
        return _d_spin(t, l, m)
    if case == "G2":
        return [_g2(t, m)]
    if case == "D2":
        return _d2(t, k, m)
    return [_d43(t, m)]


def all_instances(t: AffineType, m: int) -> Iterator[DoreyInstance]:
    """Every instance of every case that applies to ``t`` at multiplicity ``m``."""
    n, label = t.n, t.label
    if label == "G1":
        yield _g2(t, m)
        return
    if label == "D3":
        yield _d43(t, m)
        return
    bound = {"A1": n, "D1": n - 2}.get(label, n - 1)
    for k in range(1, n):
        for l in range(1, n):
            if k + l <= bound:
                yield _general(t, k, l, m)
    if label == "B1":
        for k in range(1, n):
            yield _b_spin(t, k, m)
    elif label == "C1":
        for k in range(1, n):
            yield _c_pair(t, k, m)
    elif label == "D1":
        for k in range(1, n - 1):
            yield _d_pair(t, k, n - 1 - k, m)
        for l in range(1, n - 1):
            yield from _d_spin(t, l, m)
    elif label == "D2":
        for k in range(1, n):
            yield from _d2(t, k, m)


def weight_gap(inst: DoreyInstance) -> list[float]:
    """Coefficients ``c`` with ``wt(factors) - wt(target) = sum_j c_j alpha_j``."""
    t = inst.type
    cd = cartan_data(t)
    idx = {v: j for j, v in enumerate(cd.nodes)}
    w = np.zeros(len(cd.nodes))
    for x in inst.factors:
        w[idx[x.node]] += x.m
    for x in inst.target:
        w[idx[x.node]] -= x.m
    cart = cd.cartan.astype(float)
    if t.label == "A2even":
        cart = cart.T
    return [float(c) for c in np.linalg.solve(cart, w)]


def target_monomial(inst: DoreyInstance) -> YMonomial:
    out = UNIT
    for x in inst.target:
        out = out * kr_highest_monomial(inst.type, x.node, x.m, x.spectral)
    return out


def verify_dominant_multiplicity(inst: DoreyInstance, cap: int = DEFAULT_MAX_TABLEAUX) -> int:
    """Coefficient of the target's highest monomial in the product of factor characters."""
    t = inst.type
    if t.label != "A1":
        raise UnsupportedIdentity("q-characters are enumerated in type A only")
    (a, b) = inst.factors
    chi = kr_qcharacter_typeA(t.n, a.node, a.m, a.spectral, cap) * kr_qcharacter_typeA(
        t.n, b.node, b.m, b.spectral, cap
    )
    return chi.coefficient(target_monomial(inst))
