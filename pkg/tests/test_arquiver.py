from __future__ import annotations

import itertools
import json
import random

import networkx as nx
import numpy as np
import pytest

from krdenom.affine_data import parse_type
from krdenom.arquiver import (
    build_gamma,
    class_words,
    convex_order,
    dorey_triples,
    is_convex,
    minimal_pairs,
    module_at,
    prec_b,
    reflect,
    root_system,
    schur_weyl_datum,
    word_positions,
)
from krdenom.commuting import pole_order, schur_weyl_quiver
from krdenom.errors import EnumerationCapExceeded, NotASink, UnsupportedType
from krdenom.scalar import negqs, qs
from krdenom.tsystem import KRLabel


def _layout(gamma):
    return {gamma.name(b): c for b, c in gamma.coords}


# ---------------------------------------------------------------- root systems


@pytest.mark.parametrize("kind,rank,count", [("A", 1, 1), ("A", 3, 6), ("A", 5, 15), ("D", 4, 12), ("D", 5, 20)])
def test_positive_root_counts(kind, rank, count):
    assert len(root_system(kind, rank).positive_roots) == count


def test_simple_reflection_permutes_other_roots():
    g = root_system("D", 4)
    pos = set(g.positive_roots)
    for i in range(1, 5):
        alpha = g.simple(i)
        images = {g.reflect(i, b) for b in pos - {alpha}}
        assert images == pos - {alpha}
        assert g.reflect(i, alpha) == tuple(-c for c in alpha)


def test_root_names_round_trip():
    for g in (root_system("A", 4), root_system("D", 5)):
        for b in g.positive_roots:
            assert g.parse(g.name(b)) == b


# ---------------------------------------------------------------- printed quivers

B3_FIG = {
    "[3,5]": (1, 4), "[1,4]": (1, 6), "[2]": (1, 8), "[5]": (1, 10), "[1]": (1, 12),
    "[3,4]": (2, 2), "[2,4]": (2, 4), "[2,5]": (2, 6), "[1,5]": (2, 8), "[1,2]": (2, 10),
    "[3]": (3, 1), "[4]": (3, 3), "[2,3]": (3, 5), "[4,5]": (3, 7), "[1,3]": (3, 9),
}
B3_R1_FIG = {
    "[1]": (1, 2), "[3,5]": (1, 4), "[2,4]": (1, 6), "[1,2]": (1, 8), "[5]": (1, 10),
    "[3,4]": (2, 2), "[1,4]": (2, 4), "[1,5]": (2, 6), "[2,5]": (2, 8), "[2]": (2, 10),
    "[3]": (3, 1), "[4]": (3, 3), "[1,3]": (3, 5), "[4,5]": (3, 7), "[2,3]": (3, 9),
}
C3_FIG = {
    "<1,4>": (1, 3), "<3,-4>": (1, 5), "<2,-3>": (1, 7), "<1,-2>": (1, 9),
    "<2,4>": (2, 2), "<1,3>": (2, 4), "<2,-4>": (2, 6), "<1,-3>": (2, 8),
    "<3,4>": (3, 1), "<2,3>": (3, 3), "<1,2>": (3, 5), "<1,-4>": (3, 7),
}
C3_R1_FIG = {
    "<1,-2>": (1, 1), "<2,4>": (1, 3), "<3,-4>": (1, 5), "<1,-3>": (1, 7),
    "<1,4>": (2, 2), "<2,3>": (2, 4), "<1,-4>": (2, 6), "<2,-3>": (2, 8),
    "<3,4>": (3, 1), "<1,3>": (3, 3), "<1,2>": (3, 5), "<2,-4>": (3, 7),
}
G2_FIG = {
    "<2,4>": (1, 2), "<2,3>": (1, 4), "<1,2>": (1, 6), "<1,3>": (1, 8), "<1,-4>": (1, 10), "<1,-2>": (1, 12),
    "<2,-3>": (2, 1), "<3,4>": (2, 3), "<2,-4>": (2, 5), "<1,4>": (2, 7), "<3,-4>": (2, 9), "<1,-3>": (2, 11),
}
G2_R1_FIG = {
    "<1,-2>": (1, 0), "<1,4>": (1, 2), "<1,3>": (1, 4), "<1,2>": (1, 6), "<2,3>": (1, 8), "<2,-4>": (1, 10),
    "<1,-3>": (2, 1), "<3,4>": (2, 3), "<1,-4>": (2, 5), "<2,4>": (2, 7), "<3,-4>": (2, 9), "<2,-3>": (2, 11),
}


@pytest.mark.parametrize(
    "name,xi,figure",
    [("B3~1", 12, B3_FIG), ("C3~1", 9, C3_FIG), ("G2~1", 12, G2_FIG)],
)
def test_folded_quivers_match_figures(name, xi, figure):
    assert _layout(build_gamma(parse_type(name), xi)) == figure


@pytest.mark.parametrize(
    "name,xi,figure",
    [("B3~1", 12, B3_R1_FIG), ("C3~1", 9, C3_R1_FIG), ("G2~1", 12, G2_R1_FIG)],
)
def test_reflected_quivers_match_figures(name, xi, figure):
    assert _layout(reflect(build_gamma(parse_type(name), xi), 1)) == figure


def test_a5_quiver_rows():
    gamma = build_gamma(parse_type("A5~1"), 5)
    rows = {}
    for b, (i, p) in gamma.coords:
        rows.setdefault(i, []).append((p, gamma.name(b)))
    read = {i: [x for _, x in sorted(v)] for i, v in rows.items()}
    assert read[1] == ["[5]", "[4]", "[3]", "[2]", "[1]"]
    assert read[2] == ["[4,5]", "[3,4]", "[2,3]", "[1,2]"]
    assert read[3] == ["[3,5]", "[2,4]", "[1,3]"]
    assert read[4] == ["[2,5]", "[1,4]"]
    assert read[5] == ["[1,5]"]


def test_d4_quiver_rows():
    gamma = build_gamma(parse_type("D4~1"), 4)
    layout = _layout(gamma)
    assert [layout[x] for x in ("<1,3>", "<2,-3>", "<1,-2>")] == [(1, 0), (1, 2), (1, 4)]
    assert layout["<2,3>"][0] == 2 and layout["<3,-4>"][0] == 3 and layout["<3,4>"][0] == 4


ALL_TYPES = [f"A{r}~1" for r in range(1, 6)] + [f"B{r}~1" for r in range(2, 6)] + \
    [f"C{r}~1" for r in range(2, 6)] + ["D4~1", "D5~1", "G2~1"]


@pytest.mark.parametrize("name", ALL_TYPES)
def test_quiver_invariants_and_convexity(name):
    t = parse_type(name)
    gamma = build_gamma(t, 20)
    assert sorted(gamma.roots) == sorted(gamma.system.positive_roots)
    assert len(set(gamma.position.values())) == len(gamma.roots)
    d = gamma.fold.d
    for a, b in gamma.arrows:
        (i, p), (j, q) = gamma.position[a], gamma.position[b]
        assert q - p == min(d[i], d[j]) and i != j
    assert is_convex(gamma)


@pytest.mark.parametrize("name", ["A4~1", "B3~1", "C3~1", "D4~1", "D5~1", "G2~1", "B4~1"])
def test_reflection_sequences_stay_convex(name):
    rng = random.Random(7)
    gamma = build_gamma(parse_type(name), 20)
    g = gamma.system
    for _ in range(12):
        sinks = [b for b in gamma.sinks() if sum(b) == 1]
        i = rng.choice(sinks).index(1) + 1
        gamma = reflect(gamma, i)
        assert sorted(gamma.roots) == sorted(g.positive_roots)
        assert len(set(gamma.position.values())) == len(gamma.roots)
        assert is_convex(gamma)


def test_reflect_non_sink_rejected():
    gamma = build_gamma(parse_type("B3~1"), 12)
    with pytest.raises(NotASink):
        reflect(gamma, 3)


def test_unsupported_types():
    with pytest.raises(UnsupportedType):
        build_gamma(parse_type("A3~2"), 4)


def test_convex_order_is_strict_partial_order():
    less = convex_order(build_gamma(parse_type("C3~1"), 9))
    assert not any((a, a) in less for a, _ in less)
    for (a, b), (c, d) in itertools.product(less, less):
        if b == c:
            assert (a, d) in less


def test_exports():
    gamma = build_gamma(parse_type("B2~1"), 6)
    data = json.loads(json.dumps(gamma.to_json()))
    assert len(data["vertices"]) == 6
    dot = gamma.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == len(gamma.arrows)


# ---------------------------------------------------------------- commutation classes


def _all_reduced_words_of_w0(g):
    """Brute force: words of length N whose prefixes map each simple root to a new positive root."""
    n = len(g.positive_roots)
    out = []

    def grow(word, seen):
        if len(word) == n:
            out.append(tuple(word))
            return
        for i in range(1, g.rank + 1):
            beta = g.apply(tuple(word), g.simple(i))
            if g.is_positive(beta) and beta not in seen:
                grow(word + [i], seen | {beta})

    grow([], frozenset())
    return out


def _commutation_class(word, g):
    seen = {word}
    todo = [word]
    while todo:
        w = todo.pop()
        for k in range(len(w) - 1):
            a, b = w[k], w[k + 1]
            if g.cartan[a - 1, b - 1] == 0:
                v = w[:k] + (b, a) + w[k + 2:]
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
    return seen


def test_a2_class_single_word():
    words = list(class_words(build_gamma(parse_type("A2~1"), 2)))
    assert words == [(1, 2, 1)]


@pytest.mark.parametrize("name,xi", [("A3~1", 3), ("C2~1", 4), ("B2~1", 6)])
def test_class_words_match_brute_force(name, xi):
    gamma = build_gamma(parse_type(name), xi)
    g = gamma.system
    words = set(class_words(gamma))
    brute = _all_reduced_words_of_w0(g)
    assert words <= set(brute)
    assert words == _commutation_class(next(iter(words)), g)


def test_class_words_lengths_and_cap():
    gamma = build_gamma(parse_type("B3~1"), 12)
    words = list(class_words(gamma))
    assert all(len(w) == 15 for w in words)
    with pytest.raises(EnumerationCapExceeded):
        list(class_words(gamma, cap=10))


# ---------------------------------------------------------------- minimal pairs


def _prec_b_oracle(less, m, mm):
    """Poset form: minimal and maximal elements of the difference support decide."""
    diff = {b for b in set(m) | set(mm) if m.get(b, 0) != mm.get(b, 0)}
    if not diff:
        return False
    mins = [x for x in diff if not any((y, x) in less for y in diff)]
    maxs = [x for x in diff if not any((x, y) in less for y in diff)]
    return all(m.get(x, 0) < mm.get(x, 0) for x in mins + maxs)


@pytest.mark.parametrize("name,xi", [("A4~1", 4), ("B3~1", 12), ("C3~1", 9), ("D4~1", 4)])
def test_prec_b_literal_matches_poset_form(name, xi):
    gamma = build_gamma(parse_type(name), xi)
    P = word_positions(gamma)
    less = convex_order(gamma)
    roots = set(gamma.roots)
    for target in gamma.roots:
        pairs = [(a, tuple(x - y for x, y in zip(target, a))) for a in gamma.roots]
        pairs = [{a: 1, b: 1} for a, b in pairs if b in roots and a < b]
        seqs = [{target: 1}] + pairs
        for m, mm in itertools.product(seqs, seqs):
            assert prec_b(gamma, m, mm, P) == _prec_b_oracle(less, m, mm)


def test_minimal_pair_type_a2():
    gamma = build_gamma(parse_type("A2~1"), 2)
    g = gamma.system
    ((a, b),) = minimal_pairs(gamma, (1, 1))
    assert {a, b} == {g.simple(1), g.simple(2)}
    assert minimal_pairs(gamma, g.simple(1)) == []


def _sequences_of_weight(g, target, at_least=3):
    """Multisets of positive roots summing to target with at least ``at_least`` parts."""
    roots = sorted(g.positive_roots)
    out = []

    def grow(start, rest, chosen):
        if not any(rest):
            if len(chosen) >= at_least:
                seq = {}
                for b in chosen:
                    seq[b] = seq.get(b, 0) + 1
                out.append(seq)
            return
        for k in range(start, len(roots)):
            b = roots[k]
            if all(x <= y for x, y in zip(b, rest)):
                grow(k, tuple(y - x for x, y in zip(b, rest)), chosen + [b])

    grow(0, target, [])
    return out


@pytest.mark.parametrize("name,xi", [("A4~1", 4), ("B3~1", 12), ("D4~1", 4)])
def test_minimal_sequences_are_pairs(name, xi):
    gamma = build_gamma(parse_type(name), xi)
    P = word_positions(gamma)
    for target in gamma.roots:
        if sum(target) == 1:
            continue
        mins = minimal_pairs(gamma, target, P)
        assert mins
        longer = _sequences_of_weight(gamma.system, target)
        for a, b in mins:
            pair = {a: 1, b: 1}
            for m in longer:
                assert not (prec_b(gamma, {target: 1}, m, P) and prec_b(gamma, m, pair, P))


# ---------------------------------------------------------------- Dorey triples


@pytest.mark.parametrize("name,xi", [("A3~1", 3), ("A4~1", 4), ("B2~1", 6), ("B3~1", 12), ("C2~1", 4),
                                     ("C3~1", 9), ("D4~1", 4), ("G2~1", 12)])
def test_dorey_triples_are_denominator_roots(name, xi):
    t = parse_type(name)
    triples = dorey_triples(build_gamma(t, xi))
    assert any(x.tag == "fundamental" for x in triples)
    for x in triples:
        a, b = x.modules
        assert pole_order(t, (a.node, 1, a.spectral), (b.node, 1, b.spectral)) > 0


def test_b3_kr_head_example():
    gamma = build_gamma(parse_type("B3~1"), 12)
    triples = dorey_triples(gamma)
    hit = [x for x in triples if {gamma.name(x.alpha), gamma.name(x.beta)} == {"[1]", "[2,5]"}]
    assert len(hit) == 1
    assert hit[0].tag == "kr-head" and hit[0].distance == 2
    assert hit[0].head == KRLabel("V", 3, 2, -qs(8))


def test_c3_kr_head_example():
    gamma = build_gamma(parse_type("C3~1"), 9)
    hit = [x for x in dorey_triples(gamma) if {gamma.name(x.alpha), gamma.name(x.beta)} == {"<1,-4>", "<3,4>"}]
    assert hit and hit[0].head == KRLabel("V", 1, 2, qs(4))


def test_module_assignment_examples():
    t = parse_type("B3~1")
    assert module_at(t, 3, 9) == KRLabel("V", 3, 1, qs(9))
    assert module_at(t, 2, 8) == KRLabel("V", 2, 1, -qs(8))
    assert module_at(parse_type("C3~1"), 1, 3) == KRLabel("V", 1, 1, negqs(3))


# ---------------------------------------------------------------- Schur-Weyl quivers


def _sw_graph(name, xi):
    t = parse_type(name)
    return schur_weyl_quiver(t, schur_weyl_datum(build_gamma(t, xi)))


def test_schur_weyl_b3_is_a5():
    sw = _sw_graph("B3~1", 12)
    assert nx.is_isomorphic(sw.graph(), nx.path_graph(5))
    assert (sw.cartan == sw.cartan.T).all() and (np.diag(sw.cartan) == 2).all()


def test_schur_weyl_c3_is_d4():
    sw = _sw_graph("C3~1", 9)
    assert nx.is_isomorphic(sw.graph(), nx.star_graph(3))


@pytest.mark.parametrize("name,xi,graph", [
    ("G2~1", 12, nx.star_graph(3)),
    ("B2~1", 6, nx.path_graph(3)),
    ("A4~1", 4, nx.path_graph(4)),
    ("C2~1", 4, nx.path_graph(3)),
])
def test_schur_weyl_other_folds(name, xi, graph):
    assert nx.is_isomorphic(_sw_graph(name, xi).graph(), graph)
