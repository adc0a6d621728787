"""Command-line front end.

Every subcommand prints deterministic text, or JSON with ``--json``.  Exit
status is 0 on success, 2 on a domain error and 1 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Callable, Sequence

from .affine_data import AffineType, format_type, parse_type
from .arquiver import DEFAULT_MAX_WORDS, build_gamma, dorey_triples, reflect, schur_weyl_datum
from .commuting import SWDatum, parse_module_list, schur_weyl_quiver, tensor_simple, verify_commuting_family
from .denominator import ExtensionTable, RootMultiset, kr_denominator, load_extensions
from .dorey import all_instances, higher_dorey_instances, verify_dominant_multiplicity
from .errors import KRError, MalformedSpec, UnsupportedType
from .qchar import DEFAULT_MAX_TABLEAUX, QCharacter, kr_qcharacter_typeA, parse_tableau, tableau_qchar
from .scalar import ONE, QMonomial, format_scalar, parse_scalar
from .tsystem import tsystem_identities, verify_tsystem_qchar, weight_defect
from .ucoef import LinearFactorProduct, Module, PochhammerProduct, ak_ratio_check, universal_coefficient

__all__ = ["main", "run", "build_parser"]

CONJECTURE_BANNER = "CONJECTURE: unverified form, not a theorem of this package"

_KR_RE = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*$")
_MOD_RE = re.compile(r"^\s*(\d+)\s*\^\s*(\d+)\s*(?:@\s*(.+?))?\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")

    def exit(self, status: int = 0, message: str | None = None) -> None:  # type: ignore[override]
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)


# ---------------------------------------------------------------------------
# argument helpers


def _kr(text: str) -> tuple[int, int]:
    m = _KR_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected k^m, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _module(text: str) -> Module:
    m = _MOD_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected k^m[@scalar], got {text!r}")
    a = parse_scalar(m.group(3)) if m.group(3) else ONE
    return Module(int(m.group(1)), int(m.group(2)), a)


def _scalar(text: str) -> QMonomial:
    try:
        return parse_scalar(text)
    except MalformedSpec as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _extensions(args: argparse.Namespace) -> ExtensionTable | None:
    return load_extensions(args.fundamentals) if args.fundamentals else None


def _emit(args: argparse.Namespace, payload: object, text: Callable[[], str]) -> str:
    if args.json:
        return json.dumps(payload, separators=(",", ":"))
    return text()


def _factor(root: QMonomial, mult: int = 1) -> str:
    body = f"(z + {format_scalar(-root)})" if root.zeta == 12 else f"(z - {format_scalar(root)})"
    return body + (f"^{mult}" if mult != 1 else "")


def _linear(p: LinearFactorProduct) -> str:
    return "".join(_factor(r, v) for r, v in p.factors) or "1"


def _pochhammer(p: PochhammerProduct) -> str:
    base = format_scalar(p.base)
    parts = [f"({format_scalar(a)} z; {base})" + (f"^{v}" if v != 1 else "") for a, v in p.blocks]
    return " ".join(parts) or "1"


def _roots_text(r: RootMultiset) -> str:
    return "".join(_factor(x, v) for x, v in r.items()) or "1"


# ---------------------------------------------------------------------------
# subcommands


def _type_arg(text: str, allow_conjecture: bool = False) -> AffineType | None:
    if text.strip().upper().startswith("E"):
        if not allow_conjecture:
            raise UnsupportedType(f"{text}: E-type denominators are conjectural; pass --allow-conjecture")
        return None
    return parse_type(text)


def cmd_denom(args: argparse.Namespace) -> str:
    if len(args.kr) != 2:
        raise UsageError("denom needs exactly two --kr k^m arguments")
    (k, m), (l, p) = args.kr
    t = _type_arg(args.type, args.allow_conjecture)
    if t is None:
        formula = f"d_{{{k}^{m},{l}^{p}}}(z) = prod_{{s<{min(m, p)}}} d_{{{k},{l}}}((-q)^{{{abs(m - p)}+2s}} z)"
        return _emit(args, {"conjecture": True, "formula": formula}, lambda: f"{CONJECTURE_BANNER}\n{formula}")
    r = kr_denominator(t, k, m, l, p, _extensions(args))
    head = f"d_{{{k}^{m},{l}^{p}}}(z) over {format_type(t)}"
    return _emit(args, r.to_json(), lambda: f"{head} = {_roots_text(r)}")


def cmd_ucoef(args: argparse.Namespace) -> str:
    (l, p), (k, m) = args.kr
    t = parse_type(args.type)
    a = universal_coefficient(t, l, p, k, m)
    return _emit(args, a.to_json(), lambda: f"a_{{{l}^{p},{k}^{m}}}(z) = {_pochhammer(a)}")


def cmd_ak_check(args: argparse.Namespace) -> str:
    t = parse_type(args.type)
    if len(args.factor) != 2:
        raise UsageError("ak-check needs exactly two --factor arguments")
    rep = ak_ratio_check(
        t, (args.factor[0], args.factor[1]), args.target, args.probe, side=args.side, extensions=_extensions(args)
    )

    def text() -> str:
        residual = _pochhammer(rep.residual_blocks)
        return "\n".join(
            [
                f"laurent: {str(rep.is_laurent).lower()}",
                f"finite part: {_linear(rep.finite_part)}",
                f"residual blocks: {residual}",
            ]
        )

    return _emit(args, rep.to_json(), text)


def _qchar_text(chi: QCharacter) -> str:
    return "\n".join(f"{c} * {m}" for m, c in chi.items())


def cmd_qchar(args: argparse.Namespace) -> str:
    t = parse_type(args.type)
    if args.tableau:
        mono = tableau_qchar(t, parse_tableau(args.tableau), args.a)
        return _emit(args, mono.to_json(), lambda: str(mono))
    if t.label != "A1":
        raise UnsupportedType("tableau enumeration is available in type A only; pass --tableau")
    if args.node is None or args.m is None:
        raise UsageError("qchar needs --node and --m (or --tableau)")
    chi = kr_qcharacter_typeA(t.n, args.node, args.m, args.a, args.max_tableaux)
    return _emit(args, chi.to_json(), lambda: _qchar_text(chi))


def cmd_tsys(args: argparse.Namespace) -> str:
    t = parse_type(args.type)
    idents = tsystem_identities(t, args.node, args.level, args.a, args.convention, args.printed)
    rows = []
    for ident in idents:
        row = ident.to_json()
        if args.verify:
            ok, _ = weight_defect(ident)
            row["weight_ok"] = ok
            row["qchar_ok"] = verify_tsystem_qchar(ident, args.max_tableaux) if t.label == "A1" else None
        rows.append(row)

    def text() -> str:
        out = []
        for ident, row in zip(idents, rows):
            out.append(str(ident))
            if args.verify:
                q = row["qchar_ok"]
                out.append(f"weight: {'ok' if row['weight_ok'] else 'FAIL'}, "
                           f"q-character: {'n/a' if q is None else ('ok' if q else 'FAIL')}")
        return "\n".join(out)

    return _emit(args, rows, text)


def cmd_dorey(args: argparse.Namespace) -> str:
    t = parse_type(args.type)
    if not args.higher:
        if args.xi is None:
            raise UsageError("dorey without --higher needs --xi")
        gamma = build_gamma(t, args.xi)
        triples = dorey_triples(gamma, args.max_words)
        payload = [x.to_json(gamma) for x in triples]

        def text() -> str:
            return "\n".join(
                f"{gamma.name(x.alpha)} + {gamma.name(x.beta)} = {gamma.name(x.gamma)}: "
                f"{x.modules[0]} (x) {x.modules[1]} ->> {x.head} [{x.tag}]"
                for x in triples
            )

        return _emit(args, payload, text)
    if args.m is None:
        raise UsageError("dorey --higher needs --m")
    if args.k is None and args.l is None and args.case is None:
        insts = list(all_instances(t, args.m))
    else:
        insts = higher_dorey_instances(t, args.m, args.k, args.l, args.case)
    mults = [verify_dominant_multiplicity(x, args.max_tableaux) if t.label == "A1" else None for x in insts]
    payload = [dict(x.to_json(), multiplicity=mu) for x, mu in zip(insts, mults)]

    def text() -> str:
        return "\n".join(
            f"[{x.case}] {x}" + ("" if mu is None else f"  multiplicity {mu}") for x, mu in zip(insts, mults)
        )

    return _emit(args, payload, text)


def cmd_simple(args: argparse.Namespace) -> str:
    t = parse_type(args.type)
    mods = parse_module_list(Path(args.modules).read_text())
    rep = tensor_simple(t, mods, _extensions(args))

    def text() -> str:
        if rep.simple:
            return f"simple ({len(mods)} modules)"
        a, b, ratio = rep.witness
        return f"not simple: {a[0]}^{a[1]} @ {format_scalar(a[2])} vs {b[0]}^{b[1]} @ {format_scalar(b[2])}, ratio {format_scalar(ratio)}"

    return _emit(args, rep.to_json(), text)


def cmd_hl_check(args: argparse.Namespace) -> str:
    t = parse_type(args.type)
    rep = verify_commuting_family(t, args.depth, args.by, extensions=_extensions(args))
    return _emit(
        args,
        rep.to_json(),
        lambda: f"{len(rep.violations)} violations / {rep.pairs} pairs ({len(rep.modules)} modules)",
    )


def _gamma(args: argparse.Namespace):
    gamma = build_gamma(parse_type(args.type), args.xi)
    for i in args.reflect or []:
        gamma = reflect(gamma, i)
    return gamma


def cmd_ar(args: argparse.Namespace) -> str:
    gamma = _gamma(args)
    if args.dot:
        return gamma.to_dot()

    def text() -> str:
        rows: dict[int, list[tuple[int, str]]] = {}
        for b, (i, p) in gamma.coords:
            rows.setdefault(i, []).append((p, gamma.name(b)))
        return "\n".join(
            f"row {i}: " + "  ".join(f"{name}@{p}" for p, name in sorted(rows[i])) for i in sorted(rows)
        )

    return _emit(args, gamma.to_json(), text)


def cmd_sw_quiver(args: argparse.Namespace) -> str:
    t = parse_type(args.type)
    if args.datum:
        datum = SWDatum.parse(Path(args.datum).read_text())
    elif args.xi is not None:
        datum = schur_weyl_datum(_gamma(args))
    else:
        raise UsageError("sw-quiver needs --datum FILE or --xi N")
    sw = schur_weyl_quiver(t, datum, _extensions(args))

    def text() -> str:
        g = sw.graph()
        edges = sorted(tuple(sorted((a, b))) + (w,) for a, b, w in g.edges(data="weight"))
        lines = [f"vertices: {' '.join(datum.labels)}"]
        lines += [f"{a} -- {b}" + (f" (x{w})" if w != 1 else "") for a, b, w in edges]
        return "\n".join(lines)

    return _emit(args, sw.to_json(), text)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--fundamentals", metavar="FILE", help="extension table: lines 'TYPE k l : root;root'")
    common.add_argument("--max-tableaux", type=int, default=DEFAULT_MAX_TABLEAUX, metavar="N")
    common.add_argument("--max-words", type=int, default=DEFAULT_MAX_WORDS, metavar="N")
    common.add_argument("--allow-conjecture", action="store_true", help="permit watermarked conjectural output")

    parser = _Parser(prog="krdenom", description="Denominators and related data for KR modules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.add_argument("--type", required=True, help="affine type such as B3~1 or D5~2")
        p.set_defaults(func=func)
        return p

    p = add("denom", cmd_denom, "denominator d_{k^m,l^p}(z)")
    p.add_argument("--kr", type=_kr, action="append", required=True, metavar="k^m")

    p = add("ucoef", cmd_ucoef, "universal coefficient a_{l^p,k^m}(z)")
    p.add_argument("--kr", type=_kr, nargs=2, required=True, metavar="l^p k^m")

    p = add("ak-check", cmd_ak_check, "ratio test for a surjection M' (x) M'' ->> M")
    p.add_argument("--factor", type=_module, action="append", required=True, metavar="k^m@a")
    p.add_argument("--target", type=_module, required=True, metavar="k^m@a")
    p.add_argument("--probe", type=_module, metavar="k^m@a")
    p.add_argument("--side", choices=("left", "right"), default="left")

    p = add("qchar", cmd_qchar, "q-character of a KR module (type A) or of one tableau")
    p.add_argument("--node", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--a", type=_scalar, default=ONE, metavar="SCALAR")
    p.add_argument("--tableau", metavar="ROWS", help="rows separated by commas, e.g. '1 1,2 3'")

    p = add("tsys", cmd_tsys, "T-system short exact sequence")
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--a", type=_scalar, default=ONE, metavar="SCALAR")
    p.add_argument("--convention", choices=("W", "V"), default="W")
    p.add_argument("--printed", action="store_true", help="reproduce known misprints verbatim")
    p.add_argument("--verify", action="store_true")

    p = add("dorey", cmd_dorey, "Dorey triples from an AR quiver, or higher Dorey instances")
    p.add_argument("--higher", action="store_true")
    p.add_argument("--xi", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--case")

    p = add("simple", cmd_simple, "tensor-product simplicity")
    p.add_argument("--modules", required=True, metavar="FILE", help="one 'k^m @ scalar' per line")

    p = add("hl-check", cmd_hl_check, "commuting check over a Hernandez-Leclerc window")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--by", choices=("level", "multiplicity"), default="level")

    p = add("ar", cmd_ar, "folded AR quiver coordinates")
    p.add_argument("--xi", type=int, required=True)
    p.add_argument("--reflect", type=_int_list, metavar="i,j,...")
    p.add_argument("--dot", action="store_true", help="Graphviz output")

    p = add("sw-quiver", cmd_sw_quiver, "Schur-Weyl quiver of a datum")
    p.add_argument("--datum", metavar="FILE", help="one 'label node @ scalar' per line")
    p.add_argument("--xi", type=int, help="derive the datum from the AR quiver")
    p.add_argument("--reflect", type=_int_list, metavar="i,j,...")
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = args.func(args)
    except UsageError as exc:
        err.write(f"{exc}\n")
        if not str(exc).startswith("usage:"):
            err.write(parser.format_usage())
        return 1
    except KRError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except (ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    out.write(text + "\n")
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
