"""Command-line driver.

Every subcommand prints exact rationals.  ``--format json`` emits one
self-describing document with the inputs, orders and coefficient tables.
Exit status: 0 on success, 1 when a comparison or check fails, 2 on usage
errors (including malformed specs, whose diagnostic names the field).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import __version__
from .birkhoff import birkhoff_factorize, fundamental_solution, interpolated_j, j_function
from .errors import EqMirrorError, SpecError
from .ifunc import PFOperator, ToricSpec, apply_pf, build_I, euler_equiv, parse_spec
from .localize import REFERENCE_WEIGHTS, check_admissibility, refined_gf
from .mirrormap import GWPotential, closed_form, compare, restricted_potential, to_potential
from .scalars import parse_scalar, render
from .series import QSeries

__all__ = ["PRESETS", "main", "parse_series", "run"]

PRESETS = {
    "xi1": "name: Xi1\n1 1 1 -3\n0 0 nu -nu\np^2\n",
    "xi2": "name: Xi2\n1 1 1 -3\n0 mu nu -2*nu\np*(p+mu)\n",
    "twist1": "name: twist1\n1 1 1 -1 -1 -1\n0 0 mu -mu -mu -mu\np^2\n",
    "twist2": "name: twist2\n1 1 1 -1 -1 -1\n0 0 mu/2 -mu/2 -mu -mu\np^2\n",
    "twist3": "name: twist3\n1 1 1 -1 -1 -1\n0 0 mu/3 -mu/3 -mu -mu\np^2\n",
    "nu-model": "name: nu-model\n1 1 1 -1 -1 -1\n0 0 1 -1 -nu1 -nu2\np^2\n",
}


class UsageError(Exception):
    pass


# -- input helpers --------------------------------------------------------------


def load_spec(text: str, order: int | None = None, bind: str | None = None) -> ToricSpec:
    """A preset name, a file path, or inline text with ``;`` between lines."""
    if text in PRESETS:
        src = PRESETS[text]
    elif os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            src = fh.read()
    else:
        src = text.replace(";", "\n")
    spec = parse_spec(src, order)
    bindings = parse_bindings(bind)
    if bindings:
        unknown = set(bindings) - spec.params
        if unknown:
            raise SpecError("bind", f"parameters {sorted(unknown)} do not occur in the spec")
        spec = spec.substitute(bindings)
    return spec


def parse_bindings(text: str | None) -> dict:
    out: dict = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise UsageError(f"binding {item!r} is not of the form name=value")
        k, v = item.split("=", 1)
        out[k.strip()] = parse_scalar(v)
    return out


def parse_series(text: str, order: int | None = None, var: str = "x") -> QSeries:
    """``"x - 7/4 x^2 + 55/9 x^3"`` (``*`` optional) as a series in ``var``."""
    src = re.sub(r"\+\s*O\(.*\)\s*$", "", text.strip())
    src = re.sub(rf"([0-9)])\s+(?={var}\b)", r"\1*", src)
    powers = [int(e) for e in re.findall(rf"\b{var}\s*\^\s*(\d+)", src)]
    top = max(powers + ([1] if re.search(rf"\b{var}\b", src) else [0]))
    n = order if order is not None else max(top, 1)
    x = QSeries([Fraction(0), Fraction(1)], n, var=var)
    value = parse_scalar(src, {var: x})
    if not isinstance(value, QSeries):
        value = QSeries([value], n, var=var)
    return value


def potential_arg(text: str, order: int) -> GWPotential:
    """``closed:xi1``, ``closed:wk:2``, ``closed:wnu:1,2`` or a series."""
    if text.startswith("closed:"):
        parts = text.split(":")
        kind = parts[1]
        if kind == "wk":
            return closed_form("wk", order, k=int(parts[2]))
        if kind == "wnu":
            a, b = parts[2].split(",")
            return closed_form("wnu", order, nu1=parse_scalar(a), nu2=parse_scalar(b))
        return closed_form(kind, order)
    return GWPotential(parse_series(text, order), "pipeline", text)


def parse_weights(text: str | None):
    if not text:
        return REFERENCE_WEIGHTS
    ws = [parse_scalar(t) for t in text.split(",")]
    if len(ws) != 3:
        raise UsageError("--weights needs three comma separated values")
    return tuple(ws)


# -- output ---------------------------------------------------------------------


def _series_table(s: QSeries) -> list[str]:
    return [render(c) for c in s.coeffs]


def _ring_series_table(s: QSeries) -> list[list[str]]:
    return [[render(x) for x in c.coords] if hasattr(c, "coords") else [render(c)] for c in s.coeffs]


def _emit(args, doc: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _base_doc(args, spec: ToricSpec | None = None) -> dict:
    doc = {"command": args.command, "version": __version__}
    if spec is not None:
        doc["inputs"] = {"spec": spec.to_text(), "bindings": args.bind or ""}
        doc["orders"] = {"q": spec.order}
    return doc


# -- subcommands ------------------------------------------------------------------


def cmd_ifunc(args) -> int:
    spec = load_spec(args.spec, args.order, args.bind)
    I = build_I(spec)
    doc = _base_doc(args, spec)
    doc["result"] = {"relation": spec.relation.text, "coefficients": [str(c) for c in I.coeffs]}
    _emit(args, doc, I.render())
    return 0


def _operator(name: str, spec: ToricSpec) -> PFOperator:
    if name == "generic":
        return PFOperator.generic(spec)
    ws = spec.weights
    if name == "D1":
        return PFOperator.D1(ws[2])
    if name == "D2":
        return PFOperator.D2(ws[1], ws[2])
    raise UsageError(f"unknown operator {name!r}")


def cmd_pf_check(args) -> int:
    spec = load_spec(args.spec, args.order, args.bind)
    op = _operator(args.operator, spec)
    res = apply_pf(op, build_I(spec))
    nonzero = [k for k, c in enumerate(res.coeffs) if c]
    doc = _base_doc(args, spec)
    doc["result"] = {"operator": args.operator, "annihilated": not nonzero, "nonzero_orders": nonzero}
    text = f"operator {args.operator}: " + (
        f"residual vanishes through q^{res.order}" if not nonzero else f"nonzero residual at q^{nonzero}"
    )
    _emit(args, doc, text)
    return 0 if not nonzero else 1


def cmd_birkhoff(args) -> int:
    spec = load_spec(args.spec, args.order, args.bind)
    S = fundamental_solution(build_I(spec), args.basis.split(";") if args.basis else None)
    pair = birkhoff_factorize(S)
    lines, table = [], {"Q": [], "R": []}
    for name, mats in (("Q", pair.Q), ("R", pair.R)):
        for k, m in enumerate(mats):
            table[name].append([[str(c) for c in row] for row in m])
            for i, row in enumerate(m):
                for j, c in enumerate(row):
                    if c and k:
                        lines.append(f"{name}_{k}[{i},{j}] = {c}")
    doc = _base_doc(args, spec)
    doc["result"] = table
    _emit(args, doc, "\n".join(lines) if lines else "Q = R = Id")
    return 0


def _jfunction(args):
    spec = load_spec(args.spec, args.order, args.bind)
    pair = birkhoff_factorize(fundamental_solution(build_I(spec)))
    if getattr(args, "interpolate", None):
        return spec, interpolated_j(pair, args.interpolate)
    return spec, j_function(pair)


def cmd_jfunc(args) -> int:
    spec, J = _jfunction(args)
    doc = _base_doc(args, spec)
    doc["result"] = {
        "t0": _series_table(J.t0),
        "t_log_coefficient": render(J.t.log_coefficient),
        "t_tail": _series_table(J.t.tail),
        "W_raw": _ring_series_table(J.W_hat()),
    }
    _emit(args, doc, J.render())
    return 0


def cmd_potential(args) -> int:
    spec, J = _jfunction(args)
    if args.restrict is not None:
        W, scale = restricted_potential(J, parse_scalar(args.restrict), leading=parse_scalar(args.leading))
        extra = {"restricted_to": args.restrict, "scale": render(scale)}
        text = f"W = {W.render()}\nrestriction = ({render(scale)}) * W"
    else:
        W = to_potential(J, prefactor=args.prefactor, leading=parse_scalar(args.leading))
        extra = {"factorizes": W.factorizes}
        text = f"W = {W.render()}\nprefactor = {W.prefactor}"
        if not W.factorizes:
            text += "\n(W_hat is not a multiple of a scalar series; W is the 1-coordinate)"
    doc = _base_doc(args, spec)
    doc["result"] = {"potential": W.to_dict(), **extra}
    _emit(args, doc, text)
    return 0


def cmd_closed_form(args) -> int:
    kw = {}
    if args.kind == "wk":
        if args.k is None:
            raise UsageError("--kind wk needs --k")
        kw["k"] = args.k
    if args.kind == "wnu":
        if args.nu1 is None or args.nu2 is None:
            raise UsageError("--kind wnu needs --nu1 and --nu2")
        kw["nu1"], kw["nu2"] = parse_scalar(args.nu1), parse_scalar(args.nu2)
    W = closed_form(args.kind, args.order, **kw)
    doc = {"command": args.command, "version": __version__, "orders": {"x": args.order}, "result": {"potential": W.to_dict()}}
    _emit(args, doc, W.render())
    return 0


def cmd_compare(args) -> int:
    a, b = potential_arg(args.a, args.order), potential_arg(args.b, args.order)
    rep = compare(a, b, args.mode)
    doc = {
        "command": args.command,
        "version": __version__,
        "inputs": {"a": a.to_dict(), "b": b.to_dict()},
        "orders": {"x": rep.order},
        "result": rep.to_dict(),
    }
    _emit(args, doc, rep.render())
    return 0 if rep.equal else 1


def cmd_localize(args) -> int:
    weights = parse_weights(args.weights)
    F = refined_gf(args.dmax, weights)
    bindings = parse_bindings(args.specialize)
    if bindings:
        F = F.specialize(bindings)
    doc = {
        "command": args.command,
        "version": __version__,
        "inputs": {"weights": [render(w) for w in weights], "specialize": args.specialize or ""},
        "orders": {"w": args.dmax},
        "result": F.to_dict(),
    }
    _emit(args, doc, F.render())
    return 0


def cmd_admissible(args) -> int:
    weights = parse_weights(args.weights)
    ok = check_admissibility(weights, args.degree)
    doc = {"command": args.command, "version": __version__, "inputs": {"weights": [render(w) for w in weights]}, "result": {"admissible": ok}}
    _emit(args, doc, "admissible" if ok else "not admissible")
    return 0 if ok else 1


def cmd_euler_equiv(args) -> int:
    a, b = load_spec(args.a, bind=args.bind), load_spec(args.b, bind=args.bind)
    rep = euler_equiv(a, b, strict=args.strict)
    doc = {
        "command": args.command,
        "version": __version__,
        "inputs": {"a": a.to_text(), "b": b.to_text(), "strict": args.strict},
        "result": {
            "equivalent": rep.equivalent,
            "scalar": None if rep.scalar is None else render(rep.scalar),
            "euler_a": str(rep.euler_a),
            "euler_b": str(rep.euler_b),
        },
    }
    _emit(args, doc, rep.render())
    return 0 if rep.equivalent else 1


def cmd_verify_all(args) -> int:
    from .verify import run_all

    numbers = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(numbers)
    doc = {
        "command": args.command,
        "version": __version__,
        "inputs": {"only": [r.number for r in results]},
        "result": {"passed": all(r.passed for r in results), "criteria": [r.to_dict() for r in results]},
    }
    text = "\n".join(r.render() if args.verbose else r.line() for r in results)
    _emit(args, doc, text)
    return 0 if all(r.passed for r in results) else 1


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eqmirror", description="Exact equivariant mirror-symmetry computations.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def spec_cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("spec", help="preset name, spec file, or inline spec with ';' between lines")
        sp.add_argument("--order", type=int, help="q truncation order")
        sp.add_argument("--bind", help="parameter values, e.g. nu=1,mu=2")
        sp.set_defaults(func=fn)
        return sp

    spec_cmd("ifunc", cmd_ifunc, "print the I-function")
    sp = spec_cmd("pf-check", cmd_pf_check, "apply a Picard-Fuchs operator to the I-function")
    sp.add_argument("--operator", choices=("D1", "D2", "generic"), default="generic")
    sp = spec_cmd("birkhoff", cmd_birkhoff, "Birkhoff factors Q and R")
    sp.add_argument("--basis", help="solutions separated by ';', e.g. 'p=0;d/dp p=0'")
    for name, fn, help_ in (("jfunc", cmd_jfunc, "t0, t and W_raw"), ("potential", cmd_potential, "W(x)")):
        sp = spec_cmd(name, fn, help_)
        sp.add_argument("--interpolate", metavar="W", help="use the w-interpolated factorization with parameter W")
        if name == "potential":
            sp.add_argument("--prefactor", help="ring element c with W_hat = c W, e.g. '2+(5-3*mu)*p'")
            sp.add_argument("--leading", default="1", help="leading coefficient of W when no prefactor is given")
            sp.add_argument("--restrict", help="restrict W_hat to p = ROOT instead of factoring")

    sp = sub.add_parser("closed-form", help="product formula potentials")
    sp.add_argument("--kind", choices=("xi1", "xi2", "wk", "wnu"), required=True)
    sp.add_argument("--order", type=int, default=6)
    sp.add_argument("--k", type=int)
    sp.add_argument("--nu1")
    sp.add_argument("--nu2")
    sp.set_defaults(func=cmd_closed_form)

    sp = sub.add_parser("compare", help="compare two potentials")
    sp.add_argument("a", help="series text or closed:KIND[:ARGS]")
    sp.add_argument("b")
    sp.add_argument("--mode", choices=("exact", "up_to_scalar"), default="exact")
    sp.add_argument("--order", type=int)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("localize", help="refined localization generating function")
    sp.add_argument("--dmax", type=int, default=3)
    sp.add_argument("--specialize", help="e.g. x1=1,x2=1,x3=0")
    sp.add_argument("--weights", help="three torus weights, default 1,omega,omega^2")
    sp.set_defaults(func=cmd_localize)

    sp = sub.add_parser("admissible", help="test a torus weight triple for the refined sum")
    sp.add_argument("--weights", required=True)
    sp.add_argument("--degree", type=int, default=3)
    sp.set_defaults(func=cmd_admissible)

    sp = sub.add_parser("euler-equiv", help="compare equivariant Euler classes of two specs")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--bind")
    sp.set_defaults(func=cmd_euler_equiv)

    sp = sub.add_parser("verify-all", help="run the acceptance suite")
    sp.add_argument("--only", help="comma separated criterion numbers")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(func=cmd_verify_all)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "order", None) is not None and args.order < 1:
        print("error: order: must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, SyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EqMirrorError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
