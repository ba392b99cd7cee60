"""fuchsian-rn: group data, elliptic points, fundamental domains and Eisenstein
series for R(N) from the command line.

Exact rationals are printed as "num/den" strings and complex numbers as
[re, im] pairs.  Complex arguments are written like 0.3+0.2i, i or -2i.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import acceptance
from . import eisenstein as eis
from .arith import DomainError, is_prime
from .elliptic import ell_minus_classes, ell_plus_classes, small_prime_elliptic_points
from .geometry import certify_genus_zero, dirichlet_domain, domain_generators, hyperbolic_area, svg_domain
from .group import (canonical_nhat, make_element, reduce_generator_indices,
                    standard_generators)
from .lseries import PoleError
from .quadforms import class_number

PRECISION_ENV = "FUCHSIAN_RN_PRECISION"


@dataclass
class CliConfig:
    precision: str = "double"
    n_max: int | None = None
    cutoff: int = eis.DEFAULT_CUTOFF
    fmt: str = "json"
    output: str | None = None

    def __post_init__(self):
        if self.precision != "double":
            raise DomainError(f"precision {self.precision!r} is not supported (only 'double')")
        if self.n_max is not None and self.n_max < 1:
            raise DomainError("--nmax must be positive")
        if self.cutoff < 10:
            raise DomainError("--M must be at least 10")
        if self.fmt not in ("json", "csv", "svg", "text"):
            raise DomainError(f"unknown format {self.fmt!r}")


_IMAG_UNIT = re.compile(r"(?<![0-9.])i")


def parse_complex(text: str) -> complex:
    """'0.3+0.2i', 'i', '-2i', '1/2', '0.5-i' -> complex."""
    t = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if "/" in t and "i" not in t:
        return complex(Fraction(t))
    t = _IMAG_UNIT.sub("1i", t).replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read {text!r} as a complex number")


def cpair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _emit(data, cfg: CliConfig) -> str:
    if isinstance(data, str):
        text = data
    else:
        text = json.dumps(data, indent=2)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
        return f"wrote {cfg.output}"
    return text


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")


# ------------------------------------------------------------------ commands

def cmd_group(args, cfg: CliConfig):
    p = args.p
    _require_prime(p)
    if args.reduced:
        red = reduce_generator_indices(p)
        labels = [f"T_{p}", "w_1"] + [f"s_{p}({n},{canonical_nhat(p, n)})^t" for n in red.signed]
        gens = red.generators()
        return {"p": p, "S": list(red.signed), "step_indices": list(red.step_indices),
                "complete": red.complete, "generators": labels,
                "matrices": [g.as_dict() for g in gens]}
    gens = standard_generators(p)
    labels = [f"T_{p}", "w_1"] + [f"s_{p}({g.b},{g.c})" for g in gens[2:]]
    return {"p": p, "generators": labels, "matrices": [g.as_dict() for g in gens]}


def cmd_elliptic(args, cfg: CliConfig):
    p = args.p
    _require_prime(p)
    if p < 5:
        return {"p": p, "points": [cpair(z) for z in small_prime_elliptic_points(p)]}
    return {"p": p,
            "plus": [c.as_dict() for c in ell_plus_classes(p)],
            "minus": [c.as_dict() for c in ell_minus_classes(p)]}


def cmd_classnum(args, cfg: CliConfig):
    return {"disc": args.disc, "class_number": class_number(args.disc)}


def cmd_genus(args, cfg: CliConfig):
    _require_prime(args.p)
    return certify_genus_zero(args.p).as_dict()


def cmd_domain(args, cfg: CliConfig):
    _require_prime(args.p)
    poly = dirichlet_domain(domain_generators(args.p))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(svg_domain(poly))
    return {"p": args.p, "m": poly.m, "bounded": poly.bounded,
            "vertices": [cpair(v) for v in poly.vertices], "angles": list(poly.angles),
            "circles": [{"center": cpair(c.center), "radius": c.radius} for c in poly.circles],
            "area": hyperbolic_area(poly), "svg": args.svg}


def _result(value: complex, tail: float, n_max, warnings: list[str]) -> dict:
    return {"value": cpair(value), "tail": float(tail), "n_max": n_max, "warnings": warnings}


def cmd_eis(args, cfg: CliConfig):
    action = args.action
    z = args.z
    warnings: list[str] = []
    if action == "eval":
        N = args.N or args.p
        s = args.s
        if args.kind == "G":
            r = eis.G_value(N, args.k, z, s, args.mode, cfg.n_max, cfg.cutoff)
        elif args.kind == "hat":
            r = eis.g_hat(N, args.k, z, s, cfg.n_max)
        else:
            r = eis.g_tilde(N, args.k, z, s, cfg.n_max)
        n_used = None if args.mode == "direct" else eis.auto_terms(N, z.imag, cfg.n_max)
        return _result(r.value, r.tail, n_used, warnings)
    if action == "funeq":
        p = args.p or args.N
        r = eis.check_functional_equation(p, args.k, z, args.s, cfg.n_max)
        return {"residual": r.value, "tail": r.tail, "tilde_residual": r.details["tilde_residual"],
                "values": [cpair(v) for v in r.details["hat"]],
                "n_max": eis.auto_terms(p, z.imag, cfg.n_max)}
    if action == "table":
        N = args.N or args.p
        n_max = cfg.n_max or eis.DEFAULT_NMAX
        rows = eis.fourier_table(N, args.k, z, args.s, n_max)
        if cfg.fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["n", "re", "im", "tail_bound"])
            for n, c, t in rows:
                w.writerow([n, repr(c.real), repr(c.imag), repr(t)])
            return buf.getvalue().rstrip("\n")
        return {"N": N, "k": args.k, "s": cpair(args.s), "y": z.imag,
                "rows": [{"n": n, "coef": cpair(c), "tail_bound": t} for n, c, t in rows]}
    if action == "taylor":
        p = args.p or args.N
        value = eis.taylor_T(p, args.k, args.m, z, cfg.n_max)
        if (args.k, args.m) not in ((0, 0), (0, 1), (2, 1)):
            warnings.append("no closed form: extracted numerically on |s| = 1e-2")
        return _result(value, 0.0, eis.auto_terms(p, z.imag, cfg.n_max), warnings)
    if action == "invariance":
        N = args.N or args.p
        if args.gamma:
            parts = [int(x) for x in args.gamma.split(",")]
            gammas = [make_element(N, "+" if parts[0] > 0 else "-", *parts[1:])]
        else:
            _require_prime(N)
            gammas = standard_generators(N)
        out = []
        for g in gammas:
            r = eis.check_modular_invariance(N, args.k, z, args.s, g, args.mode, cfg.n_max, cfg.cutoff)
            out.append({"gamma": g.as_dict(), "residual": r.value, "tail": r.tail})
        return {"N": N, "k": args.k, "z": cpair(z), "s": cpair(args.s), "mode": args.mode,
                "results": out, "max_residual": max(o["residual"] for o in out)}
    raise DomainError(f"unknown eis action {action!r}")


def cmd_verify(args, cfg: CliConfig):
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = acceptance.run_all(full=args.full, only=only)
    passed = all(r.passed for r in results)
    if args.json:
        return {"passed": passed, "criteria": [r.as_dict() for r in results]}, passed
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return "\n".join(lines), passed


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuchsian-rn", description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=None, help="Fourier terms (default: automatic)")
    ap.add_argument("--M", type=int, default=eis.DEFAULT_CUTOFF, help="lattice cutoff")
    ap.add_argument("--format", default="json", choices=["json", "csv", "svg", "text"])
    ap.add_argument("--output", "-o", default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", help="generators of R(p)")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--reduced", action="store_true")

    e = sub.add_parser("elliptic", help="elliptic points of R(p)")
    e.add_argument("--p", type=int, required=True)

    c = sub.add_parser("classnum", help="class number of a negative discriminant")
    c.add_argument("--disc", type=int, required=True)

    gn = sub.add_parser("genus", help="genus-zero certificate")
    gn.add_argument("--p", type=int, required=True)

    d = sub.add_parser("domain", help="Dirichlet domain in the unit disk")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--svg", default=None, help="write a picture to this file")

    es = sub.add_parser("eis", help="Eisenstein series")
    es.add_argument("action", choices=["eval", "funeq", "table", "taylor", "invariance"])
    es.add_argument("--N", type=int, default=None)
    es.add_argument("--p", type=int, default=None)
    es.add_argument("--k", type=int, default=0)
    es.add_argument("--z", type=parse_complex, default=1j)
    es.add_argument("--s", type=parse_complex, default=2 + 0j)
    es.add_argument("--m", type=int, default=0, help="Taylor index")
    es.add_argument("--kind", choices=["G", "hat", "tilde"], default="G")
    es.add_argument("--mode", choices=["fourier", "direct"], default="fourier")
    es.add_argument("--gamma", default=None, help="parity,a,b,c,d with parity +1 or -1")
    # per-command copies so `eis table ... --nmax 20 --format csv` reads naturally
    es.add_argument("--nmax", type=int, default=argparse.SUPPRESS)
    es.add_argument("--M", type=int, default=argparse.SUPPRESS)
    es.add_argument("--format", choices=["json", "csv", "text"], default=argparse.SUPPRESS)

    v = sub.add_parser("verify", help="run the acceptance suite")
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true")
    mode.add_argument("--full", action="store_true")
    v.add_argument("--json", action="store_true")
    v.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return ap


COMMANDS = {"group": cmd_group, "elliptic": cmd_elliptic, "classnum": cmd_classnum,
            "genus": cmd_genus, "domain": cmd_domain, "eis": cmd_eis, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = CliConfig(os.environ.get(PRECISION_ENV, "double"), args.nmax, args.M, args.format,
                        args.output)
        if args.command == "eis" and args.N is None and args.p is None:
            raise DomainError("eis needs --N or --p")
        out = COMMANDS[args.command](args, cfg)
    except (DomainError, PoleError, eis.ConvergenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    status = 0
    if args.command == "verify":
        out, passed = out
        status = 0 if passed else 1
    print(_emit(out, cfg))
    return status


if __name__ == "__main__":
    sys.exit(main())
