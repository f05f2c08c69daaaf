"""Command-line interface.

Global flags (``--seed``, ``--precision``, ``--bound``, ``--radius``,
``--config``) may appear before or after the subcommand.  Every command
prints a ``# config`` header echoing the settings in effect, and its output
is determined by its arguments and that configuration.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import random
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np
from sympy import primerange

from . import analytic, cusps, formats, galois, hecke, lfun
from .ideals import class_group, different_ideal, parse_ideal
from .quadfield import format_element, make_field


def _point(text: str) -> tuple[complex, complex]:
    parts = text.replace("i", "j").split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"a point needs two coordinates: {text!r}")
    return tuple(complex(p.strip()) for p in parts)  # type: ignore[return-value]


def _fmt_c(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _fmt_point(z) -> str:
    return ",".join(_fmt_c(x) for x in z)


# field and ideals


def cmd_field_info(args, cfg, out):
    F = make_field(args.D)
    eps = F.fundamental_unit(cfg.unit_search)
    e1, e2 = F.omega_embeddings(cfg.precision)
    out(f"field {F}")
    out(f"disc {F.disc}")
    out(f"omega {'(1+sqrt D)/2' if F.omega_half else 'sqrt D'}")
    out(f"omega embeddings {float(e1):.12g} {float(e2):.12g}")
    out(f"fundamental unit {format_element(eps)} (norm {eps.norm()})")
    out(f"totally positive unit generator {format_element(F.totally_positive_unit_generator())}")
    out(f"different {different_ideal(F).label}")


def cmd_classgroup(args, cfg, out):
    cg = class_group(make_field(args.D))
    out(f"h = {cg.h}")
    out(f"narrow h = {cg.narrow_h}")
    for i, R in enumerate(cg.representatives):
        out(f"t_{i + 1} {R.label}")
    if cg.narrow_differs:
        out("note: narrow and ordinary class numbers differ")


def _read_cusps(F, spec: str):
    if os.path.exists(spec):
        items = [ln.strip() for ln in formats.read_text(spec).splitlines()]
    else:
        items = spec.split(",")
    return [cusps.parse_cusp(F, s) for s in items if s.strip()]


def cmd_cusps_classify(args, cfg, out):
    F = make_field(args.D)
    n = parse_ideal(F, args.level)
    cs = _read_cusps(F, args.cusps)
    for line in cusps.classify_cusps(F, n, cs).lines():
        out(line)


# analytic


def _points(args, cfg, count_default=3):
    if args.point:
        return list(args.point)
    rng = random.Random(cfg.seed)
    return [
        (complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5)), complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5)))
        for _ in range(args.samples or count_default)
    ]


def _spec(cfg):
    return analytic.LatticeSumSpec(radius=cfg.radius, prec=53 if cfg.precision <= 53 else cfg.precision)


def cmd_eisenstein_eval(args, cfg, out):
    F = make_field(args.D)
    spec = _spec(cfg)
    out("z\tvalue\theuristic_error")
    for z in _points(args, cfg):
        v = analytic.eisenstein_eval(F, args.weight, spec, z)
        out(f"{_fmt_point(z)}\t{_fmt_c(v.value)}\t{v.tail:.3e}")


def cmd_poincare_eval(args, cfg, out):
    F = make_field(args.D)
    nu = analytic.smallest_totally_positive_dual(F) if args.nu == "min" else F.parse(args.nu)
    spec = _spec(cfg)
    out(f"nu {format_element(nu)}")
    out("z\tvalue\theuristic_error")
    for z in _points(args, cfg):
        v = analytic.poincare_eval(F, nu, args.weight, spec, z)
        out(f"{_fmt_point(z)}\t{_fmt_c(v.value)}\t{v.tail:.3e}")


# hecke


def cmd_hecke_expand(args, cfg, out):
    exp = hecke.classical_degree1_oracle(args.N, args.k, args.upto or cfg.bound)
    text = formats.format_expansion(exp)
    if args.output:
        formats.write_text(args.output, text)
        out(f"wrote {args.output}")
    else:
        for line in text.splitlines():
            out(line)


def _load_exp(path):
    return formats.parse_expansion(formats.read_text(path))


def cmd_hecke_congr(args, cfg, out):
    f, g = _load_exp(args.f), _load_exp(args.g)
    B = args.upto or min(f.norm_bound, g.norm_bound)
    alpha = f.coeff_field.parse_ideal(args.alpha)
    ok = hecke.congruent_mod(f, g, alpha, B)
    out(f"{'congruent' if ok else 'not congruent'} mod {args.alpha} through {B}")


def cmd_hecke_eigencheck(args, cfg, out):
    f = _load_exp(args.f)
    p = args.prime
    a = f.coeff_field.parse_value(args.eigenvalue)
    alpha = f.coeff_field.parse_ideal(args.alpha)
    B = args.upto or f.norm_bound // p
    ok = hecke.is_eigen_mod(f, lambda h: hecke.hecke_degree1(h, p), a, alpha, B)
    out(f"T_{p} f {'==' if ok else '!='} {args.eigenvalue} f mod {args.alpha} through {B}")


# lfun


def _root_growth(sys_) -> float:
    """Largest ``log|root| / log N`` over the stored factors."""
    rho = 0.0
    for f in sys_.factors.values():
        if not f.coeffs:
            continue
        poly = [complex(c) if not isinstance(c, Fraction) else float(c) for c in reversed(f.coeffs)] + [1.0]
        roots = np.roots(poly)
        for r in roots:
            if abs(r) > 0:
                rho = max(rho, -math.log(abs(r)) / math.log(f.norm))
    return rho


def cmd_lfun_eval(args, cfg, out):
    text = formats.read_text(args.file)
    B = args.upto or cfg.bound
    out("s\tvalue\ttail_bound")
    if formats.is_system_text(text):
        sys_ = formats.parse_system(text)
        rho = args.growth if args.growth is not None else _root_growth(sys_)
        data = lfun.EulerProductData(sys_.factors, B, rho, sys_.dim)
        for s in args.s:
            v = lfun.eval_euler(data, s)
            out(f"{_fmt_c(s)}\t{_fmt_c(v.value)}\t{v.bound:.3e}")
    else:
        exp = formats.parse_expansion(text)
        data = lfun.DirichletSeriesData.from_expansion(exp, args.growth)
        for s in args.s:
            v = lfun.eval_dirichlet(data, s, min(B, exp.norm_bound))
            out(f"{_fmt_c(s)}\t{_fmt_c(v.value)}\t{v.bound:.3e}")


# galois


def cmd_galois_frob(args, cfg, out):
    a = galois.frobenius_cyclotomic(args.p, args.N)
    ext = galois.AbelianGaloisDesc.cyclotomic(args.N)
    e, f, g = galois.efg_data(ext, args.p)
    out(f"Frob_{args.p} = {a} mod {args.N}, order {f}")


def cmd_galois_efg(args, cfg, out):
    if args.cyclotomic is not None:
        ext = galois.AbelianGaloisDesc.cyclotomic(args.cyclotomic)
    else:
        ext = galois.AbelianGaloisDesc.quadratic(args.quadratic)
    e, f, g = galois.efg_data(ext, args.p)
    out(f"e = {e}, f = {f}, g = {g}")


def _factor_line(f) -> str:
    terms = ["1"]
    for i, c in enumerate(f.coeffs, start=1):
        if c:
            terms.append(f"({c})*T" + (f"^{i}" if i > 1 else ""))
    return f"P_{f.label}(T) = " + " + ".join(terms)


def cmd_galois_localfactor(args, cfg, out):
    if args.character:
        N, _, gens = args.character.partition(":")
        table = {}
        for item in filter(None, gens.split(",")):
            g, _, r = item.partition("=")
            table[int(g)] = Fraction(r)
        chi = galois.DirichletCharacter.from_generators(int(N), table)
        out(_factor_line(galois.artin_local_factor(chi, args.p)))
    elif args.expansion:
        exp = _load_exp(args.expansion)
        es = hecke.eigensystem_from_degree1(exp, [args.p])
        out(_factor_line(galois.eigensystem_to_local_factor(es, str(args.p), args.ell)))
    else:
        raise ValueError("give --character or --expansion")


def cmd_galois_system(args, cfg, out):
    B = args.upto or cfg.bound
    if args.expansion:
        exp = _load_exp(args.expansion)
        es = hecke.eigensystem_from_degree1(exp, list(primerange(2, min(B, exp.norm_bound) + 1)))
        sys_ = galois.system_from_eigensystem(es, args.ell, B)
    else:
        sys_ = galois.cyclotomic_system(args.ell, B)
    text = formats.format_system(sys_)
    if args.output:
        formats.write_text(args.output, text)
        out(f"wrote {args.output}")
    else:
        for line in text.splitlines():
            out(line)


def cmd_galois_compat(args, cfg, out):
    A = formats.parse_system(formats.read_text(args.a))
    B = formats.parse_system(formats.read_text(args.b))
    for line in galois.strict_compat_check(A, B, args.upto or cfg.bound).lines():
        out(line)


# parser


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="seed for randomised sampling")
    p.add_argument("--precision", type=int, default=d, help="working precision in bits")
    p.add_argument("--bound", type=int, default=d, help="default norm or prime bound")
    p.add_argument("--radius", type=float, default=d, help="lattice-sum truncation radius")
    p.add_argument("--config", default=d, help="key = value configuration file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hilbertmf", description="Hilbert modular forms over real quadratic fields.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(parent, name, func, help_=None):
        p = parent.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        p.set_defaults(func=func)
        return p

    def group(name, help_):
        g = sub.add_parser(name, help=help_)
        return g.add_subparsers(dest="action", required=True)

    fld = group("field", "field data")
    p = add(fld, "info", cmd_field_info)
    p.add_argument("D", type=int)

    p = add(sub, "classgroup", cmd_classgroup, "ideal class group")
    p.add_argument("D", type=int)

    cg = group("cusps", "cusp classification")
    p = add(cg, "classify", cmd_cusps_classify)
    p.add_argument("D", type=int)
    p.add_argument("--level", required=True, help="ideal label, e.g. 4.2")
    p.add_argument("--cusps", required=True, help="file or comma list of cusps")

    for name, func in (("eisenstein", cmd_eisenstein_eval), ("poincare", cmd_poincare_eval)):
        g = group(name, f"{name} series")
        p = add(g, "eval", func)
        p.add_argument("D", type=int)
        p.add_argument("--weight", type=int, nargs=2, default=(4, 4))
        p.add_argument("--point", type=_point, action="append", help="x1+y1i,x2+y2i")
        p.add_argument("--samples", type=int, help="number of seeded sample points")
        if name == "poincare":
            p.add_argument("--nu", default="min", help="index nu, or 'min'")

    hk = group("hecke", "expansions and Hecke data")
    p = add(hk, "expand", cmd_hecke_expand)
    p.add_argument("N", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--upto", type=int)
    p.add_argument("-o", "--output")
    p = add(hk, "congr", cmd_hecke_congr)
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--alpha", required=True)
    p.add_argument("--upto", type=int)
    p = add(hk, "eigencheck", cmd_hecke_eigencheck)
    p.add_argument("f")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--eigenvalue", required=True)
    p.add_argument("--alpha", default="1")
    p.add_argument("--upto", type=int)

    lf = group("lfun", "L-functions")
    p = add(lf, "eval", cmd_lfun_eval)
    p.add_argument("file")
    p.add_argument("--s", type=lambda t: complex(t.replace("i", "j")), action="append", required=True)
    p.add_argument("--growth", type=float)
    p.add_argument("--upto", type=int)

    gl = group("galois", "Frobenius data and local factors")
    p = add(gl, "frob", cmd_galois_frob)
    p.add_argument("p", type=int)
    p.add_argument("N", type=int)
    p = add(gl, "efg", cmd_galois_efg)
    p.add_argument("p", type=int)
    ext = p.add_mutually_exclusive_group(required=True)
    ext.add_argument("--cyclotomic", type=int)
    ext.add_argument("--quadratic", type=int)
    p = add(gl, "localfactor", cmd_galois_localfactor)
    p.add_argument("p", type=int)
    p.add_argument("--character", help="N:g=phase,... with chi(g) = exp(2 pi i phase)")
    p.add_argument("--expansion")
    p.add_argument("--ell", type=int)
    p = add(gl, "system", cmd_galois_system)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--expansion", help="degree-1 expansion file; omit for the cyclotomic character")
    p.add_argument("--upto", type=int)
    p.add_argument("-o", "--output")
    p = add(gl, "compat", cmd_galois_compat)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--upto", type=int)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    lines: list[str] = []
    try:
        cfg = formats.load_config(args.config).replace(
            seed=args.seed, precision=args.precision, bound=args.bound, radius=args.radius
        )
        args.func(args, cfg, lines.append)
    except (ValueError, ArithmeticError, KeyError, OSError, RuntimeError) as e:
        print(f"error: {e}", file=stderr)
        return 1
    print(cfg.header(), file=stdout)
    for line in lines:
        print(line, file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
