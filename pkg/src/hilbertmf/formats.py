"""Line-oriented text formats: expansion files, system files and ``key = value`` configs.

Expansion file::

    field Q(sqrt 5)          # or "field Q" for degree-1 data
    weight 2 2
    level 4.2
    coeff-field Q
    bound 20
    const 0 0
    1.0 1
    4.2 -3
    ...

Body lines are ``<ideal-label> <coefficient>`` sorted by (norm, label).

System file::

    system eigen-11-l3
    field Q
    dim 2
    exceptional 11           # "-" when empty
    ell 3                    # optional: the prime l of this member
    2 2 2
    3 1 3

Each prime line lists ``c1 .. c_dim`` with ``P(T) = 1 + c1 T + c2 T^2``.
Quadratic-field coefficients are written without internal spaces.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from typing import Iterable

from .galois import CompatibleSystem, LocalFactor, _label_norm
from .hecke import CoefficientField, IdealExpansion, weight_data
from .quadfield import FieldElement, format_element, parse_field


class FormatError(ValueError):
    """Malformed input file."""


def _lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _header(lines: list[str], keys: Iterable[str]) -> tuple[dict[str, str], list[str]]:
    head: dict[str, str] = {}
    rest = list(lines)
    for key in keys:
        if not rest:
            raise FormatError(f"missing header line {key!r}")
        name, _, value = rest[0].partition(" ")
        if name != key:
            raise FormatError(f"expected {key!r}, found {rest[0]!r}")
        head[key] = value.strip()
        rest.pop(0)
    return head, rest


# expansions


def format_expansion(exp: IdealExpansion) -> str:
    K = exp.coeff_field
    out = [
        f"field {'Q' if exp.base is None else exp.base}",
        "weight " + " ".join(str(x) for x in exp.weight.k),
        f"level {exp.level}",
        f"coeff-field {K}",
        f"bound {exp.norm_bound}",
    ]
    for i, c in enumerate(exp.constant_terms):
        out.append(f"const {i} {K.format_value(c)}")
    for label in exp.sorted_labels():
        out.append(f"{label} {K.format_value(exp.coefficients[label])}")
    return "\n".join(out) + "\n"


def parse_expansion(text: str) -> IdealExpansion:
    head, body = _header(_lines(text), ("field", "weight", "level", "coeff-field", "bound"))
    base = None if head["field"] == "Q" else parse_field(head["field"])
    try:
        weight = weight_data(tuple(int(x) for x in head["weight"].split()))
        bound = int(head["bound"])
    except ValueError as e:
        raise FormatError(str(e)) from e
    K = CoefficientField.parse(head["coeff-field"])
    consts: dict[int, object] = {}
    coeffs: dict[str, object] = {}
    for line in body:
        if line.startswith("const "):
            _, i, value = line.split(" ", 2)
            consts[int(i)] = K.parse_value(value)
            continue
        label, _, value = line.partition(" ")
        if not value:
            raise FormatError(f"missing coefficient on line {line!r}")
        if label in coeffs:
            raise FormatError(f"duplicate label {label}")
        coeffs[label] = K.parse_value(value)
    const_list = [consts[i] for i in sorted(consts)]
    if sorted(consts) != list(range(len(consts))):
        raise FormatError("constant terms must be numbered 0..h-1")
    return IdealExpansion(base, weight, head["level"], K, coeffs, bound, const_list)


# systems


def _format_coeff(x) -> str:
    if isinstance(x, FieldElement):
        return format_element(x).replace(" ", "")
    if isinstance(x, complex):
        return repr(x).strip("()")
    if isinstance(x, float):
        return repr(x)
    return str(Fraction(x))


def _parse_coeff(field_desc: str, text: str):
    if field_desc == "Q":
        return Fraction(text)
    if field_desc == "C":
        return complex(text)
    return parse_field(field_desc).parse(text)


def format_system(sys_: CompatibleSystem) -> str:
    out = [
        f"system {sys_.label}",
        f"field {sys_.field}",
        f"dim {sys_.dim}",
        "exceptional " + (" ".join(sys_.exceptional) if sys_.exceptional else "-"),
    ]
    if sys_.ell is not None:
        out.append(f"ell {sys_.ell}")
    for q in sorted(sys_.factors, key=lambda q: (_label_norm(q), q)):
        f = sys_.factors[q]
        cs = tuple(f.coeffs) + (0,) * (sys_.dim - len(f.coeffs))
        out.append(" ".join([q] + [_format_coeff(c) for c in cs]))
    return "\n".join(out) + "\n"


def parse_system(text: str) -> CompatibleSystem:
    head, body = _header(_lines(text), ("system", "field", "dim", "exceptional"))
    dim = int(head["dim"])
    exceptional = () if head["exceptional"] in ("-", "") else tuple(head["exceptional"].split())
    ell = None
    if body and body[0].startswith("ell "):
        ell = int(body.pop(0).split()[1])
    factors = {}
    for line in body:
        parts = line.split()
        if len(parts) != dim + 1:
            raise FormatError(f"expected {dim} coefficients on line {line!r}")
        q = parts[0]
        cs = tuple(_parse_coeff(head["field"], c) for c in parts[1:])
        while cs and not cs[-1]:
            cs = cs[:-1]
        factors[q] = LocalFactor(q, cs, _label_norm(q))
    return CompatibleSystem(head["system"], head["field"], dim, exceptional, factors, ell)


def read_text(path: str) -> str:
    with open(path, encoding="ascii") as fh:
        return fh.read()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def is_system_text(text: str) -> bool:
    lines = _lines(text)
    return bool(lines) and lines[0].startswith("system ")


# configuration


@dataclass(frozen=True)
class Config:
    precision: int = 128
    radius: float = 12.0
    bound: int = 1000
    grid: int = 64
    seed: int = 0
    unit_search: int = 10**4
    principal_budget: int = 10**6

    def __post_init__(self):
        for f in fields(self):
            if f.name != "seed" and getattr(self, f.name) <= 0:
                raise ValueError(f"config value {f.name} must be positive")

    def header(self) -> str:
        return "# config " + " ".join(f"{k}={v}" for k, v in asdict(self).items())

    def replace(self, **changes) -> Config:
        kw = asdict(self)
        kw.update({k: v for k, v in changes.items() if v is not None})
        return Config(**kw)


def parse_config(text: str) -> Config:
    types = {f.name: f.type for f in fields(Config)}
    values = {}
    for line in _lines(text):
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise FormatError(f"expected key = value, got {line!r}")
        if key not in types:
            raise FormatError(f"unknown config key {key!r}")
        values[key] = float(value) if types[key] in ("float", float) else int(value.strip())
    return Config(**values)


def format_config(cfg: Config) -> str:
    return "".join(f"{k} = {v}\n" for k, v in asdict(cfg).items())


def load_config(path: str | None) -> Config:
    if path is None:
        return Config()
    if not os.path.exists(path):
        raise FileNotFoundError(f"config file {path} not found")
    return parse_config(read_text(path))
