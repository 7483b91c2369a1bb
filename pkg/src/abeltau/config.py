"""Problem configuration files.

An INI-style text format read with :mod:`configparser`::

    [problem]
    name = example1
    n = 2
    alphas = 1/4, 1/4; 1/4, 1/4

    [kernel 1 2]
    terms = (0, 0, 1/Gamma(1/4))

    [forcing 2]
    terms = (4, 5*sqrt(2)*pi/(16*Gamma(3/4))), (5, 1)
    builtins = erfc_comb: -1

    [exact 1]
    terms = (5, 1)

Kernel terms are ``(p, q, c)`` for ``c t**(p sigma) s**(q sigma)``; forcing
and exact terms are ``(l, c)`` for ``c t**(l sigma)``. Coefficients are
arithmetic expressions over numbers, ``pi`` and ``Gamma``, ``Beta``, ``sqrt``.
Missing kernel or forcing sections mean zero.
"""
from __future__ import annotations

import ast
import configparser
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import special

from .errors import ConfigError
from .fracpoly import FracBivar, FracPoly
from .functions import get_builtin
from .operator import Forcing, Problem

__all__ = [
    "FunctionSpec",
    "ProblemConfig",
    "safe_eval",
    "parse_config",
    "load_config",
    "serialize_config",
]

_FUNCS = {
    "Gamma": lambda x: float(special.gamma(x)),
    "Beta": lambda x, y: float(special.beta(x, y)),
    "sqrt": math.sqrt,
}
_NAMES = {"pi": math.pi}
_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCS
        and not node.keywords
    ):
        return _FUNCS[node.func.id](*(_eval_node(a) for a in node.args))
    raise ValueError(f"unsupported expression element: {ast.unparse(node)!r}")


def safe_eval(expr):
    """Evaluate a whitelisted arithmetic expression to a float."""
    if not isinstance(expr, str):
        return float(expr)
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {expr!r}") from exc
    value = _eval_node(tree)
    if not math.isfinite(value):
        raise ValueError(f"expression {expr!r} is not finite")
    return value


@dataclass
class FunctionSpec:
    """``sum c_l t**(l sigma) + sum c_k builtin_k(t)``; expressions kept as text."""

    terms: list = field(default_factory=list)  # (l, expr)
    builtins: list = field(default_factory=list)  # (name, expr)

    def is_empty(self):
        return not self.terms and not self.builtins

    def polynomial(self, sigma):
        mapping = {}
        for l, expr in self.terms:
            mapping[l] = mapping.get(l, 0.0) + safe_eval(expr)
        return FracPoly.from_map(sigma, mapping) if mapping else FracPoly.zero(sigma)

    def materialize(self, sigma):
        """FracPoly when purely polynomial, otherwise a :class:`Forcing`."""
        poly = self.polynomial(sigma)
        if not self.builtins:
            return poly
        parts = [(get_builtin(name), safe_eval(expr)) for name, expr in self.builtins]
        gamma_ = Fraction(sigma).denominator

        def func(t):
            t = np.asarray(t, dtype=np.float64)
            out = np.broadcast_to(np.asarray(poly(t)), t.shape).astype(np.float64)
            for b, c in parts:
                out = out + c * b.func(t)
            return out

        def series(M, sig=sigma):
            if Fraction(sig) != Fraction(sigma):
                raise ValueError(f"series requested on lattice {sig}, function defined on {sigma}")
            out = np.zeros(M + 1)
            pc = np.asarray(poly.coeffs, dtype=np.float64)[: M + 1]
            out[: len(pc)] += pc
            for b, c in parts:
                out += c * b.series(M, gamma_)
            return out

        label = " + ".join(f"{expr}*{name}" for name, expr in self.builtins)
        return Forcing(func, series, label)


@dataclass
class ProblemConfig:
    name: str
    n: int
    alphas: list  # n x n Fractions
    kernels: dict = field(default_factory=dict)  # (i, j) 1-based -> [(p, q, expr)]
    forcing: dict = field(default_factory=dict)  # i -> FunctionSpec
    exact: dict = field(default_factory=dict)  # i -> FunctionSpec

    def to_problem(self):
        try:
            alphas = [[Fraction(a) for a in row] for row in self.alphas]
            gamma_ = math.lcm(*(a.denominator for row in alphas for a in row))
            sigma = Fraction(1, gamma_)
            kernels = []
            for i in range(1, self.n + 1):
                row = []
                for j in range(1, self.n + 1):
                    triples = [(p, q, safe_eval(c)) for p, q, c in self.kernels.get((i, j), [])]
                    row.append(FracBivar.from_triples(sigma, triples) if triples else FracBivar.zero(sigma))
                kernels.append(tuple(row))
            forcing = tuple(self.forcing.get(i, FunctionSpec()).materialize(sigma) for i in range(1, self.n + 1))
            exact = None
            if self.exact:
                exact = tuple(self.exact[i].materialize(sigma) for i in range(1, self.n + 1))
            return Problem(tuple(tuple(r) for r in alphas), tuple(kernels), forcing, exact, self.name)
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(str(exc)) from exc


_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s\[][^=:]*?)\s*[=:]")


def _line_map(text):
    lines = {}
    section = None
    for no, line in enumerate(text.splitlines(), start=1):
        m = _SECTION_RE.match(line)
        if m:
            section = m.group(1).strip()
            lines[(section, None)] = no
            continue
        m = _KEY_RE.match(line)
        if m and section is not None:
            lines[(section, m.group(1).strip().lower())] = no
    return lines


def _parse_fraction(s, where):
    s = s.strip()
    if not re.fullmatch(r"[+-]?\d+(\s*/\s*\d+)?", s):
        raise ConfigError(f"'{s}' is not a rational a/b", **where)
    a = Fraction(s.replace(" ", ""))
    if not (0 < a <= 1):
        raise ConfigError(
            f"alpha = {a} violates 0 < alpha <= 1 (alpha = a/b with gcd(a, b) = 1)", **where
        )
    return a


def _parse_tuples(text, arity, where):
    try:
        tree = ast.parse(text.strip(), mode="eval").body
    except SyntaxError:
        raise ConfigError(f"cannot parse term list {text!r}", **where) from None
    if isinstance(tree, ast.Tuple) and tree.elts and all(isinstance(e, ast.Tuple) for e in tree.elts):
        items = tree.elts
    elif isinstance(tree, ast.Tuple):
        items = [tree]
    else:
        raise ConfigError(f"expected tuples like (l, c), got {text!r}", **where)
    out = []
    for item in items:
        if not isinstance(item, ast.Tuple) or len(item.elts) != arity:
            raise ConfigError(f"each term needs {arity} entries: {ast.unparse(item)}", **where)
        idx = []
        for e in item.elts[:-1]:
            if not (isinstance(e, ast.Constant) and isinstance(e.value, int) and e.value >= 0):
                raise ConfigError(f"exponent indices must be non-negative integers: {ast.unparse(item)}", **where)
            idx.append(e.value)
        expr = ast.unparse(item.elts[-1])
        try:
            safe_eval(expr)
        except (ValueError, TypeError, ZeroDivisionError, OverflowError) as exc:
            raise ConfigError(str(exc), **where) from None
        out.append((*idx, expr))
    return out


def _parse_builtins(text, where):
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, expr = chunk.partition(":")
        name, expr = name.strip(), (expr.strip() or "1")
        try:
            get_builtin(name)
            expr = ast.unparse(ast.parse(expr, mode="eval").body)
            safe_eval(expr)
        except (ValueError, SyntaxError) as exc:
            raise ConfigError(str(exc), **where) from None
        out.append((name, expr))
    return out


def _indices(section, count, where):
    parts = section.split()[1:]
    if len(parts) != count or not all(p.isdigit() for p in parts):
        raise ConfigError(f"section [{section}] needs {count} 1-based index(es)", **where)
    return tuple(int(p) for p in parts)


def parse_config(text, source="<config>"):
    """Parse configuration text into a :class:`ProblemConfig`."""
    lines = _line_map(text)
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], line=getattr(exc, "lineno", None)) from None

    def where(section, key=None):
        return {"field": f"{section}.{key}" if key else section, "line": lines.get((section, key))}

    if not parser.has_section("problem"):
        raise ConfigError("missing [problem] section")
    prob = parser["problem"]
    if "alphas" not in prob:
        raise ConfigError("missing 'alphas'", **where("problem"))
    rows = [r for r in prob["alphas"].split(";") if r.strip()]
    alphas = [[_parse_fraction(a, where("problem", "alphas")) for a in r.split(",")] for r in rows]
    n = len(alphas)
    if any(len(r) != n for r in alphas):
        raise ConfigError("alphas must form an n x n matrix", **where("problem", "alphas"))
    if "n" in prob:
        try:
            declared = int(prob["n"])
        except ValueError:
            raise ConfigError(f"n must be an integer, got {prob['n']!r}", **where("problem", "n")) from None
        if declared != n:
            raise ConfigError(f"n = {declared} but alphas is {n} x {n}", **where("problem", "n"))
    cfg = ProblemConfig(prob.get("name", "problem"), n, alphas)

    for section in parser.sections():
        kind = section.split()[0]
        sec = parser[section]
        if kind == "problem":
            continue
        if kind == "kernel":
            i, j = _indices(section, 2, where(section))
            if not (1 <= i <= n and 1 <= j <= n):
                raise ConfigError(f"kernel index ({i}, {j}) outside 1..{n}", **where(section))
            cfg.kernels[(i, j)] = _parse_tuples(sec.get("terms", "()"), 3, where(section, "terms")) if sec.get("terms", "").strip() else []
        elif kind in ("forcing", "exact"):
            (i,) = _indices(section, 1, where(section))
            if not 1 <= i <= n:
                raise ConfigError(f"component {i} outside 1..{n}", **where(section))
            spec = FunctionSpec()
            if sec.get("terms", "").strip():
                spec.terms = _parse_tuples(sec["terms"], 2, where(section, "terms"))
            if sec.get("builtins", "").strip():
                spec.builtins = _parse_builtins(sec["builtins"], where(section, "builtins"))
            getattr(cfg, kind)[i] = spec
        else:
            raise ConfigError(f"unknown section [{section}]", **where(section))
    if cfg.exact and len(cfg.exact) != n:
        raise ConfigError("exact solution must be given for every component or none", field="exact")
    # validate eagerly so errors surface at load time
    cfg.to_problem()
    return cfg


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), source=str(path))


def _fmt_terms(terms):
    return ", ".join("(" + ", ".join(str(x) for x in t) + ")" for t in terms)


def serialize_config(cfg):
    """Canonical text form; ``parse_config(serialize_config(c))`` reproduces ``c``."""
    out = [
        "[problem]",
        f"name = {cfg.name}",
        f"n = {cfg.n}",
        "alphas = " + "; ".join(", ".join(str(Fraction(a)) for a in row) for row in cfg.alphas),
    ]
    for (i, j) in sorted(cfg.kernels):
        if cfg.kernels[(i, j)]:
            out += ["", f"[kernel {i} {j}]", "terms = " + _fmt_terms(cfg.kernels[(i, j)])]
    for kind in ("forcing", "exact"):
        specs = getattr(cfg, kind)
        for i in sorted(specs):
            spec = specs[i]
            out += ["", f"[{kind} {i}]"]
            if spec.terms:
                out.append("terms = " + _fmt_terms(spec.terms))
            if spec.builtins:
                out.append("builtins = " + "; ".join(f"{name}: {expr}" for name, expr in spec.builtins))
    return "\n".join(out) + "\n"
