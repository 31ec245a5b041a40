"""Parsers for the function, measure and generator mini-languages.

A spec is ``name`` or ``name:params``. Parameters are either positional
(``power:0.5``, ``diag:1,2,5``) or ``key=value`` pairs separated by commas
(``bounded_exp:c=1,lambda=2``). Commas inside parentheses or braces do not
split, so measure expressions can be nested in a triple::

    triple:{a=0,b=1,gamma=atom(2,0.5)+exp_density(1)}

Measure expressions are ``+``-separated terms, each a catalog density call
optionally prefixed by a positive factor: ``2*gamma(0.5)+atom(1,3)``.
"""

from __future__ import annotations

import math
import re
from typing import Callable

import numpy as np

from . import functions as fn
from . import measures as ms
from . import semigroup as sg
from .calculus import exp_of_bf
from .errors import SpecParseError
from .functions import BernsteinFunction, CompletelyMonotoneFunction
from .measures import Measure
from .semigroup import MatrixGenerator

CATALOG = [
    ("function", "power:alpha", "tau**alpha, alpha in (0, 1]"),
    ("function", "log1p", "log(1 + tau)"),
    ("function", "bounded_exp:c,lambda", "lambda (1 - exp(-c tau)), c > 0, lambda > 0"),
    ("function", "rational", "tau / (1 + tau)"),
    ("function", "affine:a,b", "a + b tau, a >= 0, b >= 0"),
    ("function", "constant:a", "the constant a >= 0"),
    ("function", "triple:a,b,gamma", "a + b tau + int (1 - exp(-s tau)) gamma(ds)"),
    ("function", "one_minus_derivative:phi", "1 - phi' for phi with phi'(0+) = 1"),
    ("cm", "exp:t", "exp(-t tau), nu = delta_t"),
    ("cm", "gamma:t", "(1 + tau)**-t, nu = Gamma(t) density"),
    ("cm", "one", "the constant 1, nu = delta_0"),
    ("cm", "zero", "the zero function"),
    ("cm", "exp-psi:t:psi", "exp(-t psi(tau)), nu = subordinator at time t"),
    ("cm", "laplace:measure", "Laplace transform of a measure expression"),
    ("measure", "atom(location,weight)", "point mass"),
    ("measure", "exp_density(rate)", "exp(-rate s) ds"),
    ("measure", "gamma(t,rate)", "Gamma(t) probability density, rate defaults to 1"),
    ("measure", "stable_levy(alpha)", "Levy density of tau**alpha"),
    ("measure", "stable_half(t)", "subordinator of sqrt at time t"),
    ("measure", "log_levy", "exp(-s) / s ds"),
    ("measure", "bessel_compound(t)", "continuous part of the tau/(1+tau) subordinator"),
    ("measure", "uniform(lower,upper,height)", "constant density on an interval"),
    ("measure", "power_density(p,lower,upper,scale)", "scale s**-p ds"),
    ("measure", "poisson(jump,rate,t)", "Poisson atoms on the lattice jump*N"),
    ("generator", "laplacian:n,h", "Dirichlet Laplacian tridiag(-1, 2, -1) / h**2"),
    ("generator", "diag:values", "diagonal matrix; values as a list or lo..hi"),
    ("generator", "similarity:n,kappa,seed", "S diag(1..n) S^-1 with cond(S) = kappa"),
    ("generator", "rotation:a,omega,blocks", "blocks [[a, omega], [-omega, a]]"),
    ("generator", "matrix:file,structure", "matrix file ('n m' header, column-major)"),
]


def catalog_lines(filter_text: str = "") -> list:
    lines = [f"{kind:<10} {entry:<37} {text}" for kind, entry, text in CATALOG]
    return [line for line in lines if filter_text in line]


# -- tokenising -----------------------------------------------------------------

def split_top(text: str, sep: str) -> list:
    """Split ``text`` at ``sep`` outside parentheses and braces."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
            if depth < 0:
                raise SpecParseError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise SpecParseError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _head(spec: str):
    if not isinstance(spec, str) or not spec.strip():
        raise SpecParseError(f"empty spec {spec!r}")
    spec = spec.strip()
    name, _, rest = spec.partition(":")
    return name.strip(), rest.strip()


def _params(rest: str, names: tuple, spec: str) -> dict:
    """Positional and ``key=value`` parameters, checked against ``names``."""
    if rest.startswith("{") and rest.endswith("}"):
        rest = rest[1:-1]
    out: dict = {}
    if not rest:
        return out
    for i, item in enumerate(split_top(rest, ",")):
        if not item:
            raise SpecParseError(f"empty parameter in {spec!r}")
        key, eq, value = item.partition("=")
        if eq:
            key = key.strip()
            if key not in names:
                raise SpecParseError(f"unknown parameter {key!r} in {spec!r}")
        else:
            if i >= len(names):
                raise SpecParseError(f"too many parameters in {spec!r}")
            key, value = names[i], item
        if key in out:
            raise SpecParseError(f"parameter {key!r} given twice in {spec!r}")
        out[key] = value.strip()
    return out


def _number(text, what: str) -> float:
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise SpecParseError(f"{what}: {text!r} is not a number") from None
    if math.isnan(v):
        raise SpecParseError(f"{what} is NaN")
    return v


def _integer(text, what: str) -> int:
    v = _number(text, what)
    if v != int(v):
        raise SpecParseError(f"{what}: {text!r} is not an integer")
    return int(v)


def _wrap(fnc: Callable, spec: str):
    try:
        return fnc()
    except SpecParseError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecParseError(f"{spec!r}: {exc}") from exc


# -- measures -------------------------------------------------------------------

_CALL = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?$", re.S)

_MEASURES = {
    "atom": (2, 2, lambda loc, w: ms.atom(loc, w)),
    "exp_density": (1, 1, ms.exp_density),
    "gamma": (1, 2, ms.gamma_density),
    "stable_levy": (1, 1, ms.stable_levy),
    "stable_half": (1, 1, ms.stable_half),
    "log_levy": (0, 0, ms.log_levy),
    "bessel_compound": (1, 1, ms.bessel_compound),
    "uniform": (2, 3, ms.uniform_density),
    "power_density": (1, 4, ms.power_density),
    "poisson": (3, 3, ms.poisson_atoms),
}


def _measure_term(term: str) -> Measure:
    factor = 1.0
    head, star, tail = term.partition("*")
    if star and "(" not in head:
        factor = _number(head, "measure factor")
        term = tail.strip()
    m = _CALL.match(term)
    if not m or m.group(1) not in _MEASURES:
        raise SpecParseError(f"unknown measure term {term!r}")
    lo, hi, ctor = _MEASURES[m.group(1)]
    args = [a for a in split_top(m.group(2) or "", ",") if a]
    if not lo <= len(args) <= hi:
        raise SpecParseError(f"{m.group(1)} takes {lo}..{hi} arguments, got {len(args)}")
    vals = [_number(a, m.group(1)) for a in args]
    mu = _wrap(lambda: ctor(*vals), term)
    return mu if factor == 1.0 else _wrap(lambda: mu.scaled(factor), term)


def parse_measure(spec) -> Measure:
    """A measure from an expression string or a ``{atoms, densities}`` mapping."""
    if isinstance(spec, dict):
        unknown = set(spec) - {"atoms", "densities"}
        if unknown:
            raise SpecParseError(f"unknown measure keys {sorted(unknown)}")
        mu = ms.ZERO
        for pair in spec.get("atoms", []):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise SpecParseError(f"atom {pair!r} must be a [location, weight] pair")
            loc, w = (_number(v, "atom") for v in pair)
            mu = mu + _wrap(lambda: ms.atom(loc, w), str(pair))
        for d in spec.get("densities", []):
            mu = mu + parse_measure(d)
        return mu
    if not isinstance(spec, str):
        raise SpecParseError(f"measure spec {spec!r} must be a string or mapping")
    text = spec.strip()
    if text in ("", "0", "zero"):
        return ms.ZERO
    mu = ms.ZERO
    for term in split_top(text, "+"):
        mu = mu + _measure_term(term)
    return mu


# -- Bernstein functions ----------------------------------------------------------

def parse_psi(spec) -> BernsteinFunction:
    """Bernstein function from a catalog spec or a ``{a, b, gamma}`` mapping."""
    if isinstance(spec, dict):
        unknown = set(spec) - {"a", "b", "gamma", "name"}
        if unknown:
            raise SpecParseError(f"unknown triple keys {sorted(unknown)}")
        a = _number(spec.get("a", 0.0), "a")
        b = _number(spec.get("b", 0.0), "b")
        gamma = parse_measure(spec.get("gamma", ""))
        return _wrap(lambda: fn.from_triple(a, b, gamma, spec.get("name", "triple")), str(spec))
    name, rest = _head(spec)
    if name == "power":
        p = _params(rest, ("alpha",), spec)
        alpha = _number(p.get("alpha", 0.5), "alpha")
        return _wrap(lambda: fn.power(alpha), spec)
    if name in ("log1p", "rational"):
        if rest:
            raise SpecParseError(f"{name} takes no parameters")
        return fn.log1p() if name == "log1p" else fn.rational()
    if name == "bounded_exp":
        p = _params(rest, ("c", "lambda"), spec)
        c = _number(p.get("c", 1.0), "c")
        lam = _number(p.get("lambda", 1.0), "lambda")
        return _wrap(lambda: fn.bounded_exp(c, lam), spec)
    if name == "affine":
        p = _params(rest, ("a", "b"), spec)
        a, b = _number(p.get("a", 0.0), "a"), _number(p.get("b", 1.0), "b")
        if a < 0 or b < 0:
            raise SpecParseError("affine needs a >= 0 and b >= 0")
        return fn.affine(a, b)
    if name == "constant":
        p = _params(rest, ("a",), spec)
        a = _number(p.get("a", 1.0), "a")
        if a < 0:
            raise SpecParseError("constant needs a >= 0")
        return fn.constant(a)
    if name == "triple":
        p = _params(rest, ("a", "b", "gamma"), spec)
        a, b = _number(p.get("a", 0.0), "a"), _number(p.get("b", 0.0), "b")
        gamma = parse_measure(p.get("gamma", ""))
        return _wrap(lambda: fn.from_triple(a, b, gamma, spec.strip()), spec)
    if name == "one_minus_derivative":
        phi = parse_psi(rest)
        return _wrap(lambda: fn.one_minus_derivative_bf(phi), spec)
    raise SpecParseError(f"unknown function {name!r}")


# -- completely monotone functions ------------------------------------------------

def parse_g(spec: str) -> CompletelyMonotoneFunction:
    name, rest = _head(spec)
    if name == "exp":
        return _wrap(lambda: fn.exp_cm(_number(rest or 1.0, "t")), spec)
    if name == "gamma":
        t = _number(rest or 1.0, "t")
        if t <= 0:
            raise SpecParseError("gamma needs t > 0")
        return fn.gamma_cm(t)
    if name in ("one", "zero"):
        if rest:
            raise SpecParseError(f"{name} takes no parameters")
        return fn.one_cm() if name == "one" else fn.zero_cm()
    if name == "exp-psi":
        t_text, sep, psi_spec = rest.partition(":")
        if not sep:
            raise SpecParseError("exp-psi needs the form exp-psi:t:psi")
        t = _number(t_text, "t")
        psi = parse_psi(psi_spec)
        return _wrap(lambda: exp_of_bf(psi, t), spec)
    if name == "laplace":
        mu = parse_measure(rest)
        return CompletelyMonotoneFunction(mu, None, f"laplace:{mu.name}")
    raise SpecParseError(f"unknown completely monotone function {name!r}")


def parse_g_family(spec: str) -> Callable[[float], CompletelyMonotoneFunction]:
    """A one-parameter family ``t -> g_t``: ``exp``, ``gamma`` or ``exp-psi:psi``."""
    name, rest = _head(spec)
    if name in ("exp", "gamma") and not rest:
        return lambda t: parse_g(f"{name}:{t!r}")
    if name == "exp-psi" and rest:
        psi = parse_psi(rest)
        return lambda t: exp_of_bf(psi, t)
    raise SpecParseError(f"{spec!r} is not a g family (exp, gamma or exp-psi:psi)")


# -- generators -----------------------------------------------------------------

def _values(text: str) -> np.ndarray:
    text = text.strip()
    if ".." in text and "," not in text:
        lo, _, hi = text.partition("..")
        a, b = _integer(lo, "range start"), _integer(hi, "range end")
        if b < a:
            raise SpecParseError(f"empty range {text!r}")
        return np.arange(a, b + 1, dtype=float)
    items = [v for v in split_top(text, ",") if v]
    if not items:
        raise SpecParseError("diag needs at least one value")
    return np.array([_number(v, "diag value") for v in items])


def parse_generator(spec: str) -> MatrixGenerator:
    name, rest = _head(spec)
    if name == "laplacian":
        p = _params(rest, ("n", "h"), spec)
        n, h = _integer(p.get("n", 16), "n"), _number(p.get("h", 1.0), "h")
        return _wrap(lambda: sg.dirichlet_laplacian(n, h), spec)
    if name == "diag":
        vals = _values(rest)
        return _wrap(lambda: sg.diag(vals), spec)
    if name == "similarity":
        p = _params(rest, ("n", "kappa", "seed"), spec)
        n = _integer(p.get("n", 8), "n")
        kappa = _number(p.get("kappa", 10.0), "kappa")
        seed = _integer(p.get("seed", 0), "seed")
        if n < 1 or kappa < 1:
            raise SpecParseError("similarity needs n >= 1 and kappa >= 1")
        return _wrap(lambda: sg.random_similarity(n, kappa, seed), spec)
    if name == "rotation":
        p = _params(rest, ("a", "omega", "blocks"), spec)
        a, omega = _number(p.get("a", 1.0), "a"), _number(p.get("omega", 1.0), "omega")
        blocks = _integer(p.get("blocks", 1), "blocks")
        return _wrap(lambda: sg.rotation(a, omega, blocks), spec)
    if name == "matrix":
        p = _params(rest, ("file", "structure"), spec)
        if "file" not in p:
            raise SpecParseError("matrix needs file=PATH")
        structure = p.get("structure", "auto")
        try:
            A = sg.read_matrix(p["file"])
        except (OSError, ValueError) as exc:
            raise SpecParseError(f"cannot read {p['file']!r}: {exc}") from exc
        return _wrap(lambda: sg.make_generator(A, structure, f"matrix:{p['file']}"), spec)
    raise SpecParseError(f"unknown generator {name!r}")
