"""Text rendering and parsing helpers shared by the CLI and golden tests.

Polynomials print in the canonical graded-lex form defined in `symbolic`;
this module adds the simple-root basis used for flag-variety tables, a
parser that inverts the canonical rendering, and fixed-width table layout.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional, Sequence

from .errors import FormatError
from .graph import GkmGraph
from .symbolic import LinearForm, Polynomial, rat


def root_basis_names(n: int) -> tuple[str, ...]:
    return tuple(f"a{i}" for i in range(1, n))


def to_root_basis(poly: Polynomial) -> Polynomial:
    """Rewrite a polynomial in e_1..e_n in the simple roots a_i = e_{i+1}-e_i.

    Only polynomials generated by differences of coordinates lie in the root
    subring; anything else raises.
    """
    n = poly.dim
    forms = []
    for k in range(n):
        coeffs = [Fraction(0)] * n
        coeffs[0] = Fraction(1)
        for i in range(1, k + 1):
            coeffs[i] = Fraction(1)
        forms.append(LinearForm(tuple(coeffs)))
    image = poly.substitute(forms)
    dropped: dict = {}
    for expo, coeff in image.terms.items():
        if expo[0] != 0:
            raise FormatError("polynomial is not in the span of the simple roots")
        dropped[expo[1:]] = coeff
    return Polynomial(n - 1, dropped)


def basis_renderer(graph: GkmGraph, basis: str):
    """Return (names, converter) for rendering polynomials on a graph.

    basis 'x' renders coordinates directly; 'roots' rewrites in simple
    roots; 'auto' picks roots exactly when every weight is a sum-zero form
    (the flag-variety convention), else coordinates.
    """
    if basis == "auto":
        sum_zero = all(
            sum(edge.weight.coeffs, start=Fraction(0)) == 0 for edge in graph.edges
        ) and graph.dimension >= 2 and bool(graph.edges)
        basis = "roots" if sum_zero else "x"
    if basis == "x":
        return None, lambda poly: poly
    if basis == "roots":
        return root_basis_names(graph.dimension), to_root_basis
    raise FormatError(f"unknown basis {basis!r}; use x, roots or auto")


_TOKEN = re.compile(
    r"\s*(?:(?P<sign>[+-])|(?P<rational>\d+(?:/\d+)?)|(?P<name>[A-Za-z]\w*)"
    r"(?:\^(?P<power>\d+))?|(?P<star>\*))"
)


def parse_polynomial(text: str, names: Sequence[str], dim: Optional[int] = None) -> Polynomial:
    """Parse the canonical polynomial rendering back into a polynomial."""
    if dim is None:
        dim = len(names)
    index = {name: i for i, name in enumerate(names)}
    text = text.strip()
    if text == "0":
        return Polynomial.zero(dim)
    terms: list[tuple[Fraction, tuple[int, ...]]] = []
    sign = Fraction(1)
    sign_pending = False
    coeff: Optional[Fraction] = None
    expo = [0] * dim
    position = 0
    pending = False

    def flush():
        nonlocal coeff, expo, sign, pending
        if not pending:
            raise FormatError(f"dangling sign in polynomial {text!r}")
        value = sign * (coeff if coeff is not None else Fraction(1))
        terms.append((value, tuple(expo)))
        coeff = None
        expo = [0] * dim
        sign = Fraction(1)
        pending = False

    while position < len(text):
        match = _TOKEN.match(text, position)
        if not match or match.end() == position:
            raise FormatError(f"cannot parse polynomial {text!r} at position {position}")
        position = match.end()
        if match["sign"]:
            if pending:
                flush()
            elif sign_pending:
                raise FormatError(f"doubled sign in polynomial {text!r}")
            sign = Fraction(1) if match["sign"] == "+" else Fraction(-1)
            sign_pending = True
        elif match["rational"]:
            coeff = rat(match["rational"]) if coeff is None else coeff * rat(match["rational"])
            pending = True
            sign_pending = False
        elif match["name"]:
            name = match["name"]
            if name not in index:
                raise FormatError(f"unknown variable {name!r} in polynomial {text!r}")
            expo[index[name]] += int(match["power"] or 1)
            pending = True
            sign_pending = False
        # '*' tokens just separate factors
    if pending:
        flush()
    total: dict = {}
    for value, exponent in terms:
        current = total.get(exponent, Fraction(0)) + value
        if current == 0:
            total.pop(exponent, None)
        else:
            total[exponent] = current
    return Polynomial(dim, total)


def layout_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Fixed-width table with a header rule; deterministic for golden files."""
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def fmt(cells):
        return " | ".join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip()
    rule = "-+-".join("-" * width for width in widths)
    lines = [fmt(headers), rule]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines)
