"""Cross-section combinatorics: cut-edge sets, single-step flip-flop maps,
their composition, and the Markov property.

A regular level c of the Morse function cuts a set of ascending edges; a
cross-section class assigns to each cut edge a polynomial in the
xi-annihilator subring.  Crossing one critical vertex transfers such a
class by interpolating its values on the disappearing (descending) edges
and re-evaluating on the created (ascending) ones; the matrix of this map
is the identity on persisting edges and, on the new block,

    T(j, a) = rho_{e_a}(prod_{k != j} alpha_{e_k})
            / rho_{e_j}(prod_{k != j} alpha_{e_k})

over the descending edges e_k at the crossed vertex.  Columns sum to one
exactly.  Composites equal the ascending-path weighted sums with weights
Q(gamma); both are computed and compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import GraphError, PolarizationError, ReductionError
from .cohomology import CrossSectionClass, cut_edge_ids
from .graph import Polarization
from .symbolic import (
    Polynomial,
    RationalExpr,
    RationalLike,
    rat,
    rho_form,
    rho_poly,
)
from .thom import ThomCalculator


@dataclass(frozen=True)
class CrossSection:
    """The set of ascending edges cut by a regular level."""

    polarization: Polarization
    level: Fraction
    cut: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.cut)


def cross_section(polarization: Polarization, c: RationalLike) -> CrossSection:
    level = rat(c)
    return CrossSection(polarization, level, cut_edge_ids(polarization, level))


def chamber_levels(polarization: Polarization) -> list[Fraction]:
    """Canonical regular values: midpoints between consecutive critical
    levels, plus one value below the minimum and one above the maximum."""
    critical = polarization.critical_levels()
    levels = [critical[0] - 1]
    for low, high in zip(critical, critical[1:]):
        levels.append((low + high) / 2)
    levels.append(critical[-1] + 1)
    return levels


def crossed_vertices(polarization: Polarization, c: Fraction, c_prime: Fraction) -> list[str]:
    return [
        v
        for v in polarization.vertices_by_level()
        if c < polarization.level(v) < c_prime
    ]


class TransferMatrix:
    """Sparse matrix of a transfer map between two cross-sections.

    Entries are indexed (source cut edge, target cut edge); application is
    f'(w) = sum_v T(v, w) f(v), so the Markov property is that every column
    sums to one.
    """

    def __init__(
        self,
        source: CrossSection,
        target: CrossSection,
        entries: Mapping[tuple[int, int], RationalExpr],
    ):
        self.source = source
        self.target = target
        self.entries = dict(entries)

    def entry(self, v: int, w: int) -> RationalExpr:
        value = self.entries.get((v, w))
        if value is None:
            return RationalExpr.zero(self.source.polarization.graph.dimension)
        return value

    def column_sum(self, w: int) -> RationalExpr:
        dim = self.source.polarization.graph.dimension
        total = RationalExpr.zero(dim)
        for v in self.source.cut:
            total = total + self.entry(v, w)
        return total

    def is_markov(self) -> bool:
        one = RationalExpr.one(self.source.polarization.graph.dimension)
        return all(self.column_sum(w) == one for w in self.target.cut)

    def compose(self, later: "TransferMatrix") -> "TransferMatrix":
        """later o self: first apply self, then later."""
        if later.source.cut != self.target.cut:
            raise GraphError("transfer matrices are not composable")
        dim = self.source.polarization.graph.dimension
        entries: dict[tuple[int, int], RationalExpr] = {}
        for (v, u), first in self.entries.items():
            if first.is_zero:
                continue
            for w in later.target.cut:
                second = later.entries.get((u, w))
                if second is None or second.is_zero:
                    continue
                key = (v, w)
                current = entries.get(key)
                product = first * second
                entries[key] = product if current is None else current + product
        return TransferMatrix(self.source, later.target, entries)

    def apply(self, F: CrossSectionClass) -> CrossSectionClass:
        if tuple(sorted(F.values)) != tuple(sorted(self.source.cut)):
            raise GraphError("class does not live on the source cross-section")
        dim = self.source.polarization.graph.dimension
        values: dict[int, Polynomial] = {}
        for w in self.target.cut:
            total = RationalExpr.zero(dim)
            for v in self.source.cut:
                entry = self.entries.get((v, w))
                if entry is None or entry.is_zero:
                    continue
                total = total + entry * F.values[v]
            if not total.is_polynomial:
                raise ReductionError(
                    "transferred value did not reduce to a polynomial; "
                    "class is outside the admitted image"
                )
            values[w] = total.to_polynomial()
        return CrossSectionClass(self.source.polarization, self.target.level, values)

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        graph = self.source.polarization.graph
        lines = [
            f"transfer {self.source.level} -> {self.target.level}: "
            f"{len(self.source.cut)} x {len(self.target.cut)} cut edges"
        ]
        for w in self.target.cut:
            for v in self.source.cut:
                value = self.entries.get((v, w))
                if value is None or value.is_zero:
                    continue
                lines.append(
                    f"  T[{graph.edges[v].key()} -> {graph.edges[w].key()}] = "
                    f"{value.render(names)}"
                )
        return "\n".join(lines)


def single_step_transfer(
    polarization: Polarization, c: RationalLike, c_prime: RationalLike
) -> TransferMatrix:
    """Transfer across exactly one critical vertex.

    Persisting edges map by the identity.  When the crossed vertex has
    index zero there is no descending block and the created edges receive
    no entries (the seed of a new class is supplied externally); otherwise
    the created block is the interpolation quotient above and its columns
    sum to one exactly.
    """
    low, high = rat(c), rat(c_prime)
    if low >= high:
        raise PolarizationError("need c < c'")
    source = cross_section(polarization, low)
    target = cross_section(polarization, high)
    crossed = crossed_vertices(polarization, low, high)
    if len(crossed) != 1:
        raise PolarizationError(
            f"expected exactly one critical vertex in ({low}, {high}), found {crossed}"
        )
    vertex = crossed[0]
    graph = polarization.graph
    dim = graph.dimension
    one = RationalExpr.one(dim)
    entries: dict[tuple[int, int], RationalExpr] = {}
    persisting = set(source.cut) & set(target.cut)
    for v in persisting:
        entries[(v, v)] = one
    descending = polarization.descending_out(vertex)
    ascending = polarization.ascending_out(vertex)
    weights = [graph.weight(e) for e in descending]
    xi = polarization.xi
    for j, down in enumerate(descending):
        row_edge = graph.reverse(down)  # the cut edge arriving at the vertex
        others = [w for k, w in enumerate(weights) if k != j]
        denominator = [rho_form(w, weights[j], xi) for w in others]
        for up in ascending:
            numerator = Polynomial.product_of_forms(
                (rho_form(w, graph.weight(up), xi) for w in others), dim
            )
            entries[(row_edge, up)] = RationalExpr.make(numerator, denominator)
    return TransferMatrix(source, target, entries)


def _transfer_by_paths(
    polarization: Polarization, source: CrossSection, target: CrossSection
) -> dict[tuple[int, int], RationalExpr]:
    """Entries as ascending-path sums T(v, w) = sum_gamma Q(gamma).

    Paths start with the cut edge v, switch only at vertices strictly
    between the two levels, and end with an edge crossing the upper level;
    Q(gamma) multiplies the transfer weights of consecutive edge pairs.
    """
    graph = polarization.graph
    calc = ThomCalculator(polarization)
    low, high = source.level, target.level
    dim = graph.dimension
    entries: dict[tuple[int, int], RationalExpr] = {}

    def record(v: int, w: int, value: RationalExpr) -> None:
        current = entries.get((v, w))
        entries[(v, w)] = value if current is None else current + value

    def extend(start: int, eid: int, weight: RationalExpr) -> None:
        head = graph.edges[eid].target
        if polarization.level(head) > high:
            record(start, eid, weight)
            return
        for nxt in polarization.ascending_out(head):
            extend(start, nxt, weight * calc.q_pair(eid, nxt))

    for v in source.cut:
        extend(v, v, RationalExpr.one(dim))
    return entries


def compose_transfer(
    polarization: Polarization, c: RationalLike, c_prime: RationalLike
) -> TransferMatrix:
    """Transfer between arbitrary regular values c < c', one vertex at a time.

    The product of the single steps is compared entry-by-entry with the
    ascending-path weighted sum; the two must agree exactly.
    """
    low, high = rat(c), rat(c_prime)
    if low >= high:
        raise PolarizationError("need c < c'")
    for value in (low, high):
        if not polarization.is_regular(value):
            raise PolarizationError(f"{value} is a critical value")
    crossed = crossed_vertices(polarization, low, high)
    if any(polarization.sigma[v] == 0 for v in crossed):
        raise PolarizationError(
            "sweep crosses an index-zero vertex; transfer is only defined above "
            "the minimum (new classes are seeded, not transferred)"
        )
    matrix: Optional[TransferMatrix] = None
    if crossed:
        levels = [low]
        for first, second in zip(crossed, crossed[1:]):
            levels.append((polarization.level(first) + polarization.level(second)) / 2)
        levels.append(high)
        for step_low, step_high in zip(levels, levels[1:]):
            step = single_step_transfer(polarization, step_low, step_high)
            matrix = step if matrix is None else matrix.compose(step)
    if matrix is None:
        source = cross_section(polarization, low)
        target = cross_section(polarization, high)
        one = RationalExpr.one(polarization.graph.dimension)
        matrix = TransferMatrix(source, target, {(v, v): one for v in source.cut})
    _check_against_paths(polarization, matrix)
    return matrix


def _check_against_paths(polarization: Polarization, matrix: TransferMatrix) -> None:
    from .errors import InternalConsistencyError

    expected = _transfer_by_paths(polarization, matrix.source, matrix.target)
    keys = set(expected) | set(matrix.entries)
    graph = polarization.graph
    dim = graph.dimension
    zero = RationalExpr.zero(dim)
    for key in keys:
        left = matrix.entries.get(key, zero)
        right = expected.get(key, zero)
        if left != right and not left.equals(right):
            v, w = key
            raise InternalConsistencyError(
                f"transfer entry ({graph.edges[v].key()}, {graph.edges[w].key()}) "
                f"disagrees with the path sum: {left.render()} vs {right.render()}"
            )


def transport_class(F: CrossSectionClass, c_prime: RationalLike) -> CrossSectionClass:
    """Move a cross-section class to a higher regular level."""
    matrix = compose_transfer(F.polarization, F.level, rat(c_prime))
    return matrix.apply(F)


def transport_with_interpolants(
    F: CrossSectionClass, c_prime: RationalLike
) -> tuple[CrossSectionClass, dict[str, Polynomial]]:
    """Transport one step at a time, returning the flip-flop polynomial at
    each crossed vertex and checking it interpolates the incoming values.

    The polynomial psi at a crossed vertex satisfies rho_{e_j}(psi) = f(v_j)
    for every descending edge e_j, and the outgoing values are
    rho_{e_a}(psi).
    """
    from .errors import InternalConsistencyError

    polarization = F.polarization
    graph = polarization.graph
    dim = graph.dimension
    high = rat(c_prime)
    crossed = crossed_vertices(polarization, F.level, high)
    if any(polarization.sigma[v] == 0 for v in crossed):
        raise PolarizationError("sweep crosses an index-zero vertex")
    interpolants: dict[str, Polynomial] = {}
    current = F
    for position, vertex in enumerate(crossed):
        descending = polarization.descending_out(vertex)
        weights = [graph.weight(e) for e in descending]
        xi = polarization.xi
        psi_sum = RationalExpr.zero(dim)
        for j, down in enumerate(descending):
            cut_edge = graph.reverse(down)
            others = [w for k, w in enumerate(weights) if k != j]
            numerator = Polynomial.product_of_forms(others, dim) * current.values[cut_edge]
            psi_sum = psi_sum + RationalExpr.make(
                numerator, [rho_form(w, weights[j], xi) for w in others]
            )
        if not psi_sum.is_polynomial:
            raise ReductionError(f"flip-flop interpolant at {graph.label(vertex)} not polynomial")
        psi = psi_sum.to_polynomial()
        for j, down in enumerate(descending):
            cut_edge = graph.reverse(down)
            if rho_poly(psi, weights[j], xi) != current.values[cut_edge]:
                raise InternalConsistencyError(
                    f"interpolant at {graph.label(vertex)} misses the value on "
                    f"{graph.edges[cut_edge].key()}"
                )
        interpolants[vertex] = psi
        if position + 1 < len(crossed):
            next_level = (
                polarization.level(vertex) + polarization.level(crossed[position + 1])
            ) / 2
        else:
            next_level = high
        step = single_step_transfer(polarization, current.level, next_level)
        current = step.apply(current)
    return current, interpolants
