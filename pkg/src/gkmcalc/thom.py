"""Thom classes by path sums and by induction, intersection numbers,
pairings and structure constants.

For a polarized GKM graph the Thom class of a vertex p evaluates at q to a
sum over ascending paths from p to q.  Each summand is a rational function
(quotient of a polynomial by a product of linear forms) but the sum itself
collapses to a polynomial; the reduction succeeding is a checked
postcondition.  Every path weight is computed along two independent routes,

  * the intersection-number form: (-1)^m nu_q (iota_{e_1}/ahat_m)
    prod_{k>=2} iota_{e_k}/(ahat_{k-1} - ahat_k), with
    ahat_k = alpha_{e_k}/alpha_{e_k}(xi), and
  * the transfer form Q(e_m) Q(gamma) rho_{e_1}(nu_p),

and the two must agree exactly; disagreement raises, as a bug trap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    GraphError,
    InternalConsistencyError,
    ReductionError,
    SpanError,
)
from .graph import Polarization
from .symbolic import (
    LinearForm,
    Polynomial,
    RationalExpr,
    rho_form,
    rho_poly,
)

Path = tuple[int, ...]


@dataclass(frozen=True)
class EdgeIntersection:
    """A local intersection number iota_e with its globality flag.

    The value is global (equal to a cross-section integral, hence a
    polynomial) when the edge is the unique ascending path between its
    endpoints.
    """

    value: RationalExpr
    is_global: bool


class ThomCalculator:
    """All path-sum computations for one polarized graph, with caching."""

    def __init__(self, polarization: Polarization):
        if polarization.phi is None:
            raise GraphError("polarization must carry a Morse function")
        self.pol = polarization
        self.graph = polarization.graph
        self._nu: dict[str, Polynomial] = {}
        self._nu_factors: dict[str, tuple[LinearForm, ...]] = {}
        self._paths: dict[str, dict[str, list[Path]]] = {}
        self._theta: dict[int, RationalExpr] = {}
        self._q_edge: dict[int, RationalExpr] = {}
        self._q_pair: dict[tuple[int, int], RationalExpr] = {}
        self._classes: dict[str, "CohomologyClass"] = {}
        self._reversed: Optional["ThomCalculator"] = None

    # -- basic data ------------------------------------------------------

    def nu_factors(self, vertex: str) -> tuple[LinearForm, ...]:
        """Weights of the descending edges at a vertex."""
        cached = self._nu_factors.get(vertex)
        if cached is None:
            cached = tuple(self.graph.weight(e) for e in self.pol.descending_out(vertex))
            self._nu_factors[vertex] = cached
        return cached

    def nu_plus(self, vertex: str) -> Polynomial:
        """Leading value: the product of the descending weights."""
        cached = self._nu.get(vertex)
        if cached is None:
            cached = Polynomial.product_of_forms(self.nu_factors(vertex), self.graph.dimension)
            self._nu[vertex] = cached
        return cached

    def reversed_calculator(self) -> "ThomCalculator":
        if self._reversed is None:
            self._reversed = ThomCalculator(self.pol.reversed())
            self._reversed._reversed = self
        return self._reversed

    # -- ascending paths ---------------------------------------------------

    def paths_from(self, start: str) -> dict[str, list[Path]]:
        """All ascending paths out of a vertex, grouped by endpoint.

        Exhaustive depth-first enumeration over the ascending orientation
        (a DAG, so paths never revisit a vertex); the empty path at the
        start vertex is included.
        """
        cached = self._paths.get(start)
        if cached is not None:
            return cached
        result: dict[str, list[Path]] = {}
        trail: list[int] = []

        def visit(vertex: str) -> None:
            result.setdefault(vertex, []).append(tuple(trail))
            for eid in self.pol.ascending_out(vertex):
                trail.append(eid)
                visit(self.graph.edges[eid].target)
                trail.pop()

        visit(start)
        self._paths[start] = result
        return result

    def ascending_paths(self, p: str, q: str) -> list[Path]:
        return self.paths_from(p).get(q, [])

    def has_unique_path(self, eid: int) -> bool:
        """True when the edge is the only ascending path joining its endpoints."""
        edge = self.graph.edges[eid]
        return len(self.ascending_paths(edge.source, edge.target)) == 1

    # -- intersection numbers ----------------------------------------------

    def theta(self, eid: int) -> RationalExpr:
        """The edge ratio Theta_pq in connection-cancelled form.

        With E_pq the descending edges at p whose connection image is not
        descending at q, and E_qp the descending edges at q (other than the
        reversal) whose image under the reverse connection is not descending
        at p, Theta = rho_e(prod E_pq) / rho_e(prod E_qp).  Orientation
        reversal leaves it unchanged.
        """
        cached = self._theta.get(eid)
        if cached is not None:
            return cached
        if not self.pol.ascending(eid):
            value = self.theta(self.graph.reverse(eid))
        else:
            graph, pol = self.graph, self.pol
            edge = graph.edges[eid]
            rev = edge.reverse_id
            p_desc = set(pol.descending_out(edge.source))
            q_desc = set(pol.descending_out(edge.target))
            numerator_edges = [
                e for e in p_desc if graph.theta(eid, e) not in q_desc
            ]
            denominator_edges = [
                e
                for e in q_desc
                if e != rev and graph.theta(rev, e) not in p_desc
            ]
            value = self._rho_ratio(edge.weight, numerator_edges, denominator_edges)
        self._theta[eid] = value
        return value

    def theta_uncancelled(self, eid: int) -> RationalExpr:
        """The raw quotient over all descending edges, before cancellation."""
        graph, pol = self.graph, self.pol
        if not pol.ascending(eid):
            return self.theta_uncancelled(graph.reverse(eid))
        edge = graph.edges[eid]
        numerator_edges = list(pol.descending_out(edge.source))
        denominator_edges = [
            e for e in pol.descending_out(edge.target) if e != edge.reverse_id
        ]
        return self._rho_ratio(edge.weight, numerator_edges, denominator_edges)

    def _rho_ratio(
        self, weight: LinearForm, numerator_edges: Iterable[int], denominator_edges: Iterable[int]
    ) -> RationalExpr:
        xi = self.pol.xi
        dim = self.graph.dimension
        numerator = Polynomial.product_of_forms(
            (rho_form(self.graph.weight(e), weight, xi) for e in numerator_edges), dim
        )
        denominator = [
            rho_form(self.graph.weight(e), weight, xi) for e in denominator_edges
        ]
        return RationalExpr.make(numerator, denominator)

    def iota(self, eid: int) -> EdgeIntersection:
        """Local intersection number Theta_pq / alpha_e(xi)."""
        value = self.theta(eid).div_scalar(self.pol.pairings[eid])
        return EdgeIntersection(value, self.has_unique_path(eid))

    # -- transfer weights -----------------------------------------------------

    def q_edge(self, eid: int) -> RationalExpr:
        """Q(e): product of the other descending weights at the head of e,
        over its own projection along e."""
        cached = self._q_edge.get(eid)
        if cached is None:
            graph = self.graph
            edge = graph.edges[eid]
            others = [
                graph.weight(e)
                for e in self.pol.descending_out(edge.target)
                if e != edge.reverse_id
            ]
            numerator = Polynomial.product_of_forms(others, graph.dimension)
            denominator = [rho_form(w, edge.weight, self.pol.xi) for w in others]
            cached = RationalExpr.make(numerator, denominator)
            self._q_edge[eid] = cached
        return cached

    def q_pair(self, first: int, second: int) -> RationalExpr:
        """Q(e, e') for consecutive ascending edges meeting at a vertex."""
        key = (first, second)
        cached = self._q_pair.get(key)
        if cached is None:
            graph = self.graph
            head = graph.edges[first].target
            if graph.edges[second].source != head:
                raise GraphError("edges are not consecutive")
            others = [
                graph.weight(e)
                for e in self.pol.descending_out(head)
                if e != graph.edges[first].reverse_id
            ]
            xi = self.pol.xi
            numerator = Polynomial.product_of_forms(
                (rho_form(w, graph.weight(second), xi) for w in others), graph.dimension
            )
            denominator = [rho_form(w, graph.weight(first), xi) for w in others]
            cached = RationalExpr.make(numerator, denominator)
            self._q_pair[key] = cached
        return cached

    # -- path weights ------------------------------------------------------

    def _weight_by_intersections(self, path: Path) -> RationalExpr:
        graph, pol = self.graph, self.pol
        m = len(path)
        q = graph.edges[path[-1]].target
        hats = [graph.weight(e).scale(1 / pol.pairings[e]) for e in path]
        total = RationalExpr.from_polynomial(self.nu_plus(q))
        if m % 2 == 1:
            total = -total
        total = total * self.iota(path[0]).value
        total = total.div_form(hats[-1])
        for k in range(1, m):
            total = total * self.iota(path[k]).value
            total = total.div_form(hats[k - 1] - hats[k])
        return total

    def _weight_by_transfer(self, path: Path) -> RationalExpr:
        graph = self.graph
        start = graph.edges[path[0]].source
        seed = Polynomial.product_of_forms(
            (rho_form(w, graph.weight(path[0]), self.pol.xi) for w in self.nu_factors(start)),
            graph.dimension,
        )
        total = self.q_edge(path[-1]) * seed
        for k in range(1, len(path)):
            total = total * self.q_pair(path[k - 1], path[k])
        return total

    def path_weight(self, path: Sequence[int]) -> RationalExpr:
        """The contribution E(gamma) of a nonempty ascending path.

        Both evaluation routes are computed and compared; they are distinct
        rearrangements of the same product, so any disagreement means a bug
        in one of them.
        """
        path = tuple(path)
        if not path:
            raise ValueError("path weight of the empty path is the leading value nu_p")
        for previous, current in zip(path, path[1:]):
            if self.graph.edges[previous].target != self.graph.edges[current].source:
                raise GraphError("edges do not form a path")
        for eid in path:
            if not self.pol.ascending(eid):
                raise GraphError(f"edge {self.graph.edges[eid].key()} is not ascending")
        by_intersections = self._weight_by_intersections(path)
        by_transfer = self._weight_by_transfer(path)
        if by_intersections != by_transfer and not by_intersections.equals(by_transfer):
            raise InternalConsistencyError(
                f"path weight routes disagree on {[self.graph.edges[e].key() for e in path]}: "
                f"{by_intersections} vs {by_transfer}"
            )
        return by_intersections

    def path_sum(self, start: str, end: str) -> RationalExpr:
        """Sum of E(gamma) over ascending paths start -> end.

        The empty path at the start vertex contributes the leading value, so
        path_sum(p, p) = nu_p; unreachable vertices give zero.
        """
        total = RationalExpr.zero(self.graph.dimension)
        for path in self.ascending_paths(start, end):
            if path:
                total = total + self.path_weight(path)
            else:
                total = total + self.nu_plus(start)
        return total

    # -- Thom classes ----------------------------------------------------------

    def thom_class_paths(self, base: str) -> "CohomologyClass":
        """Thom class by the path-sum formula, with checked postconditions.

        The value at every vertex must reduce to a polynomial, the support
        is the flow-up of the base, the value at the base is the product of
        its descending weights, and every value is homogeneous of degree
        sigma_base.
        """
        from .cohomology import CohomologyClass

        cached = self._classes.get(base)
        if cached is not None:
            return cached
        graph = self.graph
        sigma = self.pol.sigma[base]
        values = {v: Polynomial.zero(graph.dimension) for v in graph.vertices}
        for vertex in self.paths_from(base):
            total = self.path_sum(base, vertex)
            if not total.is_polynomial:
                raise ReductionError(
                    f"path sum at {graph.label(vertex)} did not reduce to a polynomial: "
                    f"{total.render()}"
                )
            value = total.to_polynomial()
            if value.homogeneous_degree() not in (-1, sigma):
                raise InternalConsistencyError(
                    f"value at {graph.label(vertex)} is not homogeneous of degree {sigma}"
                )
            values[vertex] = value
        if values[base] != self.nu_plus(base):
            raise InternalConsistencyError(
                f"leading value at {graph.label(base)} is not the descending product"
            )
        result = CohomologyClass(graph, values, degree=sigma)
        self._classes[base] = result
        return result

    def thom_class_inductive(self, base: str) -> "CohomologyClass":
        """Thom class by interpolation over descending edges, lowest level first.

        At each vertex above the base the value is the unique polynomial
        congruent to the already-known value modulo each descending weight;
        it is produced by the explicit interpolation formula
        sum_j (prod_{k != j} alpha_k / rho_j(prod_{k != j} alpha_k)) f_j and
        the congruences are re-checked exactly.
        """
        from .cohomology import CohomologyClass

        graph, pol = self.graph, self.pol
        dim = graph.dimension
        base_level = pol.level(base)
        values: dict[str, Polynomial] = {}
        for vertex in pol.vertices_by_level():
            if pol.level(vertex) < base_level:
                values[vertex] = Polynomial.zero(dim)
                continue
            if vertex == base:
                values[vertex] = self.nu_plus(base)
                continue
            descending = pol.descending_out(vertex)
            if not descending:
                values[vertex] = Polynomial.zero(dim)
                continue
            weights = [graph.weight(e) for e in descending]
            below = [graph.edges[e].target for e in descending]
            psi = RationalExpr.zero(dim)
            for j, eid in enumerate(descending):
                others = [w for k, w in enumerate(weights) if k != j]
                numerator = Polynomial.product_of_forms(others, dim) * rho_poly(
                    values[below[j]], weights[j], pol.xi
                )
                denominator = [rho_form(w, weights[j], pol.xi) for w in others]
                psi = psi + RationalExpr.make(numerator, denominator)
            if not psi.is_polynomial:
                raise ReductionError(
                    f"interpolation at {graph.label(vertex)} did not reduce: {psi.render()}"
                )
            value = psi.to_polynomial()
            for j, eid in enumerate(descending):
                if (value - values[below[j]]).divide_linear(weights[j]) is None:
                    raise InternalConsistencyError(
                        f"congruence fails along {graph.edges[eid].key()}"
                    )
            values[vertex] = value
        return CohomologyClass(graph, values, degree=pol.sigma[base])

    def thom_class_minus(self, base: str) -> "CohomologyClass":
        """Descending Thom class: the path-sum class for the reversed polarization."""
        return self.reversed_calculator().thom_class_paths(base)

    def thom_basis(self) -> dict[str, "CohomologyClass"]:
        return {v: self.thom_class_paths(v) for v in self.pol.vertices_by_level()}

    # -- pairings and structure constants ------------------------------------

    def pairing(self, p: str, q: str) -> Polynomial:
        """Localization integral of tau_p^+ tau_q^-; the identity matrix when
        the Morse function is self-indexing."""
        from .cohomology import integrate

        return integrate(self.thom_class_paths(p) * self.thom_class_minus(q))

    def pairing_matrix(self) -> dict[tuple[str, str], Polynomial]:
        order = self.pol.vertices_by_level()
        return {(p, q): self.pairing(p, q) for p in order for q in order}

    def structure_constant(self, p: str, q: str, r: str) -> Polynomial:
        """c_pqr as a sum over triple path configurations.

        Sums delta_t times the three path sums (p ascending to t, q
        ascending to t, r descending to t) over all vertices t, and checks
        the result against the direct localization integral of
        tau_p^+ tau_q^+ tau_r^-.
        """
        from .cohomology import integrate

        graph = self.graph
        rev = self.reversed_calculator()
        total = RationalExpr.zero(graph.dimension)
        for t in graph.vertices:
            up_p = self.path_sum(p, t)
            if up_p.is_zero:
                continue
            up_q = self.path_sum(q, t)
            if up_q.is_zero:
                continue
            down_r = rev.path_sum(r, t)
            if down_r.is_zero:
                continue
            volume = [graph.weight(e) for e in graph.out_edges(t)]
            total = total + (up_p * up_q * down_r).div_forms(volume)
        if not total.is_polynomial:
            raise ReductionError(f"configuration sum for ({p},{q},{r}) did not reduce")
        value = total.to_polynomial()
        direct = integrate(
            self.thom_class_paths(p) * self.thom_class_paths(q) * self.thom_class_minus(r)
        )
        if value != direct:
            raise InternalConsistencyError(
                f"configuration sum and localization integral disagree for ({p},{q},{r})"
            )
        return value

    def expand_in_thom_basis(self, f: "CohomologyClass") -> dict[str, Polynomial]:
        """Coefficients c_r with f = sum c_r tau_r^+, by triangular peeling.

        Vertices are processed in increasing Morse order; at each vertex the
        residual value must be exactly divisible by the leading value, else
        the class is not in the span and the offending vertex is reported.
        """
        if f.graph is not self.graph:
            raise GraphError("class lives on a different graph")
        order = self.pol.vertices_by_level()
        coefficients: dict[str, Polynomial] = {}
        residual = {v: f.values[v] for v in self.graph.vertices}
        for vertex in order:
            value = residual[vertex]
            if value.is_zero:
                coefficients[vertex] = value
                continue
            quotient = value
            for factor in self.nu_factors(vertex):
                quotient = quotient.divide_linear(factor)
                if quotient is None:
                    raise SpanError(
                        f"residual at {self.graph.label(vertex)} is not divisible by the "
                        "leading value; class is outside the Thom span"
                    )
            coefficients[vertex] = quotient
            if not quotient.is_zero:
                tau = self.thom_class_paths(vertex)
                for w in self.paths_from(vertex):
                    residual[w] = residual[w] - quotient * tau.values[w]
        for vertex in order:
            if not residual[vertex].is_zero:
                raise SpanError(f"expansion does not reconstruct the class at {vertex}")
        return coefficients

    def multiplication_constants(self, p: str, q: str) -> dict[str, Polynomial]:
        """Coefficients c^r_pq of tau_p^+ tau_q^+ in the Thom basis."""
        return self.expand_in_thom_basis(self.thom_class_paths(p) * self.thom_class_paths(q))


# ---------------------------------------------------------------------------
# nearby-path cancellation configurations


@dataclass(frozen=True)
class TriangleConfiguration:
    """A triangle p -> r -> q with diagonal p -> q inside a larger graph."""

    p: str
    r: str
    q: str
    diagonal: int  # edge p -> q
    lower: int  # edge p -> r
    upper: int  # edge r -> q


def nearby_path_configurations(calc: ThomCalculator) -> list[TriangleConfiguration]:
    """Triangles where the index jumps by two and the two-step path is longest.

    These are the configurations in which the weights of the one-edge path
    and the two-edge path cancel jointly: their sum is nu_q divided by the
    product of the diagonal weight and the upper weight.  The compatibility
    of the connection forces the diagonal weight to be the sum of the two
    side weights.
    """
    graph, pol = calc.graph, calc.pol
    configurations = []
    for diagonal in (e.eid for e in graph.edges if pol.ascending(e.eid)):
        p = graph.edges[diagonal].source
        q = graph.edges[diagonal].target
        if pol.sigma[q] != pol.sigma[p] + 2:
            continue
        longest = max(len(path) for path in calc.ascending_paths(p, q))
        if longest != 2:
            continue
        for lower in pol.ascending_out(p):
            r = graph.edges[lower].target
            upper = graph.edge_between(r, q)
            if upper is None or not pol.ascending(upper):
                continue
            # the triangle must be closed under the connection
            if graph.theta(diagonal, lower) != graph.reverse(upper):
                continue
            if graph.theta(lower, diagonal) != upper:
                continue
            configurations.append(TriangleConfiguration(p, r, q, diagonal, lower, upper))
    return configurations


def nearby_path_identity(calc: ThomCalculator, config: TriangleConfiguration) -> bool:
    """Exact check of E(diagonal) + E(two-step) = nu_q/(alpha_e alpha_e'')."""
    graph = calc.graph
    weight_sum_ok = (
        graph.weight(config.diagonal)
        - graph.weight(config.lower)
        - graph.weight(config.upper)
    ).is_zero
    if not weight_sum_ok:
        return False
    left = calc.path_weight((config.diagonal,)) + calc.path_weight(
        (config.lower, config.upper)
    )
    right = RationalExpr.make(
        calc.nu_plus(config.q),
        [graph.weight(config.diagonal), graph.weight(config.upper)],
    )
    return left == right or left.equals(right)
