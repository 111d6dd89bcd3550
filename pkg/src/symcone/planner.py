"""Certificate synthesis for corner and chamber targets.

The planner picks a base class pairing uniformly (some r > 0) against the
vanishing locus, then peels the deficit u = -M^{-1}(r 1 - v) into configuration
smoothings and inflations.  Every candidate move is executed on the actual
engine, so any bound or reinstatement failure simply backtracks; a returned
Certificate has already passed the verifier.  Targets the planner cannot or
will not handle come back as an Unsupported value carrying exact witness data,
never as an exception.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .chambers import Membership, classify
from .errors import (
    DomainError,
    PreconditionError,
    PropertyViolationError,
    SearchFailureError,
    SymconeError,
)
from .lattice import ClassVector, CurveModel, is_negative_definite, neg_inverse
from .moves import (
    Certificate,
    ConfigurationState,
    Inflate,
    Move,
    SmoothAndReinstate,
    SurfaceObject,
    apply_move,
    h_param,
    verify_certificate,
)

# base pairing scales to sweep, largest first: chamber targets need r to
# dominate the wall depth, corner targets need it small enough to keep the
# base Kähler
_R_SWEEP = tuple(Fraction(2) ** p for p in range(8, -17, -1))

_PEEL_BUDGET = 4096


@dataclass(frozen=True)
class DualGraph:
    """Intersection pattern of a curve subset; vertices are curve indices."""

    indices: tuple[int, ...]
    pairings: linalg.Matrix

    def degree(self, position: int) -> int:
        row = self.pairings[position]
        return sum(1 for j, v in enumerate(row) if j != position and v > 0)

    def edge_multiplicities(self) -> tuple[Fraction, ...]:
        n = len(self.indices)
        return tuple(
            self.pairings[i][j]
            for i in range(n)
            for j in range(i + 1, n)
            if self.pairings[i][j] > 0
        )

    def components(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.indices)
        unseen = set(range(n))
        parts = []
        while unseen:
            start = min(unseen)
            comp = {start}
            frontier = [start]
            while frontier:
                i = frontier.pop()
                for j in range(n):
                    if j not in comp and self.pairings[i][j] > 0 and i != j:
                        comp.add(j)
                        frontier.append(j)
            unseen -= comp
            parts.append(tuple(self.indices[i] for i in sorted(comp)))
        return tuple(sorted(parts))


def dual_graph(model: CurveModel, indices: Sequence[int] | None = None) -> DualGraph:
    if indices is None:
        idx = tuple(range(len(model.curves)))
    else:
        idx = tuple(sorted(set(int(i) for i in indices)))
    for i in idx:
        if not 0 <= i < len(model.curves):
            raise DomainError(f"curve index {i} out of range")
    return DualGraph(indices=idx, pairings=model.curve_gram(idx))


@dataclass(frozen=True)
class DynkinType:
    series: str  # "A", "D", "E", or "none"
    rank: int

    @property
    def is_ade(self) -> bool:
        return self.series in ("A", "D", "E")

    @property
    def label(self) -> str:
        return f"{self.series}{self.rank}" if self.is_ade else "not-ADE"


def dynkin_classify(graph: DualGraph) -> DynkinType:
    """Total ADE recognition of a dual graph.

    Anything disconnected, multiply-laced, cyclic, or over-branched comes back
    as the "none" series with the vertex count as rank."""
    n = len(graph.indices)
    if n == 0:
        raise PreconditionError("empty graph")
    none = DynkinType(series="none", rank=n)
    if any(m != 1 for m in graph.edge_multiplicities()):
        return none
    if len(graph.components()) != 1:
        return none
    edges = len(graph.edge_multiplicities())
    if edges != n - 1:
        return none  # connected with an extra edge means a cycle
    degrees = [graph.degree(i) for i in range(n)]
    if any(d >= 4 for d in degrees):
        return none
    branches = [i for i, d in enumerate(degrees) if d == 3]
    if len(branches) > 1:
        return none
    if not branches:
        return DynkinType(series="A", rank=n)
    b = branches[0]
    legs = []
    for start in (j for j in range(n) if j != b and graph.pairings[b][j] > 0):
        length = 1
        prev, here = b, start
        while True:
            nxt = [
                j
                for j in range(n)
                if j not in (prev, here) and graph.pairings[here][j] > 0
            ]
            if not nxt:
                break
            prev, here = here, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[0] == 1 and legs[1] == 1:
        return DynkinType(series="D", rank=legs[2] + 3)
    if legs[:2] == [1, 2] and legs[2] in (2, 3, 4):
        return DynkinType(series="E", rank=legs[2] + 4)
    return none


@dataclass(frozen=True)
class Admissible:
    indices: tuple[int, ...]
    minors: tuple[Fraction, ...]


@dataclass(frozen=True)
class Witness:
    """Nonnegative curve combination of nonnegative square: an exact
    obstruction to negative definiteness."""

    indices: tuple[int, ...]
    coefficients: tuple[int, ...]
    square: Fraction


def component_obstruction(model: CurveModel, indices: Sequence[int]):
    """Decide definiteness of a connected curve set, constructively.

    Returns Admissible (with the leading minors) or a Witness.  Small sets are
    settled by exhaustive search over coefficients 0..4; larger ones by a
    greedy square-increasing walk from the all-ones vector."""
    idx = tuple(sorted(set(int(i) for i in indices)))
    if not idx:
        raise PreconditionError("empty curve set")
    graph = dual_graph(model, idx)
    if len(graph.components()) != 1:
        raise PreconditionError("curve set is not connected in the dual graph")
    M = graph.pairings
    minors = linalg.leading_principal_minors(M)
    if is_negative_definite(M):
        return Admissible(indices=idx, minors=minors)
    n = len(idx)

    def square_of(c: Sequence[int]) -> Fraction:
        mc = linalg.mat_vec(M, [Fraction(x) for x in c])
        return sum((Fraction(x) * y for x, y in zip(c, mc)), Fraction(0))

    if n <= 6:
        for c in sorted(itertools.product(range(5), repeat=n), key=lambda c: (sum(c), c)):
            if not any(c):
                continue
            sq = square_of(c)
            if sq >= 0:
                return Witness(indices=idx, coefficients=tuple(c), square=sq)
    w = [1] * n
    for _ in range(200):
        sq = square_of(w)
        if sq >= 0:
            return Witness(indices=idx, coefficients=tuple(w), square=sq)
        mw = linalg.mat_vec(M, [Fraction(x) for x in w])
        best, best_gain = 0, None
        for i in range(n):
            gain = 2 * mw[i] + M[i][i]
            if best_gain is None or gain > best_gain:
                best, best_gain = i, gain
        w[best] += 1
    raise SearchFailureError(
        f"no witness found although the set is not negative definite; minors {minors}"
    )


@dataclass(frozen=True)
class Unsupported:
    """Planner refusal with a reason and exact supporting data."""

    reason: str
    witness: Witness | None = None
    component: tuple[int, ...] | None = None
    detail: tuple[tuple[str, str], ...] = ()


class _PlanFail(Exception):
    """Internal backtracking signal; never escapes the planner."""


def _fresh_state(model: CurveModel, base: ClassVector) -> ConfigurationState:
    objects = tuple(
        SurfaceObject(id=c.label, vector=c.vector, genus=c.genus) for c in model.curves
    )
    return ConfigurationState(lattice=model.lattice, current_class=base, objects=objects)


class _Peeler:
    """Depth-first decomposition of the deficit vector into engine moves."""

    def __init__(self, model: CurveModel):
        self.model = model
        self.nodes = 0
        self.counter = 0

    def _fresh_id(self, state: ConfigurationState) -> str:
        existing = {o.id for o in state.objects}
        while True:
            self.counter += 1
            candidate = f"~s{self.counter}"
            if candidate not in existing:
                return candidate

    def peel(
        self, state: ConfigurationState, u: dict[int, Fraction]
    ) -> tuple[ConfigurationState, list[Move]]:
        if not u:
            return state, []
        self.nodes += 1
        if self.nodes > _PEEL_BUDGET:
            raise _PlanFail("peel budget exhausted")
        parts = dual_graph(self.model, tuple(u)).components()
        if len(parts) > 1:
            moves: list[Move] = []
            for part in parts:
                state, part_moves = self.peel(state, {i: u[i] for i in part})
                moves.extend(part_moves)
            return state, moves
        for cand in self._candidates(parts[0]):
            try:
                state2, moves2, u2 = self._execute(state, u, cand)
                state3, rest = self.peel(state2, u2)
            except (_PlanFail, SymconeError):
                continue
            return state3, moves2 + rest
        raise _PlanFail("no peel candidate applies")

    def _candidates(self, support: tuple[int, ...]) -> list[dict[int, int]]:
        if len(support) == 1:
            return [{support[0]: 1}]
        out: list[dict[int, int]] = []
        seen: set[tuple] = set()

        def push(c: dict[int, int]) -> None:
            key = tuple(sorted(c.items()))
            if key not in seen:
                seen.add(key)
                out.append(c)

        push({i: 1 for i in support})
        for x in support:
            boosted = {i: 1 for i in support}
            boosted[x] = 2
            push(boosted)
        M = self.model.curve_gram(support)
        inv = neg_inverse(M)
        n = len(support)
        for j in range(n):
            column = [inv[i][j] for i in range(n)]
            scale = math.lcm(*[f.denominator for f in column])
            ints = [int(f * scale) for f in column]
            g = math.gcd(*ints)
            ints = [x // g for x in ints]
            # configurations can carry a constituent at most twice (the
            # doubled copy rides a pre-smoothing), so cap coefficients at 2
            if all(0 < x <= 2 for x in ints):
                push({support[i]: ints[i] for i in range(n)})
        for j in support:
            push({j: 1})
        return out

    def _execute(
        self,
        state: ConfigurationState,
        u: dict[int, Fraction],
        cand: dict[int, int],
    ) -> tuple[ConfigurationState, list[Move], dict[int, Fraction]]:
        amplitude = min(u[i] / c for i, c in cand.items())
        if amplitude <= 0:
            raise _PlanFail("non-positive amplitude")
        exhausted = {i for i, c in cand.items() if u[i] == amplitude * c}
        curves = self.model.curves
        moves: list[Move] = []
        if len(cand) == 1:
            (index,) = cand
            move = Inflate(curves[index].label, amplitude)
            state = apply_move(state, move)
            moves.append(move)
        else:
            doubled = sorted(i for i, c in cand.items() if c == 2)
            used: set[int] = set()
            gather: list[str] = []
            for x in doubled:
                z = self._find_partner(x, cand, exhausted, used)
                used.add(z)
                merged = self._fresh_id(state)
                move = SmoothAndReinstate(
                    (curves[z].label, curves[x].label), (curves[x].label,), merged
                )
                state = apply_move(state, move)
                moves.append(move)
                gather.append(merged)
            for i in sorted(cand):
                if i not in used:
                    gather.append(curves[i].label)
            survivors = tuple(
                curves[i].label for i in sorted(cand) if i not in exhausted
            )
            merged = self._fresh_id(state)
            move = SmoothAndReinstate(tuple(gather), survivors, merged)
            state = apply_move(state, move)
            moves.append(move)
            move = Inflate(merged, amplitude)
            state = apply_move(state, move)
            moves.append(move)
        remaining: dict[int, Fraction] = {}
        for i, value in u.items():
            rest = value - amplitude * cand.get(i, 0)
            if rest < 0:
                raise _PlanFail("peel overshoot")
            if rest > 0:
                remaining[i] = rest
        return state, moves, remaining

    def _find_partner(
        self,
        x: int,
        cand: dict[int, int],
        exhausted: set[int],
        used: set[int],
    ) -> int:
        # a doubled constituent needs an exhausted neighbor meeting it at
        # least -x^2 times: the pre-smoothing merges the pair and reinstates
        # the doubled curve, yielding two homologous copies in the gather
        lat = self.model.lattice
        xv = self.model.curves[x].vector
        need = -lat.square(xv)
        for z in sorted(cand):
            if z == x or cand[z] != 1 or z not in exhausted or z in used:
                continue
            if lat.pair(xv, self.model.curves[z].vector) >= need:
                return z
        raise _PlanFail("no partner for a doubled constituent")


def _all_minus_two_spheres(model: CurveModel, comp: tuple[int, ...]) -> bool:
    lat = model.lattice
    return all(
        model.curves[i].genus == 0 and lat.square(model.curves[i].vector) == -2
        for i in comp
    )


def _plan_single_curve(
    model: CurveModel,
    target: ClassVector,
    index: int,
    pairing: Fraction,
    annotations: Sequence[str],
):
    lat = model.lattice
    curve = model.curves[index]
    k = int(-lat.square(curve.vector))
    h = h_param(k, curve.genus)
    # the single inflation t must satisfy t (2k - h) > 2|v|; (-1)-spheres
    # (2k = h) were already refused by the caller
    low = 2 * (-pairing) / (2 * k - h) if pairing < 0 else Fraction(0)
    if pairing < 0 and h != k:
        depth = 4 * pairing * pairing
        room = (k - 1) * (k - 1) * lat.square(target)
        if depth >= room:
            return Unsupported(
                reason="chamber wall out of reach: 4 v^2 >= (k-1)^2 alpha^2",
                component=(index,),
                detail=(
                    ("4 v^2", str(depth)),
                    ("(k-1)^2 alpha^2", str(room)),
                    ("pairing", str(pairing)),
                ),
            )
    t = low + 1
    for _ in range(64):
        base = target - curve.vector.scale(t)
        if model.is_interior_kahler(base):
            cert = Certificate(
                model=model,
                base_class=base,
                moves=(Inflate(curve.label, t),),
                target_class=target,
                annotations=tuple(annotations),
            )
            report = verify_certificate(cert)
            if report.passed:
                return cert
        t = (t + low) / 2
    return Unsupported(
        reason="no verifiable inflation amplitude found",
        component=(index,),
        detail=(("window start", str(low)),),
    )


def _sweep_plan(
    model: CurveModel,
    target: ClassVector,
    comps: tuple[tuple[int, ...], ...],
    annotations: Sequence[str],
):
    lat = model.lattice
    for r in _R_SWEEP:
        u: dict[int, Fraction] = {}
        feasible = True
        for comp in comps:
            M = model.curve_gram(comp)
            rhs = [r - lat.pair(target, model.curves[i].vector) for i in comp]
            shift = linalg.mat_vec(neg_inverse(M), rhs)
            if any(x <= 0 for x in shift):
                feasible = False
                break
            for i, x in zip(comp, shift):
                u[i] = x
        if not feasible:
            continue
        base = target
        for i, x in sorted(u.items()):
            base = base - model.curves[i].vector.scale(x)
        if not model.is_interior_kahler(base):
            continue
        peeler = _Peeler(model)
        try:
            state, moves = peeler.peel(_fresh_state(model, base), dict(u))
        except _PlanFail:
            continue
        if state.current_class != target:
            continue
        notes = list(annotations)
        if any(
            isinstance(m, SmoothAndReinstate) and len(m.reinstate_ids) > 1
            for m in moves
        ):
            notes.insert(0, "iterated-disjoin")
        cert = Certificate(
            model=model,
            base_class=base,
            moves=tuple(moves),
            target_class=target,
            annotations=tuple(notes),
        )
        report = verify_certificate(cert)
        if report.passed:
            return cert
    return Unsupported(
        reason="no admissible base scale produced a verifiable plan",
        detail=(("scales tried", str(len(_R_SWEEP))),),
    )


def plan(model: CurveModel, target: ClassVector):
    """Produce a verified Certificate for the target class, or Unsupported.

    Interior classes get the empty certificate.  Corner and chamber targets go
    through the uniform-base peel; mixed boundaries, indefinite vanishing loci
    (with witness), E-type sphere trees, and (-1)-sphere walls are refused
    with their exact obstruction data."""
    if not model.completeness_assumed:
        return Unsupported(
            reason="model does not assume completeness; bases cannot be certified Kähler"
        )
    cls = classify(model, target)
    if cls.membership is Membership.INTERIOR_KAHLER:
        cert = Certificate(model=model, base_class=target, moves=(), target_class=target)
        report = verify_certificate(cert)
        if not report.passed:
            raise PropertyViolationError(
                f"trivial certificate failed verification: {report.first_failure}"
            )
        return cert
    if cls.membership is Membership.MIXED_BOUNDARY:
        negative = ", ".join(
            model.curves[i].label for i, p in enumerate(cls.pairings) if p < 0
        )
        vanishing = ", ".join(
            model.curves[i].label for i, p in enumerate(cls.pairings) if p == 0
        )
        return Unsupported(
            reason="mixed boundary: target both vanishes and goes negative on curves",
            detail=(("negative on", negative), ("zero on", vanishing)),
        )
    G = cls.descriptor.curve_indices
    comps = dual_graph(model, G).components()
    if not cls.descriptor.admissible:
        for comp in comps:
            found = component_obstruction(model, comp)
            if isinstance(found, Witness):
                return Unsupported(
                    reason="vanishing locus is not negative definite",
                    witness=found,
                    component=comp,
                    detail=(("witness square", str(found.square)),),
                )
        raise PropertyViolationError(
            "locus flagged inadmissible but every component is negative definite"
        )
    annotations: list[str] = []
    for comp in comps:
        if _all_minus_two_spheres(model, comp):
            kind = dynkin_classify(dual_graph(model, comp))
            if kind.series == "E":
                return Unsupported(
                    reason=f"{kind.label} configuration of (-2)-spheres is excluded",
                    component=comp,
                )
            if kind.series == "D" and "extrapolated" not in annotations:
                annotations.append("extrapolated")
    for comp in comps:
        if len(comp) == 1:
            c = model.curves[comp[0]]
            if c.genus == 0 and model.lattice.square(c.vector) == -1:
                return Unsupported(
                    reason="(-1)-sphere wall: the required amplitude equals the open bound 2A/h",
                    component=comp,
                )
    if len(comps) == 1 and len(comps[0]) == 1:
        only = comps[0][0]
        return _plan_single_curve(model, target, only, cls.pairings[only], annotations)
    return _sweep_plan(model, target, comps, annotations)
