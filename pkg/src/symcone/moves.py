"""The inflation move engine.

A ConfigurationState carries a running symplectic class together with the
surface objects currently guaranteed to be symplectic.  Moves transform
states: inflating along a negative-square surface consumes it and shifts the
class by t times its class (0 < t < 2A/h, A its area); inflating along a
nonnegative-square surface is unbounded and keeps the surface; smoothing
replaces a positively-intersecting connected configuration by one embedded
surface in the sum class, optionally re-creating ("reinstating") some
constituents as disjoint parallel copies.

A Certificate packages a base class, a move list, and a target class; the
verifier replays it with exact arithmetic and reports every check.  Failures
are report entries, never exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence, Union

from . import linalg
from .errors import (
    BoundViolationError,
    ConnectivityError,
    LivenessError,
    MalformedInputError,
    PositivityError,
    PreconditionError,
    SymconeError,
    WrongMoveError,
)
from .lattice import ClassVector, CurveModel, IntersectionLattice


def h_param(k: int, g: int) -> int:
    """Inflation denominator: k, except k+1 for spheres of odd square."""
    if not isinstance(k, int) or k <= 0:
        raise PreconditionError("k must be a positive integer")
    if not isinstance(g, int) or g < 0:
        raise MalformedInputError("genus must be a nonnegative integer")
    if g == 0 and k % 2 == 1:
        return k + 1
    return k


@dataclass(frozen=True)
class SurfaceObject:
    id: str
    vector: ClassVector
    genus: int
    alive: bool = True

    def __post_init__(self):
        if not self.vector.is_integral:
            raise MalformedInputError(f"object {self.id!r} must have an integral class")
        if not isinstance(self.genus, int) or self.genus < 0:
            raise MalformedInputError(f"object {self.id!r} needs a nonnegative integer genus")


@dataclass(frozen=True)
class ConfigurationState:
    """Immutable snapshot: running class plus surface objects.

    Geometric intersection numbers between alive objects are the homological
    pairings (the modeling assumption that all intersections are transverse
    and positive); creation rejects states where that would be negative.
    """

    lattice: IntersectionLattice
    current_class: ClassVector
    objects: tuple[SurfaceObject, ...]

    def __post_init__(self):
        ids = [o.id for o in self.objects]
        if len(set(ids)) != len(ids):
            raise MalformedInputError("object ids must be distinct")
        alive = [o for o in self.objects if o.alive]
        gram_vectors = {o.id: self.lattice.gram_vector(o.vector) for o in alive}
        for i, a in enumerate(alive):
            for b in alive[i + 1 :]:
                if linalg.dot(gram_vectors[a.id], b.vector.coords) < 0:
                    raise PositivityError(
                        f"alive objects {a.id!r} and {b.id!r} pair negatively"
                    )

    def object(self, object_id: str) -> SurfaceObject:
        for o in self.objects:
            if o.id == object_id:
                return o
        raise MalformedInputError(f"no object with id {object_id!r}")

    def area(self, object_id: str) -> Fraction:
        return self.lattice.pair(self.current_class, self.object(object_id).vector)

    def geom(self, id_a: str, id_b: str) -> Fraction:
        """Geometric intersection count of two distinct alive objects."""
        a, b = self.object(id_a), self.object(id_b)
        if id_a == id_b:
            raise MalformedInputError("geom is defined between distinct objects")
        if not (a.alive and b.alive):
            raise LivenessError("geom is defined between alive objects")
        return self.lattice.pair(a.vector, b.vector)

    def alive_objects(self) -> tuple[SurfaceObject, ...]:
        return tuple(o for o in self.objects if o.alive)


def _require_alive(state: ConfigurationState, object_id: str) -> SurfaceObject:
    obj = state.object(object_id)
    if not obj.alive:
        raise LivenessError(f"object {object_id!r} is not alive")
    return obj


def inflate(state: ConfigurationState, object_id: str, t) -> ConfigurationState:
    """Add t times the object's class for 0 < t < 2A/h; consumes the object."""
    obj = _require_alive(state, object_id)
    t = linalg.as_fraction(t)
    square = state.lattice.square(obj.vector)
    if square >= 0:
        raise WrongMoveError(
            f"object {object_id!r} has square {square} >= 0; use inflate_nonneg"
        )
    k = -square
    area = state.area(object_id)
    if area <= 0:
        raise PreconditionError(f"object {object_id!r} has area {area} <= 0")
    bound = 2 * area / h_param(int(k), obj.genus)
    if not 0 < t < bound:
        raise BoundViolationError(
            "bound 2A/h violated",
            {"object": object_id, "t": t, "bound": bound},
        )
    new_objects = tuple(
        replace(o, alive=False) if o.id == object_id else o for o in state.objects
    )
    return ConfigurationState(
        lattice=state.lattice,
        current_class=state.current_class + obj.vector.scale(t),
        objects=new_objects,
    )


def inflate_nonneg(state: ConfigurationState, object_id: str, t) -> ConfigurationState:
    """Add t > 0 times a nonnegative-square object's class; the object survives."""
    obj = _require_alive(state, object_id)
    t = linalg.as_fraction(t)
    square = state.lattice.square(obj.vector)
    if square < 0:
        raise WrongMoveError(f"object {object_id!r} has negative square; use inflate")
    if state.area(object_id) <= 0:
        raise PreconditionError(f"object {object_id!r} has non-positive area")
    if t <= 0:
        raise PreconditionError("t must be positive")
    return ConfigurationState(
        lattice=state.lattice,
        current_class=state.current_class + obj.vector.scale(t),
        objects=state.objects,
    )


def smooth_and_reinstate(
    state: ConfigurationState,
    constituent_ids: Sequence[str],
    reinstate_ids: Iterable[str],
    new_id: str,
) -> ConfigurationState:
    """Smooth a connected configuration into one surface in the sum class.

    Each reinstated constituent is re-created as a disjoint parallel copy,
    which requires it to meet the rest of the configuration at least as often
    as minus its square.  The running class is unchanged.
    """
    constituents = list(constituent_ids)
    if not constituents:
        raise MalformedInputError("smoothing needs at least one constituent")
    if len(set(constituents)) != len(constituents):
        raise MalformedInputError("constituent ids must be distinct")
    reinstates = set(reinstate_ids)
    if not reinstates <= set(constituents):
        raise MalformedInputError("reinstated ids must be constituents")
    if any(o.id == new_id for o in state.objects):
        raise MalformedInputError(f"id {new_id!r} is already in use")
    objs = [_require_alive(state, cid) for cid in constituents]
    for o in objs:
        if state.area(o.id) <= 0:
            raise PreconditionError(f"constituent {o.id!r} has non-positive area")

    lat = state.lattice
    n = len(objs)
    pairings = [[lat.pair(objs[i].vector, objs[j].vector) for j in range(n)] for i in range(n)]

    # connectivity of the dual graph under geometric intersections
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(n):
            if j not in seen and pairings[i][j] > 0:
                seen.add(j)
                frontier.append(j)
    if len(seen) != n:
        raise ConnectivityError("constituents do not form a connected configuration")

    total = objs[0].vector
    for o in objs[1:]:
        total = total + o.vector
    for i, o in enumerate(objs):
        if o.id in reinstates:
            count = sum(pairings[i][j] for j in range(n) if j != i)
            need = -lat.square(o.vector)
            if count < need:
                raise PreconditionError(
                    f"cannot reinstate {o.id!r}: meets the rest {count} times, needs {need}"
                )
            if lat.pair(o.vector, total) < 0:
                raise PositivityError(
                    f"reinstated {o.id!r} would pair negatively with the smoothing"
                )

    double_points = sum(pairings[i][j] for i in range(n) for j in range(i + 1, n))
    genus = sum(o.genus for o in objs) + int(double_points) - (n - 1)
    new_object = SurfaceObject(id=new_id, vector=total, genus=genus, alive=True)

    consumed = set(constituents) - reinstates
    new_objects = tuple(
        replace(o, alive=False) if o.id in consumed else o for o in state.objects
    ) + (new_object,)
    # the constructor re-checks that all alive pairings are nonnegative
    return ConfigurationState(
        lattice=state.lattice, current_class=state.current_class, objects=new_objects
    )


@dataclass(frozen=True)
class Inflate:
    object_id: str
    t: Fraction


@dataclass(frozen=True)
class InflateNonneg:
    object_id: str
    t: Fraction


@dataclass(frozen=True)
class SmoothAndReinstate:
    constituent_ids: tuple[str, ...]
    reinstate_ids: tuple[str, ...]
    new_id: str


Move = Union[Inflate, InflateNonneg, SmoothAndReinstate]


def apply_move(state: ConfigurationState, move: Move) -> ConfigurationState:
    if isinstance(move, Inflate):
        return inflate(state, move.object_id, move.t)
    if isinstance(move, InflateNonneg):
        return inflate_nonneg(state, move.object_id, move.t)
    if isinstance(move, SmoothAndReinstate):
        return smooth_and_reinstate(
            state, move.constituent_ids, move.reinstate_ids, move.new_id
        )
    raise MalformedInputError(f"unknown move {move!r}")


def describe_move(move: Move) -> str:
    if isinstance(move, Inflate):
        return f"inflate({move.object_id}, t={move.t})"
    if isinstance(move, InflateNonneg):
        return f"inflate_nonneg({move.object_id}, t={move.t})"
    return (
        f"smooth({', '.join(move.constituent_ids)}; "
        f"reinstate {', '.join(move.reinstate_ids) or '-'}) -> {move.new_id}"
    )


@dataclass(frozen=True)
class Certificate:
    """Replayable proof that the target class admits symplectic forms."""

    model: CurveModel
    base_class: ClassVector
    moves: tuple[Move, ...]
    target_class: ClassVector
    initial_object_ids: tuple[str, ...] | None = None
    annotations: tuple[str, ...] = ()

    def initial_ids(self) -> tuple[str, ...]:
        if self.initial_object_ids is None:
            return self.model.labels
        return self.initial_object_ids


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    entries: tuple[str, ...]
    first_failure: str | None
    final_class: ClassVector | None

    def __str__(self) -> str:
        lines = list(self.entries)
        lines.append("verdict: PASS" if self.passed else f"verdict: FAIL ({self.first_failure})")
        return "\n".join(lines)


def initial_state(cert: Certificate) -> ConfigurationState:
    objects = []
    for label in cert.initial_ids():
        curve = cert.model.curve(label)
        objects.append(SurfaceObject(id=label, vector=curve.vector, genus=curve.genus))
    return ConfigurationState(
        lattice=cert.model.lattice,
        current_class=cert.base_class,
        objects=tuple(objects),
    )


def _area_line(state: ConfigurationState) -> str:
    parts = [f"{o.id}={state.area(o.id)}" for o in state.alive_objects()]
    return "areas: " + (", ".join(parts) if parts else "(none)")


def verify_certificate(cert: Certificate) -> VerificationReport:
    """Replay a certificate move by move with exact arithmetic.

    Total: malformed or failing certificates produce a failed report with the
    first broken check named, never an exception.
    """
    entries: list[str] = []

    def fail(reason: str) -> VerificationReport:
        return VerificationReport(
            passed=False, entries=tuple(entries), first_failure=reason, final_class=None
        )

    model = cert.model
    if not model.completeness_assumed:
        return fail("model does not assume completeness; base cannot be asserted Kähler")
    if model.lattice.reference_class is None:
        return fail("model has no reference class; positive cone is undefined")
    try:
        if not model.lattice.is_positive_cone(cert.base_class):
            return fail("base class is not in the positive cone")
        bad = [
            (model.curves[i].label, v)
            for i, v in enumerate(model.pairings_with(cert.base_class))
            if v <= 0
        ]
        if bad:
            label, value = bad[0]
            return fail(f"base class is not interior-Kähler: pairs {value} with {label!r}")
        entries.append(f"base class Kähler by model predicate; square {model.lattice.square(cert.base_class)}")
        state = initial_state(cert)
        entries.append(_area_line(state))
        for number, move in enumerate(cert.moves, start=1):
            if isinstance(move, SmoothAndReinstate) and len(move.reinstate_ids) > 1:
                entries.append(
                    f"move {number} reinstates {len(move.reinstate_ids)} constituents (iterated-disjoin)"
                )
            try:
                if isinstance(move, Inflate):
                    obj = state.object(move.object_id)
                    if obj.alive and state.lattice.square(obj.vector) < 0:
                        k = -state.lattice.square(obj.vector)
                        bound = 2 * state.area(move.object_id) / h_param(int(k), obj.genus)
                        entries.append(
                            f"move {number}: {describe_move(move)}; bound 2A/h = {bound}"
                        )
                    else:
                        entries.append(f"move {number}: {describe_move(move)}")
                else:
                    entries.append(f"move {number}: {describe_move(move)}")
                state = apply_move(state, move)
            except SymconeError as exc:
                headline = exc.args[0] if exc.args else str(exc)
                return fail(f"{headline} at move {number}")
            entries.append(f"class after move {number}: {tuple(str(c) for c in state.current_class.coords)}")
            entries.append(_area_line(state))
            if not model.lattice.is_positive_cone(state.current_class):
                return fail(f"class left the positive cone at move {number}")
        if state.current_class != cert.target_class:
            return fail("final class does not equal the target class")
    except SymconeError as exc:
        return fail(str(exc))
    entries.append("final class equals target class")
    for note in cert.annotations:
        entries.append(f"annotation: {note}")
    return VerificationReport(
        passed=True,
        entries=tuple(entries),
        first_failure=None,
        final_class=state.current_class,
    )
