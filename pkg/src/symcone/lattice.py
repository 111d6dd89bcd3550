"""Intersection lattices, class vectors, and curve models.

An IntersectionLattice is a finitely generated free module with an integral
symmetric pairing, optionally carrying a distinguished canonical class and a
reference class of positive square.  A CurveModel decorates a lattice with a
finite list of negative-square curve classes and their genera.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    ConfigurationError,
    DefinitenessError,
    MalformedInputError,
    ModelInconsistencyError,
    PreconditionError,
    PropertyViolationError,
)


@dataclass(frozen=True)
class ClassVector:
    """A lattice class in basis coordinates, exact throughout."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", linalg.as_vector(self.coords))

    @classmethod
    def zero(cls, rank: int) -> "ClassVector":
        return cls((Fraction(0),) * rank)

    @classmethod
    def basis(cls, rank: int, index: int) -> "ClassVector":
        if not 0 <= index < rank:
            raise MalformedInputError(f"basis index {index} out of range for rank {rank}")
        return cls(tuple(Fraction(1 if i == index else 0) for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def _check_rank(self, other: "ClassVector") -> None:
        if self.rank != other.rank:
            raise MalformedInputError("class vectors live in different lattices")

    def __add__(self, other: "ClassVector") -> "ClassVector":
        self._check_rank(other)
        return ClassVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ClassVector") -> "ClassVector":
        self._check_rank(other)
        return ClassVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "ClassVector":
        return ClassVector(tuple(-a for a in self.coords))

    def scale(self, factor) -> "ClassVector":
        f = linalg.as_fraction(factor)
        return ClassVector(tuple(f * a for a in self.coords))

    def __mul__(self, factor) -> "ClassVector":
        return self.scale(factor)

    __rmul__ = __mul__


def is_negative_definite(gram: linalg.Matrix) -> bool:
    """Sylvester test: the k-th leading principal minor has sign (-1)^k."""
    gram = linalg.as_matrix(gram)
    minors = linalg.leading_principal_minors(gram)
    return all(
        (minor > 0 if k % 2 == 0 else minor < 0)
        for k, minor in enumerate(minors, start=1)
    )


def neg_inverse(gram: linalg.Matrix) -> linalg.Matrix:
    """Return -gram^{-1} for a negative definite matrix with nonnegative
    off-diagonal entries.  Under those hypotheses the result is entrywise
    nonnegative; that is verified, not assumed."""
    gram = linalg.as_matrix(gram)
    if not linalg.is_symmetric(gram):
        raise PreconditionError("matrix is not symmetric")
    n = len(gram)
    for i in range(n):
        for j in range(n):
            if i != j and gram[i][j] < 0:
                raise PreconditionError("off-diagonal entries must be nonnegative")
    if not is_negative_definite(gram):
        raise DefinitenessError("matrix is not negative definite")
    inv = linalg.inverse(gram)
    result = tuple(tuple(-entry for entry in row) for row in inv)
    for row in result:
        for entry in row:
            if entry < 0:
                raise PropertyViolationError(
                    "negated inverse has a negative entry despite the hypotheses"
                )
    return result


@dataclass(frozen=True)
class IntersectionLattice:
    """Integral symmetric pairing with optional canonical and reference data."""

    gram: linalg.Matrix
    basis_labels: tuple[str, ...] = ()
    canonical_class: ClassVector | None = None
    reference_class: ClassVector | None = None

    def __post_init__(self):
        gram = linalg.as_matrix(self.gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise MalformedInputError("Gram matrix must be square")
        if not linalg.is_symmetric(gram):
            raise ModelInconsistencyError("Gram matrix must be symmetric")
        for row in gram:
            for entry in row:
                if entry.denominator != 1:
                    raise ModelInconsistencyError("Gram entries must be integers")
        object.__setattr__(self, "gram", gram)
        labels = tuple(self.basis_labels) if self.basis_labels else tuple(
            f"e{i}" for i in range(n)
        )
        if len(labels) != n:
            raise MalformedInputError("label count does not match rank")
        if len(set(labels)) != n:
            raise MalformedInputError("basis labels must be distinct")
        object.__setattr__(self, "basis_labels", labels)
        for name in ("canonical_class", "reference_class"):
            vec = getattr(self, name)
            if vec is not None and vec.rank != n:
                raise MalformedInputError(f"{name} has wrong rank")
        if self.reference_class is not None:
            if self.square(self.reference_class) <= 0:
                raise ModelInconsistencyError("reference class must have positive square")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, a: ClassVector, b: ClassVector) -> Fraction:
        if a.rank != self.rank or b.rank != self.rank:
            raise MalformedInputError("class vector rank does not match lattice")
        # expand only the rows a actually touches
        return sum(
            (x * linalg.dot(self.gram[i], b.coords) for i, x in enumerate(a.coords) if x),
            Fraction(0),
        )

    def square(self, a: ClassVector) -> Fraction:
        return self.pair(a, a)

    def gram_vector(self, a: ClassVector) -> linalg.Vector:
        """G @ a, so many pairings against a can be taken by plain dot products."""
        if a.rank != self.rank:
            raise MalformedInputError("class vector rank does not match lattice")
        return linalg.mat_vec(self.gram, a.coords)

    def is_positive_cone(self, a: ClassVector) -> bool:
        """Positive square and positive pairing with the reference class."""
        if self.reference_class is None:
            raise ConfigurationError("positive cone needs a reference class")
        return self.square(a) > 0 and self.pair(a, self.reference_class) > 0

    def expected_dimension(self, e: ClassVector, genus: int) -> Fraction:
        """2(genus - 1 - K.e).  Equals 2(e^2 + 1 - genus) exactly when the
        adjunction relation holds; use adjunction_check to test that."""
        if self.canonical_class is None:
            raise ConfigurationError("expected dimension needs a canonical class")
        return 2 * (Fraction(genus) - 1 - self.pair(self.canonical_class, e))

    def adjunction_check(self, e: ClassVector, genus: int) -> bool:
        if self.canonical_class is None:
            raise ConfigurationError("adjunction check needs a canonical class")
        return 2 * Fraction(genus) - 2 == self.square(e) + self.pair(
            self.canonical_class, e
        )


@dataclass(frozen=True)
class CurveData:
    """A declared curve: label, integral homology class, nonnegative genus."""

    label: str
    vector: ClassVector
    genus: int

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise MalformedInputError(f"genus of {self.label!r} must be a nonnegative integer")
        if not self.vector.is_integral:
            raise MalformedInputError(f"curve {self.label!r} must have integer coordinates")


@dataclass(frozen=True)
class CurveModel:
    """A lattice together with finitely many negative-square curves.

    completeness_assumed records whether the curve list is taken to cut out the
    full chamber structure; operations asserting a class is actually Kähler
    require it.
    """

    lattice: IntersectionLattice
    curves: tuple[CurveData, ...]
    completeness_assumed: bool = False
    enforce_adjunction: bool = True

    def __post_init__(self):
        curves = tuple(self.curves)
        object.__setattr__(self, "curves", curves)
        labels = [c.label for c in curves]
        if len(set(labels)) != len(labels):
            raise ModelInconsistencyError("curve labels must be distinct")
        lat = self.lattice
        gram_vectors = {}
        for c in curves:
            sq = lat.square(c.vector)
            if sq >= 0:
                raise ModelInconsistencyError(
                    f"curve {c.label!r} has square {sq}; curves must have negative square"
                )
            if self.enforce_adjunction and lat.canonical_class is not None:
                if not lat.adjunction_check(c.vector, c.genus):
                    raise ModelInconsistencyError(
                        f"curve {c.label!r} violates adjunction for genus {c.genus}"
                    )
            gram_vectors[c.label] = lat.gram_vector(c.vector)
        for i, a in enumerate(curves):
            ga = gram_vectors[a.label]
            for b in curves[i + 1 :]:
                if linalg.dot(ga, b.vector.coords) < 0:
                    raise ModelInconsistencyError(
                        f"curves {a.label!r} and {b.label!r} pair negatively"
                    )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.curves)

    def curve(self, label: str) -> CurveData:
        for c in self.curves:
            if c.label == label:
                return c
        raise MalformedInputError(f"no curve labelled {label!r}")

    def index_of(self, label: str) -> int:
        for i, c in enumerate(self.curves):
            if c.label == label:
                return i
        raise MalformedInputError(f"no curve labelled {label!r}")

    def pairings_with(self, a: ClassVector) -> tuple[Fraction, ...]:
        """pair(a, curve) for every declared curve, via one Gram product."""
        ga = self.lattice.gram_vector(a)
        return tuple(linalg.dot(ga, c.vector.coords) for c in self.curves)

    def is_interior_kahler(self, a: ClassVector) -> bool:
        """Positive cone and strictly positive on every declared curve.

        This asserts Kähler-ness of a class, which is only meaningful when the
        curve list is assumed complete; without that flag the answer would be
        an overclaim, so the call is refused."""
        if not self.completeness_assumed:
            raise ConfigurationError(
                "model does not assume completeness; cannot assert Kähler classes"
            )
        if not self.lattice.is_positive_cone(a):
            return False
        return all(v > 0 for v in self.pairings_with(a))

    def curve_gram(self, indices: Sequence[int] | None = None) -> linalg.Matrix:
        """Gram matrix of the declared curves (or a subset, by index)."""
        idx = range(len(self.curves)) if indices is None else list(indices)
        chosen = [self.curves[i] for i in idx]
        gvs = [self.lattice.gram_vector(c.vector) for c in chosen]
        return tuple(
            tuple(linalg.dot(gvs[i], c.vector.coords) for c in chosen)
            for i in range(len(chosen))
        )


def lattice_from_rows(
    rows: Iterable[Iterable],
    labels: Sequence[str] | None = None,
    canonical: ClassVector | None = None,
    reference: ClassVector | None = None,
) -> IntersectionLattice:
    return IntersectionLattice(
        gram=linalg.as_matrix(rows),
        basis_labels=tuple(labels) if labels else (),
        canonical_class=canonical,
        reference_class=reference,
    )
