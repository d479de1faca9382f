"""Finite probability distributions and the measure-theoretic primitives built
on them: pushforward, conditioning on partition cells, pointwise likelihood
ratios (Radon-Nikodym derivatives on a finite space), and martingale checks.

Weights come in two flavours. Exact mode stores `fractions.Fraction` values
and every comparison is exact; float mode stores floats and comparisons are
made coordinate-wise within ``TOL``. A distribution is treated as exact when
all of its weights are rational objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import (
    AbsoluteContinuityViolation,
    StructuralError,
    ZeroProbabilityCell,
)

Number = Union[int, Fraction, float]

#: Tolerance for any comparison that involves a float weight.
TOL = 1e-9


def is_exact(x: Number) -> bool:
    """True when x supports exact arithmetic (int or Fraction)."""
    return isinstance(x, Rational)


def num_eq(a: Number, b: Number, tol: float = TOL) -> bool:
    """Equality of two weights: exact when both sides are rational,
    otherwise within tol."""
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(a - b) <= tol


def num_pos(x: Number, tol: float = TOL) -> bool:
    """Strict positivity, treating floats below tol as zero."""
    if is_exact(x):
        return x > 0
    return x > tol


@dataclass(frozen=True)
class Dist:
    """A probability distribution with finite support over labeled outcomes.

    The outcome space is an ordered tuple of distinct, non-empty labels;
    zero-weight outcomes are kept in the space so that distributions over
    the same ambient space stay directly comparable.
    """

    space: tuple
    weights: tuple

    def __post_init__(self):
        space = tuple(self.space)
        weights = tuple(
            Fraction(w) if is_exact(w) else float(w) for w in self.weights
        )
        if len(space) != len(weights):
            raise StructuralError(
                "space has %d outcomes but %d weights were given"
                % (len(space), len(weights))
            )
        if len(set(space)) != len(space):
            raise StructuralError("outcome labels must be distinct")
        if any(label in ("", None) for label in space):
            raise StructuralError("outcome labels must be non-empty")
        for label, w in zip(space, weights):
            if w < 0:
                raise StructuralError(
                    "negative weight %s at outcome %r" % (w, label)
                )
        total = sum(weights)
        if all(is_exact(w) for w in weights):
            if total != 1:
                raise StructuralError("weights sum to %s, expected 1" % total)
        elif abs(total - 1) > TOL:
            raise StructuralError(
                "weights sum to %r, expected 1 within %g" % (total, TOL)
            )
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(
            self, "_index", {label: i for i, label in enumerate(space)}
        )

    @classmethod
    def from_mapping(cls, space: Sequence, mapping: Mapping) -> "Dist":
        """Build a Dist from a label->weight mapping; missing labels get 0."""
        zero = Fraction(0)
        if any(not is_exact(w) for w in mapping.values()):
            zero = 0.0
        unknown = set(mapping) - set(space)
        if unknown:
            raise StructuralError(
                "weights given for labels outside the space: %s"
                % ", ".join(repr(u) for u in sorted(unknown, key=repr))
            )
        return cls(tuple(space), tuple(mapping.get(s, zero) for s in space))

    @classmethod
    def uniform(cls, space: Sequence) -> "Dist":
        space = tuple(space)
        return cls(space, tuple(Fraction(1, len(space)) for _ in space))

    @classmethod
    def point_mass(cls, space: Sequence, label) -> "Dist":
        space = tuple(space)
        return cls(
            space, tuple(Fraction(int(s == label)) for s in space)
        )

    @property
    def is_exact(self) -> bool:
        return all(is_exact(w) for w in self.weights)

    def __getitem__(self, label) -> Number:
        try:
            return self.weights[self._index[label]]
        except KeyError:
            raise StructuralError("unknown outcome %r" % (label,)) from None

    def mass(self, labels: Iterable) -> Number:
        """Total weight of a subset of the space."""
        labels = set(labels)
        unknown = labels - set(self.space)
        if unknown:
            raise StructuralError(
                "subset contains labels outside the space: %s"
                % ", ".join(repr(u) for u in sorted(unknown, key=repr))
            )
        return sum(
            (w for s, w in zip(self.space, self.weights) if s in labels),
            Fraction(0) if self.is_exact else 0.0,
        )

    def support(self) -> tuple:
        """Outcomes carrying positive weight (floats below TOL count as 0)."""
        return tuple(
            s for s, w in zip(self.space, self.weights) if num_pos(w)
        )

    def matches(self, other: "Dist") -> bool:
        """Coordinate-wise equality over a shared space: exact when both
        sides are exact, within TOL otherwise."""
        if self.space != other.space:
            raise StructuralError(
                "cannot compare distributions over different spaces"
            )
        return all(
            num_eq(a, b) for a, b in zip(self.weights, other.weights)
        )


def _projector(proj) -> Callable:
    if isinstance(proj, Mapping):
        mapping = proj

        def lookup(label):
            try:
                return mapping[label]
            except KeyError:
                raise StructuralError(
                    "projection undefined at %r" % (label,)
                ) from None

        return lookup
    return proj


def pushforward(mu: Dist, proj, space: Sequence) -> Dist:
    """Distribution over `space` induced by `mu` through the projection.

    `proj` maps each outcome of mu's space into `space`; it may be a mapping
    or a callable. The weight of a target outcome is the total mu-weight of
    its preimage.
    """
    lookup = _projector(proj)
    space = tuple(space)
    index = {s: i for i, s in enumerate(space)}
    acc = [Fraction(0) if mu.is_exact else 0.0] * len(space)
    for label, w in zip(mu.space, mu.weights):
        target = lookup(label)
        if target not in index:
            raise StructuralError(
                "projection sends %r to %r, outside the declared space"
                % (label, target)
            )
        acc[index[target]] += w
    return Dist(space, tuple(acc))


def condition(mu: Dist, cell: Iterable) -> Dist:
    """Elementary Bayes update of `mu` on a cell of positive probability.

    The result lives on the same space, with zero weight outside the cell.
    Raises ZeroProbabilityCell when the cell carries no mass.
    """
    cell = frozenset(cell)
    unknown = cell - set(mu.space)
    if unknown:
        raise StructuralError(
            "cell contains labels outside the space: %s"
            % ", ".join(repr(u) for u in sorted(unknown, key=repr))
        )
    total = mu.mass(cell)
    if not num_pos(total):
        raise ZeroProbabilityCell(
            "cell %s has zero probability; Bayes update undefined"
            % sorted(cell, key=repr)
        )
    zero = Fraction(0) if mu.is_exact else 0.0
    return Dist(
        mu.space,
        tuple(
            w / total if s in cell else zero
            for s, w in zip(mu.space, mu.weights)
        ),
    )


@dataclass(frozen=True)
class RnDerivative:
    """Pointwise likelihood ratio of a belief against a prior.

    `f` is defined on the support of the prior; `epsilon` = 1/max f lies in
    (0, 1] and equals 1 exactly when the belief agrees with the prior on the
    prior's support.
    """

    f: dict
    max_f: Number
    epsilon: Number


def rn_derivative(prior: Dist, belief: Dist) -> RnDerivative:
    """Compute d(belief)/d(prior) on the prior's support.

    Raises AbsoluteContinuityViolation if the belief charges any outcome of
    zero prior weight. On a finite space absolute continuity automatically
    gives a bounded derivative, so `max_f` always exists.
    """
    if prior.space != belief.space:
        raise StructuralError("prior and belief must share a space")
    bad = [
        s
        for s in prior.space
        if not num_pos(prior[s]) and num_pos(belief[s])
    ]
    if bad:
        raise AbsoluteContinuityViolation(bad)
    f = {s: belief[s] / prior[s] for s in prior.support()}
    max_f = max(f.values())
    if is_exact(max_f):
        epsilon = Fraction(1) / max_f
    else:
        # max f >= 1 up to rounding; keep epsilon inside (0, 1].
        epsilon = min(1.0 / max_f, 1.0)
    return RnDerivative(f, max_f, epsilon)


def martingale_check(
    weights: Sequence[Number], posteriors: Sequence[Dist], prior: Dist
):
    """Mean of the posteriors under `weights`, and whether it equals the
    prior. Returns (holds, mean_posterior)."""
    if len(weights) != len(posteriors):
        raise StructuralError(
            "got %d weights for %d posteriors"
            % (len(weights), len(posteriors))
        )
    exact = all(is_exact(w) for w in weights) and all(
        p.is_exact for p in posteriors
    )
    acc = [Fraction(0) if exact else 0.0] * len(prior.space)
    for w, post in zip(weights, posteriors):
        if post.space != prior.space:
            raise StructuralError("posterior space differs from the prior's")
        for i, pw in enumerate(post.weights):
            acc[i] += w * pw
    mean = Dist(prior.space, tuple(acc))
    return mean.matches(prior), mean


@dataclass(frozen=True)
class WeightedPosteriors:
    """A finitely-supported distribution over posterior beliefs.

    Items are (weight, belief) pairs over a shared outcome space. Duplicate
    beliefs (coordinate-wise equal) are merged at construction by summing
    their weights, so the stored items enumerate the support.
    """

    items: tuple

    def __post_init__(self):
        items = list(self.items)
        if not items:
            raise StructuralError("at least one posterior is required")
        space = items[0][1].space
        merged = []
        for w, belief in items:
            if not isinstance(belief, Dist):
                raise StructuralError("posterior beliefs must be Dists")
            if belief.space != space:
                raise StructuralError(
                    "all posteriors must share one outcome space"
                )
            if not w > 0:
                raise StructuralError(
                    "posterior weights must be strictly positive, got %s" % w
                )
            w = Fraction(w) if is_exact(w) else float(w)
            for i, (w0, b0) in enumerate(merged):
                if b0.matches(belief):
                    merged[i] = (w0 + w, b0)
                    break
            else:
                merged.append((w, belief))
        total = sum(w for w, _ in merged)
        if all(is_exact(w) for w, _ in merged):
            if total != 1:
                raise StructuralError(
                    "posterior weights sum to %s, expected 1" % total
                )
        elif abs(total - 1) > TOL:
            raise StructuralError(
                "posterior weights sum to %r, expected 1 within %g"
                % (total, TOL)
            )
        object.__setattr__(self, "items", tuple(merged))

    @property
    def space(self) -> tuple:
        return self.items[0][1].space

    @property
    def weights(self) -> tuple:
        return tuple(w for w, _ in self.items)

    @property
    def beliefs(self) -> tuple:
        return tuple(b for _, b in self.items)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(w) for w in self.weights) and all(
            b.is_exact for b in self.beliefs
        )

    def __len__(self) -> int:
        return len(self.items)

    def as_dist_over_indices(self) -> Dist:
        """The weights as a distribution over support indices 0..k-1."""
        return Dist(tuple(range(len(self.items))), self.weights)


@dataclass(frozen=True)
class Observation:
    """What the econometrician sees: a prior over the payoff-relevant states
    and the population distribution of posteriors over the same states."""

    prior: Dist
    posteriors: WeightedPosteriors

    def __post_init__(self):
        if self.prior.space != self.posteriors.space:
            raise StructuralError(
                "prior and posteriors must share one outcome space"
            )

    @property
    def space(self) -> tuple:
        return self.prior.space

    @property
    def is_exact(self) -> bool:
        return self.prior.is_exact and self.posteriors.is_exact


@dataclass(frozen=True)
class RnEntry:
    """Per-posterior outcome of the likelihood-ratio screen."""

    index: int
    derivative: RnDerivative | None
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return self.derivative is not None


@dataclass(frozen=True)
class RnReport:
    """Result of screening every posterior in an observation for absolute
    continuity with respect to the prior."""

    entries: tuple
    overall_pass: bool

    def epsilons(self) -> tuple:
        return tuple(
            e.derivative.epsilon if e.ok else None for e in self.entries
        )

    def violations(self) -> tuple:
        """All prior-null outcomes charged by some posterior."""
        seen = []
        for e in self.entries:
            for s in e.violations:
                if s not in seen:
                    seen.append(s)
        return tuple(seen)
