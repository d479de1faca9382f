"""Rationalizability when the full state space is known and observed.

In the experimentally-controlled regime the state space coincides with the
payoff-relevant states and the projection is the identity, so the subjective
prior is pinned down by the observed prior. Rationalizability then reduces
to two sharp conditions on the observed posteriors: pairwise disjoint
supports, and each posterior equal to the prior conditioned on its own
support. A brute-force oracle that enumerates every signal partition of the
state space provides an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .dist import Dist, Number, Observation, condition, num_eq, num_pos
from .errors import (
    NotRationalizableError,
    PreconditionError,
    ResourceBoundError,
)
from .rationalize import Model

#: Bell-number growth makes exhaustive partition enumeration infeasible
#: beyond this many states.
MAX_BRUTE_FORCE_STATES = 10

RESIDUAL_CELL = "rest"


def set_partitions(items: Sequence) -> Iterator[list]:
    """Yield every set partition of `items` as a list of blocks.

    Partitions are enumerated by their restricted growth strings in
    lexicographic order, so each partition appears exactly once and the
    first partition is the single-block one.
    """
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    a = [0] * n
    while True:
        blocks = [[] for _ in range(max(a) + 1)]
        for i, b in enumerate(a):
            blocks[b].append(items[i])
        yield blocks
        # Advance the restricted growth string: a[i] may be incremented
        # when it does not exceed the running maximum of the prefix.
        for i in range(n - 1, 0, -1):
            if a[i] <= max(a[:i]):
                a[i] += 1
                for j in range(i + 1, n):
                    a[j] = 0
                break
        else:
            return


def _require_full_support(prior: Dist) -> None:
    dead = [s for s, w in zip(prior.space, prior.weights) if not num_pos(w)]
    if dead:
        raise PreconditionError(
            "the known-state-space test requires a full-support prior; "
            "outcomes with zero prior weight: %s"
            % ", ".join(repr(s) for s in dead)
        )


@dataclass(frozen=True)
class Prop1Report:
    """Outcome of the two known-state-space rationalizability conditions.

    `overlapping_pairs` lists (i, j, shared outcomes) for posterior pairs
    with intersecting supports; `deviations` carries, per posterior, the
    worst coordinate gap between the posterior and the prior conditioned on
    the posterior's support.
    """

    condition_i: bool
    overlapping_pairs: tuple
    condition_ii: bool
    deviations: tuple

    @property
    def rationalizable(self) -> bool:
        return self.condition_i and self.condition_ii


def check_proposition1(obs: Observation) -> Prop1Report:
    """Decide rationalizability in the known-state-space regime.

    Condition (i): the observed posteriors have pairwise disjoint supports.
    Condition (ii): each posterior equals the prior conditioned on that
    posterior's support. Requires a full-support prior.
    """
    _require_full_support(obs.prior)
    beliefs = obs.posteriors.beliefs
    supports = [frozenset(b.support()) for b in beliefs]

    overlaps = []
    for i in range(len(beliefs)):
        for j in range(i + 1, len(beliefs)):
            shared = supports[i] & supports[j]
            if shared:
                overlaps.append((i, j, tuple(sorted(shared, key=repr))))

    deviations = []
    condition_ii = True
    for belief, supp in zip(beliefs, supports):
        expected = condition(obs.prior, supp)
        worst = max(
            abs(a - b)
            for a, b in zip(belief.weights, expected.weights)
        )
        deviations.append(worst)
        if not belief.matches(expected):
            condition_ii = False

    return Prop1Report(
        condition_i=not overlaps,
        overlapping_pairs=tuple(overlaps),
        condition_ii=condition_ii,
        deviations=tuple(deviations),
    )


def construct_known_omega_model(obs: Observation) -> Model:
    """Build the witness model for a rationalizable known-state-space
    observation: identity projection, the subjective prior equal to the
    observed prior, signal cells equal to the posterior supports (plus a
    residual cell when they do not exhaust the states), and an objective
    distribution spreading each posterior's weight uniformly over its cell.
    """
    report = check_proposition1(obs)
    if not report.rationalizable:
        raise NotRationalizableError(
            "observation fails the known-state-space conditions: "
            "support overlaps %s, condition (ii) %s"
            % (report.overlapping_pairs, report.condition_ii)
        )
    states = obs.space
    partition = {}
    obj = {}
    exact = obs.is_exact
    for k, (weight, belief) in enumerate(obs.posteriors.items):
        cell = tuple(s for s in states if s in set(belief.support()))
        partition["nu%d" % k] = cell
        # Only the cell totals are pinned down; spread uniformly within.
        share = (
            Fraction(weight) / len(cell) if exact else weight / len(cell)
        )
        for s in cell:
            obj[s] = share
    residual = tuple(s for s in states if s not in obj)
    if residual:
        partition[RESIDUAL_CELL] = residual
        for s in residual:
            obj[s] = Fraction(0) if exact else 0.0
    return Model(
        states=states,
        omega=states,
        projection={s: s for s in states},
        signal_partition=partition,
        mu0=obs.prior,
        pObj=Dist(states, tuple(obj[s] for s in states)),
        lambda_mix=None,
    )


def brute_force_known_omega(obs: Observation) -> bool:
    """Exhaustive oracle for known-state-space rationalizability.

    Enumerates every signal partition of the states and asks whether some
    partition, together with a weight assignment over its cells, reproduces
    the observed posterior distribution: each observed posterior must equal
    the prior conditioned on a distinct cell, with the cell receiving that
    posterior's weight; any remaining cells stay objectively unreachable.
    """
    _require_full_support(obs.prior)
    if len(obs.space) > MAX_BRUTE_FORCE_STATES:
        raise ResourceBoundError(
            "brute force is limited to %d states, got %d"
            % (MAX_BRUTE_FORCE_STATES, len(obs.space))
        )
    beliefs = obs.posteriors.beliefs
    for blocks in set_partitions(obs.space):
        cells = [frozenset(b) for b in blocks]
        used = [False] * len(cells)
        for belief in beliefs:
            supp = frozenset(belief.support())
            hit = None
            for i, cell in enumerate(cells):
                if used[i] or cell != supp:
                    continue
                if belief.matches(condition(obs.prior, cell)):
                    hit = i
                break
            if hit is None:
                break
            used[hit] = True
        else:
            return True
    return False
