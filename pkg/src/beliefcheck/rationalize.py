"""Screening an observation for rationalizability and constructing an
explicit probabilistic model that reproduces it.

The construction enlarges the state space to one copy of the payoff-relevant
states per observed posterior and per sign tag: a "+" signal after which the
agent holds that posterior, and a "-" phantom signal that carries positive
subjective but zero objective probability. The phantom signals are exactly
what lets every observed posterior drift one way while the agent's own belief
sequence remains a martingale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .dist import (
    TOL,
    Dist,
    Number,
    Observation,
    RnEntry,
    RnReport,
    WeightedPosteriors,
    condition,
    is_exact,
    num_eq,
    num_pos,
    pushforward,
    rn_derivative,
)
from .errors import (
    AbsoluteContinuityViolation,
    InvalidMixError,
    StructuralError,
    UndefinedUpdateError,
)

PLUS = "+"
MINUS = "-"


def mix_label(k: int) -> str:
    """Label of the k-th observed posterior in the mixing distribution."""
    return "nu%d" % k


def signal_label(k: int, sign: str) -> str:
    return "nu%d%s" % (k, sign)


def omega_label(s, k: int, sign: str) -> str:
    """Fixed labeling scheme for the enlarged state space: it depends only
    on the payoff-relevant label, the posterior index, and the sign tag."""
    return "%s|%s" % (s, signal_label(k, sign))


@dataclass(frozen=True)
class Model:
    """A candidate probabilistic model of the world.

    Holds the enlarged outcome space, the projection onto the
    payoff-relevant states, the signal partition (generators of the agent's
    period-1 information), the agent's subjective prior `mu0`, and the
    objective distribution `pObj`. `lambda_mix` records the mixing
    distribution used by the construction, when there was one.
    """

    states: tuple
    omega: tuple
    projection: dict
    signal_partition: dict
    mu0: Dist
    pObj: Dist
    lambda_mix: Optional[Dist] = None

    def __post_init__(self):
        omega = tuple(self.omega)
        object.__setattr__(self, "omega", omega)
        if self.mu0.space != omega or self.pObj.space != omega:
            raise StructuralError(
                "mu0 and pObj must be distributions over the model's omega"
            )
        covered = []
        for label, cell in self.signal_partition.items():
            covered.extend(cell)
        if len(covered) != len(set(covered)):
            raise StructuralError("signal partition cells must be disjoint")
        if set(covered) != set(omega):
            raise StructuralError("signal partition must cover omega")
        states = set(self.states)
        for w in omega:
            if w not in self.projection:
                raise StructuralError("projection undefined at %r" % (w,))
            if self.projection[w] not in states:
                raise StructuralError(
                    "projection sends %r outside the declared states" % (w,)
                )

    @property
    def is_exact(self) -> bool:
        return self.mu0.is_exact and self.pObj.is_exact


def check_condition1(obs: Observation) -> RnReport:
    """Screen every observed posterior for absolute continuity with respect
    to the prior. Violations are recorded in the report, not raised."""
    entries = []
    for k, (_, belief) in enumerate(obs.posteriors.items):
        try:
            entries.append(RnEntry(k, rn_derivative(obs.prior, belief)))
        except AbsoluteContinuityViolation as err:
            entries.append(RnEntry(k, None, err.outcomes))
    return RnReport(tuple(entries), all(e.ok for e in entries))


def uniform_mix(obs: Observation) -> Dist:
    """Uniform mixing distribution over the observed posteriors."""
    k = len(obs.posteriors)
    return Dist(
        tuple(mix_label(i) for i in range(k)),
        tuple(Fraction(1, k) for _ in range(k)),
    )


def target_mix(obs: Observation) -> Dist:
    """Mixing distribution equal to the observed posterior weights."""
    k = len(obs.posteriors)
    return Dist(
        tuple(mix_label(i) for i in range(k)), obs.posteriors.weights
    )


def construct_rationalization(
    obs: Observation, lambda_mix: Optional[Dist] = None
) -> Model:
    """Build a model under which Bayesian agents reproduce the observation.

    For each observed posterior `nu` with likelihood ratio bound 1/eps, the
    subjective prior splits the posterior's mixing weight between a "+"
    signal (probability eps, after which Bayes gives exactly `nu`) and a "-"
    phantom signal carrying the complementary belief that restores the
    martingale property. The objective distribution charges only the "+"
    signals, with the observed posterior frequencies, and its projection
    onto the payoff-relevant states equals the observed prior.

    Raises AbsoluteContinuityViolation if the screen fails, and
    InvalidMixError if `lambda_mix` does not give every observed posterior
    positive weight.
    """
    report = check_condition1(obs)
    if not report.overall_pass:
        raise AbsoluteContinuityViolation(
            report.violations(),
            "observation fails the absolute-continuity screen at outcomes: %s"
            % ", ".join(repr(s) for s in report.violations()),
        )
    k = len(obs.posteriors)
    mix_space = tuple(mix_label(i) for i in range(k))
    if lambda_mix is None:
        lambda_mix = uniform_mix(obs)
    if tuple(lambda_mix.space) != mix_space:
        raise InvalidMixError(
            "mixing distribution must be indexed by %s" % (mix_space,)
        )
    if not all(num_pos(w) for w in lambda_mix.weights):
        raise InvalidMixError(
            "mixing distribution must give every posterior positive weight"
        )

    states = obs.space
    epsilons = report.epsilons()
    mu0 = {}
    p_obj = {}
    for i, (pw, belief) in enumerate(obs.posteriors.items):
        eps = epsilons[i]
        lam = lambda_mix[mix_label(i)]
        for s in states:
            mu0[omega_label(s, i, PLUS)] = belief[s] * eps * lam
            # (prior - eps*belief) is the phantom cell's unnormalized
            # conditional; nonnegative since eps <= prior(s)/belief(s).
            minus = (obs.prior[s] - eps * belief[s]) * lam
            if not is_exact(minus):
                if minus < -TOL:
                    raise StructuralError(
                        "phantom-signal weight %r is negative beyond "
                        "tolerance at %r" % (minus, s)
                    )
                minus = max(minus, 0.0)
            mu0[omega_label(s, i, MINUS)] = minus
            p_obj[omega_label(s, i, PLUS)] = obs.prior[s] * pw
            p_obj[omega_label(s, i, MINUS)] = (
                Fraction(0) if obs.is_exact else 0.0
            )

    omega = tuple(
        omega_label(s, i, sign)
        for sign in (PLUS, MINUS)
        for i in range(k)
        for s in states
    )
    projection = {
        omega_label(s, i, sign): s
        for sign in (PLUS, MINUS)
        for i in range(k)
        for s in states
    }
    partition = {
        signal_label(i, sign): tuple(
            omega_label(s, i, sign) for s in states
        )
        for sign in (PLUS, MINUS)
        for i in range(k)
    }
    return Model(
        states=states,
        omega=omega,
        projection=projection,
        signal_partition=partition,
        mu0=Dist(omega, tuple(mu0[w] for w in omega)),
        pObj=Dist(omega, tuple(p_obj[w] for w in omega)),
        lambda_mix=lambda_mix,
    )


@dataclass(frozen=True)
class CellDiagnostic:
    """What a single signal cell contributes to the verification."""

    label: str
    mu_mass: Number
    obj_mass: Number
    posterior: Optional[Dist]  # None when the cell has zero mu0 mass


@dataclass(frozen=True)
class VerifyReport:
    """Independent check that a model reproduces an observation.

    Every boolean is recomputed from the model and the observation alone.
    `prior_matches`, `posteriors_match`, `posterior_distribution_matches`,
    and `subjective_martingale_holds` together are the consistency
    requirement; `objective_agrees_with_prior` is the stronger condition
    that the objective distribution also projects onto the observed prior.
    """

    prior_matches: bool
    posteriors_match: bool
    posterior_distribution_matches: bool
    objective_agrees_with_prior: bool
    subjective_martingale_holds: bool
    details: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return (
            self.prior_matches
            and self.posteriors_match
            and self.posterior_distribution_matches
            and self.subjective_martingale_holds
        )

    @property
    def all_pass(self) -> bool:
        return self.consistent and self.objective_agrees_with_prior

    def as_dict(self) -> dict:
        return {
            "prior_matches": self.prior_matches,
            "posteriors_match": self.posteriors_match,
            "posterior_distribution_matches": (
                self.posterior_distribution_matches
            ),
            "objective_agrees_with_prior": self.objective_agrees_with_prior,
            "subjective_martingale_holds": self.subjective_martingale_holds,
            "consistent": self.consistent,
            "all_pass": self.all_pass,
        }


def _cell_diagnostics(model: Model) -> list:
    out = []
    for label, cell in model.signal_partition.items():
        mu_mass = model.mu0.mass(cell)
        obj_mass = model.pObj.mass(cell)
        posterior = None
        if num_pos(mu_mass):
            posterior = pushforward(
                condition(model.mu0, cell), model.projection, model.states
            )
        out.append(CellDiagnostic(label, mu_mass, obj_mass, posterior))
    return out


def verify_model(model: Model, obs: Observation) -> VerifyReport:
    """Check, from scratch, whether the model reproduces the observation.

    (a) the subjective prior projects onto the observed prior; (b) every
    objectively reachable signal has a well-defined Bayes posterior lying in
    the observed support; (c) aggregating objective signal probabilities by
    induced posterior recovers the observed posterior distribution; (d) the
    objective distribution also projects onto the observed prior; (e) the
    signal-weighted average of posteriors under the subjective prior equals
    the observed prior (the martingale identity).
    """
    if tuple(model.states) != obs.space:
        raise StructuralError(
            "model and observation disagree on the payoff-relevant states"
        )
    cells = _cell_diagnostics(model)

    induced_prior = pushforward(model.mu0, model.projection, obs.space)
    prior_matches = induced_prior.matches(obs.prior)

    targets = obs.posteriors.beliefs
    posteriors_match = True
    for c in cells:
        if not num_pos(c.obj_mass):
            continue
        if c.posterior is None:
            # Objectively reachable signal with zero subjective
            # probability: the Bayes update is undefined there.
            posteriors_match = False
        elif not any(c.posterior.matches(t) for t in targets):
            posteriors_match = False

    groups = []  # (posterior, accumulated objective mass)
    distribution_matches = True
    for c in cells:
        if not num_pos(c.obj_mass):
            continue
        if c.posterior is None:
            distribution_matches = False
            continue
        for i, (post, mass) in enumerate(groups):
            if post.matches(c.posterior):
                groups[i] = (post, mass + c.obj_mass)
                break
        else:
            groups.append((c.posterior, c.obj_mass))
    if distribution_matches:
        matched = [False] * len(groups)
        for weight, belief in obs.posteriors.items:
            hit = None
            for i, (post, mass) in enumerate(groups):
                if not matched[i] and post.matches(belief):
                    hit = i
                    break
            if hit is None or not num_eq(groups[hit][1], weight):
                distribution_matches = False
                break
            matched[hit] = True
        if distribution_matches and not all(matched):
            distribution_matches = False

    objective_prior = pushforward(model.pObj, model.projection, obs.space)
    objective_agrees = objective_prior.matches(obs.prior)

    active = [c for c in cells if num_pos(c.mu_mass)]
    _, mean = _weighted_mean(
        [c.mu_mass for c in active], [c.posterior for c in active], obs
    )
    martingale_holds = mean.matches(obs.prior)

    return VerifyReport(
        prior_matches=prior_matches,
        posteriors_match=posteriors_match,
        posterior_distribution_matches=distribution_matches,
        objective_agrees_with_prior=objective_agrees,
        subjective_martingale_holds=martingale_holds,
        details={
            "induced_prior": induced_prior,
            "objective_prior": objective_prior,
            "cells": cells,
            "induced_distribution": groups,
            "mean_posterior": mean,
        },
    )


def _weighted_mean(weights, posteriors, obs):
    exact = all(is_exact(w) for w in weights) and all(
        p.is_exact for p in posteriors
    )
    acc = [Fraction(0) if exact else 0.0] * len(obs.space)
    for w, post in zip(weights, posteriors):
        for i, pw in enumerate(post.weights):
            acc[i] += w * pw
    mean = Dist(obs.space, tuple(acc))
    return weights, mean


def induced_observables(model: Model):
    """The observables the model generates: its induced prior over the
    payoff-relevant states and the objective distribution of Bayes
    posteriors. Raises UndefinedUpdateError if an objectively reachable
    signal has zero subjective probability."""
    prior = pushforward(model.mu0, model.projection, model.states)
    items = []
    for c in _cell_diagnostics(model):
        if not num_pos(c.obj_mass):
            continue
        if c.posterior is None:
            raise UndefinedUpdateError(
                "signal %r is objectively reachable but has zero "
                "subjective probability" % c.label
            )
        items.append((c.obj_mass, c.posterior))
    return prior, WeightedPosteriors(tuple(items))
