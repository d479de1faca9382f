from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beliefcheck import (
    AbsoluteContinuityViolation,
    Dist,
    StructuralError,
    WeightedPosteriors,
    ZeroProbabilityCell,
    condition,
    martingale_check,
    pushforward,
    rn_derivative,
)

S2 = ("H", "L")
COLS = ("0.8+", "1.0+", "0.8-", "1.0-")
OMEGA = tuple("%s|%s" % (s, c) for s in S2 for c in COLS)
PROJ = {w: w.split("|")[0] for w in OMEGA}

SUBJECTIVE = Dist(
    OMEGA,
    tuple(
        Fraction(x)
        for x in (
            "1/4", "1/4", "0", "0",  # H row
            "1/16", "0", "3/16", "1/4",  # L row
        )
    ),
)
OBJECTIVE = Dist(
    OMEGA,
    tuple(
        Fraction(x)
        for x in ("1/8", "3/8", "0", "0", "1/8", "3/8", "0", "0")
    ),
)


def col(label):
    return ["%s|%s" % (s, label) for s in S2]


class TestDistConstruction:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(StructuralError):
            Dist(S2, (Fraction(1, 2), Fraction(1, 3)))

    def test_float_tolerance(self):
        Dist(S2, (0.5 + 4e-10, 0.5))  # within tol
        with pytest.raises(StructuralError):
            Dist(S2, (0.6, 0.5))

    def test_negative_weight_rejected(self):
        with pytest.raises(StructuralError):
            Dist(S2, (Fraction(3, 2), Fraction(-1, 2)))

    def test_duplicate_labels_rejected(self):
        with pytest.raises(StructuralError):
            Dist(("a", "a"), (Fraction(1, 2), Fraction(1, 2)))

    def test_zero_weight_outcomes_are_kept(self):
        d = Dist(("a", "b"), (Fraction(1), Fraction(0)))
        assert d.space == ("a", "b")
        assert d.support() == ("a",)


class TestPushforward:
    def test_subjective_table_marginal(self):
        out = pushforward(SUBJECTIVE, PROJ, S2)
        assert out.weights == (Fraction(1, 2), Fraction(1, 2))

    def test_identity_projection(self):
        d = Dist(("a", "b", "c"), (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
        assert pushforward(d, {s: s for s in d.space}, d.space).matches(d)

    def test_objective_table_marginal(self):
        out = pushforward(OBJECTIVE, PROJ, S2)
        assert out.weights == (Fraction(1, 2), Fraction(1, 2))

    def test_projection_outside_space_is_structural(self):
        with pytest.raises(StructuralError):
            pushforward(SUBJECTIVE, {w: "X" for w in OMEGA}, S2)


class TestCondition:
    def test_signal_08_plus(self):
        post = pushforward(condition(SUBJECTIVE, col("0.8+")), PROJ, S2)
        assert post.weights == (Fraction(4, 5), Fraction(1, 5))

    def test_full_space_leaves_marginal_unchanged(self):
        assert condition(SUBJECTIVE, OMEGA).matches(SUBJECTIVE)

    def test_signal_10_minus(self):
        post = pushforward(condition(SUBJECTIVE, col("1.0-")), PROJ, S2)
        assert post.weights == (Fraction(0), Fraction(1))

    def test_zero_mass_cell_raises(self):
        with pytest.raises(ZeroProbabilityCell):
            condition(SUBJECTIVE, ["H|0.8-", "H|1.0-"])


class TestRnDerivative:
    def test_inner_posterior(self):
        prior = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        belief = Dist(S2, (Fraction(4, 5), Fraction(1, 5)))
        d = rn_derivative(prior, belief)
        assert d.f == {"H": Fraction(8, 5), "L": Fraction(2, 5)}
        assert d.max_f == Fraction(8, 5)
        assert d.epsilon == Fraction(5, 8)

    def test_belief_equal_to_prior(self):
        prior = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        d = rn_derivative(prior, prior)
        assert all(v == 1 for v in d.f.values())
        assert d.epsilon == 1

    def test_boundary_posterior(self):
        prior = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        belief = Dist(S2, (Fraction(1), Fraction(0)))
        d = rn_derivative(prior, belief)
        assert d.f == {"H": Fraction(2), "L": Fraction(0)}
        assert d.epsilon == Fraction(1, 2)

    def test_violation_names_the_outcome(self):
        prior = Dist(S2, (Fraction(1), Fraction(0)))
        belief = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        with pytest.raises(AbsoluteContinuityViolation) as err:
            rn_derivative(prior, belief)
        assert err.value.outcomes == ("L",)


class TestMartingaleCheck:
    def test_objective_weights_fail(self):
        prior = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        holds, mean = martingale_check(
            [Fraction(1, 4), Fraction(3, 4)],
            [
                Dist(S2, (Fraction(4, 5), Fraction(1, 5))),
                Dist(S2, (Fraction(1), Fraction(0))),
            ],
            prior,
        )
        assert not holds
        assert mean.weights == (Fraction(19, 20), Fraction(1, 20))

    def test_subjective_signal_weights_hold(self):
        prior = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        holds, mean = martingale_check(
            [Fraction(5, 16), Fraction(1, 4), Fraction(3, 16), Fraction(1, 4)],
            [
                Dist(S2, (Fraction(4, 5), Fraction(1, 5))),
                Dist(S2, (Fraction(1), Fraction(0))),
                Dist(S2, (Fraction(0), Fraction(1))),
                Dist(S2, (Fraction(0), Fraction(1))),
            ],
            prior,
        )
        assert holds
        assert mean.matches(prior)

    def test_point_mass_on_prior(self):
        prior = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        holds, _ = martingale_check([Fraction(1)], [prior], prior)
        assert holds

    def test_length_mismatch(self):
        prior = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        with pytest.raises(StructuralError):
            martingale_check([Fraction(1)], [prior, prior], prior)


class TestWeightedPosteriors:
    def test_duplicates_are_merged(self):
        a = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        b = Dist(S2, (Fraction(1), Fraction(0)))
        wp = WeightedPosteriors(
            ((Fraction(1, 4), a), (Fraction(1, 4), b), (Fraction(1, 2), a))
        )
        assert len(wp) == 2
        assert wp.weights == (Fraction(3, 4), Fraction(1, 4))

    def test_weights_must_be_positive(self):
        a = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        with pytest.raises(StructuralError):
            WeightedPosteriors(((Fraction(0), a), (Fraction(1), a)))

    def test_mixed_spaces_rejected(self):
        a = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
        b = Dist(("x", "y"), (Fraction(1, 2), Fraction(1, 2)))
        with pytest.raises(StructuralError):
            WeightedPosteriors(((Fraction(1, 2), a), (Fraction(1, 2), b)))


# ---------------------------------------------------------------------------
# property tests

@st.composite
def rational_dists(draw, n=None, min_size=2, max_size=5, allow_zero=True):
    if n is None:
        n = draw(st.integers(min_size, max_size))
    raw = draw(
        st.lists(
            st.integers(0 if allow_zero else 1, 8), min_size=n, max_size=n
        ).filter(lambda xs: sum(xs) > 0)
    )
    total = sum(raw)
    return Dist(
        tuple("s%d" % i for i in range(n)),
        tuple(Fraction(r, total) for r in raw),
    )


@st.composite
def dist_and_partition(draw):
    mu = draw(rational_dists(min_size=2, max_size=6, allow_zero=False))
    n = len(mu.space)
    k = draw(st.integers(1, n))
    assignment = draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    cells = {}
    for s, a in zip(mu.space, assignment):
        cells.setdefault(a, []).append(s)
    return mu, list(cells.values())


@given(rational_dists())
def test_pushforward_preserves_mass(mu):
    proj = {s: "even" if i % 2 == 0 else "odd" for i, s in enumerate(mu.space)}
    out = pushforward(mu, proj, ("even", "odd"))
    assert sum(out.weights) == 1


@given(dist_and_partition())
def test_conditioning_total_probability(case):
    mu, cells = case
    for s in mu.space:
        total = sum(
            mu.mass(cell) * condition(mu, cell)[s] for cell in cells
        )
        assert total == mu[s]


@given(rational_dists(n=4, allow_zero=False), rational_dists(n=4))
def test_rn_reconstruction_over_all_subsets(prior, belief):
    d = rn_derivative(prior, belief)
    for mask in range(1 << 4):
        subset = [s for i, s in enumerate(prior.space) if mask >> i & 1]
        integral = sum(d.f.get(s, 0) * prior[s] for s in subset)
        assert integral == belief.mass(subset)


@given(rational_dists(n=4, allow_zero=False), rational_dists(n=4))
def test_epsilon_in_unit_interval(prior, belief):
    d = rn_derivative(prior, belief)
    assert 0 < d.epsilon <= 1
    assert (d.epsilon == 1) == belief.matches(prior)


@given(dist_and_partition())
def test_martingale_holds_for_prior_conditionals(case):
    mu, cells = case
    weights = [mu.mass(cell) for cell in cells]
    posteriors = [condition(mu, cell) for cell in cells]
    holds, _ = martingale_check(weights, posteriors, mu)
    assert holds
