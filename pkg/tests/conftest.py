from fractions import Fraction

import pytest

from beliefcheck import Dist, Observation, WeightedPosteriors

S2 = ("H", "L")


@pytest.fixture
def worked_example():
    """The two-state observation: prior 1/2-1/2, a quarter of the agents at
    (0.8, 0.2) and three quarters at (1, 0)."""
    prior = Dist(S2, (Fraction(1, 2), Fraction(1, 2)))
    posteriors = WeightedPosteriors(
        (
            (Fraction(1, 4), Dist(S2, (Fraction(4, 5), Fraction(1, 5)))),
            (Fraction(3, 4), Dist(S2, (Fraction(1), Fraction(0)))),
        )
    )
    return Observation(prior, posteriors)


@pytest.fixture
def worked_example_file(tmp_path, worked_example):
    from beliefcheck import save_observation

    path = tmp_path / "worked.json"
    save_observation(worked_example, path)
    return path
