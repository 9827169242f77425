from __future__ import annotations

import numpy as np
import pytest

from cosserat.params import DislocationParams


def random_valid_dislocation(rng: np.random.Generator, L_c: float = 1.0) -> DislocationParams:
    """Positive definite parameter set with moderate ratios."""
    mu_e = rng.uniform(0.5, 5.0)
    lam = rng.uniform(-0.5 * mu_e, 5.0 * mu_e)
    a1 = rng.uniform(0.1, 3.0)
    a2 = rng.uniform(0.0, 3.0)
    a3 = rng.uniform(0.0, 3.0)
    return DislocationParams(
        lambda_e=lam,
        mu_e=mu_e,
        mu_c=rng.uniform(0.05, 3.0) * mu_e,
        L_c=L_c,
        alpha1=a1,
        alpha2=a2,
        alpha3=(2.0 / 3.0) * (4.0 * a3 - a1),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture
def sample_params():
    return DislocationParams(lambda_e=1.3, mu_e=2.1, mu_c=0.7, L_c=0.9, alpha1=1.1, alpha2=0.4, alpha3=-0.3)
