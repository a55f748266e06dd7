import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def surface_points(rng, d, P, tmin=0.05, tmax=4.0):
    z = rng.standard_normal((P, d))
    t = tmin + (tmax - tmin) * rng.random(P)
    return z / np.linalg.norm(z, axis=1)[:, None] * t[:, None], t


def solid_points(rng, d, P, tmin=0.05, tmax=4.0):
    z = rng.standard_normal((P, d))
    z /= np.linalg.norm(z, axis=1)[:, None]
    t = tmin + (tmax - tmin) * rng.random(P)
    r = rng.random(P) ** (1.0 / d)
    return z * (r * t)[:, None], t


def sphere_points(rng, d, P):
    z = rng.standard_normal((P, d))
    return z / np.linalg.norm(z, axis=1)[:, None]
