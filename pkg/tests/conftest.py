import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from yao4.build import PointSet
from yao4.geom import Point

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

coord = st.integers(min_value=-50, max_value=50)
points = st.builds(Point, coord, coord)


@st.composite
def point_sets(draw, min_size=1, max_size=25, lo=-40, hi=40):
    """Distinct integer points; small ranges so ties and shared axes show up."""
    pts = draw(
        st.lists(
            st.tuples(st.integers(lo, hi), st.integers(lo, hi)),
            min_size=min_size,
            max_size=max_size,
            unique=True,
        )
    )
    return PointSet.from_coords(pts)


@st.composite
def clean_point_sets(draw, min_size=2, max_size=30):
    """Point sets in general position, rejection-sampled from a wide grid."""
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(min_size, max_size))
    rng = np.random.default_rng(seed)
    while True:
        xs = rng.choice(10**6, size=n, replace=False)
        ys = rng.choice(10**6, size=n, replace=False)
        ps = PointSet.from_coords(zip(xs.tolist(), ys.tolist()))
        if ps.validation.clean:
            return ps


@pytest.fixture(scope="session")
def random_sets():
    from yao4.generators import gen_random

    return [gen_random(120, seed).point_set for seed in range(8)]
