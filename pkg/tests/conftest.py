import pytest
from fractions import Fraction

from quintic_lines import polytope, curves, search


@pytest.fixture(scope="session")
def heights1():
    return polytope.make_heights(1, Fraction(1, 100))


@pytest.fixture(scope="session")
def curveset1(heights1):
    return curves.build_curve_set(heights1)


@pytest.fixture(scope="session")
def facet0_census(curveset1):
    return search.enumerate_facet(curveset1, 0)
