"""
Shared fixtures for the Cuspidal Tables test suite
"""

import random

import pytest

from cuspidal_tables.catalog import load_catalog
from cuspidal_tables.core.grading import build_theta, cartan_subspace, torus_fixed_points
from cuspidal_tables.core.littleweyl import build_little_weyl
from cuspidal_tables.core.rootsys import build_root_system
from cuspidal_tables.core.verifier import CaseVerifier

PROPERTY_SEED = 20240612


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def record(catalog):
    """Look up a catalog case by its normalized label"""
    by_label = {r.label: r for r in catalog}
    return by_label.__getitem__


@pytest.fixture(scope="session")
def datum():
    """Root systems built once per session"""
    cache = {}

    def get(label):
        if label not in cache:
            cache[label] = build_root_system(label)
        return cache[label]
    return get


@pytest.fixture(scope="session")
def analyzed():
    """Case reports computed once per session"""
    verifier = CaseVerifier()
    cache = {}

    def run(label):
        if label not in cache:
            cache[label] = verifier.verify(label)
        return cache[label]
    return run


@pytest.fixture
def rng():
    return random.Random(PROPERTY_SEED)


@pytest.fixture(scope="session")
def little_weyl(record):
    """Little Weyl groups of catalog gradings with a stated theta"""
    cache = {}

    def get(label):
        if label not in cache:
            theta = build_theta(record(label).grading)
            cache[label] = build_little_weyl(theta, cartan_subspace(theta), torus_fixed_points(theta))
        return cache[label]
    return get
