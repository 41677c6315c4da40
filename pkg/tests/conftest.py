"""Shared test fixtures for the madvec package."""

from typing import Callable, Dict, Generator, Iterable, List, Optional, Tuple

import numpy as np
import pytest

from madvec.config import FUEL
from madvec.field import FieldSpec
from madvec.madlab import ADFamily, triple_family_presets, residue_presets, two_adic_presets
from madvec.vectors import SparseVector

VectorFactory = Callable[..., SparseVector]


@pytest.fixture(autouse=True)
def reset_fuel() -> Generator[None, None, None]:
    """Start every test with an unlimited pull budget."""
    FUEL.reset(None)
    yield
    FUEL.reset(None)


@pytest.fixture(scope="session")
def gf2() -> FieldSpec:
    return FieldSpec.prime(2)


@pytest.fixture(scope="session")
def gf3() -> FieldSpec:
    return FieldSpec.prime(3)


@pytest.fixture(scope="session")
def gf5() -> FieldSpec:
    return FieldSpec.prime(5)


@pytest.fixture(scope="session")
def rationals() -> FieldSpec:
    return FieldSpec.rationals()


def make_vector(spec: FieldSpec, coords: Dict[int, int]) -> SparseVector:
    return SparseVector.from_mapping(spec, coords)


def basis_vectors(spec: FieldSpec, indices: Iterable[int]) -> List[SparseVector]:
    return [SparseVector.basis(spec, n) for n in indices]


@pytest.fixture
def vec(gf2: FieldSpec) -> VectorFactory:
    """Build a vector from indices (GF(2)) or from an index -> coefficient dict."""

    def build(
        *indices: int, spec: Optional[FieldSpec] = None, coords: Optional[Dict[int, int]] = None
    ) -> SparseVector:
        field = spec or gf2
        if coords is not None:
            return make_vector(field, coords)
        return SparseVector.from_indices(field, indices)

    return build


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def triple_family(gf2: FieldSpec) -> ADFamily:
    """Evens, odds and the pair pattern over GF(2), certified at depth 32."""
    return ADFamily.build(gf2, triple_family_presets(), depth=32)


@pytest.fixture(scope="session")
def residue6_family(gf2: FieldSpec) -> ADFamily:
    return ADFamily.build(gf2, residue_presets(6), depth=16)


@pytest.fixture(scope="session")
def two_adic_family(gf2: FieldSpec) -> ADFamily:
    return ADFamily.build(gf2, two_adic_presets(8), depth=16)


def random_block_sequence(
    rng: np.random.Generator, spec: FieldSpec, length: int, ceiling: int, start: int = 0
) -> Tuple[SparseVector, ...]:
    """
    A random block sequence with supports in [start, ceiling].

    Returns fewer vectors when the window runs out.
    """
    assert spec.p is not None
    xs = []
    for _ in range(length):
        if start > ceiling:
            break
        width = int(rng.integers(1, 4))
        stop = min(start + width, ceiling + 1)
        coords = {n: int(rng.integers(0, spec.p)) for n in range(start, stop)}
        coords[start] = int(rng.integers(1, spec.p))
        xs.append(make_vector(spec, coords))
        start = stop + int(rng.integers(0, 3))
    return tuple(xs)
