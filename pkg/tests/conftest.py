"""Shared presentations and paths for the test suite."""

from pathlib import Path

import pytest

from fpcensus.presentation import Presentation, parse_presentation

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"

S3 = "< a, b | a^2, b^2, (a*b)^3 >"
DIHEDRAL8 = "< r, s | r^4, s^2, (s*r)^2 >"
QUATERNION = "< a, b | a^4, a^2*b^-2, b^-1*a*b*a >"
KLEIN4 = "< a, b | a^2, b^2, [a,b] >"
CYCLIC8 = "< a | a^8 >"
FREE2 = "< a, b | >"
FREE3 = "< a, b, c | >"
SURFACE2 = "< a, b, c, d | [a,b]*[c,d] >"
A4 = "< s, t | s^2, t^3, (s*t)^3 >"


@pytest.fixture
def s3() -> Presentation:
    return parse_presentation(S3)


@pytest.fixture
def dihedral8() -> Presentation:
    return parse_presentation(DIHEDRAL8)


@pytest.fixture
def quaternion() -> Presentation:
    return parse_presentation(QUATERNION)


@pytest.fixture
def klein4() -> Presentation:
    return parse_presentation(KLEIN4)


@pytest.fixture
def cyclic8() -> Presentation:
    return parse_presentation(CYCLIC8)


@pytest.fixture
def free2() -> Presentation:
    return parse_presentation(FREE2)


@pytest.fixture
def surface2() -> Presentation:
    return parse_presentation(SURFACE2)


@pytest.fixture
def a4() -> Presentation:
    return parse_presentation(A4)


@pytest.fixture
def presentations_dir() -> Path:
    return FIXTURES / "presentations"


@pytest.fixture
def expected_csv() -> str:
    return (FIXTURES / "expected" / "census_index4.csv").read_text(encoding="utf-8")
