import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from diffset import (HADAMARD_16_6_2, PALEY_27_13_6, SINGER_13_4_1,  # noqa: E402
                     DifferenceSet)
from group_core import AbelianGroup  # noqa: E402


@pytest.fixture
def z13():
    return AbelianGroup.cyclic(13)


@pytest.fixture
def singer13(z13):
    return DifferenceSet.certify(z13, [z13.element(i) for i in SINGER_13_4_1], family="singer")


@pytest.fixture
def hadamard16():
    group = AbelianGroup.elementary(2, 4)
    return DifferenceSet.certify(group, [group.element(c) for c in HADAMARD_16_6_2], "hadamard")


@pytest.fixture
def paley27():
    group = AbelianGroup.elementary(3, 3)
    return DifferenceSet.certify(group, [group.element(c) for c in PALEY_27_13_6], "paley")
