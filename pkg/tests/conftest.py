import numpy as np
import pytest

from diractomo import RepKind, make_representation


@pytest.fixture(scope="session")
def reps():
    return {kind: make_representation(kind)
            for kind in (RepKind.MAJORANA, RepKind.STANDARD, RepKind.CHIRAL)}


@pytest.fixture()
def rng():
    return np.random.default_rng(20260824)


def random_unitary(rng, n=4):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
