import numpy as np
import pytest

from flowspec import backend


@pytest.fixture(params=backend.available_backends())
def any_backend(request):
    """Run a test under every available kernel backend, restoring the default."""
    previous = backend.active_backend()
    backend.use_backend(request.param)
    yield request.param
    backend.use_backend(previous)


def random_orthonormal(m, k, seed):
    """Deterministic m x k matrix with orthonormal columns (QR of a Gaussian)."""
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((m, k)))
    return q
