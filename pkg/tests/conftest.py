import numpy as np
import pytest

from randsymp.rng import stream
from randsymp.symplectic import SnapshotMatrix


def complex_normal(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def orthonormal(rng, n, k):
    Q, _ = np.linalg.qr(complex_normal(rng, (n, k)))
    return Q


def snapshots_with_spectrum(seed, N, n_s, sigma):
    """Real snapshot matrix whose complexification has singular values ``sigma``."""
    rng = stream(seed, "test")
    r = len(sigma)
    U = orthonormal(rng, N, r)
    V = orthonormal(rng, n_s, r)
    Xc = (U * np.asarray(sigma)) @ V.conj().T
    return SnapshotMatrix(np.vstack([Xc.real, Xc.imag]))


def random_snapshots(seed, N, n_s):
    rng = stream(seed, "test")
    return SnapshotMatrix(rng.standard_normal((2 * N, n_s)))


def gapped_spectrum(r, k, l, gap=10.0, decay=0.9):
    """Geometric spectrum with ``sigma_k / sigma_{l+1} = gap``."""
    s = decay ** np.arange(r, dtype=float)
    s[l:] = s[l:] * (s[k - 1] / gap) / s[l]
    return s


@pytest.fixture(scope="session")
def desk_snapshots():
    from randsymp import wave2d

    return wave2d.collect_snapshots(wave2d.WaveModelConfig.desk(), wave2d.mu_values())


ACCEPTANCE = {}


def record_criterion(number, passed, detail):
    """Print and remember one acceptance line; ``passed=None`` means not run."""
    status = {True: "PASS", False: "FAIL", None: "NOT RUN"}[passed]
    line = f"criterion {number:2d}: {status}  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
