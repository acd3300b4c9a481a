import numpy as np
import pytest


@pytest.fixture
def nprng():
    return np.random.default_rng(20240917)


def triple_loop_matmul(A, B):
    m, k = A.shape
    k2, n = B.shape
    assert k == k2
    C = np.zeros((m, n))
    for i in range(m):
        for j in range(n):
            acc = 0.0
            for p in range(k):
                acc += A[i, p] * B[p, j]
            C[i, j] = acc
    return C


def random_orthogonal(n, rng):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def power_method_norm(A, iters=2000, seed=0):
    x = np.random.default_rng(seed).standard_normal(A.shape[1])
    for _ in range(iters):
        x = A.T @ (A @ x)
        x /= np.linalg.norm(x)
    return np.linalg.norm(A @ x)


# One summary line per acceptance criterion, printed after the run.
_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    label, text = marker.args
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    outcome = "PASS" if call.excinfo is None else "FAIL"
    _criteria.append((label, outcome, text, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, text, detail in _criteria:
        line = f"[{outcome}] {label}: {text}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
