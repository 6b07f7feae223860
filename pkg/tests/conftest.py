import numpy as np
import pytest

from iatpcs._backend import HAVE_NUMBA
from iatpcs.censoring import CensoringPlan, IatSample, classify

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def make_sample(times, delta, removals, r_star, t_star, t1, t2, m=None, planned=None):
    """Hand-built sample; the plan is completed so unit accounting holds."""
    times = list(times)
    m = m if m is not None else len(times)
    n = len(times) + sum(removals) + r_star
    if planned is None:
        planned = list(removals) + [0] * (m - len(times))
        planned[-1] += n - m - sum(planned)
    plan = CensoringPlan(n, m, tuple(planned), t1, t2)
    return IatSample(
        plan=plan,
        times=times,
        delta=delta,
        effective_removals=removals,
        case=classify(times, m, t1, t2),
        r_star=r_star,
        t_star=t_star,
    )


@pytest.fixture
def toy_sample():
    # times (1,2,3), removal 1 at the first failure, terminated at t2 = 3.5
    # with two survivors; two cause-1 failures and one cause-2 failure.
    return make_sample([1.0, 2.0, 3.0], [1, 0, 1], [1, 0, 0], r_star=2, t_star=3.5, t1=2.5, t2=3.5, m=4)


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


# One line per acceptance criterion, echoed at the end of the session.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
