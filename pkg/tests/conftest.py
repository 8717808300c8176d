import numpy as np
import pytest

from scanclean.config import SuppressionParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_params():
    # 8 kHz, 20 ms periods: short buffers keep brute-force oracles fast
    return SuppressionParams(l_est=0.02, w=0.001, s_r=8000.0, theta_xcorr=0.9, theta_corr=0.8,
                             lowpass_cutoff=3000.0)


@pytest.fixture
def default_params():
    return SuppressionParams()


def periodic_signal(rng, period, n, noise=0.0):
    """A random waveform repeated every ``period`` samples."""
    base = rng.standard_normal(period)
    reps = -(-n // period)
    x = np.tile(base, reps)[:n]
    if noise:
        x = x + noise * rng.standard_normal(n)
    return x


def pytest_configure(config):
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = mark.args
    measured = dict(item.user_properties).get("measured", "")
    item.config._criteria[number] = (title, report.passed, measured)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_criteria", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok, measured = results[number]
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        if measured:
            line += f"  [{measured}]"
        terminalreporter.write_line(line)
