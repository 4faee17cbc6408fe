import numpy as np
import pytest

from divbounds.model import PricingProblem


def table1_problem(**overrides) -> PricingProblem:
    base = dict(spot=110.0, strike=100.0, rate=0.03, volatility=0.2, maturity=1.0,
                dividend_amount=5.0, dividend_time=0.5, drift=0.01)
    base.update(overrides)
    return PricingProblem.from_values(**base)


def random_problems(n: int, seed: int, max_div_frac: float = 0.5) -> list[PricingProblem]:
    """Problems drawn from the box used by the sandwich acceptance check."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        s = rng.uniform(20, 300)
        t = rng.uniform(0.1, 3.0)
        out.append(PricingProblem.from_values(
            spot=s,
            strike=rng.uniform(20, 300),
            rate=rng.uniform(0.0, 0.1),
            volatility=rng.uniform(0.05, 0.8),
            maturity=t,
            dividend_amount=rng.uniform(0.0, max_div_frac * s),
            dividend_time=t * rng.uniform(0.01, 0.99),
        ))
    return out


@pytest.fixture
def problem() -> PricingProblem:
    return table1_problem()


# Published (S*, M) -> (lower, upper, epsilon) for the reference parameters
TABLE1 = {
    (103.5, 10): (11.24, 15.41, 4.166),
    (103.5, 50): (11.61, 15.35, 3.739),
    (103.5, 400): (11.63, 15.35, 3.721),
    (155.3, 10): (11.39, 13.20, 1.807),
    (155.3, 50): (12.79, 12.88, 0.096),
    (155.3, 200): (12.87, 12.87, 0.006),
    (155.3, 400): (12.87, 12.87, 0.002),
    (207.0, 10): (10.64, 13.45, 2.813),
    (207.0, 50): (12.72, 12.89, 0.170),
    (207.0, 200): (12.86, 12.87, 0.011),
    (207.0, 400): (12.87, 12.87, 0.003),
}


_ACCEPTANCE: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: one test per acceptance criterion")


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_ac" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.failed:
        _ACCEPTANCE[name] = "FAIL"
    elif report.when == "call" and report.passed:
        _ACCEPTANCE.setdefault(name, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[1][2:])):
        number, _, label = name.removeprefix("test_ac").partition("_")
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  criterion {number}: {label.replace('_', ' ')}")
