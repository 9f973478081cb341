import numpy as np
from scipy import integrate


def pytest_terminal_summary(terminalreporter):
    """Print the one-line-per-criterion acceptance scoreboard."""
    try:
        from test_acceptance import REPORT_LINES
    except ImportError:
        return
    if REPORT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(REPORT_LINES):
            terminalreporter.write_line(line)


def marginal_quadrature(component, y, breakpoints=()):
    """Independent oracle for a component's marginal likelihood at y.

    Adaptive quadrature of exp(log_likelihood + log_prior) over the
    component's support, split at any supplied interior breakpoints
    (e.g. a likelihood-support edge).
    """
    lo, hi = component.support

    def integrand(theta):
        return np.exp(float(component.log_likelihood(y, theta))
                      + float(component.log_prior(theta)))

    edges = [lo] + sorted(b for b in breakpoints if lo < b < hi) + [hi]
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        val, _ = integrate.quad(integrand, a, b, epsabs=1e-300, epsrel=1e-11,
                                limit=400)
        total += val
    return total
