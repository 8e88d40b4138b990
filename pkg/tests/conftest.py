import math

import numpy as np
import pytest

# triangle used throughout the worked examples
REF_TRIANGLE = ((1.0, 0.0, 0.0), (1.0 / 3.0, 2.0, 1.0), (0.5, -1.0, 1.0))


@pytest.fixture
def ref_triangle():
    return REF_TRIANGLE


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_params(rng, n, t_max=3.0, t_min=0.05):
    return np.column_stack([rng.uniform(-math.pi, math.pi, n),
                            rng.uniform(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3, n),
                            rng.uniform(t_min, t_max, n)])


# --------------------------------------------------------------------------
# acceptance summary: one line per criterion after the run
# --------------------------------------------------------------------------

def _table(config):
    if not hasattr(config, "_nilgeom_acceptance"):
        config._nilgeom_acceptance = {}
    return config._nilgeom_acceptance


@pytest.fixture
def criterion(request):
    """``record(number, title, ok, detail)``; parts of one criterion are ANDed."""
    table = _table(request.config)

    def record(number, title, ok, detail):
        prev = table.get(number)
        if prev is None:
            table[number] = [title, bool(ok), [detail]]
        else:
            prev[1] = prev[1] and bool(ok)
            prev[2].append(detail)
        print(f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} ({detail})")

    return record


def pytest_terminal_summary(terminalreporter, config):
    table = _table(config)
    if not table:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(table):
        title, ok, details = table[number]
        terminalreporter.write_line(f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} "
                                    f"({'; '.join(details)})")
