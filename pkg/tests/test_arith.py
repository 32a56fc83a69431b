import math

import numpy as np
import pytest

from zetalab.arith import MangoldtTable, default_table, log_plus, mangoldt
from zetalab.errors import PreconditionError


def test_log_plus_cases():
    assert log_plus(0.5) == 0.0
    assert log_plus(math.e) == pytest.approx(1.0, abs=1e-15)
    assert log_plus(1.0) == 0.0
    assert log_plus(0.0) == 0.0


def test_log_plus_rejects_negative():
    with pytest.raises(PreconditionError):
        log_plus(-0.1)


def test_log_plus_dominates_log():
    rng = np.random.default_rng(7)
    for x in rng.uniform(1e-6, 50.0, 200):
        assert log_plus(float(x)) >= math.log(x) - 1e-15


def test_mangoldt_values():
    assert mangoldt(8) == pytest.approx(math.log(2), abs=1e-15)
    assert mangoldt(6) == 0.0
    assert mangoldt(7) == pytest.approx(math.log(7), abs=1e-15)
    assert mangoldt(1) == 0.0
    with pytest.raises(PreconditionError):
        mangoldt(0)


def test_table_matches_scalar():
    table = MangoldtTable(500)
    for n in range(1, 501):
        assert table.value(n) == pytest.approx(mangoldt(n), abs=0)


def test_table_descriptors_exact():
    table = MangoldtTable(1000)
    assert table.descriptor(729) == (3, 6)
    assert table.descriptor(997) == (997, 1)
    assert table.descriptor(12) is None


def test_divisor_sum_identity():
    # sum over divisors d of n of Lambda(d) telescopes to log n.
    limit = 10**4
    table = default_table(limit)
    acc = np.zeros(limit + 1)
    for n, p, _k in table.prime_powers():
        acc[n::n] += math.log(p)
    ns = np.arange(2, limit + 1)
    assert float(np.max(np.abs(acc[2:] - np.log(ns)))) < 1e-12
