# coding=utf-8
#
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Test the heisenberg.py file."""

from dataclasses import replace
import logging
import random

import numpy as np
import pytest

from heislift.errors import DimensionMismatch
from heislift.errors import InvalidModPSolution
from heislift.errors import NotHeisenbergH1
from heislift.errors import NotHeisenbergH2
from heislift.errors import SearchSpaceTooLarge
from heislift.heisenberg import heisenberg
from heislift.heisenberg.heisenberg import HeisenbergSystem
from heislift.heisenberg.heisenberg import ModPSolution
from heislift.padic.padic_core import AtLeast
from heislift.padic.padic_core import PadicScalar

HEISLIFT_TEST_LOG = logging.getLogger("heislift_test")
logging.basicConfig(level=logging.DEBUG)
logging.getLogger("flake8").setLevel(logging.ERROR)


def sum_of_squares(precision=32):
    """HeisenbergSystem: x1² + x2² = 0 over Z_5."""
    return HeisenbergSystem.from_lists(5, [[[1, 0], [0, 1]]], [[]], t=0, precision=precision)


def test_check_h1():
    """Empty d, cyclic torsion and a rank-two cokernel."""
    report = heisenberg.check_h1(sum_of_squares())
    assert report.holds
    assert report.kind == "free"

    torsion = HeisenbergSystem.from_lists(3, [[[1]]], [[3]], precision=8)
    report = heisenberg.check_h1(torsion)
    assert report.holds
    assert report.kind == "torsion"
    assert report.coordinates.exponent == 1

    zero = HeisenbergSystem.from_lists(5, [[[1]], [[1]]], [[0, 0], [0, 0]], precision=8)
    report = heisenberg.check_h1(zero)
    assert not report.holds
    assert report.invariants.free_rank == 2


def test_check_h2():
    """Witness search in lexicographic order."""
    assert heisenberg.check_h2(HeisenbergSystem.from_lists(5, [[[1]]], [[]], t=0)) == (1,)
    assert heisenberg.check_h2(HeisenbergSystem.from_lists(5, [[[0, 0], [0, 0]]], [[]], t=0)) is None
    antidiagonal = HeisenbergSystem.from_lists(5, [[[0, 1], [1, 0]]], [[]], t=0)
    assert heisenberg.check_h2(antidiagonal) == (1, 1)


def test_check_h2_needs_h1():
    """H2 is only decided once H1 holds."""
    zero = HeisenbergSystem.from_lists(5, [[[1]], [[1]]], [[0, 0], [0, 0]], precision=8)
    with pytest.raises(NotHeisenbergH1):
        heisenberg.check_h2(zero)


def test_enumerate_examples():
    """Counts of the documented small systems."""
    solutions = heisenberg.enumerate_mod_p(sum_of_squares())
    assert len(solutions) == 9
    assert solutions[0] == ModPSolution((0, 0), ())
    assert ModPSolution((1, 2), ()) in solutions
    assert all((sol.xbar[0] ** 2 + sol.xbar[1] ** 2) % 5 == 0 for sol in solutions)
    assert [sol.as_tuple() for sol in solutions] == sorted(sol.as_tuple() for sol in solutions)

    zero = HeisenbergSystem.from_lists(3, [[[0, 0], [0, 0]]], [[0]], precision=4)
    assert len(heisenberg.enumerate_mod_p(zero)) == 3 ** 3

    graph = HeisenbergSystem.from_lists(3, [[[1]]], [[1]], precision=4)
    solutions = heisenberg.enumerate_mod_p(graph)
    assert [(sol.xbar[0], sol.ybar[0]) for sol in solutions] == [(0, 0), (1, 2), (2, 2)]


def test_enumerate_independent_of_workers():
    """The merged list does not depend on the number of processes."""
    system = HeisenbergSystem.from_lists(3, [[[1, 1], [1, 2]]], [[1]], precision=4)
    assert heisenberg.enumerate_mod_p(system, workers=1) == heisenberg.enumerate_mod_p(system, workers=3)


def test_enumerate_budget():
    """The search refuses more than budget candidates."""
    with pytest.raises(SearchSpaceTooLarge):
        heisenberg.enumerate_mod_p(sum_of_squares(), budget=24)


def test_lift_square_root_of_minus_one():
    """(1, 2) lifts to (1, √−1)."""
    system = sum_of_squares()
    result = heisenberg.lift(system, ModPSolution((1, 2), ()))
    assert not result.field_descriptor.is_extension
    assert result.x[0].residue == 1
    assert result.x[1].residue % 5 == 2
    assert (result.x[0] * result.x[0] + result.x[1] * result.x[1]).is_zero()
    report = heisenberg.verify(system, result)
    assert report.exact
    assert heisenberg.valuation_lower_bound(report.minimum) >= result.achieved_prec


def test_lift_zero_solution_with_torsion():
    """x² + 3y = 0 lifts the zero solution."""
    system = HeisenbergSystem.from_lists(3, [[[1]]], [[3]], precision=16)
    result = heisenberg.lift(system, ModPSolution((0,), (0,)))
    assert result.x[0].reduce() == 0
    assert result.y[0].reduce() == 0
    assert heisenberg.verify(system, result).exact


def test_lift_errors():
    """Invalid reductions and non-Heisenberg systems are rejected."""
    with pytest.raises(InvalidModPSolution):
        heisenberg.lift(sum_of_squares(), ModPSolution((1, 1), ()))
    with pytest.raises(InvalidModPSolution):
        heisenberg.lift(sum_of_squares(), ModPSolution((1,), ()))
    zero_form = HeisenbergSystem.from_lists(5, [[[0, 0], [0, 0]]], [[]], t=0)
    with pytest.raises(NotHeisenbergH2):
        heisenberg.lift(zero_form, ModPSolution((1, 0), ()))


def test_verify_detects_perturbation():
    """Moving x1 by 5^3 leaves a residual of valuation exactly 3."""
    system = sum_of_squares()
    result = heisenberg.lift(system, ModPSolution((1, 2), ()))
    shifted = replace(result, x=(result.x[0] + 5 ** 3, result.x[1]))
    assert heisenberg.verify(system, shifted).valuations == (3,)


def test_verify_zero_system():
    """Any input solves the zero system to full precision."""
    system = HeisenbergSystem.from_lists(5, [[[0]]], [[0]], precision=6)
    result = heisenberg.LiftResult((PadicScalar.from_int(5, 7, 6),), (PadicScalar.from_int(5, 3, 6),),
                                   None, 6, (1,), None)
    assert heisenberg.verify(system, result).valuations == (AtLeast(6),)


def test_system_documents():
    """Documents round trip and declared shapes are checked."""
    system = HeisenbergSystem.from_lists(3, [[[1, 0], [0, 2]]], [[3]], precision=8)
    doc = heisenberg.system_to_document(system)
    assert heisenberg.system_from_document(doc) == system
    with pytest.raises(DimensionMismatch):
        heisenberg.system_from_document(dict(doc, r=3))


def random_heisenberg_systems(rng, count, max_dim=3, max_candidates=3 ** 5):
    """Yield random systems passing H1 and H2 with a small mod-p search space."""
    produced = 0
    while produced < count:
        prime = rng.choice((3, 5, 7))
        r, s = rng.randint(1, max_dim), rng.randint(1, max_dim)
        t = rng.choice((s - 1, s)) if s > 1 else rng.randint(0, 1)
        t = min(t, max_dim)
        if prime ** (r + t) > max_candidates:
            continue
        modulus = prime ** 32
        sigma = []
        for _ in range(s):
            form = [[0] * r for _ in range(r)]
            for i in range(r):
                for j in range(i, r):
                    form[i][j] = form[j][i] = rng.randrange(modulus)
            sigma.append(form)
        d = [[prime ** rng.randrange(3) * rng.randrange(modulus) for _ in range(t)] for _ in range(s)]
        system = HeisenbergSystem.from_lists(prime, sigma, d, t=t, precision=32)
        if not heisenberg.check_h1(system).holds or heisenberg.check_h2(system) is None:
            continue
        produced += 1
        yield system


def linear_coefficient_is_unit(system, solution, witness):
    """bool: x̄^tΣ'_1 f + f^tΣ'_1 x̄ is non-zero mod p in adapted coordinates."""
    adapted = heisenberg.adapted_system(system, heisenberg.check_h1(system).coordinates)
    first = adapted.mod_p_arrays()[0][0]
    xbar = np.array(solution.xbar, dtype=np.int64)
    direction = np.array(witness, dtype=np.int64)
    return bool((xbar.dot(first).dot(direction) + direction.dot(first).dot(xbar)) % system.prime)


def check_round_trip(system):
    """Lift every mod-p solution, verify it and check that it reduces to the solution.

    Returns:
        int: Number of lifts that needed a quadratic extension
    """
    extensions = 0
    solutions = heisenberg.enumerate_mod_p(system)
    assert solutions
    for solution in solutions:
        result = heisenberg.lift(system, solution)
        assert result.achieved_prec >= 28
        report = heisenberg.verify(system, result)
        assert heisenberg.valuation_lower_bound(report.minimum) >= result.achieved_prec
        for lifted, bar in zip(result.x + result.y, solution.as_tuple()):
            assert heisenberg.valuation_lower_bound((lifted - bar).valuation()) > 0
        if linear_coefficient_is_unit(system, solution, result.witness):
            assert not result.field_descriptor.is_extension
        extensions += result.field_descriptor.is_extension
    return extensions


def test_round_trip():
    """Lifts of every solution of random Heisenberg systems verify and reduce correctly."""
    for system in random_heisenberg_systems(random.Random(21), 12, max_dim=2):
        check_round_trip(system)


@pytest.mark.slow
def test_round_trip_acceptance():
    """200 random systems over p in {3, 5, 7}, r, s, t <= 3."""
    extensions = sum(check_round_trip(system) for system in random_heisenberg_systems(random.Random(22), 200))
    HEISLIFT_TEST_LOG.info("%d lifts needed a quadratic extension", extensions)
