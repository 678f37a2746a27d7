"""Deformed oscillator matrices, sectors, and the discrete-series combination."""

import numpy as np
import pytest

from qmeixner.errors import EmptySector, OutOfTruncation
from qmeixner.oscillator import (
    FockTruncation,
    ProductBasis,
    build_classical,
    build_J,
    build_oscillators,
    interior_indices,
    ladder_power_action,
    sector,
)
from qmeixner.qseries import QContext


def interior_block(m: np.ndarray, basis: ProductBasis, margin: int) -> np.ndarray:
    mask = interior_indices(
        basis, basis.trunc.n_a_max - margin, basis.trunc.n_b_max - margin
    )
    return m[np.ix_(mask, mask)]


def test_truncation_validation():
    with pytest.raises(ValueError):
        FockTruncation(0, 4)


def test_basis_enumeration_roundtrip():
    basis = ProductBasis(FockTruncation(3, 5))
    for na in range(4):
        for nb in range(6):
            assert basis.state(basis.index(na, nb)) == (na, nb)
    with pytest.raises(OutOfTruncation):
        basis.index(4, 0)


def test_b_raising_coefficient():
    # <1| B+ |0> = sqrt((q^-1 - 1)/(1 - q)) = 2 at q = 0.25
    osc = build_oscillators(FockTruncation(2, 2), QContext(q=0.25))
    basis = osc.b0.basis
    assert osc.b_plus.entries[basis.index(0, 1), basis.index(0, 0)] == pytest.approx(
        2.0, rel=1e-15
    )


@pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
def test_oscillator_commutation_relations(q):
    ctx = QContext(q=q)
    t = FockTruncation(10, 10)
    osc = build_oscillators(t, ctx)
    basis = osc.a0.basis
    eye = np.eye(basis.dim)
    na = basis.na.astype(float)
    nb = basis.nb.astype(float)

    down_up_a = osc.a_minus.entries @ osc.a_plus.entries
    up_down_a = osc.a_plus.entries @ osc.a_minus.entries
    down_up_b = osc.b_minus.entries @ osc.b_plus.entries
    up_down_b = osc.b_plus.entries @ osc.b_minus.entries

    # raising annihilates the top level, so check away from the edge; the
    # B products reach size q^-nb, so residuals are scaled by the operands
    # (the cancellation q B-B+ - B+B- = 1 cannot do better than that in
    # doubles)
    for t1, t2, rhs in [
        (down_up_a, q * up_down_a, eye),
        (down_up_a, up_down_a, np.diag(q**na)),
        (q * down_up_b, up_down_b, eye),
        (down_up_b, up_down_b, np.diag(q ** (-nb - 1.0))),
    ]:
        scale = np.maximum(np.maximum(np.abs(t1), np.abs(t2)), 1.0)
        scaled = np.abs(t1 - t2 - rhs) / scale
        assert interior_block(scaled, basis, 2).max() <= 1e-12


@pytest.mark.parametrize("q", [0.5, 0.9])
def test_j_commutation_relation(q):
    ctx = QContext(q=q)
    j = build_J(FockTruncation(10, 10), ctx)
    basis = j.j0.basis
    na = basis.na.astype(float)
    nb = basis.nb.astype(float)
    t1 = j.j_plus.entries @ j.j_minus.entries
    t2 = j.j_minus.entries @ j.j_plus.entries
    # on the product space the commutator is diagonal in both number
    # operators; it collapses to -2 J0 only in the q -> 1 limit
    expected = -np.diag(q * (q**-na - q ** (nb + 1.0)) / (1.0 - q))
    scale = np.maximum(np.maximum(np.abs(t1), np.abs(t2)), 1.0)
    scaled = np.abs(t1 - t2 - expected) / scale
    assert interior_block(scaled, basis, 2).max() <= 1e-12
    for sign, ladder in [(1.0, j.j_plus.entries), (-1.0, j.j_minus.entries)]:
        comm0 = j.j0.entries @ ladder - ladder @ j.j0.entries
        assert np.abs(interior_block(comm0 - sign * ladder, basis, 2)).max() <= 1e-12


def test_sector_enumeration():
    sec = sector(FockTruncation(2, 4), 3)
    basis = ProductBasis(FockTruncation(2, 4))
    assert [basis.state(i) for i in sec.indices] == [(0, 2), (1, 3), (2, 4)]


def test_sector_empty():
    with pytest.raises(EmptySector):
        sector(FockTruncation(4, 2), 5)


def test_sector_invariance_under_J():
    ctx = QContext(q=0.5)
    t = FockTruncation(6, 8)
    j = build_J(t, ctx)
    basis = j.j0.basis
    delta = basis.nb - basis.na  # beta - 1 is conserved
    for m in (j.j_plus.entries, j.j_minus.entries):
        rows, cols = np.nonzero(m)
        assert np.array_equal(delta[rows], delta[cols])


@pytest.mark.parametrize("which,power", [("lower", 0), ("lower", 2), ("raise", 3)])
def test_ladder_power_matches_matrices(which, power):
    ctx = QContext(q=0.6)
    t = FockTruncation(8, 10)
    osc = build_oscillators(t, ctx)
    basis = osc.a0.basis
    x, beta = 3, 2
    coeff, target = ladder_power_action(which, power, (x, beta), t, ctx)
    pair = (
        osc.a_minus.entries @ osc.b_minus.entries
        if which == "lower"
        else osc.a_plus.entries @ osc.b_plus.entries
    )
    m = np.linalg.matrix_power(pair, power)
    vec = np.zeros(basis.dim)
    vec[basis.index(x, x + beta - 1)] = 1.0
    out = m @ vec
    expect = np.zeros(basis.dim)
    if target is not None:
        expect[basis.index(target[0], target[0] + beta - 1)] = coeff
    assert np.abs(out - expect).max() <= 1e-12 * max(1.0, abs(coeff))


def test_ladder_power_bottom_and_top():
    ctx = QContext(q=0.6)
    t = FockTruncation(4, 5)
    coeff, target = ladder_power_action("lower", 5, (3, 2), t, ctx)
    assert coeff == 0.0 and target is None
    with pytest.raises(OutOfTruncation):
        ladder_power_action("raise", 3, (2, 2), t, ctx)


def test_classical_su11_commutator():
    cl = build_classical(FockTruncation(12, 12))
    basis = cl.j0.basis
    comm = cl.j_plus.entries @ cl.j_minus.entries - cl.j_minus.entries @ cl.j_plus.entries
    assert np.abs(
        interior_block(comm + 2.0 * cl.j0.entries, basis, 2)
    ).max() <= 1e-12
