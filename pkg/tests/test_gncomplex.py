import itertools
import json

import numpy as np
import pytest

from detgb.gncomplex import (
    GNData,
    LinearMatrix,
    _adjugate_minors,
    adjugate,
    cofactor_system,
    determinant,
    e1_basis_labels,
    e1_coordinates,
    e1_element,
    syz1_generators,
    syz2_generators,
)
from detgb.ring import Polynomial, dot

P = 2147483647


def symbolic(n_entries, n, p=P):
    """Matrix whose (i,j) entry is the given variable index (0..3)."""
    ent = [[[1 if v == n_entries[i][j] else 0 for v in range(4)] for j in range(n)] for i in range(n)]
    return LinearMatrix(n, p, ent)


def poly_matmul(a, b):
    n, p = len(a), a[0][0].p
    out = [[Polynomial.zero(p) for _ in range(n)] for _ in range(n)]
    for i, j, l in itertools.product(range(n), repeat=3):
        out[i][j] = out[i][j] + a[i][l] * b[l][j]
    return out


def test_symbolic_2x2():
    m = symbolic([[0, 1], [2, 3]], 2)
    adj = adjugate(m)
    x = lambda v: Polynomial.linear([1 if i == v else 0 for i in range(4)], P)
    assert adj == [[x(3), -x(1)], [-x(2), x(0)]]
    assert cofactor_system(m) == [x(3), -x(2), -x(1), x(0)]


def test_constant_identity_adjugate():
    # identity matrix of constants, expressed as linear forms times x1
    m = LinearMatrix(3, P, [[[1 if i == j else 0, 0, 0, 0] for j in range(3)] for i in range(3)])
    adj = adjugate(m)
    x1sq = Polynomial({(2, 0, 0, 0): 1}, P)
    for i in range(3):
        for j in range(3):
            assert adj[i][j] == (x1sq if i == j else Polynomial.zero(P))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_adjugate_identity(n):
    m = LinearMatrix.random(n, P, seed=n)
    adj = adjugate(m)
    det = determinant(m)
    prod = poly_matmul(m.polys(), adj)
    for i in range(n):
        for j in range(n):
            assert prod[i][j] == (det if i == j else Polynomial.zero(P))
    if n <= 4:
        assert adj == _adjugate_minors(m)


def test_cofactors_are_signed_minors():
    m = LinearMatrix.random(3, P, seed=4)
    mp = m.polys()
    gens = cofactor_system(m)
    for i in range(3):
        for j in range(3):
            r = [a for a in range(3) if a != i]
            c = [b for b in range(3) if b != j]
            minor = mp[r[0]][c[0]] * mp[r[1]][c[1]] - mp[r[0]][c[1]] * mp[r[1]][c[0]]
            sign = 1 if (i + j) % 2 == 0 else P - 1
            assert gens[i * 3 + j] == minor.scale(sign)


def test_cofactor_homogeneity():
    m = LinearMatrix.random(3, P, seed=5)
    c = 12345
    mc = LinearMatrix(3, P, [[[x * c % P for x in e] for e in row] for row in m.entries])
    assert cofactor_system(mc) == [g.scale(pow(c, 2, P)) for g in cofactor_system(m)]


def test_small_prime_falls_back_to_minors():
    m = LinearMatrix.random(5, 5, seed=1)
    adj = adjugate(m)
    assert adj == _adjugate_minors(m)


def test_e1_coordinates_examples():
    n = 3
    labels = e1_basis_labels(n)
    assert len(labels) == 2 * n * n - 2
    for idx, lab in enumerate(labels):
        coords = e1_coordinates(*e1_element(lab, n, P))
        assert [k for k, c in enumerate(coords) if not c.is_zero()] == [idx]
    one = Polynomial({(0, 0, 0, 0): 1}, P)
    zero = Polynomial.zero(P)
    ident = [[one if i == j else zero for j in range(n)] for i in range(n)]
    assert all(c.is_zero() for c in e1_coordinates(ident, ident))
    u = [[zero] * n for _ in range(n)]
    v = [[zero] * n for _ in range(n)]
    u[0][0] = one
    with pytest.raises(ValueError):
        e1_coordinates(u, v)


def test_syz_counts_and_zero_matrix():
    m = LinearMatrix.random(3, P, seed=1)
    assert len(syz1_generators(m)) == 16 and len(syz2_generators(m)) == 9
    z = LinearMatrix(3, P, [[[0] * 4] * 3] * 3)
    assert all(v.is_zero() for v in syz1_generators(z))


def test_syz1_2x2_hand_example():
    m = symbolic([[0, 1], [2, 3]], 2)
    v = syz1_generators(m)[0]  # (E_12, 0) -> E_12 * M
    ent = v.entries()
    assert ent[0] == Polynomial.linear([0, 0, 1, 0], P)
    assert ent[1] == Polynomial.linear([0, 0, 0, 1], P)
    assert dot(v, cofactor_system(m)).is_zero()


@pytest.mark.parametrize("n", [3, 4])
def test_complex_is_exact_at_each_stage(n):
    g = GNData(LinearMatrix.random(n, P, seed=7))
    assert all(dot(v, g.generators).is_zero() for v in g.syz1)
    for w in g.syz2:
        coeffs = w.entries()
        acc = [Polynomial.zero(P)] * (n * n)
        for c, v in zip(coeffs, g.syz1):
            if not c.is_zero():
                acc = [a + c * e for a, e in zip(acc, v.entries())]
        assert all(a.is_zero() for a in acc)


def test_json_round_trip_and_determinism():
    a = LinearMatrix.random(3, P, seed=1)
    assert LinearMatrix.from_json(json.loads(json.dumps(a.to_json()))) == a
    assert LinearMatrix.random(3, P, seed=1) == a
    assert LinearMatrix.random(3, P, seed=2) != a
    assert np.asarray(a.coeff_array()).size == 36
    bad = a.to_json()
    bad["entries"][0][0][0] = P
    with pytest.raises(ValueError):
        LinearMatrix.from_json(bad)
