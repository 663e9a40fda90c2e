import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from specmatch import families
from specmatch.graph import (Graph, complete, complete_bipartite, cycle, delete_vertices,
                             empty, is_connected, path, petersen)
from specmatch.spectral import (EigenToleranceError, MatrixKind, Partition, SpectralValue,
                                SymmetricMatrix, algebraic_connectivity, build_matrix,
                                eigen_counts, eigenvalue, exact_sign, householder_tridiagonal,
                                is_equitable, q1, quotient_matrix, quotient_spectral_radius)

from conftest import graphs, random_graph

TOL = 1e-9


def dense_eigs(m):
    return sorted(np.linalg.eigvalsh(m.to_numpy()), reverse=True)


def test_build_matrix_examples():
    assert build_matrix(path(3), MatrixKind.SIGNLESS_LAPLACIAN).entries == ((1, 1, 0), (1, 2, 1), (0, 1, 1))
    assert build_matrix(complete(2), "adjacency").entries == ((0, 1), (1, 0))
    lap = build_matrix(petersen(), MatrixKind.LAPLACIAN)
    assert all(s == 0 for s in lap.row_sums())
    with pytest.raises(ValueError):
        build_matrix(empty(0), "adjacency")


def test_matrix_printable():
    assert str(build_matrix(complete(2), "adjacency")) == "0 1\n1 0"


def test_eigenvalue_examples():
    assert eigenvalue(build_matrix(complete(4), "signless_laplacian"), 1, TOL).contains(6)
    q = build_matrix(path(3), "signless_laplacian")
    x = np.array([1.0, 2.0, 1.0])
    assert np.allclose(q.to_numpy() @ x, 3 * x)
    assert eigenvalue(q, 1, TOL).contains(3)
    a = build_matrix(petersen(), "adjacency")
    assert eigenvalue(a, 3, TOL).contains(1)
    assert abs(dense_eigs(a)[2] - 1) < 1e-12


def test_q1_examples():
    assert q1(complete(5)).contains(8)
    assert q1(cycle(5)).contains(4)
    assert q1(complete(1)).contains(0)


def test_algebraic_connectivity_examples():
    for n in (2, 4, 7):
        assert algebraic_connectivity(complete(n)).contains(n)
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert algebraic_connectivity(g).contains(0)
    assert algebraic_connectivity(cycle(5)).contains(2 - 2 * math.cos(2 * math.pi / 5), slack=1e-12)
    assert algebraic_connectivity(cycle(8)).contains(2 - 2 * math.cos(math.pi / 4), slack=1e-12)
    with pytest.raises(ValueError):
        algebraic_connectivity(complete(1))


def test_errors():
    m = build_matrix(cycle(4), "adjacency")
    with pytest.raises(IndexError):
        eigenvalue(m, 0)
    with pytest.raises(IndexError):
        eigenvalue(m, 5)
    with pytest.raises(ValueError):
        eigenvalue(m, 1, tol=0)
    with pytest.raises(EigenToleranceError):
        eigenvalue(m, 1, tol=1e-30)


def test_enclosure_width_and_containment_random():
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(2, 40))
        a = rng.normal(size=(n, n)) * rng.choice([0.1, 1, 50])
        a = (a + a.T) / 2
        m = SymmetricMatrix(tuple(tuple(float(x) for x in row) for row in a))
        ref = sorted(np.linalg.eigvalsh(a), reverse=True)
        for idx in {1, n, int(rng.integers(1, n + 1))}:
            enc = eigenvalue(m, idx, TOL)
            assert enc.lo <= enc.hi
            assert enc.width <= TOL * max(1, abs(enc.hi), abs(enc.lo))
            assert enc.contains(ref[idx - 1])


def test_tridiagonal_preserves_spectrum():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(12, 12))
    a = a + a.T
    d, e = householder_tridiagonal(a)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(a), atol=1e-12)


def test_graph_spectra_match_dense_oracle(corpus7):
    for g in corpus7[::7]:
        for kind in MatrixKind:
            m = build_matrix(g, kind)
            ref = dense_eigs(m)
            for idx in range(1, g.n + 1):
                assert eigenvalue(m, idx, TOL).contains(ref[idx - 1], slack=1e-12)


def test_q1_complete_graphs():
    for n in range(2, 51):
        assert q1(complete(n), TOL).contains(2 * n - 2)


def test_regular_identity():
    for g in (cycle(7), petersen(), complete(6), complete_bipartite(3, 3)):
        k = g.degree(0)
        assert q1(g).contains(2 * k)
        lam1 = eigenvalue(build_matrix(g, "adjacency"), 1)
        assert abs(lam1.mid + k - 2 * k) <= lam1.width + 1e-12


def test_monotonicity_under_subgraphs():
    rng = random.Random(2024)
    done = 0
    while done < 200:
        g = random_graph(rng, rng.randint(2, 10), rng.uniform(0.3, 0.9))
        if not is_connected(g):
            continue
        kept = [e for e in g.edges() if rng.random() < 0.6]
        h = Graph.from_edges(g.n, kept)
        drop = [v for v in range(g.n) if rng.random() < 0.2]
        if len(drop) < g.n:
            h = delete_vertices(h, drop)
        assert q1(h, TOL).hi <= q1(g, TOL).hi + 2 * TOL
        done += 1


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=1, max_n=12))
def test_row_sum_and_degree_sum_bounds(g):
    m = build_matrix(g, "signless_laplacian")
    enc = q1(g, TOL)
    assert enc.lo <= max(m.row_sums())
    if g.m:
        assert enc.lo <= max(g.degree(u) + g.degree(v) for u, v in g.edges()) + TOL


# ---------------------------------------------------------------- exact side


def test_charpoly_matches_numpy():
    rng = random.Random(8)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 12))
        for kind in MatrixKind:
            m = build_matrix(g, kind)
            assert np.allclose(m.charpoly, np.poly(m.to_numpy()), atol=1e-6 * max(1, max(map(abs, m.charpoly))))


def test_exact_counts_petersen():
    a = build_matrix(petersen(), "adjacency")
    assert eigen_counts(a, 1) == (1, 5)
    assert eigen_counts(a, -2) == (6, 4)
    assert eigen_counts(a, Fraction(5, 2)) == (1, 0)
    assert exact_sign(a, 3, 1) == 0
    assert exact_sign(a, 1, 3) == 0
    assert exact_sign(a, 7, 0) == -1
    assert exact_sign(a, 6, Fraction(99, 100)) == 1


def test_exact_sign_agrees_with_dense_oracle():
    rng = random.Random(4)
    for _ in range(100):
        g = random_graph(rng, rng.randint(2, 9))
        m = build_matrix(g, rng.choice(list(MatrixKind)))
        ref = dense_eigs(m)
        idx = rng.randint(1, g.n)
        r = Fraction(rng.randint(-40, 80), rng.randint(1, 9))
        expected = 0 if abs(ref[idx - 1] - r) < 1e-9 else (1 if ref[idx - 1] > r else -1)
        assert exact_sign(m, idx, r) == expected


def test_spectral_value_uses_exact_route_near_threshold():
    v = SpectralValue(build_matrix(cycle(5), "signless_laplacian"), 1)
    assert v.sign_vs(4) == (0, "exact")
    assert v.sign_vs(4 + Fraction(1, 10**9)) == (-1, "exact")
    assert v.sign_vs(Fraction(401, 100)) == (-1, "enclosure")
    assert v.sign_vs(5) == (-1, "enclosure")


def test_spectral_value_without_exact_route_is_undecided_on_straddle():
    m = SymmetricMatrix(((0.0, 1.0), (1.0, 0.0)))
    v = SpectralValue(m, 1)
    assert not v.has_exact_route
    assert v.sign_vs(1) == (None, "undecided")
    assert v.sign_vs(2) == (-1, "enclosure")


# ---------------------------------------------------------------- quotients


def test_quotient_examples():
    qp3 = build_matrix(path(3), "signless_laplacian")
    p = Partition.of([[0, 2], [1]])
    b = quotient_matrix(qp3, p)
    assert b.entries == ((1, 1), (2, 2))
    assert is_equitable(qp3, p)
    assert quotient_spectral_radius(b).contains(3)
    single = quotient_matrix(qp3, Partition.of([[0, 1, 2]]))
    assert single.entries == ((Fraction(8, 3),),)


def test_equitable_examples():
    qp4 = build_matrix(path(4), "signless_laplacian")
    assert is_equitable(qp4, Partition.of([[0, 3], [1, 2]]))
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 4)])  # K_{1,3} plus a pendant
    q = build_matrix(g, "signless_laplacian")
    assert not is_equitable(q, Partition.of([[0, 1], [2, 3, 4]]))


def test_invalid_partitions():
    q = build_matrix(path(3), "signless_laplacian")
    for blocks in ([[0, 1]], [[0, 1], [1, 2]], [[0, 1, 2], []], [[0, 1, 5], [2]]):
        with pytest.raises(ValueError):
            quotient_matrix(q, Partition.of(blocks))


def test_quotient_radius_closed_form():
    for delta in (1, 2, 5):
        b = families_quotient(delta, 2, 1)
        assert quotient_spectral_radius(b).contains(3 * delta)
    enc = quotient_spectral_radius(quotient_matrix(build_matrix(path(3), "adjacency"),
                                                   Partition.of([[0, 2], [1]])))
    assert enc.contains(math.sqrt(2)) and enc.width < 1e-15
    from specmatch.spectral import QuotientMatrix
    assert quotient_spectral_radius(QuotientMatrix(((Fraction(7, 2),),), (1,))).contains(3.5)
    with pytest.raises(ValueError):
        quotient_spectral_radius(QuotientMatrix(((1, -1), (0, 1)), (1, 1)))


def families_quotient(delta, v1, v2):
    from specmatch.spectral import QuotientMatrix
    r = Fraction(delta * v1, v2)
    return QuotientMatrix(((delta, delta), (r, r)), (v1, v2))


def test_quotient_radius_larger_partitions():
    # three-block equitable partition of P_5 by distance from the centre
    q = build_matrix(path(5), "signless_laplacian")
    p = Partition.of([[0, 4], [1, 3], [2]])
    assert is_equitable(q, p)
    enc = quotient_spectral_radius(quotient_matrix(q, p))
    assert enc.contains(dense_eigs(q)[0], slack=1e-12)


def test_equitable_consistency_on_family_members():
    for delta in range(1, 4):
        for k in range(1, 4):
            for m in range(1, 10):
                try:
                    g = families.construct_H(families.FamilyParams(delta, k, m))
                except (families.ParameterError, families.NotConstructibleError):
                    continue
                v1, v2 = families.member_parts(g, delta, k)
                q = build_matrix(g, "signless_laplacian")
                p = Partition.of([v1, v2])
                assert is_equitable(q, p)
                qr = quotient_spectral_radius(quotient_matrix(q, p))
                enc = eigenvalue(q, 1, TOL)
                assert abs(qr.mid - enc.mid) <= qr.width + enc.width
