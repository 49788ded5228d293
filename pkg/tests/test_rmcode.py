import random

import pytest
from hypothesis import given, settings, strategies as st

from perfbase.construct import CompanionSpec, companion, y_matrix
from perfbase.errors import (
    BadEta,
    DependentBasis,
    GuardExceeded,
    NotABase,
    NotCoprime,
    ParametersOutOfRange,
)
from perfbase.exactla import FqMatrix, MatrixSpace
from perfbase.gf import FieldElement, FqPolynomial, field_make
from perfbase.rmcode import (
    BlockCode,
    GammaBasis,
    RankCode,
    VectorCode,
    build_mtr,
    dual_code,
    dual_gabidulin_mtr_base,
    extend_base_lindep,
    gabidulin,
    gamma_expand,
    gamma_expand_code,
    is_mrd,
    is_mtr,
    min_hamming_distance,
    min_rank_distance,
    one_dim_power_base,
    one_dim_row_base,
    power_vector_code,
    psi_block,
    shorten_mtr,
    two_dim_bound,
)
from perfbase.tensor3 import BaseCandidate, kruskal_bound, verify_base

F5 = field_make(5)


# --- expansion ---------------------------------------------------------------------


def test_gamma_expand_power_identity():
    g = GammaBasis.power(3, 3)
    ext = g.ext_field
    M = companion(g.generator_companion())
    for s in (1, 2, 3):
        for i in range(4):
            v = [ext.mul(g.elements[t], ext.pow(g.elements[1], i))
                 for t in range(s)]
            assert gamma_expand(v, g) == y_matrix(g.base_field, s, 3) @ M.power(i)


def test_gamma_expand_zero_and_dims():
    g = GammaBasis.power(3, 3)
    Z = gamma_expand([0, 0], g)
    assert Z.is_zero() and Z.shape == (2, 3)
    code = power_vector_code(g, 3)
    C = gamma_expand_code(code, g)
    assert C.k == 3 and C.distance() == 3


@settings(deadline=None, max_examples=200)
@given(st.integers(0, 3 ** 3 - 1), st.integers(0, 3 ** 3 - 1))
def test_gamma_expand_is_injective_linear(e1, e2):
    g = GammaBasis.power(3, 3)
    ext = g.ext_field
    v1, v2 = [e1, e2], [e2, ext.add(e1, e2)]
    lhs = gamma_expand([ext.add(a, b) for a, b in zip(v1, v2)], g)
    rhs_rows = [[g.base_field.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(gamma_expand(v1, g).rows,
                                  gamma_expand(v2, g).rows)]
    assert lhs.rows == tuple(tuple(r) for r in rhs_rows)
    if any(v1):
        assert not gamma_expand(v1, g).is_zero()


def test_expansion_dimension_formula():
    for q, m, gens in [(3, 3, 1), (5, 3, 2), (7, 2, 1)]:
        g = GammaBasis.power(q, m)
        ext = g.ext_field
        rng = random.Random(q * m)
        while True:
            rows = [[rng.randrange(ext.q) for _ in range(3)]
                    for _ in range(gens)]
            if FqMatrix(ext, rows).rank() == gens:
                break
        C = gamma_expand_code(VectorCode(ext, rows), g)
        assert C.k == m * gens


# --- distances ---------------------------------------------------------------------


def test_min_rank_distance_examples():
    g = GammaBasis.power(3, 3)
    zero = RankCode(MatrixSpace.zero(g.base_field, (3, 3)))
    assert min_rank_distance(zero) == 4  # n + 1
    C = gamma_expand_code(power_vector_code(g, 3), g)
    assert min_rank_distance(C) == 3
    D = dual_code(C)
    assert D.k == 6 and min_rank_distance(D) == 2
    with pytest.raises(GuardExceeded):
        min_rank_distance(D, guard=10)


def test_min_rank_distance_matches_naive_scan():
    rng = random.Random(21)
    for _ in range(10):
        mats = [FqMatrix(F5, [[rng.randrange(5) for _ in range(3)]
                              for _ in range(2)]) for _ in range(2)]
        space = MatrixSpace(F5, (2, 3), mats)
        if space.dim == 0:
            continue
        C = RankCode(space)
        naive = min(A.rank()
                    for A in space.iter_elements(nonzero_only=True))
        assert min_rank_distance(C) == naive


def test_min_hamming_distance():
    B = BlockCode(F5, [(1, 1, 1, 0), (0, 0, 1, 1)])
    # naive scan over all 24 nonzero words
    words = set()
    for a in range(5):
        for b in range(5):
            if a == b == 0:
                continue
            w = tuple((a * x + b * y) % 5 for x, y in zip(*B.generators))
            words.add(w)
    naive = min(sum(1 for v in w if v) for w in words)
    assert min_hamming_distance(B) == naive


def test_distance_is_basis_independent():
    ext = field_make(3, 3)
    power = GammaBasis(ext)
    other = GammaBasis(ext, [power.elements[1], 1, power.elements[2]])
    code = VectorCode(ext, [[1, power.elements[1], 4]])
    d1 = gamma_expand_code(code, power).distance()
    d2 = gamma_expand_code(code, other).distance()
    assert d1 == d2


# --- evaluation codes ----------------------------------------------------------------


def test_gabidulin_basic_and_errors():
    ext = field_make(2, 3)
    g = GammaBasis(ext)
    U = [FieldElement(ext, g.elements[0]), FieldElement(ext, g.elements[1])]
    code = gabidulin(U, 1, 1, 0)
    C = gamma_expand_code(code, g)
    assert C.distance() == 2  # MRD: n - k + 1
    with pytest.raises(BadEta):
        gabidulin(U, 1, 1, FieldElement(ext, 3))
    with pytest.raises(NotCoprime):
        ext4 = field_make(2, 4)
        g4 = GammaBasis(ext4)
        U4 = [FieldElement(ext4, g4.elements[i]) for i in range(3)]
        gabidulin(U4, 1, 2, 0)
    with pytest.raises(DependentBasis):
        gabidulin([FieldElement(ext, 1), FieldElement(ext, 1)], 1, 1, 0)
    with pytest.raises(ParametersOutOfRange):
        gabidulin(U, 2, 1, 0)


def test_gabidulin_twisted_valid_eta():
    ext = field_make(3, 2)  # norms onto F_3 hit every unit
    g = GammaBasis(ext)
    U = [FieldElement(ext, g.elements[0]), FieldElement(ext, g.elements[1])]
    # (-1)^{mk} = (-1)^2 = 1; pick eta with norm != 1
    target = None
    for e in range(1, 9):
        if ext.pow(e, (9 - 1) // (3 - 1)) != 1:
            target = e
            break
    code = gabidulin(U, 1, 1, FieldElement(ext, target))
    C = gamma_expand_code(code, g)
    assert C.distance() == 2


# --- predicates and duality -------------------------------------------------------------


def test_is_mrd_and_dual_mrd():
    g = GammaBasis.power(3, 3)
    C = gamma_expand_code(power_vector_code(g, 3), g)
    D = dual_code(C)
    assert is_mrd(C) and is_mrd(D)
    full = RankCode(MatrixSpace.full(g.base_field, (2, 3)))
    assert is_mrd(full) and full.distance() == 1
    # MRD duality across every evaluation-code instance with q <= 3, nm <= 9
    for q, m, n, k in [(2, 2, 2, 1), (2, 3, 2, 1), (2, 3, 3, 1), (2, 3, 3, 2),
                       (3, 3, 2, 1), (3, 3, 3, 1), (3, 3, 3, 2), (2, 4, 2, 1)]:
        gb = GammaBasis.power(q, m)
        ext = gb.ext_field
        U = [FieldElement(ext, gb.elements[i]) for i in range(n)]
        code = gamma_expand_code(gabidulin(U, k, 1, 0), gb)
        assert is_mrd(code)
        assert is_mrd(dual_code(code))


def test_dual_is_involution_and_dim_complementary():
    rng = random.Random(4)
    for _ in range(10):
        mats = [FqMatrix(F5, [[rng.randrange(5) for _ in range(3)]
                              for _ in range(3)]) for _ in range(3)]
        C = RankCode(MatrixSpace(F5, (3, 3), mats))
        D = dual_code(C)
        assert C.k + D.k == 9
        assert dual_code(D).space == C.space


def test_is_mtr_full_space():
    F3 = field_make(3)
    full = RankCode(MatrixSpace.full(F3, (2, 2)))
    units = tuple(FqMatrix.unit(F3, 2, 2, i, j)
                  for i in range(2) for j in range(2))
    assert is_mtr(full, BaseCandidate(units, full.space))


# --- base extension -----------------------------------------------------------------------


WORKED_BASE = [
    [[4, 2, 0, 1], [3, 4, 0, 2], [1, 3, 0, 4]],
    [[1, 1, 0, 1], [3, 3, 0, 3], [4, 4, 0, 4]],
    [[3, 0, 2, 4], [2, 0, 3, 1], [3, 0, 2, 4]],
    [[2, 3, 3, 4], [2, 3, 3, 4], [2, 3, 3, 4]],
    # first row restored from the extension row 4*(3,4,4,0) = (2,1,1,0):
    # the printed (3,3,4,0) contradicts it and would make the member rank 2
    [[3, 4, 4, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 2, 1, 1]],
]
WORKED_EXTENDED = [
    [[4, 2, 0, 1], [3, 4, 0, 2], [1, 3, 0, 4], [2, 1, 0, 3]],
    [[1, 1, 0, 1], [3, 3, 0, 3], [4, 4, 0, 4], [1, 1, 0, 1]],
    [[3, 0, 2, 4], [2, 0, 3, 1], [3, 0, 2, 4], [4, 0, 1, 2]],
    [[2, 3, 3, 4], [2, 3, 3, 4], [2, 3, 3, 4], [3, 2, 2, 1]],
    [[3, 4, 4, 0], [0, 0, 0, 0], [0, 0, 0, 0], [2, 1, 1, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 2, 1, 1], [0, 4, 2, 2]],
]


def worked_pencil():
    spec = CompanionSpec.from_polynomial(FqPolynomial(F5, (2, 4, 4, 0, 1)))
    M = companion(spec)
    Nbar = FqMatrix(F5, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    target = MatrixSpace(F5, (3, 4), [Nbar @ M.power(i) for i in range(4)])
    return M, BaseCandidate(tuple(FqMatrix(F5, A) for A in WORKED_BASE), target)


def test_extend_base_lindep_worked_example():
    M, cand = worked_pencil()
    assert verify_base(cand).passed
    ext = extend_base_lindep(cand, [[4, 3, 2]])
    assert [[list(r) for r in A.rows] for A in ext.matrices] == WORKED_EXTENDED
    N = FqMatrix(F5, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [4, 3, 2, 0]])
    target = MatrixSpace(F5, (4, 4), [N @ M.power(i) for i in range(4)])
    assert verify_base(BaseCandidate(ext.matrices, target)).passed
    # both codes certify tensor rank 6: dim 4, distance 3, witness 6
    assert RankCode(cand.target).distance() == 3
    assert RankCode(target).distance() == 3
    assert kruskal_bound(4, 3) == 6 == len(ext.matrices)


def test_extend_base_lindep_zero_rows():
    _, cand = worked_pencil()
    ext = extend_base_lindep(cand, [[0, 0, 0], [0, 0, 0]])
    assert all(A.rows[3] == (0,) * 4 and A.rows[4] == (0,) * 4
               for A in ext.matrices)
    assert verify_base(ext).passed


# --- one-dimensional bases -----------------------------------------------------------------


@pytest.mark.parametrize("q,m", [(5, 4), (7, 4), (3, 3), (2, 2), (7, 3)])
def test_one_dim_power_base_all_row_counts(q, m):
    g = GammaBasis.power(q, m)
    for s in range(1, m + 1):
        if q < m + s - 2:
            continue
        res = one_dim_power_base(g, s)
        assert res.candidate.size == m + s - 1
        assert res.report.passed
        # the target is the expansion of the one-dimensional power code
        C = RankCode(res.candidate.target)
        assert C.k == m and C.distance() == s


def test_one_dim_row_base_general_rows():
    g = GammaBasis.power(5, 4)
    ext = g.ext_field
    a = g.elements[1]
    row = [1, 0, a, ext.add(1, a)]
    res = one_dim_row_base(g, row)
    assert res.report.passed
    C = RankCode(res.candidate.target)
    assert C.k == 4
    assert res.candidate.size == 4 + C.distance() - 1


def test_two_dim_bound_examples():
    g = GammaBasis.power(7, 3)
    a = g.elements[1]
    e = g.ext_field
    lo, hi, cand = two_dim_bound([[1, 0, a], [0, 1, e.pow(a, 2)]], g)
    assert (lo, hi) == (7, 8)
    assert verify_base(cand).passed

    g4 = GammaBasis.power(5, 4)
    rows = [[1, 0, 524, 498], [0, 1, 415, 311]]
    # rows chosen so the code really attains the generic distance m - 1
    lo, hi, cand = two_dim_bound(rows, g4)
    assert (lo, hi) == (10, 12)
    assert verify_base(cand).passed
    assert RankCode(cand.target).distance() == 3  # m - 1


def test_two_dim_bound_degenerate_rows():
    g = GammaBasis.power(7, 3)
    a = g.elements[1]
    e = g.ext_field
    rows = [[1, a, 0], [2, e.mul(2, a), 0]]
    lo, hi, cand = two_dim_bound(rows, g)
    assert lo == hi == cand.size
    assert verify_base(cand).passed


# --- headline constructions -------------------------------------------------------------------


@pytest.mark.parametrize("q,m,n,size", [(3, 3, 3, 7), (5, 4, 3, 9), (3, 3, 2, 4)])
def test_dual_gabidulin_mtr_base(q, m, n, size):
    code, res = dual_gabidulin_mtr_base(q, m, n)
    assert res.candidate.size == size
    assert code.k == m * (n - 1)
    d = code.distance()
    assert size == kruskal_bound(code.k, d)
    assert is_mtr(code, res.candidate)


def test_dual_gabidulin_accepts_alternate_basis():
    ext = field_make(3, 3)
    power = GammaBasis(ext)
    other = GammaBasis(ext, [power.elements[1], 1, power.elements[2]])
    code, res = dual_gabidulin_mtr_base(3, 3, 3, gamma=other)
    assert res.report.passed and is_mtr(code, res.candidate)


def test_psi_block_identity_and_mds():
    F3 = field_make(3)
    full = RankCode(MatrixSpace.full(F3, (2, 2)))
    units = tuple(FqMatrix.unit(F3, 2, 2, i, j)
                  for i in range(2) for j in range(2))
    B = psi_block(full, BaseCandidate(units, full.space))
    assert B.length == 4 and B.k == 4 and B.distance() == 1

    code, res = dual_gabidulin_mtr_base(3, 3, 3)
    B = psi_block(code, res.candidate)
    assert (B.length, B.k, B.distance()) == (7, 6, 2)
    assert B.is_mds()
    with pytest.raises(NotABase):
        psi_block(code, BaseCandidate(units[:1],
                                      MatrixSpace.full(F3, (2, 2))))


def test_shorten_mtr_cases():
    code, wit = build_mtr(7, 3, 3, 3, 3)
    sub, w = shorten_mtr(code, wit, range(len(wit.matrices)))
    assert sub.k == code.k and w is not None
    sub, w = shorten_mtr(code, wit, range(2))
    assert sub.k == 0 and w is None and sub.distance() == 4
    sub, w = shorten_mtr(code, wit, range(3))
    assert sub.k == 1 and sub.distance() == 3
    assert is_mtr(sub, BaseCandidate(w.matrices, sub.space))


def test_build_mtr_examples():
    code, wit = build_mtr(7, 3, 3, 2, 3)
    assert (code.k, code.distance(), len(wit.matrices)) == (2, 3, 4)
    assert verify_base(wit).passed
    code, wit = build_mtr(5, 3, 4, 2, 1)
    assert (code.k, code.distance(), len(wit.matrices)) == (2, 1, 2)
    code, wit = build_mtr(7, 4, 4, 4, 4)  # the full one-dimensional code
    assert (code.k, code.distance(), len(wit.matrices)) == (4, 4, 7)
    with pytest.raises(ParametersOutOfRange):
        build_mtr(7, 3, 3, 4, 3)


def test_singleton_and_kruskal_on_constructed_codes():
    for q, m, n in [(3, 3, 2), (3, 3, 3), (5, 3, 2)]:
        code, res = dual_gabidulin_mtr_base(q, m, n)
        d = code.distance()
        assert code.k <= m * (n - d + 1)
        assert res.candidate.size >= kruskal_bound(code.k, d)
    for q, n, m, k, d in [(5, 2, 3, 2, 2), (7, 3, 3, 1, 2), (5, 3, 3, 3, 1)]:
        code, wit = build_mtr(q, n, m, k, d)
        assert code.k <= m * (n - code.distance() + 1)
        assert len(wit.matrices) == kruskal_bound(code.k, code.distance())
