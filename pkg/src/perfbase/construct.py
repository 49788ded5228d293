"""Explicit perfect-base constructions for companion-matrix tensor families.

Covers the power-family dual bases built from shift-conjugated rank ones,
their rectangular truncations, left-factor variants, the inverse-power family
bases (diagonalizable part plus one or two companion-difference corrections),
the singular-companion glue, and the square-plus-one-column pencil base.

Every constructor verifies its own output (rank one, independent, contains
the target) before returning; a failure raises InternalVerificationError and
is always a bug, never a caller error.  All constructors are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BadGammaSet,
    BadN,
    CaseNotCovered,
    CharTwo,
    FieldTooSmall,
    InternalVerificationError,
    ParametersOutOfRange,
    RepeatedRoot,
    Singular,
    SingularM,
    UnsupportedCofactorDegree,
    ZeroGamma,
)
from .exactla import FqMatrix, MatrixSpace
from .gf import Field, FieldElement, FqPolynomial, poly_roots
from .tensor3 import BaseCandidate, VerificationReport, verify_base


@dataclass(frozen=True)
class CompanionSpec:
    """A companion matrix given by its bottom row (a_1, ..., a_m)."""

    field: Field
    m: int
    bottom: tuple

    def __post_init__(self):
        if self.m < 2:
            raise ParametersOutOfRange("companion matrices need m >= 2")
        enc = tuple(int(a) % self.field.q if self.field.deg > 1
                    else int(a) % self.field.p
                    for a in self.bottom)
        if len(enc) != self.m:
            raise ParametersOutOfRange("bottom row length must equal m")
        object.__setattr__(self, "bottom", enc)

    @classmethod
    def from_polynomial(cls, f: FqPolynomial) -> "CompanionSpec":
        """Spec of the companion of a monic polynomial x^m - a_m x^{m-1} - ... - a_1."""
        if not f.is_monic() or f.degree < 2:
            raise ParametersOutOfRange("need a monic polynomial of degree >= 2")
        F = f.field
        return cls(F, f.degree, tuple(F.neg(c) for c in f.coeffs[:-1]))

    @property
    def invertible(self) -> bool:
        return self.bottom[0] != 0

    def char_poly(self) -> FqPolynomial:
        F = self.field
        return FqPolynomial(F, [F.neg(a) for a in self.bottom] + [1])

    def matrix(self) -> FqMatrix:
        return companion(self)


@dataclass(frozen=True)
class GammaSet:
    """Ordered distinct nonzero scalars (1, gamma_1, ..., gamma_{s-1})."""

    field: Field
    elements: tuple

    def __post_init__(self):
        encs = tuple(e.enc if isinstance(e, FieldElement) else int(e)
                     for e in self.elements)
        if not encs or encs[0] != 1:
            raise BadGammaSet("the first element must be 1")
        if 0 in encs:
            raise BadGammaSet("elements must be nonzero")
        if len(set(encs)) != len(encs):
            raise BadGammaSet("elements must be distinct")
        if any(e >= self.field.q for e in encs):
            raise BadGammaSet("element outside the field")
        object.__setattr__(self, "elements", encs)

    def __len__(self):
        return len(self.elements)

    @classmethod
    def canonical(cls, field: Field, s: int) -> "GammaSet":
        """The s smallest units in canonical order (always starting at 1)."""
        if s > field.q - 1:
            raise FieldTooSmall(f"need {s} distinct units, field has {field.q - 1}")
        return cls(field, tuple(range(1, s + 1)))


@dataclass(frozen=True)
class ConstructionResult:
    """A self-verified base together with its provenance and auxiliaries."""

    candidate: BaseCandidate
    construction: str
    params: dict
    auxiliary: dict
    report: VerificationReport


def _finish(candidate, construction, params, auxiliary) -> ConstructionResult:
    report = verify_base(candidate)
    if not report.passed:
        raise InternalVerificationError(
            f"{construction} failed self-verification: {report.to_dict()}")
    return ConstructionResult(candidate, construction, dict(params),
                              dict(auxiliary), report)


# --- companion machinery -----------------------------------------------------------


def companion(spec: CompanionSpec) -> FqMatrix:
    """Identity superdiagonal block over the bottom row (a_1, ..., a_m)."""
    m = spec.m
    rows = [[0] * m for _ in range(m)]
    for i in range(m - 1):
        rows[i][i + 1] = 1
    rows[m - 1] = list(spec.bottom)
    return FqMatrix(spec.field, rows)


def companion_inverse(spec: CompanionSpec) -> FqMatrix:
    """Closed-form inverse: shifted identity under a single corrected first row."""
    if not spec.invertible:
        raise SingularM("companion with a_1 = 0 is singular")
    F = spec.field
    m = spec.m
    inv = F.inv(spec.bottom[0])
    first = [F.neg(F.mul(a, inv)) for a in spec.bottom[1:]] + [inv]
    rows = [first]
    for i in range(1, m):
        rows.append([1 if j == i - 1 else 0 for j in range(m)])
    return FqMatrix(F, rows)


def shift_J(field: Field, m: int) -> FqMatrix:
    """Cyclic permutation matrix: left multiplication shifts rows down by one."""
    if m < 2:
        raise ParametersOutOfRange("shift matrices need m >= 2")
    rows = [[0] * m for _ in range(m)]
    rows[0][m - 1] = 1
    for i in range(1, m):
        rows[i][i - 1] = 1
    return FqMatrix(field, rows)


def epsilon(gamma, m: int) -> FqMatrix:
    """Rank-one matrix with geometric first row and -gamma-scaled second row."""
    if isinstance(gamma, FieldElement):
        field, g = gamma.field, gamma.enc
    else:
        raise ZeroGamma("gamma must be a field element")
    if g == 0:
        raise ZeroGamma("gamma must be nonzero")
    if m < 2:
        raise ParametersOutOfRange("need m >= 2")
    row = [field.pow(g, m - 1 - j) for j in range(m)]
    rows = [row, [field.neg(field.mul(g, v)) for v in row]]
    rows += [[0] * m for _ in range(m - 2)]
    return FqMatrix(field, rows)


def y_matrix(field: Field, n: int, m: int) -> FqMatrix:
    """The truncation (I_n | 0) selecting the first n rows."""
    return FqMatrix(field, [[1 if j == i else 0 for j in range(m)]
                            for i in range(n)])


def _power_target(spec: CompanionSpec, s: int, nrows=None) -> MatrixSpace:
    """Dual of the span of the first s powers, optionally row-truncated."""
    M = companion(spec)
    m = spec.m
    n = nrows if nrows is not None else m
    Y = y_matrix(spec.field, n, m)
    slices = []
    cur = Y
    for _ in range(s):
        slices.append(cur)
        cur = cur @ M
    return MatrixSpace(spec.field, (n, m), slices).dual_complement()


def _shift_family_members(spec: CompanionSpec, s: int, S: GammaSet,
                          nrows: int, max_i_unit: int, max_i_eps: int):
    """Members J^i E (M^{-i})^t for the unit and geometric rank-one seeds.

    Per shift index i: the geometric members first (in S order, while
    i <= max_i_eps), then the single-entry members for columns s+1..m (while
    i <= max_i_unit).  Rows beyond `nrows` are never touched, so the list is
    built at the truncated shape directly.
    """
    F = spec.field
    m = spec.m
    Minv_t = companion_inverse(spec).transpose()
    T = FqMatrix.identity(F, m)  # (M^{-i})^t, updated incrementally
    members = []
    for i in range(max(max_i_unit, max_i_eps) + 1):
        if i <= max_i_eps:
            for g in S.elements:
                geo = [F.pow(g, m - 1 - j) for j in range(m)]
                rowvec = _vec_mat(F, geo, T)
                rows = [[0] * m for _ in range(nrows)]
                rows[i] = rowvec
                rows[i + 1] = [F.neg(F.mul(g, v)) for v in rowvec]
                members.append(FqMatrix(F, rows))
        if i <= max_i_unit:
            for j in range(s + 1, m + 1):
                rows = [[0] * m for _ in range(nrows)]
                rows[i] = list(T.rows[j - 1])
                members.append(FqMatrix(F, rows))
        T = Minv_t @ T
    return members


def _vec_mat(F, vec, M: FqMatrix):
    out = []
    for j in range(M.m):
        acc = 0
        for k, v in enumerate(vec):
            if v:
                acc = F.add(acc, F.mul(v, M.rows[k][j]))
        out.append(acc)
    return out


def _check_power_family_args(spec, s, S):
    if not spec.invertible:
        raise SingularM("a_1 = 0: use the singular-companion constructor")
    if not 1 <= s <= spec.m - 1:
        raise ParametersOutOfRange(f"s must lie in 1..{spec.m - 1}")
    if spec.field.q < s + 1:
        raise FieldTooSmall(f"need q >= {s + 1}")
    if S is None:
        S = GammaSet.canonical(spec.field, s)
    if S.field != spec.field or len(S) != s:
        raise BadGammaSet("gamma set must have s elements of the same field")
    return S


# --- power-family dual bases -----------------------------------------------------


def base_dual_powers(spec: CompanionSpec, s: int,
                     S: GammaSet | None = None) -> ConstructionResult:
    """(m^2-s)-base for the dual of the span of I, M, ..., M^{s-1}."""
    S = _check_power_family_args(spec, s, S)
    m = spec.m
    members = _shift_family_members(spec, s, S, nrows=m,
                                    max_i_unit=m - 1, max_i_eps=m - 2)
    target = _power_target(spec, s)
    cand = BaseCandidate(tuple(members), target)
    return _finish(cand, "dual-powers",
                   {"m": m, "s": s, "bottom": list(spec.bottom),
                    "gammas": list(S.elements)}, {})


def base_dual_powers_rect(spec: CompanionSpec, n: int, s: int,
                          S: GammaSet | None = None) -> ConstructionResult:
    """(nm-s)-base for the dual of the truncated power span in K^{n x m}."""
    if not 2 <= n <= spec.m:
        raise ParametersOutOfRange("need 2 <= n <= m")
    S = _check_power_family_args(spec, s, S)
    members = _shift_family_members(spec, s, S, nrows=n,
                                    max_i_unit=n - 1, max_i_eps=n - 2)
    target = _power_target(spec, s, nrows=n)
    cand = BaseCandidate(tuple(members), target)
    return _finish(cand, "dual-powers-rect",
                   {"m": spec.m, "n": n, "s": s, "bottom": list(spec.bottom),
                    "gammas": list(S.elements)}, {})


def base_left_factor(spec: CompanionSpec, s: int, B: FqMatrix,
                     S: GammaSet | None = None) -> ConstructionResult:
    """(m^2-s)-base for the dual of the span of B^{-1}M^r, r < s."""
    S = _check_power_family_args(spec, s, S)
    m = spec.m
    if B.shape != (m, m) or B.field != spec.field or not B.is_invertible():
        raise Singular("B must be an invertible m x m matrix")
    Bt = B.transpose()
    members = [Bt @ A for A in
               _shift_family_members(spec, s, S, nrows=m,
                                     max_i_unit=m - 1, max_i_eps=m - 2)]
    Binv = B.inverse()
    M = companion(spec)
    slices = []
    cur = Binv
    for _ in range(s):
        slices.append(cur)
        cur = cur @ M
    target = MatrixSpace(spec.field, (m, m), slices).dual_complement()
    cand = BaseCandidate(tuple(members), target)
    return _finish(cand, "left-factor",
                   {"m": m, "s": s, "bottom": list(spec.bottom),
                    "gammas": list(S.elements), "B": [list(r) for r in B.rows]},
                   {})


# --- eigen machinery for the inverse-power family ---------------------------------


def _left_eigenrows(M: FqMatrix, eig_encs) -> FqMatrix:
    """P with P M P^{-1} diagonal: rows are left eigenvectors in given order."""
    F = M.field
    m = M.n
    rows = []
    Mt = M.transpose()
    for e in eig_encs:
        shifted = Mt - FqMatrix.identity(F, m).scale(e)
        basis = _nullspace_rows(shifted)
        if not basis:
            raise InternalVerificationError(f"{e} is not an eigenvalue")
        rows.append(_normalize_lead(F, basis[0]))
    P = FqMatrix(F, rows)
    if not P.is_invertible():
        raise InternalVerificationError("eigenvector rows were dependent")
    return P


def _nullspace_rows(M: FqMatrix):
    from .exactla import _nullspace
    return _nullspace(M.field, [list(r) for r in M.rows], M.m)


def _normalize_lead(F, vec):
    for v in vec:
        if v:
            inv = F.inv(v)
            return [F.mul(inv, x) for x in vec]
    raise InternalVerificationError("zero vector cannot be normalized")


def _split_block_form(spec: CompanionSpec, alpha_encs, g: FqPolynomial) -> FqMatrix:
    """P with P M P^{-1} = diag(alphas) over a trailing companion block of g.

    The top rows are left eigenvectors for the distinct linear roots; the
    trailing rows are the orbit w, wM, ..., wM^{r-1} of a row vector w killed
    on the left by g(M), chosen canonically among the null combinations.
    """
    F = spec.field
    M = companion(spec)
    m, r = spec.m, g.degree
    rows = []
    if alpha_encs:
        rows.extend(_left_eigenrows_for(M, alpha_encs))
    gM = _poly_at_matrix(g, M)
    null = _nullspace_rows(gM.transpose())
    if len(null) != r:
        raise InternalVerificationError("cofactor kernel has unexpected size")
    for w in _combination_stream(F, null):
        orbit = []
        cur = list(w)
        for _ in range(r):
            orbit.append(cur)
            cur = _vec_mat(F, cur, M)
        P = FqMatrix(F, rows + orbit)
        if P.is_invertible():
            return P
    raise InternalVerificationError("no cyclic row for the cofactor block")


def _left_eigenrows_for(M, eig_encs):
    F = M.field
    out = []
    Mt = M.transpose()
    for e in eig_encs:
        shifted = Mt - FqMatrix.identity(F, M.n).scale(e)
        basis = _nullspace_rows(shifted)
        out.append(_normalize_lead(F, basis[0]))
    return out


def _poly_at_matrix(f: FqPolynomial, M: FqMatrix) -> FqMatrix:
    F = M.field
    acc = FqMatrix.zeros(F, M.n, M.m)
    for c in reversed(f.coeffs):
        acc = acc @ M + FqMatrix.identity(F, M.n).scale(c)
    return acc


def _combination_stream(F, basis):
    """Nonzero combinations of basis rows in canonical coefficient order."""
    q = F.q
    k = len(basis)
    for code in range(1, q ** k):
        coeffs = []
        c = code
        for _ in range(k):
            c, digit = divmod(c, q)
            coeffs.append(digit)
        acc = [0] * len(basis[0])
        for coeff, row in zip(coeffs, basis):
            if coeff:
                acc = [F.add(a, F.mul(coeff, b)) for a, b in zip(acc, row)]
        yield acc


def _projectors(X: FqMatrix, nrows=None):
    """Rank-one conjugates X^{-1} E_{i,i} X, optionally row-truncated."""
    F = X.field
    m = X.n
    n = nrows if nrows is not None else m
    Xinv = X.inverse()
    out = []
    for i in range(m):
        col = [Xinv.rows[t][i] for t in range(n)]
        row = X.rows[i]
        out.append(FqMatrix(F, [[F.mul(a, b) for b in row] for a in col]))
    return out


def _beta_pool(field: Field, root_encs, count, allow_zero_fallback):
    """The `count` smallest scalars distinct from the roots and from zero.

    Zero joins the pool only when the strict rule would exhaust the field and
    the caller's construction tolerates a singular split companion.
    """
    excluded = set(root_encs)
    strict = [e for e in range(1, field.q) if e not in excluded]
    if len(strict) >= count:
        return strict[:count], False
    if allow_zero_fallback and 0 not in excluded and 1 + len(strict) >= count:
        return ([0] + strict)[:count], True
    raise FieldTooSmall(
        f"need {count} fresh scalars outside {sorted(excluded)} in a field of {field.q}")


def _factor_char_poly(spec: CompanionSpec):
    """Distinct linear roots plus the rootless cofactor of the companion poly."""
    roots, cofactor = poly_roots(spec.char_poly(), spec.field)
    encs = [r.enc for r in roots]
    if len(set(encs)) != len(encs):
        raise RepeatedRoot("the linear part must have distinct roots")
    return encs, cofactor


# --- inverse-power family ----------------------------------------------------------


def base_inverse_family(spec: CompanionSpec,
                        extra_powers=()) -> ConstructionResult:
    """Base for the span of I, M, M^{-1} (and optional extra powers of M).

    Size m, m+1, or m+2 according to the degree r of the rootless cofactor
    (0, 2, or >= 3).  Extra powers are only available for r <= 3: beyond that
    no single rank-one correction can absorb them.
    """
    if not spec.invertible:
        raise SingularM("the inverse-power family needs an invertible companion")
    extra_powers = tuple(int(e) for e in extra_powers)
    alphas, g = _factor_char_poly(spec)
    r = g.degree
    F = spec.field
    m = spec.m
    M = companion(spec)
    aux = {}
    if r == 0:
        P = _left_eigenrows(M, alphas)
        members = _projectors(P)
        aux["P"] = P
    else:
        if r >= 4 and extra_powers:
            raise UnsupportedCofactorDegree(
                "extra powers need a cofactor of degree at most 3")
        betas, _ = _beta_pool(F, alphas, r, allow_zero_fallback=(r == 2))
        h = FqPolynomial.from_roots(F, betas)
        Mg = CompanionSpec.from_polynomial(g).matrix()
        Mh = CompanionSpec.from_polynomial(h).matrix()
        P = _split_block_form(spec, alphas, g)
        Q1 = _left_eigenrows(Mh, betas)
        Q = _identity_block_diag(F, m - r, Q1)
        members = _projectors(Q @ P)
        Pinv = P.inverse()
        D1 = _embed_bottom_right(F, m, Mg - Mh)
        members.append(Pinv @ D1 @ P)
        aux.update({"P": P, "Q": Q, "M_h": Mh, "D1": D1})
        if r >= 3:
            D2 = _embed_bottom_right(F, m, Mg.inverse() - Mh.inverse())
            members.append(Pinv @ D2 @ P)
            aux["D2"] = D2
    slices = [FqMatrix.identity(F, m), M, companion_inverse(spec)]
    for e in extra_powers:
        slices.append(M.power(e))
    target = MatrixSpace(F, (m, m), slices)
    cand = BaseCandidate(tuple(members), target)
    return _finish(cand, "inverse-family",
                   {"m": m, "bottom": list(spec.bottom),
                    "extra_powers": list(extra_powers)}, aux)


def _identity_block_diag(F, head: int, B: FqMatrix) -> FqMatrix:
    """Block diagonal of I_head and B; head may be zero."""
    if head == 0:
        return B
    n = head + B.n
    rows = [[1 if j == i else 0 for j in range(n)] for i in range(head)]
    for i in range(B.n):
        rows.append([0] * head + list(B.rows[i]))
    return FqMatrix(F, rows)


def _embed_bottom_right(F, m, B: FqMatrix) -> FqMatrix:
    rows = [[0] * m for _ in range(m)]
    off = m - B.n
    for i in range(B.n):
        for j in range(B.m):
            rows[off + i][off + j] = B.rows[i][j]
    return FqMatrix(F, rows)


# --- rectangular small-n family ----------------------------------------------------


def base_rect_small_n(spec: CompanionSpec, n: int,
                      L: FqMatrix | None = None,
                      N: FqMatrix | None = None) -> ConstructionResult:
    """Base for the n-row family (Y_n M^{-1} | Y_n | ... | Y_n M^{m-2}), n in {2,3}.

    Split characteristic polynomial: m members (truncated spectral
    projectors).  Otherwise one correction for n=2 and, for n=3, either the
    block-form correction (cofactor degree 2) or the two row-difference
    corrections against a fully split companion, matching the displayed
    worked instance exactly.
    """
    if n not in (2, 3):
        raise ParametersOutOfRange("this family covers n = 2 and n = 3 only")
    if not spec.invertible:
        raise SingularM("the family includes M^{-1}")
    F = spec.field
    m = spec.m
    if n > m:
        raise ParametersOutOfRange("need n <= m")
    if L is None:
        L = FqMatrix.identity(F, n)
    if N is None:
        N = FqMatrix.identity(F, m)
    if (L.shape != (n, n) or N.shape != (m, m) or L.field != F or N.field != F
            or not L.is_invertible() or not N.is_invertible()):
        raise BadN("L and N must be invertible of shapes n x n and m x m")

    alphas, g = _factor_char_poly(spec)
    r = g.degree
    M = companion(spec)
    aux = {}

    if r == 0:
        P = _left_eigenrows(M, alphas)
        core = _projectors(P, nrows=n)
        aux["P"] = P
    elif n == 2:
        betas, used_zero = _beta_pool(F, alphas, r, allow_zero_fallback=True)
        h = FqPolynomial.from_roots(F, alphas + betas)
        Mh = CompanionSpec.from_polynomial(h).matrix()
        P = _left_eigenrows(Mh, sorted(alphas + betas))
        core = _projectors(P, nrows=n)
        Y = y_matrix(F, n, m)
        if used_zero:
            # a singular split companion: correct the top power instead of M^{-1}
            D1 = Y @ (M.power(m - 1) - Mh.power(m - 1))
        else:
            D1 = Y @ (companion_inverse(spec) - Mh.inverse())
        core.append(D1)
        aux.update({"P": P, "M_h": Mh, "D1": D1})
    elif r == 2:
        betas, _ = _beta_pool(F, alphas, r, allow_zero_fallback=True)
        h = FqPolynomial.from_roots(F, betas)
        Mg = CompanionSpec.from_polynomial(g).matrix()
        Mh = CompanionSpec.from_polynomial(h).matrix()
        P = _split_block_form(spec, alphas, g)
        Q1 = _left_eigenrows(Mh, betas)
        Q = _identity_block_diag(F, m - 2, Q1)
        core = _projectors(Q @ P, nrows=n)
        D1 = _embed_bottom_right(F, m, Mg - Mh)
        Y = y_matrix(F, n, m)
        core.append(Y @ (P.inverse() @ D1 @ P))
        aux.update({"P": P, "Q": Q, "M_h": Mh, "D1": D1})
    else:
        betas, _ = _beta_pool(F, alphas, r, allow_zero_fallback=False)
        h = FqPolynomial.from_roots(F, alphas + betas)
        Mh = CompanionSpec.from_polynomial(h).matrix()
        P = _left_eigenrows(Mh, sorted(alphas + betas))
        core = _projectors(P, nrows=n)
        Y = y_matrix(F, n, m)
        D1 = Y @ (companion_inverse(spec) - Mh.inverse())
        D2 = Y @ (M.power(m - 2) - Mh.power(m - 2))
        core.extend([D1, D2])
        aux.update({"P": P, "M_h": Mh, "D1": D1, "D2": D2})

    members = [L @ A @ N for A in core]
    Y = y_matrix(F, n, m)
    slices = [L @ (Y @ companion_inverse(spec)) @ N]
    cur = Y
    for _ in range(m - 1):
        slices.append(L @ cur @ N)
        cur = cur @ M
    target = MatrixSpace(F, (n, m), slices)
    cand = BaseCandidate(tuple(members), target)
    return _finish(cand, "rect-small-n",
                   {"m": m, "n": n, "bottom": list(spec.bottom)}, aux)


# --- singular companions ------------------------------------------------------------


def base_singular(spec: CompanionSpec, s: int) -> ConstructionResult:
    """(m^2-s)-base for the dual power span when the companion may be singular.

    Dispatches on the least index i with a_i != 0: an invertible companion
    delegates to the main construction, the mid-range cases glue a shift-dual
    base with a trailing-block base, and the i in {m-1, m} fringes use the
    2x2 quadratic or singular pair on the trailing block.
    """
    m = spec.m
    F = spec.field
    nz = [j for j, a in enumerate(spec.bottom, start=1) if a != 0]
    i = nz[0] if nz else None
    target = _power_target(spec, s)

    if i == 1:
        if 1 <= s <= m - 1:
            inner = base_dual_powers(spec, s)
            return _finish(BaseCandidate(inner.candidate.matrices, target),
                           "singular", {"m": m, "s": s,
                                        "bottom": list(spec.bottom), "case": "invertible"},
                           inner.auxiliary)
        if m == 2 and s == 2:
            pair = _quadratic_pair(F, spec.bottom[0], spec.bottom[1])
            cand = BaseCandidate(tuple(pair), target)
            return _finish(cand, "singular",
                           {"m": m, "s": s, "bottom": list(spec.bottom),
                            "case": "quadratic"}, {})
        raise CaseNotCovered("invertible companion with s out of range")

    if s == 1:
        members = _identity_dual_members(F, m)
        cand = BaseCandidate(tuple(members), target)
        return _finish(cand, "singular",
                       {"m": m, "s": 1, "bottom": list(spec.bottom),
                        "case": "identity-dual"}, {})

    if i is None:
        raise CaseNotCovered(
            "all-zero bottom row with s >= 2 has no known perfect dual")

    if 2 <= i <= m - 1 and 1 <= s <= m - i:
        tail = CompanionSpec(F, m - i + 1, spec.bottom[i - 1:])
        tail_base = base_dual_powers(tail, s).candidate.matrices
        return _glue(spec, s, target, i, tail_base, case="glued")

    if i == m - 1 and s == 2:
        pair = _quadratic_pair(F, spec.bottom[m - 2], spec.bottom[m - 1])
        return _glue(spec, s, target, i, tuple(pair), case="glued-quadratic")

    if i == m and s == 2:
        pair = _singular_pair(F, spec.bottom[m - 1])
        if m == 2:
            cand = BaseCandidate(tuple(pair), target)
            return _finish(cand, "singular",
                           {"m": m, "s": s, "bottom": list(spec.bottom),
                            "case": "trailing-pair"}, {})
        return _glue(spec, s, target, m - 1, tuple(pair), case="glued-trailing")

    raise CaseNotCovered(f"no construction for least nonzero index {i}, s={s}")


def _identity_dual_members(F, m):
    """Base of the trace-zero space from the invertible cyclic-shift companion."""
    aux_spec = CompanionSpec(F, m, (1,) + (0,) * (m - 1))
    return base_dual_powers(aux_spec, 1).candidate.matrices


def _quadratic_pair(F, a1, a2):
    """Two geometric rank-ones from the distinct unit roots of a1 x^2 + a2 x - 1."""
    poly = FqPolynomial(F, (F.neg(1), a2, a1))
    roots, _ = poly_roots(poly, F)
    encs = sorted({r.enc for r in roots} - {0})
    if len(roots) != 2 or len(encs) != 2:
        raise CaseNotCovered(
            "the associated quadratic has no two distinct unit roots")
    return [epsilon(FieldElement(F, e), 2) for e in encs]


def _singular_pair(F, a2):
    """The displayed 2-base for a 2x2 companion with zero first column."""
    if a2 == 0:
        raise CaseNotCovered("trailing coefficient must be nonzero")
    inv = F.inv(a2)
    first = FqMatrix(F, [[0, 0], [1, 0]])
    second = FqMatrix(F, [[inv, 1],
                          [F.neg(F.mul(inv, inv)), F.neg(inv)]])
    return [first, second]


def _glue(spec, s, target, i, tail_members, case):
    """Stack a shift-dual base over an embedded trailing-block base."""
    F = spec.field
    m = spec.m
    shift_spec = CompanionSpec(F, m, (1,) + (0,) * (m - 1))
    top = base_dual_powers_rect(shift_spec, n=i, s=s).candidate.matrices
    members = []
    seen = set()
    for A in top:
        padded = FqMatrix(F, list(A.rows) + [[0] * m for _ in range(m - i)])
        members.append(padded)
        seen.add(padded.rows)
    off = i - 1
    for A in tail_members:
        rows = [[0] * m for _ in range(m)]
        for a in range(A.n):
            for b in range(A.m):
                rows[off + a][off + b] = A.rows[a][b]
        emb = FqMatrix(F, rows)
        if emb.rows not in seen:
            members.append(emb)
            seen.add(emb.rows)
    for k in range(i + 1, m + 1):
        for j in range(1, i):
            single = FqMatrix.unit(F, m, m, k - 1, j - 1)
            if single.rows not in seen:
                members.append(single)
                seen.add(single.rows)
    if len(members) != m * m - s:
        raise InternalVerificationError(
            f"glued base has {len(members)} members, expected {m * m - s}")
    cand = BaseCandidate(tuple(members), target)
    return _finish(cand, "singular",
                   {"m": m, "s": s, "bottom": list(spec.bottom), "case": case},
                   {})


# --- the square-plus-one-column pencil ----------------------------------------------


def atkinson_base(n: int, field: Field) -> ConstructionResult:
    """(n^2+n-2)-base for the dual of the two-slice shift pencil in K^{n x (n+1)}.

    Needs characteristic != 2: the two three-term families coincide mod 2 and
    the construction loses n-1 members.
    """
    if field.p == 2:
        raise CharTwo("the two sign families coincide in characteristic 2")
    if n < 2:
        raise ParametersOutOfRange("need n >= 2")
    m = n + 1
    members = []
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if j == i or j == i + 1:
                continue
            members.append(FqMatrix.unit(field, n, m, i - 1, j - 1))
    for signs in ((1, 1, 1, -1, -1, -1), (1, -1, 1, 1, -1, 1)):
        for i in range(1, n):
            rows = [[0] * m for _ in range(n)]
            for t in range(3):
                rows[i - 1][i - 1 + t] = signs[t] % field.p
                rows[i][i - 1 + t] = signs[3 + t] % field.p
            members.append(FqMatrix(field, rows))
    spec = CompanionSpec(field, m, (1,) + (0,) * n)
    target = _power_target(spec, 2, nrows=n)
    cand = BaseCandidate(tuple(members), target)
    return _finish(cand, "atkinson", {"n": n}, {})
