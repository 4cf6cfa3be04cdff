"""The verified identity catalog for the degenerate operators.

Every row checks one exact operator identity: the scaling laws of
Q_k = Dt^2 - t^k*Lap and P1 = Dt*Q_m against the cone and half-space
vector fields, the square decompositions of the normal fields near the
cusp cone and the cusp planes, the radial-field eliminations, and the
cross-exponent relation used when two degeneracies coexist.  Rows whose
right sides contain admissible-but-unspecified lower-order coefficients
are checked modulo the span of the permitted first-order fields, by
solving for those coefficients exactly.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..errors import ParameterError
from .coeff import CoeffContext
from .diffop import DiffOp, commutator, compose, span_decompose

__all__ = ["CatalogRow", "catalog_verify"]


@dataclass(frozen=True)
class CatalogRow:
    """Outcome of one identity check."""

    name: str
    status: str           # "zero", "nonzero", "solvable", "unsolvable",
                          # "asserted"
    residual_terms: int
    expected: str         # "zero", "nonzero" or "asserted"
    detail: str = ""

    @property
    def ok(self):
        if self.expected == "asserted":
            return True
        if self.expected == "zero":
            return self.status in ("zero", "solvable")
        return self.status in ("nonzero", "unsolvable")


# -- vector field constructors -------------------------------------------

def _lap(ctx):
    out = DiffOp.zero(ctx)
    for i in range(1, ctx.n + 1):
        out = out + compose(DiffOp.dx(ctx, i), DiffOp.dx(ctx, i))
    return out


def _Q(ctx, k):
    dt = DiffOp.dt(ctx)
    return compose(dt, dt) - _lap(ctx).scaled(ctx.t_pow(2 * k))


def _P1(ctx, m):
    return compose(DiffOp.dt(ctx), _Q(ctx, m))


def _V0(ctx, k):
    out = DiffOp.dt(ctx).scaled(ctx.rational(2) * ctx.t())
    for i in range(1, ctx.n + 1):
        out = out + DiffOp.dx(ctx, i).scaled(
            ctx.rational(k + 2) * ctx.x(i))
    return out


def _Vbar(ctx, k, i):
    return DiffOp.dx(ctx, i).scaled(ctx.rational(2) * ctx.t_pow(k + 2)) \
        + DiffOp.dt(ctx).scaled(
            ctx.rational(k + 2) * ctx.x(i) * ctx.t_pow(-k))


def _L(ctx, i, j):
    return DiffOp.dx(ctx, j).scaled(ctx.x(i)) \
        - DiffOp.dx(ctx, i).scaled(ctx.x(j))


def _Vhalf(ctx, k):
    return DiffOp.dt(ctx).scaled(ctx.rational(2) * ctx.t()) \
        + DiffOp.dx(ctx, 1).scaled(ctx.rational(k + 2) * ctx.x(1))


def _R(ctx, l):
    return DiffOp.dx(ctx, l)


def _TDt(ctx):
    return DiffOp.dt(ctx).scaled(ctx.t())


# normal fields near the cusp cone (need the radial generator, n >= 2)

def _N1_0(ctx):
    return DiffOp.dt(ctx).scaled(ctx.r())


def _N1(ctx, m, i):
    return DiffOp.dx(ctx, i).scaled(ctx.t_pow(m) * ctx.r())


def _N2(ctx, m, i):
    coeff = ctx.r() - ctx.rational(2, m + 2) * ctx.t_pow(m + 2)
    return DiffOp.dx(ctx, i).scaled(coeff)


def _N4(ctx, m, i):
    return DiffOp.dx(ctx, i).scaled(ctx.t_pow(m + 2))


# normal fields near the cusp planes (half-space alphabet, n >= 1)

def _M1(ctx):
    return DiffOp.dt(ctx).scaled(ctx.x(1))


def _M2(ctx, m, branch):
    coeff = ctx.x(1) - ctx.rational(2 * branch, m + 2) * ctx.t_pow(m + 2)
    return DiffOp.dx(ctx, 1).scaled(coeff)


def _M4(ctx, m):
    return DiffOp.dx(ctx, 1).scaled(ctx.t_pow(m + 2))


# -- row assembly ---------------------------------------------------------


def _residual_row(name, lhs, rhs, expected="zero", detail=""):
    residual = lhs - rhs
    status = "zero" if residual.is_zero() else "nonzero"
    return CatalogRow(name, status, len(residual.terms), expected, detail)


def _cone_rows(ctx, m):
    """Commutator table for the cusp-cone and axis alphabets."""
    n = ctx.n
    rat, tp, X = ctx.rational, ctx.t_pow, ctx.x
    k = m
    Q = _Q(ctx, k)
    P1 = _P1(ctx, m)
    V0 = _V0(ctx, k)
    lap = _lap(ctx)
    dt = DiffOp.dt(ctx)
    tdt = _TDt(ctx)
    jobs = []

    jobs.append(("[Q, V0] = 4 Q",
                 lambda: _residual_row("[Q, V0] = 4 Q",
                                       commutator(Q, V0), Q.scaled(4))))
    for l in range(1, n + 1):
        def job(l=l):
            vb = _Vbar(ctx, k, l)
            rhs = Q.scaled(rat(-k * (k + 2)) * X(l) * tp(-k - 2)) \
                + vb.scaled(rat(k * (k + 2), 4) * tp(-4))
            return _residual_row("[Q, Vbar%d] = lower order" % l,
                                 commutator(Q, vb), rhs)
        jobs.append(("[Q, Vbar%d]" % l, job))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            def job(i=i, j=j):
                return _residual_row("[Q, L%d%d] = 0" % (i, j),
                                     commutator(Q, _L(ctx, i, j)),
                                     DiffOp.zero(ctx))
            jobs.append(("[Q, L%d%d]" % (i, j), job))
    for i in range(1, n + 1):
        def job(i=i):
            return _residual_row("[V0, Vbar%d] = 0" % i,
                                 commutator(V0, _Vbar(ctx, k, i)),
                                 DiffOp.zero(ctx))
        jobs.append(("[V0, Vbar%d]" % i, job))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            def job(i=i, j=j):
                return _residual_row("[V0, L%d%d] = 0" % (i, j),
                                     commutator(V0, _L(ctx, i, j)),
                                     DiffOp.zero(ctx))
            jobs.append(("[V0, L%d%d]" % (i, j), job))
            def job2(i=i, j=j):
                return _residual_row(
                    "[Vbar%d, L%d%d] = Vbar%d" % (i, i, j, j),
                    commutator(_Vbar(ctx, k, i), _L(ctx, i, j)),
                    _Vbar(ctx, k, j))
            jobs.append(("[Vbar%d, L%d%d]" % (i, i, j), job2))
            def job3(i=i, j=j):
                return _residual_row(
                    "[Vbar%d, L%d%d] = -Vbar%d" % (j, i, j, i),
                    commutator(_Vbar(ctx, k, j), _L(ctx, i, j)),
                    -_Vbar(ctx, k, i))
            jobs.append(("[Vbar%d, L%d%d]" % (j, i, j), job3))
            def job4(i=i, j=j):
                vi = _Vbar(ctx, k, i)
                vj = _Vbar(ctx, k, j)
                rhs = _L(ctx, i, j).scaled(rat(2 * (k + 1) * (k + 2))) \
                    + vi.scaled(rat(k * (k + 2), 2) * X(j) * tp(-k - 2)) \
                    - vj.scaled(rat(k * (k + 2), 2) * X(i) * tp(-k - 2))
                return _residual_row(
                    "[Vbar%d, Vbar%d] = rotation + lower order" % (i, j),
                    commutator(vi, vj), rhs)
            jobs.append(("[Vbar%d, Vbar%d]" % (i, j), job4))
    if n == 3:
        for (l, i, j) in ((3, 1, 2), (2, 1, 3), (1, 2, 3)):
            def job(l=l, i=i, j=j):
                return _residual_row(
                    "[Vbar%d, L%d%d] = 0" % (l, i, j),
                    commutator(_Vbar(ctx, k, l), _L(ctx, i, j)),
                    DiffOp.zero(ctx))
            jobs.append(("[Vbar%d, L%d%d]" % (l, i, j), job))
        def job():
            return _residual_row(
                "[L12, L13] = L32",
                commutator(_L(ctx, 1, 2), _L(ctx, 1, 3)), _L(ctx, 3, 2))
        jobs.append(("[L12, L13]", job))
    jobs.append(("[P1, V0]",
                 lambda: _residual_row("[P1, V0] = 6 P1",
                                       commutator(P1, V0), P1.scaled(6))))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            def job(i=i, j=j):
                return _residual_row("[P1, L%d%d] = 0" % (i, j),
                                     commutator(P1, _L(ctx, i, j)),
                                     DiffOp.zero(ctx))
            jobs.append(("[P1, L%d%d]" % (i, j), job))
    for i in range(1, n + 1):
        def job(i=i):
            di = DiffOp.dx(ctx, i)
            rhs = P1.scaled(rat(-3 * m * (m + 2), 2) * X(i) * tp(-m - 2)) \
                + compose(Q, di).scaled(rat(m + 2) * tp(m)) \
                + compose(dt, dt).scaled(
                    rat(3 * m * (m + 2) ** 2, 4) * X(i) * tp(-m - 4)) \
                + lap.scaled(
                    rat(-m * (m + 2) ** 2, 2) * X(i) * tp(m - 4)) \
                + compose(dt, di).scaled(rat(m * (m + 2), 2) * tp(m - 2)) \
                + di.scaled(rat(m * (m * m - 4), 4) * tp(m - 4)) \
                + dt.scaled(rat(-m * (m + 2) ** 2 * (m + 4), 8)
                            * X(i) * tp(-m - 6))
            return _residual_row(
                "[P1, Vbar%d] = singular expansion" % i,
                commutator(P1, _Vbar(ctx, m, i)), rhs,
                detail="the mixed Dt*D%d term enters with a plus sign; "
                       "the source display flips it" % i)
        jobs.append(("[P1, Vbar%d]" % i, job))

    def job_p1_tdt():
        rhs = P1.scaled(3) \
            + compose(dt, lap).scaled(rat(m + 2) * tp(2 * m)) \
            + lap.scaled(rat(m * (m + 2)) * tp(2 * m - 2))
        return _residual_row(
            "[P1, t*Dt] = 3 P1 + lower order",
            commutator(P1, tdt), rhs,
            detail="middle term carries t^m; the source display "
                   "omits that factor")
    jobs.append(("[P1, t*Dt]", job_p1_tdt))
    jobs.append(("[t*Dt, V0]",
                 lambda: _residual_row("[t*Dt, V0] = 0",
                                       commutator(tdt, V0),
                                       DiffOp.zero(ctx))))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            def job(i=i, j=j):
                return _residual_row("[t*Dt, L%d%d] = 0" % (i, j),
                                     commutator(tdt, _L(ctx, i, j)),
                                     DiffOp.zero(ctx))
            jobs.append(("[t*Dt, L%d%d]" % (i, j), job))
    return jobs


def _plane_rows(ctx, m):
    """Commutator table for the cusp-plane (half-space) alphabet."""
    n = ctx.n
    rat, tp = ctx.rational, ctx.t_pow
    Q = _Q(ctx, m)
    P1 = _P1(ctx, m)
    V = _Vhalf(ctx, m)
    vbar1 = _Vbar(ctx, m, 1)
    dt = DiffOp.dt(ctx)
    jobs = []
    jobs.append(("[V, Vbar1]",
                 lambda: _residual_row("[V, Vbar1] = 0",
                                       commutator(V, vbar1),
                                       DiffOp.zero(ctx))))
    for l in range(2, n + 1):
        def job(l=l):
            return _residual_row(
                "[V, R%d] = 0" % l, commutator(V, _R(ctx, l)),
                DiffOp.zero(ctx),
                detail="the slanted scaling field moves only the first "
                       "coordinate, so transverse translations commute; "
                       "the source table lists a spurious -(m+2) R%d" % l)
        jobs.append(("[V, R%d]" % l, job))
        def job2(l=l):
            return _residual_row("[Vbar1, R%d] = 0" % l,
                                 commutator(vbar1, _R(ctx, l)),
                                 DiffOp.zero(ctx))
        jobs.append(("[Vbar1, R%d]" % l, job2))
        def job3(l=l):
            return _residual_row("[P1, R%d] = 0" % l,
                                 commutator(P1, _R(ctx, l)),
                                 DiffOp.zero(ctx))
        jobs.append(("[P1, R%d]" % l, job3))
        def job4(l=l):
            return _residual_row("[Q, R%d] = 0" % l,
                                 commutator(Q, _R(ctx, l)),
                                 DiffOp.zero(ctx))
        jobs.append(("[Q, R%d]" % l, job4))

    def job_p1_v():
        rhs = P1.scaled(6)
        for i in range(2, n + 1):
            ri2 = compose(_R(ctx, i), _R(ctx, i))
            rhs = rhs + compose(dt, ri2).scaled(
                rat(2 * (m + 2)) * tp(2 * m)) \
                + ri2.scaled(rat(2 * m * (m + 2)) * tp(2 * m - 2))
        return _residual_row("[P1, V] = 6 P1 + transverse terms",
                             commutator(P1, V), rhs)
    jobs.append(("[P1, V]", job_p1_v))

    def job_q_v():
        rhs = Q.scaled(4)
        for i in range(2, n + 1):
            rhs = rhs + compose(_R(ctx, i), _R(ctx, i)).scaled(
                rat(2 * (m + 2)) * tp(2 * m))
        detail = "" if n == 1 else \
            "the clean 4 Q law holds only in one space dimension; " \
            "transverse second derivatives survive otherwise"
        return _residual_row("[Q, V] = 4 Q + transverse terms",
                             commutator(Q, V), rhs, detail=detail)
    jobs.append(("[Q, V]", job_q_v))
    return jobs


def _plane_square_rows(ctx, m):
    """Square decompositions of the normal fields at the cusp planes."""
    n = ctx.n
    rat, tp, X = ctx.rational, ctx.t_pow, ctx.x
    one = ctx.one()
    Q = _Q(ctx, m)
    V = _Vhalf(ctx, m)
    V2 = compose(V, V)
    sumR2 = DiffOp.zero(ctx)
    for i in range(2, n + 1):
        sumR2 = sumR2 + compose(_R(ctx, i), _R(ctx, i))
    D = rat((m + 2) ** 2) * X(1) ** 2 - rat(4) * tp(2 * m + 4)
    jobs = []

    def job_m1():
        M1 = _M1(ctx)
        body = Q.scaled(rat((m + 2) ** 2) * X(1) ** 4) \
            + V2.scaled(X(1) ** 2 * tp(2 * m)) \
            - compose(M1, V).scaled(rat(4) * X(1) * tp(2 * m + 2)) \
            + sumR2.scaled(rat((m + 2) ** 2) * X(1) ** 4 * tp(2 * m)) \
            - V.scaled(rat(m + 2) * X(1) ** 2 * tp(2 * m)) \
            + M1.scaled(rat(2 * (m + 4)) * X(1) * tp(2 * m + 2))
        return _residual_row("plane square: (x1*Dt)^2",
                             compose(M1, M1), body.scaled(one / D))
    jobs.append(("plane square 1", job_m1))

    for branch, tag in ((1, "+"), (-1, "-")):
        def job_m2(branch=branch, tag=tag):
            M2 = _M2(ctx, m, branch)
            shift = rat(2 * branch, m + 2) * tp(m + 2)
            low = X(1) - shift
            high = X(1) + shift
            rhs = (Q.scaled(rat(4) * tp(4)) - V2
                   + sumR2.scaled(rat(4) * tp(2 * m + 4))
                   + V.scaled(rat(2))).scaled(
                       low / (rat((m + 2) ** 2) * high)) \
                + compose(M2, V).scaled(
                    rat(2) * X(1) / (rat(m + 2) * high)) \
                - M2.scaled(rat(2) * (X(1) - rat(branch) * tp(m + 2))
                            / (rat(m + 2) * high))
            return _residual_row(
                "plane square: branch %s slanted field" % tag,
                compose(M2, M2), rhs,
                detail="the zeroth-order numerator subtracts the "
                       "branch shift; the source display adds it")
        jobs.append(("plane square 2%s" % tag, job_m2))

    def job_m3():
        M3 = _TDt(ctx)
        body = Q.scaled(rat((m + 2) ** 2) * X(1) ** 2 * tp(4)) \
            + V2.scaled(tp(2 * m + 4)) \
            - compose(M3, V).scaled(rat(4) * tp(2 * m + 4)) \
            + sumR2.scaled(rat((m + 2) ** 2) * X(1) ** 2 * tp(2 * m + 4)) \
            - V.scaled(rat(m + 2) * tp(2 * m + 4)) \
            + M3.scaled(rat((m + 2) ** 2) * X(1) ** 2
                        + rat(2 * (m + 2)) * tp(2 * m + 4))
        return _residual_row("plane square: (t*Dt)^2",
                             compose(M3, M3), body.scaled(one / D))
    jobs.append(("plane square 3", job_m3))

    def job_m4():
        M4 = _M4(ctx, m)
        body = Q.scaled(rat(4) * tp(2 * m + 8)) \
            - V2.scaled(tp(2 * m + 4)) \
            + compose(M4, V).scaled(rat(2 * (m + 2)) * X(1) * tp(m + 2)) \
            + sumR2.scaled(rat(4) * tp(4 * m + 8)) \
            + V.scaled(rat(2) * tp(2 * m + 4)) \
            - M4.scaled(rat((m + 2) * (m + 4)) * X(1) * tp(m + 2))
        return _residual_row(
            "plane square: (t^((m+2)/2)*D1)^2",
            compose(M4, M4), body.scaled(one / D),
            detail="the zeroth-order weight is (m+2)(m+4); the source "
                   "display prints 3(m+2)^2")
    jobs.append(("plane square 4", job_m4))
    return jobs


_DECOMP_DETAIL = (
    "existence of the decomposition is solved exactly over the "
    "permitted quadratic alphabet with the lower-order weights free; "
    "the normal-times-scaling weight is gauge invariant and is pinned "
    "to 2(m+2) times the singular quotient; the tabulated value "
    "carries a spurious factor of the dimension, and the remaining "
    "tabulated weights are not consistent in any gauge")


def _square_decomp_row(name, ctx, m, Nf, i, c_expected, vbars):
    """Check the square of a normal field against its operator alphabet.

    The products of two alphabet fields satisfy linear relations, so the
    decomposition weights are not unique; the row therefore solves for
    the full weight vector, confirms a solution exists, and then checks
    the one weight that every solution must share: the coefficient of
    x_i times the normal field composed with the anisotropic scaling.
    """
    n = ctx.n
    X = ctx.x
    Q = _Q(ctx, m)
    V0 = _V0(ctx, m)
    sum_vbar2 = DiffOp.zero(ctx)
    for j in range(1, n + 1):
        sum_vbar2 = sum_vbar2 + compose(vbars[j], vbars[j])
    mixed_v0 = DiffOp.zero(ctx)
    mixed_n = DiffOp.zero(ctx)
    rotated = DiffOp.zero(ctx)
    for kk in range(1, n + 1):
        mixed_v0 = mixed_v0 + compose(V0, vbars[kk]).scaled(X(kk))
        mixed_n = mixed_n + compose(Nf, vbars[kk]).scaled(X(kk))
        if kk != i:
            rotated = rotated + compose(
                vbars[i], _L(ctx, i, kk)).scaled(X(kk))
    basis = [Q, compose(V0, V0), compose(Nf, V0).scaled(X(i)),
             sum_vbar2, mixed_v0, mixed_n, rotated, V0, Nf] \
        + [vbars[j] for j in range(1, n + 1) if j != i]
    target = compose(Nf, Nf)
    weights, null_vectors = span_decompose(target, basis)
    if weights is None:
        return CatalogRow(name, "unsolvable", len(target.terms),
                          "zero", _DECOMP_DETAIL)
    pinned = all(vec[2].is_zero() for vec in null_vectors)
    if not pinned or not (weights[2] - c_expected).is_zero():
        return CatalogRow(name, "nonzero", 1, "zero", _DECOMP_DETAIL)
    return CatalogRow(name, "solvable", 0, "zero", _DECOMP_DETAIL)


def _cone_square_rows(ctx, m):
    """Square decompositions and eliminations near the cusp cone."""
    n = ctx.n
    rat, tp, X = ctx.rational, ctx.t_pow, ctx.x
    one = ctx.one()
    r = ctx.r()
    Q = _Q(ctx, m)
    V0 = _V0(ctx, m)
    vbars = [None] + [_Vbar(ctx, m, i) for i in range(1, n + 1)]
    sum_vbar2 = DiffOp.zero(ctx)
    for j in range(1, n + 1):
        sum_vbar2 = sum_vbar2 + compose(vbars[j], vbars[j])
    E = rat(4) * tp(2 * m + 4) - rat((m + 2) ** 2) * r ** 2
    Dp = -one * E
    jobs = []

    def job_38():
        N10 = _N1_0(ctx)
        body = Q.scaled(rat(-4) * r ** 2 * tp(2 * m + 4)) \
            - sum_vbar2.scaled(r ** 2 * tp(2 * m)) \
            + compose(N10, V0).scaled(rat(4) * r * tp(2 * m + 2)) \
            + V0.scaled(rat(m + 2) * r ** 2 * tp(2 * m)) \
            + N10.scaled(rat(2 * (m + 2) * (n - 1) - 8)
                         * tp(2 * m + 2) * r
                         - rat(m * (m + 2) ** 2, 2) * r ** 3 * tp(-2))
        return _residual_row("cone square: (r*Dt)^2",
                             compose(N10, N10), body.scaled(one / E))
    jobs.append(("cone square vertex", job_38))

    for i in range(1, n + 1):
        def job_39(i=i):
            N1i = _N1(ctx, m, i)
            c1 = rat(2 * (m + 2)) * tp(m) * r / Dp
            return _square_decomp_row(
                "cone square: (t^(m/2)*r*D%d)^2 modulo admissible "
                "terms" % i, ctx, m, N1i, i, c1, vbars)
        jobs.append(("cone square 1-%d" % i, job_39))

        def job_310(i=i):
            N10 = _N1_0(ctx)
            N1i = _N1(ctx, m, i)
            lhs = vbars[i]
            rhs_a = V0.scaled(rat(2) * tp(m + 2) * X(i)
                              / (rat(m + 2) * r ** 2)) \
                + N10.scaled(X(i) * (-one * E)
                             / (rat(m + 2) * r ** 3 * tp(m)))
            rhs_b = V0.scaled(rat(m + 2) * X(i) / (rat(2) * tp(m + 2))) \
                + N1i.scaled(E / (rat(2) * tp(2 * m + 2) * r))
            for kk in range(1, n + 1):
                if kk == i:
                    continue
                rhs_a = rhs_a - _L(ctx, i, kk).scaled(
                    rat(2) * tp(m + 2) * X(kk) / r ** 2)
                rhs_b = rhs_b - _L(ctx, i, kk).scaled(
                    rat((m + 2) ** 2, 2) * X(kk) / tp(m + 2))
            row1 = _residual_row("cone elimination: Vbar%d via vertex "
                                 "normal field" % i, lhs, rhs_a)
            row2 = _residual_row(
                "cone elimination: Vbar%d via scaled gradient" % i,
                lhs, rhs_b,
                detail="the gradient-field weight divides by "
                       "2 t^(m+1) r; the source display drops the "
                       "2 t^((m+2)/2) part of that divisor")
            return [row1, row2]
        jobs.append(("cone elimination 1-%d" % i, job_310))

        def job_311(i=i):
            N2i = _N2(ctx, m, i)
            u = r - rat(2, m + 2) * tp(m + 2)
            c2 = rat(2 * (m + 2)) * u / Dp
            return _square_decomp_row(
                "cone square: slanted normal field %d modulo "
                "admissible terms" % i, ctx, m, N2i, i, c2, vbars)
        jobs.append(("cone square 2-%d" % i, job_311))

        def job_312(i=i):
            N2i = _N2(ctx, m, i)
            body = V0.scaled(rat(m + 2) * X(i)) \
                - N2i.scaled(rat(m + 2) * (rat(m + 2) * r
                                           + rat(2) * tp(m + 2)))
            for kk in range(1, n + 1):
                if kk != i:
                    body = body - _L(ctx, i, kk).scaled(
                        rat((m + 2) ** 2) * X(kk))
            return _residual_row(
                "cone elimination: Vbar%d via slanted normal field" % i,
                vbars[i], body.scaled(one / (rat(2) * tp(m + 2))))
        jobs.append(("cone elimination 2-%d" % i, job_312))

    def job_313():
        N30 = _TDt(ctx)
        body = Q.scaled(rat(-4) * tp(2 * m + 8)) \
            - sum_vbar2.scaled(tp(2 * m + 4)) \
            + compose(N30, V0).scaled(rat(4) * tp(2 * m + 4)) \
            + V0.scaled(rat(m + 2) * tp(2 * m + 4)) \
            + N30.scaled(rat(2 * (n - 1) * (m + 2) - 4) * tp(2 * m + 4)
                         - rat((m + 2) ** 3, 2) * r ** 2)
        return _residual_row(
            "cone square: (t*Dt)^2",
            compose(N30, N30), body.scaled(one / E),
            detail="zeroth-order weight corrected: -4 t^(m+2) joins the "
                   "first bracket and the radial bracket carries "
                   "(m+2)^3/2")
    jobs.append(("cone square 3", job_313))

    for i in range(1, n + 1):
        def job_314(i=i):
            N30 = _TDt(ctx)
            rhs = V0.scaled(rat(2) * tp(m + 2) * X(i)
                            / (rat(m + 2) * r ** 2)) \
                + N30.scaled(X(i) * (-one * E)
                             / (rat(m + 2) * r ** 2 * tp(m + 2)))
            for kk in range(1, n + 1):
                if kk != i:
                    rhs = rhs - _L(ctx, i, kk).scaled(
                        rat(2) * tp(m + 2) * X(kk) / r ** 2)
            return _residual_row(
                "cone elimination: Vbar%d via time scaling field" % i,
                vbars[i], rhs)
        jobs.append(("cone elimination 3-%d" % i, job_314))

        def job_315(i=i):
            N4i = _N4(ctx, m, i)
            c4 = rat(2 * (m + 2)) * tp(m + 2) / Dp
            return _square_decomp_row(
                "cone square: (t^((m+2)/2)*D%d)^2 modulo admissible "
                "terms" % i, ctx, m, N4i, i, c4, vbars)
        jobs.append(("cone square 4-%d" % i, job_315))

        def job_316(i=i):
            N4i = _N4(ctx, m, i)
            rhs = V0.scaled(rat(m + 2) * X(i) / (rat(2) * tp(m + 2))) \
                + N4i.scaled(E / (rat(2) * tp(2 * m + 4)))
            for kk in range(1, n + 1):
                if kk != i:
                    rhs = rhs - _L(ctx, i, kk).scaled(
                        rat((m + 2) ** 2, 2) * X(kk) / tp(m + 2))
            return _residual_row(
                "cone elimination: Vbar%d via time-power gradient" % i,
                vbars[i], rhs,
                detail="the gradient-field weight divides by "
                       "2 t^(m+2); the source display drops the "
                       "2 t^((m+2)/2) part of that divisor")
        jobs.append(("cone elimination 4-%d" % i, job_316))
    return jobs


def _mixed_rows(ctx, m1, m2):
    """Cross-exponent relation between the two scaling fields."""
    n = ctx.n
    rat, tp, X = ctx.rational, ctx.t_pow, ctx.x
    r2 = ctx.r() ** 2 if n >= 2 else X(1) ** 2
    D = rat((m2 + 2) ** 2) * r2 - rat(4) * tp(2 * m2 + 4)
    jobs = []

    def job():
        lhs = _V0(ctx, m1)
        rhs = _V0(ctx, m2) \
            + _V0(ctx, m2).scaled(rat((m1 - m2) * (m2 + 2)) * r2 / D)
        for kk in range(1, n + 1):
            rhs = rhs - _Vbar(ctx, m2, kk).scaled(
                rat(2 * (m1 - m2)) * tp(m2 + 2) * X(kk) / D)
        return _residual_row(
            "scaling field at exponent %d via exponent %d alphabet"
            % (m1, m2), lhs, rhs,
            detail="coefficients carry the exponent gap %d"
                   % (m1 - m2))
    jobs.append(("mixed %d,%d" % (m1, m2), job))
    return jobs


def _abstract_rows(ctx):
    rows = []
    for label in ("vertex normal field", "slanted normal field",
                  "time scaling field", "time-power gradient"):
        rows.append(CatalogRow(
            "admissible square decomposition: %s" % label,
            "asserted", 0, "asserted",
            "stated with unspecified admissible coefficients; "
            "only the explicit precursor identities are machine-checked"))
    return rows


def _negative_control(ctx, m):
    Q = _Q(ctx, m)
    corrupted = Q.scaled(4) + DiffOp.dt(ctx)
    return _residual_row("negative control: corrupted scaling law",
                         commutator(Q, _V0(ctx, m)), corrupted,
                         expected="nonzero")


def catalog_verify(m, n, threads=None):
    """Verify the identity catalog; returns a list of CatalogRow.

    The first argument is either a single integer exponent, which runs
    the full single-exponent suite, or a pair (m1, m2) of distinct
    exponents, which runs the cross-exponent rows.
    """
    if n not in (1, 2, 3):
        raise ParameterError("space dimension must be 1, 2 or 3")
    ctx = CoeffContext(n)
    if isinstance(m, tuple):
        if len(m) != 2:
            raise ParameterError("expected a pair of exponents")
        m1, m2 = m
        for value in (m1, m2):
            if not isinstance(value, int) or not 1 <= value <= 8:
                raise ParameterError("exponents must be integers in 1..8")
        if m1 == m2:
            raise ParameterError("the two exponents must differ")
        if m1 < m2:
            m1, m2 = m2, m1
        jobs = _mixed_rows(ctx, m1, m2)
        tail = []
    else:
        if not isinstance(m, int) or not 1 <= m <= 8:
            raise ParameterError("exponent must be an integer in 1..8")
        jobs = _cone_rows(ctx, m) + _plane_rows(ctx, m) \
            + _plane_square_rows(ctx, m)
        if n >= 2:
            jobs = jobs + _cone_square_rows(ctx, m)
        tail = _abstract_rows(ctx) if n >= 2 else []
        tail = tail + [_negative_control(ctx, m)]

    def run(job):
        return job[1]()

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    rows = []
    for result in results:
        if isinstance(result, list):
            rows.extend(result)
        else:
            rows.append(result)
    return rows + tail
