"""Instant and difference priority vectors.

Every function here returns a DESCENT direction: iW = -grad ii, indexed like
the matrix upper triangle.  Moving an infinitesimal step along the returned
vector strictly decreases the indicator.

Two routes exist.  The analytic route (instant_pv*) differentiates the
indicator in closed form and is only available where Kii_{n,p} is C^1 --
finite p outside {0, 1} -- and away from zero defects.  The difference route
(difference_*) replaces each partial derivative by the forward one-sided
quotient [ii(A + l*e_ij) - ii(A)] / l and works for every p, including 1 and
infinity; it is the route the reproduction experiments use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    AdditivePCMatrix,
    MultiplicativePCMatrix,
    all_defects,
    to_additive,
    triad_slots,
    upper_size,
)
from .errors import (
    DegenerateDefect,
    InvalidExponent,
    NonSmoothExponent,
    OnConsistentLocus,
)
from .indicators import DELTA_ZERO, INF, kii

#: minimum triad defect for analytic-gradient evaluation (d^(p-1) diverges
#: below it when p < 1; sign(u) is meaningless at u = 0 for any p)
DELTA_GRAD = 1e-9


@dataclass(frozen=True)
class DirectionVector:
    """Upper-triangle-indexed direction; same storage order as the matrices."""

    n: int
    components: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "components", tuple(float(v) for v in self.components)
        )
        if len(self.components) != upper_size(self.n):
            raise ValueError(
                f"expected {upper_size(self.n)} components for n={self.n}, "
                f"got {len(self.components)}"
            )

    def norm(self) -> float:
        return math.sqrt(math.fsum(c * c for c in self.components))

    def negate(self) -> "DirectionVector":
        return DirectionVector(self.n, tuple(-c for c in self.components))


def instant_pv3_mult(x: float, y: float, z: float) -> DirectionVector:
    """Descent direction of the triad indicator at (a12, a13, a23) = (x, y, z).

    With u = ln y - ln x - ln z != 0 the components are
    sign(u) * e^(-|u|) * (1/x, -1/y, 1/z).
    """
    u = math.log(y) - math.log(x) - math.log(z)
    if abs(u) < DELTA_ZERO:
        raise OnConsistentLocus("triad is consistent; no descent direction exists")
    s = math.copysign(1.0, u)
    e = math.exp(-abs(u))
    return DirectionVector(3, (s * e / x, -s * e / y, s * e / z))


def instant_pv3_add(a: float, b: float, c: float) -> DirectionVector:
    """Additive-form descent direction at (b12, b13, b23) = (a, b, c).

    With u = a + c - b != 0 the components are sign(u) * e^(-|u|) * (-1, +1, -1).
    """
    u = a + c - b
    if abs(u) < DELTA_ZERO:
        raise OnConsistentLocus("triad is consistent; no descent direction exists")
    s = math.copysign(1.0, u)
    e = math.exp(-abs(u))
    return DirectionVector(3, (-s * e, s * e, -s * e))


def _check_smooth_exponent(p) -> float:
    q = float(p)
    if math.isnan(q) or q == -INF:
        raise InvalidExponent(p)
    if q in (0.0, 1.0) or q == INF:
        raise NonSmoothExponent(q)
    return q


def instant_pv_np(m: MultiplicativePCMatrix | AdditivePCMatrix, p) -> DirectionVector:
    """Descent direction -grad Kii_{n,p} for finite p outside {0, 1}.

    Written in the ratio form

        iW_rs = -e^(-D) * (1/N) * sum_t (d_t / D)^(p-1) * sigma(t, rs) / a_rs

    over the triads t containing the pair (r,s), where D is the p-average of
    the defects, sigma is +sign(u_t) for the (i,j) and (j,k) slots and
    -sign(u_t) for the (i,k) slot.  The (d/D)^(p-1) ratio keeps the weights
    finite where raw d^(p-1) would overflow, and makes the n = 3 case
    collapse onto instant_pv3_mult to round-off.  For an additive matrix the same
    expression applies without the 1/a_rs factor.
    """
    q = _check_smooth_exponent(p)
    mult = isinstance(m, MultiplicativePCMatrix)
    b = to_additive(m) if mult else m
    n = b.n
    slots = triad_slots(n)
    ds = all_defects(b)
    worst = min(range(len(ds)), key=lambda t: ds[t])
    if ds[worst] < DELTA_GRAD:
        if max(ds) < DELTA_GRAD:
            raise OnConsistentLocus(
                "all triad defects vanish; no descent direction exists"
            )
        raise DegenerateDefect(slots[worst][0], ds[worst])
    big = (math.fsum(d ** q for d in ds) / len(ds)) ** (1.0 / q)
    scale = math.exp(-big) / len(ds)
    grad = [0.0] * upper_size(n)
    bu = b.upper
    for (_, ij, jk, ik), d in zip(slots, ds):
        s = math.copysign(1.0, bu[ij] + bu[jk] - bu[ik])
        w = scale * (d / big) ** (q - 1.0)
        grad[ij] += s * w
        grad[jk] += s * w
        grad[ik] -= s * w
    if mult:
        comps = tuple(-g / a for g, a in zip(grad, m.upper))
    else:
        comps = tuple(-g for g in grad)
    return DirectionVector(n, comps)


def difference_gradient(
    m: MultiplicativePCMatrix | AdditivePCMatrix, p, l: float
) -> DirectionVector:
    """Forward difference quotients of kii, component per upper entry.

    Component (i,j) is [kii(A', p) - kii(A, p)] / l where A' perturbs only
    the (i,j) upper entry by +l (its mirror follows from the representation).
    """
    if not (l > 0.0):
        raise ValueError(f"difference increment l must be > 0, got {l!r}")
    base = kii(m, p)
    comps = []
    work = list(m.upper)
    for k in range(len(work)):
        saved = work[k]
        work[k] = saved + l
        comps.append((kii(m.replace_upper(work), p) - base) / l)
        work[k] = saved
    return DirectionVector(m.n, tuple(comps))


def difference_priority_vector(
    m: MultiplicativePCMatrix | AdditivePCMatrix, p, l: float
) -> DirectionVector:
    """Discrete analog of the instant priority vector: the negated quotients."""
    return difference_gradient(m, p, l).negate()
