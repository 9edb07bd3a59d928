"""The p-inconsistency indicator family Kii_{n,p}.

Kii_{n,p}(A) = 1 - exp(-||(d_t)||_p) where d_t ranges over the C(n,3) triad
defects of the log-image and ||.||_p is the p-average with the 1/C(n,3)
normalization inside.  p = infinity takes the plain maximum (the classical
triad-based index); p may be negative (harmonic-type means), in which case
the indicator has a hole: it is undefined whenever some defect vanishes.

Defects are always computed in log space from the additive form, never by
multiplying raw entries, so matrices with entries like e^3 cannot overflow
their triad products.
"""

from __future__ import annotations

import math

from .core import (
    AdditivePCMatrix,
    MultiplicativePCMatrix,
    all_defects,
    to_additive,
    triad_slots,
)
from .errors import IndicatorUndefined, InvalidExponent, ZeroWithNegativeExponent

#: below this a triad defect counts as exactly zero for the p < 0 domain check
DELTA_ZERO = 1e-12

INF = math.inf


def normalize_exponent(p) -> float:
    """Coerce p to float, rejecting 0, NaN and -inf; inf means max."""
    if isinstance(p, str):
        raise InvalidExponent(p, "exponent must be numeric (or math.inf)")
    q = float(p)
    if math.isnan(q):
        raise InvalidExponent(p, "NaN is not an exponent")
    if q == 0.0:
        raise InvalidExponent(p)
    if q == -INF:
        raise InvalidExponent(p, "only +infinity is supported")
    return q


def p_average(xs, p) -> float:
    """((1/N) sum x_i^p)^(1/p); max of the x_i when p = inf.

    For p < 0 any x_i below DELTA_ZERO raises ZeroWithNegativeExponent:
    x^p blows up and the mean is no longer meaningful.
    """
    q = normalize_exponent(p)
    xs = list(xs)
    if not xs:
        raise ValueError("p_average of an empty sequence")
    if q == INF:
        return max(xs)
    if q < 0.0:
        for x in xs:
            if x < DELTA_ZERO:
                raise ZeroWithNegativeExponent(x)
    if q == 0.5:
        # sqrt is correctly rounded where pow(x, 0.5) need not be
        return (math.fsum(math.sqrt(x) for x in xs) / len(xs)) ** 2
    return (math.fsum(x ** q for x in xs) / len(xs)) ** (1.0 / q)


def kii3(x: float, y: float, z: float) -> float:
    """Triad indicator 1 - exp(-|ln x + ln z - ln y|) for (a12, a13, a23) = (x, y, z).

    Canonical exponential form; equals the min form 1 - min(y/(xz), xz/y)
    exactly (see kii3_min_form) but is immune to overflow in x*z.
    """
    u = math.log(x) + math.log(z) - math.log(y)
    return 1.0 - math.exp(-abs(u))


def kii3_min_form(x: float, y: float, z: float) -> float:
    """Equivalent closed form 1 - min(y/(xz), xz/y); kept as a cross-check."""
    r = y / (x * z)
    return 1.0 - min(r, 1.0 / r)


def kii(m: MultiplicativePCMatrix | AdditivePCMatrix, p) -> float:
    """Kii_{n,p} of a PC matrix in either form.

    Raises IndicatorUndefined for p < 0 when some triad defect is below
    DELTA_ZERO -- the indicator's hole around the consistent set -- naming
    the offending triad.
    """
    q = normalize_exponent(p)
    b = to_additive(m) if isinstance(m, MultiplicativePCMatrix) else m
    ds = all_defects(b)
    if q < 0.0:
        for (t, _, _, _), d in zip(triad_slots(b.n), ds):
            if d < DELTA_ZERO:
                raise IndicatorUndefined(q, t, d)
    if q == INF:
        avg = max(ds)
    elif q == 0.5:
        # sqrt is correctly rounded where pow(x, 0.5) need not be
        avg = (math.fsum(math.sqrt(d) for d in ds) / len(ds)) ** 2
    else:
        avg = (math.fsum(d ** q for d in ds) / len(ds)) ** (1.0 / q)
    return 1.0 - math.exp(-avg)
