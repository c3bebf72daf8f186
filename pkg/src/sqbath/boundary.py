"""Steady-state entanglement boundary of the reduced two-qubit model.

For each occupation n there is a threshold correlation B(n): the stationary
state is entangled iff m > B(n).  Two routes are kept deliberately separate:

* boundary_numeric: bisection on the exact stationary state's negativity.
  This is the ground truth; it assumes only that stationary negativity is
  non-decreasing in m (checked by tests).
* boundary_closed_form: analytic expression

      B(n) = -alpha + sqrt(alpha^2 + n(n+1)),   alpha = 1/(4n + 2)

  equivalently the positive root of m^2 + m/(2n+1) = n(n+1).  Two alternative
  spellings that place alpha unsquared under the radical circulate; both fail
  the n -> 0 limit and overshoot the numeric boundary, so they are retained
  only as diagnostics (boundary_closed_form_readings).
"""

from __future__ import annotations

import logging
import math

from . import bloch, metrics
from .params import BathParams, NegativeParam, NoTransition, SystemRates

log = logging.getLogger(__name__)

BISECTION_TOL = 1e-10
NEGATIVITY_FLOOR = 1e-12


def boundary_closed_form(n: float) -> float:
    """Analytic threshold correlation; satisfies B(0) = 0 and B <= sqrt(n(n+1))."""
    if n < 0.0:
        raise NegativeParam(f"n must be >= 0, got {n}")
    alpha = 1.0 / (4.0 * n + 2.0)
    return -alpha + math.sqrt(alpha ** 2 + n * (n + 1.0))


def boundary_closed_form_readings(n: float) -> dict[str, float]:
    """Alternative spellings with alpha unsquared under the radical.

    reading_1 uses alpha = (n + 1/2)/4, reading_2 uses alpha = 1/(4(n + 1/2)).
    Kept for comparison against the numeric ground truth; neither passes the
    n -> 0 limit.
    """
    if n < 0.0:
        raise NegativeParam(f"n must be >= 0, got {n}")
    x = n * (n + 1.0)
    a1 = (n + 0.5) / 4.0
    a2 = 1.0 / (4.0 * (n + 0.5))
    return {
        "reading_1": -a1 + math.sqrt(a1 + x),
        "reading_2": -a2 + math.sqrt(a2 + x),
    }


def _steady_negativity(n: float, m: float) -> float:
    v = bloch.steady_state(BathParams(n, m))
    return metrics.x_state_negativity(v.p_ee, v.p_eg, v.p_ge, v.p_gg, v.coh)


def boundary_numeric(n: float, tol: float = BISECTION_TOL) -> float:
    """Bisection for the m at which stationary negativity becomes positive.

    The predicate "negativity > 1e-12" is exactly false on [0, B) and true on
    (B, sqrt(n(n+1))], so bisection is robust where slope-based root finders
    would stall on the flat side.
    """
    if n < 0.0:
        raise NegativeParam(f"n must be >= 0, got {n}")
    if n == 0.0:
        return 0.0
    hi = math.sqrt(n * (n + 1.0))
    if _steady_negativity(n, hi) <= NEGATIVITY_FLOOR:
        raise NoTransition(
            f"stationary state not entangled even at m = sqrt(n(n+1)) for n = {n}")
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _steady_negativity(n, mid) > NEGATIVITY_FLOOR:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def boundary_with_spontaneous_emission(n: float, rates: SystemRates) -> float:
    """Threshold on the bare correlation m when the qubits also decay locally.

    Local decay dilutes what the qubits see: occupation and correlation are
    both scaled by s = C/(1+C) with cooperativity C.  The stationary state is
    entangled iff the diluted pair crosses the ordinary boundary, so the bare
    threshold is boundary_numeric(s*n)/s.  The result can exceed the physical
    ceiling sqrt(n(n+1)); that signals no physical bath reaches the
    transition at this cooperativity.
    """
    if n < 0.0:
        raise NegativeParam(f"n must be >= 0, got {n}")
    c = rates.cooperativity
    if math.isinf(c):
        return boundary_numeric(n)
    s = c / (1.0 + c)
    return boundary_numeric(s * n) / s


def boundary_comparison(n: float) -> dict[str, float]:
    """Numeric ground truth next to every closed form, with absolute errors."""
    numeric = boundary_numeric(n)
    closed = boundary_closed_form(n)
    readings = boundary_closed_form_readings(n)
    out = {
        "numeric": numeric,
        "closed_form": closed,
        "closed_form_error": abs(closed - numeric),
        "reading_1": readings["reading_1"],
        "reading_1_error": abs(readings["reading_1"] - numeric),
        "reading_2": readings["reading_2"],
        "reading_2_error": abs(readings["reading_2"] - numeric),
    }
    log.info("boundary comparison at n=%g: %s", n, out)
    return out
