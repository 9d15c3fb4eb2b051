"""Closed-form data of the simply connected space forms.

``s_c`` solves ``y'' + c y = 0`` with ``y(0) = 0, y'(0) = 1`` and ``c_c`` is
its derivative. The geodesic ball of radius ``r`` in the space form of
curvature ``c`` has metric ``dt^2 + s_c(t)^2 dxi^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

#: Below this ``|c|`` the power series is used instead of sin/sinh ...
SERIES_THRESHOLD = 1e-6
#: ... as long as ``|c| t^2`` stays below this (series error ~ (c t^2)^4 / 9!).
SERIES_MAX_CT2 = 1e-3


class Context(str, Enum):
    CHENG = "Cheng"
    SUBMANIFOLD = "Submanifold"


@dataclass(frozen=True)
class ModelBall:
    """Geodesic ball ``B(r)`` in the ``n``-dimensional space form of curvature ``c``.

    ``n`` doubles as the submanifold dimension ``m`` where the call site
    needs it.
    """

    c: float
    n: int
    r: float

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise DomainError(f"curvature must be finite, got {self.c}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.n}")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise DomainError(f"radius must be positive and finite, got {self.r}")
        if self.c > 0 and self.r >= math.pi / math.sqrt(self.c):
            raise DomainError(
                f"r = {self.r} >= pi/sqrt(c) = {math.pi / math.sqrt(self.c)}: "
                "the ball covers the whole sphere"
            )


def _check_t(c, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be nonnegative")
    if c > 0 and np.any(t > math.pi / math.sqrt(c) * (1 + 1e-12)):
        raise DomainError(f"t exceeds pi/sqrt(c) = {math.pi / math.sqrt(c)}")
    return t


def _unwrap(x, like):
    return float(x) if np.ndim(like) == 0 else x


def _use_series(c, t):
    # the truncated series is exact to round-off only while |c| t^2 is small
    return abs(c) < SERIES_THRESHOLD and np.all(abs(c) * t * t < SERIES_MAX_CT2)


def s_c(c: float, t):
    """``S_c(t)``: ``sin(sqrt(c) t)/sqrt(c)``, ``t`` or ``sinh(sqrt(-c) t)/sqrt(-c)``."""
    tt = _check_t(c, t)
    if _use_series(c, tt):
        # t - c t^3/3! + c^2 t^5/5! - c^3 t^7/7!
        x = c * tt * tt
        out = tt * (1.0 - x / 6.0 * (1.0 - x / 20.0 * (1.0 - x / 42.0)))
    elif c > 0:
        k = math.sqrt(c)
        out = np.sin(k * tt) / k
    else:
        k = math.sqrt(-c)
        out = np.sinh(k * tt) / k
    return _unwrap(out, t)


def c_c(c: float, t):
    """``C_c(t) = S_c'(t)``."""
    tt = _check_t(c, t)
    if _use_series(c, tt):
        x = c * tt * tt
        out = 1.0 - x / 2.0 * (1.0 - x / 12.0 * (1.0 - x / 30.0))
    elif c > 0:
        out = np.cos(math.sqrt(c) * tt)
    else:
        out = np.cosh(math.sqrt(-c) * tt)
    return _unwrap(out, t)


def comparison_functions(c: float, t):
    """Return ``(S_c, C_c, S_c'')`` at ``t``; ``S_c'' = -c S_c``."""
    s = s_c(c, t)
    return s, c_c(c, t), -c * s


def validate_ball(ball: ModelBall, context: Context | str = Context.CHENG) -> str | None:
    """Check the radius restriction a theorem places on a positively curved ball.

    Returns ``None`` when the ball is admissible, otherwise a message naming
    the violated constraint. Never raises.
    """
    context = Context(context)
    if ball.c <= 0:
        return None
    k = math.sqrt(ball.c)
    if context is Context.CHENG:
        limit, label = math.pi / k, "pi/sqrt(c)"
    else:
        limit, label = math.pi / (2 * k), "pi/(2 sqrt(c))"
    if ball.r >= limit:
        return f"r >= {label} (r = {ball.r:g}, limit = {limit:.10g})"
    return None


def rescale(c: float, r: float) -> tuple[float, float, float]:
    """Normalize ``(c, r)`` to curvature in ``{-1, 0, 1}``.

    Returns ``(sign_c, r_scaled, factor)`` with
    ``lambda_1(c, n, r) = factor * lambda_1(sign_c, n, r_scaled)``.
    """
    if c == 0:
        return 0.0, r, 1.0
    k = math.sqrt(abs(c))
    return math.copysign(1.0, c), k * r, abs(c)
