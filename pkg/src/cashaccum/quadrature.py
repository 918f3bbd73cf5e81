"""Adaptive Simpson quadrature."""

from __future__ import annotations

from typing import Callable

from .errors import NoConvergence

MAX_DEPTH = 50
MIN_DEPTH = 4


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(
    func: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-8,
    max_depth: int = MAX_DEPTH,
) -> float:
    """Integrate ``func`` over [a, b] to within max(abs_tol, rel_tol*|result|).

    Intervals are bisected until the Richardson error estimate
    ``|S_left + S_right - S_whole| / 15`` drops below the share of the
    tolerance owned by that interval. The relative target is taken from a
    coarse 16-panel composite Simpson estimate. Raises NoConvergence when an
    interval still fails at ``max_depth`` bisections.
    """
    if b == a:
        return 0.0
    if b < a:
        return -adaptive_simpson(func, b, a, abs_tol, rel_tol, max_depth)

    n = 16
    h = (b - a) / n
    coarse = sum(
        _simpson(func(a + i * h), func(a + (i + 0.5) * h), func(a + (i + 1) * h), h)
        for i in range(n)
    )
    tol = max(abs_tol, rel_tol * abs(coarse))

    fa, fm, fb = func(a), func(0.5 * (a + b)), func(b)
    stack = [(a, b, fa, fm, fb, _simpson(fa, fm, fb, b - a), tol, 0)]
    total = 0.0
    while stack:
        lo, hi, flo, fmid, fhi, whole, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl = func(0.5 * (lo + mid))
        fr = func(0.5 * (mid + hi))
        left = _simpson(flo, fl, fmid, mid - lo)
        right = _simpson(fmid, fr, fhi, hi - mid)
        delta = left + right - whole
        if depth >= MIN_DEPTH and abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
        elif depth >= max_depth:
            raise NoConvergence(
                f"adaptive Simpson did not converge on [{lo}, {hi}] after {max_depth} bisections"
            )
        else:
            stack.append((lo, mid, flo, fl, fmid, left, 0.5 * eps, depth + 1))
            stack.append((mid, hi, fmid, fr, fhi, right, 0.5 * eps, depth + 1))
    return total
