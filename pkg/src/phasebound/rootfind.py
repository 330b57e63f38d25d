"""Scalar root refinement: bisection warm-up followed by Brent's method.

The Brent loop follows the classic zeroin structure (inverse quadratic
interpolation with secant and bisection safeguards).
"""

from __future__ import annotations

from .errors import UsageError

_EPS = 2.220446049250313e-16


def bisect_then_brent(f, a: float, b: float, fa: float | None = None,
                      fb: float | None = None, xtol: float = 1e-12,
                      pre_bisect: int = 8, maxiter: int = 100) -> float:
    """Root of f in [a, b] given a sign change; xtol is absolute in x.

    A few plain bisection steps shrink the bracket first, which keeps the
    interpolation steps honest on awkward (kinked, discontinuous) functions;
    Brent finishes.
    """
    if a > b:
        a, b = b, a
        fa, fb = fb, fa
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise UsageError("root bracket does not straddle a sign change")

    for _ in range(pre_bisect):
        m = 0.5 * (a + b)
        if m == a or m == b:
            return m
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm

    # Brent proper. (xpre, fpre) and (xcur, fcur) bracket with xblk.
    xpre, xcur, fpre, fcur = a, b, fa, fb
    xblk = fblk = 0.0
    spre = scur = 0.0
    for _ in range(maxiter):
        if fpre * fcur < 0.0:
            xblk, fblk = xpre, fpre
            spre = scur = xcur - xpre
        if abs(fblk) < abs(fcur):
            xpre, xcur, xblk = xcur, xblk, xcur
            fpre, fcur, fblk = fcur, fblk, fcur
        delta = 0.5 * (xtol + 4.0 * _EPS * abs(xcur))
        sbis = 0.5 * (xblk - xcur)
        if fcur == 0.0 or abs(sbis) < delta:
            return xcur
        if abs(spre) > delta and abs(fcur) < abs(fpre):
            if xpre == xblk:
                stry = -fcur * (xcur - xpre) / (fcur - fpre)  # secant
            else:
                dpre = (fpre - fcur) / (xpre - xcur)
                dblk = (fblk - fcur) / (xblk - xcur)
                stry = -fcur * (fblk * dblk - fpre * dpre) / \
                    (dblk * dpre * (fblk - fpre))
            if 2.0 * abs(stry) < min(abs(spre), 3.0 * abs(sbis) - delta):
                spre, scur = scur, stry
            else:
                spre = scur = sbis
        else:
            spre = scur = sbis
        xpre, fpre = xcur, fcur
        if abs(scur) > delta:
            xcur += scur
        else:
            xcur += delta if sbis > 0.0 else -delta
        fcur = f(xcur)
    return xcur
