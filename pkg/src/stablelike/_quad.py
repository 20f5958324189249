# Shared Gauss-Legendre panel machinery used by the density, semigroup and
# operator quadratures.  Everything here is deterministic and cache-friendly.

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=128)
def gl_rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(edges, order: int):
    """Composite Gauss-Legendre nodes/weights on the panels defined by `edges`.

    Returns flat arrays (nodes, weights) covering [edges[0], edges[-1]].
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("need at least two panel edges")
    x, w = gl_rule(order)
    a, b = edges[:-1], edges[1:]
    mid = 0.5 * (a + b)[:, None]
    half = 0.5 * (b - a)[:, None]
    return (mid + half * x[None, :]).ravel(), (half * w[None, :]).ravel()


def geometric_edges(inner: float, outer: float, growth: float, anchors=()):
    """Geometric ring boundaries from `inner` to `outer` with ratio <= growth.

    Radii listed in `anchors` that fall strictly inside (inner, outer) are
    inserted exactly; each span between anchors is subdivided geometrically.
    """
    if not (0.0 < inner < outer):
        raise ValueError("need 0 < inner < outer")
    pts = [inner] + sorted(a for a in set(anchors) if inner < a < outer) + [outer]
    edges = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        n = max(1, int(np.ceil(np.log(hi / lo) / np.log(growth))))
        edges.append(lo * (hi / lo) ** (np.arange(n) / n))
    edges.append([outer])
    return np.concatenate(edges)


def log_panel_nodes(lo: float, hi: float, panels_per_unit: float, order: int):
    """GL nodes for integrals over [lo, hi] written in log coordinates.

    Returns (s_nodes, weights) such that sum(g(s) * weights) approximates
    the integral of g over [lo, hi]; panel density is per unit of log(s).
    """
    if not (0.0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    span = np.log(hi) - np.log(lo)
    n = max(2, int(np.ceil(span * panels_per_unit)))
    edges = np.linspace(np.log(lo), np.log(hi), n + 1)
    u, w = panel_nodes(edges, order)
    s = np.exp(u)
    return s, w * s
