"""Holder norms and seminorms, discrete and probe-based, plus the
interpolation, product and mollifier inequality audits.

Discrete seminorms are suprema over finite probe sets, hence lower bounds
of the true seminorms.  Inequality audits therefore measure both sides on
matched probe sets and use explicit constants assembled from elementary
arguments, never fitted ones.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from ._quad import gl_rule
from .fields import Decay, FunctionField, GridSpec, SampledField

__all__ = [
    "HolderReport",
    "ProbeSpec",
    "default_probe",
    "check_exponent",
    "sup_norm",
    "seminorm_first",
    "seminorm_second",
    "holder_norm",
    "derivative_fields",
    "interp_constant",
    "interp_bound",
    "product_constant",
    "product_bound",
    "mollify",
    "mollifier_moment",
    "mollify_bounds_audit",
]

FIRST = "first_difference"
SECOND = "second_difference"
DERIV = "derivative_based"


def check_exponent(gamma: float, allow_integer: bool = False) -> float:
    g = float(gamma)
    if not (0.0 < g < 3.0):
        raise ValueError(f"Holder exponent must lie in (0, 3), got {g}")
    if not allow_integer and g in (1.0, 2.0):
        raise ValueError(f"integer exponent {g} requires integer mode")
    return g


@dataclass(frozen=True)
class HolderReport:
    sup_norm: float
    seminorm: float
    total: float
    witness_x: tuple
    witness_h: tuple
    method: str
    gamma: float
    window: tuple

    def as_record(self, field_id: str = "") -> dict:
        return {
            "field_id": field_id,
            "gamma": self.gamma,
            "window": list(self.window),
            "sup_norm": self.sup_norm,
            "seminorm": self.seminorm,
            "total": self.total,
            "witness_x": list(self.witness_x),
            "witness_h": list(self.witness_h),
            "method": self.method,
        }


def _report(sup, semi, wx, wh, method, gamma, window) -> HolderReport:
    wx = tuple(np.atleast_1d(np.asarray(wx, dtype=float)).tolist())
    wh = tuple(np.atleast_1d(np.asarray(wh, dtype=float)).tolist())
    return HolderReport(float(sup), float(semi), float(sup + semi),
                        wx, wh, method, float(gamma), tuple(window))


# ---------------------------------------------------------------------------
# probe sets for closed-form fields

@dataclass(frozen=True)
class ProbeSpec:
    """Evaluation points and difference offsets for probe-based norms."""

    dim: int
    xs: np.ndarray      # (nx,) or (nx, 2)
    hs: np.ndarray      # (nh,) positive magnitudes
    dirs: np.ndarray    # (nd, dim) unit directions

    def offsets(self) -> np.ndarray:
        """All offset vectors, shape (nh * nd, dim)."""
        return (self.hs[:, None, None] * self.dirs[None, :, :]).reshape(-1, self.dim)

    def offset_lengths(self) -> np.ndarray:
        return np.repeat(self.hs, len(self.dirs))


def default_probe(f: FunctionField, nx: int = 481, h_min: float = 2.0**-9,
                  h_max: float = 4.0, n_h: int = 40, half_width: float | None = None) -> ProbeSpec:
    """Deterministic probe set adapted to the field's support."""
    if half_width is None:
        if f.decay.kind == "compact_support":
            half_width = min(f.decay.radius + 1.0, 24.0)
        else:
            half_width = 8.0
    hs = np.geomspace(h_min, h_max, n_h)
    if f.dim == 1:
        xs = np.linspace(-half_width, half_width, nx)
        dirs = np.ones((1, 1))
    else:
        side = int(round(math.sqrt(nx)))
        g = np.linspace(-half_width, half_width, side)
        xs = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
        dirs = np.array([[1.0, 0.0], [0.0, 1.0],
                         [1.0, 1.0], [1.0, -1.0]])
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return ProbeSpec(f.dim, xs, hs, dirs)


def _probe_points(probe: ProbeSpec):
    """xs broadcast against offsets: arrays x, x+h, x-h of shape (nx, noff, [dim])."""
    off = probe.offsets()
    if probe.dim == 1:
        off = off[:, 0]
        xp = probe.xs[:, None] + off[None, :]
        xm = probe.xs[:, None] - off[None, :]
        x0 = probe.xs[:, None] + 0.0 * off[None, :]
    else:
        xp = probe.xs[:, None, :] + off[None, :, :]
        xm = probe.xs[:, None, :] - off[None, :, :]
        x0 = np.broadcast_to(probe.xs[:, None, :], xp.shape)
    return x0, xp, xm


def _argmax_witness(quot: np.ndarray, probe: ProbeSpec):
    i, j = np.unravel_index(int(np.argmax(quot)), quot.shape)
    x = probe.xs[i] if probe.dim > 1 else probe.xs[i]
    h = probe.offsets()[j]
    return np.atleast_1d(x), h


# ---------------------------------------------------------------------------
# sup norm

def sup_norm(f, probe: Optional[ProbeSpec] = None) -> float:
    """Max of |f| over the lattice (SampledField) or probe set (FunctionField)."""
    if isinstance(f, SampledField):
        return float(np.max(np.abs(f.values)))
    if probe is None:
        probe = default_probe(f)
    if probe.xs.size == 0:
        raise ValueError("empty probe set")
    return float(np.max(np.abs(f.eval(probe.xs))))


# ---------------------------------------------------------------------------
# sampled-field scans

def _grid_offsets(grid: GridSpec, window):
    """Integer offset vectors with |h| inside the window."""
    h_min, h_max = window
    s = grid.spacing
    m_lo = max(1, int(math.ceil(h_min / s - 1e-12)))
    if grid.dim == 1:
        m_hi = int(math.floor(h_max / s + 1e-12))
        if m_hi < m_lo:
            raise ValueError(f"window {window} is empty on the grid (spacing {s})")
        ms = np.arange(m_lo, m_hi + 1)
        return [(int(m),) for m in ms], ms * s
    dirs = [(1, 0), (0, 1), (1, 1), (1, -1)]
    shifts, lens = [], []
    for d in dirs:
        dlen = math.hypot(*d) * s
        m_hi = int(math.floor(h_max / dlen + 1e-12))
        m_lo_d = max(1, int(math.ceil(h_min / dlen - 1e-12)))
        for m in range(m_lo_d, m_hi + 1):
            shifts.append((m * d[0], m * d[1]))
            lens.append(m * dlen)
    if not shifts:
        raise ValueError(f"window {window} is empty on the grid (spacing {s})")
    return shifts, np.asarray(lens)


def _default_window(grid: GridSpec):
    return (2.0 * grid.spacing, grid.period / 4.0)


def _scan_sampled(sf: SampledField, gamma, window, second: bool):
    arr = sf.as_array()
    shifts, lens = _grid_offsets(sf.grid, window)
    best, bwx, bwh = 0.0, np.zeros(sf.grid.dim), np.zeros(sf.grid.dim)
    s = sf.grid.spacing
    for shift, hlen in zip(shifts, lens):
        ax = tuple(range(arr.ndim))
        fp = np.roll(arr, tuple(-m for m in shift), axis=ax)
        if second:
            fm = np.roll(arr, shift, axis=ax)
            diff = np.abs(fp + fm - 2.0 * arr)
        else:
            diff = np.abs(fp - arr)
        q = diff / hlen**gamma
        k = int(np.argmax(q))
        if q.flat[k] > best:
            best = float(q.flat[k])
            idx = np.unravel_index(k, arr.shape)
            bwx = np.asarray(idx, dtype=float) * s
            bwh = np.asarray(shift, dtype=float) * s
    return best, bwx, bwh


# ---------------------------------------------------------------------------
# probe-field scans

def _scan_field(f: FunctionField, gamma, probe: ProbeSpec, second: bool):
    x0, xp, xm = _probe_points(probe)
    v0 = f.eval(x0)
    vp = f.eval(xp)
    if second:
        diff = np.abs(vp + f.eval(xm) - 2.0 * v0)
    else:
        diff = np.abs(vp - v0)
    q = diff / probe.offset_lengths()[None, :] ** gamma
    wx, wh = _argmax_witness(q, probe)
    return float(np.max(q)), wx, wh


def _scan_gradient_first(f: FunctionField, gamma_minus_1, probe: ProbeSpec):
    """Sum over components of first-difference seminorms of the gradient."""
    if not f.has_gradient():
        raise ValueError(f"field {f.name!r} supplies no gradient")
    x0, xp, _ = _probe_points(probe)
    g0 = f.gradient(x0)
    gp = f.gradient(xp)
    hl = probe.offset_lengths()[None, :]
    total, bwx, bwh, best = 0.0, np.zeros(f.dim), np.zeros(f.dim), 0.0
    for i in range(f.dim):
        q = np.abs(gp[..., i] - g0[..., i]) / hl**gamma_minus_1
        m = float(np.max(q))
        total += m
        if m > best:
            best = m
            bwx, bwh = _argmax_witness(q, probe)
    return total, bwx, bwh


def _scan_hessian_first(f: FunctionField, gamma_minus_2, probe: ProbeSpec):
    if not f.has_hessian():
        raise ValueError(f"field {f.name!r} supplies no Hessian")
    x0, xp, _ = _probe_points(probe)
    h0 = f.hessian(x0)
    hp = f.hessian(xp)
    hl = probe.offset_lengths()[None, :]
    total, bwx, bwh, best = 0.0, np.zeros(f.dim), np.zeros(f.dim), 0.0
    for i in range(f.dim):
        for j in range(f.dim):
            q = np.abs(hp[..., i, j] - h0[..., i, j]) / hl**gamma_minus_2
            m = float(np.max(q))
            total += m
            if m > best:
                best = m
                bwx, bwh = _argmax_witness(q, probe)
    return total, bwx, bwh


# ---------------------------------------------------------------------------
# public seminorms and norms

def seminorm_first(f, gamma: float, window=None, probe: Optional[ProbeSpec] = None) -> HolderReport:
    """First-difference seminorm sup |f(x+h)-f(x)| / |h|^gamma."""
    gamma = check_exponent(gamma)
    if not gamma < 1.0:
        raise ValueError("first-difference seminorm needs gamma in (0,1)")
    if isinstance(f, SampledField):
        window = window or _default_window(f.grid)
        semi, wx, wh = _scan_sampled(f, gamma, window, second=False)
        return _report(sup_norm(f), semi, wx, wh, FIRST, gamma, window)
    probe = probe or default_probe(f)
    semi, wx, wh = _scan_field(f, gamma, probe, second=False)
    window = (float(probe.hs.min()), float(probe.hs.max()))
    return _report(sup_norm(f, probe), semi, wx, wh, FIRST, gamma, window)


def seminorm_second(f, gamma: float, window=None, probe: Optional[ProbeSpec] = None) -> HolderReport:
    """Second-difference seminorm sup |f(x+h)+f(x-h)-2f(x)| / |h|^gamma."""
    gamma = check_exponent(gamma)
    if isinstance(f, SampledField):
        window = window or _default_window(f.grid)
        semi, wx, wh = _scan_sampled(f, gamma, window, second=True)
        return _report(sup_norm(f), semi, wx, wh, SECOND, gamma, window)
    probe = probe or default_probe(f)
    semi, wx, wh = _scan_field(f, gamma, probe, second=True)
    window = (float(probe.hs.min()), float(probe.hs.max()))
    return _report(sup_norm(f, probe), semi, wx, wh, SECOND, gamma, window)


def derivative_fields(sf: SampledField) -> list[SampledField]:
    """Centered-difference partial derivatives of a sampled field."""
    arr = sf.as_array()
    s = sf.grid.spacing
    out = []
    for ax in range(sf.grid.dim):
        d = (np.roll(arr, -1, axis=ax) - np.roll(arr, 1, axis=ax)) / (2.0 * s)
        out.append(SampledField(sf.grid, d.reshape(-1)))
    return out


def holder_norm(f, gamma: float, window=None, probe: Optional[ProbeSpec] = None,
                method: Optional[str] = None) -> HolderReport:
    """Holder norm at the given exponent.

    Defaults: first differences for gamma < 1, second differences for
    gamma in (1,2), derivative plus second difference for gamma in (2,3).
    """
    gamma = check_exponent(gamma)
    if method is None:
        method = FIRST if gamma < 1 else (SECOND if gamma < 2 else DERIV)

    if gamma < 1 and method == FIRST:
        return seminorm_first(f, gamma, window=window, probe=probe)
    if gamma < 2 and method == SECOND:
        return seminorm_second(f, gamma, window=window, probe=probe)

    if method != DERIV:
        raise ValueError(f"method {method!r} unsupported at gamma={gamma}")

    if isinstance(f, SampledField):
        window = window or _default_window(f.grid)
        sup = sup_norm(f)
        semi, bwx, bwh, best = 0.0, np.zeros(f.grid.dim), np.zeros(f.grid.dim), 0.0
        for df in derivative_fields(f):
            if gamma > 2:
                s, wx, wh = _scan_sampled(df, gamma - 1.0, window, second=True)
            else:
                s, wx, wh = _scan_sampled(df, gamma - 1.0, window, second=False)
            semi += s
            if s > best:
                best, bwx, bwh = s, wx, wh
        return _report(sup, semi, bwx, bwh, DERIV, gamma, window)

    probe = probe or default_probe(f)
    sup = sup_norm(f, probe)
    window = (float(probe.hs.min()), float(probe.hs.max()))
    if 1 < gamma < 2:
        semi, wx, wh = _scan_gradient_first(f, gamma - 1.0, probe)
    elif 2 < gamma < 3:
        semi, wx, wh = _scan_hessian_first(f, gamma - 2.0, probe)
    else:
        raise ValueError("derivative-based norm needs gamma in (1,2) or (2,3)")
    return _report(sup, semi, wx, wh, DERIV, gamma, window)


def norm_value(f, exponent: float, probe: Optional[ProbeSpec] = None) -> float:
    """N(f, a): the Holder norm for non-integer a, the derivative sup norm
    convention at a = 1, 2."""
    if exponent == 1.0:
        probe = probe or default_probe(f)
        g = f.gradient(probe.xs)
        return sup_norm(f, probe) + float(np.sum(np.max(np.abs(g), axis=0)))
    if exponent == 2.0:
        probe = probe or default_probe(f)
        g = f.gradient(probe.xs)
        h = f.hessian(probe.xs)
        return (sup_norm(f, probe)
                + float(np.sum(np.max(np.abs(g), axis=0)))
                + float(np.sum(np.max(np.abs(h), axis=(0,)))))
    return holder_norm(f, exponent, probe=probe,
                       method=FIRST if exponent < 1 else DERIV).total


# ---------------------------------------------------------------------------
# interpolation inequality with explicit constants

def _young_split(C: float, theta: float, eps: float) -> float:
    """K such that C * x^theta * y^(1-theta) <= K x + eps y for x, y >= 0."""
    if theta <= 0.0:
        return 0.0 if C <= eps else math.inf
    if theta >= 1.0:
        return C
    t = (C * (1.0 - theta) / eps) ** (1.0 / theta)
    return eps * t * theta / (1.0 - theta)


def _hess_sup_constant(b: float, d: int, eps: float) -> float:
    """K with sum_ij ||D_ij f|| <= K ||f||_inf + eps N(f,b), b in (2,3).

    Chain: Landau ||g'||^2 <= 2 ||g|| ||g''|| along lines, the mean-value
    bound on second derivatives at exponent b-1, and a Young split.
    """
    g = 1.0 / (b - 1.0)
    A = 12.0 * d * d
    B = 6.0 * 2.0 ** (1.0 - g) * d * d
    const_L = (2.0 * A) ** 2
    C = (2.0 * B) ** (2.0 / (1.0 + g))
    theta = (1.0 - g) / (1.0 + g)
    return const_L + _young_split(C, theta, eps)


def interp_constant(a: float, b: float, eps: float, d: int = 1) -> float:
    """Explicit c1 with N(f,a) <= c1 ||f||_inf + eps N(f,b), 0 < a < b < 3."""
    if not (0.0 < a < b < 3.0) or eps <= 0.0:
        raise ValueError("need 0 < a < b < 3 and eps > 0")
    if b <= 1.0:
        return 1.0 + 2.0 * eps ** (-a / (b - a))
    if b <= 2.0:
        if a <= 1.0:
            # ||D_i f|| <= 3 L^(1-1/b) N^(1/b) per component
            base = 3.0 if a == 1.0 else 3.0
            return base + _young_split(3.0 * d, 1.0 - 1.0 / b, eps)
        # 1 < a < b <= 2: reduce each [D_i f]_(a-1) against [D_i f]_(b-1)
        eps1 = eps / 2.0
        K = 2.0 * eps1 ** (-(a - 1.0) / (b - a))
        return 1.0 + _young_split(K * 3.0 * d, 1.0 - 1.0 / b, eps / 2.0)
    # b in (2, 3)
    if a > 2.0:
        eps1 = eps / 2.0
        tau = (a - 2.0) / (b - a)
        K = 2.0 * eps1 ** (-tau)
        return 1.0 + K * _hess_sup_constant(b, d, eps / (2.0 * K))
    if a > 1.0:
        KS = _hess_sup_constant(b, d, eps / (3.0 * d))
        return 1.0 + 2.0 * d + 3.0 * d * KS
    KS = _hess_sup_constant(b, d, eps / d)
    return 3.0 + d + d * KS


def interp_bound(f: FunctionField, a: float, b: float, eps: float,
                 probe: Optional[ProbeSpec] = None):
    """Measure N(f,a) against c1 ||f||_inf + eps N(f,b).

    Returns (lhs, rhs, passed, c1).  Both norms use the same probe set.
    """
    if not (0.0 < a < b < 3.0):
        raise ValueError("exponent ordering violated")
    probe = probe or default_probe(f)
    lhs = norm_value(f, a, probe=probe)
    nb = norm_value(f, b, probe=probe)
    c1 = interp_constant(a, b, eps, d=f.dim)
    rhs = c1 * sup_norm(f, probe) + eps * nb
    return lhs, rhs, bool(lhs <= rhs * (1 + 1e-12)), c1


# ---------------------------------------------------------------------------
# product inequality

def product_constant(a: float, d: int = 1) -> float:
    """Explicit c1 with N(fg,a) <= c1 N(f,a) N(g,a)."""
    if a < 1.0:
        return 2.0
    if a < 2.0:
        return 3.0 + 6.0 * d * (2.0 + 3.0 * d)
    # a in (2,3): generous assembly through the same gradient/Hessian chains
    g = 1.0 / (a - 1.0)
    C2 = 144.0 * d**4 + (12.0 * d * d) ** (2.0 / (1.0 + g))
    c_grad = 1.0 + C2
    c_semi1 = 2.0 * c_grad + C2
    per_term = c_grad * c_semi1
    return 1.0 + 2.0 * d * d * (1.0 + (2.0 + d * C2)) * (1 + C2) + 4.0 * d * d * per_term


def product_bound(f: FunctionField, g: FunctionField, a: float,
                  probe: Optional[ProbeSpec] = None):
    """Measure N(fg,a) against c1 N(f,a) N(g,a).  Returns (lhs, rhs, passed, c1)."""
    a = check_exponent(a)
    from .fields import _product  # corpus product constructor

    probe = probe or default_probe(f)
    fg = _product(f, g, f"{f.name}*{g.name}")
    lhs = norm_value(fg, a, probe=probe)
    c1 = product_constant(a, d=f.dim)
    rhs = c1 * norm_value(f, a, probe=probe) * norm_value(g, a, probe=probe)
    return lhs, rhs, bool(lhs <= rhs * (1 + 1e-12)), c1


# ---------------------------------------------------------------------------
# mollification

@lru_cache(maxsize=32)
def _mollifier_nodes(order: int = 64):
    """GL nodes on [-1,1] with normalized smooth-bump weights.

    Weights are normalized to sum exactly to one, so constants mollify to
    themselves in the discrete quadrature as well.
    """
    u, w = gl_rule(order)
    phi = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    phi[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    raw = w * phi
    return u, raw / raw.sum()


@lru_cache(maxsize=32)
def _mollifier_deriv_nodes(order: int = 64):
    """Nodes with weights for the first and second mollifier derivatives.

    Returned weights integrate f against phi' and phi'' on [-1,1]; the
    normalization matches `_mollifier_nodes`.
    """
    u, w = gl_rule(order)
    inside = np.abs(u) < 1.0
    phi = np.zeros_like(u)
    phi[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    z = np.sum(w * phi)
    d1 = np.zeros_like(u)
    d2 = np.zeros_like(u)
    ui = u[inside]
    s = 1.0 - ui**2
    d1[inside] = phi[inside] * (-2.0 * ui / s**2)
    d2[inside] = phi[inside] * ((4.0 * ui**2 / s**4) - (2.0 / s**2) - (8.0 * ui**2 / s**3))
    return u, w * d1 / z, w * d2 / z


def mollifier_moment(beta: float, order: int = 64, deriv: int = 0) -> float:
    """Integral of |u|^beta against |phi|, |phi'| or |phi''| on [-1,1]."""
    if deriv == 0:
        u, w = _mollifier_nodes(order)
        return float(np.sum(np.abs(u) ** beta * w))
    u, w1, w2 = _mollifier_deriv_nodes(order)
    w = w1 if deriv == 1 else w2
    return float(np.sum(np.abs(u) ** beta * np.abs(w)))


def mollify(f: FunctionField, eps: float, order: int = 64) -> FunctionField:
    """Convolution with the rescaled smooth bump, by tensor GL quadrature."""
    if not (eps > 0):
        raise ValueError("eps must be positive")
    u, w = _mollifier_nodes(order)
    u1, w1, w2 = _mollifier_deriv_nodes(order)

    if f.dim == 1:
        def fn(x):
            vals = f.eval(x[..., None] - eps * u)
            out = vals @ w
            if not np.all(np.isfinite(out)):
                raise FloatingPointError("mollification quadrature returned non-finite values")
            return out

        def grad(x):
            # d/dx of f * phi_eps written as f against phi'_eps
            vals = f.eval(x[..., None] - eps * u1)
            return (vals @ w1 / eps)[..., None]

        def hess(x):
            vals = f.eval(x[..., None] - eps * u1)
            return (vals @ w2 / eps**2)[..., None, None]
    else:
        uu = np.stack(np.meshgrid(u, u, indexing="ij"), axis=-1).reshape(-1, 2)
        ww = np.outer(w, w).reshape(-1)

        def fn(x):
            pts = x[..., None, :] - eps * uu
            out = f.eval(pts) @ ww
            if not np.all(np.isfinite(out)):
                raise FloatingPointError("mollification quadrature returned non-finite values")
            return out

        g1 = np.stack(np.meshgrid(u1, u, indexing="ij"), axis=-1).reshape(-1, 2)
        wg = np.outer(w1, w).reshape(-1)
        g2 = np.stack(np.meshgrid(u, u1, indexing="ij"), axis=-1).reshape(-1, 2)
        wg2 = np.outer(w, w1).reshape(-1)

        def grad(x):
            p1 = f.eval(x[..., None, :] - eps * g1) @ wg / eps
            p2 = f.eval(x[..., None, :] - eps * g2) @ wg2 / eps
            return np.stack([p1, p2], axis=-1)

        hess = None

    decay = f.decay
    if decay.kind in ("compact_support", "power_decay") and math.isfinite(decay.radius):
        decay = dataclasses.replace(decay, radius=decay.radius + eps)
    return FunctionField(
        dim=f.dim, fn=fn, name=f"{f.name}~{eps:g}", regularity=math.inf,
        decay=decay, grad=grad, hess=hess, sup_bound=f.sup_bound,
    )


def mollify_bounds_audit(f: FunctionField, beta: float, eps_list,
                         probe: Optional[ProbeSpec] = None):
    """Scaled mollifier error/derivative columns over a list of widths.

    Rows: (eps, ||f-f_eps||/eps^beta, ||Df_eps|| eps^(1-beta),
    ||D^2 f_eps|| eps^(2-beta)), all divided by the measured C^beta norm.
    """
    beta = check_exponent(beta)
    if f.regularity < beta:
        raise ValueError("field regularity tag below requested beta")
    probe = probe or default_probe(f)
    nf = holder_norm(f, beta, probe=probe).total
    rows = []
    for eps in eps_list:
        fe = mollify(f, eps)
        diff = float(np.max(np.abs(f.eval(probe.xs) - fe.eval(probe.xs))))
        dsup = float(np.max(np.abs(fe.gradient(probe.xs))))
        if f.dim == 1:
            hsup = float(np.max(np.abs(fe.hessian(probe.xs))))
        else:
            hsup = float("nan")
        rows.append((float(eps),
                     diff / eps**beta / nf,
                     dsup * eps ** (1.0 - beta) / nf,
                     hsup * eps ** (2.0 - beta) / nf))
    c1 = max(max(r[1], r[2]) if math.isnan(r[3]) else max(r[1:]) for r in rows)
    return rows, float(c1)
