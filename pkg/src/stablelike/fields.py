"""Closed-form scalar fields, periodic lattices and sampled fields.

A FunctionField is an evaluable function on R^d carrying metadata (declared
Holder regularity, decay class, optional analytic derivatives).  All later
quadratures evaluate fields off-lattice, so `eval` is vectorized over
point batches and must be pure and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

__all__ = [
    "Decay",
    "FunctionField",
    "GridSpec",
    "SampledField",
    "CutoffFunction",
    "corpus",
    "corpus_ids",
    "field_by_id",
    "sample",
    "translate",
    "scale_argument",
    "smooth_step",
    "smooth_step_d1",
    "smooth_step_d2",
]

CUSP_HEIGHT = 1.0  # truncation height M of the cusp corpus members


# ---------------------------------------------------------------------------
# decay metadata

@dataclass(frozen=True)
class Decay:
    """Far-field behaviour of a field.

    compact_support: f - limit vanishes identically for |y| >= radius.
    power_decay:     |f - limit| <= coeff |y|^(-rate) for |y| >= radius.
    oscillatory:     mean-zero trigonometric combination, lowest frequency
                     freq, |f| <= amplitude (waves).
    bounded:         no usable structure; tail handling is best effort.
    """

    kind: str
    radius: float = math.inf
    rate: float = 0.0
    coeff: float = 1.0
    limit: float = 0.0
    freq: float = 0.0
    amplitude: float = 1.0

    @staticmethod
    def compact(radius: float, limit: float = 0.0) -> "Decay":
        return Decay("compact_support", radius=radius, limit=limit)

    @staticmethod
    def bounded() -> "Decay":
        return Decay("bounded")

    @staticmethod
    def power(rate: float, coeff: float = 1.0, radius: float = 1.0,
              limit: float = 0.0) -> "Decay":
        return Decay("power_decay", radius=radius, rate=rate, coeff=coeff, limit=limit)

    @staticmethod
    def oscillatory(freq: float, amplitude: float = 1.0) -> "Decay":
        return Decay("oscillatory", freq=freq, amplitude=amplitude)


def _as_points(x, dim: int) -> np.ndarray:
    """Canonicalize input to an array of shape (..., dim)."""
    a = np.asarray(x, dtype=float)
    if dim == 1:
        if a.ndim == 0:
            return a.reshape(1)
        if a.ndim >= 1 and a.shape[-1] == 1:
            return a[..., 0]
        return a
    if a.ndim == 1 and a.shape[0] == dim:
        return a.reshape(1, dim)
    if a.shape[-1] != dim:
        raise ValueError(f"points must have trailing dimension {dim}")
    return a


def _radius(pts: np.ndarray, dim: int) -> np.ndarray:
    if dim == 1:
        return np.abs(pts)
    return np.sqrt(np.sum(pts * pts, axis=-1))


# ---------------------------------------------------------------------------
# function fields

@dataclass(frozen=True)
class FunctionField:
    """Scalar field on R^d with declared regularity/decay metadata."""

    dim: int
    fn: Callable[[np.ndarray], np.ndarray]
    name: str = ""
    regularity: float = math.inf  # declared Holder exponent, inf = smooth
    decay: Decay = field(default_factory=Decay.bounded)
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hess: Optional[Callable[[np.ndarray], np.ndarray]] = None
    sup_bound: Optional[float] = None  # known bound on |f|, if any

    def eval(self, x) -> np.ndarray:
        pts = _as_points(x, self.dim)
        out = np.asarray(self.fn(pts), dtype=float)
        return out

    def __call__(self, x) -> np.ndarray:
        return self.eval(x)

    def gradient(self, x) -> np.ndarray:
        """Gradient, shape (..., dim).  Analytic when available."""
        pts = _as_points(x, self.dim)
        if self.grad is not None:
            g = np.asarray(self.grad(pts), dtype=float)
            if self.dim == 1 and (g.ndim == 0 or g.shape[-1] != 1):
                g = g[..., None]
            return g
        return self._fd_gradient(pts)

    def hessian(self, x) -> np.ndarray:
        """Hessian, shape (..., dim, dim)."""
        pts = _as_points(x, self.dim)
        if self.hess is not None:
            h = np.asarray(self.hess(pts), dtype=float)
            if self.dim == 1 and h.shape[-2:] != (1, 1):
                h = h[..., None, None]
            return h
        raise ValueError(f"field {self.name!r} supplies no Hessian")

    def has_gradient(self) -> bool:
        return self.grad is not None

    def has_hessian(self) -> bool:
        return self.hess is not None

    # central differences, step declared here once and for all
    FD_STEP = 1e-6

    def _fd_gradient(self, pts: np.ndarray) -> np.ndarray:
        h = self.FD_STEP
        if self.dim == 1:
            return ((self.eval(pts + h) - self.eval(pts - h)) / (2 * h))[..., None]
        comps = []
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = h
            comps.append((self.eval(pts + e) - self.eval(pts - e)) / (2 * h))
        return np.stack(comps, axis=-1)

    def sup_estimate(self) -> float:
        """Known or probed bound on |f| (probe is deterministic)."""
        if self.sup_bound is not None:
            return self.sup_bound
        w = 20.0 if self.decay.kind != "compact_support" else self.decay.radius + 1.0
        if self.dim == 1:
            probe = np.linspace(-w, w, 4001)
        else:
            g = np.linspace(-w, w, 101)
            probe = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
        return float(np.max(np.abs(self.eval(probe))))


def translate(f: FunctionField, a) -> FunctionField:
    """Field x -> f(x + a)."""
    a = np.asarray(a, dtype=float)
    if f.dim == 1:
        a = float(a.reshape(()) if a.ndim == 0 or a.size == 1 else a)
    if not np.all(np.isfinite(a)):
        raise ValueError("translation vector must be finite")
    shift = float(np.linalg.norm(np.atleast_1d(a)))
    decay = f.decay
    if decay.kind in ("compact_support", "power_decay") and math.isfinite(decay.radius):
        decay = replace(decay, radius=decay.radius + shift)
    grad = (lambda x, g=f.grad: g(x + a)) if f.grad is not None else None
    hess = (lambda x, h=f.hess: h(x + a)) if f.hess is not None else None
    return replace(
        f,
        fn=lambda x, fn=f.fn: fn(x + a),
        name=f"{f.name}@+{a}",
        decay=decay,
        grad=grad,
        hess=hess,
    )


def scale_argument(f: FunctionField, r: float) -> FunctionField:
    """Field x -> f(x / r) (dilation by r)."""
    r = float(r)
    decay = f.decay
    if decay.kind == "compact_support":
        decay = replace(decay, radius=decay.radius * r)
    elif decay.kind == "power_decay":
        decay = replace(decay, radius=decay.radius * r, coeff=decay.coeff * r**decay.rate)
    elif decay.kind == "oscillatory":
        decay = replace(decay, freq=decay.freq / r)
    grad = (lambda x, g=f.grad: g(x / r) / r) if f.grad is not None else None
    hess = (lambda x, h=f.hess: h(x / r) / r**2) if f.hess is not None else None
    return replace(
        f,
        fn=lambda x, fn=f.fn: fn(x / r),
        name=f"{f.name}/r{r:g}",
        decay=decay,
        grad=grad,
        hess=hess,
    )


# ---------------------------------------------------------------------------
# grids and sampled fields

@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic lattice on the torus [0, period)^dim."""

    dim: int
    n: int
    period: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")
        if self.n < 16 or (self.n & (self.n - 1)) != 0:
            raise ValueError("n must be a power of two, at least 16")
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ValueError("period must be positive and finite")
        # n is a power of two, so period/n * n reproduces period exactly
        assert (self.period / self.n) * self.n == self.period

    @property
    def spacing(self) -> float:
        return self.period / self.n

    @property
    def size(self) -> int:
        return self.n**self.dim

    def axis(self) -> np.ndarray:
        return np.arange(self.n) * self.spacing

    def points(self) -> np.ndarray:
        """Lattice points, shape (n^dim, dim); lexicographic (C) order."""
        ax = self.axis()
        if self.dim == 1:
            return ax
        xx, yy = np.meshgrid(ax, ax, indexing="ij")
        return np.stack([xx, yy], axis=-1).reshape(-1, 2)


@dataclass(frozen=True)
class SampledField:
    """Values of a field on a GridSpec lattice, lexicographic order."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.size,):
            raise ValueError(f"values must have shape ({self.grid.size},)")
        if not np.all(np.isfinite(v)):
            raise ValueError("sampled values must be finite")
        object.__setattr__(self, "values", v)

    def as_array(self) -> np.ndarray:
        if self.grid.dim == 1:
            return self.values
        return self.values.reshape(self.grid.n, self.grid.n)


def sample(f: FunctionField, grid: GridSpec) -> SampledField:
    if f.dim != grid.dim:
        raise ValueError(f"field dim {f.dim} != grid dim {grid.dim}")
    vals = f.eval(grid.points())
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"field {f.name!r} evaluated non-finite on the lattice")
    return SampledField(grid, vals)


# ---------------------------------------------------------------------------
# the smooth cutoff

def _expbump(u):
    """exp(-1/u) for u > 0, 0 otherwise; smooth at 0."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def _expbump_d1(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 1e-8
    up = u[pos]
    out[pos] = np.exp(-1.0 / up) / up**2
    return out


def _expbump_d2(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 1e-8
    up = u[pos]
    out[pos] = np.exp(-1.0 / up) * (1.0 / up**4 - 2.0 / up**3)
    return out


def smooth_step(t):
    """C-infinity step: 1 for t <= 0, 0 for t >= 1, strictly in (0,1) between."""
    t = np.asarray(t, dtype=float)
    a = _expbump(1.0 - t)
    b = _expbump(t)
    return a / (a + b + (a + b == 0))


def smooth_step_d1(t):
    t = np.asarray(t, dtype=float)
    a, b = _expbump(1.0 - t), _expbump(t)
    ap, bp = -_expbump_d1(1.0 - t), _expbump_d1(t)
    den = (a + b) ** 2
    den[den == 0] = 1.0
    return (ap * b - a * bp) / den


def smooth_step_d2(t):
    t = np.asarray(t, dtype=float)
    a, b = _expbump(1.0 - t), _expbump(t)
    ap, bp = -_expbump_d1(1.0 - t), _expbump_d1(t)
    app, bpp = _expbump_d2(1.0 - t), _expbump_d2(t)
    s = a + b
    s[s == 0] = 1.0
    return (app * b - a * bpp) / s**2 - 2 * (ap * b - a * bp) * (ap + bp) / s**3


@dataclass(frozen=True)
class CutoffFunction:
    """Smooth bump: 1 on B(center, radius), 0 outside B(center, 2 radius)."""

    dim: int
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        if c.shape != (self.dim,):
            raise ValueError("center must have shape (dim,)")
        if not (self.radius > 0):
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", c)

    def _rho(self, pts):
        if self.dim == 1:
            return np.abs(pts - self.center[0])
        return np.sqrt(np.sum((pts - self.center) ** 2, axis=-1))

    def profile(self, x) -> np.ndarray:
        pts = _as_points(x, self.dim)
        return smooth_step(self._rho(pts) / self.radius - 1.0)

    def profile_grad(self, x) -> np.ndarray:
        pts = _as_points(x, self.dim)
        rho = self._rho(pts)
        sp = smooth_step_d1(rho / self.radius - 1.0) / self.radius
        if self.dim == 1:
            return (sp * np.sign(pts - self.center[0]))[..., None]
        safe = np.maximum(rho, 1e-300)
        return sp[..., None] * (pts - self.center) / safe[..., None]

    def profile_hess(self, x) -> np.ndarray:
        pts = _as_points(x, self.dim)
        rho = self._rho(pts)
        t = rho / self.radius - 1.0
        s1 = smooth_step_d1(t) / self.radius
        s2 = smooth_step_d2(t) / self.radius**2
        if self.dim == 1:
            return s2[..., None, None]
        safe = np.maximum(rho, 1e-300)
        u = (pts - self.center) / safe[..., None]
        outer = u[..., :, None] * u[..., None, :]
        eye = np.eye(self.dim)
        return s2[..., None, None] * outer + (s1 / safe)[..., None, None] * (eye - outer)

    def as_field(self) -> FunctionField:
        return FunctionField(
            dim=self.dim,
            fn=self.profile,
            name=f"cutoff(r={self.radius:g})",
            regularity=math.inf,
            decay=Decay.compact(2 * self.radius + float(np.linalg.norm(self.center))),
            grad=self.profile_grad,
            hess=self.profile_hess,
            sup_bound=1.0,
        )


# ---------------------------------------------------------------------------
# the fixed test corpus

def _bump_field(r: float, dim: int) -> FunctionField:
    cut = CutoffFunction(dim=dim, center=np.zeros(dim), radius=float(r))
    f = cut.as_field()
    return replace(f, name=f"bump-r{r:g}", decay=Decay.compact(2.0 * r))


def _wave_field(k: int, dim: int) -> FunctionField:
    def fn(x, k=k):
        x1 = x if dim == 1 else x[..., 0]
        return np.cos(k * x1)

    def grad(x, k=k):
        x1 = x if dim == 1 else x[..., 0]
        g = -k * np.sin(k * x1)
        if dim == 1:
            return g[..., None]
        out = np.zeros(x.shape)
        out[..., 0] = g
        return out

    def hess(x, k=k):
        x1 = x if dim == 1 else x[..., 0]
        h = -k * k * np.cos(k * x1)
        out = np.zeros(x1.shape + (dim, dim))
        out[..., 0, 0] = h
        return out

    return FunctionField(
        dim=dim, fn=fn, name=f"wave-{k}", regularity=math.inf,
        decay=Decay.oscillatory(freq=float(k), amplitude=1.0),
        grad=grad, hess=hess, sup_bound=1.0,
    )


def _gauss_field(dim: int) -> FunctionField:
    def fn(x):
        r2 = x**2 if dim == 1 else np.sum(x**2, axis=-1)
        return np.exp(-r2)

    def grad(x):
        v = fn(x)
        if dim == 1:
            return (-2.0 * x * v)[..., None]
        return -2.0 * x * v[..., None]

    def hess(x):
        v = fn(x)
        if dim == 1:
            return ((4.0 * x**2 - 2.0) * v)[..., None, None]
        eye = np.eye(dim)
        outer = x[..., :, None] * x[..., None, :]
        return (4.0 * outer - 2.0 * eye) * v[..., None, None]

    return FunctionField(
        dim=dim, fn=fn, name="gauss", regularity=math.inf,
        decay=Decay.power(rate=10.0, coeff=1.0, radius=4.0),
        grad=grad, hess=hess, sup_bound=1.0,
    )


def _cusp_field(gamma: float, dim: int, height: float = CUSP_HEIGHT) -> FunctionField:
    def fn(x, g=gamma, m=height):
        return np.minimum(_radius(x, dim) ** g, m)

    # equals `height` identically beyond the truncation radius
    return FunctionField(
        dim=dim, fn=fn, name=f"cusp-{gamma:g}", regularity=gamma,
        decay=Decay.compact(height ** (1.0 / gamma), limit=height),
        sup_bound=height,
    )


def _quadwin_field(dim: int) -> FunctionField:
    """x_1^2 times the r=2 bump window: exactly quadratic on |x| <= 2."""
    win = _bump_field(2.0, dim)

    def x1(x):
        return x if dim == 1 else x[..., 0]

    def fn(x):
        return x1(x) ** 2 * win.eval(x)

    def grad(x):
        w = win.eval(x)
        gw = win.gradient(x)
        v1 = x1(x)
        lin = np.zeros(np.shape(v1) + (dim,))
        lin[..., 0] = 2.0 * v1 * w
        return lin + (v1**2)[..., None] * gw

    def hess(x):
        w = win.eval(x)
        gw = win.gradient(x)
        hw = win.hessian(x)
        v1 = x1(x)
        out = (v1**2)[..., None, None] * hw
        out[..., 0, 0] += 2.0 * w
        out[..., 0, :] += 2.0 * v1[..., None] * gw
        out[..., :, 0] += 2.0 * v1[..., None] * gw
        return out

    return FunctionField(
        dim=dim, fn=fn, name="quadwin", regularity=math.inf,
        decay=Decay.compact(4.0), grad=grad, hess=hess,
    )


def _product(f: FunctionField, g: FunctionField, name: str) -> FunctionField:
    def fn(x):
        return f.eval(x) * g.eval(x)

    grad = None
    hess = None
    if f.has_gradient() and g.has_gradient():
        def grad(x):
            return f.gradient(x) * g.eval(x)[..., None] + g.gradient(x) * f.eval(x)[..., None]
    if f.has_hessian() and g.has_hessian():
        def hess(x):
            gf, gg = f.gradient(x), g.gradient(x)
            cross = gf[..., :, None] * gg[..., None, :]
            return (f.hessian(x) * g.eval(x)[..., None, None]
                    + g.hessian(x) * f.eval(x)[..., None, None]
                    + cross + np.swapaxes(cross, -1, -2))

    sup = None
    if f.sup_bound is not None and g.sup_bound is not None:
        sup = f.sup_bound * g.sup_bound
    decay = f.decay if f.decay.kind == "compact_support" else g.decay
    return FunctionField(
        dim=f.dim, fn=fn, name=name, regularity=min(f.regularity, g.regularity),
        decay=decay, grad=grad, hess=hess, sup_bound=sup,
    )


def _lincomb(f: FunctionField, g: FunctionField, cf: float, cg: float, name: str) -> FunctionField:
    def fn(x):
        return cf * f.eval(x) + cg * g.eval(x)

    grad = None
    if f.has_gradient() and g.has_gradient():
        def grad(x):
            return cf * f.gradient(x) + cg * g.gradient(x)

    sup = None
    if f.sup_bound is not None and g.sup_bound is not None:
        sup = abs(cf) * f.sup_bound + abs(cg) * g.sup_bound
    return FunctionField(
        dim=f.dim, fn=fn, name=name, regularity=min(f.regularity, g.regularity),
        decay=Decay.bounded(), grad=grad, sup_bound=sup,
    )


def corpus(dim: int = 1):
    """The fixed named test corpus for the given dimension."""
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    const = FunctionField(
        dim=dim, fn=lambda x: np.ones(np.shape(_radius(x, dim))),
        name="const-1", regularity=math.inf, decay=Decay.compact(0.0, limit=1.0),
        grad=lambda x: np.zeros(np.shape(_radius(x, dim)) + (dim,)),
        hess=lambda x: np.zeros(np.shape(_radius(x, dim)) + (dim, dim)),
        sup_bound=1.0,
    )
    waves = [_wave_field(k, dim) for k in (1, 2, 4)]
    bumps = [_bump_field(r, dim) for r in (1, 2, 4, 8)]
    cusps = [_cusp_field(g, dim) for g in (0.3, 0.5, 0.7)]
    gauss = _gauss_field(dim)
    quadwin = _quadwin_field(dim)
    prod = _product(waves[0], bumps[1], "wave1-bump2")
    mix = _lincomb(cusps[1], waves[0], 1.0, 0.5, "cusp05-plus-wave1")
    return [const, *waves, gauss, *bumps, *cusps, quadwin, prod, mix]


def corpus_ids(dim: int = 1):
    return [f.name for f in corpus(dim)]


def field_by_id(name: str, dim: int = 1) -> FunctionField:
    for f in corpus(dim):
        if f.name == name:
            return f
    raise KeyError(f"unknown corpus field id {name!r}; known: {corpus_ids(dim)}")
