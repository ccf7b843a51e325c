"""
Analytic reference fields.

Each reference is built symbolically with sympy and lambdified to numpy
evaluators. `check()` is the gate every study runs first: the divergence and
(for exact solutions) the momentum residual

    du/dt + (u . grad) u + grad p - nu lap u

must simplify to zero, and the lambdified residual, divergence and a central
difference in time are re-checked at random space-time points.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import sympy as sp
from scipy.special import roots_legendre

from mesh_complex import ValidationError

logger = logging.getLogger(__name__)

DIVERGENCE_TOL = 1e-12
RESIDUAL_TOL = 1e-10
FD_STEP = 1e-5
FD_TOL = 1e-6
TORUS_BOX = (2 * sp.pi, sp.sqrt(3) * sp.pi)
SQUARE_BOX = (sp.pi, sp.pi)

X, Y, Z, T = sp.symbols('x y z t', real=True)


def _exact(value) -> sp.Expr:
    """Turn a float parameter into an exact rational so residuals simplify to 0."""
    if isinstance(value, sp.Basic):
        return value
    return sp.Rational(repr(float(value)))


def _vanishes(expr: sp.Expr) -> bool:
    if sp.expand(sp.expand_trig(expr)) == 0:
        return True
    # non-integer wavenumbers: exponential form is canonical after expansion
    if sp.expand(expr.rewrite(sp.exp)) == 0:
        return True
    return sp.simplify(expr) == 0


def _evaluator(exprs, coords) -> Callable[[np.ndarray, float], np.ndarray]:
    """Lambdify a list of expressions into f(points (N, d), t) -> (N, len(exprs))."""
    funcs = [sp.lambdify((*coords, T), e, modules='numpy') for e in exprs]

    def evaluate(points: np.ndarray, t: float = 0.0) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        args = [points[:, i] for i in range(len(coords))]
        n = points.shape[0]
        cols = [np.broadcast_to(np.asarray(fn(*args, t), dtype=float), (n,)) for fn in funcs]
        return np.stack(cols, axis=-1)

    return evaluate


@dataclass(eq=False)
class ReferenceSolution:
    name: str
    dimension: int
    nu: float
    velocity: Tuple[sp.Expr, ...]
    pressure: Optional[sp.Expr]
    box: Tuple[sp.Expr, ...]
    domain: str = 'torus'
    exact: bool = True
    t_max: float = np.inf
    parameters: Dict[str, float] = field(default_factory=dict)
    _checked: Optional[Dict[str, object]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.nu < 0.0:
            raise ValidationError(f"viscosity must be >= 0, got {self.nu}", module='verification')
        self.coords = (X, Y, Z)[:self.dimension]
        u = sp.Matrix(self.velocity)
        self._u = _evaluator(list(u), self.coords)
        self._du_dt = _evaluator([sp.diff(c, T) for c in u], self.coords)
        self._vorticity = _evaluator(self.vorticity_exprs(), self.coords)
        self._p = _evaluator([self.pressure if self.pressure is not None else sp.Integer(0)], self.coords)

    # -- symbolic pieces -------------------------------------------------
    def vorticity_exprs(self):
        u = self.velocity
        if self.dimension == 2:
            return [sp.diff(u[1], X) - sp.diff(u[0], Y)]
        return [sp.diff(u[2], Y) - sp.diff(u[1], Z),
                sp.diff(u[0], Z) - sp.diff(u[2], X),
                sp.diff(u[1], X) - sp.diff(u[0], Y)]

    def divergence_expr(self) -> sp.Expr:
        return sum(sp.diff(c, s) for c, s in zip(self.velocity, self.coords))

    def residual_exprs(self):
        u, p = self.velocity, self.pressure
        out = []
        for i, c in enumerate(u):
            advect = sum(u[j] * sp.diff(c, s) for j, s in enumerate(self.coords))
            lap = sum(sp.diff(c, s, 2) for s in self.coords)
            out.append(sp.diff(c, T) + advect + sp.diff(p, self.coords[i]) - _exact(self.nu) * lap)
        return out

    # -- numeric evaluators ----------------------------------------------
    def u(self, points: np.ndarray, t: float = 0.0) -> np.ndarray:
        return self._u(points, t)

    def du_dt(self, points: np.ndarray, t: float = 0.0) -> np.ndarray:
        return self._du_dt(points, t)

    def omega(self, points: np.ndarray, t: float = 0.0) -> np.ndarray:
        values = self._vorticity(points, t)
        return values[:, 0] if self.dimension == 2 else values

    def p(self, points: np.ndarray, t: float = 0.0) -> np.ndarray:
        return self._p(points, t)[:, 0]

    def velocity_field(self, t: float = 0.0):
        return lambda points: self.u(points, t)

    def time_derivative_field(self, t: float = 0.0):
        return lambda points: self.du_dt(points, t)

    def vorticity_field(self, t: float = 0.0):
        return lambda points: self.omega(points, t)

    def pressure_field(self, t: float = 0.0):
        return lambda points: self.p(points, t)

    @property
    def box_lengths(self) -> np.ndarray:
        return np.array([float(b) for b in self.box])

    # -- continuum invariants --------------------------------------------
    def _box_rule(self, points_per_axis: int):
        lengths = self.box_lengths
        if self.domain == 'square':
            nodes, weights = roots_legendre(points_per_axis)
            axes = [0.5 * L * (nodes + 1.0) for L in lengths]
            wts = [0.5 * L * weights for L in lengths]
        else:
            axes = [L * np.arange(points_per_axis) / points_per_axis for L in lengths]
            wts = [np.full(points_per_axis, L / points_per_axis) for L in lengths]
        grids = np.meshgrid(*axes, indexing='ij')
        w = np.ones_like(grids[0])
        for i, wi in enumerate(wts):
            shape = [1] * len(lengths)
            shape[i] = -1
            w = w * wi.reshape(shape)
        return np.stack([g.ravel() for g in grids], axis=1), w.ravel()

    def energy(self, t: float = 0.0, points_per_axis: int = 64) -> float:
        """E(t) = 1/2 int |u|^2 (periodic trapezoid, exact for trigonometric fields)."""
        points, w = self._box_rule(points_per_axis)
        return 0.5 * float(np.sum(w * np.sum(self.u(points, t) ** 2, axis=1)))

    def helicity(self, t: float = 0.0, points_per_axis: int = 32) -> float:
        if self.dimension != 3:
            raise ValidationError("helicity is defined for 3D references only", module='verification')
        points, w = self._box_rule(points_per_axis)
        return float(np.sum(w * np.sum(self.u(points, t) * self.omega(points, t), axis=1)))

    def circulation(self, t: float = 0.0, y0: float = 0.0, z0: float = 0.0, points: int = 256) -> float:
        """Line integral of u_x along the horizontal loop y = y0 (at height z0 in 3D)."""
        Lx = self.box_lengths[0]
        xs = Lx * np.arange(points) / points
        pts = np.zeros((points, self.dimension))
        pts[:, 0] = xs
        pts[:, 1] = y0
        if self.dimension == 3:
            pts[:, 2] = z0
        return float(np.sum(self.u(pts, t)[:, 0]) * Lx / points)

    # -- gate ------------------------------------------------------------
    def check(self, rng: Optional[np.random.Generator] = None, samples: int = 64) -> Dict[str, object]:
        """Symbolic and numeric oracles; raises ValidationError on failure."""
        if self._checked is not None:
            return self._checked
        rng = rng if rng is not None else np.random.default_rng(0)
        report: Dict[str, object] = {'name': self.name}

        div = self.divergence_expr()
        report['divergence_symbolic'] = bool(_vanishes(div))
        points = rng.random((samples, self.dimension)) * self.box_lengths
        t_hi = 1.0 if not np.isfinite(self.t_max) else self.t_max
        times = rng.random(samples) * t_hi
        div_fn = _evaluator([div], self.coords)
        report['divergence_max'] = max(float(np.abs(div_fn(points[i:i + 1], times[i])).max())
                                       for i in range(samples))
        failures = []
        if not report['divergence_symbolic'] or report['divergence_max'] > DIVERGENCE_TOL:
            failures.append(f"divergence (max {report['divergence_max']:.3e})")

        if self.exact:
            residual = self.residual_exprs()
            report['pde_symbolic'] = bool(all(_vanishes(r) for r in residual))
            res_fn = _evaluator(residual, self.coords)
            report['pde_residual_max'] = max(float(np.abs(res_fn(points[i:i + 1], times[i])).max())
                                             for i in range(samples))
            if not report['pde_symbolic'] or report['pde_residual_max'] > RESIDUAL_TOL:
                failures.append(f"momentum residual (max {report['pde_residual_max']:.3e})")

        fd_err = 0.0
        for i in range(samples):
            p, t0 = points[i:i + 1], times[i] + FD_STEP
            fd = (self.u(p, t0 + FD_STEP) - self.u(p, t0 - FD_STEP)) / (2.0 * FD_STEP)
            exact = self.du_dt(p, t0)
            fd_err = max(fd_err, float(np.abs(fd - exact).max() / (1.0 + np.abs(exact).max())))
        report['time_derivative_error'] = fd_err
        if fd_err > FD_TOL:
            failures.append(f"time derivative (error {fd_err:.3e})")

        if failures:
            logger.error("|-- [X] Reference %s failed: %s", self.name, ', '.join(failures))
            raise ValidationError(f"reference '{self.name}' failed its oracle: {', '.join(failures)}",
                                  module='verification')
        logger.info("|-- [OK] Reference %s passed its oracle (div %.1e)", self.name, report['divergence_max'])
        self._checked = report
        return report


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------
def _stream_velocity(psi: sp.Expr) -> Tuple[sp.Expr, sp.Expr]:
    return sp.diff(psi, Y), -sp.diff(psi, X)


def taylor_green_2d(nu: float = 0.0, Lx=TORUS_BOX[0], Ly=TORUS_BOX[1]) -> ReferenceSolution:
    """
    u = (sin kx x cos ky y, -(kx/ky) cos kx x sin ky y) exp(-nu k^2 t),
    p = 1/4 [cos 2kx x + (kx/ky)^2 cos 2ky y] exp(-2 nu k^2 t).
    """
    Lx, Ly = _exact(Lx), _exact(Ly)
    kx, ky = 2 * sp.pi / Lx, 2 * sp.pi / Ly
    decay = sp.exp(-_exact(nu) * (kx ** 2 + ky ** 2) * T)
    psi = sp.sin(kx * X) * sp.sin(ky * Y) / ky * decay
    u = _stream_velocity(psi)
    p = sp.Rational(1, 4) * (sp.cos(2 * kx * X) + (kx / ky) ** 2 * sp.cos(2 * ky * Y)) * decay ** 2
    return ReferenceSolution('tg2d', 2, float(nu), u, p, (Lx, Ly),
                             parameters={'kx': float(kx), 'ky': float(ky)})


def taylor_green_mean_flow(nu: float = 0.0, U0: float = 0.5, Lx=TORUS_BOX[0],
                           Ly=TORUS_BOX[1]) -> ReferenceSolution:
    """Taylor-Green advected by a uniform stream (U0, 0); nonzero circulation along x."""
    base = taylor_green_2d(nu, Lx, Ly)
    U0 = _exact(U0)
    shift = {X: X - U0 * T}
    u = (base.velocity[0].subs(shift, simultaneous=True) + U0,
         base.velocity[1].subs(shift, simultaneous=True))
    p = base.pressure.subs(shift, simultaneous=True)
    return ReferenceSolution('tg2d-mean', 2, float(nu), u, p, base.box,
                             parameters={**base.parameters, 'U0': float(U0)})


def smooth_mixture_2d(Lx=TORUS_BOX[0], Ly=TORUS_BOX[1]) -> ReferenceSolution:
    """Non-steady divergence-free initial data (mixed wavenumbers)."""
    Lx, Ly = _exact(Lx), _exact(Ly)
    kx, ky = 2 * sp.pi / Lx, 2 * sp.pi / Ly
    psi = (sp.sin(kx * X) * sp.sin(ky * Y)
           + sp.Rational(3, 10) * sp.cos(2 * kx * X + ky * Y)
           + sp.Rational(1, 5) * sp.sin(ky * Y + sp.Rational(1, 3)))
    return ReferenceSolution('mixture2d', 2, 0.0, _stream_velocity(psi), None, (Lx, Ly), exact=False)


def abc_reference_3d(nu: float = 0.0, A: float = 1.0, B: float = 1.0,
                     Ly=TORUS_BOX[1]) -> ReferenceSolution:
    """
    Beltrami field u = (A sin z, B sin x + A cos z, B cos x) e^{-nu t} with
    curl u = u, on [0, 2pi) x [0, Ly) x [0, 2pi); p = -|u|^2 / 2.
    """
    A, B = _exact(A), _exact(B)
    decay = sp.exp(-_exact(nu) * T)
    u = (A * sp.sin(Z) * decay, (B * sp.sin(X) + A * sp.cos(Z)) * decay, B * sp.cos(X) * decay)
    p = -sp.Rational(1, 2) * sum(c ** 2 for c in u)
    return ReferenceSolution('abc3d', 3, float(nu), u, p, (2 * sp.pi, _exact(Ly), 2 * sp.pi),
                             domain='prism', parameters={'A': float(A), 'B': float(B), 'lambda': 1.0})


def helical_mixture_3d(A: float = 1.0, B: float = 0.7, C: float = 0.4,
                       Ly=TORUS_BOX[1]) -> ReferenceSolution:
    """
    ABC modes in x and z plus a helical mode (C cos ky y, 0, -C sin ky y)
    along y. Divergence-free but not steady; depends on all three coordinates.
    """
    A, B, C, Ly = _exact(A), _exact(B), _exact(C), _exact(Ly)
    ky = 2 * sp.pi / Ly
    u = (A * sp.sin(Z) + C * sp.cos(ky * Y),
         B * sp.sin(X) + A * sp.cos(Z),
         B * sp.cos(X) - C * sp.sin(ky * Y))
    return ReferenceSolution('abc3d-mixed', 3, 0.0, u, None, (2 * sp.pi, Ly, 2 * sp.pi), domain='prism',
                             exact=False, parameters={'A': float(A), 'B': float(B), 'C': float(C)})


def no_slip_square() -> ReferenceSolution:
    """psi = sin^2 x sin^2 y on [0, pi]^2; u vanishes on the boundary."""
    psi = sp.sin(X) ** 2 * sp.sin(Y) ** 2
    return ReferenceSolution('noslip', 2, 0.0, _stream_velocity(psi), None, SQUARE_BOX,
                             domain='square', exact=False)


def constant_field(*components: float) -> ReferenceSolution:
    comps = tuple(_exact(c) for c in (components or (1.0, 0.5)))
    box = TORUS_BOX if len(comps) == 2 else (2 * sp.pi, TORUS_BOX[1], 2 * sp.pi)
    return ReferenceSolution('constant', len(comps), 0.0, comps, sp.Integer(0), box,
                             domain='torus' if len(comps) == 2 else 'prism')


def affine_field(a: float = 0.3, b: float = 1.0, c: float = -0.5) -> ReferenceSolution:
    """
    u = A x with A = [[a, b], [c, -a]]; steady for every nu since A^2 = (a^2 + bc) I,
    p = -(a^2 + bc) |x|^2 / 2. Not periodic: for chart-local exactness checks.
    """
    a, b, c = _exact(a), _exact(b), _exact(c)
    u = (a * X + b * Y, c * X - a * Y)
    p = -(a ** 2 + b * c) * (X ** 2 + Y ** 2) / 2
    return ReferenceSolution('affine', 2, 0.0, u, p, SQUARE_BOX, domain='plane')


REFERENCES = {
    'tg2d': taylor_green_2d,
    'tg2d-mean': taylor_green_mean_flow,
    'mixture2d': lambda nu=0.0: smooth_mixture_2d(),
    'abc3d': abc_reference_3d,
    'abc3d-mixed': lambda nu=0.0: helical_mixture_3d(),
    'noslip': lambda nu=0.0: no_slip_square(),
    'constant': lambda nu=0.0: constant_field(),
}


def build_reference(name: str, nu: float = 0.0) -> ReferenceSolution:
    if name not in REFERENCES:
        raise ValidationError(f"unknown reference '{name}' (expected one of {sorted(REFERENCES)})",
                              module='verification')
    return REFERENCES[name](nu=nu)


def lie_derivative_field(u: ReferenceSolution, a: ReferenceSolution, t: float = 0.0):
    """
    Pointwise evaluator of the Lie derivative of the 1-form a along u,
    L_u a = grad(u . a) + (curl a) x u.
    """
    if u.dimension != a.dimension:
        raise ValidationError("Lie derivative needs fields of equal dimension", module='verification')
    coords = u.coords
    uu, aa = sp.Matrix(u.velocity), sp.Matrix(a.velocity)
    dot = (uu.T * aa)[0, 0]
    grad = [sp.diff(dot, s) for s in coords]
    curl = a.vorticity_exprs()
    if u.dimension == 2:
        twist = [-curl[0] * uu[1], curl[0] * uu[0]]
    else:
        twist = list(sp.Matrix(curl).cross(uu))
    evaluate = _evaluator([g + w for g, w in zip(grad, twist)], coords)
    return lambda points: evaluate(points, t)
