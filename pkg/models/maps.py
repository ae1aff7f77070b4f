"""
Map descriptors for first-generation IFS
Affine maps are kept exact; smooth maps carry user-supplied derivative bounds
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import sympy as sp

from config import Config
from errors import InputError, MapValidationError
from models.interval import Interval
from models.numeric import exact, is_exact

logger = logging.getLogger(__name__)

AFFINE = 'affine'
SMOOTH = 'smooth'


@dataclass(frozen=True)
class MapDescriptor:
    """One contraction ψ with its bounds σ ≤ |ψ′| ≤ δ and |ψ″| ≤ B on the domain I"""
    kind: str
    sigma: object
    delta: object
    curvature: object = 0
    domain: Optional[Interval] = None
    slope: object = None
    offset: object = None
    func: Optional[Callable] = field(default=None, compare=False)
    derivative: Optional[Callable] = field(default=None, compare=False)
    second_derivative: Optional[Callable] = field(default=None, compare=False)
    increasing: bool = True
    certified: bool = True
    label: str = ''

    # Factories

    @classmethod
    def affine(cls, slope, offset, domain=None):
        slope = exact(slope)
        offset = exact(offset)
        if slope == 0:
            raise MapValidationError("affine map with zero slope is not invertible")
        if abs(slope) >= 1:
            raise MapValidationError(f"affine map slope {slope} is not a contraction")
        descriptor = cls(kind=AFFINE, sigma=abs(slope), delta=abs(slope), curvature=0,
                         domain=domain, slope=slope, offset=offset, increasing=slope > 0,
                         label=f"{slope}*x + {offset}")
        if domain is not None:
            descriptor.check_invariant_domain()
        return descriptor

    @classmethod
    def identity(cls, domain=None):
        """The empty composite; exempt from the contraction bounds"""
        return cls(kind=AFFINE, sigma=1, delta=1, curvature=0, domain=domain,
                   slope=exact(1), offset=exact(0), label='x')

    @classmethod
    def smooth(cls, func, derivative, sigma, delta, curvature, domain,
               second_derivative=None, label='', validate=True):
        if domain is None:
            raise MapValidationError("smooth maps need an explicit domain")
        sigma, delta, curvature = float(sigma), float(delta), float(curvature)
        if not 0 < sigma <= delta < 1:
            raise MapValidationError(f"need 0 < sigma <= delta < 1, got sigma={sigma}, delta={delta}")
        if curvature < 0:
            raise MapValidationError(f"curvature bound must be non-negative, got {curvature}")
        increasing = derivative(float(domain.midpoint)) > 0
        descriptor = cls(kind=SMOOTH, sigma=sigma, delta=delta, curvature=curvature,
                         domain=domain, func=func, derivative=derivative,
                         second_derivative=second_derivative, increasing=increasing,
                         certified=False, label=label or getattr(func, '__name__', 'smooth'))
        if validate:
            descriptor.validate()
        return descriptor

    @classmethod
    def from_expression(cls, text, sigma, delta, curvature, domain):
        """Build a smooth map from an expression in x, e.g. "0.3*x + 0.05*x**2"

        The bounds are still the caller's; sympy only supplies ψ′ and ψ″ for
        evaluation and for checking those bounds.
        """
        x = sp.Symbol('x')
        try:
            expr = sp.sympify(text, locals={'x': x})
        except (sp.SympifyError, SyntaxError, TypeError) as e:
            raise MapValidationError(f"cannot parse map expression {text!r}: {e}")
        extra = expr.free_symbols - {x}
        if extra:
            raise MapValidationError(f"map expression {text!r} has free symbols {sorted(map(str, extra))}")
        first = sp.diff(expr, x)
        second = sp.diff(first, x)
        return cls.smooth(
            func=sp.lambdify(x, expr, 'math'),
            derivative=sp.lambdify(x, first, 'math'),
            second_derivative=sp.lambdify(x, second, 'math'),
            sigma=sigma, delta=delta, curvature=curvature, domain=domain,
            label=str(expr),
        )

    # Evaluation

    @property
    def is_affine(self):
        return self.kind == AFFINE

    @property
    def is_exact(self):
        return self.is_affine and is_exact(self.slope, self.offset)

    def __call__(self, x):
        if self.is_affine:
            return self.slope * x + self.offset
        return self.func(float(x))

    def derivative_at(self, x):
        if self.is_affine:
            return self.slope
        return self.derivative(float(x))

    def image(self, interval):
        """ψ(J) for an interval J; maps are monotone since |ψ′| ≥ σ > 0"""
        a, b = self(interval.lo), self(interval.hi)
        return Interval(a, b) if a <= b else Interval(b, a)

    def compose(self, inner):
        """self ∘ inner"""
        if self.is_affine and inner.is_affine:
            return MapDescriptor(
                kind=AFFINE,
                sigma=self.sigma * inner.sigma,
                delta=self.delta * inner.delta,
                curvature=0,
                domain=inner.domain if inner.domain is not None else self.domain,
                slope=self.slope * inner.slope,
                offset=self.slope * inner.offset + self.offset,
                increasing=(self.slope > 0) == (inner.slope > 0),
                label=f"({self.label})o({inner.label})",
            )
        outer = self

        def func(x):
            return outer(inner(x))

        def derivative(x):
            return outer.derivative_at(inner(x)) * inner.derivative_at(x)

        # (f∘g)″ = f″(g)·g′² + f′(g)·g″
        curvature = (float(outer.curvature) * float(inner.delta) ** 2
                     + float(outer.delta) * float(inner.curvature))
        return MapDescriptor(
            kind=SMOOTH,
            sigma=float(outer.sigma) * float(inner.sigma),
            delta=float(outer.delta) * float(inner.delta),
            curvature=curvature,
            domain=inner.domain if inner.domain is not None else outer.domain,
            func=func,
            derivative=derivative,
            increasing=outer.increasing == inner.increasing,
            certified=False,
            label=f"({outer.label})o({inner.label})",
        )

    def conjugate(self, scale, shift):
        """h ∘ ψ ∘ h⁻¹ for h(x) = scale·x + shift"""
        if self.is_affine:
            domain = self.domain.affine(scale, shift) if self.domain is not None else None
            return MapDescriptor.affine(self.slope, scale * self.offset + shift - self.slope * shift, domain)
        psi = self

        def func(y):
            return scale * psi((y - shift) / scale) + shift

        def derivative(y):
            return psi.derivative_at((y - shift) / scale)

        second = None
        if self.second_derivative is not None:
            def second(y):
                return psi.second_derivative((y - shift) / scale) / scale

        return MapDescriptor.smooth(func, derivative, self.sigma, self.delta,
                                    float(self.curvature) / abs(float(scale)),
                                    self.domain.affine(scale, shift),
                                    second_derivative=second, label=f"conj({self.label})",
                                    validate=False)

    # Validation

    def check_invariant_domain(self):
        if self.domain is None:
            return
        img = self.image(self.domain)
        slack = 0 if self.is_exact and is_exact(self.domain.lo, self.domain.hi) else Config.FLOAT_TOLERANCE
        if img.lo < self.domain.lo - slack or img.hi > self.domain.hi + slack:
            raise MapValidationError(f"map {self.label} sends {self.domain} to {img}, outside its domain")

    def validate(self, samples=None):
        """Check σ ≤ |ψ′| ≤ δ, |ψ″| ≤ B and ψ(I) ⊆ I on a sample grid of the domain"""
        samples = samples or Config.SAMPLE_POINTS
        if self.is_affine:
            self.check_invariant_domain()
            return True
        lo, hi = float(self.domain.lo), float(self.domain.hi)
        xs = np.linspace(lo, hi, samples)
        values = np.array([self.func(x) for x in xs])
        slopes = np.array([self.derivative(x) for x in xs])
        tol = Config.FLOAT_TOLERANCE
        if np.any(np.abs(slopes) < self.sigma - tol) or np.any(np.abs(slopes) > self.delta + tol):
            raise MapValidationError(
                f"map {self.label}: |derivative| ranges over [{np.abs(slopes).min():.6g}, {np.abs(slopes).max():.6g}], "
                f"outside [sigma, delta] = [{self.sigma}, {self.delta}]")
        if np.any(np.sign(slopes) != np.sign(slopes[0])):
            raise MapValidationError(f"map {self.label} is not monotone on {self.domain}")
        if self.second_derivative is not None:
            bends = np.abs(np.array([self.second_derivative(x) for x in xs]))
            slack = tol
        else:
            bends = np.abs(np.gradient(slopes, xs))
            slack = 1e-6 * max(1.0, self.curvature)
        if np.any(bends > self.curvature + slack):
            raise MapValidationError(
                f"map {self.label}: |second derivative| reaches {bends.max():.6g} > B = {self.curvature}")
        if values.min() < lo - tol or values.max() > hi + tol:
            raise MapValidationError(f"map {self.label} leaves its domain {self.domain}")
        logger.warning("Bounds for smooth map %s checked on %d samples only", self.label, samples)
        return True


@dataclass(frozen=True)
class Ifs:
    """Ψ = {ψ_0, …, ψ_{M−1}}; words index maps from 0"""
    maps: tuple
    domain: Optional[Interval] = None

    def __post_init__(self):
        object.__setattr__(self, 'maps', tuple(self.maps))
        if len(self.maps) < 2:
            raise InputError(f"an IFS needs at least two maps, got {len(self.maps)}")
        if self.domain is None:
            domains = [m.domain for m in self.maps if m.domain is not None]
            if domains:
                object.__setattr__(self, 'domain', domains[0])
        if not self.is_affine and self.domain is None:
            raise MapValidationError("an IFS with smooth maps needs a domain")

    def __len__(self):
        return len(self.maps)

    def __getitem__(self, index):
        return self.maps[index]

    def __iter__(self):
        return iter(self.maps)

    @property
    def is_affine(self):
        return all(m.is_affine for m in self.maps)

    @property
    def is_exact(self):
        return all(m.is_exact for m in self.maps) and (
            self.domain is None or is_exact(self.domain.lo, self.domain.hi))

    @property
    def certified(self):
        return all(m.certified for m in self.maps)

    @property
    def sigma(self):
        return min(m.sigma for m in self.maps)

    @property
    def delta(self):
        return max(m.delta for m in self.maps)

    @property
    def curvature(self):
        return max(m.curvature for m in self.maps)

    def select(self, indices):
        return Ifs(tuple(self.maps[i] for i in indices), self.domain)

    def with_map(self, psi):
        return Ifs(self.maps + (psi,), self.domain)

    @classmethod
    def affine(cls, pairs, domain=None):
        """Ifs from (slope, offset) pairs"""
        return cls(tuple(MapDescriptor.affine(s, t) for s, t in pairs), domain)

