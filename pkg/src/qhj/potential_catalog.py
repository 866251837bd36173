"""Catalog of solvable potentials and their quantum-momentum-function data.

Every entry describes one potential family in units ħ = 1, 2m = 1 and carries
the full algebraic data the solver needs:

* the physical potential V(x) and the change of variable t = f(x) that makes
  the logarithmic-derivative Riccati equation rational in t,
* u(t) = F(t)² with F = df/dx expressed in t (a polynomial),
* the fixed poles of G(t) with their strengths g2 and the exponent offsets
  the change of variable contributes at each pole,
* the large-argument expansion coefficients (G0, G1, G2) of G,
* the polynomials Πclear²·G = A(t) + E·B(t) (Πclear = product of pole
  monomials), which drive the polynomial-identity construction, and
* prefactor builders that assemble wavefunctions from residue assignments.

The transformed Riccati equation is χ² + χ' + G(t) = 0 with
G = (E − Ṽ(t))/u + [−u''/(4u) + 3u'²/(16u²)], where Ṽ(t) = V(x(t)) and
primes are d/dt.  Everything here is either exact rational data or plain
polynomial coefficient arrays; no provenance strings, just math.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ParameterError, SingularPointError, UnknownModelError
from .exactmath import ExactComplex, sqrt_fraction, to_complex
from .qmf_residues import FixedPole, InfinityExpansion

Number = Union[int, float, Fraction]


# ---------------------------------------------------------------------------
# wavefunction recipe
# ---------------------------------------------------------------------------

@dataclass
class WavefunctionRecipe:
    """Closed-form factorization of one eigenfunction.

    prefactors are (display, exponent) pairs; the polynomial rides in the
    mapped variable (polynomial_variable, display string).  evaluator(xs)
    returns complex ψ values on physical points xs; it is built by the model
    so branch choices stay consistent on complex contours.
    """

    model_id: str
    prefactors: Tuple[Tuple[str, object], ...]
    polynomial_variable: str
    polynomial_coeffs: Tuple[complex, ...]
    exponential_factor: Optional[str]
    form: str
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False, default=None)

    def __call__(self, xs):
        return self.evaluator(np.asarray(xs))


def _poly_eval(coeffs, t):
    """Horner evaluation of ascending coefficients at scalar/array t."""
    acc = np.zeros_like(np.asarray(t, dtype=complex))
    for c in reversed(list(coeffs)):
        acc = acc * t + c
    return acc


def _fraction(value, name):
    try:
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10**12)
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise ParameterError("parameter %s must be rational, got %r" % (name, value)) from exc


def _require_int(value, name):
    f = _fraction(value, name)
    if f.denominator != 1:
        raise ParameterError("parameter %s must be an integer, got %r" % (name, value))
    return int(f)


# ---------------------------------------------------------------------------
# model base
# ---------------------------------------------------------------------------

class PotentialModel:
    """Base class for catalog entries.

    Subclasses fill in the per-family data listed in the module docstring.
    Scalar parameters are kept as exact fractions wherever the caller gives
    rational input, so residue algebra downstream stays exact.
    """

    id = None
    bc = None                      # dirichlet | periodic_union | decaying | pt_symmetric
    spectrum_kind = None           # es_spectrum | band_edge_group | qes_condition | pt_group
    parity_constraint = False
    uses_pencil = False            # energy stays an unknown in the identity
    admissibility = ()
    variable_map = ""
    polynomial_variable = "t"

    def __init__(self):
        self.params: Dict[str, object] = {}

    # -- geometry -----------------------------------------------------------
    def potential(self, x):
        raise NotImplementedError

    def to_t(self, x):
        raise NotImplementedError

    def singular_points(self):
        """Poles of V(x) inside the physical window (empty if smooth)."""
        return ()

    def x_window(self):
        """Physical interval the oracle discretizes (one period if periodic)."""
        raise NotImplementedError

    def symmetry_point(self):
        """Center of an x-reflection symmetry of V, or None."""
        return None

    # -- pole/expansion data --------------------------------------------------
    def fixed_poles(self) -> Tuple[FixedPole, ...]:
        raise NotImplementedError

    def infinity_expansion(self) -> InfinityExpansion:
        raise NotImplementedError

    def u_poly(self):
        """Ascending coefficients of u(t) = F²."""
        raise NotImplementedError

    def pi2_g_polys(self):
        """(A, B): ascending coefficient arrays with Πclear²·G = A(t) + E·B(t)."""
        raise NotImplementedError

    # -- derived helpers ------------------------------------------------------
    def pole_locations(self):
        return tuple(p.location for p in self.fixed_poles())

    def clear_poly(self):
        """Πclear(t): monic product of (t − t_i) over the fixed poles."""
        return P.polyfromroots([to_complex(loc) for loc in self.pole_locations()])

    def g_value(self, t, energy):
        """G(t) evaluated from the stored polynomials (for diagnostics)."""
        a, b = self.pi2_g_polys()
        pi = self.clear_poly()
        t = np.asarray(t, dtype=complex)
        num = _poly_eval(a, t) + to_complex(energy) * _poly_eval(b, t)
        den = _poly_eval(pi, t) ** 2
        return num / den

    # -- wavefunction assembly -------------------------------------------------
    def prefactor_exponents(self, residues):
        """Exponents of the natural x-space prefactors for given pole residues.

        residues: mapping pole label → residue value.  Returns a tuple in the
        model's prefactor order (see each subclass docstring).
        """
        raise NotImplementedError

    def recipe(self, assignment, coeffs) -> WavefunctionRecipe:
        """Build the sampled-wavefunction recipe from an assignment + kernel."""
        raise NotImplementedError

    # -- misc -------------------------------------------------------------------
    def default_points(self):
        """Baseline oracle grid size (the refinement doubles it)."""
        return 2000

    def describe_params(self):
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.params.items()}


# ---------------------------------------------------------------------------
# hydrogen-like radial problem (angular momentum l, charge parameter e2)
# ---------------------------------------------------------------------------

class HydrogenModel(PotentialModel):
    """Radial Coulomb problem for the reduced function u(r), offset so E0 = 0.

        V(r) = −e2/r + l(l+1)/r² + e2²/(4(l+1)²),   r > 0.

    t = r (no change of variable), u = 1.  One fixed pole at r = 0 with
    g2 = −l(l+1) and prefactor offset 0; decaying exponential at infinity.
    Prefactor order: (r,).
    """

    id = "hydrogen"
    bc = "decaying"
    spectrum_kind = "es_spectrum"
    admissibility = ("positive_origin_exponent", "decaying_exponential")
    variable_map = "t = r"
    polynomial_variable = "r"

    def __init__(self, e2, l):
        super().__init__()
        e2 = _fraction(e2, "e2")
        l = _require_int(l, "l")
        if e2 <= 0:
            raise ParameterError("hydrogen needs e2 > 0, got %s" % e2)
        if l < 0:
            raise ParameterError("hydrogen needs l >= 0, got %s" % l)
        self.e2 = e2
        self.l = l
        self.kappa2 = e2 * e2 / (4 * (l + 1) ** 2)
        self.params = {"e2": e2, "l": l}

    def potential(self, x):
        r = np.asarray(x, dtype=float)
        return -float(self.e2) / r + self.l * (self.l + 1) / r**2 + float(self.kappa2)

    def to_t(self, x):
        return np.asarray(x, dtype=float)

    def singular_points(self):
        return (0.0,)

    def x_window(self):
        # far wall sized for the slowest decay among the first few levels
        return (0.0, 40.0 * (self.l + 5) / float(self.e2))

    def fixed_poles(self):
        return (FixedPole(location=0.0, g2=Fraction(-self.l * (self.l + 1)),
                          prefactor_offset=Fraction(0), label="t=0"),)

    def infinity_expansion(self):
        kappa2 = self.kappa2
        return InfinityExpansion(G0=lambda E: E - kappa2,
                                 G1=self.e2,
                                 G2=Fraction(-self.l * (self.l + 1)))

    def u_poly(self):
        return np.array([1.0])

    def pi2_g_polys(self):
        lf = float(self.l)
        a = np.array([-lf * (lf + 1), float(self.e2), -float(self.kappa2)])
        b = np.array([0.0, 0.0, 1.0])
        return a, b

    def prefactor_exponents(self, residues):
        return (residues["t=0"],)

    def recipe(self, assignment, coeffs):
        b1 = to_complex(assignment.pole_residues["t=0"])
        a0 = to_complex(assignment.a0)
        coeffs = tuple(complex(c) for c in coeffs)
        n = len(coeffs) - 1

        def evaluator(xs):
            r = np.asarray(xs, dtype=float)
            return r**b1 * np.exp(a0 * r) * _poly_eval(coeffs, r)

        return WavefunctionRecipe(
            model_id=self.id,
            prefactors=(("r", assignment.pole_residues["t=0"]),),
            polynomial_variable="r",
            polynomial_coeffs=coeffs,
            exponential_factor="exp(%.6g*r)" % a0.real,
            form="r^%s * exp(%.6g*r) * P%d(r)" % (assignment.pole_residues["t=0"], a0.real, n),
            evaluator=evaluator,
        )


# ---------------------------------------------------------------------------
# trigonometric Scarf well (Dirichlet box with sec²/sec·tan walls)
# ---------------------------------------------------------------------------

class ScarfOneModel(PotentialModel):
    """Trigonometric Scarf well on (−π/(2α), π/(2α)), offset so E0 = 0.

        V(x) = (A² + B² − Aα)·sec²(αx) + B(2A − α)·sec(αx)tan(αx) − A².

    t = sin(αx), u = α²(1−t²).  Fixed poles at t = ±1 with
    g2(±1) = 3/16 − X(X−α)/(4α²), X = A±B; offsets 1/4.
    Prefactor order: (1−sin(αx), 1+sin(αx)).
    """

    id = "scarf1"
    bc = "dirichlet"
    spectrum_kind = "es_spectrum"
    admissibility = ("positive_wall_exponents", "nonneg_integer_level")
    variable_map = "t = sin(alpha*x)"
    polynomial_variable = "sin(alpha*x)"

    def __init__(self, A, B, alpha=1):
        super().__init__()
        A = _fraction(A, "A")
        B = _fraction(B, "B")
        alpha = _fraction(alpha, "alpha")
        if alpha <= 0:
            raise ParameterError("scarf1 needs alpha > 0, got %s" % alpha)
        if A <= 0:
            raise ParameterError("scarf1 needs A > 0, got %s" % A)
        self.A, self.B, self.alpha = A, B, alpha
        self.params = {"A": A, "B": B, "alpha": alpha}

    def potential(self, x):
        A, B, al = float(self.A), float(self.B), float(self.alpha)
        x = np.asarray(x, dtype=float)
        sec = 1.0 / np.cos(al * x)
        tan = np.tan(al * x)
        return (A * A + B * B - A * al) * sec**2 + B * (2 * A - al) * sec * tan - A * A

    def to_t(self, x):
        return np.sin(float(self.alpha) * np.asarray(x, dtype=float))

    def singular_points(self):
        w = math.pi / (2 * float(self.alpha))
        return (-w, w)

    def x_window(self):
        w = math.pi / (2 * float(self.alpha))
        return (-w, w)

    def symmetry_point(self):
        return 0.0 if self.B == 0 else None

    def _g2(self, X):
        return Fraction(3, 16) - X * (X - self.alpha) / (4 * self.alpha**2)

    def fixed_poles(self):
        return (
            FixedPole(location=1.0, g2=self._g2(self.A + self.B),
                      prefactor_offset=Fraction(1, 4), label="t=+1"),
            FixedPole(location=-1.0, g2=self._g2(self.A - self.B),
                      prefactor_offset=Fraction(1, 4), label="t=-1"),
        )

    def infinity_expansion(self):
        A, al = self.A, self.alpha
        return InfinityExpansion(G0=Fraction(0), G1=Fraction(0),
                                 G2=lambda E: Fraction(1, 4) - (E + A * A) / (al * al)
                                 if isinstance(E, (int, Fraction)) else 0.25 - (E + float(A * A)) / float(al * al))

    def u_poly(self):
        al2 = float(self.alpha) ** 2
        return np.array([al2, 0.0, -al2])

    def pi2_g_polys(self):
        A, B, al = self.A, self.B, self.alpha
        al2 = float(al * al)
        n0 = float(A * A + B * B - A * al)
        n1 = float(B * (2 * A - al))
        a = np.array([0.5 + (float(A * A) - n0) / al2,
                      -n1 / al2,
                      0.25 - float(A * A) / al2])
        b = np.array([1.0 / al2, 0.0, -1.0 / al2])
        return a, b

    def prefactor_exponents(self, residues):
        return (residues["t=+1"] - Fraction(1, 4), residues["t=-1"] - Fraction(1, 4))

    def recipe(self, assignment, coeffs):
        e_plus, e_minus = self.prefactor_exponents(assignment.pole_residues)
        ep, em = to_complex(e_plus).real, to_complex(e_minus).real
        al = float(self.alpha)
        coeffs = tuple(complex(c) for c in coeffs)
        n = len(coeffs) - 1

        def evaluator(xs):
            t = np.sin(al * np.asarray(xs, dtype=float))
            return (1.0 - t) ** ep * (1.0 + t) ** em * _poly_eval(coeffs, t)

        return WavefunctionRecipe(
            model_id=self.id,
            prefactors=(("1-sin(alpha*x)", e_plus), ("1+sin(alpha*x)", e_minus)),
            polynomial_variable=self.polynomial_variable,
            polynomial_coeffs=coeffs,
            exponential_factor=None,
            form="(1-sin)^%s * (1+sin)^%s * P%d(sin(alpha*x))" % (e_plus, e_minus, n),
            evaluator=evaluator,
        )


# ---------------------------------------------------------------------------
# periodic inverse-sin² cell (band phase s < 1/2, bound phase s > 1/2)
# ---------------------------------------------------------------------------

class ScarfPeriodicModel(PotentialModel):
    """Inverse-sin² cell of period π:  V(x) = (s² − 1/4)/sin²(x).

    t = cot(x), u = (1+t²)².  The pole pair sits at t = ±i (double zeros of u,
    offsets 1/2); the large-argument expansion has G2 = 1/4 − s².  For
    s < 1/2 the cell walls are penetrable and the spectrum forms bands whose
    edges carry wall exponents 1/2 ± s; for s > 1/2 the walls confine and the
    spectrum is discrete.  Prefactor order: (sin(x),).
    """

    id = "scarf_periodic"
    bc = "periodic_union"
    parity_constraint = True
    admissibility = ("nonneg_energy_root", "finite_at_cell_wall", "nonneg_integer_level")
    variable_map = "t = cot(x)"
    polynomial_variable = "cot(x)"

    def __init__(self, s):
        super().__init__()
        s = _fraction(s, "s")
        if s <= 0:
            raise ParameterError("scarf_periodic needs s > 0, got %s" % s)
        if s == Fraction(1, 2):
            raise ParameterError("s = 1/2 is the free boundary case; use s != 1/2")
        self.s = s
        self.params = {"s": s}

    @property
    def spectrum_kind(self):
        return "band_edge_group" if self.s < Fraction(1, 2) else "es_spectrum"

    @property
    def bound_phase(self):
        return self.s > Fraction(1, 2)

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return (float(self.s) ** 2 - 0.25) / np.sin(x) ** 2

    def to_t(self, x):
        return 1.0 / np.tan(np.asarray(x, dtype=float))

    def singular_points(self):
        return (0.0, math.pi)

    def x_window(self):
        return (0.0, math.pi)

    def symmetry_point(self):
        return math.pi / 2

    def fixed_poles(self):
        def g2(E):
            lam2 = E
            return (1 - lam2) / 4 if isinstance(lam2, (int, Fraction)) else (1.0 - lam2) / 4.0
        return (
            FixedPole(location=1j, g2=g2, prefactor_offset=Fraction(1, 2), label="t=+i"),
            FixedPole(location=-1j, g2=g2, prefactor_offset=Fraction(1, 2), label="t=-i"),
        )

    def infinity_expansion(self):
        return InfinityExpansion(G0=Fraction(0), G1=Fraction(0),
                                 G2=Fraction(1, 4) - self.s * self.s)

    def u_poly(self):
        return np.array([1.0, 0.0, 2.0, 0.0, 1.0])

    def pi2_g_polys(self):
        c = float(Fraction(1, 4) - self.s * self.s)
        a = np.array([-1.0 + c, 0.0, c])
        b = np.array([1.0, 0.0, 0.0])
        return a, b

    def prefactor_exponents(self, residues):
        # (t∓i)^{b−1/2} pairs combine to (1+t²)^{b−1/2} = sin(x)^{−2(b−1/2)};
        # with b = (1−λ)/2 the sin exponent is λ ± 0 — return that exponent.
        b = residues["t=+i"]
        return (1 - 2 * b,)

    def recipe(self, assignment, coeffs):
        lam = self.prefactor_exponents(assignment.pole_residues)[0]
        lamf = to_complex(lam).real
        coeffs = tuple(complex(c) for c in coeffs)
        n = len(coeffs) - 1

        def evaluator(xs):
            x = np.asarray(xs, dtype=float)
            sx = np.sin(x)
            if np.any(np.abs(sx) < 1e-12):
                raise SingularPointError("wavefunction sampled at a cell wall")
            # sin^λ·P(cot) evaluated as sin^{λ−n}·Σ c_k cos^k sin^{n−k} to
            # stay finite as cot blows up near the walls
            cx = np.cos(x)
            q = np.zeros_like(x, dtype=complex)
            for k, c in enumerate(coeffs):
                q = q + c * cx**k * sx ** (n - k)
            return sx ** (lamf - n) * q

        return WavefunctionRecipe(
            model_id=self.id,
            prefactors=(("sin(x)", lam),),
            polynomial_variable=self.polynomial_variable,
            polynomial_coeffs=coeffs,
            exponential_factor=None,
            form="sin(x)^%s * P%d(cot(x))" % (lam, n),
            evaluator=evaluator,
        )


# ---------------------------------------------------------------------------
# elliptic families (single and associated)
# ---------------------------------------------------------------------------

def _elliptic_clear_polys(m):
    """Πclear = (t²−1)(t²−1/m) and u = m·Πclear for the sn-mapped families."""
    mf = float(m)
    pi = np.array([1.0 / mf, 0.0, -(1.0 + 1.0 / mf), 0.0, 1.0])
    u = mf * pi
    return pi, u


class AssociatedLameModel(PotentialModel):
    """Elliptic sn²/cn²-dn² family on one period (0, 2K(m)).

        V(x) = a(a+1)·m·sn²(x|m) + b(b+1)·m·cn²(x|m)/dn²(x|m) + shift.

    b = 0 reduces to the single elliptic family.  t = sn(x|m),
    u = (1−t²)(1−mt²).  Fixed poles at t = ±1 (g2 = 3/16) and t = ±1/√m
    (g2 = 3/16 − b(b+1)/4), all with offset 1/4; the polynomial has definite
    parity because the poles pair up.  Prefactor order: (cn, dn) with
    exponents (2b₁ − 1/2, 2d₁ − 1/2).
    """

    bc = "periodic_union"
    spectrum_kind = "band_edge_group"
    parity_constraint = True
    uses_pencil = True
    admissibility = ("parity_pairing", "nonneg_integer_level")
    variable_map = "t = sn(x|m)"
    polynomial_variable = "sn(x|m)"

    def __init__(self, a, b, m, shift=None):
        super().__init__()
        a = _fraction(a, "a")
        b = _fraction(b, "b")
        m = _fraction(m, "m")
        if not (0 < m < 1):
            raise ParameterError("elliptic parameter must satisfy 0 < m < 1, got %s" % m)
        if a <= 0:
            raise ParameterError("need a > 0, got %s" % a)
        self.a, self.b, self.m = a, b, m
        self.shift = self._default_shift() if shift is None else _fraction(shift, "shift")
        self.params = {"a": a, "b": b, "m": m, "shift": self.shift}

    def _default_shift(self):
        return Fraction(0)

    # -- geometry ---------------------------------------------------------
    def _sn_cn_dn(self, x):
        from .special_functions import jacobi_elliptic
        xs = np.asarray(x, dtype=float)
        flat = np.atleast_1d(xs).ravel()
        sn = np.empty_like(flat)
        cn = np.empty_like(flat)
        dn = np.empty_like(flat)
        mf = float(self.m)
        for i, xi in enumerate(flat):
            trip = jacobi_elliptic(xi, mf)
            sn[i], cn[i], dn[i] = trip.sn, trip.cn, trip.dn
        sn = sn.reshape(np.shape(xs)) if np.shape(xs) else sn[0]
        cn = cn.reshape(np.shape(xs)) if np.shape(xs) else cn[0]
        dn = dn.reshape(np.shape(xs)) if np.shape(xs) else dn[0]
        return sn, cn, dn

    def potential(self, x):
        sn, cn, dn = self._sn_cn_dn(x)
        af, bf, mf = float(self.a), float(self.b), float(self.m)
        return (af * (af + 1) * mf * sn**2
                + bf * (bf + 1) * mf * cn**2 / dn**2
                + float(self.shift))

    def to_t(self, x):
        return self._sn_cn_dn(x)[0]

    def x_window(self):
        from .special_functions import elliptic_K
        return (0.0, 2.0 * elliptic_K(float(self.m)))

    def symmetry_point(self):
        return 0.0

    # -- algebraic data -----------------------------------------------------
    def fixed_poles(self):
        g2d = Fraction(3, 16) - self.b * (self.b + 1) / 4
        inv_sqrt_m = 1.0 / math.sqrt(float(self.m))
        return (
            FixedPole(location=1.0, g2=Fraction(3, 16), prefactor_offset=Fraction(1, 4), label="t=+1"),
            FixedPole(location=-1.0, g2=Fraction(3, 16), prefactor_offset=Fraction(1, 4), label="t=-1"),
            FixedPole(location=inv_sqrt_m, g2=g2d, prefactor_offset=Fraction(1, 4), label="t=+1/sqrt(m)"),
            FixedPole(location=-inv_sqrt_m, g2=g2d, prefactor_offset=Fraction(1, 4), label="t=-1/sqrt(m)"),
        )

    def infinity_expansion(self):
        return InfinityExpansion(G0=Fraction(0), G1=Fraction(0),
                                 G2=-self.a * (self.a + 1))

    def u_poly(self):
        return _elliptic_clear_polys(self.m)[1]

    def pi2_g_polys(self):
        pi, _u = _elliptic_clear_polys(self.m)
        mf = float(self.m)
        af, bf = float(self.a), float(self.b)
        # (E − shift − a(a+1)m t²)·Π/m  − b(b+1)(1−t²)²/m  + [−Π''Π/4 + 3Π'²/16]
        const_part = P.polymul(np.array([-float(self.shift), 0.0, -af * (af + 1) * mf]), pi) / mf
        bterm = -bf * (bf + 1) / mf * P.polymul(np.array([1.0, 0.0, -1.0]),
                                                np.array([1.0, 0.0, -1.0]))
        d2 = P.polyder(pi, 2)
        fpart = P.polyadd(-P.polymul(d2, pi) / 4.0, 3.0 * P.polymul(P.polyder(pi), P.polyder(pi)) / 16.0)
        a_poly = P.polyadd(P.polyadd(const_part, bterm), fpart)
        b_poly = pi / mf
        return a_poly, b_poly

    def prefactor_exponents(self, residues):
        b1 = residues["t=+1"]
        d1 = residues["t=+1/sqrt(m)"]
        return (2 * b1 - Fraction(1, 2), 2 * d1 - Fraction(1, 2))

    def recipe(self, assignment, coeffs):
        cn_exp, dn_exp = self.prefactor_exponents(assignment.pole_residues)
        ce, de = to_complex(cn_exp).real, to_complex(dn_exp).real
        coeffs = tuple(complex(c) for c in coeffs)
        n = len(coeffs) - 1

        def evaluator(xs):
            sn, cn, dn = self._sn_cn_dn(xs)
            cn = np.asarray(cn, dtype=float)
            if ce < 0 and np.any(np.abs(cn) < 1e-12):
                raise SingularPointError("cn prefactor with negative exponent hit a zero")
            return (cn + 0j) ** ce * dn**de * _poly_eval(coeffs, sn)

        return WavefunctionRecipe(
            model_id=self.id,
            prefactors=(("cn(x|m)", cn_exp), ("dn(x|m)", dn_exp)),
            polynomial_variable=self.polynomial_variable,
            polynomial_coeffs=coeffs,
            exponential_factor=None,
            form="cn^%s * dn^%s * P%d(sn(x|m))" % (cn_exp, dn_exp, n),
            evaluator=evaluator,
        )


class LameModel(AssociatedLameModel):
    """Single elliptic family: V = j(j+1)·m·sn² + shift, integer j ≥ 1.

    The worked j = 2 entry ships with the additive constant
    2√(1−m+m²) − 2m − 2 that zeroes its lowest band edge.
    """

    id = "lame"

    def __init__(self, j, m, shift=None):
        j = _require_int(j, "j")
        if j < 1:
            raise ParameterError("lame needs integer j >= 1, got %r" % j)
        self._j = j
        super().__init__(a=j, b=0, m=m, shift=shift)
        self.params = {"j": j, "m": self.m, "shift": self.shift}

    def _default_shift(self):
        if getattr(self, "_j", None) == 2:
            m = self.m
            delta = math.sqrt(float(1 - m + m * m))
            return Fraction(2 * delta) - 2 * m - 2
        return Fraction(0)

    @property
    def j(self):
        return self._j


class AssociatedLameESModel(AssociatedLameModel):
    """Associated family on the exactly-solvable line a = b = j (integer).

    The worked j = 1 entry ships with the additive constant 2√(1−m) − m − 2.
    """

    id = "assoc_lame_es"

    def __init__(self, j, m, shift=None):
        j = _require_int(j, "j")
        if j < 1:
            raise ParameterError("assoc_lame_es needs integer j >= 1, got %r" % j)
        self._j = j
        super().__init__(a=j, b=j, m=m, shift=shift)
        self.params = {"j": j, "m": self.m, "shift": self.shift}

    def _default_shift(self):
        if getattr(self, "_j", None) == 1:
            m = self.m
            root = math.sqrt(float(1 - m))
            return Fraction(2 * root) - m - 2
        return Fraction(0)

    @property
    def j(self):
        return self._j


class AssociatedLameQESModel(AssociatedLameModel):
    """Associated family at general (a, b): quasi-exactly-solvable entries.

    Worked entries (a,b) = (2,1) and (7/2,1/2) carry the additive constants
    −4m and √(25m²−4m+4) − 2 − 29m/4 that zero their lowest listed edges.
    """

    id = "assoc_lame_qes"
    spectrum_kind = "qes_condition"

    def _default_shift(self):
        a, b, m = self.a, self.b, self.m
        if (a, b) == (Fraction(2), Fraction(1)):
            return -4 * m
        if (a, b) == (Fraction(7, 2), Fraction(1, 2)):
            d9 = math.sqrt(float(25 * m * m - 4 * m + 4))
            return Fraction(d9) - 2 - Fraction(29, 4) * m
        return Fraction(0)


# ---------------------------------------------------------------------------
# hyperbolic PT-symmetric family with purely imaginary strength (−(ζcosh2x − iM)²)
# ---------------------------------------------------------------------------

class KhareMandalModel(PotentialModel):
    """PT-symmetric hyperbolic family V(x) = −(ζ·cosh(2x) − iM)².

    t = cosh(2x), u = 4(t²−1).  Fixed poles at t = ±1 with g2 = 3/16
    (offsets 1/4); G0 = ζ²/4 gives oscillatory large-argument behavior with
    a0 = ±iζ/2 and λ1 = ±M/2.  Eigenfunctions decay only on a bent contour
    Im x → ±π/4.  Prefactor order: (sinh x, cosh x) with integer exponents
    (2b₁ − 1/2, 2b'₁ − 1/2).
    """

    id = "khare_mandal"
    bc = "pt_symmetric"
    spectrum_kind = "pt_group"
    uses_pencil = True
    admissibility = ("contour_decay", "nonneg_integer_level")
    variable_map = "t = cosh(2*x)"
    polynomial_variable = "cosh(2*x)"

    def __init__(self, zeta, M):
        super().__init__()
        zeta = _fraction(zeta, "zeta")
        M = _require_int(M, "M")
        if zeta <= 0:
            raise ParameterError("khare_mandal needs zeta > 0, got %s" % zeta)
        if M < 1:
            raise ParameterError("khare_mandal needs integer M >= 1, got %r" % M)
        self.zeta, self.M = zeta, M
        self.params = {"zeta": zeta, "M": M}

    def potential(self, x):
        z = np.asarray(x, dtype=complex)
        return -(float(self.zeta) * np.cosh(2 * z) - 1j * self.M) ** 2

    def to_t(self, x):
        return np.cosh(2 * np.asarray(x, dtype=complex))

    def x_window(self):
        return (-4.5, 4.5)

    def fixed_poles(self):
        return (
            FixedPole(location=1.0, g2=Fraction(3, 16), prefactor_offset=Fraction(1, 4), label="t=+1"),
            FixedPole(location=-1.0, g2=Fraction(3, 16), prefactor_offset=Fraction(1, 4), label="t=-1"),
        )

    def infinity_expansion(self):
        z, M = self.zeta, self.M
        return InfinityExpansion(
            G0=z * z / 4,
            G1=ExactComplex(Fraction(0), -Fraction(M) * z / 2),
            G2=lambda E: (E - M * M + z * z + 1) / 4 if isinstance(E, (int, Fraction))
            else (E - M * M + float(z * z) + 1.0) / 4.0,
        )

    def u_poly(self):
        return np.array([-4.0, 0.0, 4.0])

    def pi2_g_polys(self):
        zf, M = float(self.zeta), self.M
        pi = np.array([-1.0, 0.0, 1.0])
        # (E + (ζt − iM)²)·Π/4 + (t² + 2)/4
        vsq = np.array([complex(-M * M), complex(0, -2 * M * zf), complex(zf * zf)])
        a_poly = P.polyadd(P.polymul(vsq, pi) / 4.0, np.array([0.5, 0.0, 0.25], dtype=complex))
        b_poly = pi.astype(complex) / 4.0
        return a_poly, b_poly

    def prefactor_exponents(self, residues):
        return (2 * residues["t=+1"] - Fraction(1, 2), 2 * residues["t=-1"] - Fraction(1, 2))

    def recipe(self, assignment, coeffs):
        p_sinh, p_cosh = self.prefactor_exponents(assignment.pole_residues)
        ps, pc = int(p_sinh), int(p_cosh)
        a0 = to_complex(assignment.a0)
        coeffs = tuple(complex(c) for c in coeffs)
        n = len(coeffs) - 1

        def evaluator(xs):
            z = np.asarray(xs, dtype=complex)
            t = np.cosh(2 * z)
            return (np.sinh(z) ** ps * np.cosh(z) ** pc
                    * np.exp(a0 * t) * _poly_eval(coeffs, t))

        return WavefunctionRecipe(
            model_id=self.id,
            prefactors=(("sinh(x)", p_sinh), ("cosh(x)", p_cosh)),
            polynomial_variable=self.polynomial_variable,
            polynomial_coeffs=coeffs,
            exponential_factor="exp(i*zeta*cosh(2x)/2)",
            form="sinh^%d * cosh^%d * exp(i*zeta*cosh(2x)/2) * P%d(cosh(2x))" % (ps, pc, n),
            evaluator=evaluator,
        )


# ---------------------------------------------------------------------------
# complex PT-symmetric Scarf-type well (−A sech² − iB sech·tanh)
# ---------------------------------------------------------------------------

class ComplexScarfModel(PotentialModel):
    """PT-symmetric hyperbolic well V(x) = −A·sech²x − iB·sechx·tanhx.

    t = i·sinh(x), u = t²−1.  Fixed poles at t = ±1 with
    g2 = 3/16 − (A±B)/4; the large-argument expansion has G2 = E + 1/4.
    For |B| ≤ A + 1/4 the spectrum is real; beyond that threshold the
    eigenvalues form conjugate pairs.  Prefactor order:
    (1 − i·sinh x, 1 + i·sinh x).
    """

    id = "complex_scarf"
    bc = "pt_symmetric"
    spectrum_kind = "pt_group"
    admissibility = ("square_integrable_decay", "nonneg_integer_level")
    variable_map = "t = i*sinh(x)"
    polynomial_variable = "i*sinh(x)"

    def __init__(self, A, B):
        super().__init__()
        A = _fraction(A, "A")
        B = _fraction(B, "B")
        if A <= 0:
            raise ParameterError("complex_scarf needs A > 0, got %s" % A)
        self.A, self.B = A, B
        self.params = {"A": A, "B": B}

    def potential(self, x):
        z = np.asarray(x, dtype=complex)
        sech = 1.0 / np.cosh(z)
        return -float(self.A) * sech**2 - 1j * float(self.B) * sech * np.tanh(z)

    def to_t(self, x):
        return 1j * np.sinh(np.asarray(x, dtype=complex))

    def x_window(self):
        return (-16.0, 16.0)

    def fixed_poles(self):
        return (
            FixedPole(location=1.0, g2=Fraction(3, 16) - (self.A + self.B) / 4,
                      prefactor_offset=Fraction(1, 4), label="t=+1"),
            FixedPole(location=-1.0, g2=Fraction(3, 16) - (self.A - self.B) / 4,
                      prefactor_offset=Fraction(1, 4), label="t=-1"),
        )

    def infinity_expansion(self):
        return InfinityExpansion(G0=Fraction(0), G1=Fraction(0),
                                 G2=lambda E: E + Fraction(1, 4) if isinstance(E, (int, Fraction))
                                 else E + 0.25)

    def u_poly(self):
        return np.array([-1.0, 0.0, 1.0])

    def pi2_g_polys(self):
        a = np.array([complex(0.5 - float(self.A)), complex(-float(self.B)), complex(0.25)])
        b = np.array([-1.0 + 0j, 0j, 1.0 + 0j])
        return a, b

    def prefactor_exponents(self, residues):
        return (residues["t=+1"] - Fraction(1, 4), residues["t=-1"] - Fraction(1, 4))

    def recipe(self, assignment, coeffs):
        e_plus, e_minus = self.prefactor_exponents(assignment.pole_residues)
        ep, em = to_complex(e_plus), to_complex(e_minus)
        coeffs = tuple(complex(c) for c in coeffs)
        n = len(coeffs) - 1

        def evaluator(xs):
            z = np.asarray(xs, dtype=complex)
            t = 1j * np.sinh(z)
            return (1.0 - t) ** ep * (1.0 + t) ** em * _poly_eval(coeffs, t)

        return WavefunctionRecipe(
            model_id=self.id,
            prefactors=(("1-i*sinh(x)", e_plus), ("1+i*sinh(x)", e_minus)),
            polynomial_variable=self.polynomial_variable,
            polynomial_coeffs=coeffs,
            exponential_factor=None,
            form="(1-i*sinh)^%s * (1+i*sinh)^%s * P%d(i*sinh(x))" % (e_plus, e_minus, n),
            evaluator=evaluator,
        )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

MODEL_IDS = ("hydrogen", "scarf1", "scarf_periodic", "lame",
             "assoc_lame_es", "assoc_lame_qes", "khare_mandal", "complex_scarf")

PARAM_SCHEMAS = {
    "hydrogen": {"e2": "rational > 0 (charge-squared strength)",
                 "l": "integer >= 0 (angular momentum)"},
    "scarf1": {"A": "rational > 0 (well depth scale)",
               "B": "rational (asymmetry strength)",
               "alpha": "rational > 0 (inverse width; default 1)"},
    "scarf_periodic": {"s": "rational > 0, s != 1/2 (wall-singularity index)"},
    "lame": {"j": "integer >= 1 (band family order)",
             "m": "rational in (0,1) (elliptic parameter)",
             "shift": "rational additive constant (optional)"},
    "assoc_lame_es": {"j": "integer >= 1 (a = b = j line)",
                      "m": "rational in (0,1)",
                      "shift": "rational additive constant (optional)"},
    "assoc_lame_qes": {"a": "rational > 0",
                       "b": "rational",
                       "m": "rational in (0,1)",
                       "shift": "rational additive constant (optional)"},
    "khare_mandal": {"zeta": "rational > 0 (hyperbolic strength)",
                     "M": "integer >= 1 (imaginary offset)"},
    "complex_scarf": {"A": "rational > 0 (real well depth)",
                      "B": "rational (imaginary asymmetry)"},
}

_BUILDERS = {
    "hydrogen": HydrogenModel,
    "scarf1": ScarfOneModel,
    "scarf_periodic": ScarfPeriodicModel,
    "lame": LameModel,
    "assoc_lame_es": AssociatedLameESModel,
    "assoc_lame_qes": AssociatedLameQESModel,
    "khare_mandal": KhareMandalModel,
    "complex_scarf": ComplexScarfModel,
}


def get_model(model_id, **params):
    """Instantiate a catalog entry by id, validating parameters.

    Raises UnknownModelError for an unknown id and ParameterError for
    missing/out-of-range parameters.
    """
    if model_id not in _BUILDERS:
        raise UnknownModelError("unknown model id %r; known ids: %s"
                                % (model_id, ", ".join(MODEL_IDS)))
    schema = PARAM_SCHEMAS[model_id]
    unknown = set(params) - set(schema)
    if unknown:
        raise ParameterError("unknown parameter(s) %s for model %s (accepted: %s)"
                             % (sorted(unknown), model_id, ", ".join(schema)))
    try:
        return _BUILDERS[model_id](**params)
    except TypeError as exc:
        raise ParameterError("missing/invalid parameters for %s: %s" % (model_id, exc)) from exc


def evaluate_potential(model, x):
    """V(x) with an explicit singular-point check for scalar arguments."""
    xs = np.asarray(x, dtype=float) if not np.iscomplexobj(np.asarray(x)) else np.asarray(x)
    for s in model.singular_points():
        if np.any(np.abs(xs - s) < 1e-12):
            raise SingularPointError("potential %s is singular at x = %r" % (model.id, s))
    if model.id == "hydrogen" and np.any(np.real(xs) <= 0):
        raise SingularPointError("radial coordinate must be positive")
    if model.id == "scarf_periodic":
        if np.any(np.abs(np.sin(xs)) < 1e-12):
            raise SingularPointError("potential scarf_periodic is singular at multiples of pi")
    if model.id == "scarf1":
        if np.any(np.abs(np.cos(float(model.alpha) * xs)) < 1e-12):
            raise SingularPointError("potential scarf1 is singular at its box walls")
    return model.potential(x)
