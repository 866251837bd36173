"""Polynomial identities for the node polynomial and their solution.

With ψ = Π_i (t−t_i)^{b_i} · e^{a0·t} · P_n(t) the transformed Schrödinger
equation becomes P'' + S·P' + R·P = 0 with

    S = 2·Σ_i b_i/(t−t_i) + 2·a0,
    R = Σ_i (b_i²−b_i)/(t−t_i)² + 2·Σ_{i<k} b_i b_k /((t−t_i)(t−t_k))
        + 2·a0·Σ_i b_i/(t−t_i) + a0² + G(t).

Because each b_i is a root of b² − b + g2_i = 0 the double poles of R cancel,
so clearing by the *minimal* product Π(t) = Π_i (t−t_i) gives the polynomial
identity  Π·P'' + NS·P' + NR·P = 0  with NS = Π·S and NR = Π·R (the division
Π²R / Π is exact and asserted).  Reading off monomial coefficients yields
linear conditions on the coefficients of P.  For models whose pole data is
energy-free the identity is linear in E: rows split as M0 + E·M1, the square
block on the basis degrees is a generalized eigenvalue pencil, and the
overflow rows vanish identically.  Models whose pole data depends on E get
their energy from the closed-form quantization first; the square block is
then evaluated at that energy and its kernel is the node polynomial.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import linalg

from .errors import NonlinearEnergyError, QhjError
from .exactmath import to_complex
from .potential_catalog import WavefunctionRecipe
from .quantization import QuantizationOutcome, quantize

_DIV_TOL = 1e-10
_OVERFLOW_TOL = 1e-10
_DEDUP_TOL = 1e-8


class DefectivePencilWarning(UserWarning):
    """Eigenvalue multiplicity exceeded the kernel dimension."""


@dataclass(frozen=True)
class PolynomialOnT:
    """Node polynomial in the mapped variable: ascending coeffs + parity."""

    coeffs: Tuple[complex, ...]
    parity: str = "none"          # even | odd | none

    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = np.zeros_like(np.asarray(t, dtype=complex))
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


@dataclass
class PencilSystem:
    """Square generalized pencil M0 + E·M1 over the given monomial basis."""

    M0: np.ndarray
    M1: np.ndarray
    basis: Tuple[int, ...]
    overflow: Tuple[np.ndarray, np.ndarray]
    assignment: object = None

    def overflow_magnitude(self):
        o0, o1 = self.overflow
        scale = max(1.0, np.max(np.abs(self.M0)) if self.M0.size else 1.0,
                    np.max(np.abs(self.M1)) if self.M1.size else 1.0)
        mags = [np.max(np.abs(o)) if o.size else 0.0 for o in (o0, o1)]
        return max(mags) / scale


@dataclass
class BandEdgeSolution:
    """One solved level: energy, node polynomial, recipe, multiplicity."""

    energy: object
    polynomial: PolynomialOnT
    assignment: object
    recipe: WavefunctionRecipe
    degeneracy: int = 1
    bc_class: Optional[str] = None


# ---------------------------------------------------------------------------
# identity rows
# ---------------------------------------------------------------------------

def _shift(coeffs, k):
    coeffs = np.asarray(coeffs, dtype=complex)
    if k == 0:
        return coeffs
    return np.concatenate([np.zeros(k, dtype=complex), coeffs])


def _polyadd_many(parts):
    acc = np.zeros(1, dtype=complex)
    for p in parts:
        acc = P.polyadd(acc, np.asarray(p, dtype=complex))
    return acc


def _exact_polydiv(num, den, what):
    quo, rem = P.polydiv(np.asarray(num, dtype=complex), np.asarray(den, dtype=complex))
    scale = max(1.0, float(np.max(np.abs(num))) if np.asarray(num).size else 1.0)
    if rem.size and np.max(np.abs(rem)) > _DIV_TOL * scale:
        raise QhjError("polynomial division for %s is not exact "
                       "(remainder %.3e); inconsistent residue branch data"
                       % (what, float(np.max(np.abs(rem)))))
    return quo


def _identity_parts(model, residues, a0):
    """(Π, NS, Π²R without the G part) for numeric residues and slope a0."""
    poles = model.fixed_poles()
    locs = [to_complex(p.location) for p in poles]
    bvals = [to_complex(residues[p.label]) for p in poles]
    a0 = to_complex(a0)
    pi = P.polyfromroots(locs)
    deleted = [P.polyfromroots(locs[:i] + locs[i + 1:]) for i in range(len(locs))]

    ns_parts = [2 * bvals[i] * deleted[i] for i in range(len(locs))]
    ns_parts.append(2 * a0 * pi)
    ns = _polyadd_many(ns_parts)

    r_parts = []
    for i in range(len(locs)):
        r_parts.append((bvals[i] ** 2 - bvals[i]) * P.polymul(deleted[i], deleted[i]))
        r_parts.append(2 * a0 * bvals[i] * P.polymul(deleted[i], pi))
        for k in range(i + 1, len(locs)):
            r_parts.append(2 * bvals[i] * bvals[k] * P.polymul(deleted[i], deleted[k]))
    r_parts.append(a0 ** 2 * P.polymul(pi, pi))
    pi2_r = _polyadd_many(r_parts)
    return pi, ns, pi2_r


def _basis_degrees(model, n):
    if model.parity_constraint:
        return tuple(range(n % 2, n + 1, 2))
    return tuple(range(0, n + 1))


def _row_matrix(pi, ns, nr, basis):
    """Full coefficient matrix of Π·P'' + NS·P' + NR·P over basis columns."""
    cols = []
    for d in basis:
        parts = [_shift(nr, d)]
        if d >= 1:
            parts.append(d * _shift(ns, d - 1))
        if d >= 2:
            parts.append(d * (d - 1) * _shift(pi, d - 2))
        cols.append(_polyadd_many(parts))
    # polyadd trims trailing zeros; rows must still cover every basis degree
    nrows = max(max(len(c) for c in cols), max(basis) + 1)
    mat = np.zeros((nrows, len(basis)), dtype=complex)
    for j, c in enumerate(cols):
        mat[: len(c), j] = c
    return mat


def _split_rows(mat, basis):
    basis_set = set(basis)
    sq = np.array([mat[r] for r in basis], dtype=complex)
    rest = [mat[r] for r in range(mat.shape[0]) if r not in basis_set]
    over = np.array(rest, dtype=complex) if rest else np.zeros((0, len(basis)), dtype=complex)
    return sq, over


def build_pencil(model, assignment):
    """Linear-in-energy identity rows for one residue assignment.

    Requires energy-free pole residues and slope (and an E-part of the
    stored Πclear²·G divisible by Πclear); otherwise the identity is not a
    linear pencil and NonlinearEnergyError is raised.
    """
    if not assignment.pole_residues or assignment.n is None:
        raise NonlinearEnergyError(
            "assignment for %s has energy-dependent pole data; solve its "
            "closed-form energies first" % model.id)
    n = int(assignment.n)
    a_poly, b_poly = model.pi2_g_polys()
    pi, ns, pi2_r = _identity_parts(model, assignment.pole_residues, assignment.a0)
    quo, rem = P.polydiv(np.asarray(b_poly, dtype=complex), pi)
    if rem.size and np.max(np.abs(rem)) > _DIV_TOL * max(1.0, np.max(np.abs(b_poly))):
        raise NonlinearEnergyError(
            "energy enters the %s identity through the pole strengths; "
            "no linear pencil exists" % model.id)
    nr0 = _exact_polydiv(P.polyadd(pi2_r, np.asarray(a_poly, dtype=complex)), pi,
                         "the energy-free identity part")
    nr1 = quo
    basis = _basis_degrees(model, n)
    full0 = _row_matrix(pi, ns, nr0, basis)
    # energy rows: only NR1·P contributes
    cols1 = [_shift(nr1, d) for d in basis]
    nrows1 = max(len(c) for c in cols1)
    full1 = np.zeros((max(full0.shape[0], nrows1), len(basis)), dtype=complex)
    for j, c in enumerate(cols1):
        full1[: len(c), j] = c
    if full1.shape[0] > full0.shape[0]:
        full0 = np.vstack([full0, np.zeros((full1.shape[0] - full0.shape[0], len(basis)), dtype=complex)])
    else:
        full1 = np.vstack([full1, np.zeros((full0.shape[0] - full1.shape[0], len(basis)), dtype=complex)])
    m0, o0 = _split_rows(full0, basis)
    m1, o1 = _split_rows(full1, basis)
    system = PencilSystem(M0=m0, M1=m1, basis=basis, overflow=(o0, o1),
                          assignment=assignment)
    if system.overflow_magnitude() > _OVERFLOW_TOL:
        raise QhjError("overflow rows of the %s pencil do not vanish (%.2e); "
                       "the residue assignment is inconsistent"
                       % (model.id, system.overflow_magnitude()))
    return system


def build_fixed_system(model, assignment, energy=None):
    """Identity rows at a resolved energy (for closed-form-energy models)."""
    energy = assignment.energy if energy is None else energy
    if energy is None:
        raise QhjError("fixed system needs a resolved energy")
    a_poly, b_poly = model.pi2_g_polys()
    e = to_complex(energy)
    g_poly = P.polyadd(np.asarray(a_poly, dtype=complex),
                       e * np.asarray(b_poly, dtype=complex))
    pi, ns, pi2_r = _identity_parts(model, assignment.pole_residues, assignment.a0)
    nr = _exact_polydiv(P.polyadd(pi2_r, g_poly), pi, "the resolved identity")
    basis = _basis_degrees(model, int(assignment.n))
    full = _row_matrix(pi, ns, nr, basis)
    sq, over = _split_rows(full, basis)
    scale = max(1.0, float(np.max(np.abs(full))))
    if over.size and np.max(np.abs(over)) > 1e-7 * scale:
        raise QhjError("identity rows above the node-polynomial degree do not "
                       "vanish at the quantized energy (%.2e); closed form and "
                       "identity disagree" % float(np.max(np.abs(over))))
    return sq, basis


def _kernel_vectors(mat, rtol=1e-7):
    """Orthonormal kernel basis of a square matrix via SVD."""
    u, s, vh = np.linalg.svd(mat)
    if mat.shape[0] == 0:
        return [np.array([1.0 + 0j])]
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return [vh[i].conj() for i in range(vh.shape[0])]
    kernel = [vh[i].conj() for i in range(len(s)) if s[i] <= rtol * smax]
    if not kernel:
        kernel = [vh[-1].conj()]
    return kernel


def _normalize_leading(coeffs):
    coeffs = np.asarray(coeffs, dtype=complex)
    mags = np.abs(coeffs)
    if not mags.any():
        return coeffs
    lead = np.max(np.nonzero(mags > 1e-9 * mags.max())[0])
    out = coeffs[: lead + 1] / coeffs[lead]
    return out


def _expand_basis(vec, basis):
    full = np.zeros(max(basis) + 1, dtype=complex)
    for val, d in zip(vec, basis):
        full[d] = val
    return full


def solve_pencil(system):
    """Eigenvalues/kernels of M0 + E·M1 = 0, deduplicated with multiplicity.

    Returns a list of (energy, coeffs, multiplicity) with coeffs the
    full ascending coefficient array normalized to leading coefficient 1.
    Emits DefectivePencilWarning when an eigenvalue's kernel is thinner than
    its multiplicity.
    """
    m0, m1 = system.M0, system.M1
    vals = linalg.eigvals(m0, -m1)
    finite = [v for v in vals if np.isfinite(v.real) and np.isfinite(v.imag)]
    cleaned = []
    for v in finite:
        if abs(v.imag) < 1e-9 * (1.0 + abs(v.real)):
            v = complex(v.real, 0.0)
        cleaned.append(v)
    cleaned.sort(key=lambda z: (z.real, z.imag))
    groups = []
    for v in cleaned:
        if groups and abs(v - groups[-1][0]) <= _DEDUP_TOL * max(1.0, abs(v)):
            groups[-1][1].append(v)
        else:
            groups.append([v, [v]])
    out = []
    for _rep, members in groups:
        e_mean = sum(members) / len(members)
        if abs(e_mean.imag) < 1e-9 * (1.0 + abs(e_mean.real)):
            e_mean = complex(e_mean.real, 0.0)
        kernel = _kernel_vectors(m0 + e_mean * m1)
        mult = len(members)
        if len(kernel) < mult:
            warnings.warn("pencil eigenvalue %s has multiplicity %d but kernel "
                          "dimension %d" % (e_mean, mult, len(kernel)),
                          DefectivePencilWarning)
        for vec in kernel[:mult]:
            coeffs = _normalize_leading(_expand_basis(vec, system.basis))
            out.append((e_mean, coeffs, mult))
    return out


# ---------------------------------------------------------------------------
# closed-form kernels
# ---------------------------------------------------------------------------

def closed_form_check(model, solution):
    """Classical-polynomial family matching the kernel, or None.

    Returns (family, indices, evaluator) where evaluator(t) reproduces the
    node polynomial up to overall scale.  Elliptic-family kernels have no
    classical closed form and return None.
    """
    from .special_functions import jacobi_polynomial, laguerre

    a = solution.assignment
    n = int(a.n)
    if model.id == "hydrogen":
        k = 2 * model.l + 1
        slope = -2.0 * to_complex(a.a0).real

        def evaluator(t):
            return laguerre(n, k, slope * np.asarray(t, dtype=float))
        return ("laguerre", (k,), evaluator)
    if model.id == "scarf1":
        al = 2 * to_complex(a.pole_residues["t=+1"]).real - 1
        be = 2 * to_complex(a.pole_residues["t=-1"]).real - 1

        def evaluator(t):
            return jacobi_polynomial(n, al, be, np.asarray(t, dtype=complex))
        return ("jacobi", (al, be), evaluator)
    if model.id == "scarf_periodic":
        nu = 2 * to_complex(a.pole_residues["t=+i"]).real - 1

        def evaluator(t):
            return jacobi_polynomial(n, nu, nu, -1j * np.asarray(t, dtype=complex))
        return ("jacobi", (nu, nu), evaluator)
    if model.id == "complex_scarf":
        al = 2 * to_complex(a.pole_residues["t=+1"]) - 1
        be = 2 * to_complex(a.pole_residues["t=-1"]) - 1

        def evaluator(t):
            return jacobi_polynomial(n, al, be, np.asarray(t, dtype=complex))
        return ("jacobi", (al, be), evaluator)
    return None


def closed_form_deviation(model, solution, npoints=20):
    """Max deviation (relative) between kernel and classical form, or None."""
    check = closed_form_check(model, solution)
    if check is None:
        return None
    _family, _indices, evaluator = check
    if model.id == "hydrogen":
        ts = np.linspace(0.5, 2.0 * (int(solution.assignment.n) + model.l + 2), npoints)
    else:
        ts = np.linspace(-0.9, 0.9, npoints)
    kernel_vals = solution.polynomial(ts)
    ref_vals = np.asarray(evaluator(ts), dtype=complex)
    idx = int(np.argmax(np.abs(ref_vals)))
    if abs(ref_vals[idx]) == 0.0:
        return float(np.max(np.abs(kernel_vals)))
    scale = kernel_vals[idx] / ref_vals[idx]
    denom = max(np.max(np.abs(kernel_vals)), 1e-300)
    return float(np.max(np.abs(kernel_vals - scale * ref_vals)) / denom)


# ---------------------------------------------------------------------------
# spectrum orchestration
# ---------------------------------------------------------------------------

@dataclass
class SpectrumResult:
    """Deduplicated, sorted level list for one model."""

    model_id: str
    outcome: QuantizationOutcome
    solutions: List[BandEdgeSolution]


def _periodicity_class(model, assignment, parity):
    """periodic/antiperiodic over one cell for elliptic families, else None."""
    if model.id in ("lame", "assoc_lame_es", "assoc_lame_qes"):
        cn_exp, _dn = model.prefactor_exponents(assignment.pole_residues)
        flips = int(2 * to_complex(cn_exp).real) // 2  # cn exponent is 0 or 1
        flips += 1 if parity == "odd" else 0
        return "periodic" if flips % 2 == 0 else "antiperiodic"
    if model.id == "scarf_periodic" and not model.bound_phase:
        d1 = to_complex(assignment.lambda1).real
        return "exponent_plus" if d1 < 0.5 else "exponent_minus"
    return None


def _poly_parity(coeffs):
    mags = np.abs(np.asarray(coeffs))
    if not mags.any():
        return "none"
    tol = 1e-9 * mags.max()
    even = np.any(mags[0::2] > tol)
    odd = np.any(mags[1::2] > tol)
    if even and not odd:
        return "even"
    if odd and not even:
        return "odd"
    return "none"


def _solution_samples(model, recipe):
    lo, hi = model.x_window()
    margin = 0.08 * (hi - lo)
    xs = np.linspace(lo + margin, hi - margin, 171)
    vals = np.asarray(recipe(xs), dtype=complex)
    norm = np.linalg.norm(vals)
    return vals / norm if norm else vals


def solve_spectrum(model, levels=4):
    """Quantize, solve every admissible set, deduplicate, attach recipes."""
    outcome = quantize(model, levels=levels)
    raw: List[BandEdgeSolution] = []
    if model.uses_pencil:
        for a in outcome.admissible_sets():
            system = build_pencil(model, a)
            for energy, coeffs, mult in solve_pencil(system):
                parity = _poly_parity(coeffs)
                resolved = replace(a, energy=energy, level_resolved=True,
                                   parity=parity)
                poly = PolynomialOnT(tuple(coeffs.tolist()), parity)
                recipe = model.recipe(resolved, poly.coeffs)
                raw.append(BandEdgeSolution(
                    energy=energy, polynomial=poly, assignment=resolved,
                    recipe=recipe, degeneracy=mult,
                    bc_class=_periodicity_class(model, resolved, parity)))
    else:
        for a in outcome.levels:
            sq, basis = build_fixed_system(model, a)
            for vec in _kernel_vectors(sq)[:1]:
                coeffs = _normalize_leading(_expand_basis(vec, basis))
                parity = _poly_parity(coeffs)
                poly = PolynomialOnT(tuple(coeffs.tolist()), parity)
                recipe = model.recipe(a, poly.coeffs)
                raw.append(BandEdgeSolution(
                    energy=a.energy, polynomial=poly, assignment=a,
                    recipe=recipe, degeneracy=1,
                    bc_class=_periodicity_class(model, a, parity)))

    solutions = _deduplicate(model, raw)
    solutions.sort(key=lambda s: (to_complex(s.energy).real,
                                  to_complex(s.energy).imag,
                                  s.assignment.set_label,
                                  int(s.assignment.n)))
    return SpectrumResult(model_id=model.id, outcome=outcome, solutions=solutions)


def _deduplicate(model, raw):
    """Merge identical eigenfunctions across sets; set energy multiplicities."""
    if not raw:
        return []
    order = sorted(range(len(raw)),
                   key=lambda i: (to_complex(raw[i].energy).real,
                                  to_complex(raw[i].energy).imag))
    groups: List[List[int]] = []
    for idx in order:
        e = to_complex(raw[idx].energy)
        if groups:
            e_prev = to_complex(raw[groups[-1][-1]].energy)
            if abs(e - e_prev) <= _DEDUP_TOL * max(1.0, abs(e)):
                groups[-1].append(idx)
                continue
        groups.append([idx])
    kept: List[BandEdgeSolution] = []
    for group in groups:
        members = sorted(group, key=lambda i: (raw[i].assignment.set_label,
                                               int(raw[i].assignment.n)))
        samples = {i: _solution_samples(model, raw[i].recipe) for i in members}
        unique: List[int] = []
        for i in members:
            dup = any(abs(np.vdot(samples[j], samples[i])) > 1 - 1e-8 for j in unique)
            if not dup:
                unique.append(i)
        if len(unique) > 1:
            gram = np.array([[np.vdot(samples[i], samples[j]) for j in unique]
                             for i in unique])
            rank = int(np.linalg.matrix_rank(gram, tol=1e-6))
        else:
            rank = 1
        for i in unique:
            sol = raw[i]
            sol.degeneracy = rank
            kept.append(sol)
    return kept
