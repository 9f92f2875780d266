"""Eigenvalues of information matrices and the E-optimality certificate."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, StructureError
from .incidence import GddParams
from .sbbd import SbbdParams

RTOL = 1e-9


@dataclass(frozen=True)
class EigenSpectrum:
    """Distinct eigenvalues with multiplicities, ascending."""

    values: tuple[tuple[float, int], ...]

    @property
    def size(self) -> int:
        return sum(m for _, m in self.values)

    @property
    def trace(self):
        return sum(t * m for t, m in self.values)

    def expanded(self) -> np.ndarray:
        return np.repeat([float(t) for t, _ in self.values], [m for _, m in self.values])

    def min_positive(self, atol=0.0):
        positive = [t for t, _ in self.values if t > atol]
        if not positive:
            raise DegenerateError("no positive eigenvalue")
        return positive[0]


def _collect(pairs):
    merged: dict = {}
    for value, mult in pairs:
        if mult > 0:
            merged[value] = merged.get(value, 0) + mult
    return EigenSpectrum(tuple(sorted(merged.items())))


def cs2_eigenvalues(params: SbbdParams, v1: int, v2: int) -> EigenSpectrum:
    """Exact spectrum of ``I (x) A + (J - I) (x) B``.

    ``A = mu I + l12 (J - I)`` and ``B = l21 I + l22 (J - I)`` have side v2.
    Eigenvectors split as ``u (x) w`` with u, w either constant or
    orthogonal to the constant vector, giving four eigenvalues.
    """
    if v1 < 2 or v2 < 2:
        raise StructureError("v1 and v2 must be at least 2")
    mu, l12, l21, l22 = params.as_tuple()
    a_diag, a_off = mu - l12, l12
    b_diag, b_off = l21 - l22, l22
    # u constant: A + (v1-1) B ; u orthogonal: A - B
    plus_diag, plus_off = a_diag + (v1 - 1) * b_diag, a_off + (v1 - 1) * b_off
    minus_diag, minus_off = a_diag - b_diag, a_off - b_off
    return _collect([
        (plus_diag + v2 * plus_off, 1),
        (plus_diag, v2 - 1),
        (minus_diag + v2 * minus_off, v1 - 1),
        (minus_diag, (v1 - 1) * (v2 - 1)),
    ])


def numeric_spectrum(m, rtol=RTOL) -> EigenSpectrum:
    """Spectrum of a symmetric matrix via LAPACK, clustering values within tolerance."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructureError("matrix must be square")
    if not np.allclose(m, m.T):
        raise StructureError("matrix must be symmetric")
    vals = np.linalg.eigvalsh(m)
    scale = max(1.0, float(np.abs(vals).max(initial=0.0)))
    groups: list[list[float]] = []
    for x in vals:
        if groups and abs(x - groups[-1][-1]) <= rtol * scale:
            groups[-1].append(float(x))
        else:
            groups.append([float(x)])
    return EigenSpectrum(tuple((float(np.mean(g)), len(g)) for g in groups))


def spectra_agree(exact: EigenSpectrum, numeric: EigenSpectrum, rtol=RTOL) -> bool:
    """Compare expanded spectra entrywise, relative to the largest magnitude."""
    a, b = exact.expanded(), numeric.expanded()
    if a.shape != b.shape:
        return False
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    return bool(np.all(np.abs(np.sort(a) - np.sort(b)) <= rtol * scale))


def min_positive_eigenvalue(m) -> float:
    """Smallest eigenvalue above ``1e-9 * ||M||_2``; the E-criterion value."""
    m = np.asarray(m, dtype=float)
    vals = np.linalg.eigvalsh(m)
    norm = float(np.abs(vals).max(initial=0.0))
    positive = vals[vals > RTOL * norm]
    if norm == 0.0 or positive.size == 0:
        raise DegenerateError("matrix has no positive eigenvalue")
    return float(positive.min())


def e_optimal_gdd(params: GddParams) -> bool:
    """GDDs with ``lambda2 = lambda1 + 1`` are E-optimal among designs with as many ones."""
    return params.lambda1 is not None and params.lambda2 == params.lambda1 + 1


def e_certificate(params: SbbdParams) -> bool:
    """The same certificate read off SBBD parameters ``(r, l1, l2, l2)``."""
    return params.gdd_type and params.lambda21 == params.lambda12 + 1
