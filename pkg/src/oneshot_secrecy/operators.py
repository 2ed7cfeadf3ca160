"""Dense complex operator algebra on small multi-register Hilbert spaces.

Everything here operates on plain ``numpy`` arrays (or the thin
:class:`DensityOperator` wrapper) and is restricted to joint dimensions of a
few dozen, which keeps full eigendecompositions cheap and exact enough for
the tolerances used throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERM_TOL = 1e-9
PSD_TOL = 1e-9
TRACE_TOL = 1e-9
# eigenvalues this close to zero are treated as exact zeros before logs/inverses
EIG_CLAMP = 1e-10


class OperatorError(ValueError):
    """An operator or register layout violates a structural invariant."""


def _as_matrix(op) -> np.ndarray:
    m = op.matrix if isinstance(op, DensityOperator) else np.asarray(op, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise OperatorError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_residual(m: np.ndarray) -> float:
    """Max entrywise deviation |A - A^dagger|."""
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def validate_density(m, label: str | None = None) -> np.ndarray:
    """Check the density-operator invariants, raising on the first violation.

    Accepts Hermiticity residual <= 1e-9, eigenvalues >= -1e-9 and trace
    within 1e-9 of one.  Returns the matrix as a complex ndarray.
    """
    m = _as_matrix(m)
    who = f"state {label!r}: " if label else ""
    herm = hermiticity_residual(m)
    if herm > HERM_TOL:
        raise OperatorError(f"{who}hermiticity residual {herm:.1e}")
    w = np.linalg.eigvalsh(m)
    if w.size and w[0] < -PSD_TOL:
        raise OperatorError(f"{who}negative eigenvalue {w[0]:.1e}")
    tr_dev = abs(float(np.trace(m).real) - 1.0)
    if tr_dev > TRACE_TOL:
        raise OperatorError(f"{who}trace deviation {tr_dev:.1e}")
    return m


@dataclass(frozen=True)
class DensityOperator:
    """A validated density operator, optionally tagged with a register name."""

    matrix: np.ndarray
    label: str | None = None

    def __post_init__(self):
        m = validate_density(self.matrix, self.label)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered named registers; joint basis indices are row-major over them."""

    names: tuple[str, ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.names) != len(self.dims):
            raise OperatorError("names and dims must have equal length")
        if len(set(self.names)) != len(self.names):
            raise OperatorError(f"duplicate register names in {self.names}")
        if any(d < 1 for d in self.dims):
            raise OperatorError("register dimensions must be >= 1")

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims)) if self.dims else 1

    def dim_of(self, name: str) -> int:
        return self.dims[self.index(name)]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise OperatorError(f"unknown register {name!r} in layout {self.names}") from None

    def subset(self, names: Iterable[str]) -> "RegisterLayout":
        names = tuple(names)
        return RegisterLayout(names, tuple(self.dim_of(n) for n in names))

    def concat(self, other: "RegisterLayout") -> "RegisterLayout":
        return RegisterLayout(self.names + other.names, self.dims + other.dims)


def tensor(a, b) -> DensityOperator:
    """Kronecker product in row-major register order."""
    return DensityOperator(np.kron(_as_matrix(a), _as_matrix(b)))


def partial_trace_matrix(m: np.ndarray, layout: RegisterLayout, keep: Sequence[str]) -> np.ndarray:
    """Trace out every register not in ``keep``; kept registers keep their order."""
    keep = list(keep)
    if not keep:
        raise OperatorError("keep must name at least one register")
    for name in keep:
        layout.index(name)
    if len(set(keep)) != len(keep):
        raise OperatorError(f"duplicate names in keep: {keep}")
    m = np.asarray(m, dtype=complex)
    n = len(layout.names)
    if m.shape[-1] != layout.total_dim or m.shape[-2] != layout.total_dim:
        raise OperatorError(
            f"dimension mismatch: operator dim {m.shape[-1]} vs layout total {layout.total_dim}"
        )
    keep_pos = sorted(layout.index(name) for name in keep)
    batch_shape = m.shape[:-2]
    nb = len(batch_shape)
    t = m.reshape(batch_shape + layout.dims + layout.dims)
    # einsum integer subscripts: batch axes, then row/col register axes
    row = [nb + i for i in range(n)]
    col = [nb + n + i if i in keep_pos else nb + i for i in range(n)]
    out = list(range(nb)) + [nb + i for i in keep_pos] + [nb + n + i for i in keep_pos]
    reduced = np.einsum(t, list(range(nb)) + row + col, out)
    kept_dim = int(np.prod([layout.dims[i] for i in keep_pos]))
    reduced = reduced.reshape(batch_shape + (kept_dim, kept_dim))
    # reorder kept registers to the caller's order
    kept_names = [layout.names[i] for i in keep_pos]
    if kept_names != keep:
        sub = RegisterLayout(tuple(kept_names), tuple(layout.dims[i] for i in keep_pos))
        reduced = permute_registers_matrix(reduced, sub, keep)[0]
    return reduced


def partial_trace(rho, layout: RegisterLayout, keep: Sequence[str]) -> DensityOperator:
    return DensityOperator(partial_trace_matrix(_as_matrix(rho), layout, keep))


def permute_registers_matrix(
    m: np.ndarray, layout: RegisterLayout, new_order: Sequence[str]
) -> tuple[np.ndarray, RegisterLayout]:
    """Reorder the tensor factors of an operator to ``new_order``."""
    new_order = list(new_order)
    if sorted(new_order) != sorted(layout.names):
        raise OperatorError(f"new order {new_order} must be a permutation of {layout.names}")
    m = np.asarray(m, dtype=complex)
    n = len(layout.names)
    perm = [layout.index(name) for name in new_order]
    batch_shape = m.shape[:-2]
    nb = len(batch_shape)
    t = m.reshape(batch_shape + layout.dims + layout.dims)
    axes = list(range(nb)) + [nb + p for p in perm] + [nb + n + p for p in perm]
    t = t.transpose(axes)
    new_layout = layout.subset(new_order)
    d = new_layout.total_dim
    return t.reshape(batch_shape + (d, d)), new_layout


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    m = _as_matrix(h)
    res = hermiticity_residual(m)
    if res > HERM_TOL:
        raise OperatorError(f"matrix is not Hermitian (residual {res:.1e})")
    w, v = np.linalg.eigh(m)
    return w, v


def clamped_eigvalsh(m) -> np.ndarray:
    """Eigenvalues with near-zero values snapped to exactly zero."""
    w = np.linalg.eigvalsh(_as_matrix(m))
    w = w.copy()
    w[np.abs(w) <= EIG_CLAMP] = 0.0
    return w


def trace_distance(rho, sigma) -> float:
    """Trace norm of the difference, ranging from 0 (equal) to 2 (orthogonal)."""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise OperatorError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sum(np.abs(np.linalg.eigvalsh(b - a))))


def fidelity(rho, sigma) -> float:
    """Squared trace norm of sqrt(rho)sqrt(sigma); 1 iff the states coincide."""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    if a.shape != b.shape:
        raise OperatorError(f"dimension mismatch: {a.shape} vs {b.shape}")
    sa = _psd_sqrt(a)
    sb = _psd_sqrt(b)
    sv = np.linalg.svd(sa @ sb, compute_uv=False)
    f = float(np.sum(sv)) ** 2
    return min(max(f, 0.0), 1.0)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    w = np.where(w > 0.0, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def purified_distance(rho, sigma, convention: str = "standard") -> float:
    """Distance derived from fidelity, used for smoothing balls.

    ``standard`` is sqrt(1 - F); ``literal`` is sqrt(1 - F^2), which composes
    a square with the already-squared fidelity and is kept only for
    faithfulness to the less common convention.
    """
    f = fidelity(rho, sigma)
    if convention == "standard":
        return float(np.sqrt(max(0.0, 1.0 - f)))
    if convention == "literal":
        return float(np.sqrt(max(0.0, 1.0 - f * f)))
    raise ValueError(f"unknown purified-distance convention {convention!r}")
