"""Classical-quantum states: named classical registers over conditional operators."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .operators import (
    OperatorError,
    RegisterLayout,
    hermiticity_residual,
    partial_trace_matrix,
    permute_registers_matrix,
)

PROB_TOL = 1e-9
PSD_TOL = 1e-9


@dataclass
class CQState:
    """Joint state of named classical registers and a shared quantum part.

    ``probs`` has one axis per classical register (in ``classical_names``
    order); ``conditionals[idx]`` is the quantum state prepared when the
    classical registers take the joint value ``idx``.  Zero-probability
    atoms may carry any placeholder operator.
    """

    classical_names: tuple[str, ...]
    alphabet_sizes: tuple[int, ...]
    probs: np.ndarray
    quantum_layout: RegisterLayout
    conditionals: np.ndarray

    def __post_init__(self):
        self.classical_names = tuple(self.classical_names)
        self.alphabet_sizes = tuple(int(s) for s in self.alphabet_sizes)
        self.probs = np.asarray(self.probs, dtype=float)
        self.conditionals = np.asarray(self.conditionals, dtype=complex)
        d = self.quantum_layout.total_dim
        if self.probs.shape != self.alphabet_sizes:
            raise OperatorError(
                f"probs shape {self.probs.shape} != alphabet sizes {self.alphabet_sizes}"
            )
        if self.conditionals.shape != self.alphabet_sizes + (d, d):
            raise OperatorError(
                f"conditionals shape {self.conditionals.shape} incompatible with "
                f"alphabets {self.alphabet_sizes} and quantum dim {d}"
            )
        if len(set(self.classical_names) | set(self.quantum_layout.names)) != len(
            self.classical_names
        ) + len(self.quantum_layout.names):
            raise OperatorError("classical and quantum register names must be distinct")

    # -- validation -----------------------------------------------------

    def validate(self) -> None:
        if np.any(self.probs < -PROB_TOL):
            raise OperatorError(f"negative probability {self.probs.min():.1e}")
        total = float(self.probs.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise OperatorError(f"probabilities sum to {total!r}, not 1")
        flat_p = self.probs.reshape(-1)
        flat_c = self.conditionals.reshape(-1, *self.conditionals.shape[-2:])
        for k in np.nonzero(flat_p > PROB_TOL)[0]:
            m = flat_c[k]
            if hermiticity_residual(m) > 1e-9:
                raise OperatorError(f"conditional {k} not Hermitian")
            w = np.linalg.eigvalsh(m)
            if w[0] < -PSD_TOL:
                raise OperatorError(f"conditional {k} has negative eigenvalue {w[0]:.1e}")
            if abs(float(np.trace(m).real) - 1.0) > 1e-9:
                raise OperatorError(f"conditional {k} trace deviates from 1")

    # -- register bookkeeping -------------------------------------------

    @property
    def registers(self) -> tuple[str, ...]:
        return self.classical_names + self.quantum_layout.names

    def is_classical(self, name: str) -> bool:
        return name in self.classical_names

    def size_of(self, name: str) -> int:
        return self.alphabet_sizes[self.classical_names.index(name)]

    def _axis(self, name: str) -> int:
        try:
            return self.classical_names.index(name)
        except ValueError:
            raise OperatorError(f"unknown classical register {name!r}") from None

    # -- reductions ------------------------------------------------------

    def marginal_classical(self, keep: Sequence[str]) -> "CQState":
        """Sum out every classical register not in ``keep``."""
        keep = list(keep)
        drop = [n for n in self.classical_names if n not in keep]
        unknown = [n for n in keep if n not in self.classical_names]
        if unknown:
            raise OperatorError(f"unknown classical registers {unknown}")
        axes = tuple(self._axis(n) for n in drop)
        probs = self.probs.sum(axis=axes) if axes else self.probs.copy()
        weighted = self.probs[..., None, None] * self.conditionals
        conds = weighted.sum(axis=axes) if axes else weighted
        kept_names = [n for n in self.classical_names if n in keep]
        d = self.quantum_layout.total_dim
        safe = np.where(probs > 0.0, probs, 1.0)
        conds = conds / safe[..., None, None]
        eye = np.eye(d, dtype=complex) / d
        conds = np.where((probs > 0.0)[..., None, None], conds, eye)
        out = CQState(
            tuple(kept_names),
            tuple(self.size_of(n) for n in kept_names),
            probs,
            self.quantum_layout,
            conds,
        )
        if kept_names != keep:
            out = out.reorder_classical(keep)
        return out

    def reorder_classical(self, order: Sequence[str]) -> "CQState":
        order = list(order)
        if sorted(order) != sorted(self.classical_names):
            raise OperatorError(f"{order} is not a permutation of {self.classical_names}")
        perm = [self._axis(n) for n in order]
        probs = np.transpose(self.probs, perm)
        conds = np.transpose(self.conditionals, perm + [len(perm), len(perm) + 1])
        return CQState(
            tuple(order),
            tuple(self.alphabet_sizes[p] for p in perm),
            probs,
            self.quantum_layout,
            conds,
        )

    def trace_quantum(self, keep: Sequence[str]) -> "CQState":
        """Partial-trace every conditional down to the ``keep`` quantum registers."""
        keep = list(keep)
        if not keep:
            raise OperatorError("trace_quantum requires at least one kept register")
        conds = partial_trace_matrix(self.conditionals, self.quantum_layout, keep)
        return CQState(
            self.classical_names,
            self.alphabet_sizes,
            self.probs.copy(),
            self.quantum_layout.subset(keep),
            conds,
        )

    def restrict(self, classical_keep: Sequence[str], quantum_keep: Sequence[str]) -> "CQState":
        out = self
        if list(quantum_keep) != list(self.quantum_layout.names):
            out = out.trace_quantum(quantum_keep)
        if list(classical_keep) != list(out.classical_names):
            out = out.marginal_classical(classical_keep)
        return out

    def condition(self, register: str, value: int) -> "CQState":
        """State of the remaining registers given ``register == value``."""
        ax = self._axis(register)
        probs = np.take(self.probs, value, axis=ax)
        conds = np.take(self.conditionals, value, axis=ax)
        mass = float(probs.sum())
        if mass <= 0.0:
            raise OperatorError(f"conditioning on zero-probability value {register}={value}")
        names = tuple(n for n in self.classical_names if n != register)
        sizes = tuple(s for n, s in zip(self.classical_names, self.alphabet_sizes) if n != register)
        return CQState(names, sizes, probs / mass, self.quantum_layout, conds.copy())

    def classical_marginal_probs(self, register: str) -> np.ndarray:
        ax = self._axis(register)
        axes = tuple(i for i in range(len(self.classical_names)) if i != ax)
        return self.probs.sum(axis=axes) if axes else self.probs.copy()

    # -- embedding --------------------------------------------------------

    def to_operator(
        self,
        classical_order: Sequence[str] | None = None,
        quantum_order: Sequence[str] | None = None,
    ) -> tuple[np.ndarray, RegisterLayout]:
        """Embed as a density matrix with classical registers as diagonal factors.

        Layout order is ``classical_order`` then ``quantum_order``.
        """
        cl = list(classical_order) if classical_order is not None else list(self.classical_names)
        qu = list(quantum_order) if quantum_order is not None else list(self.quantum_layout.names)
        state = self
        if cl != list(state.classical_names):
            state = state.reorder_classical(cl)
        if qu != list(state.quantum_layout.names):
            conds, qlayout = permute_registers_matrix(state.conditionals, state.quantum_layout, qu)
            state = CQState(state.classical_names, state.alphabet_sizes, state.probs, qlayout, conds)
        dq = state.quantum_layout.total_dim
        flat_p = state.probs.reshape(-1)
        flat_c = state.conditionals.reshape(-1, dq, dq)
        n_cl = flat_p.size
        out = np.zeros((n_cl * dq, n_cl * dq), dtype=complex)
        for k in range(n_cl):
            if flat_p[k] > 0.0:
                out[k * dq : (k + 1) * dq, k * dq : (k + 1) * dq] = flat_p[k] * flat_c[k]
        cl_layout = RegisterLayout(tuple(cl), tuple(state.alphabet_sizes))
        return out, cl_layout.concat(state.quantum_layout)


def joint_and_product(
    state: CQState, part_a: Sequence[str], part_b: Sequence[str]
) -> tuple[np.ndarray, np.ndarray]:
    """Embed the joint state over two register groups and the product of its marginals.

    Both operators share the register order ``(*part_a, *part_b)`` so they can
    be fed to any two-argument divergence directly.
    """
    part_a, part_b = list(part_a), list(part_b)
    overlap = set(part_a) & set(part_b)
    if overlap:
        raise OperatorError(f"register groups overlap: {sorted(overlap)}")
    a_cl = [r for r in part_a if state.is_classical(r)]
    a_qu = [r for r in part_a if r not in a_cl]
    b_cl = [r for r in part_b if state.is_classical(r)]
    b_qu = [r for r in part_b if r not in b_cl]
    for r in a_qu + b_qu:
        state.quantum_layout.index(r)
    if a_qu + b_qu:
        sub = state.restrict(a_cl + b_cl, a_qu + b_qu)
        op, layout = sub.to_operator(a_cl + b_cl, a_qu + b_qu)
    else:
        # all-classical grouping: the quantum part is traced out entirely
        sub = state.restrict(a_cl + b_cl, [state.quantum_layout.names[0]])
        op = np.diag(sub.probs.reshape(-1)).astype(complex)
        layout = RegisterLayout(tuple(a_cl + b_cl), tuple(sub.alphabet_sizes))
    order = part_a + part_b
    op, layout = permute_registers_matrix(op, layout, order)
    op_a = partial_trace_matrix(op, layout, part_a)
    op_b = partial_trace_matrix(op, layout, part_b)
    return op, np.kron(op_a, op_b)
