"""Bloch-equation generators as sparse superoperators.

Density operators are vectorized by column stacking,
``vec(rho) = rho.reshape(-1, order="F")``, so that
``vec(A rho B) = (B^T kron A) vec(rho)``. hbar is absorbed into the rate
units.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp

from .coupling import CouplingSet
from .errors import ConfigurationError, InvariantViolationError
from .model import EnsembleSpec, SchemeKind

INVARIANCE_TOL = 1e-14

STRONG_TRANSITIONS = {SchemeKind.D_THREE_LEVEL: (3,), SchemeKind.FOUR_LEVEL: (2, 3, 4)}
WEAK_TRANSITIONS = {SchemeKind.D_THREE_LEVEL: (1, 2), SchemeKind.FOUR_LEVEL: (1,)}


class Tag(enum.Enum):
    L0 = "L0"
    L1 = "L1"
    FULL = "Full"
    HCOND = "HcondPart"
    RESET = "ResetPart"
    INCOHERENT = "IncoherentPart"
    BLOCK = "Block"


@dataclass(frozen=True)
class Superoperator:
    matrix: sp.csr_matrix
    tag: Tag
    dim: int

    def __add__(self, other: "Superoperator") -> "Superoperator":
        return Superoperator((self.matrix + other.matrix).tocsr(), Tag.FULL, self.dim)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.dim)

    def with_tag(self, tag: Tag) -> "Superoperator":
        return Superoperator(self.matrix, tag, self.dim)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


def zero_superoperator(dim: int, tag: Tag) -> Superoperator:
    return Superoperator(sp.csr_matrix((dim * dim, dim * dim), dtype=complex), tag, dim)


def _ket_bra(d: int, upper: int, lower: int) -> sp.csr_matrix:
    m = sp.lil_matrix((d, d), dtype=complex)
    m[upper - 1, lower - 1] = 1.0
    return m.tocsr()


def embed(op: sp.spmatrix, atom: int, d: int, n: int) -> sp.csr_matrix:
    """Single-atom operator acting on ``atom`` (0-based) of an n-atom register."""
    out = sp.identity(1, dtype=complex, format="csr")
    for k in range(n):
        out = sp.kron(out, op if k == atom else sp.identity(d, dtype=complex), format="csr")
    return out


def raising(spec: EnsembleSpec, j: int, atom: int) -> sp.csr_matrix:
    """S_{atom, j}^+ on the n-atom product space."""
    upper, lower = spec.scheme.transitions[j]
    return embed(_ket_bra(spec.scheme.d, upper, lower), atom, spec.scheme.d, spec.n_atoms)


def lowering(spec: EnsembleSpec, j: int, atom: int) -> sp.csr_matrix:
    return raising(spec, j, atom).conj().T.tocsr()


def _left(a) -> sp.csr_matrix:
    return sp.kron(sp.identity(a.shape[0], dtype=complex), a, format="csr")


def _right(b) -> sp.csr_matrix:
    return sp.kron(b.T, sp.identity(b.shape[0], dtype=complex), format="csr")


def sandwich(a, b) -> sp.csr_matrix:
    """Superoperator of rho -> a rho b."""
    return sp.kron(b.T, a, format="csr")


def hamiltonian_superoperator(h) -> sp.csr_matrix:
    """rho -> -i (h rho - rho h^dagger) for a possibly non-Hermitian h."""
    h = sp.csr_matrix(h)
    return (-1j * _left(h) + 1j * _right(h.conj().T)).tocsr()


def _transition_hcond(spec: EnsembleSpec, couplings: CouplingSet, j: int) -> sp.csr_matrix:
    n, dim = spec.n_atoms, spec.dim
    a_j = spec.scheme.einstein[j]
    h = sp.csr_matrix((dim, dim), dtype=complex)
    if a_j:
        for k in range(n):
            h = h + a_j * (raising(spec, j, k) @ lowering(spec, j, k))
    for k in range(n):
        for l in range(k + 1, n):
            c = couplings.get(k, l, j)
            if c:
                h = h + c * (raising(spec, j, k) @ lowering(spec, j, l)
                             + raising(spec, j, l) @ lowering(spec, j, k))
    return (h / 2j).tocsr()


def _laser_hamiltonian(spec: EnsembleSpec, detuning: bool) -> sp.csr_matrix:
    s = spec.scheme
    h = sp.csr_matrix((spec.dim, spec.dim), dtype=complex)
    for k in range(spec.n_atoms):
        up, down = raising(spec, 3, k), lowering(spec, 3, k)
        h = h + 0.5 * s.rabi * (down + up)
        if detuning and s.detuning:
            h = h - s.detuning * (up @ down)
    return h.tocsr()


def build_hcond(spec: EnsembleSpec, couplings: CouplingSet, detuning: bool = True,
                transitions: Iterable[int] | None = None, laser: bool = True) -> np.ndarray:
    """Conditional (no-jump) Hamiltonian as a dense matrix.

    ``transitions`` selects which radiative damping terms are included
    (default all); ``laser`` toggles the Rabi/detuning part.
    """
    js = spec.scheme.transitions if transitions is None else transitions
    h = sp.csr_matrix((spec.dim, spec.dim), dtype=complex)
    for j in js:
        h = h + _transition_hcond(spec, couplings, j)
    if laser:
        h = h + _laser_hamiltonian(spec, detuning)
    return h.toarray()


def _transition_reset(spec: EnsembleSpec, couplings: CouplingSet, j: int) -> sp.csr_matrix:
    n = spec.n_atoms
    a_j = spec.scheme.einstein[j]
    out = sp.csr_matrix((spec.dim ** 2, spec.dim ** 2), dtype=complex)
    for k in range(n):
        if a_j:
            out = out + a_j * sandwich(lowering(spec, j, k), raising(spec, j, k))
        for l in range(k + 1, n):
            re_c = couplings.get(k, l, j).real
            if re_c:
                out = out + re_c * (sandwich(lowering(spec, j, k), raising(spec, j, l))
                                    + sandwich(lowering(spec, j, l), raising(spec, j, k)))
    return out.tocsr()


def build_reset(spec: EnsembleSpec, couplings: CouplingSet,
                transitions: Iterable[int] | None = None) -> Superoperator:
    """Jump (reset) map including the Re C cross terms."""
    js = spec.scheme.transitions if transitions is None else transitions
    out = zero_superoperator(spec.dim, Tag.RESET).matrix
    for j in js:
        out = out + _transition_reset(spec, couplings, j)
    return Superoperator(out.tocsr(), Tag.RESET, spec.dim)


def build_incoherent(spec: EnsembleSpec) -> Superoperator:
    """Incoherent pumping of the 1-4 transition in Lindblad form.

    The gain terms W (S+ rho S- + S- rho S+) come with the matching
    anticommutator losses so the piece is trace preserving on its own.
    """
    if spec.scheme.kind is not SchemeKind.FOUR_LEVEL:
        raise ConfigurationError("incoherent driving needs the four-level scheme")
    w = spec.scheme.incoherent_w
    out = zero_superoperator(spec.dim, Tag.INCOHERENT).matrix
    if w:
        for k in range(spec.n_atoms):
            up, down = raising(spec, 4, k), lowering(spec, 4, k)
            number = (down @ up + up @ down).tocsr()
            out = out + w * (sandwich(up, down) + sandwich(down, up))
            out = out - 0.5 * w * (_left(number) + _right(number))
    return Superoperator(out.tocsr(), Tag.INCOHERENT, spec.dim)


def _radiative_piece(spec: EnsembleSpec, couplings: CouplingSet, j: int) -> sp.csr_matrix:
    return (hamiltonian_superoperator(_transition_hcond(spec, couplings, j))
            + _transition_reset(spec, couplings, j)).tocsr()


def _laser_piece(spec: EnsembleSpec, detuning: bool) -> sp.csr_matrix:
    return hamiltonian_superoperator(_laser_hamiltonian(spec, detuning))


def build_full(spec: EnsembleSpec, couplings: CouplingSet, detuning: bool = True) -> Superoperator:
    l0, l1 = split_generator(spec, couplings, detuning)
    return Superoperator((l0.matrix + l1.matrix).tocsr(), Tag.FULL, spec.dim)


class SplitGenerator(NamedTuple):
    L0: Superoperator
    L1: Superoperator


def split_generator(spec: EnsembleSpec, couplings: CouplingSet, detuning: bool = True) -> SplitGenerator:
    """Split L = L0 + L1 into strong and weak parts.

    L0 holds the laser, A3 and C^(3); for the four-level scheme also the
    decays of level 4 (A2, A4 and their couplings). L1 holds A1 and its
    coupling, plus A2/C^(2) for the D scheme or the incoherent pumping W
    for the four-level scheme.
    """
    kind = spec.scheme.kind
    dim = spec.dim
    l0 = _laser_piece(spec, detuning)
    for j in STRONG_TRANSITIONS[kind]:
        l0 = l0 + _radiative_piece(spec, couplings, j)
    l1 = sp.csr_matrix((dim * dim, dim * dim), dtype=complex)
    for j in WEAK_TRANSITIONS[kind]:
        l1 = l1 + _radiative_piece(spec, couplings, j)
    if kind is SchemeKind.FOUR_LEVEL:
        l1 = l1 + build_incoherent(spec).matrix
    l0 = sp.csr_matrix(l0)
    l1 = sp.csr_matrix(l1)
    l0.eliminate_zeros()
    l1.eliminate_zeros()
    return SplitGenerator(Superoperator(l0, Tag.L0, dim), Superoperator(l1, Tag.L1, dim))


def liouville_indices(subspace: Sequence[int], dim: int) -> np.ndarray:
    sub = np.asarray(subspace, dtype=int)
    return (sub[:, None] + dim * sub[None, :]).reshape(-1, order="F")


def restrict_to_subspace(op: Superoperator, subspace: Sequence[int],
                         tol: float = INVARIANCE_TOL) -> Superoperator:
    """Block of ``op`` acting on operators supported on ``subspace``.

    Raises InvariantViolationError if ``op`` maps such operators outside
    the block.
    """
    dim = op.dim
    block = liouville_indices(subspace, dim)
    mask = np.zeros(dim * dim, dtype=bool)
    mask[block] = True
    cols = op.matrix.tocsc()[:, block]
    leak = cols[~mask, :]
    if leak.nnz and np.max(np.abs(leak.data)) >= tol:
        raise InvariantViolationError(
            f"subspace of size {len(subspace)} is not invariant "
            f"(largest leaking element {np.max(np.abs(leak.data)):.3e})")
    return Superoperator(cols[block, :].tocsr(), Tag.BLOCK, len(subspace))


def write_triplets(op: Superoperator, path, tol: float = 0.0) -> None:
    """Dump ``op`` as 'row col re im' lines (0-based, column-stacked vec)."""
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        fh.write(f"# superoperator {op.tag.value} dim={op.dim} vec=column-stacked\n")
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            if abs(v) > tol:
                fh.write(f"{r} {c} {v.real:.17g} {v.imag:.17g}\n")


def read_triplets(path) -> Superoperator:
    rows, cols, vals = [], [], []
    dim = None
    tag = Tag.FULL
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                for tok in line.split():
                    if tok.startswith("dim="):
                        dim = int(tok[4:])
                parts = line.split()
                if len(parts) > 2:
                    tag = Tag(parts[2])
                continue
            r, c, re, im = line.split()
            rows.append(int(r))
            cols.append(int(c))
            vals.append(float(re) + 1j * float(im))
    if dim is None:
        raise ValueError("missing dim header")
    m = sp.csr_matrix((vals, (rows, cols)), shape=(dim * dim, dim * dim), dtype=complex)
    return Superoperator(m, tag, dim)
