"""Real Jordan canonical form and the transforms linking it to the complex form.

A real matrix is written ``A = R J_R R^{-1}`` where ``J_R`` is block diagonal:
ordinary Jordan blocks for real eigenvalues first, then blocks ``C_k(lam)``
for complex-conjugate pairs. ``C_k(lam)`` has ``2x2`` diagonal blocks
``[[Re, Im], [-Im, Re]]`` and identities on the block superdiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .eigen import (
    DistinctEigenvalue,
    SpectrumError,
    SpectrumSummary,
    analyze_spectrum,
)
from .matcore import (
    DEFAULT_TOL,
    Tolerance,
    as_real_matrix,
    direct_sum,
    inf_norm,
    jordan_block,
    mat_inv,
)


class DecompositionError(np.linalg.LinAlgError):
    """The real Jordan decomposition could not be built or validated."""


@dataclass(frozen=True)
class RealEigenBlock:
    """Jordan block ``J_size(lam)`` for a real eigenvalue."""

    lam: float
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("block size must be >= 1")

    @property
    def dim(self) -> int:
        return self.size

    def matrix(self) -> np.ndarray:
        return jordan_block(float(self.lam), self.size)


@dataclass(frozen=True)
class ComplexPairBlock:
    """Block ``C_size(lam)`` of order ``2 * size``.

    ``lam`` has positive imaginary part, except for blocks produced by
    pairing two equal-size Jordan blocks of a negative eigenvalue, where
    ``lam`` is real and negative.
    """

    lam: complex
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("block size must be >= 1")
        lam = complex(self.lam)
        if lam.imag < 0 or (lam.imag == 0 and lam.real >= 0):
            raise ValueError("pair block needs Im(lam) > 0 or a negative real lam")
        object.__setattr__(self, "lam", lam)

    @property
    def dim(self) -> int:
        return 2 * self.size

    @property
    def is_paired_negative(self) -> bool:
        return self.lam.imag == 0

    def matrix(self) -> np.ndarray:
        return complex_pair_block(self.lam, self.size)


Block = Union[RealEigenBlock, ComplexPairBlock]


def complex_pair_block(lam: complex, k: int) -> np.ndarray:
    """The real ``2k x 2k`` block ``C_k(lam)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lam = complex(lam)
    c = np.array([[lam.real, lam.imag], [-lam.imag, lam.real]])
    out = np.kron(np.eye(k), c) + np.kron(np.eye(k, k=1), np.eye(2))
    return out


def pairing_similarity(k: int) -> np.ndarray:
    """``S_k``: direct sum of ``k`` copies of ``[[-i, -i], [1, -1]]``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    s = np.array([[-1j, -1j], [1, -1]], dtype=np.complex128)
    return np.kron(np.eye(k), s)


def pairing_similarity_inv(k: int) -> np.ndarray:
    s_inv = 0.5 * np.array([[1j, 1], [1j, -1]], dtype=np.complex128)
    return np.kron(np.eye(k), s_inv)


def interleave_permutation(k: int) -> np.ndarray:
    """``P_k`` with columns ``e1, e3, ..., e_{2k-1}, e2, e4, ..., e_{2k}``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    order = list(range(0, 2 * k, 2)) + list(range(1, 2 * k, 2))
    return np.eye(2 * k)[:, order]


def realize(blocks) -> np.ndarray:
    """Block-diagonal ``J_R`` for an ordered block list."""
    return direct_sum(*[b.matrix() for b in blocks])


@dataclass(frozen=True)
class RealJordanDecomposition:
    """``A = R @ J_R @ R_inv`` with ``J_R`` described by ``blocks``."""

    R: np.ndarray
    R_inv: np.ndarray
    blocks: tuple[Block, ...]
    summary: SpectrumSummary
    residual: float = field(default=0.0, compare=False)

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @property
    def J(self) -> np.ndarray:
        return realize(self.blocks)

    @property
    def real_blocks(self) -> list[RealEigenBlock]:
        return [b for b in self.blocks if isinstance(b, RealEigenBlock)]

    @property
    def pair_blocks(self) -> list[ComplexPairBlock]:
        return [b for b in self.blocks if isinstance(b, ComplexPairBlock)]

    @property
    def is_singular(self) -> bool:
        return any(isinstance(b, RealEigenBlock) and b.lam == 0 for b in self.blocks)

    @property
    def is_derogatory(self) -> bool:
        seen = set()
        for b in self.blocks:
            if isinstance(b, ComplexPairBlock) and b.is_paired_negative:
                return True
            key = _block_key(b)
            if key in seen:
                return True
            seen.add(key)
        return False

    def offsets(self) -> list[int]:
        out, pos = [], 0
        for b in self.blocks:
            out.append(pos)
            pos += b.dim
        return out

    def reconstruct(self) -> np.ndarray:
        return self.R @ self.J @ self.R_inv


def _block_key(b: Block) -> tuple:
    """Blocks with equal keys share an eigenvalue (paired negatives count as lam)."""
    lam = complex(b.lam)
    return (round(lam.real, 12), round(abs(lam.imag), 12))


def _check_reconstruction(a: np.ndarray, R: np.ndarray, R_inv: np.ndarray, blocks, bound: float) -> float:
    resid = inf_norm(a - R @ realize(blocks) @ R_inv)
    if resid > bound:
        raise DecompositionError(f"reconstruction residual {resid:.3e} exceeds {bound:.3e}")
    return resid


def _orth(m: np.ndarray, rank: int | None = None) -> np.ndarray:
    if m.shape[1] == 0:
        return m
    u, sv, _ = np.linalg.svd(m, full_matrices=False)
    if rank is None:
        rank = int(np.sum(sv > 1e-10 * max(1.0, sv[0])))
    return u[:, :rank]


def _null_space(m: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the ``dim`` right singular vectors with smallest singular values."""
    if dim == 0:
        return np.zeros((m.shape[1], 0), dtype=m.dtype)
    _, _, vh = np.linalg.svd(m)
    return vh[-dim:].conj().T


def jordan_chains(a: np.ndarray, lam: complex, blocks: tuple[int, ...]) -> list[np.ndarray]:
    """Jordan chains of ``a`` at ``lam`` for the given block sizes.

    Each chain is returned as an ``n x k`` matrix ``[z_1, ..., z_k]`` with
    ``(A - lam I) z_1 = 0`` and ``(A - lam I) z_{i+1} = z_i``. Chains are grown
    top-down: for each size the top vectors are chosen in ``ker N^k``
    complementary to ``ker N^(k-1)`` and to the images of longer chains.
    """
    n = a.shape[0]
    complex_lam = complex(lam).imag != 0
    dtype = np.complex128 if complex_lam else np.float64
    lam_v = complex(lam) if complex_lam else complex(lam).real
    N = (a - lam_v * np.eye(n)).astype(dtype)
    m = max(blocks)
    # dim ker N^k = number of block entries at depth <= k
    kernel_dim = [sum(min(b, k) for b in blocks) for k in range(m + 1)]
    powers = [np.eye(n, dtype=dtype)]
    for _ in range(m):
        powers.append(powers[-1] @ N)
    kernels = [_null_space(powers[k], kernel_dim[k]) for k in range(m + 1)]

    tops: list[tuple[np.ndarray, int]] = []
    for k in range(m, 0, -1):
        count = blocks.count(k)
        if count == 0:
            continue
        spans = [kernels[k - 1]] + [powers[size - k] @ v[:, None] for v, size in tops]
        W = np.hstack(spans) if spans else np.zeros((n, 0), dtype=dtype)
        Q = _orth(W, rank=kernel_dim[k - 1] + len(tops))
        B = kernels[k]
        B_perp = B - Q @ (Q.conj().T @ B)
        u, sv, _ = np.linalg.svd(B_perp, full_matrices=False)
        if len(sv) < count or sv[count - 1] < 1e-8:
            raise DecompositionError(f"chain extraction failed for eigenvalue {complex(lam):.6g}")
        for i in range(count):
            tops.append((u[:, i], k))

    chains = []
    for v, size in tops:
        cols = [powers[size - 1 - i] @ v for i in range(size)]
        chains.append(np.column_stack(cols))
    return chains


def _normalize_real_chain(chain: np.ndarray) -> np.ndarray:
    z1 = chain[:, 0]
    scale = np.sum(np.abs(z1))
    sign = 1.0 if z1[np.argmax(np.abs(z1))] > 0 else -1.0
    return chain * (sign / scale)


def _normalize_complex_chain(chain: np.ndarray) -> np.ndarray:
    z1 = chain[:, 0]
    pivot = z1[np.argmax(np.abs(z1))]
    return chain * (abs(pivot) / pivot) / np.linalg.norm(z1)


def real_jordan_decompose(a, tol: Tolerance = DEFAULT_TOL, summary: SpectrumSummary | None = None,
                          residual_rtol: float = 1e-6) -> RealJordanDecomposition:
    """Numerical real Jordan decomposition of a real matrix.

    Real eigenvalues come first in descending order, then conjugate pairs
    (represented by the member with positive imaginary part) by descending
    modulus. Eigenvector columns of real blocks are scaled to unit 1-norm with
    the largest component positive, so for a matrix with a positive Perron
    vector the first column of ``R`` is that vector.

    Raises
    ------
    DecompositionError
        If chain extraction fails or ``||A - R J_R R^{-1}||_inf`` exceeds
        ``residual_rtol * ||A||_inf``.
    """
    a = as_real_matrix(a, name="a")
    if summary is None or summary.t is None:
        summary = analyze_spectrum(a, tol)
    cols, blocks = [], []
    for e in summary.eigenvalues:
        if e.value.imag < 0:
            continue
        try:
            chains = jordan_chains(a, e.value, e.blocks)
        except np.linalg.LinAlgError as exc:
            raise DecompositionError(f"eigenvalue {e.value:.6g}: {exc}") from exc
        for chain, size in zip(chains, e.blocks):
            if e.is_real:
                chain = _normalize_real_chain(np.real(chain))
                cols.append(chain)
                blocks.append(RealEigenBlock(float(e.value.real), size))
            else:
                chain = _normalize_complex_chain(chain)
                interleaved = np.empty((a.shape[0], 2 * size))
                interleaved[:, 0::2] = chain.real
                interleaved[:, 1::2] = chain.imag
                cols.append(interleaved)
                blocks.append(ComplexPairBlock(e.value, size))
    order = sorted(range(len(blocks)), key=lambda i: isinstance(blocks[i], ComplexPairBlock))
    blocks = [blocks[i] for i in order]
    R = np.hstack([cols[i] for i in order])
    try:
        R_inv = mat_inv(R, tol)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"Jordan basis is singular: {exc}") from exc
    bound = residual_rtol * max(1.0, inf_norm(a))
    resid = _check_reconstruction(a, R, R_inv, blocks, bound)
    return RealJordanDecomposition(R, R_inv, tuple(blocks), summary, resid)


def _summary_from_blocks(blocks) -> SpectrumSummary:
    groups: dict[complex, list[int]] = {}
    for b in blocks:
        lam = complex(b.lam)
        if isinstance(b, ComplexPairBlock) and b.is_paired_negative:
            groups.setdefault(lam, []).extend([b.size, b.size])
            continue
        groups.setdefault(lam, []).append(b.size)
        if isinstance(b, ComplexPairBlock):
            groups.setdefault(lam.conjugate(), []).append(b.size)
    distinct = [
        DistinctEigenvalue(v, sum(sizes), tuple(sorted(sizes, reverse=True)))
        for v, sizes in groups.items()
    ]
    distinct.sort(key=lambda e: (e.value.imag != 0, -e.value.real if e.value.imag == 0 else -abs(e.value),
                                 -e.value.imag))
    return SpectrumSummary(tuple(distinct))


def from_factorization(a, R, blocks, tol: Tolerance = DEFAULT_TOL, residual_atol: float = 1e-12) -> RealJordanDecomposition:
    """Trust an explicit ``(R, blocks)`` pair after validating the reconstruction.

    The residual bound is ``residual_atol * max(1, ||A||_inf)``.
    """
    a = as_real_matrix(a, name="a")
    R = as_real_matrix(R, name="R")
    blocks = tuple(blocks)
    if R.shape != a.shape:
        raise DecompositionError(f"R has shape {R.shape}, A has shape {a.shape}")
    if sum(b.dim for b in blocks) != a.shape[0]:
        raise DecompositionError("block dimensions do not add up to the matrix order")
    seen_pair = False
    for b in blocks:
        if isinstance(b, ComplexPairBlock):
            seen_pair = True
        elif seen_pair:
            raise DecompositionError("real-eigenvalue blocks must precede complex-pair blocks")
    R_inv = mat_inv(R, tol)
    bound = residual_atol * max(1.0, inf_norm(a))
    resid = _check_reconstruction(a, R, R_inv, blocks, bound)
    return RealJordanDecomposition(R, R_inv, blocks, _summary_from_blocks(blocks), resid)


def negative_pairing(decomp: RealJordanDecomposition, p: int) -> RealJordanDecomposition:
    """Fuse equal-size Jordan blocks of negative eigenvalues into ``C_k(lam)`` blocks.

    For even ``p`` every pair ``J_k(lam) + J_k(lam)`` (lam < 0) becomes
    ``C_k(lam) = P_k [J_k(lam) + J_k(lam)] P_k^T`` and the matching columns of
    ``R`` are permuted by ``P_k^T``. Odd ``p`` returns ``decomp`` unchanged.

    Raises
    ------
    DecompositionError
        If some negative eigenvalue has an odd number of blocks of some size.
    """
    if p % 2:
        return decomp
    offsets = decomp.offsets()
    pending: dict[tuple[float, int], list[int]] = {}
    for idx, (b, off) in enumerate(zip(decomp.blocks, offsets)):
        if isinstance(b, RealEigenBlock) and b.lam < 0:
            pending.setdefault((b.lam, b.size), []).append(idx)
    for key, idxs in pending.items():
        if len(idxs) % 2:
            raise DecompositionError(
                f"negative eigenvalue {key[0]:.6g} has an odd number of Jordan blocks of size {key[1]}"
            )
    paired_cols, paired_blocks = [], []
    for (lam, size), idxs in pending.items():
        P = interleave_permutation(size)
        for first, second in zip(idxs[0::2], idxs[1::2]):
            cols = np.hstack([
                decomp.R[:, offsets[first]:offsets[first] + size],
                decomp.R[:, offsets[second]:offsets[second] + size],
            ])
            paired_cols.append(cols @ P.T)
            paired_blocks.append(ComplexPairBlock(complex(lam, 0.0), size))
    paired = {i for idxs in pending.values() for i in idxs}
    keep_cols, keep_blocks, pair_part, pair_part_blocks = [], [], [], []
    for idx, (b, off) in enumerate(zip(decomp.blocks, offsets)):
        if idx in paired:
            continue
        block_cols = decomp.R[:, off:off + b.dim]
        if isinstance(b, RealEigenBlock):
            keep_cols.append(block_cols)
            keep_blocks.append(b)
        else:
            pair_part.append(block_cols)
            pair_part_blocks.append(b)
    R = np.hstack(keep_cols + paired_cols + pair_part)
    blocks = tuple(keep_blocks + paired_blocks + pair_part_blocks)
    return RealJordanDecomposition(R, mat_inv(R), blocks, decomp.summary, decomp.residual)
