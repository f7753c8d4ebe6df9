"""p-th-root branches on Jordan blocks and assembly of full roots.

A primary root applies one branch per distinct eigenvalue; a nonprimary root
of a derogatory matrix uses different branches on blocks sharing an
eigenvalue and is conjugated by a matrix ``U`` from the commutant of ``J_R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import perron
from .branches import (
    branch_derivative,
    conjugate_branch_condition,
    negative_axis_branch_condition,
    real_branches,
)
from .matcore import DEFAULT_TOL, Tolerance, as_real_matrix, direct_sum, mat_inv, mat_power, max_entry
from .rjcf import (
    ComplexPairBlock,
    RealEigenBlock,
    RealJordanDecomposition,
    _block_key,
    interleave_permutation,
    pairing_similarity,
    pairing_similarity_inv,
)

IMAG_TRUNCATION = 1e-12
COMMUTE_TOL = 1e-10
MAX_COMMUTANT_DRAWS = 16


class AssignmentError(ValueError):
    """A branch assignment does not fit the decomposition or the requested root kind."""


@dataclass(frozen=True)
class BranchAssignment:
    """Branch indices per block, in decomposition order.

    ``real_indices`` has one entry per real-eigenvalue block and
    ``pair_indices`` one ``(j1, j2)`` tuple per complex-pair block.
    """

    real_indices: tuple[int, ...]
    pair_indices: tuple[tuple[int, int], ...]
    p: int
    primary: bool = True

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 2:
            raise AssignmentError(f"p must be an integer >= 2, got {self.p}")
        object.__setattr__(self, "real_indices", tuple(int(j) for j in self.real_indices))
        object.__setattr__(self, "pair_indices", tuple((int(a), int(b)) for a, b in self.pair_indices))
        flat = list(self.real_indices) + [j for pair in self.pair_indices for j in pair]
        if any(not 0 <= j < self.p for j in flat):
            raise AssignmentError(f"branch indices must lie in 0..{self.p - 1}")

    def as_tuple(self) -> tuple:
        return self.real_indices + self.pair_indices

    def __str__(self) -> str:
        parts = [str(j) for j in self.real_indices] + [f"({a},{b})" for a, b in self.pair_indices]
        return "(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class CommutantParameter:
    """A real nonsingular ``U`` commuting with ``J_R``."""

    U: np.ndarray
    seed: int | None = None


@dataclass
class RootReport:
    """A candidate root with its residual and certificates.

    ``residual`` is ``max|X^p - A|`` recomputed from ``X``. ``witness_exponent``
    is the power index found for ``X`` (``None`` if not certified or the cap
    was exceeded).
    """

    X: np.ndarray
    assignment: BranchAssignment
    residual: float
    is_real: bool
    is_eventually_positive: bool | None = None
    witness_exponent: int | None = None
    is_eventually_stochastic: bool | None = None
    seed: int | None = field(default=None)


def branch_on_jordan_block(lam: complex, k: int, p: int, j: int) -> np.ndarray:
    """Upper-triangular Toeplitz ``f_j(J_k(lam))`` with entries ``f_j^(d)(lam)/d!``."""
    if complex(lam) == 0:
        raise ValueError("p-th root branches are undefined at 0")
    if k < 1:
        raise ValueError("block size must be >= 1")
    out = np.zeros((k, k), dtype=np.complex128)
    for d in range(k):
        val = branch_derivative(lam, p, j, d) / math.factorial(d)
        out += val * np.eye(k, k=d)
    return out


def _truncate_if_real(m: np.ndarray, flagged: bool) -> np.ndarray:
    if not flagged:
        return m
    thresh = IMAG_TRUNCATION * max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m.imag)) <= thresh:
        return np.ascontiguousarray(m.real)
    return m


def branch_pair_on_complex_block(lam: complex, k: int, p: int, pair: tuple[int, int]) -> np.ndarray:
    """``S_k P_k [f_j1(J_k(lam)) + f_j2(J_k(conj lam))] P_k^T S_k^{-1}``.

    The result is returned as a real array when the conjugacy condition for the
    pair holds (``j1 + j2 = 0 mod p`` for non-real ``lam``, ``j1 + j2 = p - 1``
    for negative real ``lam``) and the imaginary residue is negligible;
    otherwise it stays complex.
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("p-th root branches are undefined at 0")
    j1, j2 = pair
    inner = direct_sum(branch_on_jordan_block(lam, k, p, j1),
                       branch_on_jordan_block(lam.conjugate(), k, p, j2))
    P = interleave_permutation(k)
    out = pairing_similarity(k) @ P @ inner @ P.T @ pairing_similarity_inv(k)
    if lam.imag != 0:
        flagged = conjugate_branch_condition(j1, j2, p)
    elif lam.real < 0:
        flagged = negative_axis_branch_condition(j1, j2, p)
    else:
        flagged = j1 == j2 and j1 in real_branches(lam.real, p)
    return _truncate_if_real(out, flagged)


def block_functions(decomp: RealJordanDecomposition, assignment: BranchAssignment) -> np.ndarray:
    """Block-diagonal matrix of branch functions, in ``J_R`` coordinates."""
    real_blocks, pair_blocks = decomp.real_blocks, decomp.pair_blocks
    if len(assignment.real_indices) != len(real_blocks) or len(assignment.pair_indices) != len(pair_blocks):
        raise AssignmentError(
            f"assignment shape ({len(assignment.real_indices)}, {len(assignment.pair_indices)}) does not match "
            f"decomposition ({len(real_blocks)} real, {len(pair_blocks)} pair blocks)"
        )
    p = assignment.p
    parts = []
    ri = pi = 0
    for b in decomp.blocks:
        if b.lam == 0:
            raise AssignmentError("singular eigenvalue present; use singular_root_report")
        if isinstance(b, RealEigenBlock):
            j = assignment.real_indices[ri]
            ri += 1
            f = branch_on_jordan_block(b.lam, b.size, p, j)
            parts.append(_truncate_if_real(f, j in real_branches(b.lam, p)))
        else:
            pair = assignment.pair_indices[pi]
            pi += 1
            parts.append(branch_pair_on_complex_block(b.lam, b.size, p, pair))
    return direct_sum(*parts)


def _groups(decomp: RealJordanDecomposition, assignment: BranchAssignment) -> dict:
    """Branch choices seen per distinct eigenvalue."""
    seen: dict[tuple, set] = {}
    it_real = iter(assignment.real_indices)
    it_pair = iter(assignment.pair_indices)
    for b in decomp.blocks:
        j = next(it_real) if isinstance(b, RealEigenBlock) else next(it_pair)
        if isinstance(b, ComplexPairBlock) and b.is_paired_negative:
            # the two underlying Jordan blocks carry j1 and j2
            seen.setdefault(_block_key(b), set()).update(j)
            continue
        seen.setdefault(_block_key(b), set()).add(j)
    return seen


def is_primary_choice(decomp: RealJordanDecomposition, assignment: BranchAssignment) -> bool:
    """True when all blocks sharing an eigenvalue carry identical indices."""
    return all(len(v) == 1 for v in _groups(decomp, assignment).values())


def _residual(X: np.ndarray, A: np.ndarray, p: int) -> float:
    return max_entry(mat_power(X, p) - A)


def _finalize(X: np.ndarray) -> tuple[np.ndarray, bool]:
    if not np.iscomplexobj(X):
        return X, True
    thresh = IMAG_TRUNCATION * max(1.0, float(np.max(np.abs(X))))
    if np.max(np.abs(X.imag)) <= thresh:
        return np.ascontiguousarray(X.real), True
    return X, False


def certify(report: RootReport, tol: Tolerance = DEFAULT_TOL, stochastic: bool = False,
            cap: int | None = None) -> RootReport:
    """Fill the eventual-positivity (and optionally stochasticity) certificates."""
    if not report.is_real:
        report.is_eventually_positive = False
        if stochastic:
            report.is_eventually_stochastic = False
        return report
    X = report.X
    report.is_eventually_positive = perron.is_eventually_positive(X, tol)
    if report.is_eventually_positive:
        n = X.shape[0]
        res = perron.power_index(X, cap if cap is not None else max(10_000, 4 * n * n), tol)
        report.witness_exponent = res.index
    if stochastic:
        report.is_eventually_stochastic = perron.is_eventually_stochastic(X, tol, cap)
    return report


def assemble_primary_root(decomp: RealJordanDecomposition, assignment: BranchAssignment,
                          tol: Tolerance = DEFAULT_TOL, certified: bool = True,
                          stochastic: bool = False) -> RootReport:
    """Primary root ``X = R F R^{-1}`` for a branch assignment.

    Raises
    ------
    AssignmentError
        If a zero eigenvalue is present, or blocks sharing an eigenvalue
        carry different branches.
    """
    if not assignment.primary:
        raise AssignmentError("assignment is flagged nonprimary")
    if not is_primary_choice(decomp, assignment):
        raise AssignmentError("primary roots need identical branches on blocks sharing an eigenvalue")
    F = block_functions(decomp, assignment)
    X, is_real = _finalize(decomp.R @ F @ decomp.R_inv)
    report = RootReport(X, assignment, _residual(X, decomp.reconstruct(), assignment.p), is_real)
    if certified:
        certify(report, tol, stochastic)
    return report


def commutator_norm(U: np.ndarray, J: np.ndarray) -> float:
    return max_entry(U @ J - J @ U)


def assemble_nonprimary_root(decomp: RealJordanDecomposition, assignment: BranchAssignment,
                             u: CommutantParameter | np.ndarray, tol: Tolerance = DEFAULT_TOL,
                             certified: bool = True, stochastic: bool = False) -> RootReport:
    """Nonprimary root ``X = R U F U^{-1} R^{-1}``.

    Raises
    ------
    AssignmentError
        If ``decomp`` is not derogatory or the assignment is actually primary.
    ValueError
        If ``U`` does not commute with ``J_R`` or is singular.
    """
    if not decomp.is_derogatory:
        raise AssignmentError("nonprimary roots exist only for derogatory matrices")
    if is_primary_choice(decomp, assignment):
        raise AssignmentError("assignment uses one branch per eigenvalue; it is primary")
    param = u if isinstance(u, CommutantParameter) else CommutantParameter(as_real_matrix(u, name="U"))
    U = param.U
    J = decomp.J
    scale = max(1.0, max_entry(U)) * max(1.0, max_entry(J))
    if commutator_norm(U, J) > COMMUTE_TOL * scale:
        raise ValueError("U does not commute with J_R")
    U_inv = mat_inv(U, tol)
    F = block_functions(decomp, assignment)
    X, is_real = _finalize(decomp.R @ U @ F @ U_inv @ decomp.R_inv)
    nonprimary = BranchAssignment(assignment.real_indices, assignment.pair_indices, assignment.p, primary=False)
    report = RootReport(X, nonprimary, _residual(X, decomp.reconstruct(), assignment.p), is_real, seed=param.seed)
    if certified:
        certify(report, tol, stochastic)
    return report


def commutant_basis(J: np.ndarray) -> np.ndarray:
    """Basis (as ``n x n x d`` array) of real matrices commuting with ``J``.

    Solves ``(J^T kron I - I kron J) vec(U) = 0`` with column-stacked ``vec``.
    """
    n = J.shape[0]
    I = np.eye(n)
    M = np.kron(J.T, I) - np.kron(I, J)
    _, sv, vh = np.linalg.svd(M)
    rank = int(np.sum(sv > 1e-10 * max(1.0, sv[0])))
    null = vh[rank:].T
    return null.reshape(n, n, -1, order="F")


def sample_commutant(decomp: RealJordanDecomposition, seed: int, tol: Tolerance = DEFAULT_TOL) -> CommutantParameter:
    """Seeded random nonsingular element of the commutant of ``J_R``.

    Raises
    ------
    np.linalg.LinAlgError
        If 16 draws in a row are singular.
    """
    basis = commutant_basis(decomp.J)
    rng = np.random.default_rng(seed)
    J = decomp.J
    for _ in range(MAX_COMMUTANT_DRAWS):
        coeffs = rng.standard_normal(basis.shape[2])
        U = np.tensordot(basis, coeffs, axes=([2], [0]))
        # the basis is exact up to roundoff; clean entries the structure forces to zero
        U[np.abs(U) < 1e-14 * max(1.0, max_entry(U))] = 0.0
        try:
            mat_inv(U, tol)
        except np.linalg.LinAlgError:
            continue
        if commutator_norm(U, J) <= COMMUTE_TOL * max(1.0, max_entry(U)) * max(1.0, max_entry(J)):
            return CommutantParameter(U, seed)
    raise np.linalg.LinAlgError(
        f"no nonsingular commutant element after {MAX_COMMUTANT_DRAWS} draws (basis dimension {basis.shape[2]})"
    )


def principal_assignment(decomp: RealJordanDecomposition, p: int) -> BranchAssignment:
    """Branch 0 everywhere: the principal root when no eigenvalue is negative."""
    return BranchAssignment((0,) * len(decomp.real_blocks), ((0, 0),) * len(decomp.pair_blocks), p)


def real_assignment(decomp: RealJordanDecomposition, p: int) -> BranchAssignment:
    """One assignment producing a real root, or raise if none exists for these blocks.

    Positive eigenvalues take branch 0, negative ones ``(p-1)/2`` (odd p),
    pairs ``(0, 0)`` and paired negative blocks ``(0, p-1)``.
    """
    real = []
    for b in decomp.real_blocks:
        choices = real_branches(b.lam, p)
        if not choices:
            raise AssignmentError(f"eigenvalue {b.lam:g} has no real branch for p={p}; pair its blocks first")
        real.append(choices[0])
    pairs = [(0, p - 1) if b.is_paired_negative else (0, 0) for b in decomp.pair_blocks]
    primary = not any(b.is_paired_negative for b in decomp.pair_blocks)
    return BranchAssignment(tuple(real), tuple(pairs), p, primary)


@dataclass
class SingularRootReport:
    """Outcome for a matrix with zero eigenvalues.

    ``exists`` is the ascent-sequence verdict on the singular part. ``root`` is
    filled only when the singular part is the zero matrix.
    """

    exists: bool
    ascent: tuple[int, ...]
    root: RootReport | None
    constructed: bool
    message: str


def singular_root_report(decomp: RealJordanDecomposition, p: int, assignment: BranchAssignment | None = None,
                         tol: Tolerance = DEFAULT_TOL) -> SingularRootReport:
    """Existence verdict and, for a zero singular part, a root ``0 + X_1``.

    ``assignment`` covers only the nonsingular blocks; by default a real
    assignment is tried, falling back to the principal one.
    """
    from .eigen import ascent_condition, ascent_sequence

    zero_idx = [i for i, b in enumerate(decomp.blocks) if isinstance(b, RealEigenBlock) and b.lam == 0]
    if not zero_idx:
        return SingularRootReport(True, (), None, False, "matrix is nonsingular; use the primary/nonprimary assembly")
    J0 = direct_sum(*[decomp.blocks[i].matrix() for i in zero_idx])
    d = ascent_sequence(J0, tol).d
    exists = ascent_condition(d, p)
    if not exists:
        return SingularRootReport(False, d, None, False, "ascent sequence rules out any p-th root")
    if any(decomp.blocks[i].size > 1 for i in zero_idx):
        return SingularRootReport(True, d, None, False,
                                  "a root exists, but construction for a nonzero nilpotent part is not supported")
    rest_blocks = tuple(b for i, b in enumerate(decomp.blocks) if i not in zero_idx)
    offsets = decomp.offsets()
    keep = [c for i, b in enumerate(decomp.blocks) if i not in zero_idx for c in range(offsets[i], offsets[i] + b.dim)]
    if not rest_blocks:
        X = np.zeros((decomp.n, decomp.n))
        empty = BranchAssignment((), (), p)
        return SingularRootReport(True, d, RootReport(X, empty, _residual(X, decomp.reconstruct(), p), True),
                                  True, "zero matrix")
    sub = RealJordanDecomposition(np.eye(len(keep)), np.eye(len(keep)), rest_blocks, decomp.summary)
    if assignment is None:
        try:
            assignment = real_assignment(sub, p)
        except AssignmentError:
            assignment = principal_assignment(sub, p)
    F1 = block_functions(sub, assignment)
    F = np.zeros((decomp.n, decomp.n), dtype=F1.dtype)
    F[np.ix_(keep, keep)] = F1
    X, is_real = _finalize(decomp.R @ F @ decomp.R_inv)
    report = RootReport(X, assignment, _residual(X, decomp.reconstruct(), p), is_real)
    return SingularRootReport(True, d, report, True, "root constructed as 0 + X1")
