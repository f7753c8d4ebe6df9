"""Spectra, eigenvalue clustering, Jordan structure and ascent sequences.

Jordan structure is discontinuous in the matrix entries, so every decision
here goes through explicit thresholds: eigenvalues closer than
``cluster_eps`` are merged, and singular values below ``rank_eps`` (relative
to the natural scale of the power being tested) count as zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .matcore import DEFAULT_TOL, Tolerance, as_matrix, as_real_matrix, inf_norm

RANK_EPS = 1e-10


class SpectrumError(np.linalg.LinAlgError):
    """Clustering or rank analysis produced an inconsistent picture."""


@dataclass(frozen=True)
class DistinctEigenvalue:
    """One distinct eigenvalue with its algebraic multiplicity.

    ``blocks`` holds the Jordan block sizes (descending) once the Jordan
    structure is known, otherwise it is empty.
    """

    value: complex
    multiplicity: int
    blocks: tuple[int, ...] = ()

    @property
    def index(self) -> int | None:
        return max(self.blocks) if self.blocks else None

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0

    @property
    def is_zero(self) -> bool:
        return self.value == 0


@dataclass(frozen=True)
class SpectrumSummary:
    """Distinct eigenvalues plus the counts used by the root-counting formulas.

    Complex eigenvalues appear once per member of a conjugate pair, so
    ``s = r1 + r2 + (1 if zero is an eigenvalue) + 2 * c``.
    """

    eigenvalues: tuple[DistinctEigenvalue, ...]
    cluster_eps: float = 0.0

    @property
    def n(self) -> int:
        return sum(e.multiplicity for e in self.eigenvalues)

    @property
    def s(self) -> int:
        return len(self.eigenvalues)

    @property
    def t(self) -> int | None:
        if any(not e.blocks for e in self.eigenvalues):
            return None
        return sum(len(e.blocks) for e in self.eigenvalues)

    @property
    def r1(self) -> int:
        return sum(1 for e in self.eigenvalues if e.is_real and e.value.real > 0)

    @property
    def r2(self) -> int:
        return sum(1 for e in self.eigenvalues if e.is_real and e.value.real < 0)

    @property
    def c(self) -> int:
        return sum(1 for e in self.eigenvalues if e.value.imag > 0)

    @property
    def is_singular(self) -> bool:
        return any(e.is_zero for e in self.eigenvalues)

    @property
    def is_derogatory(self) -> bool:
        return any(len(e.blocks) > 1 for e in self.eigenvalues)

    @property
    def spectral_radius(self) -> float:
        return max(abs(e.value) for e in self.eigenvalues)

    def find(self, value: complex) -> DistinctEigenvalue:
        """The distinct eigenvalue nearest to ``value``."""
        return min(self.eigenvalues, key=lambda e: abs(e.value - value))


@dataclass(frozen=True)
class AscentSequence:
    """``d[i-1] = dim null(A^i) - dim null(A^(i-1))`` for ``i = 1..n``."""

    d: tuple[int, ...]
    nullities: tuple[int, ...] = field(default=(), compare=False)


def complex_schur(a, tol: Tolerance = DEFAULT_TOL):
    """Complex Schur form ``a = Q T Q^*``.

    Returns
    -------
    Q : ndarray
        Unitary factor.
    T : ndarray
        Upper triangular factor; its diagonal holds the eigenvalues.
    """
    a = as_matrix(a, square=True, name="a").astype(np.complex128)
    T, Q = scipy.linalg.schur(a, output="complex", check_finite=False)
    resid = np.linalg.norm(Q @ T @ Q.conj().T - a)
    scale = max(1.0, np.linalg.norm(a))
    if resid > 1e3 * np.finfo(float).eps * a.shape[0] * scale + tol.abs_eps:
        raise np.linalg.LinAlgError(f"Schur residual {resid:.3e} too large")
    return Q, np.triu(T)


def eigenvalues(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Raw (unclustered) eigenvalues, read off the Schur diagonal."""
    _, T = complex_schur(a, tol)
    return np.diag(T).copy()


def default_cluster_eps(a) -> float:
    return 1e-6 * max(1.0, inf_norm(np.asarray(a)))


def cluster_eigenvalues(raw, tol: Tolerance = DEFAULT_TOL, cluster_eps: float | None = None) -> SpectrumSummary:
    """Group raw eigenvalues into distinct eigenvalues.

    Values within ``cluster_eps`` of a cluster's running mean join that
    cluster; values with ``|Im| <= cluster_eps`` are snapped to the real axis,
    values with modulus below ``cluster_eps`` to zero. Conjugate clusters are
    then paired and given exactly conjugate representatives.

    Raises
    ------
    SpectrumError
        If a value is within reach of two clusters, or a non-real cluster
        has no conjugate partner of equal multiplicity.
    """
    raw = np.asarray(raw, dtype=np.complex128).ravel()
    if raw.size == 0:
        raise ValueError("no eigenvalues given")
    if cluster_eps is None:
        cluster_eps = 1e-6 * max(1.0, float(np.max(np.abs(raw))))

    members: list[list[complex]] = []
    for z in sorted(raw, key=lambda v: (v.real, v.imag)):
        if abs(z) <= cluster_eps:
            z = 0j
        elif abs(z.imag) <= cluster_eps:
            z = complex(z.real, 0.0)
        hits = [i for i, m in enumerate(members) if abs(np.mean(m) - z) <= cluster_eps]
        if len(hits) > 1:
            raise SpectrumError(f"eigenvalue {z:.6g} is ambiguous between {len(hits)} clusters")
        if hits:
            members[hits[0]].append(z)
        else:
            members.append([z])

    upper, lower, reals = [], [], []
    for m in members:
        rep = complex(np.mean(m))
        if rep == 0:
            reals.append((0j, len(m)))
        elif abs(rep.imag) <= cluster_eps:
            reals.append((complex(rep.real, 0.0), len(m)))
        elif rep.imag > 0:
            upper.append((rep, len(m)))
        else:
            lower.append((rep, len(m)))

    pairs = []
    unmatched = list(lower)
    for rep, mult in upper:
        if not unmatched:
            raise SpectrumError(f"eigenvalue {rep:.6g} has no conjugate partner")
        k = min(range(len(unmatched)), key=lambda i: abs(unmatched[i][0] - rep.conjugate()))
        partner, pmult = unmatched.pop(k)
        if abs(partner - rep.conjugate()) > cluster_eps or pmult != mult:
            raise SpectrumError(f"eigenvalue {rep:.6g} has no conjugate partner of equal multiplicity")
        mean = 0.5 * (rep + partner.conjugate())
        pairs.append((mean, mult))
    if unmatched:
        raise SpectrumError(f"eigenvalue {unmatched[0][0]:.6g} has no conjugate partner")

    reals.sort(key=lambda e: -e[0].real)
    pairs.sort(key=lambda e: (-abs(e[0]), -e[0].real, -e[0].imag))
    distinct = [DistinctEigenvalue(v, m) for v, m in reals]
    for v, m in pairs:
        distinct.append(DistinctEigenvalue(v, m))
        distinct.append(DistinctEigenvalue(v.conjugate(), m))
    return SpectrumSummary(tuple(distinct), cluster_eps)


def _rank(m: np.ndarray, scale: float, rank_eps: float) -> int:
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sv > rank_eps * scale))


def _power_ranks(n_mat: np.ndarray, kmax: int, rank_eps: float) -> list[int]:
    """``rank(N^k)`` for ``k = 0..kmax`` with a scale of ``max(1, ||N||_2)^k``."""
    n = n_mat.shape[0]
    base_scale = max(1.0, float(np.linalg.norm(n_mat, 2)))
    ranks = [n]
    power = np.eye(n, dtype=n_mat.dtype)
    for k in range(1, kmax + 1):
        power = power @ n_mat
        ranks.append(_rank(power, base_scale**k, rank_eps))
    return ranks


def _blocks_from_ranks(ranks: list[int], multiplicity: int, value: complex) -> tuple[int, ...]:
    # w[k-1] = number of blocks of size >= k
    w = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    if any(x < 0 for x in w) or any(w[i] < w[i + 1] for i in range(len(w) - 1)):
        raise SpectrumError(f"non-monotone rank sequence {ranks} for eigenvalue {value:.6g}")
    if sum(w) != multiplicity:
        raise SpectrumError(
            f"rank deficiencies {w} for eigenvalue {value:.6g} do not add up to multiplicity {multiplicity}"
        )
    blocks = []
    for k in range(len(w), 0, -1):
        count = w[k - 1] - (w[k] if k < len(w) else 0)
        blocks.extend([k] * count)
    return tuple(blocks)


def jordan_structure(a, summary: SpectrumSummary, tol: Tolerance = DEFAULT_TOL, rank_eps: float = RANK_EPS) -> SpectrumSummary:
    """Attach Jordan block sizes to every distinct eigenvalue of ``summary``.

    For each eigenvalue the ranks of powers of ``A - lambda I`` are computed by
    SVD; the drops ``rank(N^(k-1)) - rank(N^k)`` count blocks of size at
    least ``k``.
    """
    a = as_matrix(a, square=True, name="a")
    n = a.shape[0]
    if summary.n != n:
        raise ValueError("summary does not match matrix order")
    out = []
    done: dict[complex, tuple[int, ...]] = {}
    for e in summary.eigenvalues:
        if e.value.imag < 0 and e.value.conjugate() in done and np.isrealobj(a):
            blocks = done[e.value.conjugate()]
        else:
            dtype = np.complex128 if e.value.imag != 0 else a.dtype
            lam = e.value if e.value.imag != 0 else e.value.real
            n_mat = (a - lam * np.eye(n)).astype(dtype)
            ranks = _power_ranks(n_mat, e.multiplicity, rank_eps)
            blocks = _blocks_from_ranks(ranks, e.multiplicity, e.value)
        done[e.value] = blocks
        out.append(DistinctEigenvalue(e.value, e.multiplicity, blocks))
    return SpectrumSummary(tuple(out), summary.cluster_eps)


def analyze_spectrum(a, tol: Tolerance = DEFAULT_TOL, cluster_eps: float | None = None,
                     rank_eps: float = RANK_EPS) -> SpectrumSummary:
    """Eigenvalues, clustering and Jordan structure in one call."""
    a = as_matrix(a, square=True, name="a")
    if cluster_eps is None:
        cluster_eps = default_cluster_eps(a)
    summary = cluster_eigenvalues(eigenvalues(a, tol), tol, cluster_eps)
    return jordan_structure(a, summary, tol, rank_eps)


def ascent_sequence(a, tol: Tolerance = DEFAULT_TOL, rank_eps: float = RANK_EPS) -> AscentSequence:
    """Ascent sequence ``d_1..d_n`` from ranks of powers of ``a``."""
    a = as_matrix(a, square=True, name="a")
    n = a.shape[0]
    ranks = _power_ranks(a, n, rank_eps)
    nullities = [n - r for r in ranks]
    d = tuple(nullities[i] - nullities[i - 1] for i in range(1, n + 1))
    return AscentSequence(d, tuple(nullities))


def ascent_condition(d, p: int) -> bool:
    """At most one element of ``d`` strictly inside each window ``(p*nu, p*(nu+1))``."""
    inside: dict[int, int] = {}
    for x in d:
        if x % p == 0:
            continue
        nu = x // p
        inside[nu] = inside.get(nu, 0) + 1
        if inside[nu] > 1:
            return False
    return True


def pth_root_exists(a, p: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Existence of any (complex) p-th root, decided by the ascent sequence."""
    _check_p(p)
    return ascent_condition(ascent_sequence(a, tol).d, p)


def real_pth_root_exists(a, p: int, tol: Tolerance = DEFAULT_TOL, summary: SpectrumSummary | None = None) -> bool:
    """Existence of a real p-th root of a real matrix.

    Requires the ascent condition and, for even ``p``, an even number of
    Jordan blocks of each size for every negative eigenvalue.
    """
    _check_p(p)
    a = as_real_matrix(a, name="a")
    if not pth_root_exists(a, p, tol):
        return False
    if p % 2:
        return True
    if summary is None or summary.t is None:
        summary = analyze_spectrum(a, tol)
    for e in summary.eigenvalues:
        if e.is_real and e.value.real < 0:
            counts = {size: len(list(group)) for size, group in itertools.groupby(e.blocks)}
            if any(c % 2 for c in counts.values()):
                return False
    return True


def _check_p(p: int) -> None:
    if int(p) != p or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p}")
