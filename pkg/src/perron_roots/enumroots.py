"""Counting and enumerating real and eventually positive p-th roots.

Counts come from closed formulas in ``r1`` (distinct positive eigenvalues),
``r2`` (distinct negative eigenvalues) and ``c`` (distinct conjugate pairs);
enumerations build every qualifying root explicitly and re-verify it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import perron
from .branches import real_branches
from .eigen import SpectrumSummary
from .matcore import DEFAULT_TOL, Tolerance, inf_norm, max_entry
from .matfun import (
    AssignmentError,
    BranchAssignment,
    RootReport,
    assemble_nonprimary_root,
    assemble_primary_root,
    is_primary_choice,
    real_assignment,
    sample_commutant,
)
from .rjcf import ComplexPairBlock, RealEigenBlock, RealJordanDecomposition, _block_key, negative_pairing

RESIDUAL_RTOL = 1e-8


class ConsistencyError(RuntimeError):
    """An enumeration disagrees with the counting formula."""


@dataclass
class RootCatalog:
    """Root counts for a matrix and the roots that were built and verified."""

    p: int
    primary_total: int
    real_primary_count: int
    ev_positive_primary_count: int
    assignments: list[BranchAssignment] = field(default_factory=list)
    roots: list[RootReport] = field(default_factory=list)
    derogatory: bool = False
    nonprimary_available: bool = False


def _check_nonsingular(summary: SpectrumSummary) -> None:
    if summary.is_singular:
        raise ValueError("counting formulas need a nonsingular matrix")


def count_real_primary(summary: SpectrumSummary, p: int) -> int:
    """``2**r1 * p**c`` (p even, ``r2 == 0``), ``0`` (p even, ``r2 > 0``), ``p**c`` (p odd)."""
    _check_nonsingular(summary)
    if p % 2:
        return p ** summary.c
    return 0 if summary.r2 else 2 ** summary.r1 * p ** summary.c


def _has_perron_spectrum(summary: SpectrumSummary) -> bool:
    rho = summary.spectral_radius
    top = summary.eigenvalues[0]
    if not (top.is_real and top.value.real > 0 and abs(top.value.real - rho) <= 1e-12 * max(1.0, rho)):
        return False
    if top.multiplicity != 1:
        return False
    return all(abs(e.value) < rho * (1 - perron.DOMINANCE_MARGIN) for e in summary.eigenvalues[1:])


def count_ev_positive_primary(summary: SpectrumSummary, p: int) -> int:
    """``2**(r1-1) * p**c`` (p even, ``r2 == 0``), ``0`` (p even, ``r2 > 0``), ``p**c`` (p odd).

    Raises
    ------
    ValueError
        If the matrix is singular or its spectrum lacks a simple, strictly
        dominant positive eigenvalue (so it cannot be eventually positive).
    """
    _check_nonsingular(summary)
    if not _has_perron_spectrum(summary):
        raise ValueError("spectrum has no simple dominant positive eigenvalue; not eventually positive")
    if p % 2:
        return p ** summary.c
    return 0 if summary.r2 else 2 ** (summary.r1 - 1) * p ** summary.c


def _distinct_block_groups(decomp: RealJordanDecomposition) -> list[tuple[tuple, list[int]]]:
    """Blocks grouped by eigenvalue, as (key, block positions) in first-seen order."""
    groups: dict[tuple, list[int]] = {}
    for i, b in enumerate(decomp.blocks):
        groups.setdefault(_block_key(b), []).append(i)
    return list(groups.items())


def _pair_choices(p: int) -> list[tuple[int, int]]:
    return [(0, 0)] + [(j, p - j) for j in range(1, p)]


def _assignment_from_choice(decomp: RealJordanDecomposition, per_block: list, p: int, primary: bool = True):
    real = [per_block[i] for i, b in enumerate(decomp.blocks) if isinstance(b, RealEigenBlock)]
    pairs = [per_block[i] for i, b in enumerate(decomp.blocks) if isinstance(b, ComplexPairBlock)]
    return BranchAssignment(tuple(real), tuple(pairs), p, primary)


def all_primary_assignments(decomp: RealJordanDecomposition, p: int):
    """Every primary assignment (``p**s`` of them) in canonical order."""
    groups = _distinct_block_groups(decomp)
    options = []
    for _, idxs in groups:
        b = decomp.blocks[idxs[0]]
        if isinstance(b, ComplexPairBlock):
            options.append(list(itertools.product(range(p), repeat=2)))
        else:
            options.append(list(range(p)))
    for combo in itertools.product(*options):
        per_block = [None] * len(decomp.blocks)
        for (_, idxs), choice in zip(groups, combo):
            for i in idxs:
                per_block[i] = choice
        yield _assignment_from_choice(decomp, per_block, p)


def ev_positive_primary_assignments(decomp: RealJordanDecomposition, p: int) -> list[BranchAssignment]:
    """Assignments obeying the selection rules, in canonical (lexicographic) order.

    Perron block: branch 0. Other real eigenvalues: their real branches
    (``0`` or ``p/2`` for positive ones with even p). Conjugate pairs:
    ``(0, 0)`` or ``(j, p - j)``.
    """
    groups = _distinct_block_groups(decomp)
    options = []
    for g, (_, idxs) in enumerate(groups):
        b = decomp.blocks[idxs[0]]
        if g == 0:
            if not (isinstance(b, RealEigenBlock) and b.lam > 0 and len(idxs) == 1 and b.size == 1):
                raise ValueError("first block must be the simple Perron eigenvalue")
            options.append([0])
        elif isinstance(b, ComplexPairBlock):
            if b.is_paired_negative:
                options.append([])
            else:
                options.append(_pair_choices(p))
        else:
            options.append(real_branches(b.lam, p))
    out = []
    for combo in itertools.product(*options):
        per_block = [None] * len(decomp.blocks)
        for (_, idxs), choice in zip(groups, combo):
            for i in idxs:
                per_block[i] = choice
        out.append(_assignment_from_choice(decomp, per_block, p))
    out.sort(key=lambda a: a.as_tuple())
    return out


def _residual_bound(decomp: RealJordanDecomposition) -> float:
    return RESIDUAL_RTOL * max(1.0, inf_norm(decomp.reconstruct()))


def enumerate_ev_positive_primary(decomp: RealJordanDecomposition, p: int, tol: Tolerance = DEFAULT_TOL,
                                  stochastic: bool = False) -> RootCatalog:
    """Build and verify every eventually positive primary p-th root.

    Raises
    ------
    ValueError
        If the matrix is singular or not eventually positive.
    ConsistencyError
        If a generated root fails verification or the number of roots
        differs from the counting formula.
    """
    A = decomp.reconstruct()
    if decomp.is_singular:
        raise ValueError("matrix is singular; use singular_root_report")
    if not perron.is_eventually_positive(A, tol):
        raise ValueError("matrix is not eventually positive")
    summary = decomp.summary
    expected = count_ev_positive_primary(summary, p)
    catalog = RootCatalog(
        p=p,
        primary_total=p ** summary.s,
        real_primary_count=count_real_primary(summary, p),
        ev_positive_primary_count=0,
        derogatory=decomp.is_derogatory,
        nonprimary_available=decomp.is_derogatory,
    )
    bound = _residual_bound(decomp)
    for assignment in ev_positive_primary_assignments(decomp, p):
        report = assemble_primary_root(decomp, assignment, tol, stochastic=stochastic)
        if not report.is_real or not report.is_eventually_positive:
            raise ConsistencyError(f"assignment {assignment} should give an eventually positive root but does not")
        if report.residual > bound:
            raise ConsistencyError(f"assignment {assignment}: residual {report.residual:.3e} exceeds {bound:.3e}")
        catalog.assignments.append(assignment)
        catalog.roots.append(report)
    catalog.ev_positive_primary_count = len(catalog.roots)
    if catalog.ev_positive_primary_count != expected:
        raise ConsistencyError(f"enumerated {catalog.ev_positive_primary_count} roots, formula gives {expected}")
    return catalog


def enumerate_real_primary(decomp: RealJordanDecomposition, p: int, tol: Tolerance = DEFAULT_TOL) -> RootCatalog:
    """Real primary roots of a nonsingular matrix without the eventual-positivity filter."""
    if decomp.is_singular:
        raise ValueError("matrix is singular; use singular_root_report")
    summary = decomp.summary
    groups = _distinct_block_groups(decomp)
    options = []
    for _, idxs in groups:
        b = decomp.blocks[idxs[0]]
        if isinstance(b, ComplexPairBlock):
            options.append([] if b.is_paired_negative else _pair_choices(p))
        else:
            options.append(real_branches(b.lam, p))
    catalog = RootCatalog(p, p ** summary.s, count_real_primary(summary, p), 0,
                          derogatory=decomp.is_derogatory, nonprimary_available=decomp.is_derogatory)
    for combo in itertools.product(*options):
        per_block = [None] * len(decomp.blocks)
        for (_, idxs), choice in zip(groups, combo):
            for i in idxs:
                per_block[i] = choice
        assignment = _assignment_from_choice(decomp, per_block, p)
        report = assemble_primary_root(decomp, assignment, tol)
        catalog.assignments.append(assignment)
        catalog.roots.append(report)
    catalog.ev_positive_primary_count = sum(1 for r in catalog.roots if r.is_eventually_positive)
    if len(catalog.roots) != catalog.real_primary_count:
        raise ConsistencyError(f"built {len(catalog.roots)} real roots, formula gives {catalog.real_primary_count}")
    return catalog


def check_nonprimary_rules(decomp: RealJordanDecomposition, assignment: BranchAssignment) -> None:
    """Raise ``AssignmentError`` unless ``assignment`` obeys the nonprimary selection rules."""
    p = assignment.p
    if not decomp.is_derogatory:
        raise AssignmentError("matrix is not derogatory; it has no nonprimary roots")
    first = decomp.blocks[0]
    if not (isinstance(first, RealEigenBlock) and first.lam > 0):
        raise AssignmentError("first block must be the Perron eigenvalue")
    if assignment.real_indices[0] != 0:
        raise AssignmentError("the Perron block must use branch 0")
    for b, j in zip(decomp.real_blocks, assignment.real_indices):
        if j not in real_branches(b.lam, p):
            raise AssignmentError(f"branch {j} is not real for eigenvalue {b.lam:g}")
    for b, (j1, j2) in zip(decomp.pair_blocks, assignment.pair_indices):
        if b.is_paired_negative:
            if j1 + j2 != p - 1:
                raise AssignmentError(f"paired negative block needs j1 + j2 = {p - 1}")
        elif (j1, j2) != (0, 0) and j2 != p - j1:
            raise AssignmentError(f"pair block needs (0, 0) or (j, p - j), got ({j1}, {j2})")
    if is_primary_choice(decomp, assignment):
        raise AssignmentError("assignment gives every eigenvalue a single branch; it is primary")


def enumerate_nonprimary_family(decomp: RealJordanDecomposition, p: int, assignment: BranchAssignment,
                                seeds, tol: Tolerance = DEFAULT_TOL, stochastic: bool = False) -> list[RootReport]:
    """Sample nonprimary roots ``R U F U^{-1} R^{-1}``, one per seed, and certify each."""
    if assignment.p != p:
        raise AssignmentError("assignment was built for a different p")
    check_nonprimary_rules(decomp, assignment)
    reports = []
    for seed in seeds:
        u = sample_commutant(decomp, seed, tol)
        reports.append(assemble_nonprimary_root(decomp, assignment, u, tol, stochastic=stochastic))
    return reports


def default_nonprimary_assignment(decomp: RealJordanDecomposition, p: int) -> BranchAssignment | None:
    """First rule-abiding nonprimary assignment in canonical order, if any.

    Derogatory eigenvalues get branch 0 on their first block and the next
    admissible branch on the others.
    """
    if not decomp.is_derogatory:
        return None
    per_block = []
    seen: dict[tuple, int] = {}
    for i, b in enumerate(decomp.blocks):
        key = _block_key(b)
        count = seen.get(key, 0)
        seen[key] = count + 1
        if isinstance(b, ComplexPairBlock):
            if b.is_paired_negative:
                per_block.append((0, p - 1))
            else:
                choices = _pair_choices(p)
                per_block.append(choices[min(count, len(choices) - 1)])
        else:
            choices = real_branches(b.lam, p) if i else [0]
            if not choices:
                return None
            per_block.append(choices[min(count, len(choices) - 1)])
    assignment = _assignment_from_choice(decomp, per_block, p, primary=False)
    try:
        check_nonprimary_rules(decomp, assignment)
    except AssignmentError:
        return None
    return assignment


def construct_real_root(decomp: RealJordanDecomposition, p: int, tol: Tolerance = DEFAULT_TOL) -> RootReport:
    """One real p-th root of a nonsingular real matrix, pairing negative blocks if needed.

    Raises
    ------
    AssignmentError
        If no real root exists (odd number of same-size blocks of a negative
        eigenvalue with even ``p``).
    """
    from .rjcf import DecompositionError

    try:
        paired = negative_pairing(decomp, p)
    except DecompositionError as exc:
        raise AssignmentError(f"no real {p}-th root: {exc}") from exc
    assignment = real_assignment(paired, p)
    if assignment.primary:
        return assemble_primary_root(paired, assignment, tol)
    return assemble_nonprimary_root(paired, assignment, np.eye(paired.n), tol)


def distinct(reports: list[RootReport], gap: float = 1e-6) -> bool:
    """Pairwise max-entry distance above ``gap``."""
    for a, b in itertools.combinations(reports, 2):
        if max_entry(a.X - b.X) <= gap:
            return False
    return True
