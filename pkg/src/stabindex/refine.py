"""Least-squares refinement of observed frequencies under a constraint
system, with iterative repair of negative entries.
"""

import numpy as np

from .constraints import ConstraintSystem, build_constraints
from .montecarlo import ProbabilityVector


class RepairFailed(RuntimeError):
    """Negative entries survived every repair round; carries the last
    iterate in ``.last``."""

    def __init__(self, last: ProbabilityVector):
        super().__init__("negative entries remain after the allowed repair rounds")
        self.last = last


def _values(ptilde) -> np.ndarray:
    if isinstance(ptilde, ProbabilityVector):
        return np.asarray(ptilde.values, dtype=float)
    return np.asarray(ptilde, dtype=float)


def _stderr(ptilde, length: int) -> np.ndarray:
    if isinstance(ptilde, ProbabilityVector):
        return np.asarray(ptilde.stderr, dtype=float)
    return np.zeros(length)


def least_squares_refine(cs: ConstraintSystem, ptilde) -> ProbabilityVector:
    """Project observed frequencies onto the constraint set.

    Solves the normal equations for design . q ~ ptilde - offset and returns
    design . qhat + offset, which satisfies every relation exactly.  Standard
    errors propagate through the (linear) projection.  ptilde may be a
    ProbabilityVector or a plain vector of length n + 1.
    """
    p = _values(ptilde)
    n1 = cs.design.shape[0]
    if p.shape != (n1,):
        raise ValueError(f"expected a length-{n1} frequency vector")
    k = cs.design.shape[1]
    if k == 0:
        phat = cs.offset.copy()
        se = np.zeros(n1)
    else:
        d = cs.design
        gram = d.T @ d
        if np.linalg.matrix_rank(gram) < k:
            raise ValueError("design matrix is rank deficient")
        qhat = np.linalg.solve(gram, d.T @ (p - cs.offset))
        phat = d @ qhat + cs.offset
        hat = d @ np.linalg.solve(gram, d.T)
        se = np.sqrt(hat**2 @ _stderr(ptilde, n1) ** 2)
    return ProbabilityVector(phat, se, "refined")


def nonneg_repair(
    cs: ConstraintSystem, ptilde, max_rounds: int = 5
) -> ProbabilityVector:
    """Refine, then repeatedly pin negative entries to exactly zero.

    Each round pins every index whose refined value is negative (and, for
    symmetric families, its mirror), rebuilds the constraint system over the
    remaining free entries and re-solves against the original frequencies.
    The free set shrinks every round, so max_rounds is a safety cap more
    than a budget.  Raises RepairFailed with the last iterate if negatives
    survive, and InconsistentConstraints if pinning contradicts the
    relations.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    family = cs.family
    pinned = set(cs.pinned)
    phat = least_squares_refine(cs, ptilde)
    for _ in range(max_rounds):
        negative = np.flatnonzero(phat.values < 0.0)
        if negative.size == 0:
            return phat
        for j in negative:
            pinned.add(int(j))
            if family.symmetric:
                pinned.add(family.n - int(j))
        cs = build_constraints(family, pinned=pinned)
        phat = least_squares_refine(cs, ptilde)
    if (phat.values < 0.0).any():
        raise RepairFailed(phat)
    return phat
