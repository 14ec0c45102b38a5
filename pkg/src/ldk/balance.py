"""Rewrite an arbitrary identity into an equivalent 1-balanced identity.

Two rewrite rules, both validity-preserving in every lattice:

* absorption -- a variable occurring on one side only is absorbed into the
  other side (``q := q \\/ (q /\\ x)`` when ``x`` occurs only on the left,
  and dually ``p := p /\\ (p \\/ x)``);
* matrix split -- a variable with ``u`` occurrences on the left and ``v``
  on the right is replaced by a ``u x v`` matrix of fresh variables: the
  i-th left occurrence becomes the meet of row i, the j-th right occurrence
  the join of column j.

Every step is deterministic (smallest variable index first, occurrences
numbered left to right, fresh indices smallest-unused in row-major order,
inserted chains right-associated), so identical input yields an identical
output and trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from .terms import (
    Identity,
    Join,
    Meet,
    Term,
    Variable,
    occurrences,
    variables,
)


@dataclass(frozen=True)
class AbsorbStep:
    """Absorption of ``variable`` into ``side`` ("lhs" or "rhs" was rewritten)."""

    variable: int
    side: str


@dataclass(frozen=True)
class MatrixSplitStep:
    """Replacement of ``variable`` (u left / v right occurrences) by the
    fresh index matrix ``fresh`` (u rows by v columns, row-major)."""

    variable: int
    u: int
    v: int
    fresh: Tuple[Tuple[int, ...], ...]


Step = Union[AbsorbStep, MatrixSplitStep]


@dataclass(frozen=True)
class BalanceTrace:
    steps: Tuple[Step, ...]


def _meet_chain(indices: Sequence[int]) -> Term:
    # right-associated: w1 /\ (w2 /\ (... /\ wk))
    node: Term = Variable(indices[-1])
    for i in reversed(indices[:-1]):
        node = Meet(Variable(i), node)
    return node


def _join_chain(indices: Sequence[int]) -> Term:
    node: Term = Variable(indices[-1])
    for i in reversed(indices[:-1]):
        node = Join(Variable(i), node)
    return node


def _replace_occurrences(t: Term, variable: int, builders: Sequence[Term]) -> Term:
    """Replace the k-th leaf occurrence of ``variable`` by ``builders[k]``."""
    seen = 0

    def walk(node: Term) -> Term:
        nonlocal seen
        if isinstance(node, Variable):
            if node.index == variable:
                replacement = builders[seen]
                seen += 1
                return replacement
            return node
        ctor = Join if isinstance(node, Join) else Meet
        return ctor(walk(node.left), walk(node.right))

    result = walk(t)
    if seen != len(builders):
        raise ValueError(
            f"expected {len(builders)} occurrences of x{variable}, found {seen}")
    return result


def _apply_step(ident: Identity, step: Step) -> Identity:
    if isinstance(step, AbsorbStep):
        x = Variable(step.variable)
        if step.side == "rhs":
            return Identity(ident.lhs, Join(ident.rhs, Meet(ident.rhs, x)))
        if step.side == "lhs":
            return Identity(Meet(ident.lhs, Join(ident.lhs, x)), ident.rhs)
        raise ValueError(f"unknown absorb side {step.side!r}")
    rows = step.fresh
    lhs_builders = [_meet_chain(rows[i]) for i in range(step.u)]
    rhs_builders = [_join_chain([rows[i][j] for i in range(step.u)])
                    for j in range(step.v)]
    return Identity(
        _replace_occurrences(ident.lhs, step.variable, lhs_builders),
        _replace_occurrences(ident.rhs, step.variable, rhs_builders),
    )


def replay(ident: Identity, trace: BalanceTrace) -> Identity:
    """Re-apply a trace to its original identity."""
    for step in trace.steps:
        ident = _apply_step(ident, step)
    return ident


def absorb_missing(ident: Identity) -> Tuple[Identity, BalanceTrace]:
    """Make the variable sets of both sides equal via the absorption law.

    Variables occurring only on the left are absorbed into the right side
    first, then the symmetric rule runs; each group in ascending index
    order.  Already-equal variable sets come back unchanged with an empty
    trace.
    """
    left_only = sorted(variables(ident.lhs) - variables(ident.rhs))
    right_only = sorted(variables(ident.rhs) - variables(ident.lhs))
    steps: List[Step] = [AbsorbStep(i, "rhs") for i in left_only]
    steps += [AbsorbStep(i, "lhs") for i in right_only]
    out = ident
    for step in steps:
        out = _apply_step(out, step)
    return out, BalanceTrace(tuple(steps))


def _fresh_indices(used: set, count: int) -> List[int]:
    out: List[int] = []
    candidate = 1
    while len(out) < count:
        if candidate not in used:
            out.append(candidate)
        candidate += 1
    return out


def one_balance(ident: Identity) -> Tuple[Identity, BalanceTrace]:
    """Produce an equivalent 1-balanced identity and the rewrite trace.

    Applies absorb_missing first; then repeatedly splits the
    smallest-index unbalanced variable.  Terminates because every split
    lowers the number of unbalanced variables by one.
    """
    out, trace = absorb_missing(ident)
    steps = list(trace.steps)
    while True:
        profile = occurrences(out).counts
        unbalanced = sorted(i for i, uv in profile.items() if uv != (1, 1))
        if not unbalanced:
            break
        target = unbalanced[0]
        u, v = profile[target]
        used = variables(out.lhs) | variables(out.rhs)
        flat = _fresh_indices(used, u * v)
        rows = tuple(tuple(flat[i * v + j] for j in range(v)) for i in range(u))
        step = MatrixSplitStep(target, u, v, rows)
        out = _apply_step(out, step)
        steps.append(step)
    return out, BalanceTrace(tuple(steps))
