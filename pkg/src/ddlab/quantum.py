"""Exact state-vector simulation of quantum leveled programs: unitary
transition pairs selected by input bits, a single end-of-run measurement
against an accepting subset, bounded-error verdicts, and the quantum
commutativity check via transition-pair reordering.

Conventions:
  * amplitudes are complex; acceptance probability is the squared-modulus mass
    on the accepting subset;
  * accepting states are 1-indexed (state i refers to amplitude index i-1);
  * one transition pair per variable; for k-layer programs the same n pairs
    repeat each layer;
  * tolerances: unitarity and per-step norm conservation 1e-9, initial norm
    1e-12, probability comparisons 1e-9.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

import numpy as np

from .boolfn import BoolFn, PartialBoolFn, VarOrder
from .errors import CapacityError, ShapeError, StructuralError

DIM_CAP = 4096
UNITARY_TOL = 1e-9
NORM_TOL = 1e-9
INITIAL_NORM_TOL = 1e-12
PROB_TOL = 1e-9
TABLE_CAP = 16
COMMUTATIVITY_INPUT_CAP = 10
EXHAUSTIVE_PERM_CAP = 5
_CHUNK_ROWS = 4096


def _as_unitary(mat, dim, where):
    g = np.asarray(mat, dtype=np.complex128)
    if g.shape != (dim, dim):
        raise ShapeError("%s must be a %dx%d matrix" % (where, dim, dim))
    dev = float(np.max(np.abs(g.conj().T @ g - np.eye(dim))))
    if dev > UNITARY_TOL:
        raise StructuralError(
            "%s deviates from unitarity by %.3g (tolerance %.1g)" % (where, dev, UNITARY_TOL)
        )
    g = g.copy()
    g.setflags(write=False)
    return g


class QuantumProgram:
    """Leveled quantum program: pairs of unitaries per variable, one measurement."""

    __slots__ = ("n", "dim", "order", "k", "initial", "steps", "accept")

    def __init__(self, n, dim, order, initial, steps, accept, k=1):
        self.n = int(n)
        self.dim = int(dim)
        if self.dim < 1:
            raise ShapeError("dimension must be positive")
        if self.dim > DIM_CAP:
            raise CapacityError("dimension %d exceeds the cap %d" % (self.dim, DIM_CAP))
        self.k = int(k)
        if self.k < 1:
            raise ShapeError("layer count must be >= 1")
        if not isinstance(order, VarOrder):
            order = VarOrder(order)
        if order.n != self.n:
            raise ShapeError("order length does not match n")
        self.order = order
        vec = np.asarray(initial, dtype=np.complex128)
        if vec.shape != (self.dim,):
            raise ShapeError("initial state must have length dim")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > INITIAL_NORM_TOL:
            raise StructuralError(
                "initial state norm %.15g is not 1 within %.1g" % (norm, INITIAL_NORM_TOL)
            )
        vec = vec.copy()
        vec.setflags(write=False)
        self.initial = vec
        if len(steps) != self.n:
            raise ShapeError("expected %d transition pairs, got %d" % (self.n, len(steps)))
        packed = []
        for i, pair in enumerate(steps):
            g0, g1 = pair
            packed.append(
                (
                    _as_unitary(g0, self.dim, "step %d bit-0 matrix" % (i + 1)),
                    _as_unitary(g1, self.dim, "step %d bit-1 matrix" % (i + 1)),
                )
            )
        self.steps = tuple(packed)
        acc = frozenset(int(s) for s in accept)
        if any(not 1 <= s <= self.dim for s in acc):
            raise StructuralError("accepting set must be a subset of {1..dim}")
        self.accept = acc

    def pair_for_variable(self, var):
        """The transition pair applied when variable `var` is read."""
        return self.steps[self.order.position_of(var) - 1]


def programs_equal(p, q):
    """Structural identity: same shape, order, initial, accept, and matrices."""
    if not (isinstance(p, QuantumProgram) and isinstance(q, QuantumProgram)):
        return False
    if (p.n, p.dim, p.k, p.order.perm, p.accept) != (q.n, q.dim, q.k, q.order.perm, q.accept):
        return False
    if not np.array_equal(p.initial, q.initial):
        return False
    return all(
        np.array_equal(a0, b0) and np.array_equal(a1, b1)
        for (a0, a1), (b0, b1) in zip(p.steps, q.steps)
    )


def accept_probability(program, x):
    """Apply the k*n unitaries selected by x; return accepting-subset mass."""
    bits = [int(b) for b in x]
    if len(bits) != program.n:
        raise ShapeError("expected %d input bits, got %d" % (program.n, len(bits)))
    if any(b not in (0, 1) for b in bits):
        raise ShapeError("input bits must be 0 or 1")
    state = program.initial.copy()
    for _ in range(program.k):
        for pos in range(program.n):
            var = program.order.perm[pos]
            g = program.steps[pos][bits[var - 1]]
            state = g @ state
            norm = float(np.linalg.norm(state))
            if abs(norm - 1.0) > NORM_TOL:
                raise StructuralError(
                    "state norm drifted to %.15g during the run" % norm
                )
    acc = sorted(program.accept)
    return float(np.sum(np.abs(state[[s - 1 for s in acc]]) ** 2)) if acc else 0.0


def _acceptance_for_inputs(program, idx):
    """Vectorized acceptance probabilities for the given input indexes."""
    n = program.n
    out = np.empty(idx.shape[0], dtype=np.float64)
    acc = np.array([s - 1 for s in sorted(program.accept)], dtype=np.int64)
    for lo in range(0, idx.shape[0], _CHUNK_ROWS):
        chunk = idx[lo: lo + _CHUNK_ROWS]
        states = np.tile(program.initial, (chunk.shape[0], 1))
        for _ in range(program.k):
            for pos in range(n):
                var = program.order.perm[pos]
                bit = ((chunk >> (n - var)) & 1).astype(bool)
                g0, g1 = program.steps[pos]
                nxt = np.empty_like(states)
                if np.any(~bit):
                    nxt[~bit] = states[~bit] @ g0.T
                if np.any(bit):
                    nxt[bit] = states[bit] @ g1.T
                states = nxt
        if acc.size:
            out[lo: lo + _CHUNK_ROWS] = np.sum(np.abs(states[:, acc]) ** 2, axis=1)
        else:
            out[lo: lo + _CHUNK_ROWS] = 0.0
    return out


def acceptance_table(program):
    """Acceptance probability on every input, index = bin(x_1..x_n) (n <= 16)."""
    if program.n > TABLE_CAP:
        raise CapacityError("exhaustive acceptance table capped at n <= %d" % TABLE_CAP)
    idx = np.arange(1 << program.n, dtype=np.int64)
    return _acceptance_for_inputs(program, idx)


@dataclass(frozen=True)
class UnitarityReport:
    max_deviation: float
    passed: bool
    matrices_checked: int


def check_unitary(program_or_matrices, tol=UNITARY_TOL):
    """Max over matrices of max|G†G - I|; pass iff within tolerance.

    Accepts a QuantumProgram or an iterable of raw square matrices (the latter
    lets deliberately broken matrices be reported rather than rejected at
    construction).
    """
    if isinstance(program_or_matrices, QuantumProgram):
        mats = [g for pair in program_or_matrices.steps for g in pair]
    else:
        mats = [np.asarray(g, dtype=np.complex128) for g in program_or_matrices]
    worst = 0.0
    for g in mats:
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ShapeError("unitarity check expects square matrices")
        dev = float(np.max(np.abs(g.conj().T @ g - np.eye(g.shape[0]))))
        worst = max(worst, dev)
    return UnitarityReport(max_deviation=worst, passed=worst <= tol, matrices_checked=len(mats))


@dataclass(frozen=True)
class BoundedErrorVerdict:
    passed: bool
    min_one: float | None
    max_zero: float | None
    epsilon: float
    ones_checked: int
    zeros_checked: int


def _program_acceptance(program, idx):
    """Acceptance probabilities on the given input indexes for a quantum or
    probabilistic program (deterministic programs are 0/1 probabilities)."""
    if isinstance(program, QuantumProgram):
        return _acceptance_for_inputs(program, idx)
    from . import diagrams

    if isinstance(program, diagrams.Pobdd):
        table = diagrams.acceptance_table(program)
        return table[idx]
    if isinstance(program, (diagrams.LeveledObdd, diagrams.Nobdd)):
        table = diagrams.function_of(program).table.astype(np.float64)
        return table[idx]
    raise ShapeError("bounded-error check expects a quantum or classical program")


def computes_with_bounded_error(program, f, epsilon, samples=None, seed=0):
    """Verdict with worst-case margins: acceptance >= 1/2+eps on every defined
    1-input and <= 1/2-eps on every defined 0-input (within 1e-9).

    Exhaustive over all 2**n inputs when n <= 16 and `samples` is None;
    otherwise checks `samples` seeded random inputs. Undefined points of a
    partial target are skipped.
    """
    n = program.n
    if isinstance(f, PartialBoolFn):
        if f.n != n:
            raise ShapeError("target arity does not match program arity")
        defined = f.defined.astype(bool)
        values = f.values
    elif isinstance(f, BoolFn):
        if f.n != n:
            raise ShapeError("target arity does not match program arity")
        defined = np.ones(1 << n, dtype=bool)
        values = f.table
    else:
        raise ShapeError("bounded-error target must be a truth-table function")
    if samples is None:
        if n > TABLE_CAP:
            raise CapacityError(
                "exhaustive bounded-error check capped at n <= %d; pass samples=" % TABLE_CAP
            )
        idx = np.arange(1 << n, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        idx = rng.integers(0, 1 << n, size=int(samples), dtype=np.int64)
    idx = idx[defined[idx]]
    probs = _program_acceptance(program, idx)
    vals = values[idx]
    ones = probs[vals == 1]
    zeros = probs[vals == 0]
    min_one = float(ones.min()) if ones.size else None
    max_zero = float(zeros.max()) if zeros.size else None
    ok_one = min_one is None or min_one >= 0.5 + epsilon - PROB_TOL
    ok_zero = max_zero is None or max_zero <= 0.5 - epsilon + PROB_TOL
    return BoundedErrorVerdict(
        passed=bool(ok_one and ok_zero),
        min_one=min_one,
        max_zero=max_zero,
        epsilon=float(epsilon),
        ones_checked=int(ones.size),
        zeros_checked=int(zeros.size),
    )


def reorder_quantum(program, order2):
    """Program reading variables in order `order2`, using the pair each
    variable had in the original program. No commutativity gate: the point of
    the operation is also to EXPOSE non-commutative programs by comparison."""
    if not isinstance(order2, VarOrder):
        order2 = VarOrder(order2)
    if order2.n != program.n:
        raise ShapeError("new order length does not match n")
    steps = [program.pair_for_variable(v) for v in order2.perm]
    return QuantumProgram(
        n=program.n,
        dim=program.dim,
        order=order2,
        initial=program.initial,
        steps=steps,
        accept=program.accept,
        k=program.k,
    )


def is_commutative_quantum(program, trials=50, seed=0, tol=PROB_TOL):
    """True iff every sampled reordering leaves the acceptance profile
    unchanged on all 2**n inputs within tol (all n! orders when n <= 5)."""
    n = program.n
    if n > COMMUTATIVITY_INPUT_CAP:
        raise CapacityError(
            "quantum commutativity check capped at n <= %d" % COMMUTATIVITY_INPUT_CAP
        )
    baseline = acceptance_table(program)
    if n <= EXHAUSTIVE_PERM_CAP:
        perms = itertools.permutations(range(1, n + 1))
    else:
        rng = random.Random(seed)
        sampled = []
        for _ in range(trials):
            perm = list(range(1, n + 1))
            rng.shuffle(perm)
            sampled.append(tuple(perm))
        perms = sampled
    for perm in perms:
        table = acceptance_table(reorder_quantum(program, perm))
        if float(np.max(np.abs(table - baseline))) > tol:
            return False
    return True


def _complex_to_pairs(arr):
    return [[float(z.real), float(z.imag)] for z in arr]


def _matrix_to_pairs(mat):
    return [_complex_to_pairs(row) for row in mat]


def _pairs_to_complex(pairs):
    return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


def _pairs_to_matrix(pairs):
    return np.array(
        [[complex(re, im) for re, im in row] for row in pairs], dtype=np.complex128
    )


def to_json(program):
    """JSON text: dim, order, accept (1-indexed), initial, steps, layers, n."""
    doc = {
        "n": program.n,
        "dim": program.dim,
        "layers": program.k,
        "order": list(program.order.perm),
        "accept": sorted(program.accept),
        "initial": _complex_to_pairs(program.initial),
        "steps": [
            {"g0": _matrix_to_pairs(g0), "g1": _matrix_to_pairs(g1)}
            for g0, g1 in program.steps
        ],
    }
    return json.dumps(doc, sort_keys=True)


def from_json(text):
    doc = json.loads(text) if isinstance(text, str) else text
    return QuantumProgram(
        n=doc["n"],
        dim=doc["dim"],
        order=doc["order"],
        initial=_pairs_to_complex(doc["initial"]),
        steps=[
            (_pairs_to_matrix(step["g0"]), _pairs_to_matrix(step["g1"]))
            for step in doc["steps"]
        ],
        accept=doc["accept"],
        k=doc.get("layers", 1),
    )
