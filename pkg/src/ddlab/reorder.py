"""Block layouts with explicit or prefix-XOR-accumulated addressing, the
function-level reordering transforms, the program-level lifts (deterministic,
nondeterministic, probabilistic, quantum), and totalization.

A layout over q value bits (q a power of two, p = log2 q) arranges the input
as q blocks of p+1 bits: p address bits (most significant first) followed by
one value bit; n = q*(p+1). Block i's address is

  * direct mode: the binary value of its own address bits;
  * xor mode:    the running XOR of the address patterns of blocks 1..i
                 (seeded with 0 before block 1).

Addresses are handled 0-based internally (the 1-based convention used in
prose is this value plus one). An input is *allowed* when the q block
addresses form a permutation of {0..q-1}.

The program-level lifts share one state organization: q address slots times
the (width-padded) base state space; the address slot accumulates the current
block's addressing, the value bit applies the base program's transition for
the addressed variable and then resets the slot (direct) or keeps the running
xor (xor). Base layer-end maps stay pinned at lifted layer boundaries, where
the address slot is re-seeded to 0.
"""
from __future__ import annotations

import numpy as np

from .boolfn import BoolFn, PartialBoolFn, VarOrder
from .errors import CapacityError, CommutativityError, ConsistencyError, ShapeError
from . import diagrams
from . import quantum as qsim

REORDER_TABLE_CAP = 16
MODES = ("direct", "xor")


def _check_mode(mode):
    if mode not in MODES:
        raise ShapeError("mode must be one of %s, got %r" % ("/".join(MODES), mode))


class BlockLayout:
    """Input layout: q blocks of p+1 bits (p address bits then one value bit)."""

    __slots__ = ("q", "p", "n")

    def __init__(self, q):
        q = int(q)
        if q < 2 or q & (q - 1):
            raise ShapeError("block count q must be a power of two >= 2, got %r" % (q,))
        self.q = q
        self.p = q.bit_length() - 1
        self.n = q * (self.p + 1)

    def address_positions(self, i):
        """1-based input positions of block i's address bits (i is 1-based)."""
        base = (i - 1) * (self.p + 1)
        return tuple(base + t for t in range(1, self.p + 1))

    def value_position(self, i):
        """1-based input position of block i's value bit."""
        return i * (self.p + 1)

    def addresses_and_values(self, mode):
        """Vectorized per-block addresses (0-based) and value bits for all inputs.

        Returns (addr, vals): two arrays of shape (2**n, q).
        """
        _check_mode(mode)
        idx = np.arange(1 << self.n, dtype=np.int64)
        addr = np.empty((1 << self.n, self.q), dtype=np.int64)
        vals = np.empty((1 << self.n, self.q), dtype=np.int64)
        running = np.zeros(1 << self.n, dtype=np.int64)
        for i in range(1, self.q + 1):
            a = np.zeros(1 << self.n, dtype=np.int64)
            for pos in self.address_positions(i):
                a = (a << 1) | ((idx >> (self.n - pos)) & 1)
            if mode == "xor":
                running = running ^ a
                addr[:, i - 1] = running
            else:
                addr[:, i - 1] = a
            vals[:, i - 1] = (idx >> (self.n - self.value_position(i))) & 1
        return addr, vals

    def block_addresses(self, x, mode):
        """0-based addresses of the q blocks for one input (tuple of bits)."""
        _check_mode(mode)
        bits = [int(b) for b in x]
        if len(bits) != self.n:
            raise ShapeError("expected %d input bits, got %d" % (self.n, len(bits)))
        out = []
        running = 0
        for i in range(1, self.q + 1):
            a = 0
            for pos in self.address_positions(i):
                a = (a << 1) | bits[pos - 1]
            if mode == "xor":
                running ^= a
                out.append(running)
            else:
                out.append(a)
        return tuple(out)

    def block_values(self, x):
        bits = [int(b) for b in x]
        if len(bits) != self.n:
            raise ShapeError("expected %d input bits, got %d" % (self.n, len(bits)))
        return tuple(bits[self.value_position(i) - 1] for i in range(1, self.q + 1))

    def is_allowed(self, x, mode):
        """True iff the q block addresses form a permutation of {0..q-1}."""
        return len(set(self.block_addresses(x, mode))) == self.q

    def assemble_input(self, addresses, values, mode):
        """Input bits realizing the given 0-based per-block addresses and values."""
        _check_mode(mode)
        addresses = [int(a) for a in addresses]
        values = [int(v) for v in values]
        if len(addresses) != self.q or len(values) != self.q:
            raise ShapeError("need %d addresses and %d values" % (self.q, self.q))
        if any(not 0 <= a < self.q for a in addresses):
            raise ShapeError("addresses must lie in 0..q-1")
        bits = [0] * self.n
        prev = 0
        for i in range(1, self.q + 1):
            a = addresses[i - 1]
            pattern = a ^ prev if mode == "xor" else a
            if mode == "xor":
                prev = a
            for t, pos in enumerate(self.address_positions(i)):
                bits[pos - 1] = (pattern >> (self.p - 1 - t)) & 1
            bits[self.value_position(i) - 1] = values[i - 1] & 1
        return tuple(bits)


def _check_reorder_cap(layout):
    if layout.n > REORDER_TABLE_CAP:
        raise CapacityError(
            "function-level reordering capped at n <= %d (got n=%d)"
            % (REORDER_TABLE_CAP, layout.n)
        )


def allowed_input_indexes(layout, mode):
    """Truth-table indexes of all allowed inputs (n <= 16)."""
    _check_reorder_cap(layout)
    addr, _ = layout.addresses_and_values(mode)
    masks = np.zeros(addr.shape[0], dtype=np.int64)
    for i in range(layout.q):
        masks |= np.int64(1) << addr[:, i]
    return np.nonzero(masks == (1 << layout.q) - 1)[0]


def reorder_function(f, layout, mode):
    """Partial function: defined on allowed inputs, where it equals f applied
    to the values arranged by block address (address j supplies f's j+1-th bit)."""
    _check_mode(mode)
    if not isinstance(f, BoolFn):
        raise ShapeError("reorder_function expects a total base function")
    if f.n != layout.q:
        raise ShapeError(
            "base function arity %d does not match layout q=%d" % (f.n, layout.q)
        )
    _check_reorder_cap(layout)
    addr, vals = layout.addresses_and_values(mode)
    size = addr.shape[0]
    masks = np.zeros(size, dtype=np.int64)
    f_index = np.zeros(size, dtype=np.int64)
    q = layout.q
    for i in range(q):
        masks |= np.int64(1) << addr[:, i]
        f_index |= vals[:, i] << (q - 1 - addr[:, i])
    defined = (masks == (1 << q) - 1).astype(np.uint8)
    values = f.table[f_index] & defined
    return PartialBoolFn(layout.n, defined, values)


def _program_output_table(program):
    """Total rounded 0/1 output of any program kind over all inputs."""
    if isinstance(program, qsim.QuantumProgram):
        return (qsim.acceptance_table(program) > 0.5).astype(np.uint8)
    if isinstance(program, diagrams.Pobdd):
        return (diagrams.acceptance_table(program) > 0.5).astype(np.uint8)
    if isinstance(program, (diagrams.LeveledObdd, diagrams.Nobdd)):
        return diagrams.function_of(program).table
    raise ShapeError("totalize expects a leveled or quantum program")


def totalize(fp, program):
    """Total function equal to fp where defined and to the program's rounded
    output elsewhere (probability > 1/2 rounds to 1, ties round to 0).

    The program must agree with fp on every defined input (after rounding);
    a disagreement raises a consistency error.
    """
    if isinstance(fp, BoolFn):
        fp = PartialBoolFn.total(fp)
    if not isinstance(fp, PartialBoolFn):
        raise ShapeError("totalize expects a partial function")
    if program.n != fp.n:
        raise ShapeError("program arity does not match the partial function")
    rounded = _program_output_table(program)
    defined = fp.defined.astype(bool)
    if not np.array_equal(rounded[defined], fp.values[defined]):
        bad = int(np.nonzero(rounded[defined] != fp.values[defined])[0][0])
        raise ConsistencyError(
            "program disagrees with the partial function on a defined input "
            "(first mismatch at defined point #%d)" % bad
        )
    return BoolFn(fp.n, np.where(defined, fp.values, rounded))


def _require_commutative(program, trials, seed):
    if not diagrams.is_commutative(program, trials=trials, seed=seed):
        raise CommutativityError(
            "base program failed the commutativity check; reordering is undefined for it"
        )


def _lift_address_maps(layout, mode):
    """Per-address-level slot maps: for level t (1-based within the block),
    maps[t-1][bit] is the address-slot endomap on {0..q-1}."""
    q, p = layout.q, layout.p
    slots = np.arange(q, dtype=np.int64)
    maps = []
    for t in range(1, p + 1):
        if mode == "direct":
            m0 = (2 * slots) % q
            m1 = (2 * slots + 1) % q
        else:
            m0 = slots.copy()
            m1 = slots ^ (1 << (p - t))
        maps.append((m0, m1))
    return maps


def _lifted_widths(layout, k, w_base):
    return [layout.q * w_base] * (k * layout.n + 1)


def _classical_lift(program, layout, mode, trials, seed):
    """Shared construction data for the three classical lifts."""
    _check_mode(mode)
    if program.n != layout.q:
        raise ShapeError(
            "base program arity %d does not match layout q=%d" % (program.n, layout.q)
        )
    _require_commutative(program, trials, seed)
    w_base, tables, ends, _sinks = diagrams._padded_tables(program)
    addr_maps = _lift_address_maps(layout, mode)
    return w_base, tables, ends, addr_maps


def reorder_obdd(program, layout, mode, commut_trials=200, commut_seed=0):
    """Deterministic lift: states are (address slot, base state) pairs; width
    is exactly q * width(base) on every level."""
    if not isinstance(program, diagrams.LeveledObdd):
        raise ShapeError("reorder_obdd expects a deterministic base program")
    w, tables, ends, addr_maps = _classical_lift(program, layout, mode, commut_trials, commut_seed)
    q, p, k = layout.q, layout.p, program.k
    qw = q * w
    ids = np.arange(qw, dtype=np.int64)
    slot, s = ids // w, ids % w
    steps = []
    for j in range(k):
        for i in range(1, q + 1):
            for t in range(1, p + 1):
                m0, m1 = addr_maps[t - 1]
                t0 = m0[slot] * w + s
                t1 = m1[slot] * w + s
                steps.append(list(zip(t0.tolist(), t1.tolist())))
            rows = []
            for c in range(q):
                f0, f1 = tables[j][c + 1]
                new_slot = 0 if mode == "direct" else c
                for b_state in range(w):
                    rows.append(
                        (
                            int(new_slot * w + f0[b_state]),
                            int(new_slot * w + f1[b_state]),
                        )
                    )
            steps.append(rows)
    layer_ends = []
    for j in range(k):
        base_end = ends[j]
        if base_end is None and mode == "direct":
            layer_ends.append(None)
            continue
        end_map = base_end if base_end is not None else np.arange(w, dtype=np.int64)
        layer_ends.append((0 * slot) * w + end_map[s])
    sinks = np.zeros(qw, dtype=np.uint8)
    base_sinks = np.zeros(w, dtype=np.uint8)
    base_sinks[: program.sink_values.shape[0]] = program.sink_values
    sinks = base_sinks[s]
    return diagrams.LeveledObdd(
        n=layout.n,
        k=k,
        order=VarOrder.identity(layout.n),
        widths=_lifted_widths(layout, k, w),
        start=program.start,
        steps=steps,
        sink_values=sinks,
        layer_ends=layer_ends,
    )


def reorder_nobdd(program, layout, mode, commut_trials=200, commut_seed=0):
    """Nondeterministic lift: successor sets carried blockwise."""
    if not isinstance(program, diagrams.Nobdd):
        raise ShapeError("reorder_nobdd expects a nondeterministic base program")
    w, tables, ends, addr_maps = _classical_lift(program, layout, mode, commut_trials, commut_seed)
    q, p, k = layout.q, layout.p, program.k
    qw = q * w
    steps = []
    for j in range(k):
        for i in range(1, q + 1):
            for t in range(1, p + 1):
                m0, m1 = addr_maps[t - 1]
                rows = []
                for c in range(q):
                    for b_state in range(w):
                        rows.append(
                            (
                                (int(m0[c]) * w + b_state,),
                                (int(m1[c]) * w + b_state,),
                            )
                        )
                steps.append(rows)
            rows = []
            for c in range(q):
                a0, a1 = tables[j][c + 1]
                new_slot = 0 if mode == "direct" else c
                for b_state in range(w):
                    succ0 = tuple(new_slot * w + int(t2) for t2 in np.nonzero(a0[b_state])[0])
                    succ1 = tuple(new_slot * w + int(t2) for t2 in np.nonzero(a1[b_state])[0])
                    rows.append((succ0, succ1))
            steps.append(rows)
    layer_ends = []
    ids = np.arange(qw, dtype=np.int64)
    s = ids % w
    for j in range(k):
        base_end = ends[j]
        if base_end is None and mode == "direct":
            layer_ends.append(None)
            continue
        end_map = base_end if base_end is not None else np.arange(w, dtype=np.int64)
        layer_ends.append(end_map[s])
    accepting = [c * w + a for c in range(q) for a in sorted(program.accepting)]
    return diagrams.Nobdd(
        n=layout.n,
        k=k,
        order=VarOrder.identity(layout.n),
        widths=_lifted_widths(layout, k, w),
        start=program.start,
        steps=steps,
        accepting=accepting,
        layer_ends=layer_ends,
    )


def reorder_pobdd(program, layout, mode, commut_trials=200, commut_seed=0):
    """Probabilistic lift: stochastic rows carried blockwise."""
    if not isinstance(program, diagrams.Pobdd):
        raise ShapeError("reorder_pobdd expects a probabilistic base program")
    w, tables, ends, addr_maps = _classical_lift(program, layout, mode, commut_trials, commut_seed)
    q, p, k = layout.q, layout.p, program.k
    qw = q * w
    steps = []
    for j in range(k):
        for i in range(1, q + 1):
            for t in range(1, p + 1):
                m0, m1 = addr_maps[t - 1]
                rows = []
                for c in range(q):
                    for b_state in range(w):
                        r0 = np.zeros(qw)
                        r1 = np.zeros(qw)
                        r0[int(m0[c]) * w + b_state] = 1.0
                        r1[int(m1[c]) * w + b_state] = 1.0
                        rows.append((r0, r1))
                steps.append(rows)
            rows = []
            for c in range(q):
                p0, p1 = tables[j][c + 1]
                new_slot = 0 if mode == "direct" else c
                for b_state in range(w):
                    r0 = np.zeros(qw)
                    r1 = np.zeros(qw)
                    r0[new_slot * w: new_slot * w + w] = p0[b_state]
                    r1[new_slot * w: new_slot * w + w] = p1[b_state]
                    rows.append((r0, r1))
            steps.append(rows)
    layer_ends = []
    ids = np.arange(qw, dtype=np.int64)
    s = ids % w
    for j in range(k):
        base_end = ends[j]
        if base_end is None and mode == "direct":
            layer_ends.append(None)
            continue
        end_map = base_end if base_end is not None else np.arange(w, dtype=np.int64)
        layer_ends.append(end_map[s])
    accepting = [c * w + a for c in range(q) for a in sorted(program.accepting)]
    return diagrams.Pobdd(
        n=layout.n,
        k=k,
        order=VarOrder.identity(layout.n),
        widths=_lifted_widths(layout, k, w),
        start=program.start,
        steps=steps,
        accepting=accepting,
        epsilon=program.epsilon,
        layer_ends=layer_ends,
    )


def xor_reorder_qobdd(program, layout, commut_trials=50, commut_seed=0):
    """Quantum lift (xor addressing): dimension exactly q * dim(base); address
    bits act as block-index bit flips, the value bit acts block-diagonally with
    the base pair of the addressed variable."""
    if not isinstance(program, qsim.QuantumProgram):
        raise ShapeError("xor_reorder_qobdd expects a quantum base program")
    if program.n != layout.q:
        raise ShapeError(
            "base program arity %d does not match layout q=%d" % (program.n, layout.q)
        )
    if program.k != 1:
        raise ShapeError("the quantum lift is defined for single-layer base programs")
    if not qsim.is_commutative_quantum(program, trials=commut_trials, seed=commut_seed):
        raise CommutativityError(
            "base program failed the quantum commutativity check; the lift is undefined for it"
        )
    q, p, g = layout.q, layout.p, program.dim
    dim = q * g
    eye = np.eye(dim, dtype=np.complex128)

    def flip_matrix(bit_pos):
        m = np.zeros((dim, dim), dtype=np.complex128)
        for c in range(q):
            c2 = c ^ (1 << bit_pos)
            m[c2 * g: c2 * g + g, c * g: c * g + g] = np.eye(g)
        return m

    def value_matrix(bit):
        m = np.zeros((dim, dim), dtype=np.complex128)
        for c in range(q):
            m[c * g: c * g + g, c * g: c * g + g] = program.pair_for_variable(c + 1)[bit]
        return m

    steps = []
    for _ in range(1, q + 1):
        for t in range(1, p + 1):
            steps.append((eye, flip_matrix(p - t)))
        steps.append((value_matrix(0), value_matrix(1)))
    initial = np.zeros(dim, dtype=np.complex128)
    initial[:g] = program.initial
    accept = [c * g + a for c in range(q) for a in sorted(program.accept)]
    return qsim.QuantumProgram(
        n=layout.n,
        dim=dim,
        order=VarOrder.identity(layout.n),
        initial=initial,
        steps=steps,
        accept=accept,
        k=1,
    )
