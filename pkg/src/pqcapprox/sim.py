"""Exact statevector simulation, Hadamard-test readout, and resource counts.

Qubit 0 is the most significant bit of the basis-state index.  Circuits are
ordered gate lists; a gate either carries a concrete angle or an encoding
slot that is bound to a data point before simulation.  Multi-controlled
single-qubit gates (MCU) are native simulator primitives; ``decompose_mcu``
lowers them to CNOT plus single-qubit rotations for the depth/gate-count
claims and equivalence tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

MAX_WIDTH = 24

_SINGLE_KINDS = ("H", "X", "Z", "Rx", "Ry", "Rz")
_ROTATIONS = ("Rx", "Ry", "Rz")


@dataclass(frozen=True)
class EncodingSlot:
    """Deferred data-dependent angle.

    xform "acos": angle = -2*arccos(x[coord] - shift), the X-basis encoding.
    xform "zrot": angle = -(x[coord] - shift), the Z-basis encoding.
    """

    coord: int
    xform: str
    shift: float = 0.0

    def angle_for(self, x: Sequence[float]) -> float:
        u = float(x[self.coord]) - self.shift
        if self.xform == "acos":
            if abs(u) > 1.0 + 1e-9:
                raise ValueError(f"encoding argument {u} outside [-1, 1]")
            return -2.0 * math.acos(min(1.0, max(-1.0, u)))
        if self.xform == "zrot":
            return -u
        raise ValueError(f"unknown encoding xform {self.xform!r}")


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    angle: Optional[float] = None
    trainable: bool = False
    sub: Optional[str] = None
    slot: Optional[EncodingSlot] = None

    def __post_init__(self) -> None:
        if set(self.targets) & set(self.controls):
            raise ValueError("targets and controls must be disjoint")
        if self.kind in _SINGLE_KINDS:
            if len(self.targets) != 1 or self.controls:
                raise ValueError(f"{self.kind} takes one target and no controls")
        elif self.kind == "CNOT":
            if len(self.targets) != 1 or len(self.controls) != 1:
                raise ValueError("CNOT takes one control and one target")
        elif self.kind == "MCU":
            if self.sub not in _SINGLE_KINDS:
                raise ValueError(f"MCU wraps a single-qubit kind, got {self.sub!r}")
            if len(self.targets) != 1:
                raise ValueError("MCU takes one target")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        rot = self.sub if self.kind == "MCU" else self.kind
        if rot in _ROTATIONS:
            if self.angle is None and self.slot is None:
                raise ValueError(f"{rot} needs an angle or an encoding slot")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} does not take an angle")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + self.controls

    def bound(self, x: Sequence[float]) -> "Gate":
        if self.slot is None:
            return self
        return replace(self, angle=self.slot.angle_for(x), slot=None)


def h(q: int) -> Gate:
    return Gate("H", (q,))


def xg(q: int) -> Gate:
    return Gate("X", (q,))


def zg(q: int) -> Gate:
    return Gate("Z", (q,))


def rx(q: int, angle: float, trainable: bool = False) -> Gate:
    return Gate("Rx", (q,), angle=angle, trainable=trainable)


def ry(q: int, angle: float, trainable: bool = False) -> Gate:
    return Gate("Ry", (q,), angle=angle, trainable=trainable)


def rz(q: int, angle: float, trainable: bool = False) -> Gate:
    return Gate("Rz", (q,), angle=angle, trainable=trainable)


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (target,), (control,))


def encoding_gate(q: int, slot: EncodingSlot) -> Gate:
    kind = "Rx" if slot.xform == "acos" else "Rz"
    return Gate(kind, (q,), slot=slot)


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if self.width < 0:
            raise ValueError("width must be nonnegative")
        for g in self.gates:
            if any(q < 0 or q >= self.width for q in g.qubits):
                raise ValueError(f"gate {g.kind} addresses qubits outside width {self.width}")
        object.__setattr__(self, "gates", tuple(self.gates))

    def bound(self, x: Optional[Sequence[float]]) -> "Circuit":
        """Substitute data point x into every encoding slot."""
        if x is None:
            if any(g.slot is not None for g in self.gates):
                raise ValueError("circuit has unbound encoding slots; pass x")
            return self
        return Circuit(self.width, tuple(g.bound(x) for g in self.gates), self.label)

    def shifted(self, offset: int, new_width: int) -> "Circuit":
        """Same gates on qubits offset..offset+width-1 of a wider register."""
        gates = tuple(
            replace(
                g,
                targets=tuple(q + offset for q in g.targets),
                controls=tuple(q + offset for q in g.controls),
            )
            for g in self.gates
        )
        return Circuit(new_width, gates, self.label)

    def controlled_on(self, controls: Sequence[int]) -> "Circuit":
        """Every gate additionally controlled on the given qubits."""
        extra = tuple(controls)
        out = []
        for g in self.gates:
            allc = tuple(sorted(set(g.controls) | set(extra)))
            if g.kind == "MCU":
                out.append(replace(g, controls=allc))
            elif g.kind == "CNOT":
                out.append(Gate("MCU", g.targets, allc, sub="X"))
            elif g.kind == "X" and len(allc) == 1:
                out.append(Gate("CNOT", g.targets, allc))
            else:
                out.append(
                    Gate(
                        "MCU",
                        g.targets,
                        allc,
                        angle=g.angle,
                        trainable=g.trainable,
                        sub=g.kind,
                        slot=g.slot,
                    )
                )
        return Circuit(self.width, tuple(out), self.label)

    def concat(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.width, self.gates + other.gates, self.label)


@dataclass(frozen=True)
class Statevector:
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        n = len(amps)
        if n == 0 or (n & (n - 1)) != 0:
            raise ValueError("amplitude count must be a power of two")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm {norm} deviates from 1")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, width: int) -> "Statevector":
        if width > MAX_WIDTH:
            raise ValueError(f"width {width} exceeds the {MAX_WIDTH}-qubit cap")
        amps = np.zeros(2**width, dtype=complex)
        amps[0] = 1.0
        return cls(amps)

    @property
    def width(self) -> int:
        return int(len(self.amplitudes)).bit_length() - 1


def gate_matrix_1q(kind: str, angle: Optional[float] = None) -> np.ndarray:
    if kind == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "Z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    if kind == "Rx":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "Ry":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "Rz":
        return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)
    raise ValueError(f"no matrix for kind {kind!r}")


_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(width: int) -> np.ndarray:
    if width not in _INDEX_CACHE:
        _INDEX_CACHE[width] = np.arange(2**width)
    return _INDEX_CACHE[width]


def _apply_gate(amps: np.ndarray, g: Gate, width: int) -> np.ndarray:
    if g.slot is not None:
        raise ValueError("cannot simulate a circuit with unbound encoding slots")
    kind = g.sub if g.kind == "MCU" else ("X" if g.kind == "CNOT" else g.kind)
    mat = gate_matrix_1q(kind, g.angle)
    target = g.targets[0]
    tbit = 1 << (width - 1 - target)
    idx = _indices(width)
    if g.controls:
        cmask = 0
        for c in g.controls:
            cmask |= 1 << (width - 1 - c)
        sel = (idx & cmask) == cmask
    else:
        sel = None
    lower = (idx & tbit) == 0
    mask0 = lower if sel is None else (lower & sel)
    i0 = idx[mask0]
    i1 = i0 | tbit
    a0, a1 = amps[i0], amps[i1]
    amps = amps.copy()
    amps[i0] = mat[0, 0] * a0 + mat[0, 1] * a1
    amps[i1] = mat[1, 0] * a0 + mat[1, 1] * a1
    return amps


def run(c: Circuit, init: Optional[Statevector] = None) -> Statevector:
    """Apply the circuit to the initial state (default all-zeros)."""
    if c.width > MAX_WIDTH:
        raise ValueError(f"width {c.width} exceeds the {MAX_WIDTH}-qubit cap")
    state = init if init is not None else Statevector.zero(c.width)
    if len(state.amplitudes) != 2**c.width:
        raise ValueError("initial state dimension does not match circuit width")
    amps = state.amplitudes
    for g in c.gates:
        amps = _apply_gate(amps, g, c.width)
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-10:
        raise RuntimeError(f"simulation lost unitarity: norm {norm}")
    return Statevector(amps)


def expectation_z0(s: Statevector) -> float:
    """Expectation of Pauli Z on qubit 0 (the most significant bit)."""
    probs = np.abs(s.amplitudes) ** 2
    half = len(probs) // 2
    return float(np.sum(probs[:half]) - np.sum(probs[half:]))


def hadamard_test_circuit(u: Circuit, prep: Circuit, part: str = "real") -> Circuit:
    """Composed circuit whose qubit-0 Z expectation reads the block value.

    A fresh ancilla is prepended as qubit 0; prep acts unconditionally on
    the work register, u is applied controlled on the ancilla.
    """
    if u.width != prep.width:
        raise ValueError("u and prep must act on the same width")
    if part not in ("real", "imaginary"):
        raise ValueError("part must be 'real' or 'imaginary'")
    w = u.width + 1
    gates: list[Gate] = list(prep.shifted(1, w).gates)
    gates.append(h(0))
    gates.extend(u.shifted(1, w).controlled_on((0,)).gates)
    if part == "imaginary":
        gates.append(rz(0, -math.pi / 2.0))
    gates.append(h(0))
    return Circuit(w, tuple(gates), label=f"hadamard_test[{part}] {u.label}")


def hadamard_test(u: Circuit, prep: Circuit, part: str = "real") -> float:
    """Exact Re (or Im) of <psi|U|psi> with |psi> = prep|0...0>."""
    circ = hadamard_test_circuit(u, prep, part)
    return expectation_z0(run(circ))


def sample_shots(c: Circuit, shots: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of expectation_z0 after running c.

    Samples the qubit-0 measurement ``shots`` times with a seeded generator;
    returns (estimate, standard error).  Deterministic for a fixed seed.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    state = run(c)
    probs = np.abs(state.amplitudes) ** 2
    p_one = float(np.sum(probs[len(probs) // 2 :]))
    rng = np.random.default_rng(seed)
    ones = rng.random(shots) < p_one
    vals = 1.0 - 2.0 * ones.astype(float)
    estimate = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(shots)) if shots > 1 else 0.0
    return estimate, stderr


# ---------------------------------------------------------------------------
# MCU lowering
# ---------------------------------------------------------------------------


def _zyz_angles(mat: np.ndarray) -> tuple[float, float, float, float]:
    """(delta, a, b, c) with mat = e^{i delta} Rz(a) Ry(b) Rz(c)."""
    det = np.linalg.det(mat)
    delta = 0.5 * float(np.angle(det))
    m = mat * np.exp(-1j * delta)
    b = 2.0 * math.atan2(abs(m[1, 0]), abs(m[0, 0]))
    if abs(m[0, 0]) > 1e-12 and abs(m[1, 0]) > 1e-12:
        apc = 2.0 * float(np.angle(m[1, 1]))
        amc = 2.0 * float(np.angle(m[1, 0]))
        a, c = (apc + amc) / 2.0, (apc - amc) / 2.0
    elif abs(m[0, 0]) > 1e-12:  # diagonal
        a, c = 2.0 * float(np.angle(m[1, 1])), 0.0
    else:  # anti-diagonal
        a, c = 2.0 * float(np.angle(m[1, 0])), 0.0
    return delta, a, b, c


def _ucr(axis: str, controls: tuple[int, ...], target: int, angles: np.ndarray) -> list[Gate]:
    """Uniformly controlled rotation sum_j |j><j| R_axis(angles[j])."""
    if not controls:
        if abs(angles[0]) < 1e-15:
            return []
        return [Gate(axis, (target,), angle=float(angles[0]), trainable=False)]
    half = len(angles) // 2
    plus = (angles[:half] + angles[half:]) / 2.0
    minus = (angles[:half] - angles[half:]) / 2.0
    first, rest = controls[0], controls[1:]
    out = _ucr(axis, rest, target, plus)
    out.append(cnot(first, target))
    out.extend(_ucr(axis, rest, target, minus))
    out.append(cnot(first, target))
    return out


def _controlled_phase(qubits: tuple[int, ...], delta: float) -> list[Gate]:
    """Phase e^{i delta} on basis states with all the given qubits set."""
    if abs(delta) < 1e-15 or not qubits:
        return []
    if len(qubits) == 1:
        return [rz(qubits[0], delta)]  # equals the phase gate up to global phase
    pattern = np.zeros(2 ** (len(qubits) - 1))
    pattern[-1] = delta
    gates = _ucr("Rz", qubits[:-1], qubits[-1], pattern)
    gates.extend(_controlled_phase(qubits[:-1], delta / 2.0))
    return gates


def decompose_mcu(g: Gate) -> list[Gate]:
    """Lower a multi-controlled single-qubit gate to CNOTs and rotations.

    The composed unitary equals the native gate up to global phase; no
    ancilla qubits are used.
    """
    if g.kind != "MCU":
        raise ValueError("decompose_mcu expects an MCU gate")
    if g.slot is not None:
        raise ValueError("bind encoding slots before lowering")
    if not g.controls:
        return [Gate(g.sub, g.targets, angle=g.angle, trainable=g.trainable)]
    target = g.targets[0]
    controls = tuple(g.controls)
    m = len(controls)

    if g.sub in _ROTATIONS:
        pattern = np.zeros(2**m)
        pattern[-1] = g.angle
        if g.sub == "Rx":  # conjugate the Z-axis multiplexor onto the X axis
            gates = [ry(target, -math.pi / 2.0)]
            gates.extend(_ucr("Rz", controls, target, pattern))
            gates.append(ry(target, math.pi / 2.0))
            return gates
        return _ucr(g.sub, controls, target, pattern)

    delta, a, b, c = _zyz_angles(gate_matrix_1q(g.sub, g.angle))
    gates: list[Gate] = []
    for axis, angle in (("Rz", c), ("Ry", b), ("Rz", a)):
        if abs(angle) > 1e-15:
            pattern = np.zeros(2**m)
            pattern[-1] = angle
            gates.extend(_ucr(axis, controls, target, pattern))
    gates.extend(_controlled_phase(controls, delta))
    return gates


def lowered(c: Circuit) -> Circuit:
    """Expand every MCU into CNOT + single-qubit rotations."""
    gates: list[Gate] = []
    for g in c.gates:
        if g.kind == "MCU":
            gates.extend(decompose_mcu(g))
        else:
            gates.append(g)
    return Circuit(c.width, tuple(gates), c.label)


# ---------------------------------------------------------------------------
# Resource accounting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResourceCount:
    width: int
    depth: int
    trainable_params: int
    gate_total: int

    def __post_init__(self) -> None:
        if min(self.width, self.depth, self.trainable_params, self.gate_total) < 0:
            raise ValueError("resource counts must be nonnegative")
        if self.trainable_params > self.gate_total:
            raise ValueError("trainable parameter count exceeds gate count")


def resource_count(c: Circuit, lowered_pass: bool = False) -> ResourceCount:
    """Width, greedy-ASAP depth, trainable-parameter and gate tallies.

    With ``lowered_pass`` the MCU gates are first expanded to CNOT plus
    single-qubit rotations, so the tallies reflect the elementary gate set.
    """
    circ = lowered(c) if lowered_pass else c
    level = [0] * circ.width
    depth = 0
    params = 0
    for g in circ.gates:
        qs = g.qubits
        layer = 1 + max((level[q] for q in qs), default=0)
        for q in qs:
            level[q] = layer
        depth = max(depth, layer)
        if g.trainable:
            params += 1
    return ResourceCount(circ.width, depth, params, len(circ.gates))


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense unitary of the circuit; test oracle for width <= 10."""
    if c.width > 10:
        raise ValueError("dense unitary restricted to width <= 10")
    dim = 2**c.width
    u = np.eye(dim, dtype=complex)
    for g in c.gates:
        cols = [_apply_gate(u[:, j].copy(), g, c.width) for j in range(dim)]
        u = np.stack(cols, axis=1)
    return u


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def circuit_to_text(c: Circuit) -> str:
    """Line-oriented format: header (width, label), then one gate per line."""
    lines = [f"width {c.width}", f"label {c.label}"]
    for g in c.gates:
        kind = f"MCU.{g.sub}" if g.kind == "MCU" else g.kind
        parts = [kind, ",".join(str(q) for q in g.targets)]
        if g.controls:
            parts.append("c=" + ",".join(str(q) for q in g.controls))
        if g.angle is not None:
            parts.append(f"a={g.angle!r}")
        if g.slot is not None:
            parts.append(f"enc={g.slot.xform}:{g.slot.coord}:{g.slot.shift!r}")
        if g.trainable:
            parts.append("train")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("width ") or not lines[1].startswith("label"):
        raise ValueError("malformed circuit text: expected width/label header")
    width = int(lines[0].split()[1])
    label = lines[1][len("label") :].strip()
    gates = []
    for ln in lines[2:]:
        parts = ln.split()
        kind = parts[0]
        sub = None
        if kind.startswith("MCU."):
            kind, sub = "MCU", kind[4:]
        targets = tuple(int(t) for t in parts[1].split(","))
        controls: tuple[int, ...] = ()
        angle = None
        slot = None
        trainable = False
        for tok in parts[2:]:
            if tok.startswith("c="):
                controls = tuple(int(q) for q in tok[2:].split(","))
            elif tok.startswith("a="):
                angle = float(tok[2:])
            elif tok.startswith("enc="):
                xform, coord, shift = tok[4:].split(":")
                slot = EncodingSlot(int(coord), xform, float(shift))
            elif tok == "train":
                trainable = True
            else:
                raise ValueError(f"unknown token {tok!r} in circuit text")
        gates.append(Gate(kind, targets, controls, angle, trainable, sub, slot))
    return Circuit(width, tuple(gates), label)
