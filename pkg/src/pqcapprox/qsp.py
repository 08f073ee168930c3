"""Phase-angle synthesis for single-qubit data re-uploading circuits.

Two circuit families are handled:

* X-basis encoding ``S(x) = exp(i arccos(x) X)`` interleaved with Z
  rotations, whose plus-state block value realizes real polynomials with
  definite parity (degree = layer count, parity = layers mod 2, sup norm
  at most 1).
* Z-basis encoding ``S(x) = diag(exp(ix/2), exp(-ix/2))`` interleaved with
  Y and Z rotations, whose zero-state block value realizes complex
  trigonometric (Laurent) polynomials.

Synthesis solves for angles by Newton iteration on the Chebyshev
coefficients of the realized block value, warm-started from an exact
zero-block seed and continued in target scale; this stays reliable into
the high hundreds of layers, where the localization polynomials live.
An independent completion backend (spectral factorization of 1 - p^2 by
root pairing, then layer stripping) cross-checks low degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from numpy.polynomial import polynomial as _np_poly
from scipy import fft as _fft
from scipy import optimize as _opt

from .poly import ParityPolynomial

_PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)


class QspSynthesisError(RuntimeError):
    """Synthesis did not converge; carries the best residual achieved."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (best residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class QspAngleSequence:
    """Z-rotation angles theta_0..theta_L of an L-layer X-encoding circuit."""

    angles: tuple[float, ...]
    residual: float = 0.0

    @property
    def layers(self) -> int:
        return len(self.angles) - 1


@dataclass(frozen=True)
class TrigQspParams:
    """Parameters (omega, thetas, phis) of an L-layer Z-encoding circuit."""

    omega: float
    thetas: tuple[float, ...]
    phis: tuple[float, ...]
    residual: float = 0.0

    def __post_init__(self) -> None:
        if len(self.thetas) != len(self.phis):
            raise ValueError("thetas and phis must have equal length")

    @property
    def layers(self) -> int:
        return len(self.thetas) - 1


# ---------------------------------------------------------------------------
# X-basis circuit evaluation
# ---------------------------------------------------------------------------


def _rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0.0], [0.0, np.exp(0.5j * theta)]], dtype=complex
    )


def _encoding(x: float) -> np.ndarray:
    s = math.sqrt(max(0.0, 1.0 - x * x))
    return np.array([[x, 1j * s], [1j * s, x]], dtype=complex)


def qsp_unitary(a: QspAngleSequence, x: float) -> np.ndarray:
    """The 2x2 unitary R_Z(t0) * prod_j [S(x) R_Z(tj)] at input x."""
    if not -1.0 <= x <= 1.0:
        raise ValueError(f"encoding input {x} outside [-1, 1]")
    u = _rz(a.angles[0])
    s = _encoding(x)
    for theta in a.angles[1:]:
        u = u @ s @ _rz(theta)
    return u


def qsp_block_values(angles: Sequence[float], xs: np.ndarray) -> np.ndarray:
    """Plus-state block values <+|U(x)|+> for a batch of inputs."""
    xs = np.asarray(xs, dtype=float)
    if np.any(np.abs(xs) > 1.0 + 1e-12):
        raise ValueError("encoding inputs outside [-1, 1]")
    xs = np.clip(xs, -1.0, 1.0)
    row = _batched_rows(np.asarray(angles, dtype=float), xs)
    return (row[:, 0] + row[:, 1]) / math.sqrt(2.0)


def _batched_rows(thetas: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Row vectors <+| R_Z(t0) prod_j [S(x) R_Z(tj)] for each x."""
    n = xs.shape[0]
    s = np.sqrt(np.clip(1.0 - xs * xs, 0.0, None))
    row = np.full((n, 2), 1.0 / math.sqrt(2.0), dtype=complex)
    e0 = np.exp(-0.5j * thetas)
    e1 = np.exp(0.5j * thetas)
    row = row * np.stack([np.full(n, e0[0]), np.full(n, e1[0])], axis=1)
    for j in range(1, len(thetas)):
        r0 = row[:, 0] * xs + row[:, 1] * (1j * s)
        r1 = row[:, 0] * (1j * s) + row[:, 1] * xs
        row = np.stack([r0 * e0[j], r1 * e1[j]], axis=1)
    return row


def _block_and_grad(thetas: np.ndarray, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Block values b(x) and gradient db/dtheta_j, vectorized over xs.

    Uses prefix rows and suffix columns around each Z rotation:
    db/dt_j = <+|prefix_j * dR_Z(t_j)/dt_j * suffix_j|+>.
    """
    nx, L1 = xs.shape[0], len(thetas)
    s = np.sqrt(np.clip(1.0 - xs * xs, 0.0, None))
    e0 = np.exp(-0.5j * thetas)
    e1 = np.exp(0.5j * thetas)

    prefix = np.empty((L1, nx, 2), dtype=complex)  # row just before R_Z(t_j)
    row = np.full((nx, 2), 1.0 / math.sqrt(2.0), dtype=complex)
    prefix[0] = row
    for j in range(L1 - 1):
        row = np.stack([row[:, 0] * e0[j], row[:, 1] * e1[j]], axis=1)
        r0 = row[:, 0] * xs + row[:, 1] * (1j * s)
        r1 = row[:, 0] * (1j * s) + row[:, 1] * xs
        row = np.stack([r0, r1], axis=1)
        prefix[j + 1] = row

    suffix = np.empty((L1, nx, 2), dtype=complex)  # column just after R_Z(t_j)
    col = np.full((nx, 2), 1.0 / math.sqrt(2.0), dtype=complex)
    suffix[L1 - 1] = col
    for j in range(L1 - 1, 0, -1):
        col = np.stack([col[:, 0] * e0[j], col[:, 1] * e1[j]], axis=1)
        c0 = xs * col[:, 0] + (1j * s) * col[:, 1]
        c1 = (1j * s) * col[:, 0] + xs * col[:, 1]
        col = np.stack([c0, c1], axis=1)
        suffix[j - 1] = col

    b = (
        prefix[L1 - 1, :, 0] * e0[L1 - 1] * suffix[L1 - 1, :, 0]
        + prefix[L1 - 1, :, 1] * e1[L1 - 1] * suffix[L1 - 1, :, 1]
    )
    grad = np.empty((nx, L1), dtype=complex)
    for j in range(L1):
        grad[:, j] = -0.5j * (
            prefix[j, :, 0] * e0[j] * suffix[j, :, 0]
            - prefix[j, :, 1] * e1[j] * suffix[j, :, 1]
        )
    return b, grad


# ---------------------------------------------------------------------------
# Chebyshev transforms at first-kind nodes
# ---------------------------------------------------------------------------


def _cheb_nodes(m: int) -> tuple[np.ndarray, np.ndarray]:
    theta = np.pi * (np.arange(m) + 0.5) / m
    return np.cos(theta), np.sin(theta)


def _cheb_coeffs(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients from values at the first-kind nodes (axis 0)."""
    m = values.shape[0]
    out = _fft.dct(values, type=2, axis=0) / m
    out[0] /= 2.0
    return out


# ---------------------------------------------------------------------------
# Synthesis: Newton on Chebyshev coefficients
# ---------------------------------------------------------------------------


def _target_cheb(p: ParityPolynomial) -> np.ndarray:
    if p.base.basis == "chebyshev":
        return np.asarray(p.base.coeffs, dtype=float)
    return np.asarray(_cheb.poly2cheb(p.base.coeffs), dtype=float)


def _zero_block_seed(L: int) -> np.ndarray:
    seed = np.zeros(L + 1)
    seed[0] = -np.pi
    return seed


def _residual_system(thetas: np.ndarray, nodes, a_slots, b_slots, target):
    xs, sines = nodes
    b, grad = _block_and_grad(thetas, xs)
    coeff_re = _cheb_coeffs(np.real(b))
    coeff_im = _cheb_coeffs(np.imag(b) / sines)
    res = np.concatenate([coeff_re[a_slots] - target, coeff_im[b_slots]])
    jac_re = _cheb_coeffs(np.real(grad))
    jac_im = _cheb_coeffs(np.imag(grad) / sines[:, None])
    jac = np.concatenate([jac_re[a_slots], jac_im[b_slots]], axis=0)
    return res, jac


def _newton_solve(thetas, nodes, a_slots, b_slots, target, tol, max_iter=60):
    res, jac = _residual_system(thetas, nodes, a_slots, b_slots, target)
    norm = np.linalg.norm(res)
    polish = 2  # extra steps after convergence push toward the machine floor
    for _ in range(max_iter):
        if norm <= tol:
            if polish == 0:
                return thetas, norm
            polish -= 1
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        scale = 1.0
        for _ in range(25):
            cand = thetas + scale * step
            cres, cjac = _residual_system(cand, nodes, a_slots, b_slots, target)
            cnorm = np.linalg.norm(cres)
            if cnorm < norm:
                thetas, res, jac, norm = cand, cres, cjac, cnorm
                break
            scale *= 0.5
        else:
            return thetas, norm
    return thetas, norm


def qsp_synthesize(
    p: ParityPolynomial,
    tol: float = 1e-8,
    max_restarts: int = 32,
    rng_seed: int = 20240811,
) -> QspAngleSequence:
    """Find angles whose plus-state block value reproduces p on [-1, 1].

    The realized block value is matched to p in Chebyshev coefficient space
    (a square system: the real part carries the parity-L coefficients, the
    imaginary part the complementary ones, which must vanish).  Damped
    Newton from the exact zero-block seed, with scale continuation and
    seeded random restarts as fallbacks.

    Raises QspSynthesisError with the best residual on failure.
    """
    target_full = _target_cheb(p)
    L = p.degree
    if p.degree % 2 != p.parity and not p.base.is_zero():
        raise ValueError("degree and parity of the target disagree")
    sup = p.sup_norm()
    if sup > 1.0 + 1e-12:
        raise ValueError(f"target sup norm {sup:.6g} exceeds 1 on [-1, 1]")

    if L == 0:
        c = float(np.clip(target_full[0], -1.0, 1.0))
        return QspAngleSequence((2.0 * math.acos(c),), residual=0.0)

    m = L + 1
    nodes = _cheb_nodes(m)
    a_slots = np.arange(L % 2, L + 1, 2)
    b_slots = np.arange((L - 1) % 2, L, 2)
    target = np.zeros(L + 1)
    target[: len(target_full)] = target_full
    target = target[a_slots]
    coeff_tol = tol / (4.0 * (L + 1))

    def attempt(seed: np.ndarray, scales: Sequence[float]) -> tuple[np.ndarray, float]:
        thetas = seed.copy()
        norm = np.inf
        for scale in scales:
            thetas, norm = _newton_solve(
                thetas, nodes, a_slots, b_slots, scale * target, coeff_tol
            )
            if norm > math.sqrt(coeff_tol):  # stage failed; no point continuing
                break
        return thetas, norm

    best_norm = np.inf
    schedules = [[1.0], [0.25, 0.5, 0.75, 0.9, 1.0]]
    rng = np.random.default_rng(rng_seed)
    seeds = [_zero_block_seed(L)]
    for sched in schedules:
        thetas, norm = attempt(seeds[0], sched)
        best_norm = min(best_norm, norm)
        if norm <= coeff_tol:
            return _verified(thetas, p, tol, best_norm)
    for _ in range(max_restarts):
        seed = _zero_block_seed(L) + rng.normal(0.0, 0.2, L + 1)
        thetas, norm = attempt(seed, [0.25, 0.5, 0.75, 0.9, 1.0])
        best_norm = min(best_norm, norm)
        if norm <= coeff_tol:
            return _verified(thetas, p, tol, best_norm)
    raise QspSynthesisError("qsp synthesis did not converge", best_norm)


def _verified(thetas: np.ndarray, p: ParityPolynomial, tol: float, norm: float) -> QspAngleSequence:
    grid = _cheb_nodes(4 * (p.degree + 1))[0]
    b = qsp_block_values(thetas, grid)
    resid = float(np.max(np.abs(b - p(grid))))
    if resid > tol:
        raise QspSynthesisError("converged in coefficients but grid residual high", resid)
    return QspAngleSequence(tuple(float(t) for t in thetas), residual=resid)


# ---------------------------------------------------------------------------
# Completion backend: spectral factorization + layer stripping
# ---------------------------------------------------------------------------


def qsp_synthesize_completion(p: ParityPolynomial, tol: float = 1e-7) -> QspAngleSequence:
    """Independent synthesis by completing p to a full unitary.

    Writes 1 - p(x)^2 = A(x)^2 + (1-x^2) B(x)^2 by pairing the roots of its
    Laurent lift (Fejer-Riesz factorization), sets P = p + iA, Q = iB, and
    strips layers from the top degree.  Reliable for degree up to ~16 in
    double precision; used as a test oracle against the Newton backend.
    """
    pw = p.base.to_power()
    L = p.degree
    if L == 0:
        c = float(np.clip(pw.coeffs[0], -1.0, 1.0))
        return QspAngleSequence((2.0 * math.acos(c),), residual=0.0)
    pc = np.zeros(L + 1)
    pc[: len(pw.coeffs)] = pw.coeffs

    r_power = -_np_poly.polymul(pc, pc)
    r_power[0] += 1.0  # 1 - p^2
    r_cheb = _cheb.poly2cheb(r_power)

    # Laurent lift H(z) = z^{2L} * R((z + 1/z)/2); coefficients from the
    # Chebyshev expansion of R: T_k contributes (z^k + z^-k)/2
    h = np.zeros(4 * L + 1)
    h[2 * L] = r_cheb[0]
    for k in range(1, len(r_cheb)):
        h[2 * L + k] += r_cheb[k] / 2.0
        h[2 * L - k] += r_cheb[k] / 2.0
    roots = _np_poly.polyroots(h)
    inside = list(roots[np.abs(roots) < 1.0 - 1e-7])
    on_circle = roots[np.abs(np.abs(roots) - 1.0) <= 1e-7]
    # |p| = 1 at isolated points puts even-multiplicity roots on the circle;
    # take half of each cluster (clusters are angle-coincident root pairs)
    if len(on_circle) % 2 != 0:
        raise QspSynthesisError("odd number of unit-circle roots", np.inf)
    if len(on_circle):
        order = np.argsort(np.angle(on_circle))
        ordered = on_circle[order]
        taken = 0
        i = 0
        while i < len(ordered):
            j = i + 1
            while j < len(ordered) and abs(ordered[j] - ordered[i]) < 1e-5:
                j += 1
            cluster = j - i
            if cluster % 2 != 0:
                raise QspSynthesisError("unpaired unit-circle root cluster", np.inf)
            inside.extend(ordered[i : i + cluster // 2])
            taken += cluster // 2
            i = j
    inside = np.asarray(inside)
    if len(inside) != 2 * L:
        raise QspSynthesisError(
            f"root pairing failed: {len(inside)} roots selected for degree {L}", np.inf
        )
    g = _np_poly.polyfromroots(inside)
    # normalize |G|^2 = H / z^{2L} on the unit circle
    zs = np.exp(1j * np.linspace(0.3, 2 * np.pi + 0.3, 37)[:-1])
    f_vals = _np_poly.polyval(zs, h) / zs ** (2 * L)
    g_vals = _np_poly.polyval(zs, g)
    ratio = np.real(f_vals) / np.abs(g_vals) ** 2
    kappa = math.sqrt(float(np.mean(ratio)))
    gamma = np.real(g) * kappa  # conjugate-closed roots give real coefficients

    a_cheb = np.zeros(L + 1)
    b_u = np.zeros(L)  # coefficients in the second-kind basis U_{k-1}
    a_cheb[0] = gamma[L]
    for k in range(1, L + 1):
        a_cheb[k] = gamma[L + k] + gamma[L - k]
        b_u[k - 1] = gamma[L + k] - gamma[L - k]
    a_power = _cheb.cheb2poly(a_cheb) if L > 0 else a_cheb
    b_power = _second_kind_to_power(b_u)

    big_p = pc.astype(complex) + 1j * np.asarray(a_power, dtype=complex).copy()
    big_p = _padded(big_p, L + 1)
    big_q = 1j * _padded(np.asarray(b_power, dtype=complex), L)

    phis = _strip_layers(big_p, big_q, L)
    thetas = tuple(-2.0 * phi for phi in phis)
    grid = _cheb_nodes(4 * (L + 1))[0]
    resid = float(np.max(np.abs(qsp_block_values(thetas, grid) - p(grid))))
    if resid > tol:
        raise QspSynthesisError("completion synthesis residual too high", resid)
    return QspAngleSequence(thetas, residual=resid)


def _padded(arr: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    out[: min(len(arr), n)] = arr[:n]
    return out


def _second_kind_to_power(b_u: np.ndarray) -> np.ndarray:
    """Power coefficients of sum_k b_u[k] * U_k(x)."""
    if len(b_u) == 0:
        return np.zeros(1)
    basis = [np.array([1.0]), np.array([0.0, 2.0])]
    while len(basis) < len(b_u):
        nxt = 2.0 * np.concatenate([[0.0], basis[-1]])
        nxt[: len(basis[-2])] -= basis[-2]
        basis.append(nxt)
    out = np.zeros(len(b_u))
    for k, c in enumerate(b_u):
        out[: k + 1] += c * basis[k][: k + 1]
    return out


def _strip_layers(big_p: np.ndarray, big_q: np.ndarray, L: int) -> list[float]:
    """Peel angles off (P, Q) from the top layer down."""
    phis = [0.0] * (L + 1)
    P, Q = big_p.copy(), big_q.copy()
    for layer in range(L, 0, -1):
        lead_p = P[layer]
        lead_q = Q[layer - 1]
        if abs(lead_q) < 1e-13 or abs(lead_p) < 1e-13:
            raise QspSynthesisError(
                f"degenerate leading coefficients at layer {layer}", np.inf
            )
        phi = 0.5 * np.angle(lead_p / lead_q)
        em, ep = np.exp(-1j * phi), np.exp(1j * phi)
        # P' = x P e^{-i phi} + (1 - x^2) Q e^{i phi}; Q' = x Q e^{i phi} - P e^{-i phi}
        newP = np.zeros(layer + 2, dtype=complex)
        newP[1 : layer + 2] += em * P[: layer + 1]
        newP[: layer] += ep * Q[:layer]
        newP[2 : layer + 2] -= ep * Q[:layer]
        newQ = np.zeros(layer + 1, dtype=complex)
        newQ[1 : layer + 1] += ep * Q[:layer]
        newQ[: layer + 1] -= em * P[: layer + 1]
        P = newP[:layer]
        Q = newQ[: max(layer - 1, 1)] if layer > 1 else np.zeros(1, dtype=complex)
        phis[layer] = float(phi)
    phis[0] = float(np.angle(P[0]))
    return phis


# ---------------------------------------------------------------------------
# Z-basis (trigonometric) circuits
# ---------------------------------------------------------------------------


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _z_encoding(x: float) -> np.ndarray:
    return np.array([[np.exp(0.5j * x), 0.0], [0.0, np.exp(-0.5j * x)]], dtype=complex)


def trig_qsp_unitary(params: TrigQspParams, x: float) -> np.ndarray:
    """R_Z(w) R_Y(t0) R_Z(p0) * prod_j [S(x) R_Y(tj) R_Z(pj)] at input x."""
    u = _rz(params.omega) @ _ry(params.thetas[0]) @ _rz(params.phis[0])
    s = _z_encoding(x)
    for theta, phi in zip(params.thetas[1:], params.phis[1:]):
        u = u @ s @ _ry(theta) @ _rz(phi)
    return u


def trig_block_values(params: TrigQspParams, xs: np.ndarray) -> np.ndarray:
    """Zero-state block values <0|U(x)|0> for a batch of inputs."""
    return np.array([trig_qsp_unitary(params, float(x))[0, 0] for x in xs])


def trig_monomial_params(c: complex, n: int) -> TrigQspParams:
    """Exact parameters realizing <0|U(x)|0> = c * exp(i n x), |c| <= 1.

    Positive frequencies ride the top-left diagonal of the encoding product;
    negative frequencies are reached by flipping into the bottom-right
    diagonal with a single Y rotation by pi in the last layer.
    """
    mag, arg = abs(c), float(np.angle(c))
    if mag > 1.0 + 1e-12:
        raise ValueError("coefficient magnitude exceeds 1")
    mag = min(mag, 1.0)
    layers = 2 * abs(n)
    if n == 0:
        return TrigQspParams(-2.0 * arg, (2.0 * math.acos(mag),), (0.0,))
    thetas = [0.0] * (layers + 1)
    phis = [0.0] * (layers + 1)
    if n > 0:
        thetas[0] = 2.0 * math.acos(mag)
        omega = -2.0 * arg
    else:
        thetas[0] = 2.0 * math.asin(mag)
        thetas[layers] = math.pi
        omega = 2.0 * (math.pi - arg)
    return TrigQspParams(omega, tuple(thetas), tuple(phis))


def trig_qsp_synthesize(
    coeffs: Mapping[int, complex],
    tol: float = 1e-8,
    max_restarts: int = 32,
    rng_seed: int = 20240811,
) -> TrigQspParams:
    """Find parameters realizing t(x) = sum_j c_j exp(i j x) as <0|U(x)|0>.

    A degree-L trigonometric target needs 2L layers (the encoding advances
    by half-integer frequencies).  Single-term targets use the exact
    construction; otherwise the grid residual is minimized by damped
    Gauss-Newton with restarts.
    """
    clean = {int(j): complex(c) for j, c in coeffs.items() if c != 0}
    if not clean:
        return TrigQspParams(0.0, (math.pi,), (0.0,))  # constant zero block
    if len(clean) == 1:
        (j, c), = clean.items()
        params = trig_monomial_params(c, j)
        return _trig_verified(params, clean, tol)

    half = max(abs(j) for j in clean)
    layers = 2 * half
    grid = np.linspace(0.0, 2.0 * np.pi, 4 * (2 * half + 1), endpoint=False)
    tvals = np.zeros(len(grid), dtype=complex)
    for j, c in clean.items():
        tvals += c * np.exp(1j * j * grid)
    if np.max(np.abs(tvals)) > 1.0 - 1e-9:
        raise ValueError("trig target must satisfy |t| < 1 strictly")

    def unpack(vec: np.ndarray) -> TrigQspParams:
        return TrigQspParams(
            float(vec[0]),
            tuple(vec[1 : layers + 2]),
            tuple(vec[layers + 2 :]),
        )

    def residual(vec: np.ndarray) -> np.ndarray:
        params = unpack(vec)
        b = trig_block_values(params, grid)
        return np.concatenate([np.real(b - tvals), np.imag(b - tvals)])

    rng = np.random.default_rng(rng_seed)
    best = (np.inf, None)
    n_params = 2 * (layers + 1) + 1
    for trial in range(max_restarts + 1):
        if trial == 0:
            vec0 = np.zeros(n_params)
            vec0[1] = math.pi  # zero-block seed: theta_0 = pi
        else:
            vec0 = rng.normal(0.0, 0.6, n_params)
        sol = _opt.least_squares(residual, vec0, method="lm", xtol=1e-15, ftol=1e-15)
        resid = float(np.max(np.abs(sol.fun)))
        if resid < best[0]:
            best = (resid, sol.x)
        if resid <= tol * 0.5:
            break
    if best[0] > tol:
        raise QspSynthesisError("trig synthesis did not converge", best[0])
    return _trig_verified(unpack(best[1]), clean, tol)


def _trig_verified(params: TrigQspParams, coeffs, tol: float) -> TrigQspParams:
    half = max(abs(j) for j in coeffs)
    grid = np.linspace(0.0, 2.0 * np.pi, 4 * (2 * half + 1), endpoint=False)
    tvals = np.zeros(len(grid), dtype=complex)
    for j, c in coeffs.items():
        tvals += c * np.exp(1j * j * grid)
    resid = float(np.max(np.abs(trig_block_values(params, grid) - tvals)))
    if resid > tol:
        raise QspSynthesisError("trig parameters failed grid verification", resid)
    return TrigQspParams(params.omega, params.thetas, params.phis, residual=resid)
