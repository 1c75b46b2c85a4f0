"""Hot numeric kernels, each in a numba flavour and a pure-numpy flavour.

The public names (``hadamard``, ``diagonal``, ``swap``, ``outcome_probs``,
``first_bit_success_batch``) are bound to the numba versions unless
``QPERC_NUMBA=0``. Both flavours stay reachable through ``implementation``
so tests and benchmarks can compare them directly.

Bit convention: qubit ``q`` of an ``nq``-qubit register lives at bit
``nq - 1 - q`` of the basis index (qubit 0 is the most significant bit).
"""
import math

import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, njit

INV_SQRT2 = 1.0 / math.sqrt(2.0)
# distance (in outcome bins) from an exact phase hit below which the
# removable singularity is resolved to probability 1
EXACT_PHASE_TOL = 1e-15
# explicit half-window (in outcomes) around each peak before Euler-Maclaurin takes over
PEAK_WINDOW = 1024
# at or below this register size the success sum runs over every outcome
DIRECT_SUM_MAX_TAU = 12


# ---------------------------------------------------------------------------
# statevector kernels: loop form (numba)
# ---------------------------------------------------------------------------

def _hadamard_loop(state, shift):
    step = 1 << shift
    size = state.shape[0]
    for base in range(0, size, 2 * step):
        for i in range(base, base + step):
            a = state[i]
            b = state[i + step]
            state[i] = (a + b) * INV_SQRT2
            state[i + step] = (a - b) * INV_SQRT2


def _diagonal_loop(state, cmask, shifts, factors):
    # for each non-trivial factor, walk only the amplitudes it scales: a
    # counter over the free bits gets zeros spliced in at the fixed (control
    # and target) positions, then the fixed bit values are ORed on
    nt = shifts.shape[0]
    fmask = cmask
    for t in range(nt):
        fmask |= 1 << shifts[t]
    fixed = np.empty(64, dtype=np.int64)
    nfixed = 0
    for p in range(64):
        if (fmask >> p) & 1:
            fixed[nfixed] = p
            nfixed += 1
    count = state.shape[0] >> nfixed
    for combo in range(1 << nt):
        f = factors[combo]
        if f == 1.0:
            continue
        vmask = cmask
        for t in range(nt):
            if (combo >> (nt - 1 - t)) & 1:
                vmask |= 1 << shifts[t]
        for k in range(count):
            i = k
            for c in range(nfixed):
                p = fixed[c]
                i = ((i >> p) << (p + 1)) | (i & ((1 << p) - 1))
            state[i | vmask] *= f


def _swap_loop(state, shift_a, shift_b):
    ma = 1 << shift_a
    mb = 1 << shift_b
    for i in range(state.shape[0]):
        if (i & ma) != 0 and (i & mb) == 0:
            j = i ^ (ma | mb)
            tmp = state[i]
            state[i] = state[j]
            state[j] = tmp


# ---------------------------------------------------------------------------
# statevector kernels: vectorized form (numpy)
# ---------------------------------------------------------------------------

def _np_hadamard(state, shift):
    step = 1 << shift
    view = state.reshape(-1, 2, step)
    a = view[:, 0, :].copy()
    b = view[:, 1, :]
    view[:, 0, :] = (a + b) * INV_SQRT2
    view[:, 1, :] = (a - b) * INV_SQRT2


def _np_diagonal(state, cmask, shifts, factors):
    nq = int(state.shape[0]).bit_length() - 1
    tensor = state.reshape((2,) * nq)
    # axis of a qubit whose bit shift is s
    base = [slice(None)] * nq
    for s in range(nq):
        if (cmask >> s) & 1:
            base[nq - 1 - s] = 1
    k = len(shifts)
    for combo in range(1 << k):
        factor = factors[combo]
        if factor == 1.0:
            continue
        index = list(base)
        for pos in range(k):
            bit = (combo >> (k - 1 - pos)) & 1
            index[nq - 1 - int(shifts[pos])] = bit
        tensor[tuple(index)] *= factor


def _np_swap(state, shift_a, shift_b):
    nq = int(state.shape[0]).bit_length() - 1
    tensor = state.reshape((2,) * nq)
    swapped = np.swapaxes(tensor, nq - 1 - shift_a, nq - 1 - shift_b).copy()
    state[:] = swapped.reshape(-1)


# ---------------------------------------------------------------------------
# phase-estimation outcome law
#
# For phi * 2^tau = j0 + f (0 <= f < 1) the outcome m = j - j0 has probability
#     sin^2(pi f) / (N^2 sin^2(pi (m - f) / N)),   N = 2^tau
# which is exact in double precision because scaling by 2^tau is exact.
# ---------------------------------------------------------------------------

def _split_phase(phi, tau):
    scaled = math.ldexp(phi, tau)
    j0 = math.floor(scaled)
    return scaled - j0, int(j0)


def _prob_offset_py(m, f, n_out, num):
    d = (f - m) / n_out
    if abs(d - round(d)) * n_out < EXACT_PHASE_TOL:
        return 1.0
    s = math.sin(math.pi * d)
    nf = float(n_out)
    return num / (nf * nf * s * s)


def _outcome_probs_loop(phi, tau, out):
    n_out = 1 << tau
    scaled = phi * n_out
    j0 = math.floor(scaled)
    f = scaled - j0
    num = math.sin(math.pi * f) ** 2
    for j in range(n_out):
        out[j] = _prob_offset(j - j0, f, n_out, num)


def _csc2_sum_em_py(a, b, f, n_out):
    """Euler-Maclaurin estimate of sum_{m=a}^{b} csc^2(pi (m - f) / N).

    Only valid on a stretch free of singularities and at least PEAK_WINDOW
    away from them, where the truncation error is far below 1e-15 relative.
    """
    c = math.pi / n_out
    ua = c * (a - f)
    ub = c * (b - f)
    sa = 1.0 / math.sin(ua)
    sb = 1.0 / math.sin(ub)
    ca = math.cos(ua) * sa
    cb = math.cos(ub) * sb
    ga = sa * sa
    gb = sb * sb
    integral = (ca - cb) / c
    d1a = -2.0 * ga * ca * c
    d1b = -2.0 * gb * cb * c
    d3a = (-8.0 * ga * ca ** 3 - 16.0 * ga * ga * ca) * c ** 3
    d3b = (-8.0 * gb * cb ** 3 - 16.0 * gb * gb * cb) * c ** 3
    return integral + 0.5 * (ga + gb) + (d1b - d1a) / 12.0 - (d3b - d3a) / 720.0


def _block_mass_py(f, j0, tau, lo, hi):
    """Total probability of outcomes j in [lo, hi) for phi * 2^tau = j0 + f."""
    n_out = 1 << tau
    num = math.sin(math.pi * f) ** 2
    a = lo - j0
    b = hi - 1 - j0
    total = 0.0
    if n_out <= 4 * PEAK_WINDOW:
        for m in range(a, b + 1):
            total += _prob_offset(m, f, n_out, num)
        return total
    # peaks sit at m in {0, 1} + k*N for k in {-1, 0, 1}
    w = PEAK_WINDOW
    cursor = a
    for k in (-1, 0, 1):
        lo_w = k * n_out - w
        hi_w = k * n_out + 1 + w
        if hi_w < cursor or lo_w > b:
            continue
        if lo_w > cursor:
            if num > 0.0:
                total += num / (float(n_out) ** 2) * _csc2_sum_em(cursor, lo_w - 1, f, n_out)
            cursor = lo_w
        stop = min(hi_w, b)
        for m in range(cursor, stop + 1):
            total += _prob_offset(m, f, n_out, num)
        cursor = stop + 1
        if cursor > b:
            break
    if cursor <= b and num > 0.0:
        total += num / (float(n_out) ** 2) * _csc2_sum_em(cursor, b, f, n_out)
    return total


def _first_bit_success_loop(phis, tau, out):
    half = 1 << (tau - 1)
    n_out = 1 << tau
    for i in range(phis.shape[0]):
        phi = phis[i]
        scaled = phi * n_out
        j0 = math.floor(scaled)
        f = scaled - j0
        if phi >= 0.5:
            out[i] = _block_mass(f, j0, tau, half, n_out)
        else:
            out[i] = _block_mass(f, j0, tau, 0, half)


# ---------------------------------------------------------------------------
# phase-estimation outcome law: vectorized form (numpy)
# ---------------------------------------------------------------------------

def _np_prob_table(f, m, n_out, num):
    d = (f - m) / n_out
    s = np.sin(np.pi * d)
    exact = np.abs(d - np.round(d)) * n_out < EXACT_PHASE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        p = num / (float(n_out) ** 2 * s * s)
    return np.where(exact, 1.0, p)


def _np_outcome_probs(phi, tau, out):
    n_out = 1 << tau
    f, j0 = _split_phase(phi, tau)
    num = math.sin(math.pi * f) ** 2
    m = np.arange(n_out, dtype=np.float64) - j0
    out[:] = _np_prob_table(f, m, n_out, num)


def _np_block_mass(f, j0, tau, lo, hi):
    n_out = 1 << tau
    num = math.sin(math.pi * f) ** 2
    a = lo - j0
    b = hi - 1 - j0
    if n_out <= 4 * PEAK_WINDOW:
        m = np.arange(a, b + 1, dtype=np.float64)
        return float(_np_prob_table(f, m, n_out, num).sum())
    w = PEAK_WINDOW
    total = 0.0
    cursor = a
    for k in (-1, 0, 1):
        lo_w = k * n_out - w
        hi_w = k * n_out + 1 + w
        if hi_w < cursor or lo_w > b:
            continue
        if lo_w > cursor:
            if num > 0.0:
                total += num / n_out ** 2 * _csc2_sum_em_py(cursor, lo_w - 1, f, n_out)
            cursor = lo_w
        stop = min(hi_w, b)
        m = np.arange(cursor, stop + 1, dtype=np.float64)
        total += float(_np_prob_table(f, m, n_out, num).sum())
        cursor = stop + 1
        if cursor > b:
            break
    if cursor <= b and num > 0.0:
        total += num / n_out ** 2 * _csc2_sum_em_py(cursor, b, f, n_out)
    return total


def _np_first_bit_success(phis, tau, out, chunk=4096):
    n_out = 1 << tau
    half = n_out >> 1
    if tau <= DIRECT_SUM_MAX_TAU:
        m_all = np.arange(n_out, dtype=np.float64)
        for start in range(0, phis.shape[0], chunk):
            block = phis[start:start + chunk]
            scaled = np.ldexp(block, tau)
            j0 = np.floor(scaled)
            f = scaled - j0
            num = np.sin(np.pi * f) ** 2
            table = _np_prob_table(f[:, None], m_all[None, :] - j0[:, None], n_out, num[:, None])
            upper = table[:, half:].sum(axis=1)
            lower = table[:, :half].sum(axis=1)
            out[start:start + chunk] = np.where(block >= 0.5, upper, lower)
        return
    for i, phi in enumerate(phis):
        f, j0 = _split_phase(float(phi), tau)
        if phi >= 0.5:
            out[i] = _np_block_mass(f, j0, tau, half, n_out)
        else:
            out[i] = _np_block_mass(f, j0, tau, 0, half)


# ---------------------------------------------------------------------------
# binding
# ---------------------------------------------------------------------------

_np_impl = {
    "hadamard": _np_hadamard,
    "diagonal": _np_diagonal,
    "swap": _np_swap,
    "outcome_probs": _np_outcome_probs,
    "first_bit_success": _np_first_bit_success,
}

# Loops resolve these names at compile time, so bind compiled callees first.
if HAVE_NUMBA:
    _prob_offset = njit(_prob_offset_py)
    _csc2_sum_em = njit(_csc2_sum_em_py)
    _block_mass = njit(_block_mass_py)
    _nb_impl = {
        "hadamard": njit(_hadamard_loop),
        "diagonal": njit(_diagonal_loop),
        "swap": njit(_swap_loop),
        "outcome_probs": njit(_outcome_probs_loop),
        "first_bit_success": njit(_first_bit_success_loop),
    }
else:  # pragma: no cover
    _prob_offset = _prob_offset_py
    _csc2_sum_em = _csc2_sum_em_py
    _block_mass = _block_mass_py
    _nb_impl = dict(_np_impl)

BACKEND = "numba" if USE_NUMBA else "numpy"
_impl = _nb_impl if USE_NUMBA else _np_impl


def implementation(name, backend=None):
    """Return kernel ``name`` for ``backend`` ('numba' or 'numpy'; default: active)."""
    if backend is None:
        return _impl[name]
    if backend == "numba":
        return _nb_impl[name]
    if backend == "numpy":
        return _np_impl[name]
    raise ValueError(f"unknown kernel backend {backend!r}")


def set_backend(backend: str) -> str:
    """Switch the active backend at runtime; returns the previous one."""
    global BACKEND, _impl
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {backend!r}")
    previous = BACKEND
    BACKEND = backend
    _impl = _nb_impl if backend == "numba" else _np_impl
    return previous


def hadamard(state, shift):
    _impl["hadamard"](state, shift)


def diagonal(state, cmask, shifts, factors):
    _impl["diagonal"](state, cmask, shifts, factors)


def swap(state, shift_a, shift_b):
    _impl["swap"](state, shift_a, shift_b)


def outcome_probs(phi, tau):
    out = np.empty(1 << tau, dtype=np.float64)
    _impl["outcome_probs"](float(phi), int(tau), out)
    return out


def first_bit_success_batch(phis, tau):
    phis = np.ascontiguousarray(phis, dtype=np.float64)
    out = np.empty(phis.shape[0], dtype=np.float64)
    _impl["first_bit_success"](phis, int(tau), out)
    return out
