"""Matrix-level Weyl quantization on a periodic position grid (d = 1).

Operators are dense matrices acting directly on sample vectors; inner
products carry the quadrature weight dx = 2L/N, so position symbols
quantize to plain diagonal matrices and the identity symbol to the
identity matrix.

Two quantization routes are implemented and cross-validated:

* `quantize_kernel` discretizes the kernel formula
      K(x, y) = (2 pi hbar)^-1 Int e^{i (x - y) eta / hbar} A((x+y)/2, eta) d eta
  over the grid's own momentum lattice (a length-N transform per midpoint
  diagonal), giving M[i, j] = (1/N) sum_k A((x_i+x_j)/2, p_k) e^{2 pi i k (i-j)/N}.

* `quantize_via_covariant` superposes Heisenberg translations weighted by
  the symplectic Fourier transform of the symbol (hbar = 1),
      Op(A) = (2 pi)^{-2} II A_sigma(Y) T(Y) dY.

The translation operator follows the convention table:
(T(Y) psi)(x) = e^{(i/hbar) eta (x - y/2)} psi(x - y), which centers
coherent states at +Y; conjugation identities then hold in the order
T(sY) x T(sY)^* = x - s y (see conventions.py).
"""

from __future__ import annotations

import warnings
from math import pi

import numpy as np

from .evaluators import SymbolEvaluator
from .grid import GridSpec, GridSymbol
from .polysym import PolySymbol

NYQUIST_TAIL = 1e-8


class XGrid:
    """Periodic position grid: N points on [-L, L), plus hbar."""

    __slots__ = ("n", "box", "hbar")

    def __init__(self, n: int, box: float, hbar: float):
        if n < 16 or n & (n - 1):
            raise ValueError("grid size must be a power of two, at least 16")
        if box <= 0 or hbar <= 0:
            raise ValueError("box half-length and hbar must be positive")
        self.n = int(n)
        self.box = float(box)
        self.hbar = float(hbar)

    @property
    def step(self) -> float:
        return 2.0 * self.box / self.n

    def axis(self) -> np.ndarray:
        return -self.box + self.step * np.arange(self.n)

    def omega(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, self.step)

    def momenta(self) -> np.ndarray:
        return self.hbar * self.omega()

    def __eq__(self, other) -> bool:
        return isinstance(other, XGrid) and \
            (self.n, self.box, self.hbar) == (other.n, other.box, other.hbar)

    def __repr__(self) -> str:
        return f"XGrid(n={self.n}, box={self.box}, hbar={self.hbar})"


class WaveVector:
    """A sampled wavefunction with the trapezoid-weight inner product."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: XGrid, values: np.ndarray):
        v = np.ascontiguousarray(values, dtype=complex)
        if v.shape != (grid.n,):
            raise ValueError("wavefunction length does not match the grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite wavefunction")
        self.grid = grid
        self.values = v

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.step))

    def inner(self, other: "WaveVector") -> complex:
        return complex(np.vdot(self.values, other.values) * self.grid.step)


class OperatorMatrix:
    """Dense operator in the sample representation (psi -> entries @ psi)."""

    __slots__ = ("grid", "entries")

    def __init__(self, grid: XGrid, entries: np.ndarray):
        m = np.ascontiguousarray(entries, dtype=complex)
        if m.shape != (grid.n, grid.n):
            raise ValueError("operator shape does not match the grid")
        if not np.all(np.isfinite(m)):
            raise ValueError("non-finite operator entries")
        self.grid = grid
        self.entries = m

    def apply(self, psi: WaveVector) -> WaveVector:
        return WaveVector(self.grid, self.entries @ psi.values)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.grid != other.grid:
            raise ValueError("operator grids do not match")
        return OperatorMatrix(self.grid, self.entries @ other.entries)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.grid, self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.grid, self.entries - other.entries)

    def scaled(self, c) -> "OperatorMatrix":
        return OperatorMatrix(self.grid, self.entries * c)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(self.grid, self.entries.conj().T)

    def hermiticity_defect(self) -> float:
        scale = max(float(np.max(np.abs(self.entries))), 1e-300)
        return float(np.max(np.abs(self.entries - self.entries.conj().T)) / scale)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries))


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    return A @ B - B @ A


# ---------------------------------------------------------------- quantization

def quantize_kernel(A: SymbolEvaluator, grid: XGrid,
                    spectral: bool = False) -> OperatorMatrix:
    """Weyl quantization through the kernel formula on a momentum lattice.

    Real symbols give Hermitian matrices at machine precision.  Two
    lattices are offered:

    * default (decaying symbols): momentum spacing pi hbar / (2L), which
      pushes the kernel's periodization images out to |x - y| = 4L, so no
      alias ridge enters the stored matrix; correct to the symbol's own
      kernel decay.
    * ``spectral=True`` (polynomial symbols): the grid's own N-point
      momentum lattice, producing the exact periodic spectral operator
      (position polynomials become multiplication matrices, xi the
      spectral momentum matrix).  Decaying symbols quantized this way pick
      up a kernel image along |x - y| = 2L.

    A warning with the measured band-edge tail is emitted when a symbol on
    the default path still has mass at the momentum band edge.
    """
    n = grid.n
    mids = -grid.box + 0.5 * grid.step * np.arange(2 * n - 1)
    if spectral:
        p = grid.momenta()
        vals = A(mids[:, None], p[None, :])             # [midpoint, momentum]
        G = np.fft.ifft(vals, axis=1)                   # [midpoint, (i-j) mod N]
        idx = np.arange(n)
        S = idx[:, None] + idx[None, :]
        R = (idx[:, None] - idx[None, :]) % n
        return OperatorMatrix(grid, G[S, R])
    p = grid.hbar * 2.0 * np.pi * np.fft.fftfreq(2 * n, grid.step)
    vals = A(mids[:, None], p[None, :])                 # [midpoint, 2N momenta]
    peak = float(np.max(np.abs(vals)))
    if peak > 0:
        edge = float(np.max(np.abs(vals[:, n])))
        if edge / peak > NYQUIST_TAIL:
            warnings.warn(f"symbol tail fraction {edge / peak:.3e} at the momentum "
                          "band edge; use spectral=True for polynomial symbols",
                          stacklevel=2)
    G = np.fft.ifft(vals, axis=1)                       # [midpoint, (i-j) mod 2N]
    idx = np.arange(n)
    S = idx[:, None] + idx[None, :]
    R = (idx[:, None] - idx[None, :]) % (2 * n)
    return OperatorMatrix(grid, G[S, R])


def _half_step_shift(grid: XGrid) -> np.ndarray:
    """The band-limited unitary (S psi)(x) = psi(x + dx/2) as a matrix."""
    n = grid.n
    ramp = np.exp(1j * grid.omega() * grid.step / 2.0)
    return np.fft.ifft(np.fft.fft(np.eye(n), axis=0) * ramp[:, None], axis=0)


def _edge_taper(grid: XGrid, start: float = 0.8) -> np.ndarray:
    """C^2 roll-off from 1 to 0 over [start * L, L], symmetric in |x|."""
    s = (np.abs(grid.axis()) - start * grid.box) / ((1.0 - start) * grid.box)
    s = np.clip(s, 0.0, 1.0)
    return 1.0 - s ** 3 * (s * (6.0 * s - 15.0) + 10.0)


def symbol_from_operator(M: OperatorMatrix) -> GridSymbol:
    """Weyl symbol of an operator: A(x, xi) = Int e^{-i xi t / hbar} K(x + t/2, x - t/2) dt.

    The multiplication part (matrix diagonal) maps exactly to its flat
    symbol.  For the rest, the t-quadrature runs over the full lattice
    t = tau dx, |t| < L: even offsets read the stored kernel along cross
    diagonals; odd offsets come from the kernel of S M S with S the exact
    half-step spectral shift, whose cross diagonals sit at midpoint x_i
    and odd t.  The off-diagonal kernel is edge-tapered before the shift
    because the discrete kernel is discontinuous across the periodic seam
    at the anti-diagonal corners (the t-periodization image); the taper
    touches only exponentially small entries for interior symbols.  The
    result lives on the square phase-space grid whose xi axis equals the
    position axis.
    """
    grid = M.grid
    n = grid.n
    dx = grid.step
    spec = GridSpec(n, grid.box, grid.hbar)
    m = np.diag(M.entries).copy()
    if np.array_equal(M.entries, np.diag(m)):
        # pure multiplication operator: flat symbol, exactly
        return GridSymbol(spec, np.repeat(m[:, None], n, axis=1))
    w = _edge_taper(grid)
    Kt = w[:, None] * (M.entries / dx) * w[None, :]    # seam-safe tapered kernel
    S = _half_step_shift(grid)
    Kodd = S @ Kt @ S                                  # kernel at (x + h, y - h), h = dx/2

    idx = np.arange(n)
    rs = np.arange(-n // 4, n // 4)                    # |t| < L: beyond, the t-periodization image leaks in
    A1 = (idx[:, None] + rs[None, :]) % n
    A2 = (idx[:, None] - rs[None, :]) % n
    Ge = Kt[A1, A2]                                    # t = 2 r dx
    Go = Kodd[A1, A2]                                  # t = 2 r dx + dx
    xi = grid.axis()
    te = 2.0 * rs * dx
    Ee = np.exp(-1j * np.outer(te, xi) / grid.hbar) * dx
    Eo = np.exp(-1j * np.outer(te + dx, xi) / grid.hbar) * dx
    samples = Ge @ Ee + Go @ Eo
    return GridSymbol(spec, samples)


def quantize_via_covariant(A: SymbolEvaluator, grid: XGrid,
                           eta_box: float | None = None,
                           n_eta: int | None = None) -> OperatorMatrix:
    """Second quantization route: superposed translations at hbar = 1.

    Op(A) = (2 pi)^{-2} II A_sigma(y, eta) T(y, eta) dy d eta with the
    y-quadrature on the position lattice (translations become exact index
    rolls) and A_sigma computed by direct quadrature on the phase grid.
    """
    if abs(grid.hbar - 1.0) > 1e-12:
        raise ValueError("the covariant route is pinned to hbar = 1")
    n = grid.n
    L = grid.box
    x = grid.axis()
    eta_box = L if eta_box is None else float(eta_box)
    n_eta = n if n_eta is None else int(n_eta)
    deta = 2.0 * eta_box / n_eta
    eta = -eta_box + deta * np.arange(n_eta)

    # A_sigma(y, eta) = Int A(z) e^{-i (eta z_x - y z_xi)} dz on the phase grid
    Az = A(x[:, None], x[None, :])                      # [z_x, z_xi]
    Ee = np.exp(-1j * np.outer(eta, x))                 # [eta, z_x]
    Ey = np.exp(1j * np.outer(x, x))                    # [z_xi, y]
    Asig = (Ee @ Az @ Ey).T * grid.step ** 2            # [y, eta]

    # accumulate translations: T(y_m, eta) psi = e^{i eta (x - y_m/2)} psi(x - y_m)
    weight = grid.step * deta / (2.0 * np.pi) ** 2
    out = np.zeros((n, n), dtype=complex)
    idx = np.arange(n)
    for m in range(n):
        y = x[m]
        g = Asig[m, :] @ np.exp(1j * np.outer(eta, x - 0.5 * y))   # vector over i
        cols = (idx - (m - n // 2)) % n
        out[idx, cols] += weight * g
    return OperatorMatrix(grid, out)


# ---------------------------------------------------------------- translations

def heisenberg_translation(Y, grid: XGrid) -> OperatorMatrix:
    """The phase-space translation unitary T(Y) as a matrix.

    (T(Y) psi)(x) = e^{(i/hbar) eta (x - y/2)} psi(x - y); the shift acts
    by a Fourier phase ramp, exact on band-limited periodic data.
    """
    y, eta = float(Y[0]), float(Y[1])
    if abs(y) >= grid.box / 2.0:
        raise ValueError("translation leaves the safe half-box")
    n = grid.n
    x = grid.axis()
    om = grid.omega()
    F = np.fft.fft(np.eye(n), axis=0)
    S = np.fft.ifft(F * np.exp(-1j * om * y)[:, None], axis=0)
    phase = np.exp(1j * eta * (x - 0.5 * y) / grid.hbar)
    return OperatorMatrix(grid, phase[:, None] * S)


def coherent_state(Y, grid: XGrid) -> WaveVector:
    """phi_Y = T(Y) phi_0 with phi_0(x) = (pi hbar)^{-1/4} e^{-x^2 / 2 hbar}."""
    y, eta = float(Y[0]), float(Y[1])
    x = grid.axis()
    vals = (pi * grid.hbar) ** -0.25 \
        * np.exp(-(x - y) ** 2 / (2.0 * grid.hbar)) \
        * np.exp(1j * eta * (x - 0.5 * y) / grid.hbar)
    return WaveVector(grid, vals)


def expectation(M: OperatorMatrix, psi: WaveVector) -> complex:
    """<psi, M psi> under the quadrature-weighted inner product."""
    return complex(np.vdot(psi.values, M.entries @ psi.values) * psi.grid.step)


def position_operator(grid: XGrid) -> OperatorMatrix:
    return OperatorMatrix(grid, np.diag(grid.axis().astype(complex)))


def momentum_operator(grid: XGrid) -> OperatorMatrix:
    n = grid.n
    F = np.fft.fft(np.eye(n), axis=0)
    P = np.fft.ifft(F * grid.momenta()[:, None], axis=0)
    return OperatorMatrix(grid, P)


# ---------------------------------------------------------------- dynamics

def commutator_bracket(A: SymbolEvaluator, H: SymbolEvaluator, grid: XGrid,
                       spectral_h: bool = False) -> OperatorMatrix:
    """(i/hbar) [Op(A), Op(H)]; set spectral_h for a polynomial H."""
    opa = quantize_kernel(A, grid)
    oph = quantize_kernel(H, grid, spectral=spectral_h)
    return commutator(opa, oph).scaled(1j / grid.hbar)


def heisenberg_evolve(A: OperatorMatrix, H: OperatorMatrix, t: float) -> OperatorMatrix:
    """A(t) = e^{i t H / hbar} A e^{-i t H / hbar}, via eigendecomposition.

    H must be Hermitian (checked); the evolution is unitary, so the
    spectrum of A is preserved.
    """
    if A.grid != H.grid:
        raise ValueError("operator grids do not match")
    if H.hermiticity_defect() > 1e-10:
        raise ValueError("Hamiltonian matrix is not Hermitian")
    evals, V = np.linalg.eigh(H.entries)
    U = (V * np.exp(1j * t * evals / H.grid.hbar)) @ V.conj().T
    return OperatorMatrix(A.grid, U @ A.entries @ U.conj().T)


def _expm_series(M: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """(e^M, phi1(M)) with phi1(M) = sum M^k / (k+1)!, by scaling and squaring."""
    norm = float(np.max(np.abs(M)))
    s = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    Ms = M / 2 ** s
    n = M.shape[0]
    E = np.eye(n)
    P = np.eye(n)
    PH = np.eye(n)
    term = np.eye(n)
    k = 1
    while float(np.max(np.abs(term))) > tol:
        term = term @ Ms / k
        E = E + term
        PH = PH + term / (k + 1)
        k += 1
        if k > 60:
            break
    for _ in range(s):
        # e^{2Z} = (e^Z)^2 ; phi1(2Z) = (e^Z + I) phi1(Z) / 2
        PH = (E + np.eye(n)) @ PH / 2.0
        E = E @ E
    return E, PH


def quadratic_flow(H: PolySymbol, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Affine flow map (E, u) of dA/dt = {A, H} for quadratic H, d = 1.

    The characteristic system is dx/dt = -d_xi H, dxi/dt = +d_x H (the
    bracket convention of this package); the returned pair satisfies
    Phi_t(X) = E X + u.
    """
    if H.shape.d != 1 or H.shape.has_y or H.shape.has_hbar:
        raise ValueError("flow requires a d = 1 polynomial in X only")
    if H.degree() > 2:
        raise ValueError("quadratic flow needs deg H <= 2")

    def affine_parts(p):
        cx = complex(p.terms.get((1, 0), 0))
        cxi = complex(p.terms.get((0, 1), 0))
        c0 = complex(p.terms.get((0, 0), 0))
        return float(cx.real), float(cxi.real), float(c0.real)

    hx = H.partial("x")
    hxi = H.partial("xi")
    for c in list(hx.terms.values()) + list(hxi.terms.values()):
        if c.im != 0:
            raise ValueError("flow requires a real Hamiltonian")
    ax, axi, a0 = affine_parts(hxi)     # d_xi H
    bx, bxi, b0 = affine_parts(hx)      # d_x H
    M = np.array([[-ax, -axi], [bx, bxi]])
    v = np.array([-a0, b0])
    E, PH = _expm_series(t * M)
    u = t * (PH @ v)
    return E, u


def classical_evolve_quadratic(A: PolySymbol, H: PolySymbol, t: float) -> SymbolEvaluator:
    """A composed with the time-t flow of H (deg H <= 2), exact composition.

    The flow matrix involves transcendental functions of t, so the result
    carries float coefficients; the polynomial structure is exact.
    """
    E, u = quadratic_flow(H, t)
    return SymbolEvaluator.from_polysymbol(A).compose_affine(E, u)


def evolve_evaluator(A: SymbolEvaluator, H: PolySymbol, t: float) -> SymbolEvaluator:
    """Transport any evaluator along the time-t flow of a quadratic H."""
    E, u = quadratic_flow(H, t)
    return A.compose_affine(E, u)


def egorov_compare(A: SymbolEvaluator, H: PolySymbol, t: float, grid: XGrid) -> dict:
    """Evolved Weyl symbol vs. classically transported symbol, quadratic H.

    The quantum side uses A(t) = e^{itH/hbar} Op(A) e^{-itH/hbar}, whose
    symbol is transported by the backward flow of the package's bracket
    convention; the classical side therefore composes with the time -t
    flow.  Exact in the continuum; the report is pure discretization.
    """
    from .grid import sample

    opa = quantize_kernel(A, grid)
    Hev = SymbolEvaluator.from_polysymbol(H)
    oph = quantize_kernel(Hev, grid, spectral=True)
    evolved = heisenberg_evolve(opa, oph, t)
    sym = symbol_from_operator(evolved)

    transported = evolve_evaluator(A, H, -t)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        ref = sample(transported, sym.spec)
    mask = sym.spec.interior_mask()
    diff = float(np.max(np.abs((sym.samples - ref.samples)[mask])))
    scale = float(np.max(np.abs(ref.samples[mask])))
    return {
        "interior_sup_mismatch": diff,
        "reference_sup": scale,
        "relative_mismatch": diff / scale if scale > 0 else diff,
        "time": float(t),
    }
