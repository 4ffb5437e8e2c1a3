"""The calibrated sign and normalization table used across the package.

Phase-space calculus is riddled with sign choices (orientation of the
symplectic form, the direction of the Poisson bracket, the phase of the
oscillatory product kernel, the generator sign of translation operators).
Textbooks disagree, and mixing two of them silently produces results that
are wrong by a sign or a factor of two in the first correction term.

This package therefore fixes one internally consistent convention stack,
anchored by a single calibration identity of operator calculus:

    x * xi  =  x xi + i hbar / 2          (Weyl ordering of x and momentum)

where ``*`` is the Moyal product.  Every other entry below is forced by
that anchor, and each one has a dedicated regression test.  Any change
that breaks an entry breaks the calibration suite.

Entries
-------
poisson_bracket
    {A,B} = sum_k (d_xi_k A)(d_x_k B) - (d_x_k A)(d_xi_k B).
    Note this is the negative of the most common textbook sign, so
    {x, xi} = -1.  All brackets in the package use this one convention.
symplectic_form
    sigma(Y, X) = eta.x - y.xi for Y = (y, eta), X = (x, xi); the linear
    form L_Y(X) = sigma(Y, X).
star_series
    A * B = sum_j hbar^j C_j(A, B) with
    C_j = 2^-j sum_{|a|+|b|=j} (-1)^|b| / (a! b!) (D_x^b d_xi^a A)(D_x^a d_xi^b B),
    D = -i grad.  On polynomials the sum terminates at j = min(deg A, deg B).
    Consequences: C_1 = (-i/2){A,B} and the calibration anchor above.
moyal_bracket
    {A,B}_star = (i/hbar)(A*B - B*A) = sum_{j odd} hbar^(j-1) {A,B}_j with
    {A,B}_j = i(C_j(A,B) - C_j(B,A)); even-j terms vanish identically.
collapse_right / collapse_left
    Star product against a pure phase exponential E_s = exp(i s L_Y):
        F * E_s = F(X + s hbar Y / 2) E_s(X)
        E_s * F = E_s(X) F(X - s hbar Y / 2)
    The shift sign is fixed by matching the terminating series on
    polynomial x exponential products (not copied from any source).
quadrature_phase
    Integral form of the product:
    (A*B)(X) = (pi hbar)^(-2d) Int exp(-(2i/hbar) sigma(u,v)) A(X+u) B(X+v) du dv.
    The minus sign in the phase is required for consistency with
    star_series (the opposite orientation yields x * xi = x xi - i hbar/2).
translation_operator
    (T(Y) psi)(x) = exp((i/hbar) eta (x - y/2)) psi(x - y), i.e.
    T(Y) = exp(+(i/hbar) Op(L_Y)).  This choice centers the coherent state
    T(Y) phi_0 at the phase-space point +Y, which the semiclassical limit
    <phi_Y, Op(A) phi_Y> -> A(Y) requires.  Conjugation identities then
    read T(sY) x T(sY)^* = x - s y and T(sY) p T(sY)^* = p - s eta.
covariant_quantization
    Op(A) = (2 pi)^(-2d) Int A_sigma(Y) T(Y) dY at hbar = 1, where
    A_sigma(Y) = Int A(z) exp(-i sigma(Y, z)) dz.  The constant is forced
    by Op(exp(i L_Z)) = T(Z) together with the inversion formula for the
    symplectic Fourier transform.
heisenberg_evolution
    A(t) = exp(i t H / hbar) Op(A) exp(-i t H / hbar).  Its Weyl symbol is
    transported by the flow of dx/dt = +d_xi H, dxi/dt = -d_x H, which is
    the classical_flow below run backwards in time.
classical_flow
    dA/dt = {A, H} under the bracket above, i.e. the characteristic flow
    dx/dt = -d_xi H, dxi/dt = +d_x H.  For the harmonic oscillator
    H = (x^2 + xi^2)/2 this gives dx/dt = -xi at t = 0.
"""

from __future__ import annotations

CONVENTIONS: dict[str, str] = {
    "poisson_bracket": "{A,B} = d_xi A . d_x B - d_x A . d_xi B  ({x,xi} = -1)",
    "symplectic_form": "sigma(Y,X) = eta.x - y.xi ; L_Y(X) = sigma(Y,X)",
    "star_series": (
        "A*B = sum_j hbar^j C_j ; "
        "C_j = 2^-j sum_{|a|+|b|=j} (-1)^|b|/(a!b!) (D_x^b d_xi^a A)(D_x^a d_xi^b B), D = -i grad"
    ),
    "calibration": "x * xi = x xi + i hbar/2",
    "moyal_bracket": "{A,B}_star = (i/hbar)(A*B - B*A) = sum_{j odd} hbar^(j-1) i(C_j(A,B)-C_j(B,A))",
    "collapse_right": "F * e^{i s L_Y} = F(X + s hbar Y/2) e^{i s L_Y}",
    "collapse_left": "e^{i s L_Y} * F = e^{i s L_Y} F(X - s hbar Y/2)",
    "quadrature_phase": "(A*B)(X) = (pi hbar)^(-2d) II e^{-(2i/hbar) sigma(u,v)} A(X+u) B(X+v) du dv",
    "translation_operator": "(T(Y) psi)(x) = e^{(i/hbar) eta (x - y/2)} psi(x - y)",
    "translation_conjugation": "T(sY) x T(sY)^* = x - s y ;  T(sY) p T(sY)^* = p - s eta",
    "covariant_quantization": "Op(A) = (2pi)^(-2d) I A_sigma(Y) T(Y) dY at hbar = 1",
    "heisenberg_evolution": "A(t) = e^{i t H/hbar} Op(A) e^{-i t H/hbar}",
    "classical_flow": "dx/dt = -d_xi H, dxi/dt = +d_x H  (flow of dA/dt = {A,H})",
}
