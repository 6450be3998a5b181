"""Group Fourier transform as truncated operator matrices.

The induced operator acts by pi(f) Psi(h) = int_K fhat2(h k^{-1}, Ad(h) H)
Psi(k) dk.  Matrix entries against the covariant basis are product-rule
double quadratures over K x K; for separable terms the kernel factorizes
through matrix coefficients, so each entry is evaluated as a product of two
single quadratures with values identical to the naive double sum.  The
K-dual entries are the plain integrated representations tau_lambda(f), and
the zero-point operator is their block sum over the branching K-types.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dual import GAMMA2, DualPoint
from .errors import QuadratureOrderTooLow
from .induction import PeterWeylBasis, peter_weyl_basis
from .pairs import stabilizer

ENTRY_REFINE_TOL = 1e-6


def default_order(bandlimit, lambda_max):
    """Quadrature order leaving bandlimited integrands exactly integrated."""
    return 2 * (bandlimit + lambda_max) + 4


@dataclass(eq=False)
class TruncatedOperator:
    """Matrix of an operator in an explicit finite basis.

    ``block_index`` lists (K-type label, copy, vector index) per basis row;
    for K-dual entries the basis is the standard one of the single K-type.
    """

    matrix: np.ndarray
    lambda_max: int
    order: int
    block_index: list
    basis: PeterWeylBasis | None = None
    point: DualPoint | None = None

    @property
    def size(self):
        return self.matrix.shape[0]

    def to_dict(self):
        """JSON-ready form; complex entries become [re, im] pairs."""
        return {
            "lambda_max": self.lambda_max,
            "order": self.order,
            "block_index": [
                [list(lam) if isinstance(lam, tuple) else lam, c, v]
                for lam, c, v in self.block_index
            ],
            "matrix": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.matrix
            ],
        }


def operator_norm(T):
    m = T.matrix if isinstance(T, TruncatedOperator) else np.asarray(T)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def hs_norm(T):
    m = T.matrix if isinstance(T, TruncatedOperator) else np.asarray(T)
    return float(np.linalg.norm(m))


def kernel(f, pair, mu, H, h, k, order=None):
    """The stabilizer-averaged kernel at (h, k): a d_mu x d_mu matrix.

    For a trivial stabilizer the average collapses to the scalar
    fhat2(h k^{-1}, Ad(h) H) times the identity.
    """
    H = tuple(float(c) for c in np.atleast_1d(H))
    stab = stabilizer(pair, H)
    band = f.bandlimit + stab.group.char_band(mu)
    rule = stab.group.quadrature(order if order else 2 * band + 4)
    xi = pair.adjoint_action(h, pair.embed_a(H))
    k_inv = pair.K.inverse(k)
    d = stab.group.irrep_dim(mu)
    out = np.zeros((d, d), dtype=complex)
    for w, s in zip(rule.weights, rule.nodes):
        elt = pair.K.compose(h, pair.K.compose(stab.embed(s), k_inv))
        out += w * complex(f.partial_fourier(elt, xi)) * stab.group.irrep_matrix(mu, s)
    return out


def _pi_entries(f, pair, basis, H, rule):
    w = rule.weights
    Psi = basis.node_table(rule)  # (N, n, d_rho)
    ad = pair.ad_orbit_table(rule, H)  # (n, dim_p)
    N = basis.size
    M = np.zeros((N, N), dtype=complex)
    tabs = {}
    for term in f.terms:
        lab = term.u.label
        if lab not in tabs:
            tabs[lab] = pair.K.irrep_node_table(lab, rule)
        D = tabs[lab]
        gvals = term.g.fourier(ad)  # (n,)
        i0, j0 = term.u.row, term.u.col
        # u(h k^{-1}) = sum_r D[h, i0, r] conj(D[k, j0, r]) splits the
        # K x K product quadrature into two single sums per r
        A = np.einsum("n,nr,ina->ria", w * gvals, D[:, i0, :], np.conj(Psi))
        B = np.einsum("n,nr,jna->rja", w, np.conj(D[:, j0, :]), Psi)
        M += term.coeff * np.einsum("ria,rja->ij", A, B)
    return M


def pi_matrix(
    f,
    pair,
    mu,
    H,
    lambda_max,
    order=None,
    basis=None,
    refine_check=True,
    point=None,
):
    """Truncated matrix of the induced-representation operator at (mu, H).

    Entries are <pi(f) psi_j, psi_i> over the covariant basis cut at
    ``lambda_max``.  With ``refine_check`` the entries are recomputed at
    order+4 and QuadratureOrderTooLow is raised if any moves by more than
    1e-6.  A prebuilt ``basis`` may be passed to share it across points
    with the same stabilizer (e.g. along a ray toward zero).
    """
    H = tuple(float(c) for c in np.atleast_1d(H))
    if basis is None:
        basis = peter_weyl_basis(pair, mu, H, lambda_max)
    if order is None:
        order = default_order(f.bandlimit, lambda_max)
    rule = pair.K.quadrature(order)
    M = _pi_entries(f, pair, basis, H, rule)
    if refine_check:
        fine = _pi_entries(f, pair, basis, H, pair.K.quadrature(order + 4))
        drift = float(np.abs(M - fine).max())
        if drift > ENTRY_REFINE_TOL:
            raise QuadratureOrderTooLow(
                f"entries moved by {drift:.3g} under order {order} -> {order + 4}"
            )
    return TruncatedOperator(
        matrix=M,
        lambda_max=lambda_max,
        order=order,
        block_index=basis.block_index,
        basis=basis,
        point=point,
    )


def tau_matrix(f, pair, lam, order=None, point=None):
    """The K-dual entry: integral of fhat2(k, 0) against the K-irrep."""
    band = max(f.bandlimit, pair.K.char_band(lam))
    order = order if order else 2 * band + 4
    rule = pair.K.quadrature(order)
    tab = pair.K.irrep_node_table(lam, rule)
    d = pair.K.irrep_dim(lam)
    M = np.zeros((d, d), dtype=complex)
    zero = np.zeros((1, pair.dim_p))
    utabs = {}
    for term in f.terms:
        lab = term.u.label
        if lab not in utabs:
            utabs[lab] = pair.K.irrep_node_table(lab, rule)
        uvals = utabs[lab][:, term.u.row, term.u.col]
        ghat0 = complex(term.g.fourier(zero)[0])
        M += term.coeff * ghat0 * np.einsum("n,nab->ab", rule.weights * uvals, tab)
    return TruncatedOperator(
        matrix=M,
        lambda_max=pair.K.char_band(lam),
        order=order,
        block_index=[(lam, 0, v) for v in range(d)],
        point=point,
    )


def pi_mu0_matrix(f, pair, mu, lambda_max, basis=None, order=None, H_ref=None):
    """Matrix of the zero-point operator: block sum of tau_lambda(f).

    Blocks follow the covariant-basis order of the companion induced
    operator, each K-type repeated per branching copy, so differences
    against pi_matrix along a ray toward zero are entrywise meaningful.
    """
    if basis is None:
        if H_ref is None:
            H_ref = tuple([1.0] * pair.rank)
        basis = peter_weyl_basis(pair, mu, H_ref, lambda_max)
    if order is None:
        order = default_order(f.bandlimit, lambda_max)
    blocks = []
    tau_cache = {}
    for lam, Ts in basis.blocks:
        if lam not in tau_cache:
            tau_cache[lam] = tau_matrix(f, pair, lam, order=order).matrix
        blocks.extend([tau_cache[lam]] * len(Ts))
    n = sum(b.shape[0] for b in blocks)
    M = np.zeros((n, n), dtype=complex)
    row = 0
    for b in blocks:
        d = b.shape[0]
        M[row : row + d, row : row + d] = b
        row += d
    return TruncatedOperator(
        matrix=M,
        lambda_max=lambda_max,
        order=order,
        block_index=basis.block_index,
        basis=basis,
    )


@dataclass(eq=False)
class OperatorFieldSample:
    """A finite grid of dual points with attached truncated operators."""

    instance_name: str
    grid: tuple
    operators: dict
    metadata: dict = field(default_factory=dict)

    def norms(self):
        return {
            p: (operator_norm(T), hs_norm(T)) for p, T in self.operators.items()
        }


def sample_field(f, pair, grid, lambda_max, order=None, refine_check=False,
                 threads=1):
    """Evaluate the Fourier-transform field of ``f`` on a grid of dual points.

    Grid points are independent; with ``threads`` > 1 the induced-stratum
    operators are assembled in a thread pool (bases are prebuilt serially so
    rays sharing a stabilizer share their basis).
    """
    for p in grid:
        if p.pair_name != pair.name:
            raise ValueError(f"grid point {p} is not on instance {pair.name}")
    basis_cache = {}
    induced = [p for p in grid if p.stratum != GAMMA2]
    for p in induced:
        key = (p.label, stabilizer(pair, p.H).structure)
        if key not in basis_cache:
            basis_cache[key] = peter_weyl_basis(pair, p.label, p.H, lambda_max)

    def one(p):
        if p.stratum == GAMMA2:
            return tau_matrix(f, pair, p.label, order=order, point=p)
        key = (p.label, stabilizer(pair, p.H).structure)
        return pi_matrix(
            f,
            pair,
            p.label,
            p.H,
            lambda_max,
            order=order,
            basis=basis_cache[key],
            refine_check=refine_check,
            point=p,
        )

    if threads > 1 and len(grid) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            ops = list(pool.map(one, grid))
    else:
        ops = [one(p) for p in grid]
    operators = dict(zip(grid, ops))
    return OperatorFieldSample(
        instance_name=pair.name,
        grid=tuple(grid),
        operators=operators,
        metadata={
            "function": f.describe(),
            "bandlimit": f.bandlimit,
            "fhat2_sup": f.fhat2_sup(),
            "lambda_max": lambda_max,
            "order": order if order else default_order(f.bandlimit, lambda_max),
        },
    )
