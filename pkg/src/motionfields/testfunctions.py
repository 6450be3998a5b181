"""Separable test functions with closed-form partial Fourier transforms.

A term is c * u(k) * g(X) with u a matrix coefficient of a K-irrep and g a
polynomial times a centered Gaussian on the flat part.  The X-Fourier
transform of such a g is again polynomial-times-Gaussian, computed once and
exactly, so every bound of interest can be checked without uncontrolled
numerical Fourier error.  Functions constant in X are rejected: they are
not integrable on the group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# polynomials as {multi-index tuple: complex coefficient}


def poly_eval(poly, pts):
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    out = np.zeros(pts.shape[0], dtype=complex)
    for alpha, c in poly.items():
        mono = np.ones(pts.shape[0])
        for j, a in enumerate(alpha):
            if a:
                mono = mono * pts[:, j] ** a
        out += c * mono
    return out


def poly_diff(poly, j):
    out = {}
    for alpha, c in poly.items():
        if alpha[j]:
            beta = list(alpha)
            beta[j] -= 1
            beta = tuple(beta)
            out[beta] = out.get(beta, 0.0) + c * alpha[j]
    return out


def poly_mul_coord(poly, j):
    out = {}
    for alpha, c in poly.items():
        beta = list(alpha)
        beta[j] += 1
        out[tuple(beta)] = out.get(tuple(beta), 0.0) + c
    return out


def poly_mul(p, q):
    out = {}
    for a, ca in p.items():
        for b, cb in q.items():
            g = tuple(x + y for x, y in zip(a, b))
            out[g] = out.get(g, 0.0) + ca * cb
    return out


def _poly_clean(poly, tol=0.0):
    return {a: complex(c) for a, c in poly.items() if abs(c) > tol}


@dataclass(eq=False)
class PolyGaussian:
    """g(X) = p(X) exp(-|X|^2 / (2 sigma^2)) on R^dim.

    ``fourier`` evaluates the transform int g(X) exp(i <xi, X>) dX, which is
    (2 pi sigma^2)^{dim/2} q(xi) exp(-sigma^2 |xi|^2 / 2) with q computed by
    repeated differentiation (multiplication by X_j maps to -i d/dxi_j).
    """

    dim: int
    sigma: float
    poly: dict
    radial: bool = False
    _hat_poly: dict = field(default=None, repr=False)

    def __post_init__(self):
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(
                "flat factor needs a finite positive decay scale; "
                "functions constant in X are not integrable"
            )
        self.poly = _poly_clean(
            {tuple(a): c for a, c in self.poly.items()}
        )
        if not self.poly:
            raise ValueError("flat factor polynomial is identically zero")
        for alpha in self.poly:
            if len(alpha) != self.dim:
                raise ValueError(f"multi-index {alpha} does not match dim {self.dim}")
        self._hat_poly = self._transform_poly()

    @classmethod
    def gaussian(cls, dim, sigma=1.0, coeff=1.0):
        return cls(dim, sigma, {tuple([0] * dim): coeff}, radial=True)

    @classmethod
    def radial_poly(cls, dim, sigma, r2_coeffs):
        """p = sum_k c_k (|X|^2)^k times the Gaussian; always radial."""
        zero = tuple([0] * dim)
        r2 = {}
        for j in range(dim):
            idx = [0] * dim
            idx[j] = 2
            r2[tuple(idx)] = 1.0
        poly = {}
        power = {zero: 1.0}
        for k, c in enumerate(r2_coeffs):
            if k:
                power = poly_mul(power, r2)
            for a, v in power.items():
                poly[a] = poly.get(a, 0.0) + c * v
        return cls(dim, sigma, poly, radial=True)

    def _transform_poly(self):
        s2 = self.sigma**2
        total = {}
        for alpha, c in self.poly.items():
            q = {tuple([0] * self.dim): 1.0 + 0.0j}
            for j, a in enumerate(alpha):
                for _ in range(a):
                    # multiplication by X_j becomes -i (d_j - s2 xi_j) on q
                    dq = poly_diff(q, j)
                    xq = poly_mul_coord(q, j)
                    q = {
                        b: -1j * (dq.get(b, 0.0) - s2 * xq.get(b, 0.0))
                        for b in set(dq) | set(xq)
                    }
            for b, v in q.items():
                total[b] = total.get(b, 0.0) + c * v
        return _poly_clean(total, tol=0.0)

    def value(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        r2 = np.sum(X * X, axis=1)
        return poly_eval(self.poly, X) * np.exp(-r2 / (2.0 * self.sigma**2))

    def fourier(self, xi):
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        r2 = np.sum(xi * xi, axis=1)
        amp = (2.0 * np.pi * self.sigma**2) ** (self.dim / 2.0)
        return amp * poly_eval(self._hat_poly, xi) * np.exp(-self.sigma**2 * r2 / 2.0)

    def conj(self):
        return PolyGaussian(
            self.dim,
            self.sigma,
            {a: np.conj(c) for a, c in self.poly.items()},
            radial=self.radial,
        )

    def max_degree(self):
        return max(sum(a) for a in self.poly)

    def sup_abs_fourier(self, rounds=5):
        """Grid-refined estimate of sup_xi |g-hat(xi)|."""
        radius = (math.sqrt(2.0 * max(1, self.max_degree())) + 6.0) / self.sigma
        center = np.zeros(self.dim)
        width = radius
        best = 0.0
        pts_per_dim = 9 if self.dim <= 3 else 7
        for _ in range(rounds):
            axes = [
                np.linspace(c - width, c + width, pts_per_dim) for c in center
            ]
            grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(
                -1, self.dim
            )
            vals = np.abs(self.fourier(grid))
            i = int(np.argmax(vals))
            if vals[i] > best:
                best = float(vals[i])
                center = grid[i]
            width /= 3.0
        return max(best, float(np.abs(self.fourier(np.zeros((1, self.dim))))[0]))


@dataclass(frozen=True)
class MatrixCoefficient:
    """The factor u(k) = entry (row, col) of the K-irrep with this label."""

    label: object
    row: int = 0
    col: int = 0


@dataclass(frozen=True)
class Term:
    coeff: complex
    u: MatrixCoefficient
    g: PolyGaussian


class TestFunction:
    """Finite sum of separable terms on a fixed instance."""

    __test__ = False  # not a pytest collectable, despite the name

    def __init__(self, pair, terms):
        if not terms:
            raise ValueError("need at least one term")
        self.pair = pair
        self.terms = tuple(terms)
        for t in self.terms:
            if not pair.K.validate_label(t.u.label):
                raise ValueError(f"{t.u.label!r} is not a K-irrep label on {pair.name}")
            d = pair.K.irrep_dim(t.u.label)
            if not (0 <= t.u.row < d and 0 <= t.u.col < d):
                raise ValueError("matrix-coefficient indices out of range")
            if t.g.dim != pair.dim_p:
                raise ValueError(
                    f"flat factor dim {t.g.dim} != instance dim {pair.dim_p}"
                )
        self.bandlimit = max(pair.K.char_band(t.u.label) for t in self.terms)

    def __add__(self, other):
        if other.pair is not self.pair and other.pair.name != self.pair.name:
            raise ValueError("cannot add test functions on different instances")
        return TestFunction(self.pair, self.terms + other.terms)

    def u_value(self, term, k):
        return complex(
            self.pair.K.irrep_matrix(term.u.label, k)[term.u.row, term.u.col]
        )

    def value(self, k, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros(X.shape[0], dtype=complex)
        for t in self.terms:
            out += t.coeff * self.u_value(t, k) * t.g.value(X)
        return out if out.size > 1 else complex(out[0])

    def partial_fourier(self, k, xi):
        """f-hat in the flat variable: sum of c u(k) g-hat(xi)."""
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        out = np.zeros(xi.shape[0], dtype=complex)
        for t in self.terms:
            out += t.coeff * self.u_value(t, k) * t.g.fourier(xi)
        return out if out.size > 1 else complex(out[0])

    def star(self):
        """The involution f*(k, X) = conj(f(k^{-1}, -Ad(k^{-1}) X)).

        Supported when every flat factor is radial (then the adjoint motion
        drops out and the result stays in the separable class); the K-factor
        transposes its matrix-coefficient indices.
        """
        if not all(t.g.radial for t in self.terms):
            raise ValueError("star() needs radial flat factors")
        return TestFunction(
            self.pair,
            [
                Term(
                    np.conj(t.coeff),
                    MatrixCoefficient(t.u.label, t.u.col, t.u.row),
                    t.g.conj(),
                )
                for t in self.terms
            ],
        )

    def _k_candidates(self, extra_k=None):
        rule = self.pair.K.quadrature(2 * self.bandlimit + 8)
        nodes = list(rule.nodes)
        if extra_k:
            nodes.extend(extra_k)
        return nodes

    def _xi_candidates(self, extra_xi=None, refine=9):
        pts = [np.zeros(self.pair.dim_p)]
        radius = max(
            (math.sqrt(2.0 * max(1, t.g.max_degree())) + 6.0) / t.g.sigma
            for t in self.terms
        )
        grid = np.linspace(-radius, radius, refine)
        if self.pair.dim_p <= 3:
            axes = np.stack(
                np.meshgrid(*([grid] * self.pair.dim_p), indexing="ij"), axis=-1
            ).reshape(-1, self.pair.dim_p)
        else:
            axes = np.stack(
                np.meshgrid(*([np.linspace(-radius, radius, 7)] * self.pair.dim_p),
                            indexing="ij"),
                axis=-1,
            ).reshape(-1, self.pair.dim_p)
        pts.append(axes)
        if extra_xi is not None and len(extra_xi):
            pts.append(np.atleast_2d(np.asarray(extra_xi, dtype=float)))
        return np.concatenate([np.atleast_2d(p) for p in pts], axis=0)

    def fhat2_sup(self, extra_k=None, extra_xi=None, rounds=4):
        """Grid-refined estimate of the sup norm of the partial transform.

        A single separable term factorizes, so the estimate multiplies the
        per-factor suprema; several terms are maximized jointly on a
        refining grid seeded with quadrature nodes and the per-term Gaussian
        peaks (plus any caller-supplied candidates).
        """
        if len(self.terms) == 1:
            t = self.terms[0]
            return abs(t.coeff) * self._sup_abs_u(t) * t.g.sup_abs_fourier()
        ks = self._k_candidates(extra_k)
        uvals = np.array(
            [[self.u_value(t, k) for k in ks] for t in self.terms]
        )  # (terms, n_k)
        xi = self._xi_candidates(extra_xi)
        best = 0.0
        center = xi[0]
        width = None
        for _ in range(rounds):
            gvals = np.array([t.g.fourier(xi) for t in self.terms])  # (terms, n_xi)
            coeffs = np.array([t.coeff for t in self.terms])
            vals = np.abs(
                np.einsum("t,tk,tx->kx", coeffs, uvals, gvals)
            )
            idx = np.unravel_index(int(np.argmax(vals)), vals.shape)
            if vals[idx] > best:
                best = float(vals[idx])
                center = xi[idx[1]]
            width = 0.5 if width is None else width / 3.0
            axes = [np.linspace(c - width, c + width, 5) for c in center]
            xi = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(
                -1, self.pair.dim_p
            )
        return best

    def fhat2_sup_bound(self):
        """Rigorous upper bound: sum of per-term factor suprema."""
        return sum(
            abs(t.coeff) * self._sup_abs_u(t, upper=True) * t.g.sup_abs_fourier()
            for t in self.terms
        )

    def _sup_abs_u(self, term, upper=False):
        from .groups import RotationGroup3, wigner_d

        K = self.pair.K
        if isinstance(K, RotationGroup3):
            if upper:
                return 1.0
            ell = int(term.u.label)
            beta = np.linspace(0.0, np.pi, 721)
            return float(
                np.abs(wigner_d(ell, beta)[:, term.u.row, term.u.col]).max()
            )
        return 1.0  # circle factors: unimodular characters

    def l1_norm_estimate(self, k_order=None, hermite_n=40):
        """Quadrature estimate of the group L^1 norm."""
        K = self.pair.K
        rule = K.quadrature(k_order if k_order else 2 * self.bandlimit + 6)
        smax = max(t.g.sigma for t in self.terms)
        x, w = np.polynomial.hermite_e.hermegauss(hermite_n)
        x = x * smax
        w = w * smax  # weight e^{-x^2/(2 smax^2)} dx
        axes = np.meshgrid(*([x] * self.pair.dim_p), indexing="ij")
        X = np.stack([a.ravel() for a in axes], axis=-1)
        W = np.prod(
            np.stack(
                [g.ravel() for g in np.meshgrid(*([w] * self.pair.dim_p), indexing="ij")]
            ),
            axis=0,
        )
        comp = np.exp(np.sum(X * X, axis=1) / (2.0 * smax**2))
        total = 0.0
        for wk, k in zip(rule.weights, rule.nodes):
            total += wk * float(np.sum(W * comp * np.abs(self.value(k, X))))
        return total

    def describe(self):
        return {
            "bandlimit": self.bandlimit,
            "terms": [
                {
                    "coeff": [float(np.real(t.coeff)), float(np.imag(t.coeff))],
                    "u": {"label": t.u.label, "row": t.u.row, "col": t.u.col},
                    "g": {
                        "sigma": t.g.sigma,
                        "radial": t.g.radial,
                        "poly": {
                            ",".join(map(str, a)): [float(np.real(c)), float(np.imag(c))]
                            for a, c in t.g.poly.items()
                        },
                    },
                }
                for t in self.terms
            ],
        }
