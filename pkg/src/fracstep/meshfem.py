"""Uniform P1 finite elements on the unit square.

The square is split into M x M cells and each cell into two right triangles
by its lower-left/upper-right diagonal; on this mesh the P1 stiffness matrix
reproduces the classical 5-point stencil exactly. Homogeneous Dirichlet
conditions are imposed by eliminating boundary rows and columns, so all
systems act on the (M-1)^2 interior degrees of freedom.

Element mass/stiffness matrices are exact closed forms. Data integration
(load vectors) uses a 6-point degree-4 triangle rule; error norms use a
denser collapsed-Gauss rule because modal reference solutions carry high
sine modes that a degree-4 rule would misresolve on coarse cells.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .numkit import SparseMatrix, cg_solve

# classic 6-point degree-4 rule, barycentric (weights sum to 1)
_Q4_A1 = 0.445948490915965
_Q4_A2 = 0.091576213509771
_Q4_W1 = 0.223381589678011
_Q4_W2 = 0.109951743655322


def _quad_rule_deg4():
    pts = []
    wts = []
    for a, w in ((_Q4_A1, _Q4_W1), (_Q4_A2, _Q4_W2)):
        pts += [(1 - 2 * a, a, a), (a, 1 - 2 * a, a), (a, a, 1 - 2 * a)]
        wts += [w, w, w]
    return np.array(pts), np.array(wts)


def _quad_rule_collapsed(n=6):
    """Triangle rule from an n x n Gauss grid via the Duffy collapse.

    Exact for total degree <= 2n-2; n=6 resolves degree 10, comfortably
    above the degree-4 floor required for error integration.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (x + 1.0)
    wu = 0.5 * w
    P, W = [], []
    for i in range(n):
        for j in range(n):
            xi = u[i]
            eta = u[j] * (1.0 - u[i])
            P.append((1.0 - xi - eta, xi, eta))
            W.append(wu[i] * wu[j] * (1.0 - u[i]) * 2.0)
    return np.array(P), np.array(W)


_RULES = {4: _quad_rule_deg4(), 10: _quad_rule_collapsed(6)}


@dataclass(frozen=True, eq=False)
class Mesh:
    M: int
    nodes: np.ndarray        # ((M+1)^2, 2)
    triangles: np.ndarray    # (2 M^2, 3) node indices, positively oriented
    interior_map: np.ndarray  # node -> interior dof index, -1 on the boundary

    @property
    def h(self):
        return 1.0 / self.M

    @property
    def n_interior(self):
        return (self.M - 1) ** 2


def build_mesh(M):
    """Criss-cross triangulation with M subdivisions per side (M even)."""
    if M < 2 or M % 2 != 0:
        raise ValueError("mesh divisions must be even and positive")
    M = int(M)
    side = np.linspace(0.0, 1.0, M + 1)
    X, Y = np.meshgrid(side, side, indexing="ij")
    nodes = np.column_stack([X.ravel(), Y.ravel()])

    def nid(i, j):
        return i * (M + 1) + j

    tris = []
    for i in range(M):
        for j in range(M):
            n00 = nid(i, j)
            n10 = nid(i + 1, j)
            n11 = nid(i + 1, j + 1)
            n01 = nid(i, j + 1)
            tris.append((n00, n10, n11))
            tris.append((n00, n11, n01))
    triangles = np.array(tris, dtype=np.intp)

    interior_map = np.full((M + 1) ** 2, -1, dtype=np.intp)
    k = 0
    for i in range(1, M):
        for j in range(1, M):
            interior_map[nid(i, j)] = k
            k += 1
    return Mesh(M, nodes, triangles, interior_map)


@dataclass(frozen=True, eq=False)
class FemSystem:
    mesh: Mesh
    mass: SparseMatrix
    stiffness: SparseMatrix
    quadrature_order: int = 4

    # geometry caches for vectorized quadrature, filled by assemble()
    _areas: np.ndarray = field(default=None, repr=False)
    _grads: np.ndarray = field(default=None, repr=False)

    @property
    def n_dof(self):
        return self.mesh.n_interior

    def quad_points(self, order=None):
        """Physical quadrature points and per-point weights on every element.

        Returns (points (nel, nq, 2), weights (nq,) scaled by element area,
        shape values (nq, 3)).
        """
        order = self.quadrature_order if order is None else order
        bary, wts = _RULES[order]
        tri_nodes = self.mesh.nodes[self.mesh.triangles]  # (nel, 3, 2)
        pts = np.einsum("qk,ekd->eqd", bary, tri_nodes)
        area = 0.5 * self.mesh.h ** 2
        return pts, wts * area, bary


def element_matrices(coords):
    """Exact P1 mass and stiffness matrices of one triangle."""
    x = coords[:, 0]
    y = coords[:, 1]
    bmat = np.array(
        [
            [y[1] - y[2], y[2] - y[0], y[0] - y[1]],
            [x[2] - x[1], x[0] - x[2], x[1] - x[0]],
        ]
    )
    det = x[1] * y[2] - x[2] * y[1] - x[0] * (y[2] - y[1]) + y[0] * (x[2] - x[1])
    area = 0.5 * det
    grads = bmat / det
    K = area * grads.T @ grads
    Mloc = area / 12.0 * (np.ones((3, 3)) + np.eye(3))
    return Mloc, K, area, grads


def assemble(mesh):
    """Interior-dof mass and stiffness matrices for the P1 space."""
    n = mesh.n_interior
    tris = mesh.triangles
    imap = mesh.interior_map
    rows_m, cols_m, vals_m, vals_k = [], [], [], []
    areas = np.empty(len(tris))
    grads = np.empty((len(tris), 2, 3))
    for e, tri in enumerate(tris):
        Mloc, Kloc, area, g = element_matrices(mesh.nodes[tri])
        areas[e] = area
        grads[e] = g
        dofs = imap[tri]
        for a in range(3):
            if dofs[a] < 0:
                continue
            for b in range(3):
                if dofs[b] < 0:
                    continue
                rows_m.append(dofs[a])
                cols_m.append(dofs[b])
                vals_m.append(Mloc[a, b])
                vals_k.append(Kloc[a, b])
    mass = SparseMatrix.from_coo(n, n, rows_m, cols_m, vals_m)
    stiffness = SparseMatrix.from_coo(n, n, rows_m, cols_m, vals_k)
    return FemSystem(mesh, mass, stiffness, 4, areas, grads)


@functools.lru_cache(maxsize=16)
def fem_system(M):
    """Assembled system for mesh parameter M; cached so that repeated studies
    share one instance (and with it the eigendecomposition cache)."""
    return assemble(build_mesh(M))


def load_vector(sys, g, order=None):
    """Interior load vector (g, phi_i) by elementwise quadrature."""
    pts, w, shape = sys.quad_points(order)
    vals = np.asarray(g(pts[..., 0], pts[..., 1]), dtype=float)
    if vals.shape != pts.shape[:2]:
        vals = np.broadcast_to(vals, pts.shape[:2])
    contrib = np.einsum("eq,q,qa->ea", vals, w, shape)
    out = np.zeros(sys.n_dof)
    dofs = sys.mesh.interior_map[sys.mesh.triangles]
    ok = dofs >= 0
    np.add.at(out, dofs[ok], contrib[ok])
    return out


def l2_project(sys, g, rel_tol=1e-12):
    """Coefficients of the L2-orthogonal projection of g."""
    rhs = load_vector(sys, g)
    return cg_solve(sys.mass, rhs, rel_tol=rel_tol)


def ritz_project(sys, g_grad, rel_tol=1e-12):
    """Coefficients of the energy projection; ``g_grad(x, y) -> (gx, gy)``."""
    pts, w, _ = sys.quad_points()
    gx, gy = g_grad(pts[..., 0], pts[..., 1])
    gx = np.broadcast_to(np.asarray(gx, dtype=float), pts.shape[:2])
    gy = np.broadcast_to(np.asarray(gy, dtype=float), pts.shape[:2])
    # element gradients are constant: (grad g, grad phi_a) needs only the
    # quadrature average of grad g per element
    mean_gx = gx @ w
    mean_gy = gy @ w
    contrib = mean_gx[:, None] * sys._grads[:, 0, :] + mean_gy[:, None] * sys._grads[:, 1, :]
    out = np.zeros(sys.n_dof)
    dofs = sys.mesh.interior_map[sys.mesh.triangles]
    ok = dofs >= 0
    np.add.at(out, dofs[ok], contrib[ok])
    return cg_solve(sys.stiffness, out, rel_tol=rel_tol)


def l2_norm(sys, c):
    c = np.asarray(c)
    return float(np.sqrt(max(c @ sys.mass.matvec(c), 0.0)))


def h1_seminorm(sys, c):
    c = np.asarray(c)
    return float(np.sqrt(max(c @ sys.stiffness.matvec(c), 0.0)))


def nodal_values(sys, c):
    """Full nodal vector (zeros on the boundary) from interior coefficients."""
    full = np.zeros(len(sys.mesh.nodes))
    sel = sys.mesh.interior_map >= 0
    full[sel] = np.asarray(c)[sys.mesh.interior_map[sel]]
    return full


def error_norms(sys, c, u_exact, grad_exact=None, order=10):
    """(L2, H1-seminorm) error between the FE function and a pointwise field.

    ``u_exact(x, y)`` is evaluated at quadrature points of the given order;
    the H1 part is skipped (returned as None) unless ``grad_exact`` is given,
    in which case it must map point arrays to the pair (du/dx, du/dy).
    """
    pts, w, shape = sys.quad_points(order)
    full = nodal_values(sys, c)
    local = full[sys.mesh.triangles]  # (nel, 3)
    uh = local @ shape.T              # (nel, nq)
    ue = np.asarray(u_exact(pts[..., 0], pts[..., 1]), dtype=float)
    ue = np.broadcast_to(ue, uh.shape)
    l2 = float(np.sqrt(np.sum(((uh - ue) ** 2) @ w)))
    if grad_exact is None:
        return l2, None
    # FE gradient is constant per element
    ghx = np.einsum("ea,ea->e", sys._grads[:, 0, :], local)
    ghy = np.einsum("ea,ea->e", sys._grads[:, 1, :], local)
    gex, gey = grad_exact(pts[..., 0], pts[..., 1])
    gex = np.broadcast_to(np.asarray(gex, dtype=float), uh.shape)
    gey = np.broadcast_to(np.asarray(gey, dtype=float), uh.shape)
    dx2 = (ghx[:, None] - gex) ** 2
    dy2 = (ghy[:, None] - gey) ** 2
    h1 = float(np.sqrt(np.sum((dx2 + dy2) @ w)))
    return l2, h1
