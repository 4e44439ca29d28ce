"""Finite-difference assembly of H~, h~, eta, eta^dagger, eta_1 and metric multipliers.

Every operator is tridiagonal on the interior nodes of a `Grid` with Dirichlet
boundaries. Second-order parts use the conservative stencil with a^2 sampled at
cell midpoints; first-order parts use central differences.
"""

from typing import Literal

import numpy as np
import scipy.sparse as sps
from pydantic import BaseModel, ConfigDict

from src.core.logger import logger
from src.domain.closedform import FactorizationData
from src.domain.model import ModelParams, c2, drift, v_eff_general
from src.domain.profiles import FloatArray, Profile
from src.service.discrete.grid import Grid

OperatorTag = Literal["h_tilde", "H_tilde", "eta", "eta_dagger", "eta_one", "multiplier"]


class OperatorMatrix(BaseModel):
    """A tridiagonal operator stored by its three bands.

    Attributes:
        tag (OperatorTag): Which operator the matrix represents.
        grid (Grid): Grid the operator acts on.
        lower (np.ndarray): Entries (i + 1, i), length n - 1.
        main (np.ndarray): Entries (i, i), length n.
        upper (np.ndarray): Entries (i, i + 1), length n - 1.
        label (str): Free-form description, e.g. the sampled multiplier.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tag: OperatorTag
    grid: Grid
    lower: np.ndarray
    main: np.ndarray
    upper: np.ndarray
    label: str = ""

    @property
    def dimension(self: "OperatorMatrix") -> int:
        """Number of rows."""
        return int(self.main.size)

    @property
    def is_symmetric(self: "OperatorMatrix") -> bool:
        """Exact, entry-wise symmetry."""
        return bool(np.array_equal(self.lower, self.upper))

    @property
    def matrix(self: "OperatorMatrix") -> sps.csr_matrix:
        """Sparse CSR form."""
        return sps.diags(
            [self.lower, self.main, self.upper],
            [-1, 0, 1],
            shape=(self.dimension, self.dimension),
            format="csr",
        )

    def dense(self: "OperatorMatrix") -> FloatArray:
        """Dense form, for small dimensions only."""
        return self.matrix.toarray()

    def apply(self: "OperatorMatrix", vectors: FloatArray) -> FloatArray:
        """Matrix-vector product, column-wise for 2-D input."""
        return self.matrix @ vectors

    def transpose(self: "OperatorMatrix") -> "OperatorMatrix":
        """Transposed operator (discrete adjoint under the uniform-grid inner product)."""
        return self.model_copy(update={"lower": self.upper, "upper": self.lower})

    def norm_inf(self: "OperatorMatrix") -> float:
        """Maximum absolute row sum."""
        row_sums = np.abs(self.main).copy()
        row_sums[:-1] += np.abs(self.upper)
        row_sums[1:] += np.abs(self.lower)
        return float(row_sums.max())

    def gershgorin_bounds(self: "OperatorMatrix") -> tuple[float, float]:
        """Interval containing the union of the real parts of the Gershgorin disks."""
        radii = np.zeros_like(self.main)
        radii[:-1] += np.abs(self.upper)
        radii[1:] += np.abs(self.lower)
        return float(np.min(self.main - radii)), float(np.max(self.main + radii))

    def triplets(self: "OperatorMatrix") -> tuple[np.ndarray, np.ndarray, FloatArray]:
        """(row, col, value) arrays, row-major order."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return coo.row[order], coo.col[order], coo.data[order]


def _second_order_bands(
    profile: Profile,
    params: ModelParams,
    grid: Grid,
) -> tuple[FloatArray, FloatArray]:
    """Diagonal and off-diagonal of -omega~ d/dx a^2 d/dx."""
    h2 = grid.h**2
    kinetic = params.omega_tilde * profile.a(grid.midpoints) ** 2
    diagonal = (kinetic[:-1] + kinetic[1:]) / h2
    off_diagonal = -kinetic[1:-1] / h2
    return diagonal, off_diagonal


def _check(profile: Profile, grid: Grid) -> None:
    profile.check_domain(grid.nodes)
    profile.check_domain(grid.midpoints)


def build_h_tilde(profile: Profile, params: ModelParams, grid: Grid) -> OperatorMatrix:
    """Hermitian equivalent h~ = -omega~ d/dx a^2 d/dx + V_eff, exactly symmetric.

    Raises:
        PositivityViolationError: If a <= 0 on the grid.
        RangeError: If the profile overflows on the grid.
    """
    _check(profile, grid)
    diagonal, off_diagonal = _second_order_bands(profile, params, grid)
    potential = v_eff_general(profile, params, grid.nodes)
    logger.debug("Assembled h~ of dimension %d", grid.n_interior)
    return OperatorMatrix(
        tag="h_tilde",
        grid=grid,
        lower=off_diagonal,
        main=diagonal + potential,
        upper=off_diagonal.copy(),
    )


def build_H_tilde(  # noqa: N802
    profile: Profile,
    params: ModelParams,
    grid: Grid,
) -> OperatorMatrix:
    """Non-Hermitian H~ = -omega~ d/dx a^2 d/dx + (omega~ a a' + c1) d/dx + c2.

    Raises:
        PositivityViolationError: If a <= 0 on the grid.
        RangeError: If the profile overflows on the grid.
    """
    _check(profile, grid)
    diagonal, off_diagonal = _second_order_bands(profile, params, grid)
    nodes = grid.nodes
    advection = drift(profile, params, nodes) / (2.0 * grid.h)
    logger.debug("Assembled H~ of dimension %d", grid.n_interior)
    return OperatorMatrix(
        tag="H_tilde",
        grid=grid,
        lower=off_diagonal - advection[1:],
        main=diagonal + c2(profile, params, nodes),
        upper=off_diagonal + advection[:-1],
    )


def _first_order(
    a_values: FloatArray,
    b_values: FloatArray,
    grid: Grid,
    tag: OperatorTag,
    *,
    adjoint: bool = False,
) -> OperatorMatrix:
    forward = a_values / (2.0 * grid.h)
    if adjoint:
        lower, upper = forward[:-1], -forward[1:]
    else:
        lower, upper = -forward[1:], forward[:-1]
    return OperatorMatrix(tag=tag, grid=grid, lower=lower, main=b_values, upper=upper)


def build_eta(profile: Profile, grid: Grid) -> OperatorMatrix:
    """eta = a d/dx + b with a central difference."""
    _check(profile, grid)
    nodes = grid.nodes
    return _first_order(profile.a(nodes), profile.b(nodes), grid, "eta")


def build_eta_dagger(profile: Profile, grid: Grid) -> OperatorMatrix:
    """eta^dagger = -d/dx a + b: row i is -((a u)_(i+1) - (a u)_(i-1))/(2h) + b_i u_i."""
    _check(profile, grid)
    nodes = grid.nodes
    return _first_order(profile.a(nodes), profile.b(nodes), grid, "eta_dagger", adjoint=True)


def build_eta_one(factorization: FactorizationData, grid: Grid) -> OperatorMatrix:
    """Intertwiner eta_1 = a d/dx + b_1."""
    profile = factorization.profile
    _check(profile, grid)
    nodes = grid.nodes
    return _first_order(profile.a(nodes), factorization.b1(nodes), grid, "eta_one")


def build_multiplier(values: FloatArray, grid: Grid, label: str) -> OperatorMatrix:
    """Diagonal multiplication operator by sampled values (rho~, zeta+, V_eff)."""
    zeros = np.zeros(grid.n_interior - 1)
    return OperatorMatrix(
        tag="multiplier",
        grid=grid,
        lower=zeros,
        main=np.asarray(values, dtype=np.float64),
        upper=zeros.copy(),
        label=label,
    )
