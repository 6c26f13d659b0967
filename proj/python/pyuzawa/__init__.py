"""Uzawa-type saddle-point solvers with Anderson acceleration.

Sparse matrices are exchanged as CSR tuples ``(data, indices, indptr, shape)``;
``to_scipy`` turns one into a ``scipy.sparse.csr_matrix`` when SciPy is present.
"""

from ._core import (
    AndersonAccelerator,
    DimensionError,
    SaddleSystem,
    SolverError,
    aa_solve,
    assemble,
    estimate_omega,
    export_system,
    fixed_point_map,
    lsc_apply,
    num_unknowns,
    rdf_factors,
    rdf_matrix,
    record_csv,
    run_experiment,
    run_table,
    saddle_system,
    schur_solve,
    uzawa_step,
)

__all__ = [
    "AndersonAccelerator",
    "DimensionError",
    "SaddleSystem",
    "SolverError",
    "aa_solve",
    "assemble",
    "estimate_omega",
    "export_system",
    "fixed_point_map",
    "lsc_apply",
    "num_unknowns",
    "rdf_factors",
    "rdf_matrix",
    "record_csv",
    "run_experiment",
    "run_table",
    "saddle_system",
    "schur_solve",
    "to_scipy",
    "uzawa_step",
]


def to_scipy(csr):
    """Convert a CSR tuple to ``scipy.sparse.csr_matrix``."""
    from scipy.sparse import csr_matrix

    data, indices, indptr, shape = csr
    return csr_matrix((data, indices, indptr), shape=shape)
