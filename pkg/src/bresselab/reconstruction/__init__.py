"""Initial data, vector solutions and Sobolev norms."""

from bresselab.reconstruction.norms import (
    check_tail,
    energy_table,
    hs_norm,
    l1_bound,
    norm_report,
    profile_grid,
    sobolev_norm,
)
from bresselab.reconstruction.profiles import (
    InitialProfile,
    ProfileKind,
    initial_mode_state,
    initial_states,
)
from bresselab.reconstruction.vector import vector_rows, vector_solution_components

__all__ = [
    "InitialProfile",
    "ProfileKind",
    "check_tail",
    "energy_table",
    "hs_norm",
    "initial_mode_state",
    "initial_states",
    "l1_bound",
    "norm_report",
    "profile_grid",
    "sobolev_norm",
    "vector_rows",
    "vector_solution_components",
]
