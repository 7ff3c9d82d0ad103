from src.numerics.convergence import ConvergenceRow, convergence_study, rows_to_csv
from src.numerics.fd import fd_closed_form_difference, fd_divergence_residual
from src.numerics.grid import FModel, GridField, GridSpec, load_field, manufactured_field, save_field
from src.numerics.march import ManufacturedProblem, march_solver_n1

__all__ = [
    "ConvergenceRow",
    "FModel",
    "GridField",
    "GridSpec",
    "ManufacturedProblem",
    "convergence_study",
    "fd_closed_form_difference",
    "fd_divergence_residual",
    "load_field",
    "manufactured_field",
    "march_solver_n1",
    "rows_to_csv",
    "save_field",
]
