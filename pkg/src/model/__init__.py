from src.model.gnpwe import (
    Characteristic,
    ConservationLaw,
    GnpweEquation,
    adjoint_residual,
    build_equation,
    build_fluxes,
    characteristic_residual,
    closed_form_residual,
    divergence_residual,
    is_nontrivial,
)

__all__ = [
    "Characteristic",
    "ConservationLaw",
    "GnpweEquation",
    "adjoint_residual",
    "build_equation",
    "build_fluxes",
    "characteristic_residual",
    "closed_form_residual",
    "divergence_residual",
    "is_nontrivial",
]
