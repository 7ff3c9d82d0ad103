from src.solver.determining import (
    AnsatzSpec,
    CharacteristicBasis,
    ClassificationReport,
    DeterminingSystem,
    N1FamilyInput,
    assemble_determining_system,
    classify,
    n1_explicit_characteristic,
    null_space,
    solve_sys_conditions,
)

__all__ = [
    "AnsatzSpec",
    "CharacteristicBasis",
    "ClassificationReport",
    "DeterminingSystem",
    "N1FamilyInput",
    "assemble_determining_system",
    "classify",
    "n1_explicit_characteristic",
    "null_space",
    "solve_sys_conditions",
]
