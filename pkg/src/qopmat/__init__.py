"""Chi- and S-matrix representations of quantum operations on qudits."""

from qopmat.bases import (
    OperatorBasis,
    change_of_basis_unitary,
    custom_basis,
    gellmann_basis,
    isotropic_state,
    make_basis,
    swap_operator,
    transition_basis,
    validate_basis,
    weyl_basis,
)
from qopmat.composition import CircuitSpec, compose, lift, run_circuit
from qopmat.physicality import (
    PhysicalityReport,
    channel_purity,
    check_physical,
    process_fidelity,
)
from qopmat.representations import (
    ChiMatrix,
    ConversionKit,
    KrausChannel,
    SMatrix,
    apply_channel,
    build_kit,
    build_two_qudit_kit,
    change_basis,
    chi_from_kraus,
    chi_to_s,
    chi_to_s_2,
    choi_operator,
    convert_n,
    kraus_from_chi,
    s_to_chi,
    s_to_chi_2,
    superop_matrix,
    to_chi,
    to_kraus,
    to_smatrix,
)
from qopmat.tomography import TomographyDataset, reconstruct, simulate_dataset

__version__ = "0.1.0"

__all__ = [
    "apply_channel",
    "build_kit",
    "build_two_qudit_kit",
    "change_basis",
    "change_of_basis_unitary",
    "channel_purity",
    "check_physical",
    "chi_from_kraus",
    "chi_to_s",
    "chi_to_s_2",
    "ChiMatrix",
    "choi_operator",
    "CircuitSpec",
    "compose",
    "ConversionKit",
    "convert_n",
    "custom_basis",
    "gellmann_basis",
    "isotropic_state",
    "kraus_from_chi",
    "KrausChannel",
    "lift",
    "make_basis",
    "OperatorBasis",
    "PhysicalityReport",
    "process_fidelity",
    "reconstruct",
    "run_circuit",
    "s_to_chi",
    "s_to_chi_2",
    "simulate_dataset",
    "SMatrix",
    "superop_matrix",
    "swap_operator",
    "to_chi",
    "to_kraus",
    "to_smatrix",
    "TomographyDataset",
    "transition_basis",
    "validate_basis",
    "weyl_basis",
]
