"""Executable toolkit for thermodynamic Turing machines."""
from .machine import (
    Configuration,
    Halted,
    MachineSpec,
    Move,
    StillRunning,
    Symbol,
    Transition,
    output_of,
    run,
    step,
)
from .codec import (
    decode_machine,
    elias_gamma,
    encode_machine,
    is_prefix_set,
    kraft_sum,
    nat_to_string,
    string_to_nat,
)
from .utm import prefix_universal_run, universal_run
from .ait import EnumerationBudget, bound_sequence, c_upper, k_upper
from .thermo import (
    Distribution,
    FiniteFunction,
    HeatFunction,
    audit_dominating_kraft,
    check_kraft_condition,
    dominating_heat,
    entropy_production,
    gibbs_witness,
)
from .tutm import TutmTriple, tutm_heat, tutm_kraft_audit, tutm_run
from .zoo import (
    bit_flip_machine,
    erasure_machine,
    halt_machine,
    identity_machine,
    writer_machine,
)

__version__ = "0.1.0"
