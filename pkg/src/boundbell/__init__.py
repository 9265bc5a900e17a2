"""Bell-inequality, witness and local-model tests for multipartite bound entanglement."""

from .bell import (
    BellOperator,
    bell_matrix_closed_form,
    bell_operator_three,
    classical_bound_three,
    correlation,
    lhv_bound_enumeration,
    noise_threshold_three,
    rotate_operator,
)
from .lhv import ExperimentSpec, QuantumBehavior, lhv_feasible, quantum_behavior, random_setting_scan
from .mermin import MkSettings, mk_dur_optimum, mk_operator, noise_threshold_mk
from .qubits import dur_state, expectation, ghz, mix_with_noise, product_projector
from .witnesses import detection_value, positivity_scan, s_witness, witness_from_bell

__version__ = "0.1.0"
