//! Single trapped-ion CNOT synthesis for arbitrary Lamb-Dicke parameters.
//!
//! The crate computes the exact sideband dynamics of a trapped ion outside
//! the Lamb-Dicke limit, searches carrier-pulse durations that turn a single
//! pulse into a CNOT-equivalent operation between the motional and internal
//! qubits, and removes the residual phases with a controlled-Z built from a
//! blue-sideband pulse through an auxiliary level.
//!
//! - [`rabi`]: effective Rabi frequencies and displacement matrix elements.
//! - [`dynamics`]: closed-form pulse evolution and the carrier matrix.
//! - [`validator`]: truncated-Fock-space Hamiltonians and matrix-exponential oracle.
//! - [`optimizer`]: pulse-duration search and exact ("magic") solutions.
//! - [`gates`]: gate algebra, fidelities, sensitivity and CZ timing.

pub mod dynamics;
pub mod error;
pub mod gates;
pub mod optimizer;
pub mod rabi;
pub mod validator;

pub use dynamics::{
    carrier_amplitudes, carrier_matrix, evolve_aux_sideband, evolve_closed_form, sideband_aux_map,
    CarrierAmplitudes, JointState, Level, PulseSpec, SubspaceUnitary,
};
pub use error::{Error, Result};
pub use gates::{
    c1_gate, cnot_target, compose_cnot, cz_duration, cz_gate, sensitivity, synthesize,
    synthesize_with_phase, GateReport, SensitivityReport, Synthesis,
};
pub use optimizer::{
    enumerate_magic, eta_grid, magic_parameters, objective, reproduce_table, search_duration,
    MagicPoint, OptimizationResult, SearchConfig, TableRow,
};
pub use rabi::{displacement_element, effective_rabi, laguerre_assoc, LDParameter, RabiFrequency};
pub use validator::{
    build_aux_sideband_hamiltonian, build_full_hamiltonian, build_interaction_hamiltonian,
    compare_with_oracle, propagate, rwa_deviation, OracleCell, OracleGrid, Propagator,
    SidebandDrive, TruncatedHamiltonian,
};
