//! Scenario Hamiltonians, Poisson evolution, integrators, closed-form
//! Newton–Hooke flows and equation-of-motion residuals.

pub mod flows;
pub mod integrate;
pub mod residual;
pub mod scenarios;

pub use flows::{
    closed_form_flow_1d, closed_form_trajectory, group_action_1d, orbit_trajectory,
    printed_group_action_1d,
};
pub use integrate::{evolve, integrate, vector_field, Method, Trajectory};
pub use residual::{dual_newton_residual, newton_residual, oscillator_residual, DualLaw};
pub use scenarios::{
    check_synchronization, coupling_structure, derived_params, hamiltonian, hamiltonian_anh1d,
    hamiltonian_electron, hamiltonian_pendulum, hamiltonian_spring, ChartHamiltonian,
    DerivedParams, ScenarioKind, ScenarioParams,
};
