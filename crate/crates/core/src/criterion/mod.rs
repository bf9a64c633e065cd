//! Critical window functionals and convergence verdicts.
//!
//! For a sequence {f_k} and trial function φ the window functional
//! κ_n^m = ∫ φ(max_{k=n..m} ‖f_k − f_∞‖) dν is nondecreasing in m, so the
//! sup over m ≤ m_cap is the value at m_cap. The tail profile
//! S(n) = κ_n^{m_cap(n)} vanishes as n grows exactly when f_k → f_∞ almost
//! everywhere; [`verdict`] turns a truncated profile into a three-way decision.
//!
//! The Cauchy forms γ (scalar) and τ (vector) measure ‖f_k − f_n‖ instead
//! and decide existence of a limit without naming it.

mod functionals;
mod table;
mod verdict;
mod window;

pub use functionals::{
    chebyshev_check, default_pair_grid, direct_tail_expectation, gamma_table, gamma_window,
    in_probability_criterion, kappa_table, kappa_window, moment, moment_convergence_check,
    tau_table, tau_window, ChebyshevCheck, InProbabilityTable, MomentReport, PairEstimate,
};
pub(crate) use table::{window_table, Anchor};
pub use table::{CriticalWindowTable, MonotonicityViolation, TableMode, TableRow};
pub use verdict::{
    tail_sup_profile, verdict, verdict_from_profile, ConvergenceVerdict, ProfilePoint, Thresholds,
    Verdict, PLATEAU_REL_CHANGE, PROFILE_SLACK, SE_MARGIN,
};
pub(crate) use verdict::truncation_caveat;
pub use window::{MCapRule, WindowGrid, DEFAULT_N_GRID};
