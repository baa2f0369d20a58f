//! Truncated Robba-ring series over Q_p, the actions of φ and Γ, evaluation
//! θ_n into Q_p(ε_n)[[t]], and the local modification behind deg(M') = t_N − t_H.

mod actions;
mod element;
mod modification;
mod tail;
mod theta;
mod tseries;

pub use actions::{gamma_act, phi_act};
pub use element::{t_element, Agreement, RobbaElement, RobbaValuation};
pub use modification::{berger_degree, local_modification, local_modification_rotated, LocalModification, TLaurent};
pub use tail::TailBound;
pub use theta::{base_change_diagram_check, theta_n, DiagramCheck};
pub use tseries::{Discrepancy, TSeries};
