//! Feasibility, construction, and verification of mass transport on patches.

pub mod flow;
mod hall;
mod linalg;
mod pe_solve;
mod pe_transport;
mod plan;
mod points;
mod routing;
mod search;
mod stepwise;
mod verify;

pub use hall::{
    hall_feasible, pairs_within, slack_zone, Certificate, Cut, CutSide, HallResult,
    TransportProblem,
};
pub use pe_solve::{solve_pe_coboundary, solve_pe_coboundary_values, PESolveResult, PESolveSummary};
pub use pe_transport::{pe_transport, PETransport, PETransportSummary};
pub use plan::{Move, Site, TransportPlan};
pub use points::{point_discrepancy_series, PointDiscrepancy, Square};
pub use routing::flux_from_plan;
pub use search::{grid_step, min_radius_for_patch, min_transport_radius, RadiusSearch};
pub use stepwise::{simulate_rounds, stepwise_plan_from_flux, StepwisePlan};
pub use verify::{verify_plan, VerifyReport};
