//! Pattern-equivariant cochains: integration, coboundary, and discrepancy.

mod flux;
mod integrate;
mod primitive;
mod top;

pub use flux::{
    boundary_flux, coboundary, coboundary_of_values, max_abs, FaceValues, FluxCochain, TileValues,
};
pub use integrate::{discrepancy_series, integrate, write_discrepancy_csv, DiscrepancyPoint, Target};
pub use primitive::{primitive_1d, primitive_1d_values, Primitive};
pub use top::{mass_cochain, parse_label_masses, TopCochain, TopRule};
