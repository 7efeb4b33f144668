//! Substitution tilings, finite patches, and collar signatures.

mod io;
mod metric;
mod patch;
mod region;
mod signature;
mod system;

pub use io::{patch_from_json, patch_to_json, patch_to_svg};
pub use metric::{Point, Radius};
pub use patch::{Adjacency, AdjacencyEdge, CellRef, Face, FaceKey, Patch};
pub use region::{chair_partial_region, RegionPart, RegionSpec};
pub use signature::{
    collar_signature, face_signature_classes, tile_signature_classes, AnchorKind, Signature,
    SignatureClasses,
};
pub use system::{Prototile, Shape, SubstitutionRule, System, Tile, TilingSystem, Translation};
