//! Collar signatures: translation-invariant encodings of local patterns.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use super::metric::{Point, Radius};
use super::patch::{CellRef, FaceKey, Patch};
use super::system::System;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnchorKind {
    Tile,
    /// A face; `vertical` distinguishes the two edge directions in 2-D.
    Face { vertical: bool },
    Vertex,
}

/// Sorted list of (prototile, offset from anchor) for every tile meeting the
/// closed ball of the given radius around the anchor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub system: System,
    pub kind: AnchorKind,
    pub radius_sq: Scalar,
    pub entries: Vec<(usize, Point)>,
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sys = self.system.tiling();
        write!(f, "{:?}@R²={}[", self.kind, self.radius_sq)?;
        for (i, (p, off)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{:?}", sys.label(*p), off)?;
        }
        f.write_str("]")
    }
}

fn kind_of(patch: &Patch, cell: &CellRef) -> AnchorKind {
    match cell {
        CellRef::Tile(_) => AnchorKind::Tile,
        CellRef::Face(i) => match &patch.faces()[*i].key {
            FaceKey::Edge { vertical, .. } => AnchorKind::Face { vertical: *vertical },
            FaceKey::Vertex(_) => AnchorKind::Face { vertical: false },
        },
        CellRef::Vertex(_) => AnchorKind::Vertex,
    }
}

/// Signature of a cell at radius `radius`; fails when the ball is not covered by the patch.
pub fn collar_signature(patch: &Patch, cell: &CellRef, radius: &Radius) -> Result<Signature> {
    let anchor = patch.anchor(cell)?;
    let tiles = patch.tiles_meeting_ball(&anchor, radius).ok_or_else(|| {
        Error::InsufficientCollar(format!("{cell:?} at radius {:.6}", radius.to_f64()))
    })?;
    let mut entries: Vec<(usize, Point)> = tiles
        .into_iter()
        .map(|i| {
            let t = &patch.tiles()[i];
            (t.proto, t.at.to_point().sub(&anchor))
        })
        .collect();
    entries.sort();
    Ok(Signature {
        system: patch.system(),
        kind: kind_of(patch, cell),
        radius_sq: radius.squared().clone(),
        entries,
    })
}

/// Classes of cells by signature. Cells without a full collar get `None`;
/// classes are numbered in order of first appearance.
#[derive(Clone, Debug)]
pub struct SignatureClasses {
    pub signatures: Vec<Signature>,
    pub class_of: Vec<Option<usize>>,
}

impl SignatureClasses {
    pub fn len(&self) -> usize {
        self.signatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.class_of.len())
            .filter(|&i| self.class_of[i] == Some(class))
            .collect()
    }
}

fn classify(sigs: Vec<Option<Signature>>) -> SignatureClasses {
    let mut index: HashMap<Signature, usize> = HashMap::new();
    let mut signatures = Vec::new();
    let class_of = sigs
        .into_iter()
        .map(|s| {
            s.map(|s| {
                *index.entry(s.clone()).or_insert_with(|| {
                    signatures.push(s);
                    signatures.len() - 1
                })
            })
        })
        .collect();
    SignatureClasses {
        signatures,
        class_of,
    }
}

pub fn tile_signature_classes(patch: &Patch, radius: &Radius) -> SignatureClasses {
    let sigs = (0..patch.len())
        .into_par_iter()
        .map(|i| collar_signature(patch, &CellRef::Tile(i), radius).ok())
        .collect();
    classify(sigs)
}

/// Classes of interior faces; boundary faces and faces lacking a collar get `None`.
pub fn face_signature_classes(patch: &Patch, radius: &Radius) -> SignatureClasses {
    let sigs = (0..patch.faces().len())
        .into_par_iter()
        .map(|i| {
            if patch.faces()[i].is_interior() {
                collar_signature(patch, &CellRef::Face(i), radius).ok()
            } else {
                None
            }
        })
        .collect();
    classify(sigs)
}
