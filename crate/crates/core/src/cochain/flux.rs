use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::geometry::{collar_signature, CellRef, FaceKey, Patch, Radius, Signature, System};
use crate::scalar::Scalar;

/// Values on faces, each for the face's canonical orientation.
pub type FaceValues = BTreeMap<FaceKey, Scalar>;

/// Values on tiles; `None` where the value is undefined (missing collar or faces).
pub type TileValues = Vec<Option<Scalar>>;

/// A strongly pattern-equivariant codimension-one cochain: a value per face
/// signature, read in the face's canonical orientation. Reversing the
/// orientation negates the value.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxCochain {
    system: System,
    radius: Radius,
    rule: HashMap<Signature, Scalar>,
}

impl FluxCochain {
    pub fn new(system: System, radius: Radius, rule: HashMap<Signature, Scalar>) -> Result<Self> {
        if rule
            .keys()
            .any(|s| s.system != system || &s.radius_sq != radius.squared())
        {
            return Err(Error::IncompatibleCochains);
        }
        Ok(FluxCochain {
            system,
            radius,
            rule,
        })
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn radius(&self) -> &Radius {
        &self.radius
    }

    pub fn rule(&self) -> &HashMap<Signature, Scalar> {
        &self.rule
    }

    /// Value on a face in its canonical orientation (`reversed` flips the sign).
    pub fn value_on_face(&self, patch: &Patch, face: usize, reversed: bool) -> Result<Scalar> {
        if patch.system() != self.system {
            return Err(Error::IncompatibleCochains);
        }
        let sig = collar_signature(patch, &CellRef::Face(face), &self.radius)?;
        let v = self
            .rule
            .get(&sig)
            .cloned()
            .ok_or_else(|| Error::UnknownSignature(sig.to_string()))?;
        Ok(if reversed { -v } else { v })
    }

    /// Values on every face whose collar fits inside the patch.
    pub fn face_values(&self, patch: &Patch) -> Result<FaceValues> {
        let mut out = FaceValues::new();
        for (i, f) in patch.faces().iter().enumerate() {
            match self.value_on_face(patch, i, false) {
                Ok(v) => {
                    out.insert(f.key.clone(), v);
                }
                Err(Error::InsufficientCollar(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

/// `(δβ)(t)`: outward-signed sum of β over the faces of `t`, for every tile
/// whose faces all carry a value.
pub fn coboundary_of_values(beta: &FaceValues, patch: &Patch) -> TileValues {
    (0..patch.len())
        .map(|t| {
            let mut acc = Scalar::zero();
            for &(f, sign) in patch.tile_faces(t) {
                let v = beta.get(&patch.faces()[f].key)?;
                if sign > 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            Some(acc)
        })
        .collect()
}

/// Coboundary of a flux cochain on the tiles where it is defined.
pub fn coboundary(beta: &FluxCochain, patch: &Patch) -> Result<TileValues> {
    let values = beta.face_values(patch)?;
    let out = coboundary_of_values(&values, patch);
    if !patch.is_empty() && out.iter().all(Option::is_none) {
        return Err(Error::InsufficientCollar(
            "no tile has all of its faces collared".into(),
        ));
    }
    Ok(out)
}

/// `∫_{∂P} β`: outward-signed sum over the boundary faces of the patch.
pub fn boundary_flux(beta: &FaceValues, patch: &Patch) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for i in patch.boundary_faces() {
        let f = &patch.faces()[i];
        let v = beta.get(&f.key).ok_or_else(|| {
            Error::InsufficientCollar(format!("no flux value on boundary face {:?}", f.key))
        })?;
        if f.back.is_some() {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok(acc)
}

/// Largest `|β|` over the given values.
pub fn max_abs(beta: &FaceValues) -> Scalar {
    beta.values()
        .map(Scalar::abs)
        .max()
        .unwrap_or_else(Scalar::zero)
}
