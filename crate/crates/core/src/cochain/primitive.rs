use super::flux::FaceValues;
use super::top::TopCochain;
use crate::error::{Error, Result};
use crate::geometry::{FaceKey, Patch};
use crate::scalar::Scalar;

/// Vertex values `β(v)` of a one-dimensional primitive, left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct Primitive {
    pub vertices: Vec<Scalar>,
    pub values: Vec<Scalar>,
    pub sup_abs: Scalar,
}

impl Primitive {
    pub fn face_values(&self) -> FaceValues {
        self.vertices
            .iter()
            .zip(&self.values)
            .map(|(x, v)| (FaceKey::Vertex(x.clone()), v.clone()))
            .collect()
    }

    /// Position of the vertex where `|β|` is largest (first on ties).
    pub fn argmax_abs(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if v.abs() > self.values[best].abs() {
                best = i;
            }
        }
        best
    }
}

/// `β(v₀) = 0` at the left end and `β(v) = ∫` of α over the tiles left of `v`.
pub fn primitive_1d(alpha: &TopCochain, patch: &Patch) -> Result<Primitive> {
    let values = alpha.tile_values(patch)?;
    primitive_1d_values(&values, patch)
}

pub fn primitive_1d_values(tile_values: &[Scalar], patch: &Patch) -> Result<Primitive> {
    if patch.system().dimension() != 1 {
        return Err(Error::NotOneDimensional);
    }
    if patch.components().len() > 1 {
        return Err(Error::InvalidPatch("primitive needs a connected patch".into()));
    }
    let sys = patch.tiling();
    let mut vertices = Vec::with_capacity(patch.len() + 1);
    let mut values = Vec::with_capacity(patch.len() + 1);
    let mut acc = Scalar::zero();
    let mut sup = Scalar::zero();
    for (i, t) in patch.tiles().iter().enumerate() {
        let (l, r) = sys.tile_interval(t);
        if i == 0 {
            vertices.push(l);
            values.push(Scalar::zero());
        }
        acc += &tile_values[i];
        if acc.abs() > sup {
            sup = acc.abs();
        }
        vertices.push(r);
        values.push(acc.clone());
    }
    Ok(Primitive {
        vertices,
        values,
        sup_abs: sup,
    })
}
