use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{collar_signature, CellRef, Patch, Radius, Signature, System};
use crate::scalar::Scalar;

/// How a top cochain assigns values: by prototile label (radius 0) or by
/// collar signature at the cochain's radius.
#[derive(Clone, Debug, PartialEq)]
pub enum TopRule {
    Label(Vec<Scalar>),
    Signature(HashMap<Signature, Scalar>),
}

/// A strongly pattern-equivariant assignment of a value to every tile.
#[derive(Clone, Debug, PartialEq)]
pub struct TopCochain {
    system: System,
    radius: Radius,
    rule: TopRule,
}

/// Radius-0 cochain from a label → value table that covers every prototile.
pub fn mass_cochain<S: AsRef<str>>(system: System, rule: &[(S, Scalar)]) -> Result<TopCochain> {
    let sys = system.tiling();
    let mut values = vec![None; sys.prototiles.len()];
    for (label, v) in rule {
        let id = sys.proto_by_label(label.as_ref())?;
        values[id] = Some(v.clone());
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(id, v)| v.ok_or_else(|| Error::MissingLabel(sys.label(id).to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(TopCochain::from_label_values(system, values))
}

/// Parses `"NE:1,SW:-1"` (or `"a:1, b:-phi"`); labels left out get 0.
pub fn parse_label_masses(system: System, spec: &str) -> Result<TopCochain> {
    let sys = system.tiling();
    let mut values = vec![Scalar::zero(); sys.prototiles.len()];
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (label, value) = item
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected label:value, got '{item}'")))?;
        values[sys.proto_by_label(label.trim())?] = value.parse()?;
    }
    Ok(TopCochain::from_label_values(system, values))
}

impl TopCochain {
    pub fn from_label_values(system: System, values: Vec<Scalar>) -> Self {
        assert_eq!(values.len(), system.tiling().prototiles.len());
        TopCochain {
            system,
            radius: Radius::zero(),
            rule: TopRule::Label(values),
        }
    }

    pub fn zero(system: System) -> Self {
        let n = system.tiling().prototiles.len();
        TopCochain::from_label_values(system, vec![Scalar::zero(); n])
    }

    /// Cochain defined by a table of tile signatures, all at `radius`.
    pub fn from_signatures(
        system: System,
        radius: Radius,
        table: HashMap<Signature, Scalar>,
    ) -> Result<Self> {
        if table
            .keys()
            .any(|s| s.system != system || &s.radius_sq != radius.squared())
        {
            return Err(Error::IncompatibleCochains);
        }
        Ok(TopCochain {
            system,
            radius,
            rule: TopRule::Signature(table),
        })
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn radius(&self) -> &Radius {
        &self.radius
    }

    pub fn rule(&self) -> &TopRule {
        &self.rule
    }

    /// Per-label values when the cochain has radius 0.
    pub fn label_values(&self) -> Option<&[Scalar]> {
        match &self.rule {
            TopRule::Label(v) => Some(v),
            TopRule::Signature(_) => None,
        }
    }

    pub fn value_on_tile(&self, patch: &Patch, tile: usize) -> Result<Scalar> {
        if patch.system() != self.system {
            return Err(Error::IncompatibleCochains);
        }
        match &self.rule {
            TopRule::Label(v) => Ok(v[patch.tiles()[tile].proto].clone()),
            TopRule::Signature(table) => {
                let sig = collar_signature(patch, &CellRef::Tile(tile), &self.radius)?;
                table
                    .get(&sig)
                    .cloned()
                    .ok_or_else(|| Error::UnknownSignature(sig.to_string()))
            }
        }
    }

    pub fn tile_values(&self, patch: &Patch) -> Result<Vec<Scalar>> {
        (0..patch.len()).map(|i| self.value_on_tile(patch, i)).collect()
    }

    /// Values on tiles whose collar fits in the patch; `None` elsewhere.
    pub fn tile_values_partial(&self, patch: &Patch) -> Result<Vec<Option<Scalar>>> {
        (0..patch.len())
            .map(|i| match self.value_on_tile(patch, i) {
                Ok(v) => Ok(Some(v)),
                Err(Error::InsufficientCollar(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect()
    }

    fn combine(&self, other: &TopCochain, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if self.system != other.system {
            return Err(Error::IncompatibleCochains);
        }
        match (&self.rule, &other.rule) {
            (TopRule::Label(a), TopRule::Label(b)) => Ok(TopCochain::from_label_values(
                self.system,
                a.iter().zip(b).map(|(x, y)| f(x, y)).collect(),
            )),
            (TopRule::Signature(a), TopRule::Signature(b)) if self.radius == other.radius => {
                let zero = Scalar::zero();
                let mut out = HashMap::new();
                for k in a.keys().chain(b.keys()) {
                    let v = f(a.get(k).unwrap_or(&zero), b.get(k).unwrap_or(&zero));
                    out.insert(k.clone(), v);
                }
                TopCochain::from_signatures(self.system, self.radius.clone(), out)
            }
            _ => Err(Error::IncompatibleCochains),
        }
    }

    pub fn add(&self, other: &TopCochain) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TopCochain) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        let rule = match &self.rule {
            TopRule::Label(v) => TopRule::Label(v.iter().map(|x| x * k).collect()),
            TopRule::Signature(t) => {
                TopRule::Signature(t.iter().map(|(s, x)| (s.clone(), x * k)).collect())
            }
        };
        TopCochain {
            system: self.system,
            radius: self.radius.clone(),
            rule,
        }
    }

    /// Whether every value is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        match &self.rule {
            TopRule::Label(v) => v.iter().all(|x| !x.is_negative()),
            TopRule::Signature(t) => t.values().all(|x| !x.is_negative()),
        }
    }
}
