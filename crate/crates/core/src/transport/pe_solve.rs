//! Solving `δβ = α` with β constant on face signature classes.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::linalg;
use crate::cochain::{FaceValues, FluxCochain, TileValues, TopCochain};
use crate::error::{Error, Result};
use crate::geometry::{face_signature_classes, Patch, Radius, Signature, System};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct PESolveResult {
    pub system: System,
    pub radius: Radius,
    pub classes: Vec<Signature>,
    pub values: Vec<Scalar>,
    /// `max |(δβ − α)(t)|` over the core tiles, exactly.
    pub residual: Scalar,
    /// A core tile attaining the residual, when it is nonzero.
    pub witness: Option<usize>,
    /// Tiles all of whose faces are classified and where α is known.
    pub core: Vec<usize>,
    /// β on every classified face.
    pub face_values: FaceValues,
}

impl PESolveResult {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }

    pub fn flux(&self) -> FluxCochain {
        let rule: HashMap<Signature, Scalar> = self
            .classes
            .iter()
            .cloned()
            .zip(self.values.iter().cloned())
            .collect();
        FluxCochain::new(self.system, self.radius.clone(), rule)
            .expect("classes share system and radius")
    }

    /// Serializable summary with exact values as strings.
    pub fn summary(&self) -> PESolveSummary {
        PESolveSummary {
            radius: self.radius.to_f64(),
            radius_squared: self.radius.squared().clone(),
            classes: self.classes.iter().map(|s| s.to_string()).collect(),
            values: self.values.clone(),
            residual: self.residual.clone(),
            residual_float: self.residual.to_f64(),
            witness: self.witness,
            core_tiles: self.core.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PESolveSummary {
    pub radius: f64,
    pub radius_squared: Scalar,
    pub classes: Vec<String>,
    pub values: Vec<Scalar>,
    pub residual: Scalar,
    pub residual_float: f64,
    pub witness: Option<usize>,
    pub core_tiles: usize,
}

/// Above this many classes an inconsistent system is fitted in floating point;
/// the reported residual is still exact for the fitted values.
const EXACT_LEAST_SQUARES_LIMIT: usize = 64;

pub fn solve_pe_coboundary(alpha: &TopCochain, patch: &Patch, radius: &Radius) -> Result<PESolveResult> {
    let values = alpha.tile_values_partial(patch)?;
    solve_pe_coboundary_values(&values, patch, radius)
}

/// As [`solve_pe_coboundary`], for α given directly by tile values.
pub fn solve_pe_coboundary_values(
    alpha: &TileValues,
    patch: &Patch,
    radius: &Radius,
) -> Result<PESolveResult> {
    let classes = face_signature_classes(patch, radius);
    if classes.is_empty() {
        return Err(Error::InsufficientCollar(format!(
            "no interior face has a collar of radius {:.6}",
            radius.to_f64()
        )));
    }
    let k = classes.len();
    // one equation per core tile: Σ sign · x[class] = α(t)
    let mut core = Vec::new();
    let mut equations: BTreeMap<(Vec<i64>, Scalar), usize> = BTreeMap::new();
    let mut tile_rows: Vec<(usize, Vec<i64>)> = Vec::new();
    for t in 0..patch.len() {
        let Some(a) = &alpha[t] else { continue };
        let mut row = vec![0i64; k];
        let mut ok = true;
        for &(f, sign) in patch.tile_faces(t) {
            match classes.class_of[f] {
                Some(c) => row[c] += sign as i64,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        core.push(t);
        *equations.entry((row.clone(), a.clone())).or_default() += 1;
        tile_rows.push((t, row));
    }
    if core.is_empty() {
        return Err(Error::EmptyInterior);
    }
    let rows: Vec<Vec<BigRational>> = equations
        .keys()
        .map(|(r, _)| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect();
    let rhs_rational: Vec<BigRational> =
        equations.keys().map(|(_, a)| a.rational_part().clone()).collect();
    let rhs_phi: Vec<BigRational> = equations.keys().map(|(_, a)| a.phi_part().clone()).collect();
    let exact = linalg::solve(&rows, &[rhs_rational.clone(), rhs_phi.clone()]);
    let (u, v) = match (&exact[0], &exact[1]) {
        (Some(u), Some(v)) => (u.clone(), v.clone()),
        _ => {
            let w: Vec<BigRational> = equations
                .values()
                .map(|&m| BigRational::from_integer((m as i64).into()))
                .collect();
            if k <= EXACT_LEAST_SQUARES_LIMIT {
                (
                    linalg::least_squares(&rows, &w, &rhs_rational),
                    linalg::least_squares(&rows, &w, &rhs_phi),
                )
            } else {
                let to_q = |xs: Vec<f64>| -> Vec<BigRational> {
                    xs.into_iter()
                        .map(|x| BigRational::from_float(x).unwrap_or_else(BigRational::zero))
                        .collect()
                };
                (
                    to_q(linalg::least_squares_f64(&rows, &w, &rhs_rational)),
                    to_q(linalg::least_squares_f64(&rows, &w, &rhs_phi)),
                )
            }
        }
    };
    let values: Vec<Scalar> = u.into_iter().zip(v).map(|(a, b)| Scalar::new(a, b)).collect();
    let mut residual = Scalar::zero();
    let mut witness = None;
    for (t, row) in &tile_rows {
        let lhs: Scalar = row
            .iter()
            .zip(&values)
            .filter(|(c, _)| **c != 0)
            .map(|(&c, x)| Scalar::from(c) * x)
            .sum();
        let a = alpha[*t].as_ref().expect("core tiles carry α");
        let diff = (lhs - a).abs();
        if diff > residual {
            residual = diff;
            witness = Some(*t);
        }
    }
    let face_values = (0..patch.faces().len())
        .filter_map(|f| {
            classes.class_of[f].map(|c| (patch.faces()[f].key.clone(), values[c].clone()))
        })
        .collect();
    Ok(PESolveResult {
        system: patch.system(),
        radius: radius.clone(),
        classes: classes.signatures,
        values,
        residual,
        witness,
        core,
        face_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{coboundary_of_values, mass_cochain};

    #[test]
    fn coboundary_of_a_pe_flux_is_recovered() {
        let p = System::Chair.tiling().supertile(0, 3).unwrap();
        let r = Radius::zero();
        let classes = face_signature_classes(&p, &r);
        let gamma: FaceValues = (0..p.faces().len())
            .filter_map(|f| {
                classes.class_of[f].map(|c| {
                    (p.faces()[f].key.clone(), Scalar::ratio(c as i64 * 3 - 7, 5))
                })
            })
            .collect();
        let alpha = coboundary_of_values(&gamma, &p);
        let sol = solve_pe_coboundary_values(&alpha, &p, &r).unwrap();
        assert!(sol.is_exact());
        let d = coboundary_of_values(&sol.face_values, &p);
        for &t in &sol.core {
            assert_eq!(d[t], alpha[t]);
        }
    }

    #[test]
    fn fibonacci_density_difference_is_not_exact_at_small_radius() {
        let p = System::Fibonacci.tiling().supertile(0, 10).unwrap();
        let alpha = mass_cochain(
            System::Fibonacci,
            &[("a", Scalar::one()), ("b", -Scalar::phi())],
        )
        .unwrap();
        let sol = solve_pe_coboundary(&alpha, &p, &Radius::zero()).unwrap();
        assert!(sol.residual.is_positive());
        assert!(sol.witness.is_some());
    }

    #[test]
    fn no_collar_no_solve() {
        let p = System::Chair.tiling().supertile(0, 1).unwrap();
        let alpha = TopCochain::zero(System::Chair);
        let huge = Radius::new(&Scalar::from(50)).unwrap();
        assert!(matches!(
            solve_pe_coboundary(&alpha, &p, &huge),
            Err(Error::InsufficientCollar(_))
        ));
    }
}
