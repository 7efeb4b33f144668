#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tiletransport::cochain::{FaceValues, FluxCochain};
use tiletransport::geometry::{face_signature_classes, Patch, Radius, Signature, System};
use tiletransport::Scalar;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small element of ℚ[φ] with numerators in -4..=4 and denominators in 1..=3.
pub fn small_scalar<R: Rng>(rng: &mut R, with_phi: bool) -> Scalar {
    let a = Scalar::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    if with_phi {
        a + Scalar::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)) * Scalar::phi()
    } else {
        a
    }
}

/// Nonnegative mass, sometimes zero, sometimes with a φ part.
pub fn mass<R: Rng>(rng: &mut R, with_phi: bool) -> Scalar {
    match rng.gen_range(0..6) {
        0 => Scalar::zero(),
        1 if with_phi => Scalar::phi() * Scalar::from(rng.gen_range(1..=3i64)),
        _ => Scalar::ratio(rng.gen_range(1..=6), rng.gen_range(1..=2)),
    }
}

/// Tiles adjacent to `t` across interior faces.
pub fn neighbours(patch: &Patch, t: usize) -> Vec<usize> {
    let mut out: Vec<usize> = patch
        .tile_faces(t)
        .iter()
        .filter_map(|&(f, _)| {
            let face = &patch.faces()[f];
            match (face.back, face.front) {
                (Some(a), Some(b)) => Some(if a == t { b } else { a }),
                _ => None,
            }
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Connected set of at most `size` tiles among those with `allowed[t]`,
/// grown from a random seed tile; sorted.
pub fn random_connected<R: Rng>(patch: &Patch, allowed: &[bool], size: usize, rng: &mut R) -> Vec<usize> {
    let candidates: Vec<usize> = (0..patch.len()).filter(|&t| allowed[t]).collect();
    let Some(&start) = candidates.choose(rng) else {
        return Vec::new();
    };
    let mut chosen = BTreeSet::from([start]);
    let mut frontier: Vec<usize> = neighbours(patch, start);
    while chosen.len() < size {
        frontier.retain(|t| allowed[*t] && !chosen.contains(t));
        if frontier.is_empty() {
            break;
        }
        let i = rng.gen_range(0..frontier.len());
        let t = frontier.swap_remove(i);
        chosen.insert(t);
        frontier.extend(neighbours(patch, t));
    }
    chosen.into_iter().collect()
}

/// A random strongly PE flux: one random value per face class of the host.
pub fn random_flux<R: Rng>(host: &Patch, radius: &Radius, rng: &mut R) -> FluxCochain {
    let classes = face_signature_classes(host, radius);
    flux_on_classes(host.system(), radius, &classes.signatures, rng)
}

pub fn flux_on_classes<R: Rng>(system: System, radius: &Radius, signatures: &[Signature], rng: &mut R) -> FluxCochain {
    let with_phi = system == System::Fibonacci;
    let rule: HashMap<_, _> = signatures
        .iter()
        .map(|s| (s.clone(), small_scalar(rng, with_phi)))
        .collect();
    FluxCochain::new(system, radius.clone(), rule).expect("host classes")
}

pub struct SmallProblem {
    pub patch: Patch,
    pub source: Vec<Scalar>,
    pub target: Vec<Scalar>,
}

/// A connected piece of `host` with 1..=`max_tiles` tiles and random masses
/// of equal total.
pub fn small_problem<R: Rng>(host: &Patch, max_tiles: usize, rng: &mut R) -> SmallProblem {
    let with_phi = host.system() == System::Fibonacci;
    let size = rng.gen_range(1..=max_tiles);
    let tiles = random_connected(host, &vec![true; host.len()], size, rng);
    let patch = host.subpatch(&tiles).expect("tiles of the host");
    let mut source: Vec<Scalar> = (0..patch.len()).map(|_| mass(rng, with_phi)).collect();
    let mut target: Vec<Scalar> = (0..patch.len()).map(|_| mass(rng, with_phi)).collect();
    let gap = source.iter().sum::<Scalar>() - target.iter().sum::<Scalar>();
    let at = rng.gen_range(0..patch.len());
    if gap.is_positive() {
        target[at] += &gap;
    } else {
        source[at] -= &gap;
    }
    SmallProblem { patch, source, target }
}

/// Tiles of `patch` all of whose faces carry a value.
pub fn covered_tiles(patch: &Patch, beta: &FaceValues) -> Vec<bool> {
    (0..patch.len())
        .map(|t| {
            patch
                .tile_faces(t)
                .iter()
                .all(|&(f, _)| beta.contains_key(&patch.faces()[f].key))
        })
        .collect()
}

pub fn host(system: System) -> Patch {
    match system {
        System::Chair => system.tiling().supertile(0, 4).unwrap(),
        System::Fibonacci => system.tiling().supertile(0, 9).unwrap(),
    }
}

/// Exhaustive Hall check with no slack: equal totals, and every set of tiles
/// holds no more source mass than its radius-`r` neighbourhood can take.
pub fn brute_force_hall(patch: &Patch, source: &[Scalar], target: &[Scalar], r: &Radius) -> bool {
    let n = patch.len();
    assert!(n <= 16, "exhaustive check is for small patches");
    let total_s: Scalar = source.iter().sum();
    let total_t: Scalar = target.iter().sum();
    if total_s != total_t {
        return false;
    }
    let near: Vec<u32> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| r.admits(&patch.centroid_dist2(i, j)))
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    (1u32..(1 << n)).all(|u| {
        let mut hood = 0u32;
        let mut supply = Scalar::zero();
        for i in 0..n {
            if u & (1 << i) != 0 {
                hood |= near[i];
                supply += &source[i];
            }
        }
        let demand: Scalar = (0..n).filter(|j| hood & (1 << j) != 0).map(|j| &target[j]).sum();
        supply <= demand
    })
}
