mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use tiletransport::cochain::{
    boundary_flux, coboundary_of_values, integrate, max_abs, parse_label_masses, FaceValues, Target,
};
use tiletransport::geometry::{Patch, RegionPart, RegionSpec, System};
use tiletransport::Scalar;

use common::{covered_tiles, host, random_connected, random_flux, rng};

struct Host {
    patch: Patch,
    beta: FaceValues,
    allowed: Vec<bool>,
}

fn hosted(system: System, seed: u64) -> Host {
    let patch = host(system);
    let mut g = rng(seed);
    let r = system.tiling().collar_radius(0);
    let beta = random_flux(&patch, &r, &mut g).face_values(&patch).unwrap();
    let allowed = covered_tiles(&patch, &beta);
    Host { patch, beta, allowed }
}

fn chair_host() -> &'static Host {
    static H: OnceLock<Host> = OnceLock::new();
    H.get_or_init(|| hosted(System::Chair, 7))
}

fn fib_host() -> &'static Host {
    static H: OnceLock<Host> = OnceLock::new();
    H.get_or_init(|| hosted(System::Fibonacci, 11))
}

fn restricted(beta: &FaceValues, sub: &Patch) -> FaceValues {
    sub.faces()
        .iter()
        .map(|f| (f.key.clone(), beta[&f.key].clone()))
        .collect()
}

fn stokes_holds(h: &Host, seed: u64, size: usize) -> Result<(), TestCaseError> {
    let mut g = rng(seed);
    let tiles = random_connected(&h.patch, &h.allowed, size, &mut g);
    let sub = h.patch.subpatch(&tiles).unwrap();
    let beta = restricted(&h.beta, &sub);
    let total: Scalar = coboundary_of_values(&beta, &sub)
        .into_iter()
        .map(|v| v.expect("all faces carry a value"))
        .sum();
    let flux = boundary_flux(&beta, &sub).unwrap();
    prop_assert_eq!(&total, &flux);
    // a coboundary is well balanced with constant sup |β|
    prop_assert!(total.abs() <= max_abs(&beta) * sub.boundary_measure());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stokes_on_chair_subpatches(seed in any::<u64>(), size in 1usize..120) {
        stokes_holds(chair_host(), seed, size)?;
    }

    #[test]
    fn stokes_on_fibonacci_subpatches(seed in any::<u64>(), size in 1usize..60) {
        stokes_holds(fib_host(), seed, size)?;
    }

    #[test]
    fn boundary_flux_is_additive(seed in any::<u64>(), size in 2usize..80) {
        let h = chair_host();
        let mut g = rng(seed);
        let tiles = random_connected(&h.patch, &h.allowed, size, &mut g);
        prop_assume!(tiles.len() >= 2);
        let split = tiles.len() / 2;
        let (a, b) = tiles.split_at(split);
        let flux = |ts: &[usize]| {
            let p = h.patch.subpatch(ts).unwrap();
            boundary_flux(&restricted(&h.beta, &p), &p).unwrap()
        };
        // faces shared by the two halves cancel
        prop_assert_eq!(flux(&tiles), flux(a) + flux(b));
    }

    #[test]
    fn integration_is_additive(seed in any::<u64>(), m in 0i64..4, k in 0i64..4, size in 1usize..200) {
        let h = chair_host();
        let mut g = rng(seed);
        let everywhere = vec![true; h.patch.len()];
        let tiles = random_connected(&h.patch, &everywhere, size, &mut g);
        let f = parse_label_masses(System::Chair, &format!("NE:{m},SW:{k}")).unwrap();
        let on = |ts: &[usize]| integrate(&f, Target::Patch(&h.patch.subpatch(ts).unwrap())).unwrap();
        let (a, b) = tiles.split_at(tiles.len() / 2);
        prop_assert_eq!(on(&tiles), on(a) + on(b));
    }

    #[test]
    fn region_integral_is_linear_in_parts(levels in prop::collection::vec((0usize..4, 0u32..6, 1u64..4), 1..5)) {
        let sys = System::Chair;
        let f = parse_label_masses(sys, "NE:2,NW:-1").unwrap();
        let whole = RegionSpec::new(
            sys,
            "union",
            levels.iter().map(|&(proto, level, count)| RegionPart { proto, level, count }).collect(),
            Scalar::one(),
        ).unwrap();
        let parts: Scalar = levels
            .iter()
            .map(|&(proto, level, count)| {
                let tile = sys.tiling().supertile(proto, level).unwrap();
                integrate(&f, Target::Patch(&tile)).unwrap() * Scalar::from(count)
            })
            .sum();
        prop_assert_eq!(integrate(&f, Target::Region(&whole)).unwrap(), parts);
    }
}

#[test]
fn stokes_on_whole_host_interior() {
    let h = chair_host();
    let tiles: Vec<usize> = (0..h.patch.len()).filter(|&t| h.allowed[t]).collect();
    let sub = h.patch.subpatch(&tiles).unwrap();
    let beta = restricted(&h.beta, &sub);
    let total: Scalar = coboundary_of_values(&beta, &sub).into_iter().flatten().sum();
    assert_eq!(total, boundary_flux(&beta, &sub).unwrap());
}
