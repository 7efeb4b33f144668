mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::Rng;
use tiletransport::cochain::{coboundary_of_values, max_abs, FaceValues};
use tiletransport::geometry::{patch_from_json, patch_to_json, Patch, Radius, System};
use tiletransport::transport::{
    flux_from_plan, grid_step, hall_feasible, simulate_rounds, solve_pe_coboundary_values,
    stepwise_plan_from_flux, verify_plan, Certificate, HallResult, TransportPlan, TransportProblem,
};
use tiletransport::{Error, Scalar};

use common::{
    brute_force_hall, covered_tiles, host, mass, random_connected, random_flux, rng, small_problem,
    SmallProblem,
};

fn hosts() -> &'static [Patch; 2] {
    static H: OnceLock<[Patch; 2]> = OnceLock::new();
    H.get_or_init(|| [host(System::Chair), host(System::Fibonacci)])
}

fn small(seed: u64) -> SmallProblem {
    let mut g = rng(seed);
    let host = &hosts()[g.gen_range(0..2)];
    small_problem(host, 12, &mut g)
}

fn solve(s: &SmallProblem, r: &Radius) -> HallResult {
    let p = TransportProblem::from_masses(&s.patch, s.source.clone(), s.target.clone(), r.clone(), Radius::zero())
        .unwrap();
    hall_feasible(&p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hall_agrees_with_exhaustive_check(seed in any::<u64>(), k in 0u64..5) {
        let s = small(seed);
        let r = grid_step(s.patch.system()).times(k);
        let res = solve(&s, &r);
        prop_assert_eq!(res.feasible, brute_force_hall(&s.patch, &s.source, &s.target, &r));
        match res.certificate {
            Certificate::Flow(plan) => {
                let rep = verify_plan(&plan, &s.source, &s.target, &s.patch, &r);
                prop_assert!(rep.ok, "{:?}", rep.violation);
            }
            Certificate::Cut(cut) => {
                prop_assert!(!res.feasible);
                prop_assert!(cut.mass > cut.capacity);
            }
        }
    }

    #[test]
    fn feasibility_is_monotone_in_radius(seed in any::<u64>(), k in 0u64..4) {
        let s = small(seed);
        let h = grid_step(s.patch.system());
        if solve(&s, &h.times(k)).feasible {
            prop_assert!(solve(&s, &h.times(k + 1)).feasible);
        }
    }

    #[test]
    fn feasibility_is_monotone_in_slack_band(seed in any::<u64>(), k in 0u64..3, band in 0u64..3) {
        let s = small(seed);
        let h = grid_step(s.patch.system());
        let at = |b: u64| {
            let p = TransportProblem::from_masses(&s.patch, s.source.clone(), s.target.clone(), h.times(k), h.times(b))
                .unwrap();
            hall_feasible(&p).feasible
        };
        if at(band) {
            prop_assert!(at(band + 1));
        }
    }

    /// A plan turned into a flux and back moves every tile by the same net
    /// amount. Plans with a segment leaving the patch have no straight-line flux.
    #[test]
    fn plan_flux_round_trip(seed in any::<u64>(), k in 1u64..5) {
        let s = small(seed);
        let res = solve(&s, &grid_step(s.patch.system()).times(k));
        let Certificate::Flow(plan) = res.certificate else { return Ok(()) };
        let beta = match flux_from_plan(&plan, &s.patch) {
            Ok(b) => b,
            Err(Error::PlanLeavesPatch(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let lifted: Vec<Scalar> = s.source.iter().map(|m| m + Scalar::one()).collect();
        let step = stepwise_plan_from_flux(&beta, &lifted, &s.patch).unwrap();
        for t in 0..s.patch.len() {
            prop_assert_eq!(&step.end[t] - &lifted[t], &s.target[t] - &s.source[t]);
        }
    }

    #[test]
    fn certificates_survive_json(seed in any::<u64>(), k in 0u64..3) {
        let s = small(seed);
        let res = solve(&s, &grid_step(s.patch.system()).times(k));
        let back: HallResult = serde_json::from_str(&serde_json::to_string(&res).unwrap()).unwrap();
        prop_assert_eq!(back, res);
    }

    #[test]
    fn patches_survive_json(seed in any::<u64>()) {
        let s = small(seed);
        let back = patch_from_json(&patch_to_json(&s.patch)).unwrap();
        prop_assert_eq!(back.tiles(), s.patch.tiles());
        prop_assert_eq!(back.faces(), s.patch.faces());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// α = δγ for a PE γ must be solved exactly, and the solution reproduces α.
    #[test]
    fn coboundaries_of_pe_fluxes_are_solved_exactly(seed in any::<u64>(), chair in any::<bool>()) {
        let patch = if chair {
            System::Chair.tiling().supertile(2, 3).unwrap()
        } else {
            hosts()[1].clone()
        };
        let r = patch.tiling().collar_radius(0);
        let mut g = rng(seed);
        let gamma = random_flux(&patch, &r, &mut g).face_values(&patch).unwrap();
        let alpha = coboundary_of_values(&gamma, &patch);
        let solved = solve_pe_coboundary_values(&alpha, &patch, &r).unwrap();
        prop_assert!(solved.is_exact());
        prop_assert!(!solved.core.is_empty());
        let again = coboundary_of_values(&solved.face_values, &patch);
        for &t in &solved.core {
            prop_assert_eq!(&again[t], &alpha[t]);
        }
    }

    /// Spreading a flux over N₃ rounds never drives a tile below the smaller of
    /// its start and end masses.
    #[test]
    fn stepwise_rounds_keep_masses_positive(seed in any::<u64>(), size in 1usize..60) {
        let host = &hosts()[0];
        let mut g = rng(seed);
        let r = host.tiling().collar_radius(0);
        let full = random_flux(host, &r, &mut g).face_values(host).unwrap();
        let allowed = covered_tiles(host, &full);
        let tiles = random_connected(host, &allowed, size, &mut g);
        let patch = host.subpatch(&tiles).unwrap();
        let beta: FaceValues = patch.faces().iter().map(|f| (f.key.clone(), full[&f.key].clone())).collect();
        let floor = max_abs(&beta) * Scalar::from(4) + Scalar::ratio(1, 2);
        let source: Vec<Scalar> = (0..patch.len()).map(|_| &floor + &mass(&mut g, false)).collect();
        let step = stepwise_plan_from_flux(&beta, &source, &patch).unwrap();
        prop_assert!(step.epsilon.is_positive());
        let bound = Radius::from_f64(step.displacement_bound).unwrap();
        let rep = verify_plan(&step.plan, &step.start, &step.end, &patch, &bound);
        prop_assert!(rep.ok, "{:?}", rep.violation);
        prop_assert!(rep.min_mass.unwrap() >= step.epsilon);

        // every round sits exactly on the line from start to end
        prop_assume!(beta.values().any(|v| !v.is_zero()));
        let states = simulate_rounds(&step.plan, &step.start);
        prop_assert_eq!(states.len() as u64, step.n3 + 1);
        let n3 = Scalar::from(step.n3);
        for (i, state) in states.iter().enumerate() {
            let frac = Scalar::from(i) * n3.inverse().unwrap();
            for t in 0..patch.len() {
                let expected = &step.start[t] + &frac * &(&step.end[t] - &step.start[t]);
                prop_assert_eq!(&state[t], &expected);
            }
        }
    }

    /// Gluing two patches along shared faces of total measure s loses 2s of boundary.
    #[test]
    fn boundary_measure_is_additive(seed in any::<u64>(), size in 2usize..80) {
        let host = &hosts()[0];
        let mut g = rng(seed);
        let tiles = random_connected(host, &vec![true; host.len()], size, &mut g);
        prop_assume!(tiles.len() >= 2);
        let cut = g.gen_range(1..tiles.len());
        let (a, b) = tiles.split_at(cut);
        let (pa, pb, whole) = (host.subpatch(a).unwrap(), host.subpatch(b).unwrap(), host.subpatch(&tiles).unwrap());
        let shared = pa
            .boundary_faces()
            .filter(|&f| pb.face(&pa.faces()[f].key).is_some_and(|g| !pb.faces()[g].is_interior()))
            .count();
        prop_assert_eq!(
            whole.boundary_measure(),
            pa.boundary_measure() + pb.boundary_measure() - Scalar::from(2 * shared)
        );
    }
}

#[test]
fn empty_plan_verifies_identical_masses() {
    let patch = System::Chair.tiling().supertile(0, 2).unwrap();
    let m = vec![Scalar::one(); patch.len()];
    let rep = verify_plan(&TransportPlan::empty(), &m, &m, &patch, &Radius::zero());
    assert!(rep.ok);
}
