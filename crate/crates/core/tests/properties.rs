use nalgebra::DMatrix;
use proptest::prelude::*;
use rydcolor_core::basis::Basis;
use rydcolor_core::classical::{one_hot, potts_energy, qubo_energy};
use rydcolor_core::evolution::{anneal, AnnealOptions};
use rydcolor_core::graph::{automorphisms, builtin_graph, unit_disk_edges, Optimizer, BUILTIN_GRAPHS};
use rydcolor_core::hamiltonian::{apply_drive_step, dense_hamiltonian, DiagonalModel, DriveGenerator};
use rydcolor_core::interactions::{blockade_radius, vdw_shift, DrivePlan, LevelScheme};
use rydcolor_core::schedule::{schedule_delta, schedule_omega};
use rydcolor_core::state::StateVector;

fn graph(c: char) -> rydcolor_core::graph::ProblemGraph {
    let opt = if c < 'G' { Optimizer::TwoRydberg } else { Optimizer::ThreeRydberg };
    builtin_graph(c, opt).unwrap()
}

proptest! {
    #[test]
    fn vdw_is_monotone_in_distance(c6 in prop_oneof![-500.0..-0.5f64, 0.5..500.0f64], r in 1.0..20.0f64, dr in 1e-3..5.0f64) {
        let (near, far) = (vdw_shift(c6, r).unwrap(), vdw_shift(c6, r + dr).unwrap());
        if c6 > 0.0 { prop_assert!(near > far) } else { prop_assert!(near < far) }
    }

    #[test]
    fn shift_at_blockade_radius_is_the_drive(c6 in prop_oneof![-500.0..-0.5f64, 0.5..500.0f64], omega in 0.1..20.0f64) {
        let rb = blockade_radius(c6, omega).unwrap();
        let v = vdw_shift(c6, rb).unwrap();
        prop_assert!((v.abs() - omega).abs() < 1e-9 * omega);
        let doubled = blockade_radius(2.0 * c6, omega).unwrap();
        prop_assert!((doubled / rb - 2f64.powf(1.0 / 6.0)).abs() < 1e-12);
    }

    #[test]
    fn basis_round_trip(n in 1usize..7, k in 1usize..4, seed in any::<u64>()) {
        let b = Basis::new(n, k).unwrap();
        let idx = (seed % b.dim() as u64) as usize;
        let digits = b.decode(idx).unwrap();
        prop_assert_eq!(b.encode(&digits).unwrap(), idx);
        for (v, d) in digits.iter().enumerate() {
            prop_assert_eq!(*d, idx / (k + 1).pow(v as u32) % (k + 1));
        }
    }

    #[test]
    fn repeated_drive_steps_compose(omega in prop::collection::vec(0.0..8.0f64, 1..4), dt in 1e-4..0.05f64, p in 1usize..40) {
        let k = omega.len();
        let basis = Basis::new(1, k).unwrap();
        let mut state = StateVector::ground(basis);
        for _ in 0..p {
            apply_drive_step(&mut state, &omega, dt).unwrap();
        }
        let u = DriveGenerator::new(&omega).propagator(p as f64 * dt);
        for r in 0..=k {
            prop_assert!((state.amps[r] - u[r * (k + 1)]).norm() < 1e-10);
        }
    }

    #[test]
    fn hamiltonian_is_real_symmetric(g in prop::sample::select(vec!['A', 'B', 'C', 'D']), k in 1usize..4,
                                     scale in 0.0..1.0f64, om in 0.0..1.0f64) {
        let levels = LevelScheme::rb_65_70_75(k).unwrap();
        let delta: Vec<f64> = (0..k).map(|i| scale * (5.0 + 5.0 * i as f64)).collect();
        let omega: Vec<f64> = (0..k).map(|i| om * (1.0 + i as f64)).collect();
        let h: DMatrix<f64> = dense_hamiltonian(&graph(g), &levels, &delta, &omega).unwrap();
        prop_assert_eq!(&h, &h.transpose());
    }

    #[test]
    fn schedules_are_continuous_and_odd(t in 0.0..8.4f64, s in 0.0..3.8f64) {
        let plan = DrivePlan::standard(vec![1.0], vec![1.0]);
        let eps = 1e-9;
        for f in [schedule_delta, schedule_omega] {
            let (a, b) = (f(t.max(eps) - eps, &plan).unwrap(), f((t + eps).min(plan.t_total), &plan).unwrap());
            prop_assert!((a - b).abs() < 1e-6);
        }
        let t0 = (plan.t_i + plan.t_f) / 2.0;
        let (lo, hi) = (schedule_delta(t0 - s, &plan).unwrap(), schedule_delta(t0 + s, &plan).unwrap());
        prop_assert!((lo + hi).abs() < 1e-12);
    }

    #[test]
    fn evolution_conserves_norm(w1 in 0.5..6.0f64, w2 in 0.5..6.0f64, d1 in 2.0..15.0f64, d2 in 2.0..20.0f64, p in 10usize..60) {
        let levels = LevelScheme::rb_65_70_75(2).unwrap();
        let mut plan = DrivePlan::standard(vec![w1, w2], vec![d1, d2]);
        plan.trotter_steps = p;
        let out = anneal(&graph('C'), &levels, &plan, &AnnealOptions { samples: 10, ..Default::default() }).unwrap();
        for s in &out.trajectory.samples {
            prop_assert!((s.norm - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn diagonal_energy_reduces_to_potts(g in prop::sample::select(vec!['A', 'B', 'C', 'D', 'E', 'F']), k in 1usize..4,
                                        a in 0.1..20.0f64, b in 0.1..50.0f64) {
        let g = graph(g);
        let c6 = b * g.spacing_a.powi(6) / 1000.0;
        let inter = vec![0.0; k * (k - 1) / 2];
        let levels = LevelScheme::new(vec![c6; k], &inter, (1..=k).map(|i| format!("r{i}")).collect()).unwrap();
        let model = DiagonalModel::new(&g, &levels, Some(g.spacing_a * (1.0 + 1e-9))).unwrap();
        let basis = Basis::new(g.n(), k).unwrap();
        for idx in 0..basis.dim() {
            let digits = basis.decode(idx).unwrap();
            let e = model.energy(idx, &vec![a; k]);
            prop_assert!((e - potts_energy(&digits, &g, a, b)).abs() < 1e-9 * (1.0 + e.abs()));
        }
    }
}

#[test]
fn qubo_counts_monochromatic_edges() {
    for c in ['A', 'B', 'C'] {
        let g = graph(c);
        for k in 1usize..=3 {
            let total = k.pow(g.n() as u32);
            for code in 0..total {
                let labels: Vec<usize> = (0..g.n()).map(|v| code / k.pow(v as u32) % k).collect();
                let mono = g.edges.iter().filter(|&&(u, v)| labels[u] == labels[v]).count() as f64;
                let q = qubo_energy(&one_hot(&labels, k), &g);
                assert_eq!(q, mono);
                let shifted: Vec<usize> = labels.iter().map(|l| l + 1).collect();
                assert_eq!(potts_energy(&shifted, &g, 0.0, 1.0), q);
            }
        }
    }
}

#[test]
fn automorphism_groups_are_closed_and_edge_preserving() {
    for (c, _) in BUILTIN_GRAPHS {
        let g = graph(c);
        let group = automorphisms(&g).unwrap();
        assert!(group.is_closed(), "{c}");
        assert!(group.contains(&(0..g.n()).collect::<Vec<_>>()));
        for p in &group.permutations {
            for &(u, v) in &g.edges {
                assert!(g.has_edge(p[u], p[v]), "{c}");
            }
        }
    }
}

#[test]
fn unit_disk_reproduces_equidistant_edges() {
    for c in ['A', 'B', 'C', 'D', 'E', 'F'] {
        let g = graph(c);
        assert_eq!(unit_disk_edges(&g.positions, g.spacing_a * 1.01), g.edges, "{c}");
    }
}

#[test]
fn drive_generator_is_traceless_with_one_bright_mode() {
    let gen = DriveGenerator::new(&[1.0, 2.0, 5.0]);
    let m = gen.matrix();
    assert_eq!(m.trace(), 0.0);
    let mut ev = gen.eigenvalues();
    ev.sort_by(f64::total_cmp);
    let half = (1.0f64 + 4.0 + 25.0).sqrt() / 2.0;
    assert!((ev[0] + half).abs() < 1e-12 && (ev[3] - half).abs() < 1e-12);
    assert!(ev[1].abs() < 1e-12 && ev[2].abs() < 1e-12);
}

#[test]
fn weak_drive_spectrum_is_the_diagonal() {
    let levels = LevelScheme::rb_65_70_75(2).unwrap();
    let g = graph('D');
    let delta = [8.0, 19.0];
    let h = dense_hamiltonian(&g, &levels, &delta, &[1e-9, 1e-9]).unwrap();
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let mut diag = DiagonalModel::new(&g, &levels, None).unwrap().energies(&delta);
    diag.sort_by(f64::total_cmp);
    for (a, b) in ev.iter().zip(&diag) {
        assert!((a - b).abs() < 1e-6);
    }
}
