use proptest::prelude::*;

use twirl_core::circuit::{circuit_from_json, circuit_to_json, circuit_unitary, matrix::distance_up_to_phase};
use twirl_core::ising::frustrated_ring;
use twirl_core::landscape::heatmap::Heatmap;
use twirl_core::landscape::io::{landscape_rows, read_landscape_csv, write_landscape_csv};
use twirl_core::landscape::{bootstrap_landscape, extremal, point_circuit, run_landscape, GridSpec, RunOptions};
use twirl_core::sim::{simulate, NoiseModel};
use twirl_core::twirl::{randomize, TwirlConfig};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // One unsatisfied bond at minimum: E = -(n - 2), with 2n states (which bond × global flip).
    #[test]
    fn frustrated_rings_have_one_broken_bond(n in 3usize..11, flip in 0usize..11) {
        let m = frustrated_ring(n, flip % n).unwrap();
        let (e, states) = m.ground_states().unwrap();
        prop_assert_eq!(e, -(n as f64 - 2.0));
        prop_assert_eq!(states.len(), 2 * n);
    }

    #[test]
    fn twirled_circuits_survive_json(seed in any::<u64>(), decompose in any::<bool>(), clifford in any::<bool>()) {
        let bare = point_circuit(&frustrated_ring(5, 4).unwrap(), 0.3, 0.7, decompose).unwrap();
        let mode = if clifford { "clifford" } else { "pauli" };
        let rc = randomize(&bare, &TwirlConfig::new(mode, 2, seed).unwrap()).unwrap();
        let u = circuit_unitary(&bare.without_measurement()).unwrap();
        for c in rc {
            let back = circuit_from_json(&circuit_to_json(&c).unwrap()).unwrap();
            prop_assert_eq!(&back, &c);
            let v = circuit_unitary(&back.without_measurement()).unwrap();
            prop_assert!(distance_up_to_phase(&u, &v) < 1e-10);
        }
    }
}

#[test]
fn csv_round_trip_preserves_the_extremal_pixel() {
    let m = frustrated_ring(6, 5).unwrap();
    let grid = GridSpec::square(9, (0.0, 1.0)).unwrap();
    let l = run_landscape(&m, &grid, &RunOptions::default()).unwrap();
    let boot = bootstrap_landscape(&l, 10, 0).unwrap();
    let mut buf = Vec::new();
    write_landscape_csv(&mut buf, &landscape_rows(&l, &boot.point_two_sigma).unwrap()).unwrap();
    let rows = read_landscape_csv(buf.as_slice()).unwrap();
    assert_eq!(rows.len(), 81);
    for (r, p) in rows.iter().zip(&l.points) {
        assert_eq!((r.gamma, r.beta, r.energy), (p.gamma, p.beta, p.energy));
    }
    let h = Heatmap::from_rows(&rows).unwrap();
    let report = extremal(&l).unwrap();
    assert_eq!(h.value_at(report.max_gamma, report.max_beta), Some(255));
    assert_eq!(h.value_at(report.min_gamma, report.min_beta), Some(0));
}

#[test]
fn noiseless_noisy_backend_matches_exact() {
    let m = frustrated_ring(5, 4).unwrap();
    let grid = GridSpec::square(3, (0.0, 1.0)).unwrap();
    let exact = run_landscape(&m, &grid, &RunOptions::default()).unwrap();
    let opts = RunOptions {
        backend: "noisy".into(),
        noise: Some(NoiseModel::noiseless()),
        trajectories: 3,
        shots: 30,
        twirl: TwirlConfig::new("pauli", 2, 5).unwrap(),
        ..RunOptions::default()
    };
    let noisy = run_landscape(&m, &grid, &opts).unwrap();
    for (a, b) in exact.points.iter().zip(&noisy.points) {
        assert!((a.energy - b.energy).abs() < 1e-10, "{a:?} vs {b:?}");
        assert_eq!(b.shots.as_ref().unwrap().total(), 60);
    }
}

#[test]
fn landscape_energy_matches_direct_simulation() {
    let m = frustrated_ring(7, 6).unwrap();
    let grid = GridSpec::square(4, (0.0, 1.0)).unwrap();
    let l = run_landscape(&m, &grid, &RunOptions::default()).unwrap();
    let table = m.energy_table().unwrap();
    for p in &l.points {
        let c = point_circuit(&m, p.gamma, p.beta, false).unwrap();
        let probs = simulate(&c).unwrap().probabilities();
        let direct: f64 = probs.iter().zip(&table).map(|(p, e)| p * e).sum();
        assert!((direct - p.energy).abs() < 1e-12);
        assert!(p.energy.abs() <= m.energy_bound());
    }
}
