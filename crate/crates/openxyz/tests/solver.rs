use openxyz::solver::{lattice_distance, reduce_to_cell, SolverConfig};
use openxyz::linalg::c;
use openxyz::{BetheSet, Error, Model};

#[test]
fn solves_two_sites() {
    let m = Model::seeded(2);
    for set in [BetheSet::I, BetheSet::II] {
        let roots = m.solve(set, 1, &SolverConfig::default()).unwrap();
        assert!(!roots.is_empty(), "{set}");
        for r in &roots {
            assert!(r.on_shell() && r.max_residual() < 1e-10);
            let st = m.bethe_state(set, &r.v).unwrap();
            assert!(m.eigen_residual(set, c(0.3, -0.05), &r.v, &st).unwrap() < 1e-7);
        }
    }
}

#[test]
fn deterministic_for_fixed_seed() {
    let m = Model::seeded(4);
    let cfg = SolverConfig { random_starts: 80, ..SolverConfig::default() };
    let a = m.solve(BetheSet::I, 2, &cfg).unwrap();
    let b = m.solve(BetheSet::I, 2, &cfg).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.v, y.v);
    }
}

#[test]
fn distinct_root_sets() {
    let m = Model::seeded(2);
    let tau = m.p.tau;
    let roots = m.solve(BetheSet::I, 1, &SolverConfig::default()).unwrap();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let (a, b) = (roots[i].v[0], roots[j].v[0]);
            assert!(lattice_distance(a - b, tau) > 1e-6);
            assert!(lattice_distance(a + b + m.eta(), tau) > 1e-6);
        }
    }
}

#[test]
fn empty_sector() {
    let m = Model::seeded(2);
    let r = m.solve(BetheSet::I, 0, &SolverConfig::default()).unwrap();
    assert_eq!(r.len(), 1);
    assert!(r[0].v.is_empty());
    assert!(matches!(m.solve(BetheSet::I, 4, &SolverConfig::default()), Err(Error::InvalidParams(_))));
}

#[test]
fn config_validation() {
    let bad = SolverConfig { tol: 1e-14, ..SolverConfig::default() };
    assert!(matches!(bad.validate(), Err(Error::Config(_))));
    let bad = SolverConfig { min_root_separation: 1e-9, ..SolverConfig::default() };
    assert!(bad.validate().is_err());
    let bad = SolverConfig { damping: 0.0, ..SolverConfig::default() };
    assert!(bad.validate().is_err());
}

#[test]
fn explicit_seeds_used() {
    let m = Model::seeded(2);
    let all = m.solve(BetheSet::I, 1, &SolverConfig::default()).unwrap();
    let cfg = SolverConfig { seeds: vec![all[0].v.clone()], ..SolverConfig::default() };
    let one = m.solve(BetheSet::I, 1, &cfg).unwrap();
    assert_eq!(one.len(), 1);
}

#[test]
fn cell_reduction() {
    let tau = c(0.0, 1.0);
    let w = reduce_to_cell(c(1.3, -0.2), tau);
    assert!((w - c(0.3, 0.8)).norm() < 1e-14);
    assert!(lattice_distance(c(2.0, 3.0), tau) < 1e-14);
}
