mod common;

use bqcf::blending::{pair_weight, BlendFamily};
use bqcf::experiments::{external_force, solve_mean_zero, ForceKind, ForceParams};
use bqcf::lattice::{ChainConfig, PeriodicField};
use bqcf::operators::{
    assemble_linear, bilinear, energy_atomistic, energy_linearized, force_nonlinear_atomistic, Deformation,
    EnergyModel, LinearModel,
};
use bqcf::potential::{Morse, MorseParams, PairPotential};
use bqcf::stability::{coercivity_constant, coercivity_constant_dense, EigenOptions, Model, OperatorFactory};
use common::*;

fn morse() -> Morse<f64> {
    Morse::new(MorseParams::default())
}

fn models() -> Vec<Model> {
    let mut v = vec![Model::Atomistic, Model::Continuum];
    for fam in BlendFamily::SPLINES {
        for w in [2, 5] {
            v.push(Model::blended(fam, w));
        }
    }
    v
}

#[test]
fn banded_apply_matches_dense_product() {
    let p = morse();
    for m in [8, 16, 64] {
        let cfg = ChainConfig::new(m, 2).unwrap();
        let u = random_field(cfg, m as u64);
        for model in models() {
            let op = OperatorFactory::new(cfg, model, &p).unwrap().build(1.05).unwrap();
            let got = op.apply(&u).unwrap();
            let want = dense(&op) * nalgebra::DVector::from_column_slice(u.values());
            let scale = want.amax();
            assert!(max_gap(got.values(), want.as_slice()) <= 1e-13 * scale, "{model:?} M={m}");
        }
    }
}

#[test]
fn bilinear_matches_dense_quadratic_form() {
    let p = morse();
    let cfg = ChainConfig::new(8, 2).unwrap();
    let (u, v) = (random_field(cfg, 1), random_field(cfg, 2));
    let a = cfg.spacing::<f64>();
    for model in models() {
        let op = OperatorFactory::new(cfg, model, &p).unwrap().build(1.0).unwrap();
        let k = dense(&op);
        let uu = nalgebra::DVector::from_column_slice(u.values());
        let vv = nalgebra::DVector::from_column_slice(v.values());
        let want = a * vv.dot(&(&k * &uu));
        let got = bilinear(&op, &u, &v).unwrap();
        assert!(rel_gap(got, want) < 1e-12, "{model:?}: {got} vs {want}");
        let sym = op.symmetric_part();
        let want_sym = 0.5 * a * (vv.dot(&(&k * &uu)) + uu.dot(&(&k * &vv)));
        assert!(rel_gap(bilinear(&sym, &u, &v).unwrap(), want_sym) < 1e-12);
    }
}

#[test]
fn blended_operator_matches_term_by_term_loop() {
    let p = morse();
    let cfg = ChainConfig::new(8, 2).unwrap();
    let beta = Model::blended(BlendFamily::Cubic, 2).beta::<f64>(&cfg).unwrap().unwrap();
    let u = random_field(cfg, 7);
    let gamma = 1.1;
    let op = assemble_linear(LinearModel::Blended(&beta), &p, &cfg, gamma).unwrap();
    let got = op.apply(&u).unwrap();
    let a2 = cfg.spacing::<f64>().powi(2);
    for ell in cfg.sites() {
        let mut f = 0.0;
        for k in 1..=2i64 {
            let c = p.phi_xx(k as f64 * gamma);
            let w = (beta.at(ell - k) + 2.0 * beta.at(ell) + beta.at(ell + k)) / 4.0;
            assert_eq!(w, pair_weight(&beta, ell, k));
            let far = u.at(ell + k) - 2.0 * u.at(ell) + u.at(ell - k);
            let near = u.at(ell + 1) - 2.0 * u.at(ell) + u.at(ell - 1);
            f += -w * c * far / a2 - (1.0 - w) * (k * k) as f64 * c * near / a2;
        }
        assert!(rel_gap(got.at(ell), f) < 1e-12 || (got.at(ell) - f).abs() < 1e-10, "site {ell}");
    }
}

#[test]
fn coercivity_matches_dense_generalized_eigenproblem() {
    let p = morse();
    let opts = EigenOptions::default();
    for (m, n) in [(16, 2), (32, 3), (64, 2)] {
        let cfg = ChainConfig::new(m, n).unwrap();
        for model in models() {
            let factory = OperatorFactory::new(cfg, model, &p).unwrap();
            for gamma in [1.0, 1.1, 1.19] {
                let op = factory.build(gamma).unwrap();
                let want = dense_cmin(&op);
                let got = coercivity_constant(&op, &opts).unwrap();
                let fallback = coercivity_constant_dense(&op).unwrap();
                let scale = want.abs().max(1.0);
                assert!((got.value - want).abs() <= 1e-8 * scale, "{model:?} M={m} N={n} γ={gamma}: {} vs {want}", got.value);
                assert!((fallback.value - want).abs() <= 1e-8 * scale);
                assert!(got.eigenvector.mean().abs() < 1e-12);
            }
        }
    }
}

#[test]
fn atomistic_constant_matches_fourier_symbol() {
    let p = morse();
    let cfg = ChainConfig::new(2000, 2).unwrap();
    let op = assemble_linear(LinearModel::Atomistic, &p, &cfg, 1.19).unwrap();
    let got = coercivity_constant(&op, &EigenOptions::default()).unwrap().value;
    let want = atomistic_fourier_cmin(&p, &cfg, 1.19);
    assert!(rel_gap(got, want) < 1e-8, "{got} vs {want}");
    // frozen from the closed form above
    assert!((want - 0.6722748658187676).abs() < 1e-12);
}

#[test]
fn nearest_neighbour_quotient_is_phi_xx() {
    let p = morse();
    let cfg = ChainConfig::new(64, 1).unwrap();
    for model in models() {
        for gamma in [1.0, 1.2] {
            let op = OperatorFactory::new(cfg, model, &p).unwrap().build(gamma).unwrap();
            let c = coercivity_constant(&op, &EigenOptions::default()).unwrap().value;
            assert!(rel_gap(c, p.phi_xx(gamma)) < 1e-9, "{model:?}: {c}");
        }
    }
    assert!((p.phi_xx(1.0) - 54.0).abs() < 1e-12);
}

fn sine_force(cfg: ChainConfig) -> PeriodicField<f64> {
    external_force(ForceKind::Sine, &ForceParams::defaults(ForceKind::Sine, &cfg), &cfg).unwrap()
}

#[test]
fn deformation_solve_matches_dense_bordered_system() {
    let p = morse();
    for (m, model) in [(16, Model::blended(BlendFamily::ConstantOne, 4)), (64, Model::blended(BlendFamily::Cubic, 5))] {
        for n in 1..=3 {
            let cfg = ChainConfig::new(m, n).unwrap();
            let op = OperatorFactory::new(cfg, model, &p).unwrap().build(1.0).unwrap();
            let f = sine_force(cfg);
            let sol = solve_mean_zero(&op, &f).unwrap();
            let want = dense_mean_zero_solve(&op, &f);
            let scale = want.iter().fold(0.0f64, |s, x| s.max(x.abs()));
            assert!(max_gap(sol.u.values(), &want) <= 1e-10 * scale, "M={m} N={n}");
            assert!(sol.u.mean().abs() < 1e-15);
        }
    }
}

#[test]
fn force_is_scaled_energy_gradient() {
    let p = morse();
    let cfg = ChainConfig::new(8, 2).unwrap();
    let a = cfg.spacing::<f64>();
    let u = random_field(cfg, 11).map(|x| 0.02 * x);
    let f = force_nonlinear_atomistic(&Deformation::from_displacement(u.clone()), &p).unwrap();
    let h = 1e-6;
    let mut fd = Vec::new();
    for ell in cfg.sites() {
        let mut up = u.clone();
        up.set(ell, u.at(ell) + h);
        let mut dn = u.clone();
        dn.set(ell, u.at(ell) - h);
        let ep = energy_atomistic(&Deformation::from_displacement(up), &p).unwrap();
        let em = energy_atomistic(&Deformation::from_displacement(dn), &p).unwrap();
        fd.push((ep - em) / (2.0 * h) / a);
    }
    let scale = f.linf_norm();
    assert!(max_gap(f.values(), &fd) <= 1e-6 * scale, "{:?} vs {fd:?}", f.values());
}

#[test]
fn small_displacement_force_is_linear_operator() {
    let p = morse();
    let cfg = ChainConfig::new(8, 2).unwrap();
    let u = random_field(cfg, 5).map(|x| 1e-6 * x);
    let f = force_nonlinear_atomistic(&Deformation::from_displacement(u.clone()), &p).unwrap();
    let k = assemble_linear(LinearModel::Atomistic, &p, &cfg, 1.0).unwrap().apply(&u).unwrap();
    assert!(max_gap(f.values(), k.values()) <= 1e-4 * k.linf_norm());
}

#[test]
fn energy_matches_pairwise_double_loop() {
    let p = morse();
    let cfg = ChainConfig::new(8, 2).unwrap();
    let n = cfg.len() as i64;
    let a = cfg.spacing::<f64>();
    let u = random_field(cfg, 3).map(|x| 0.01 * x);
    let y: Vec<f64> = cfg.sites().map(|l| cfg.position::<f64>(l) + u.at(l)).collect();
    let mut want = 0.0;
    for i in 0..n {
        for j in i - 2..=i + 2 {
            if j == i {
                continue;
            }
            // periodic image: the chain has length 2
            let yj = y[j.rem_euclid(n) as usize] + 2.0 * j.div_euclid(n) as f64;
            want += 0.5 * a * p.phi((yj - y[i as usize]) / a);
        }
    }
    let got = energy_atomistic(&Deformation::from_displacement(u), &p).unwrap();
    assert!(rel_gap(got, want) < 1e-12, "{got} vs {want}");
}

#[test]
fn linearized_energies_of_alternating_pattern() {
    let p = morse();
    let cfg = ChainConfig::new(4, 2).unwrap();
    let u = PeriodicField::from_values(cfg, vec![0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0]).unwrap();
    // by hand: nearest bonds all have |Δu| = a⁻¹·1, second-neighbour bonds alternate 0 and 2
    let c1 = p.phi_xx(1.0);
    let c2 = p.phi_xx(2.0);
    let atom = 16.0 * c1 + 32.0 * c2;
    let cont = (c1 / 2.0 + 2.0 * c2) * 32.0;
    let ea = energy_linearized(&u, &p, EnergyModel::Atomistic);
    let ec = energy_linearized(&u, &p, EnergyModel::Continuum);
    assert!(rel_gap(ea, atom) < 1e-13 && rel_gap(ec, cont) < 1e-13);
    assert!((ea - 786.53451338289).abs() < 1e-9);
    assert!((ec - 709.0690267657801).abs() < 1e-9);
}
