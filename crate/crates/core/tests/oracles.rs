use landau_core::asymptotics::{
    first_order_imaginary, mu2_pipeline, sampled_d_a_psi, small_sigma_consistency,
};
use landau_core::eigensolve::{
    cosine_angle_complex, eigenvalues, kernel_alignment, match_spectra, pencil_eigenvalues, realness_audit,
    spectrum_reduced,
};
use landau_core::operators::{
    apply_l0_via_z, apply_tilde_l0, assemble, assemble_a, assemble_l, assemble_m, kernel_residual,
    KernelResidual, ModeBlocks, OperatorKind,
};
use landau_core::swirl::{symmetrized_m0_defect, weight_symmetry_defect, WeightKind};
use landau_core::{Grid, LandauParam, Params, C64};

fn params(a: f64, sigma: f64, n: i32, nodes: usize) -> Params {
    Params::new(a, sigma, n, nodes).unwrap()
}

fn inner(v: &[f64]) -> &[f64] {
    let lo = v.len() / 10;
    &v[lo..v.len() - lo]
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn a0_has_gegenbauer_spectrum() {
    let p = Params::mode_zero(2.0, 640).unwrap();
    let r = spectrum_reduced(&assemble_a(&p, &Grid::for_params(&p))).unwrap();
    for (ev, want) in r.eigenvalues.iter().zip([2.0, 6.0, 12.0, 20.0]) {
        assert!(((ev.re - want) / want).abs() < 5e-4, "{ev} vs {want}");
    }
    assert_eq!(r.max_abs_imag, 0.0);
}

#[test]
fn swirl_operator_tends_to_a0_for_large_a() {
    let p = Params::mode_zero(1e6, 320).unwrap();
    let r = spectrum_reduced(&assemble_m(&p, &Grid::for_params(&p))).unwrap();
    assert!((r.min_real - 2.0).abs() < 0.02, "{}", r.min_real);
    assert!(realness_audit(&r, 1e-8));
}

#[test]
fn stream_operator_reference_spectra() {
    for (a, min_ref, second_ref) in [(2.0, -1.6395e-4, 23.0465), (1.1, -0.0116, 19.1929)] {
        let p = Params::mode_zero(a, 640).unwrap();
        let g = Grid::for_params(&p);
        let r = spectrum_reduced(&assemble_l(&p, &g)).unwrap();
        assert!(((r.min_real - min_ref) / min_ref).abs() < 0.1, "a={a}: {}", r.min_real);
        assert!(((r.second_min_real - second_ref) / second_ref).abs() < 5e-3);
        assert!(realness_audit(&r, 1e-8));
        let cos = cosine_angle_complex(&r.nearest_zero.vector, &g.d_a_psi(p.a)).unwrap();
        assert!(cos >= 0.9999, "a={a}: {cos}");
    }
}

#[test]
fn kernel_residual_converges_in_the_interior() {
    for a in [1.1, 1.5, 2.0, 10.0] {
        let r: Vec<KernelResidual> =
            [160, 320, 640].iter().map(|&n| kernel_residual(a, n).unwrap()).collect();
        let order = |x: f64, y: f64| (x / y).log2();
        let interior = order(r[0].interior, r[2].interior) / 2.0;
        assert!(interior >= 1.8, "a={a}: interior order {interior}");
        // the first and last rows carry an O(1/δ) boundary layer
        let full = order(r[0].all_nodes, r[2].all_nodes) / 2.0;
        assert!(full < 0.0, "a={a}: all-node order {full}");
    }
}

#[test]
fn exactly_one_eigenvalue_near_zero() {
    for a in [1.1, 2.0, 10.0] {
        let p = Params::mode_zero(a, 320).unwrap();
        let ev = eigenvalues(&assemble_l(&p, &Grid::for_params(&p))).unwrap();
        let radius = 10.0 * p.delta();
        let near: Vec<&C64> = ev.iter().filter(|z| z.norm() < radius).collect();
        assert_eq!(near.len(), 1, "a={a}");
        assert!(ev.iter().filter(|z| z.norm() >= radius).all(|z| z.re > 5.0));
    }
}

#[test]
fn z_form_agrees_with_phi_form() {
    let tests: [fn(f64) -> f64; 5] = [
        |p| p.sin(),
        |p| (2.0 * p).sin(),
        |p| (3.0 * p).sin(),
        |p| p.sin() * (2.0 * p).sin(),
        |p| p.sin().powi(3) * p.cos(),
    ];
    for a in [1.1, 2.0] {
        let param = LandauParam::new(a).unwrap();
        for f in tests {
            let errs: Vec<f64> = [160, 320, 640]
                .iter()
                .map(|&n| {
                    let p = Params::mode_zero(a, n).unwrap();
                    let g = Grid::for_params(&p);
                    let h = g.sample(f);
                    let phi: Vec<f64> = assemble_l(&p, &g).apply_real(&h).iter().map(|z| z.re).collect();
                    let z = apply_l0_via_z(param, &g, &h).unwrap();
                    let d: Vec<f64> = phi.iter().zip(&z).map(|(x, y)| x - y).collect();
                    max_abs(inner(&d)) / max_abs(inner(&phi))
                })
                .collect();
            assert!(errs[0] / errs[1] > 3.4 && errs[1] / errs[2] > 3.4, "{errs:?}");
        }
    }
}

#[test]
fn z_form_annihilates_h0() {
    let a = LandauParam::new(2.0).unwrap();
    let errs: Vec<f64> = [160, 320, 640]
        .iter()
        .map(|&n| {
            let g = Grid::new(n).unwrap();
            let h: Vec<f64> = g.cos().iter().map(|&z| a.h0(z)).collect();
            max_abs(inner(&apply_tilde_l0(a, &g, &h).unwrap()))
        })
        .collect();
    // the stencils are exact on this function, leaving only rounding
    assert!(errs.iter().all(|&e| e < 1e-4), "{errs:?}");
}

#[test]
fn conjugation_and_mode_collapse_are_exact() {
    let kinds = [
        OperatorKind::A,
        OperatorKind::B,
        OperatorKind::C,
        OperatorKind::E,
        OperatorKind::L,
        OperatorKind::M,
    ];
    for (a, sigma, n) in [(1.01, 0.3, 1), (2.0, 1.0, 2), (10.0, 7.5, 3)] {
        let p = params(a, sigma, n, 48);
        let g = Grid::for_params(&p);
        for kind in kinds {
            let plus = assemble(kind, &p, &g).unwrap();
            let minus = assemble(kind, &p.with_mode(-n), &g).unwrap();
            assert_eq!(plus.conj(), minus.entries, "{kind} conj");
            let collapsed = assemble(kind, &p.with_mode(1).with_sigma(n as f64 * sigma), &g).unwrap();
            assert_eq!(plus.entries, collapsed.entries, "{kind} collapse");
        }
    }
}

#[test]
fn conjugate_modes_have_conjugate_spectra() {
    let p = params(2.0, 1.0, 1, 60);
    let g = Grid::for_params(&p);
    let plus = eigenvalues(&assemble_l(&p, &g)).unwrap();
    let minus: Vec<C64> = eigenvalues(&assemble_l(&p.with_mode(-1), &g))
        .unwrap()
        .iter()
        .map(|z| z.conj())
        .collect();
    let gaps = match_spectra(&plus, &minus);
    assert!(gaps.iter().all(|&d| d < 1e-8), "{gaps:?}");
}

#[test]
fn pencil_and_reduced_spectra_agree() {
    let tuples = [
        (1.01, 0.0, 0),
        (1.1, 0.0, 0),
        (2.0, 0.0, 0),
        (10.0, 0.0, 0),
        (2.0, 1.0, 1),
        (1.1, 0.1, 1),
        (10.0, 10.0, 1),
        (1.2, 1.0, 2),
        (2.0, 0.5, -1),
        (1.5, 5.0, 1),
    ];
    for (a, sigma, n) in tuples {
        let p = params(a, sigma, n, 64);
        let g = Grid::for_params(&p);
        let reduced = eigenvalues(&assemble_l(&p, &g)).unwrap();
        let pencil = pencil_eigenvalues(&ModeBlocks::assemble(&p, &g)).unwrap();
        assert_eq!(pencil.len(), 64);
        let worst = match_spectra(&reduced, &pencil).into_iter().fold(0.0, f64::max);
        assert!(worst <= 1e-8, "({a}, {sigma}, {n}): {worst:e}");
    }
}

#[test]
fn realness_of_mode_zero_and_complexity_of_mode_one() {
    for a in [1.1, 2.0, 10.0] {
        let p = Params::mode_zero(a, 640).unwrap();
        let r = spectrum_reduced(&assemble_l(&p, &Grid::for_params(&p))).unwrap();
        assert!(realness_audit(&r, 1e-8), "a={a}");
    }
    let p = params(2.0, 1.0, 1, 320);
    let r = spectrum_reduced(&assemble_l(&p, &Grid::for_params(&p))).unwrap();
    assert!(!realness_audit(&r, 1e-3));
    for a in [1.01, 2.0] {
        let p = Params::mode_zero(a, 160).unwrap();
        let r = spectrum_reduced(&assemble_m(&p, &Grid::for_params(&p))).unwrap();
        assert!(realness_audit(&r, 1e-8), "a={a}");
    }
}

#[test]
fn mode_one_reference_value() {
    let p = params(2.0, 1.0, 1, 640);
    let r = spectrum_reduced(&assemble_l(&p, &Grid::for_params(&p))).unwrap();
    assert!(((r.min_real - 10.5236) / 10.5236).abs() < 5e-3, "{}", r.min_real);
}

#[test]
fn swirl_weight_symmetry() {
    let landau: Vec<f64> = [160, 320, 640]
        .iter()
        .map(|&n| weight_symmetry_defect(&WeightKind::Landau, 2.0, n, 10, 11).unwrap())
        .collect();
    let delta_640 = std::f64::consts::PI / 641.0;
    assert!(landau[2] <= delta_640, "{landau:?}");
    assert!(landau[0] > landau[2]);
    let unit = weight_symmetry_defect(&WeightKind::Unit, 2.0, 640, 10, 11).unwrap();
    assert!(unit >= 0.01, "{unit}");
    let sym: Vec<f64> = [160, 640].iter().map(|&n| symmetrized_m0_defect(2.0, n).unwrap()).collect();
    assert!(sym[1] <= delta_640 && sym[0] / sym[1] > 4.0, "{sym:?}");
}

#[test]
fn mu2_is_stable_in_n_and_positive() {
    for a in [1.1, 2.0, 10.0] {
        let m2 = mu2_pipeline(a, 2000).unwrap().mu2;
        let m3 = mu2_pipeline(a, 3000).unwrap().mu2;
        assert!(((m2 - m3) / m3).abs() <= 1e-3, "a={a}: {m2} vs {m3}");
    }
    let values: Vec<f64> = [1.001, 1.01, 1.1, 1.2, 2.0, 10.0, 100.0]
        .iter()
        .map(|&a| mu2_pipeline(a, 320).unwrap().mu2)
        .collect();
    assert!(values.iter().all(|&m| m > 0.0), "{values:?}");
    let tail = &values[4..];
    assert!(tail[0] > tail[1] && tail[1] > tail[2] && tail[2] > 5.0, "{tail:?}");
}

#[test]
fn first_order_solution_certificates() {
    for a in [1.1, 2.0, 1e4] {
        let s = first_order_imaginary(a, 400).unwrap();
        let psi = sampled_d_a_psi(LandauParam::new(a).unwrap(), 400).unwrap();
        assert!(s.orthogonality_defect(&psi) <= 1e-10, "a={a}");
        assert!(s.relative_residual() <= 1e-8, "a={a}: {:e}", s.relative_residual());
        assert!(s.mu.is_finite() && s.eta.iter().all(|x| x.is_finite()));
    }
}

#[test]
fn small_sigma_consistency_at_large_a() {
    let (min_real, predicted) = small_sigma_consistency(10.0, 0.01, 640).unwrap();
    let ratio = min_real / predicted;
    assert!((0.5..=2.0).contains(&ratio), "{min_real} / {predicted}");
    let p = params(10.0, 1e-9, 1, 100);
    let l1 = spectrum_reduced(&assemble_l(&p, &Grid::for_params(&p))).unwrap();
    let p0 = Params::mode_zero(10.0, 100).unwrap();
    let l0 = spectrum_reduced(&assemble_l(&p0, &Grid::for_params(&p0))).unwrap();
    assert!((l1.min_real - l0.min_real).abs() < 1e-6);
}

#[test]
fn kernel_alignment_near_a_equal_one() {
    for (a, bound) in [(1.001, 0.998), (1.01, 0.9999), (2.0, 0.9999)] {
        let k = kernel_alignment(a, 640).unwrap();
        assert!(k.cos_unweighted >= bound, "a={a}: {k:?}");
    }
}
