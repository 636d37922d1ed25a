use landau_core::asymptotics::solve_bordered;
use landau_core::eigensolve::cosine_angle;
use landau_core::grid::{diff2, sigma_from_lambda};
use landau_core::operators::{assemble_l, assemble_m, assemble_perturbation_terms};
use landau_core::swirl::{m_quadratic_form, random_smooth, x0a_norm};
use landau_core::{Grid, LandauParam, Params, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tuple() -> impl Strategy<Value = (f64, f64, i32, usize)> {
    (1.001f64..50.0, 0.0f64..20.0, -3i32..=3, 3usize..32)
}

proptest! {
    #[test]
    fn stream_and_swirl_conjugate_under_mode_flip((a, sigma, n, nodes) in tuple()) {
        let p = Params::new(a, sigma, n, nodes).unwrap();
        let g = Grid::for_params(&p);
        let q = p.with_mode(-n);
        prop_assert_eq!(assemble_l(&p, &g).conj(), assemble_l(&q, &g).entries);
        prop_assert_eq!(assemble_m(&p, &g).conj(), assemble_m(&q, &g).entries);
    }

    #[test]
    fn modes_collapse_onto_mode_one((a, sigma, n, nodes) in tuple()) {
        let p = Params::new(a, sigma, n, nodes).unwrap();
        let g = Grid::for_params(&p);
        let q = p.with_mode(1).with_sigma(n as f64 * sigma);
        prop_assume!(q.sigma >= 0.0);
        prop_assert_eq!(assemble_l(&p, &g).entries, assemble_l(&q, &g).entries);
        prop_assert_eq!(assemble_m(&p, &g).entries, assemble_m(&q, &g).entries);
    }

    #[test]
    fn mode_zero_operators_are_real((a, sigma, _n, nodes) in tuple()) {
        let p = Params::new(a, sigma, 0, nodes).unwrap();
        let g = Grid::for_params(&p);
        prop_assert!(assemble_l(&p, &g).is_real());
        prop_assert!(assemble_m(&p, &g).is_real());
    }

    #[test]
    fn sigma_expansion_is_exact((a, sigma, _n, nodes) in tuple()) {
        let p0 = Params::mode_zero(a, nodes).unwrap();
        let g = Grid::for_params(&p0);
        let t = assemble_perturbation_terms(&p0, &g);
        let l0 = assemble_l(&p0, &g).entries;
        let l1 = assemble_l(&p0.with_mode(1).with_sigma(sigma), &g).entries;
        let s = C64::new(sigma, 0.0);
        let recon = &l0 + &(&t.t1.entries * s) + &(&t.t2.entries * s.powi(2))
            + &(&t.t3.entries * s.powi(3)) + &(&t.t4.entries * s.powi(4));
        let scale = l1.iter().chain(l0.iter()).fold(0.0, |m, z| f64::max(m, z.norm()));
        for (x, y) in l1.iter().zip(recon.iter()) {
            prop_assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn cosine_is_a_symmetric_unit_interval_value(
        v in prop::collection::vec(-10.0f64..10.0, 5),
        w in prop::collection::vec(-10.0f64..10.0, 5),
    ) {
        prop_assume!(v.iter().any(|x| *x != 0.0) && w.iter().any(|x| *x != 0.0));
        let c = cosine_angle(&v, &w).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((c - cosine_angle(&w, &v).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn bordered_solves_are_certified(a in 1.05f64..20.0, nodes in 10usize..80, seed in any::<u64>()) {
        let p = Params::mode_zero(a, nodes).unwrap();
        let g = Grid::for_params(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rhs: Vec<f64> = random_smooth(&g, &mut rng).iter().map(|z| z.re).collect();
        let s = solve_bordered(&assemble_l(&p, &g), &rhs).unwrap();
        prop_assert!(s.relative_residual() <= 1e-8);
        prop_assert!(s.orthogonality_defect(&g.d_a_psi(p.a)) <= 1e-10);
    }

    #[test]
    fn swirl_form_dominates_its_mass_term((a, sigma, n, nodes) in tuple(), seed in any::<u64>()) {
        let p = Params::new(a, sigma, n, nodes).unwrap();
        let g = Grid::for_params(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = random_smooth(&g, &mut rng);
        let q = m_quadratic_form(&v, &p, &g).unwrap();
        let mass = (p.n_sigma() * x0a_norm(&v, p.a, &g).unwrap()).powi(2);
        prop_assert!(q.re_part > 0.0);
        prop_assert!(q.re_part >= mass * (1.0 - 1e-10));
    }

    #[test]
    fn landau_parameter_rejects_a_at_most_one(a in -5.0f64..=1.0) {
        prop_assert!(LandauParam::new(a).is_err());
        prop_assert!(Params::new(a, 1.0, 1, 10).is_err());
    }

    #[test]
    fn sigma_lambda_round_trip(lambda in 1.0001f64..1e6) {
        let s = sigma_from_lambda(lambda).unwrap();
        prop_assert!(((2.0 * std::f64::consts::PI / s).exp() / lambda - 1.0).abs() < 1e-10);
    }

    #[test]
    fn second_difference_is_symmetric(nodes in 3usize..60) {
        let d = diff2(&Grid::new(nodes).unwrap());
        prop_assert_eq!(d.clone(), d.t().to_owned());
    }
}
