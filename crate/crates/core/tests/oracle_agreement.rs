use motionsph_core::oracle::{divided_difference_limit, psi_from_expansion, psi_montecarlo_su2, psi_rank1, Steps};
use motionsph_core::rational::{rat, ratio, to_f64_vec, Rat};
use motionsph_core::weyl::{all_faces, face_point};
use motionsph_core::{CartanType, MotionGroup, SpectralParameter};
use num_complex::Complex64;

fn probe(g: &MotionGroup) -> Vec<Rat> {
    let vals: Vec<Rat> = (0..g.rs.rank()).map(|i| rat(i as i64 + 2)).collect();
    g.rs.from_pairings(&vals).unwrap()
}

/// `λ₀ = (1 − i/2)·v` with `v` on the face where the simple roots in `face` vanish.
fn face_parameter(g: &MotionGroup, face: &[usize]) -> SpectralParameter {
    let v = face_point(&g.rs, face);
    let eta = v.iter().map(|x| x * ratio(-1, 2)).collect();
    g.normalize(&SpectralParameter::new(v, eta)).unwrap().lambda0
}

#[test]
fn divided_differences_match_exact_expansion_on_every_face() {
    for c in CartanType::ALL {
        let g = MotionGroup::new(c);
        let h0 = probe(&g);
        for face in all_faces(g.rs.rank()).into_iter().filter(|f| !f.is_empty()) {
            let lam = face_parameter(&g, &face);
            let ray = g.psi_singular(&lam, &h0).unwrap();
            let betas: Vec<Vec<Rat>> = ray.vanishing.iter().map(|&i| g.rs.positive_roots()[i].vector.clone()).collect();
            for t in [1.0, 3.0, 10.0] {
                let exact = ray.exp_poly.eval(t);
                let dd = divided_difference_limit(&g, &lam, &h0, t, &betas, Steps::for_order(betas.len())).unwrap();
                let err = (dd.value - exact).norm() / exact.norm().max(1.0);
                assert!(err < 1e-6, "{c} face {face:?} r={} t={t}: {err:e}", betas.len());
            }
        }
    }
}

#[test]
fn divided_difference_psi_matches_ray_psi() {
    let g = MotionGroup::new(CartanType::A3);
    let h0 = probe(&g);
    let lam = face_parameter(&g, &[0, 2]);
    let ray = g.psi_singular(&lam, &h0).unwrap();
    assert_eq!(ray.r(), 2);
    let betas: Vec<Vec<Rat>> = ray.vanishing.iter().map(|&i| g.rs.positive_roots()[i].vector.clone()).collect();
    let dd = divided_difference_limit(&g, &lam, &h0, 3.0, &betas, Steps::default()).unwrap();
    let psi = psi_from_expansion(&g, dd.value, &ray.c, &h0, 3.0);
    assert!((psi - ray.psi_at(3.0)).norm() < 1e-6 * ray.psi_at(3.0).norm().max(1.0));
}

#[test]
fn divided_difference_step_underflow_is_reported() {
    let g = MotionGroup::new(CartanType::A1);
    let lam = SpectralParameter::zero(g.rs.dim());
    let h0 = probe(&g);
    let alpha = g.rs.positive_roots()[0].vector.clone();
    let e = divided_difference_limit(&g, &lam, &h0, 1.0, &[alpha], Steps { scale: 0.05, levels: 40 });
    assert!(matches!(e, Err(motionsph_core::Error::StepUnderflow(_))));
}

#[test]
fn rank_one_regular_formula_is_sinc() {
    let g = MotionGroup::new(CartanType::A1);
    let alpha = to_f64_vec(&g.rs.simple_roots()[0]);
    // λ with ⟨α, A_λ⟩ = 2 and H = s·α/2, so ⟨A_λ, H⟩ = s
    let lam = SpectralParameter::from_pairings(&g.rs, &[rat(2)], &[rat(0)]).unwrap();
    for k in 0..1000 {
        let x = 0.013 + 0.02 * k as f64;
        let h: Vec<f64> = alpha.iter().map(|a| a * x / 2.0).collect();
        let v = g.psi_regular(&lam, &h).unwrap();
        let want = psi_rank1(Complex64::new(x, 0.0));
        assert!((v - want).norm() < 1e-10, "x = {x}");
    }
}

#[test]
fn rank_one_imaginary_is_sinh() {
    let g = MotionGroup::new(CartanType::A1);
    let alpha = to_f64_vec(&g.rs.simple_roots()[0]);
    let lam = SpectralParameter::from_pairings(&g.rs, &[rat(0)], &[rat(2)]).unwrap();
    for y in [0.5, 2.0, 7.0, 40.0] {
        let h: Vec<f64> = alpha.iter().map(|a| a * y / 2.0).collect();
        let v = g.psi_regular(&lam, &h).unwrap();
        assert!((v.re / (y.sinh() / y) - 1.0).abs() < 1e-12 && v.im.abs() < 1e-9 * v.re);
    }
}

#[test]
fn montecarlo_matches_sinc_within_three_sigma() {
    for (i, x) in [std::f64::consts::FRAC_PI_2, std::f64::consts::PI, 3.0].into_iter().enumerate() {
        let mc = psi_montecarlo_su2(x, 1.0, 1_000_000, 11 + i as u64);
        let want = psi_rank1(Complex64::new(x, 0.0));
        let dev = (mc.mean - want).norm();
        assert!(dev < 3.0 * mc.stderr, "x = {x}: |dev| = {dev:e}, stderr = {:e}", mc.stderr);
    }
}

#[test]
fn montecarlo_stderr_scales_as_inverse_sqrt() {
    let ns = [1_000usize, 10_000, 100_000, 1_000_000];
    let pts: Vec<(f64, f64)> =
        ns.iter().map(|&n| ((n as f64).ln(), psi_montecarlo_su2(2.0, 1.0, n, 5).stderr.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() < 0.05, "slope {slope}");
}
