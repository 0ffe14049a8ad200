use motionsph_core::rational::{rat, ratio, GaussRat, Rat};
use motionsph_core::spherical::RayExpansion;
use motionsph_core::sympoly::{c_constant, c_constant_symbolic, c_formula_r2, c_formula_r3, gram_of, permanent};
use motionsph_core::weyl::{all_faces, face_point, verify_lemma2, WeylGroup};
use motionsph_core::{CartanType, MotionGroup, RootSystem, SpectralParameter};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
}

fn root_vectors(rs: &RootSystem, idx: &[usize]) -> Vec<Vec<Rat>> {
    idx.iter().map(|&i| rs.positive_roots()[i].vector.clone()).collect()
}

#[test]
fn c_matches_closed_forms_for_all_root_pairs_and_triples() {
    for c in CartanType::ALL {
        let rs = RootSystem::new(c);
        let n = rs.num_positive();
        for pair in subsets(n, 2) {
            let betas = root_vectors(&rs, &pair);
            let x = gram_of(&betas);
            assert_eq!(c_constant(&betas), c_formula_r2(&x), "{c} {pair:?}");
            assert_eq!(c_constant_symbolic(&betas, rs.dim()), c_formula_r2(&x));
        }
        for triple in subsets(n, 3) {
            let betas = root_vectors(&rs, &triple);
            let x = gram_of(&betas);
            assert_eq!(c_constant(&betas), c_formula_r3(&x), "{c} {triple:?}");
        }
    }
}

#[test]
fn c_closed_form_r3_on_synthetic_gram_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let mut x = vec![vec![rat(0); 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v = ratio(rng.random_range(-9..=9), rng.random_range(1..=4));
                x[i][j] = v.clone();
                x[j][i] = v;
            }
        }
        assert_eq!(permanent(&x), c_formula_r3(&x));
    }
    let diag = vec![vec![rat(2), rat(0), rat(0)], vec![rat(0), rat(2), rat(0)], vec![rat(0), rat(0), rat(2)]];
    assert_eq!(c_formula_r3(&diag), rat(8));
}

/// Parameters on every face of the fundamental chamber, with a purely imaginary part on
/// the same face.
fn face_parameters(g: &MotionGroup) -> Vec<(Vec<usize>, SpectralParameter)> {
    all_faces(g.rs.rank())
        .into_iter()
        .map(|face| {
            let v = face_point(&g.rs, &face);
            let eta = v.iter().map(|x| x * ratio(-2, 3)).collect();
            (face, g.normalize(&SpectralParameter::new(v, eta)).unwrap().lambda0)
        })
        .collect()
}

fn probe(g: &MotionGroup) -> Vec<Rat> {
    g.rs.from_pairings(&(0..g.rs.rank()).map(|i| rat(2 * i as i64 + 1)).collect::<Vec<_>>()).unwrap()
}

/// `[t^k]` of `Σ_s P_s(t)e^{f_s t}`, exactly.
fn taylor_coefficient(ray: &RayExpansion, k: usize) -> GaussRat {
    let mut total = GaussRat::zero();
    for (poly, f) in ray.per_element.iter().zip(&ray.frequencies) {
        for (j, a) in poly.iter().enumerate().take(k + 1) {
            let m = k - j;
            let fact: Rat = (1..=m as i64).map(rat).product();
            total += &(a * &f.pow(m as u32)).scale(&(Rat::one() / fact));
        }
    }
    total
}

#[test]
fn c_agrees_with_the_small_t_limit_of_the_expansion() {
    for c in CartanType::ALL {
        let g = MotionGroup::new(c);
        let h0 = probe(&g);
        for (face, lam) in face_parameters(&g) {
            let ray = g.ray_expansion(&lam, &h0).unwrap();
            let n = g.rs.num_positive();
            for k in 0..n {
                assert!(taylor_coefficient(&ray, k).is_zero(), "{c} {face:?}: t^{k} term");
            }
            // ψ(0) = 1 forces c = c₀·[t^N]E / π(H₀)
            let extracted = &(&g.c0.value() * &taylor_coefficient(&ray, n)) / &GaussRat::real(ray.pi_probe.clone());
            assert_eq!(extracted, GaussRat::real(ray.c.clone()), "{c} {face:?}");
            assert_eq!(ray.extracted_c(), extracted);
            assert!(!ray.c.is_zero());
        }
    }
}

#[test]
fn leading_terms_are_a_single_constant_times_s_pi_prime() {
    for c in CartanType::ALL {
        let g = MotionGroup::new(c);
        let h0 = probe(&g);
        for (face, lam) in face_parameters(&g) {
            let ray = g.ray_expansion(&lam, &h0).unwrap();
            let r = ray.r();
            let mut ratio_seen: Option<GaussRat> = None;
            for s in 0..g.weyl.order() {
                let poly = &ray.per_element[s];
                assert_eq!(poly.len(), r + 1, "{c} {face:?}: degree of P_s");
                let q = &poly[r] / &g.leading_shape(&ray, s);
                match &ratio_seen {
                    None => ratio_seen = Some(q),
                    Some(prev) => assert_eq!(&q, prev, "{c} {face:?} s={s}"),
                }
            }
            assert_eq!(ratio_seen.unwrap(), GaussRat::i().pow(r as u32));
        }
    }
}

#[test]
fn stabilizers_are_generated_by_vanishing_reflections() {
    for c in CartanType::ALL {
        let rs = RootSystem::new(c);
        let w = WeylGroup::generate(&rs);
        for face in all_faces(rs.rank()) {
            let lam = SpectralParameter::real(face_point(&rs, &face));
            let report = verify_lemma2(&rs, &w, &lam).unwrap();
            assert!(report.holds, "{c} face {face:?}");
            assert_eq!(report.generators, face);
        }
    }
}

#[test]
fn a3_two_root_stratum() {
    let g = MotionGroup::new(CartanType::A3);
    let v = face_point(&g.rs, &[0, 2]);
    let lam = SpectralParameter::new(v.clone(), v.iter().map(|x| -x).collect());
    let ray = g.psi_singular(&lam, &probe(&g)).unwrap();
    assert_eq!(ray.r(), 2);
    // orthogonal β's: c = x₁₁x₂₂
    assert_eq!(ray.c, rat(4));
    let witness = g.bracket_nonzero(&ray).unwrap();
    assert!(witness.holds());
}
