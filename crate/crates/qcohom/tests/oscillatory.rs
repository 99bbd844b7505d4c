use qcohom::jfunction::j_projective;
use qcohom::mirror::{toric_mirror_from_rays, LaurentPolynomial};
use qcohom::oscillatory::*;
use qcohom::ring::{build_projective_ring, gamma_class, GradedVector};
use qcohom::scalars::*;
use qcohom::Error;

// 2K₀(2t) for t = 1/2, 1, 2
const K0_1: &str = "0.842048876481416666671254758425218072272439496453320944597939";
const K0_2: &str = "0.22778774549906687130543914986496366599665324877761776578506";
const K0_4: &str = "0.0223193521717060485394903919596669784500180477769486810765105";

fn proj_mirror(n: usize) -> LaurentPolynomial {
    let m = n - 1;
    let mut rays: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    rays.push(vec![-1; m]);
    toric_mirror_from_rays(&rays).unwrap()
}

fn real(s: &str, p: Prec) -> BigReal {
    BigReal::parse(s, p).unwrap()
}

#[test]
fn p1_integral_is_bessel() {
    let f = proj_mirror(2);
    let p = Prec::new(40);
    let fast = oscillatory_integral(&f, &BigReal::one(p), &QuadratureConfig::new(1e-12, Prec::new(15))).unwrap();
    assert!((fast.value.clone() - real(K0_2, p)).abs().to_f64() < 1e-12);
    let precise = oscillatory_integral(&f, &BigReal::one(p), &QuadratureConfig::new(1e-32, p)).unwrap();
    assert!((precise.value - real(K0_2, p)).below_pow10(-32));

    // value(z) = 2K₀(2/z)
    let q = QuadratureConfig::new(1e-12, Prec::new(15));
    for (z, want) in [(0.5, K0_4), (2.0, K0_1)] {
        let v = oscillatory_integral(&f, &BigReal::from_f64(z, p), &q).unwrap();
        assert!((v.value.to_f64() - real(want, p).to_f64()).abs() < 1e-12, "z = {z}");
    }
}

#[test]
fn inversion_symmetry_and_refinement() {
    let p = Prec::new(30);
    let f = proj_mirror(2);
    let flipped = LaurentPolynomial::from_terms(1, f.terms().map(|(e, c)| (vec![-e[0]], c.clone()))).unwrap();
    let q = QuadratureConfig::new(1e-12, Prec::new(15));
    let a = oscillatory_integral(&f, &BigReal::one(p), &q).unwrap();
    let b = oscillatory_integral(&flipped, &BigReal::one(p), &q).unwrap();
    assert_eq!(a.value.to_f64(), b.value.to_f64());
    // one more halving stays within the reported tolerance
    let finer = QuadratureConfig {
        initial_step: a.step,
        ..q.clone()
    };
    let c = oscillatory_integral(&f, &BigReal::one(p), &finer).unwrap();
    assert!((c.value.to_f64() - a.value.to_f64()).abs() < 1e-12 * a.value.to_f64());
    assert!(a.grid_params()["nodes"].as_u64().unwrap() > 0);
}

#[test]
fn integral_guards() {
    let p = Prec::new(30);
    let q = QuadratureConfig::new(1e-8, Prec::new(15));
    assert!(matches!(
        oscillatory_integral(&proj_mirror(5), &BigReal::one(p), &q),
        Err(Error::ResourceLimit(_))
    ));
    let half = LaurentPolynomial::from_terms(1, vec![(vec![1], int(1)), (vec![2], int(1))]).unwrap();
    assert!(matches!(
        oscillatory_integral(&half, &BigReal::one(p), &q),
        Err(Error::OriginNotInterior)
    ));
    let neg = LaurentPolynomial::from_terms(1, vec![(vec![1], int(1)), (vec![-1], int(-1))]).unwrap();
    assert!(oscillatory_integral(&neg, &BigReal::one(p), &q).is_err());
    assert!(oscillatory_integral(&proj_mirror(2), &BigReal::zero(p), &q).is_err());
}

#[test]
fn p1_central_charge_is_bessel() {
    let c = make_constants(40, 4).unwrap();
    let p = c.prec;
    let j = j_projective(2, 120).unwrap();
    for (t, want) in [(0.5, K0_1), (1.0, K0_2), (2.0, K0_4)] {
        let z = central_charge_structure_sheaf(&j, &BigReal::from_f64(t, p), &c).unwrap();
        assert!((z.re.clone() - real(want, p)).abs().to_f64() < 1e-8);
        assert!((z.re - real(want, p)).below_pow10(-30));
        assert!(z.im.abs().below_pow10(-30));
    }
}

#[test]
fn central_charge_is_linear_in_the_class() {
    let c = make_constants(30, 4).unwrap();
    let p = c.prec;
    let j = j_projective(3, 90).unwrap();
    let g = gamma_class(j.ring(), &c).unwrap();
    let t = BigReal::one(p);
    let z1 = central_charge(&j, &g, &t, &c).unwrap();
    let z2 = central_charge(&j, &g.scale(&BigComplex::from_i64(2, p)), &t, &c).unwrap();
    assert!((z1.clone() * BigComplex::from_i64(2, p) - z2).abs().below_pow10(-25));
    assert!((z1 - central_charge_structure_sheaf(&j, &t, &c).unwrap())
        .abs()
        .below_pow10(-25));
}

#[test]
fn central_charge_matches_orthant_integral() {
    let c = make_constants(30, 6).unwrap();
    let p = c.prec;
    let q = QuadratureConfig::new(1e-10, Prec::new(15));
    for n in 2..=4usize {
        let j = j_projective(n, 40 * n).unwrap();
        let f = proj_mirror(n);
        for t in [0.5, 1.0] {
            let z = central_charge_structure_sheaf(&j, &BigReal::from_f64(t, p), &c).unwrap();
            let i = oscillatory_integral(&f, &BigReal::from_f64(1.0 / t, p), &q).unwrap();
            assert!((z.re.to_f64() - i.value.to_f64()).abs() < 1e-6, "N = {n}, t = {t}");
        }
    }
}

#[test]
fn central_charge_decay_rate() {
    let c = make_constants(50, 4).unwrap();
    let p = c.prec;
    for n in [2usize, 3] {
        let j = j_projective(n, 60 * n).unwrap();
        let ts = [4.0, 5.0, 6.0, 7.0, 8.0];
        let zs: Vec<f64> = ts
            .iter()
            .map(|&t| {
                central_charge_structure_sheaf(&j, &BigReal::from_f64(t, p), &c)
                    .unwrap()
                    .re
                    .to_f64()
            })
            .collect();
        let (slope, _) = central_charge_decay_fit(&ts, &zs, n);
        assert!((slope + n as f64).abs() < 0.01 * n as f64, "N = {n}: slope {slope}");
    }
}

#[test]
fn truncated_series_is_rejected_for_central_charge() {
    let c = make_constants(30, 4).unwrap();
    let j = j_projective(2, 6).unwrap();
    assert!(central_charge_structure_sheaf(&j, &BigReal::from_f64(10.0, c.prec), &c).is_err());
}

#[test]
fn inverse_gamma_on_p2() {
    let c = make_constants(30, 4).unwrap();
    let p = c.prec;
    let ring = build_projective_ring(3);
    let h = GradedVector::<BigComplex>::basis(&ring, 1, p);
    let g = inverse_gamma_series(&h, &c).unwrap();
    // 1/Γ(1+h) = 1 + γh + (γ² − ζ(2))h²/2
    let gamma = 0.577_215_664_901_532_9;
    let z2 = std::f64::consts::PI.powi(2) / 6.0;
    let want = [1.0, gamma, (gamma * gamma - z2) / 2.0];
    for (x, w) in g.coeffs().iter().zip(want) {
        assert!((x.re.to_f64() - w).abs() < 1e-14);
    }
}

#[test]
fn laplace_lefschetz_quadric_and_cubic() {
    let c = make_constants(40, 6).unwrap();
    let p = c.prec;
    let jx = j_projective(4, 80).unwrap();
    let quad = laplace_lefschetz_check(&jx, 2, &BigReal::from_f64(0.05, p), 1e-8, &c).unwrap();
    assert!(quad.pass, "{}", quad.to_json());
    let cubic = laplace_lefschetz_check(&jx, 3, &BigReal::from_f64(0.03, p), 1e-6, &c).unwrap();
    assert!(cubic.pass, "{}", cubic.to_json());
    let js = cubic.to_json();
    for key in ["identity", "lhs", "rhs", "abs_diff", "rel_diff", "grid_params"] {
        assert!(!js[key].is_null(), "{key}");
    }
    // small u: both sides tend to 1 in H⁰
    let tiny = laplace_lefschetz_check(&jx, 2, &BigReal::from_f64(1e-4, p), 1e-8, &c).unwrap();
    assert!((tiny.lhs.coeff(0).re.to_f64() - 1.0).abs() < 1e-3);
    assert!((tiny.rhs.coeff(0).re.to_f64() - 1.0).abs() < 1e-3);
    assert!(laplace_lefschetz_check(&jx, 2, &BigReal::from_f64(1.0, p), 1e-8, &c).is_err());
    assert!(laplace_lefschetz_check(&jx, 4, &BigReal::from_f64(0.05, p), 1e-8, &c).is_err());
}
