//! Randomized invariants of the three computational layers.

use std::sync::{Arc, OnceLock};

use kahler_sobolev::algebra::poly::{int, Monomial};
use kahler_sobolev::algebra::{rf_equal, Point, Poly, RationalFunction as Rf, Var};
use kahler_sobolev::constants::{self, Dimensions};
use kahler_sobolev::spectral::{self, QuadratureGrid, SphereField};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const VARS: [Var; 4] = [Var::Gamma, Var::K, Var::Q, Var::N];

/// Sparse polynomial in four variables with small integer coefficients.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-5i64..=5, prop::array::uniform4(0u8..3)), 0..5).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (c, exps)| {
            let mono = VARS.iter().zip(exps).fold(Poly::constant(int(c)), |p, (&v, e)| &p * &Poly::var(v).pow(e as u32));
            &acc + &mono
        })
    })
}

/// Polynomial that vanishes nowhere on the positive orthant: 1 + Σ c_i v_i² with c_i ≥ 0.
fn positive_poly() -> impl Strategy<Value = Poly> {
    prop::array::uniform4(0i64..4).prop_map(|cs| {
        VARS.iter().zip(cs).fold(Poly::one(), |p, (&v, c)| &p + &Poly::var(v).pow(2).scale(&int(c)))
    })
}

fn rf() -> impl Strategy<Value = Rf> {
    (poly(), positive_poly()).prop_map(|(n, d)| Rf::new(n, &d).unwrap())
}

fn point() -> impl Strategy<Value = Point> {
    prop::array::uniform4((1i64..20, 1i64..7)).prop_map(|vals| {
        VARS.iter().zip(vals).map(|(&v, (p, q))| (v, BigRational::new(p.into(), q.into()))).collect()
    })
}

/// A different representative of the same function: numerator and
/// denominator multiplied by `c`.
fn rescaled(r: &Rf, c: &Poly) -> Rf {
    Rf::new(r.numerator() * c, &(&r.denominator() * c)).unwrap()
}

/// Admissible `(n, q)` with `n ≥ 2` strictly inside the exponent range.
fn dims() -> impl Strategy<Value = Dimensions> {
    (2u32..9, 0.005f64..0.995).prop_map(|(n, t)| {
        let top = (n as f64 + 1.0) / (n as f64 - 1.0);
        Dimensions::new(n, 1.0 + (top - 1.0) * t).unwrap()
    })
}

fn grid() -> &'static Arc<QuadratureGrid> {
    static GRID: OnceLock<Arc<QuadratureGrid>> = OnceLock::new();
    GRID.get_or_init(|| spectral::make_grid(12).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Poly::one(), a.clone());
        let zero = &a - &a;
        prop_assert!(zero.is_zero() && zero.is_empty());
    }

    #[test]
    fn poly_canonical_form(a in poly(), b in poly()) {
        let s = &a + &b;
        prop_assert!(s.terms().all(|(_, c): (&Monomial, &BigRational)| *c != int(0)));
        prop_assert_eq!(format!("{}", &(&a + &b) - &b), format!("{}", a));
    }

    #[test]
    fn evaluation_is_a_ring_map(a in rf(), b in rf(), pt in point()) {
        let va = a.value_at(&pt).unwrap();
        let vb = b.value_at(&pt).unwrap();
        prop_assert_eq!((&a * &b).value_at(&pt).unwrap(), &va * &vb);
        prop_assert_eq!((&a + &b).value_at(&pt).unwrap(), &va + &vb);
    }

    #[test]
    fn rf_equal_is_an_equivalence(a in rf(), c in positive_poly(), d in positive_poly(), other in rf()) {
        let b = rescaled(&a, &c);
        let e = rescaled(&b, &d);
        prop_assert!(rf_equal(&a, &a));
        prop_assert!(rf_equal(&a, &b) && rf_equal(&b, &a));
        prop_assert!(rf_equal(&b, &e) && rf_equal(&a, &e));
        prop_assert_eq!(rf_equal(&a, &other), rf_equal(&other, &a));
        prop_assert_eq!(rf_equal(&a, &other), rf_equal(&e, &other));
    }

    #[test]
    fn division_inverts_multiplication(a in rf(), s in positive_poly()) {
        let s = Rf::from(s);
        prop_assert!(rf_equal(&(&a * &s).checked_div(&s).unwrap(), &a));
    }

    #[test]
    fn interval_invariants(d in dims()) {
        let iv = constants::k_interval(d).unwrap();
        prop_assert!(iv.k_lo <= iv.k_hi);
        prop_assert!((iv.product() - 1.0).abs() <= 1e-12);
        prop_assert!((constants::k_lower_bound_eps0(d).unwrap() - iv.k_lo).abs() <= 1e-12);
    }

    #[test]
    fn constant_ordering(d in dims()) {
        let c = constants::ConstantsReport::compute(d).unwrap();
        prop_assert!(c.c_conj < c.c_s && c.c_s < c.c_riem_bridged, "{:?}", c);
        prop_assert!(c.lambda1_lower <= 1.0 + 1e-12);
        prop_assert!((constants::section2_threshold(d).unwrap() - 0.5 / c.c_s).abs() <= 1e-10);
    }

    #[test]
    fn constants_at_n1(q in 1.001f64..10.0) {
        let c = constants::ConstantsReport::compute(Dimensions::new(1, q).unwrap()).unwrap();
        prop_assert!((c.c_s - (q - 1.0) / 2.0).abs() <= 1e-12 * q);
    }

    #[test]
    fn recovery_at_lower_end(d in dims(), l in 1.0f64..20.0) {
        let k = constants::k_interval(d).unwrap().k_lo;
        let at = |lambda1| constants::cs_general(d, k, lambda1).unwrap();
        prop_assert!((at(l) - at(1.0)).abs() <= 1e-10);
        prop_assert!((at(l) - constants::cs_bm(d).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn star3_at_x_hi_is_f(d in dims(), t in 0.0f64..=1.0, l in 1.0f64..5.0) {
        let iv = constants::k_interval(d).unwrap();
        let k = iv.k_lo + (iv.k_hi - iv.k_lo) * t;
        let xb = constants::x_bounds(d, k).unwrap();
        let star3 = constants::lambda_bound_star3(d, k, xb.x_hi, l).unwrap();
        let f = constants::f_of_k(d, k, l).unwrap();
        prop_assert!((star3 - f).abs() <= 1e-12 * f.abs().max(1.0), "{} vs {}", star3, f);
    }

    #[test]
    fn optimum_beats_lower_end(d in dims(), l in 1.0f64..10.0) {
        let opt = constants::optimize_k(d, l).unwrap();
        prop_assert!(opt.lambda_threshold >= constants::f_of_k(d, opt.k_lo, l).unwrap() - 1e-10);
        prop_assert!(opt.lambda_threshold >= constants::f_of_k(d, opt.k_hi, l).unwrap() - 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn box_is_self_adjoint(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = SphereField::random(grid(), &mut rng, 12, 0.3, 1.0);
        let g = SphereField::random(grid(), &mut rng, 12, -0.5, 1.0);
        prop_assert!(spectral::self_adjointness_residual(&f, &g) < 1e-10);
        prop_assert!(spectral::ibp_residual(&f) < 1e-10);
    }

    #[test]
    fn transforms_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = SphereField::random(grid(), &mut rng, 12, 0.1, 2.0);
        let back = SphereField::project(grid(), f.values()).unwrap();
        let err = back.values().iter().zip(f.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-10);
        prop_assert!((f.mean() - f.average()).abs() < 1e-12);
    }

    #[test]
    fn sharp_constant_holds_on_the_sphere(seed in any::<u64>(), q in 1.1f64..3.0, mean in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = SphereField::random(grid(), &mut rng, 6, mean, 1.0);
        let r = spectral::sobolev_check(&phi, q, (q - 1.0) / 2.0, "property").unwrap();
        prop_assert!(r.margin >= -1e-9, "{:?}", r);
    }

    #[test]
    fn second_order_bound(a in -1.0f64..1.0, b in -1.0f64..1.0, c in 0.1f64..1.0, q in 1.05f64..5.0, slack in 0.0f64..2.0) {
        let mut coeffs = vec![0.0; grid().n_coeffs()];
        coeffs[1..4].copy_from_slice(&[a, c, b]);
        let f = SphereField::from_coeffs(grid(), coeffs).unwrap();
        // λ₁ = 1 on the sphere
        let cst = (q - 1.0) / 2.0 * (1.0 + slack);
        let r = spectral::perturbation_tcoeff(&f, q, cst).unwrap();
        prop_assert!(r.lhs_t2 <= r.rhs_t2 + 1e-10, "{:?}", r);
    }
}
