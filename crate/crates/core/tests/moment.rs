use num::{One, Signed, Zero};
use proptest::prelude::*;
use toric_cover::moment::{
    moment_cpn, moment_map_eval, moment_product_cp1, moment_real_sphere, Cq, MomentError, MomentInput, MomentKind,
};
use toric_cover::rational::{frac, q};
use toric_cover::Q;

fn small_q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| frac(a, b))
}

fn small_c() -> impl Strategy<Value = Cq> {
    (small_q(), small_q()).prop_map(|(re, im)| Cq::new(re, im))
}

#[test]
fn worked_values() {
    let z = [Cq::new(q(1), q(0)), Cq::new(q(0), q(1)), Cq::new(q(1), q(1))];
    assert_eq!(moment_cpn(&z).unwrap(), vec![frac(1, 4), frac(1, 4), frac(1, 2)]);
    let pair = [[Cq::new(q(1), q(0)), Cq::new(q(2), q(0))]];
    assert_eq!(moment_product_cp1(&pair).unwrap(), vec![frac(4, 5)]);
    assert_eq!(moment_real_sphere(&[q(3), q(4)]).unwrap(), vec![frac(9, 25), frac(16, 25)]);
    assert_eq!(moment_cpn(&[Cq::zero(), Cq::zero()]), Err(MomentError::ZeroVector));
    assert_eq!(moment_cpn(&[]), Err(MomentError::EmptyInput));
    assert_eq!(moment_product_cp1(&[[Cq::one(), Cq::one()], [Cq::zero(), Cq::zero()]]), Err(MomentError::ZeroFactor(1)));
}

#[test]
fn dispatcher_rejects_mismatched_input() {
    let real = MomentInput::Real(vec![q(1)]);
    assert!(matches!(moment_map_eval(MomentKind::Cpn, &real), Err(MomentError::WrongInput { .. })));
    let odd: MomentInput = serde_json::from_str(r#"{"complex": [["1"], ["0", "1"], ["2"]]}"#).unwrap();
    assert!(matches!(moment_map_eval(MomentKind::ProductCp1, &odd), Err(MomentError::WrongInput { .. })));
    let ok: MomentInput = serde_json::from_str(r#"{"complex": [["1"], ["0", "1"]]}"#).unwrap();
    assert_eq!(moment_map_eval(MomentKind::ProductCp1, &ok).unwrap(), vec![frac(1, 2)]);
}

proptest! {
    #[test]
    fn cpn_lands_in_the_simplex(z in prop::collection::vec(small_c(), 1..6), lambda in small_c()) {
        prop_assume!(z.iter().any(|c| !c.is_zero()));
        let y = moment_cpn(&z).unwrap();
        prop_assert_eq!(y.iter().sum::<Q>(), q(1));
        for (yi, zi) in y.iter().zip(&z) {
            prop_assert!(!yi.is_negative());
            prop_assert_eq!(yi.is_zero(), zi.is_zero());
        }
        // The image depends only on the point of projective space.
        prop_assume!(!lambda.is_zero());
        let scaled: Vec<Cq> = z.iter().map(|c| c * &lambda).collect();
        prop_assert_eq!(moment_cpn(&scaled).unwrap(), y);
    }

    #[test]
    fn product_lands_in_the_cube(pairs in prop::collection::vec((small_c(), small_c()), 1..5)) {
        prop_assume!(pairs.iter().all(|(a, b)| !a.is_zero() || !b.is_zero()));
        let factors: Vec<[Cq; 2]> = pairs.iter().map(|(a, b)| [a.clone(), b.clone()]).collect();
        let y = moment_product_cp1(&factors).unwrap();
        prop_assert_eq!(y.len(), factors.len());
        for (yj, [w0, w1]) in y.iter().zip(&factors) {
            prop_assert!(!yj.is_negative() && *yj <= q(1));
            prop_assert_eq!(yj.is_zero(), w1.is_zero());
            prop_assert_eq!(*yj == q(1), w0.is_zero());
        }
    }

    #[test]
    fn sphere_squares_sum_to_one(x in prop::collection::vec(small_q(), 1..6)) {
        prop_assume!(x.iter().any(|v| !v.is_zero()));
        let y = moment_real_sphere(&x).unwrap();
        prop_assert_eq!(y.iter().sum::<Q>(), q(1));
        let neg: Vec<Q> = x.iter().map(|v| -v.clone()).collect();
        prop_assert_eq!(moment_real_sphere(&neg).unwrap(), y);
    }
}
