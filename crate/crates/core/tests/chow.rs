mod common;

use std::collections::BTreeSet;

use common::{factorial, Halfspaces};
use proptest::prelude::*;
use toric_cover::chow::{
    ample_from_offsets, avoidance_certificate, facet_monomial, intersection_number, is_fan_compatible,
    is_principal, linearly_equivalent, polytope_of_divisor, self_intersection_top, volume,
};
use toric_cover::rational::{frac, q};
use toric_cover::{Divisor, SimplePolytope, Q};

fn oracle_volume(p: &SimplePolytope) -> Q {
    let normals: Vec<Vec<i64>> = p.facets().iter().map(|f| f.normal.clone()).collect();
    let offsets: Vec<Q> = p.facets().iter().map(|f| f.offset.clone()).collect();
    common::slicing_volume(&Halfspaces::from_int(&normals, &offsets))
}

fn oracle_divisor_volume(p: &SimplePolytope, d: &Divisor) -> Q {
    let normals: Vec<Vec<i64>> = p.facets().iter().map(|f| f.normal.clone()).collect();
    common::slicing_volume(&Halfspaces::from_int(&normals, d.coeffs()))
}

#[test]
fn volumes_match_the_slicing_oracle() {
    for n in 1..=4 {
        for p in [SimplePolytope::cube(n), SimplePolytope::simplex(n)] {
            assert_eq!(volume(&p), oracle_volume(&p));
        }
        assert_eq!(oracle_volume(&SimplePolytope::cube(n)), q(1));
        assert_eq!(oracle_volume(&SimplePolytope::simplex(n)), q(1) / factorial(n));
    }
    let t = frac(5, 2);
    let scaled = SimplePolytope::from_halfspaces(
        vec![vec![1, 0, 0], vec![-1, 0, 0], vec![0, 1, 0], vec![0, -1, 0], vec![0, 0, 1], vec![0, 0, -1]],
        vec![q(0), t.clone(), q(0), t.clone(), q(0), t.clone()],
    )
    .unwrap();
    assert_eq!(volume(&scaled), &t * &t * &t);
}

#[test]
fn ample_top_power_is_n_factorial_volume() {
    for n in 1..=4 {
        for p in [SimplePolytope::cube(n), SimplePolytope::simplex(n)] {
            let h = ample_from_offsets(&p);
            let top = self_intersection_top(&p, &h).unwrap();
            assert_eq!(top, factorial(n) * oracle_volume(&p));
        }
    }
}

#[test]
fn cube_upper_facets_top_power() {
    for n in 1..=3 {
        let p = SimplePolytope::cube(n);
        let ids: Vec<(usize, Q)> = (0..n).map(|j| (SimplePolytope::cube_facet(j, true), q(1))).collect();
        let h = Divisor::from_facets(p.facet_count(), &ids);
        assert_eq!(self_intersection_top(&p, &h).unwrap(), factorial(n));
    }
}

#[test]
fn weighted_projective_plane_is_rational() {
    // Triangle x >= 0, y >= 0, x + 2y <= 2: the slanted facet class squares to 1/2.
    let p =
        SimplePolytope::from_halfspaces(vec![vec![1, 0], vec![0, 1], vec![-1, -2]], vec![q(0), q(0), q(2)]).unwrap();
    assert_eq!(facet_monomial(&p, &[2, 2]).unwrap(), frac(1, 2));
    assert_eq!(facet_monomial(&p, &[0, 2]).unwrap(), frac(1, 2));
    assert_eq!(facet_monomial(&p, &[1, 1]).unwrap(), q(2));
    assert_eq!(self_intersection_top(&p, &ample_from_offsets(&p)).unwrap(), q(2) * oracle_volume(&p));
}

#[test]
fn cube_monomials_follow_the_ring() {
    for n in 2..=3 {
        let p = SimplePolytope::cube(n);
        let m = p.facet_count();
        let mut mono = vec![0usize; n];
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            for slot in mono.iter_mut() {
                *slot = c % m;
                c /= m;
            }
            let axes: BTreeSet<usize> = mono.iter().map(|f| f / 2).collect();
            let expected = if axes.len() == n { q(1) } else { q(0) };
            assert_eq!(facet_monomial(&p, &mono).unwrap(), expected, "{mono:?}");
        }
    }
}

#[test]
fn simplex_classes_are_all_equal() {
    for n in 1..=3 {
        let p = SimplePolytope::simplex(n);
        let m = p.facet_count();
        for a in 0..m {
            for b in 0..m {
                assert!(linearly_equivalent(&p, &Divisor::facet(m, a), &Divisor::facet(m, b)));
            }
        }
        let all: Vec<usize> = (0..n).collect();
        assert_eq!(facet_monomial(&p, &all).unwrap(), q(1));
        assert_eq!(facet_monomial(&p, &vec![n; n]).unwrap(), q(1));
    }
}

#[test]
fn cube_principal_examples() {
    let p = SimplePolytope::cube(3);
    let m = p.facet_count();
    for j in 0..3 {
        let d = Divisor::facet(m, SimplePolytope::cube_facet(j, true)).sub(&Divisor::facet(m, SimplePolytope::cube_facet(j, false)));
        let mut e = vec![q(0); 3];
        e[j] = q(-1);
        assert_eq!(is_principal(&p, &d), Some(e));
    }
    assert_eq!(is_principal(&p, &Divisor::zero(m)), Some(vec![q(0); 3]));
    assert_eq!(is_principal(&p, &Divisor::facet(m, 0)), None);
}

#[test]
fn opposite_pair_blocks_the_certificate() {
    for n in 1..=3 {
        let p = SimplePolytope::cube(n);
        let h = Divisor::new(vec![q(1); p.facet_count()]);
        for j in 0..n {
            let t: BTreeSet<usize> = [SimplePolytope::cube_facet(j, false), SimplePolytope::cube_facet(j, true)].into();
            assert!(avoidance_certificate(&p, &h, &t).is_none());
        }
        assert_eq!(avoidance_certificate(&p, &h, &BTreeSet::new()), Some(h.clone()));
    }
}

fn small_q() -> impl Strategy<Value = Q> {
    (-3i64..=3, 1i64..=3).prop_map(|(a, b)| frac(a, b))
}

fn divisor_on(m: usize) -> impl Strategy<Value = Divisor> {
    prop::collection::vec(small_q(), m).prop_map(Divisor::new)
}

fn shapes() -> Vec<SimplePolytope> {
    vec![SimplePolytope::simplex(2), SimplePolytope::cube(2), SimplePolytope::cube(3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn symmetric_and_multilinear(
        shape in 0usize..3,
        seed in prop::collection::vec(divisor_on(6), 4),
        s in small_q(),
        perm in Just(()).prop_perturb(|_, mut rng| rng.random::<u64>()),
    ) {
        let p = &shapes()[shape];
        let n = p.dim();
        let m = p.facet_count();
        let ds: Vec<Divisor> = seed.iter().map(|d| Divisor::new(d.coeffs()[..m].to_vec())).collect();
        let args: Vec<Divisor> = ds[..n].to_vec();
        let base = intersection_number(p, &args).unwrap();
        let mut swapped = args.clone();
        swapped.swap(0, (perm as usize) % n);
        prop_assert_eq!(intersection_number(p, &swapped).unwrap(), base.clone());
        let mut lin = args.clone();
        lin[0] = args[0].scale(&s).add(&ds[n]);
        let mut other = args.clone();
        other[0] = ds[n].clone();
        let expected = &s * &base + intersection_number(p, &other).unwrap();
        prop_assert_eq!(intersection_number(p, &lin).unwrap(), expected);
    }

    #[test]
    fn principal_shift_is_invisible(
        shape in 0usize..3,
        seed in prop::collection::vec(divisor_on(6), 3),
        v in prop::collection::vec(small_q(), 3),
        slot in 0usize..3,
    ) {
        let p = &shapes()[shape];
        let n = p.dim();
        let m = p.facet_count();
        let args: Vec<Divisor> = seed[..n].iter().map(|d| Divisor::new(d.coeffs()[..m].to_vec())).collect();
        let mut shifted = args.clone();
        let k = slot % n;
        shifted[k] = args[k].add(&Divisor::principal(p, &v[..n]));
        prop_assert_eq!(intersection_number(p, &shifted).unwrap(), intersection_number(p, &args).unwrap());
    }

    #[test]
    fn nef_top_power_is_volume(
        shape in 0usize..3,
        wobble in prop::collection::vec((-1i64..=1, 5i64..=9), 6),
    ) {
        let p = &shapes()[shape];
        let n = p.dim();
        let m = p.facet_count();
        let h = ample_from_offsets(p);
        let bump: Vec<Q> = wobble[..m].iter().map(|&(a, b)| frac(a, b * 4)).collect();
        let d = h.add(&Divisor::new(bump));
        prop_assume!(is_fan_compatible(p, &d));
        let top = self_intersection_top(p, &d).unwrap();
        prop_assert_eq!(&top, &(factorial(n) * oracle_divisor_volume(p, &d)));
        prop_assert_eq!(top, factorial(n) * toric_cover::volume::region_volume(&polytope_of_divisor(p, &d)));
    }

    #[test]
    fn certificates_scale_with_the_class(
        n in 2usize..=3,
        cube in any::<bool>(),
        seed in any::<u64>(),
        a in 1i64..=7,
        b in 1i64..=7,
        mask in any::<u16>(),
    ) {
        let base = if cube { SimplePolytope::cube(n) } else { SimplePolytope::simplex(n) };
        let p = base.perturb_seeded(&frac(1, 10), seed).unwrap();
        let h = ample_from_offsets(&p);
        let touched: BTreeSet<usize> = (0..p.facet_count()).filter(|f| mask & (1 << f) != 0).take(n).collect();
        let s = frac(a, b);
        let c1 = avoidance_certificate(&p, &h, &touched);
        let c2 = avoidance_certificate(&p, &h.scale(&s), &touched);
        prop_assert!(c1.is_some());
        let (c1, c2) = (c1.unwrap(), c2.unwrap());
        prop_assert_eq!(c1.scale(&s), c2.clone());
        for f in &touched {
            prop_assert!(c2.coeff(*f) == &q(0));
        }
        prop_assert!(linearly_equivalent(&p, &c1, &h));
    }

    #[test]
    fn volume_route_matches_oracle_on_perturbed(
        n in 2usize..=3,
        cube in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let base = if cube { SimplePolytope::cube(n) } else { SimplePolytope::simplex(n) };
        let p = base.perturb_seeded(&frac(1, 8), seed).unwrap();
        prop_assert_eq!(volume(&p), oracle_volume(&p));
    }
}


#[test]
fn triangulation_oracle_agrees_with_slicing() {
    for n in 1..=4 {
        for p in [SimplePolytope::cube(n), SimplePolytope::simplex(n)] {
            let h = Halfspaces::from_int(
                &p.facets().iter().map(|f| f.normal.clone()).collect::<Vec<_>>(),
                &p.facets().iter().map(|f| f.offset.clone()).collect::<Vec<_>>(),
            );
            assert_eq!(common::triangulation_volume(&h), common::slicing_volume(&h));
        }
    }
    let p = SimplePolytope::cube(3).perturb_seeded(&frac(1, 8), 3).unwrap();
    let h = Halfspaces::from_int(
        &p.facets().iter().map(|f| f.normal.clone()).collect::<Vec<_>>(),
        &p.facets().iter().map(|f| f.offset.clone()).collect::<Vec<_>>(),
    );
    assert_eq!(common::triangulation_volume(&h), volume(&p));
}
