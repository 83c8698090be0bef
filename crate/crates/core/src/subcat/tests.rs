use std::sync::Arc;

use super::*;
use crate::modcat::{enumerate_indecomposables, UniverseOptions};
use crate::quivalg::fixtures;
use crate::Algebra;

fn universe(spec: crate::AlgebraSpec, dmax: usize) -> Universe {
    let a = Arc::new(Algebra::build(&spec).unwrap());
    enumerate_indecomposables(&a, UniverseOptions::new(dmax)).unwrap()
}

// Over A2 with dmax 2: 0 = S2 = P2, 1 = S1, 2 = P1.
const S2: usize = 0;
const S1: usize = 1;
const P1: usize = 2;

#[test]
fn additive_closure() {
    let u = universe(fixtures::a2(2), 2);
    let a = u.algebra().clone();
    let gens = [Module::sum(&[&Module::projective(&a, 0), &Module::projective(&a, 1)], &a)];
    assert_eq!(Subcat::from_modules(&u, &gens).unwrap().members(), &[S2, P1]);
    assert!(Subcat::from_modules(&u, &[]).unwrap().is_empty());
    let s1 = Module::simple(&a, 0).power(2);
    assert_eq!(Subcat::from_modules(&u, &[s1]).unwrap().members(), &[S1]);
}

#[test]
fn fac_examples() {
    let u = universe(fixtures::a2(2), 2);
    assert_eq!(fac(&u, &Subcat::new([P1, S2])).unwrap(), Subcat::all(&u));
    assert_eq!(fac(&u, &Subcat::new([P1])).unwrap().members(), &[S1, P1]);
    assert!(fac(&u, &Subcat::empty()).unwrap().is_empty());
}

#[test]
fn perp_examples() {
    let u = universe(fixtures::a2(2), 2);
    let p = perp(&u, &Subcat::new([S2]), PerpKind::All, PerpSide::Left);
    assert!(p.is_decided());
    assert_eq!(p.subcat.members(), &[S2, P1]);
    let p = perp(&u, &Subcat::new([S1]), PerpKind::Zero, PerpSide::Right);
    assert_eq!(p.subcat.members(), &[S2, P1]);
    let p = perp(&u, &Subcat::empty(), PerpKind::One, PerpSide::Left);
    assert_eq!(p.subcat, Subcat::all(&u));
}

#[test]
fn approximation_examples() {
    let u = universe(fixtures::a2(2), 2);
    let a = u.algebra().clone();
    let c = approximation(&u, &Module::projective(&a, 1), &Subcat::new([S1]), Direction::Left).unwrap();
    assert!(c.verified && c.map.target().is_zero());
    let c = approximation(&u, &Module::projective(&a, 0), &Subcat::new([S1]), Direction::Left).unwrap();
    assert!(c.verified && c.map.is_surjective() && c.map.target().dim() == 1);
    let c = approximation(&u, &Module::simple(&a, 0), &Subcat::new([P1, S2]), Direction::Right).unwrap();
    assert!(c.verified && c.map.is_surjective());
    assert_eq!(c.approximating, vec![(P1, 1)]);
}

#[test]
fn finiteness_examples() {
    let u = universe(fixtures::a2(2), 2);
    let f = is_functorially_finite(&u, &Subcat::new([P1, S2]), Direction::Right).unwrap();
    assert!(f.holds && !f.degenerate);
    assert_eq!(f.certificates.len(), 3);
    let f = is_functorially_finite(&u, &Subcat::empty(), Direction::Right).unwrap();
    assert!(f.holds && f.degenerate);
    let l = universe(fixtures::loop2(2), 2);
    let s = Subcat::from_modules(&l, &[Module::simple(l.algebra(), 0)]).unwrap();
    let f = is_functorially_finite(&l, &s, Direction::Left).unwrap();
    assert!(f.holds);
    assert_eq!(f.certificates.len(), 2);
}

#[test]
fn torsion_pair_examples() {
    let u = universe(fixtures::a2(2), 2);
    let d = fac(&u, &Subcat::new([P1])).unwrap();
    let f = perp(&u, &Subcat::new([P1]), PerpKind::Zero, PerpSide::Right).subcat;
    assert_eq!(f.members(), &[S2]);
    assert!(is_torsion_pair(&u, &d, &f).unwrap().holds);
    assert!(is_torsion_pair(&u, &Subcat::all(&u), &Subcat::empty()).unwrap().holds);
    let t = is_torsion_pair(&u, &Subcat::new([S1]), &Subcat::new([S1])).unwrap();
    assert!(!t.holds && !t.hom_orthogonal);
}

#[test]
fn self_orthogonal_matches_perp() {
    let u = universe(fixtures::a3(2), 3);
    for mask in 0u32..(1 << u.len()) {
        let s = Subcat::new((0..u.len()).filter(|i| mask >> i & 1 == 1));
        let p = perp(&u, &s, PerpKind::All, PerpSide::Left);
        let so = is_self_orthogonal(&u, &s).unwrap();
        assert_eq!(so, s.is_subset(&p.subcat));
    }
}
