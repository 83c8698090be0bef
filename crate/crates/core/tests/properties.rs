use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use recollement::glue::glue_by_membership;
use recollement::modcat::{hom_basis, is_isomorphic, Module, ModuleMap, Universe};
use recollement::quivalg::fixtures;
use recollement::recol::Universes;
use recollement::subcat::{fac, perp, PerpKind, PerpSide, Subcat};
use recollement::{Algebra, Functor, Recollement};

struct Fixture {
    r: Recollement,
    u: Universes,
}

fn fixture(cell: &'static OnceLock<Fixture>, spec: fn(u32) -> recollement::AlgebraSpec, e: &[usize]) -> &'static Fixture {
    cell.get_or_init(|| {
        let r = Recollement::build(Arc::new(Algebra::build(&spec(2)).unwrap()), e).unwrap();
        let u = r.universes(3).unwrap();
        Fixture { r, u }
    })
}

fn prod() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    fixture(&F, fixtures::prod, &[2])
}

fn a3() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    fixture(&F, fixtures::a3, &[1])
}

fn a2() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    fixture(&F, fixtures::a2, &[0])
}

fn subset(u: &Universe, mask: u32) -> Subcat {
    Subcat::new((0..u.len()).filter(|i| mask >> i & 1 == 1))
}

/// A direct sum of universe objects with multiplicities `mults[i] % 3`.
fn sum_of(u: &Universe, mults: &[u8]) -> Module {
    let parts: Vec<Module> = u
        .modules()
        .iter()
        .zip(mults)
        .map(|(m, &k)| m.power(k as usize % 3))
        .collect();
    let refs: Vec<&Module> = parts.iter().collect();
    Module::sum(&refs, u.algebra())
}

fn random_map(m: &Module, n: &Module, seed: &[u32]) -> ModuleMap {
    let basis = hom_basis(m, n).unwrap();
    let p = m.field().p();
    let coeffs: Vec<u32> = (0..basis.len()).map(|i| seed.get(i).copied().unwrap_or(1) % p).collect();
    ModuleMap::combination(m, n, &basis, &coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fac_is_a_closure(mask in 0u32..64) {
        let u = &a3().u.middle;
        let s = subset(u, mask);
        let f = fac(u, &s).unwrap();
        prop_assert!(s.is_subset(&f));
        prop_assert_eq!(fac(u, &f).unwrap(), f);
    }

    #[test]
    fn perp_is_antitone(a in 0u32..64, b in 0u32..64) {
        let u = &a3().u.middle;
        let (s, t) = (subset(u, a), subset(u, a | b));
        for kind in [PerpKind::Zero, PerpKind::One, PerpKind::All] {
            for side in [PerpSide::Left, PerpSide::Right] {
                let ps = perp(u, &s, kind, side);
                let pt = perp(u, &t, kind, side);
                if ps.is_decided() && pt.is_decided() {
                    prop_assert!(pt.subcat.is_subset(&ps.subcat));
                }
            }
        }
    }

    #[test]
    fn glue_by_membership_is_monotone(a in 0u32..8, b in 0u32..8, c in 0u32..2, d in 0u32..2) {
        let f = prod();
        let probes = [Functor::IStar, Functor::IShriek, Functor::JStar];
        let (sa, ta) = (subset(&f.u.left, a), subset(&f.u.left, a | b));
        let (sc, tc) = (subset(&f.u.right, c), subset(&f.u.right, c | d));
        let small = glue_by_membership(&f.r, &f.u, &sa, &sc, &probes).unwrap();
        let big = glue_by_membership(&f.r, &f.u, &ta, &tc, &probes).unwrap();
        prop_assert!(small.is_subset(&big));
        // Modules over a product split, so each side contributes its own members.
        prop_assert_eq!(small.len(), sa.len() + sc.len());
    }

    #[test]
    fn corner_functors_are_sections(m0 in 0u8..3) {
        for f in [prod(), a3(), a2()] {
            let n = sum_of(&f.u.right, &[m0, 1]);
            for outer in [Functor::JShriek, Functor::JLowerStar] {
                let back = f.r.compose(&[Functor::JStar, outer], &n).unwrap();
                prop_assert!(is_isomorphic(&back, &n).unwrap().is_some());
            }
        }
    }

    #[test]
    fn quotient_functors_are_sections(mults in proptest::collection::vec(0u8..3, 6)) {
        for f in [prod(), a3(), a2()] {
            let y = sum_of(&f.u.left, &mults);
            for outer in [Functor::IStar, Functor::IShriek] {
                let back = f.r.compose(&[outer, Functor::ILowerStar], &y).unwrap();
                prop_assert!(is_isomorphic(&back, &y).unwrap().is_some());
            }
            prop_assert!(f.r.compose(&[Functor::JStar, Functor::ILowerStar], &y).unwrap().is_zero());
        }
    }

    #[test]
    fn functors_are_additive(mults in proptest::collection::vec(0u8..3, 6)) {
        let f = a3();
        let u = &f.u.middle;
        let m = sum_of(u, &mults);
        for func in [Functor::IStar, Functor::IShriek, Functor::JStar] {
            let whole = f.r.apply(func, &m).unwrap();
            let parts: Vec<Module> = u
                .modules()
                .iter()
                .zip(&mults)
                .map(|(x, &k)| f.r.apply(func, &x.power(k as usize % 3)).unwrap())
                .collect();
            let refs: Vec<&Module> = parts.iter().collect();
            let sum = Module::sum(&refs, f.r.algebra_of(Recollement::codomain(func)));
            prop_assert!(is_isomorphic(&whole, &sum).unwrap().is_some());
        }
    }

    #[test]
    fn functors_respect_composition(
        i in 0usize..6, j in 0usize..6, k in 0usize..6,
        s1 in proptest::collection::vec(0u32..2, 4),
        s2 in proptest::collection::vec(0u32..2, 4),
    ) {
        let f = a3();
        let u = &f.u.middle;
        let (x, y, z) = (u.module(i), u.module(j), u.module(k));
        let g = random_map(x, y, &s1);
        let h = random_map(y, z, &s2);
        let hg = h.after(&g).unwrap();
        for func in [Functor::IStar, Functor::IShriek, Functor::JStar] {
            let lhs = f.r.apply_map(func, &hg).unwrap();
            let rhs = f.r.apply_map(func, &h).unwrap().after(&f.r.apply_map(func, &g).unwrap()).unwrap();
            prop_assert_eq!(lhs.vertex_maps(), rhs.vertex_maps());
        }
    }
}
