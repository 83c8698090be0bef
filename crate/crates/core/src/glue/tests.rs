use std::sync::Arc;

use super::*;
use crate::quivalg::fixtures;
use crate::tilt::{enumerate_support_tau_tilting, enumerate_weak_support_tau_tilting};
use crate::Algebra;

fn rec(spec: crate::AlgebraSpec, e: &[usize]) -> (Recollement, Universes) {
    let r = Recollement::build(Arc::new(Algebra::build(&spec).unwrap()), e).unwrap();
    let u = r.universes(3).unwrap();
    (r, u)
}

fn prod() -> (Recollement, Universes) {
    rec(fixtures::prod(2), &[2])
}

fn sub(u: &Universe, ms: &[Module]) -> Subcat {
    Subcat::from_modules(u, ms).unwrap()
}

struct Named {
    p1: Module,
    s1: Module,
    s2: Module,
    k: Module,
}

/// Middle modules `(P1,0)`, `(S1,0)`, `(S2,0)`, `(0,k)`.
fn middle(r: &Recollement) -> Named {
    let b = r.middle();
    Named {
        p1: Module::projective(b, 0),
        s1: Module::simple(b, 0),
        s2: Module::simple(b, 1),
        k: Module::simple(b, 2),
    }
}

fn left_proj(u: &Universes) -> Subcat {
    Subcat::new(u.left.projectives().unwrap())
}

fn right_all(u: &Universes) -> Subcat {
    Subcat::all(&u.right)
}

fn left_s1(r: &Recollement, u: &Universes) -> Subcat {
    sub(&u.left, &[Module::simple(r.left(), 0)])
}

const OPTS: GlueOptions = GlueOptions { force: false, depth: None };

#[test]
fn membership_examples() {
    let (r, u) = prod();
    let m = middle(&r);
    let probes = [Functor::IShriek, Functor::JStar];
    let z = glue_by_membership(&r, &u, &left_proj(&u), &right_all(&u), &probes).unwrap();
    assert_eq!(z, sub(&u.middle, &[m.p1, m.s2, m.k]));
    let z = glue_by_membership(&r, &u, &Subcat::empty(), &Subcat::empty(), &probes).unwrap();
    assert!(z.is_empty());
    let (r, u) = rec(fixtures::a2(2), &[0, 1]);
    let z = glue_by_membership(&r, &u, &Subcat::empty(), &Subcat::all(&u.right), &probes).unwrap();
    assert_eq!(z, Subcat::all(&u.middle));
}

#[test]
fn wakamatsu_glue_and_restrict() {
    let (r, u) = prod();
    let job = glue_wakamatsu(&r, &u, &left_proj(&u), &right_all(&u), OPTS).unwrap();
    assert_eq!(job.status, JobStatus::Verified, "{:?}", job.verification);
    let proj = Subcat::new(u.middle.projectives().unwrap());
    assert_eq!(job.result, Some(GlueResult::Glued(proj.clone())));
    assert_eq!(job.certificates.len(), 3);
    let c = &job.certificates[0];
    assert!(c.valid);
    assert_eq!(c.steps.len(), 1);
    assert!(c.steps[0].cokernel.is_empty());
    assert!(c.steps[0].right_term.is_empty());

    let tilting = sub(&u.left, &[Module::projective(r.left(), 0), Module::simple(r.left(), 0)]);
    let job = glue_wakamatsu(&r, &u, &tilting, &right_all(&u), OPTS).unwrap();
    assert_eq!(job.status, JobStatus::Verified, "{:?}", job.verification);
    for c in &job.certificates {
        assert!(c.valid && c.steps.len() <= 2, "{c:?}");
    }

    let job = restrict_wakamatsu(&r, &u, &proj, OPTS).unwrap();
    assert_eq!(job.status, JobStatus::Verified, "{:?}", job.hypotheses);
    assert_eq!(
        job.result,
        Some(GlueResult::Restricted {
            left: left_proj(&u),
            right: right_all(&u)
        })
    );
}

#[test]
fn refusals_name_the_failed_verdict() {
    let (r, u) = rec(fixtures::a2(2), &[0]);
    let all = Subcat::all(&u.left);
    let job = glue_wakamatsu(&r, &u, &left_proj(&u), &Subcat::all(&u.right), OPTS).unwrap();
    assert!(job.refused() && job.result.is_none());
    let failed: Vec<_> = job.failed_hypotheses().map(|h| h.name.as_str()).collect();
    assert_eq!(failed, vec!["i* exact"]);
    let (r2, u2) = rec(fixtures::a2(2), &[1]);
    let job = glue_weak_tau(&r2, &u2, &Subcat::all(&u2.left), &Subcat::all(&u2.right), OPTS).unwrap();
    assert!(job.refused());
    assert!(job.failed_hypotheses().any(|h| h.name == "i^! exact" && !h.witness.is_empty()));
    let forced = glue_weak_tau(&r, &u, &all, &Subcat::all(&u.right), GlueOptions { force: true, depth: None }).unwrap();
    assert!(forced.unsound && forced.result.is_some());
}

#[test]
fn weak_tau_examples() {
    let (r, u) = prod();
    let m = middle(&r);
    let job = glue_weak_tau(&r, &u, &left_s1(&r, &u), &right_all(&u), OPTS).unwrap();
    assert_eq!(job.status, JobStatus::Verified);
    let y = sub(&u.middle, &[m.s1.clone(), m.k.clone()]);
    assert_eq!(job.result, Some(GlueResult::Glued(y.clone())));
    let job = glue_weak_tau(&r, &u, &Subcat::empty(), &right_all(&u), OPTS).unwrap();
    assert_eq!(job.result, Some(GlueResult::Glued(sub(&u.middle, &[m.k]))));
    let job = restrict_weak_tau(&r, &u, &y, OPTS).unwrap();
    assert_eq!(job.status, JobStatus::Verified);
    assert_eq!(
        job.result,
        Some(GlueResult::Restricted {
            left: left_s1(&r, &u),
            right: right_all(&u)
        })
    );
}

#[test]
fn closure_gates_on_a2() {
    let (r, u) = rec(fixtures::a2(2), &[0]);
    let proj = Subcat::new(u.middle.projectives().unwrap());
    let b = r.middle();
    let s1 = u.middle.name(u.middle.index_of(&Module::simple(b, 0)).unwrap());
    // j_*j*(P1) is the injective envelope of S1, which is S1 itself.
    let job = restrict_wakamatsu(&r, &u, &proj, OPTS).unwrap();
    let failed: Vec<_> = job.failed_hypotheses().collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].name, "j_*j*(Y) ⊆ Y");
    assert!(failed[0].witness.contains(s1));
    let y = sub(&u.middle, &[Module::simple(b, 0), Module::projective(b, 0)]);
    let job = restrict_wakamatsu(&r, &u, &y, OPTS).unwrap();
    assert!(job.refused());
    let failed: Vec<_> = job.failed_hypotheses().collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].name, "i_*i^!(⊥Y) ⊆ Y");
    let s2 = u.middle.name(u.middle.index_of(&Module::simple(b, 1)).unwrap());
    assert!(failed[0].witness.contains(s2), "{}", failed[0].witness);
}

#[test]
fn product_classes_are_closed() {
    let (r, u) = prod();
    for y in enumerate_weak_support_tau_tilting(&u.middle).unwrap() {
        let job = restrict_weak_tau(&r, &u, &y, OPTS).unwrap();
        assert!(!job.refused(), "{:?}", job.hypotheses);
        assert_eq!(job.status, JobStatus::Verified);
    }
}

#[test]
fn support_tau_product_combinations() {
    let (r, u) = prod();
    let za = enumerate_support_tau_tilting(&u.left).unwrap();
    let zc = enumerate_support_tau_tilting(&u.right).unwrap();
    let mut glued = Vec::new();
    for a in &za {
        for c in &zc {
            let job = glue_support_tau(&r, &u, a, c, OPTS).unwrap();
            assert_eq!(job.status, JobStatus::Verified, "{:?}", job.verification.failures().collect::<Vec<_>>());
            let Some(GlueResult::Glued(z)) = job.result else { panic!() };
            assert_eq!(z.len(), a.len() + c.len());
            assert!(job.observations.iter().all(|o| o.verdict == Verdict::Pass));
            let back = restrict_support_tau(&r, &u, &z, OPTS).unwrap();
            assert_eq!(
                back.result,
                Some(GlueResult::Restricted {
                    left: a.clone(),
                    right: c.clone()
                })
            );
            glued.push(z);
        }
    }
    glued.sort();
    assert_eq!(glued, enumerate_support_tau_tilting(&u.middle).unwrap());
}

#[test]
fn triple_glue_commutes_with_phi() {
    let (r, u) = prod();
    for a in enumerate_support_tau_tilting(&u.left).unwrap() {
        for c in enumerate_support_tau_tilting(&u.right).unwrap() {
            let ta = phi(&u.left, &a).unwrap();
            let tc = phi(&u.right, &c).unwrap();
            let job = glue_triple(&r, &u, &ta, &tc, OPTS).unwrap();
            assert_eq!(job.status, JobStatus::Verified);
            let Some(GlueResult::GluedTriple { glued, triple }) = job.result else { panic!() };
            let z = match glue_support_tau(&r, &u, &a, &c, OPTS).unwrap().result {
                Some(GlueResult::Glued(z)) => z,
                _ => panic!(),
            };
            assert_eq!(glued, z);
            assert_eq!(triple, phi(&u.middle, &z).unwrap());
            let back = restrict_triple(&r, &u, &triple, OPTS).unwrap();
            assert_eq!(back.result, Some(GlueResult::RestrictedTriples { left: ta, right: tc }));
        }
    }
}
