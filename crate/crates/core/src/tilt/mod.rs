//! Wakamatsu tilting, (weak) support τ-tilting subcategories, τ-cotorsion
//! torsion triples and the maps Φ, Ψ between the last two.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modcat::{extend_along, hom_basis, ExtVerdict, Module, Universe};
use crate::report::{CheckEntry, CheckReport, Verdict};
use crate::subcat::{
    approximation, fac, is_functorially_finite, is_torsion_pair, perp, Direction, PerpKind, PerpSide, Subcat,
};

/// Largest universe searched exhaustively by the enumerators.
pub const MAX_ENUMERATION_UNIVERSE: usize = 20;

/// Self-orthogonality of `add S`, one entry per ordered pair of members.
pub fn self_orthogonality(u: &Universe, s: &Subcat) -> CheckReport {
    let mut rep = CheckReport::default();
    for &a in s.members() {
        for &b in s.members() {
            let (v, detail) = match u.ext_all(a, b) {
                ExtVerdict::VanishesAll => (Verdict::Pass, "Ext^i = 0 for all i >= 1".to_string()),
                ExtVerdict::Nonzero(i) => (Verdict::Fail, format!("Ext^{i} != 0")),
                ExtVerdict::BoundedOnly(n) => (Verdict::Unknown, format!("vanishing verified only up to degree {n}")),
            };
            rep.push(
                CheckEntry::new("self-orthogonal", format!("({}, {})", u.name(a), u.name(b)), v)
                    .with_detail(detail),
            );
        }
    }
    rep
}

pub fn is_self_orthogonal(u: &Universe, s: &Subcat) -> Verdict {
    self_orthogonality(u, s).verdict()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum XwStatus {
    Member,
    NonMember(String),
    /// The depth bound was reached without termination or a repeated cokernel.
    Unknown(usize),
}

/// One step `C_i -> W_i -> C_{i+1} -> 0` of a coresolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XwStep {
    /// `W_i` as `(name, multiplicity)`.
    pub term: Vec<(String, usize)>,
    /// `C_{i+1}`, the next image.
    pub cokernel: Vec<(String, usize)>,
}

/// Evidence for or against `M in X_W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XwCertificate {
    pub module: String,
    pub steps: Vec<XwStep>,
    pub status: XwStatus,
    /// The coresolution closes up because a cokernel class repeats from this step.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub period_from: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
}

pub fn default_depth(u: &Universe) -> usize {
    2 * u.len() + 2
}

fn named(u: &Universe, parts: &[(usize, usize)]) -> Vec<(String, usize)> {
    parts.iter().map(|&(i, k)| (u.name(i).to_string(), k)).collect()
}

/// `Ext^{>=1}(C, W) = 0` for every summand of `C`; `None` if only bounded.
fn in_left_perp(u: &Universe, parts: &[(usize, usize)], w: &Subcat) -> Option<bool> {
    let mut decided = true;
    for &(i, _) in parts {
        for &t in w.members() {
            match u.ext_all(i, t) {
                ExtVerdict::Nonzero(_) => return Some(false),
                ExtVerdict::BoundedOnly(_) => decided = false,
                ExtVerdict::VanishesAll => {}
            }
        }
    }
    decided.then_some(true)
}

/// Decides whether `m` has an exact coresolution `0 -> M -> W_0 -> W_1 -> ...`
/// by `add W` with every image in `^⊥W`.
///
/// Each step uses the universal left `W`-approximation. Any map from the
/// current image into `add W` factors through it, so if it is not injective
/// no injective map into `add W` exists and `M` is rejected.
pub fn x_w_membership(u: &Universe, m: &Module, w: &Subcat, depth: usize) -> Result<XwCertificate> {
    let warning = (is_self_orthogonal(u, w) != Verdict::Pass).then(|| "W is not certified self-orthogonal".to_string());
    let mut cur = m.clone();
    let mut cur_parts = u.identify(m)?;
    let mut cert = XwCertificate {
        module: if cur_parts.len() == 1 && cur_parts[0].1 == 1 {
            u.name(cur_parts[0].0).to_string()
        } else {
            format!("[{}]", m.dim_string())
        },
        steps: Vec::new(),
        status: XwStatus::Member,
        period_from: None,
        warning,
    };
    let mut seen: Vec<Vec<(usize, usize)>> = Vec::new();
    for step in 0..=depth {
        match in_left_perp(u, &cur_parts, w) {
            Some(true) => {}
            Some(false) => {
                cert.status = XwStatus::NonMember(format!("image {step} is not in the left Ext-orthogonal of W"));
                return Ok(cert);
            }
            None => {
                cert.status = XwStatus::Unknown(step);
                return Ok(cert);
            }
        }
        if cur.is_zero() {
            cert.status = XwStatus::Member;
            return Ok(cert);
        }
        if let Some(k) = seen.iter().position(|s| *s == cur_parts) {
            cert.period_from = Some(k);
            cert.status = XwStatus::Member;
            return Ok(cert);
        }
        if step == depth {
            break;
        }
        seen.push(cur_parts.clone());
        let approx = approximation(u, &cur, w, Direction::Left)?;
        if !approx.map.is_injective() {
            cert.status = XwStatus::NonMember(format!(
                "the left W-approximation of image {step} is not injective"
            ));
            return Ok(cert);
        }
        let coker = approx.map.cokernel();
        let next_parts = u.identify(&coker.module)?;
        cert.steps.push(XwStep {
            term: named(u, &approx.approximating),
            cokernel: named(u, &next_parts),
        });
        cur = coker.module;
        cur_parts = next_parts;
    }
    cert.status = XwStatus::Unknown(depth);
    Ok(cert)
}

/// Wakamatsu tilting: self-orthogonal with every indecomposable projective in `X_W`.
pub fn wakamatsu_report(u: &Universe, w: &Subcat) -> Result<(CheckReport, Vec<XwCertificate>)> {
    let mut rep = self_orthogonality(u, w);
    if w.is_empty() {
        rep.push(CheckEntry::new("self-orthogonal", "(empty)", Verdict::Pass));
    }
    let a = u.algebra();
    let mut certs = Vec::new();
    for v in 0..a.num_vertices() {
        let p = Module::projective(a, v);
        let c = x_w_membership(u, &p, w, default_depth(u))?;
        let verdict = match &c.status {
            XwStatus::Member => Verdict::Pass,
            XwStatus::NonMember(_) => Verdict::Fail,
            XwStatus::Unknown(_) => Verdict::Unknown,
        };
        let mut e = CheckEntry::new("projective in X_W", format!("P({})", a.quiver().vertices[v]), verdict);
        if let XwStatus::NonMember(r) = &c.status {
            e = e.with_detail(r.clone());
        }
        rep.push(e);
        certs.push(c);
    }
    Ok((rep, certs))
}

pub fn is_wakamatsu_tilting(u: &Universe, w: &Subcat) -> Result<Verdict> {
    Ok(wakamatsu_report(u, w)?.0.verdict())
}

/// The two conditions of weak support τ-tilting.
pub fn weak_support_tau_report(u: &Universe, m: &Subcat) -> Result<CheckReport> {
    let mut rep = CheckReport::default();
    let fm = fac(u, m)?;
    let mut bad = Vec::new();
    for &x in m.members() {
        for &y in fm.members() {
            if u.ext1(x, y) != 0 {
                bad.push(format!("Ext^1({}, {}) != 0", u.name(x), u.name(y)));
            }
        }
    }
    let mut e = CheckEntry::new("Ext^1(M, Fac M) = 0", "M", Verdict::from_bool(bad.is_empty()));
    if !bad.is_empty() {
        e = e.with_detail(bad.join("; "));
    }
    rep.push(e);
    let a = u.algebra();
    for v in 0..a.num_vertices() {
        let p = Module::projective(a, v);
        let approx = approximation(u, &p, m, Direction::Left)?;
        let coker = approx.map.cokernel();
        let ok = approx.verified && m.contains_module(u, &coker.module)?;
        rep.push(
            CheckEntry::new(
                "P -> M_0 -> M_1 -> 0 with left approximation",
                format!("P({})", a.quiver().vertices[v]),
                Verdict::from_bool(ok),
            )
            .with_detail(format!("cokernel dimension vector {}", coker.module.dim_string())),
        );
    }
    Ok(rep)
}

pub fn is_weak_support_tau_tilting(u: &Universe, m: &Subcat) -> Result<bool> {
    Ok(weak_support_tau_report(u, m)?.verdict() == Verdict::Pass)
}

pub fn support_tau_report(u: &Universe, m: &Subcat) -> Result<CheckReport> {
    let mut rep = weak_support_tau_report(u, m)?;
    let f = is_functorially_finite(u, m, Direction::Right)?;
    rep.push(CheckEntry::new(
        "contravariantly finite (within the universe)",
        "M",
        Verdict::from_bool(f.holds),
    ));
    Ok(rep)
}

pub fn is_support_tau_tilting(u: &Universe, m: &Subcat) -> Result<bool> {
    Ok(support_tau_report(u, m)?.verdict() == Verdict::Pass)
}

/// A candidate τ-cotorsion torsion triple `(L, D, F)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TauTriple {
    pub l: Subcat,
    pub d: Subcat,
    pub f: Subcat,
}

impl TauTriple {
    pub fn new(l: Subcat, d: Subcat, f: Subcat) -> Self {
        Self { l, d, f }
    }
}

pub fn tau_triple_report(u: &Universe, t: &TauTriple) -> Result<CheckReport> {
    let mut rep = CheckReport::default();
    let lp = perp(u, &t.d, PerpKind::One, PerpSide::Left).subcat;
    rep.push(CheckEntry::new("L = left Ext^1-orthogonal of D", "T", Verdict::from_bool(lp == t.l)));

    let ld = t.l.intersection(&t.d);
    let a = u.algebra();
    for v in 0..a.num_vertices() {
        let p = Module::projective(a, v);
        let approx = approximation(u, &p, &ld, Direction::Left)?;
        let mut ok = true;
        for &dm in t.d.members() {
            for g in hom_basis(&p, u.module(dm))? {
                ok &= extend_along(&g, &approx.map).is_some();
            }
        }
        let coker = approx.map.cokernel();
        ok &= t.l.contains_module(u, &coker.module)?;
        rep.push(CheckEntry::new(
            "P -> D' -> C -> 0 with D' in L∩D, C in L, left D-approximation",
            format!("P({})", a.quiver().vertices[v]),
            Verdict::from_bool(ok),
        ));
    }

    let f = is_functorially_finite(u, &ld, Direction::Right)?;
    rep.push(CheckEntry::new(
        "L∩D contravariantly finite (within the universe)",
        "T",
        Verdict::from_bool(f.holds),
    ));
    let tp = is_torsion_pair(u, &t.d, &t.f)?;
    let mut e = CheckEntry::new("(D, F) torsion pair", "T", Verdict::from_bool(tp.holds));
    if !tp.holds {
        e = e.with_detail(tp.failures.join("; "));
    }
    rep.push(e);
    Ok(rep)
}

pub fn is_tau_cotorsion_torsion_triple(u: &Universe, t: &TauTriple) -> Result<bool> {
    Ok(tau_triple_report(u, t)?.verdict() == Verdict::Pass)
}

/// `M -> (^{⊥1} Fac M, Fac M, M^{⊥0})`.
pub fn phi(u: &Universe, m: &Subcat) -> Result<TauTriple> {
    let d = fac(u, m)?;
    let l = perp(u, &d, PerpKind::One, PerpSide::Left).subcat;
    let f = perp(u, m, PerpKind::Zero, PerpSide::Right).subcat;
    Ok(TauTriple { l, d, f })
}

/// `(L, D, F) -> L ∩ D`.
pub fn psi(t: &TauTriple) -> Subcat {
    t.l.intersection(&t.d)
}

fn all_subsets(u: &Universe) -> Result<Vec<Subcat>> {
    let n = u.len();
    if n > MAX_ENUMERATION_UNIVERSE {
        return Err(Error::CapExceeded(format!(
            "{n} indecomposables exceed the subset search limit of {MAX_ENUMERATION_UNIVERSE}"
        )));
    }
    Ok((0u64..(1 << n))
        .map(|mask| Subcat::new((0..n).filter(|i| mask >> i & 1 == 1)))
        .collect())
}

fn filter_subsets(u: &Universe, pred: impl Fn(&Subcat) -> Result<bool> + Sync) -> Result<Vec<Subcat>> {
    // Warm the shared tables before fanning out.
    if !u.is_empty() {
        u.hom(0, 0);
        u.ext1(0, 0);
    }
    let subsets = all_subsets(u)?;
    let keep = subsets
        .par_iter()
        .map(|s| pred(s))
        .collect::<Result<Vec<bool>>>()?;
    let mut out: Vec<Subcat> = subsets
        .into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect();
    out.sort();
    Ok(out)
}

/// Every support τ-tilting subcategory of the universe, by exhaustive search.
pub fn enumerate_support_tau_tilting(u: &Universe) -> Result<Vec<Subcat>> {
    filter_subsets(u, |s| is_support_tau_tilting(u, s))
}

pub fn enumerate_weak_support_tau_tilting(u: &Universe) -> Result<Vec<Subcat>> {
    filter_subsets(u, |s| is_weak_support_tau_tilting(u, s))
}

/// Every Wakamatsu tilting subcategory of the universe, by exhaustive search.
/// Undecided subsets are reported as an error rather than silently dropped.
pub fn enumerate_wakamatsu_tilting(u: &Universe) -> Result<Vec<Subcat>> {
    if !u.is_empty() {
        u.ext_all(0, 0);
    }
    filter_subsets(u, |s| match is_wakamatsu_tilting(u, s)? {
        Verdict::Pass => Ok(true),
        Verdict::Fail | Verdict::Skipped => Ok(false),
        Verdict::Unknown => Err(Error::Internal(format!(
            "Wakamatsu verdict undecided for {:?}",
            s.names(u)
        ))),
    })
}

/// Largest universe for which all `8^n` candidate triples are searched.
pub const MAX_TRIPLE_UNIVERSE: usize = 6;

/// Every triple `(L, D, F)` of subsets passing the τ-cotorsion torsion triple check,
/// by exhaustive search over all triples of subsets.
pub fn enumerate_tau_triples(u: &Universe) -> Result<Vec<TauTriple>> {
    if u.len() > MAX_TRIPLE_UNIVERSE {
        return Err(Error::CapExceeded(format!(
            "{} indecomposables exceed the triple search limit of {MAX_TRIPLE_UNIVERSE}",
            u.len()
        )));
    }
    let subsets = all_subsets(u)?;
    if !u.is_empty() {
        u.hom(0, 0);
        u.ext1(0, 0);
    }
    let mut out = subsets
        .par_iter()
        .map(|d| -> Result<Vec<TauTriple>> {
            let mut found = Vec::new();
            for l in &subsets {
                for f in &subsets {
                    let t = TauTriple::new(l.clone(), d.clone(), f.clone());
                    if is_tau_cotorsion_torsion_triple(u, &t)? {
                        found.push(t);
                    }
                }
            }
            Ok(found)
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    out.sort();
    Ok(out)
}
