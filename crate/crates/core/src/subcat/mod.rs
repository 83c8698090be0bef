//! Finite subcategories `add(S)` of an enumerated universe: Fac, orthogonals,
//! approximations and torsion pairs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactlin::Mat;
use crate::modcat::{
    extend_along, factor_through, hom_basis, submodule, ExtVerdict, Kernel, Module, ModuleMap, Universe,
};

/// `add` of a finite set of indecomposables, stored as sorted universe indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subcat {
    members: Vec<usize>,
}

impl Subcat {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = members.into_iter().collect();
        Self {
            members: set.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn all(u: &Universe) -> Self {
        Self::new(0..u.len())
    }

    /// The additive closure of the given modules.
    pub fn from_modules(u: &Universe, gens: &[Module]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for g in gens {
            set.extend(u.support(g)?);
        }
        Ok(Self::new(set))
    }

    pub fn from_names(u: &Universe, names: &[&str]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| u.index_of_name(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(idx))
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &Subcat) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    pub fn union(&self, other: &Subcat) -> Subcat {
        Subcat::new(self.members.iter().chain(&other.members).copied())
    }

    pub fn intersection(&self, other: &Subcat) -> Subcat {
        Subcat::new(self.members.iter().copied().filter(|&i| other.contains(i)))
    }

    pub fn names(&self, u: &Universe) -> Vec<String> {
        self.members.iter().map(|&i| u.name(i).to_string()).collect()
    }

    /// The direct sum of the members (the zero module when empty).
    pub fn generator(&self, u: &Universe) -> Module {
        let parts: Vec<&Module> = self.members.iter().map(|&i| u.module(i)).collect();
        Module::sum(&parts, u.algebra())
    }

    /// Whether every summand of `m` lies in the subcategory.
    pub fn contains_module(&self, u: &Universe, m: &Module) -> Result<bool> {
        Ok(u.support(m)?.into_iter().all(|i| self.contains(i)))
    }
}

/// Trace of `add(S)` in `X`: the sum of the images of all maps from members of `S`.
pub fn trace(u: &Universe, s: &Subcat, x: &Module) -> Result<Kernel> {
    let f = x.field();
    let mut cols: Vec<Vec<Mat>> = vec![Vec::new(); x.dims().len()];
    for &i in s.members() {
        for h in hom_basis(u.module(i), x)? {
            for (v, c) in cols.iter_mut().enumerate() {
                c.push(h.vertex_map(v).clone());
            }
        }
    }
    let spaces = cols
        .iter()
        .enumerate()
        .map(|(v, c)| {
            let refs: Vec<&Mat> = c.iter().collect();
            Mat::hstack(&refs, f, x.dims()[v]).column_space()
        })
        .collect();
    Ok(submodule(x, spaces))
}

/// `Fac(add S)` within the universe: the modules equal to their `S`-trace.
pub fn fac(u: &Universe, s: &Subcat) -> Result<Subcat> {
    let mut out = Vec::new();
    for (c, m) in u.modules().iter().enumerate() {
        if s.contains(c) || trace(u, s, m)?.module.dim() == m.dim() {
            out.push(c);
        }
    }
    Ok(Subcat::new(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerpKind {
    /// `Ext^i = 0` for every `i >= 1`.
    All,
    /// `Ext^1 = 0`.
    One,
    /// `Hom = 0`.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerpSide {
    /// `^⊥S`: modules `X` with `Ext(X, S) = 0`.
    Left,
    /// `S^⊥`: modules `X` with `Ext(S, X) = 0`.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perp {
    /// Members whose vanishing was decided.
    pub subcat: Subcat,
    /// Candidates whose all-degree vanishing is only bounded, not certified.
    /// They are left out of `subcat`.
    pub undecided: Vec<usize>,
}

impl Perp {
    pub fn is_decided(&self) -> bool {
        self.undecided.is_empty()
    }
}

/// Orthogonal class of `S` within the universe.
pub fn perp(u: &Universe, s: &Subcat, kind: PerpKind, side: PerpSide) -> Perp {
    let mut members = Vec::new();
    let mut undecided = Vec::new();
    for x in 0..u.len() {
        let mut ok = Some(true);
        for &t in s.members() {
            let (a, b) = match side {
                PerpSide::Left => (x, t),
                PerpSide::Right => (t, x),
            };
            let v = match kind {
                PerpKind::Zero => Some(u.hom(a, b) == 0),
                PerpKind::One => Some(u.ext1(a, b) == 0),
                PerpKind::All => match u.ext_all(a, b) {
                    ExtVerdict::VanishesAll => Some(true),
                    ExtVerdict::Nonzero(_) => Some(false),
                    ExtVerdict::BoundedOnly(_) => None,
                },
            };
            match v {
                Some(false) => {
                    ok = Some(false);
                    break;
                }
                None => ok = None,
                Some(true) => {}
            }
        }
        match ok {
            Some(true) => members.push(x),
            None => undecided.push(x),
            Some(false) => {}
        }
    }
    Perp {
        subcat: Subcat::new(members),
        undecided,
    }
}

/// `Ext^i(S, S) = 0` for all `i >= 1`; `None` when some pair is only bounded.
pub fn is_self_orthogonal(u: &Universe, s: &Subcat) -> Option<bool> {
    let mut decided = true;
    for &a in s.members() {
        for &b in s.members() {
            match u.ext_all(a, b) {
                ExtVerdict::Nonzero(_) => return Some(false),
                ExtVerdict::BoundedOnly(_) => decided = false,
                ExtVerdict::VanishesAll => {}
            }
        }
    }
    decided.then_some(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `X -> T` through which every map into `add S` factors.
    Left,
    /// `T -> X` through which every map from `add S` factors.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ApproxStatus {
    Exists,
    /// `S` is empty and the approximation is the zero map to or from 0.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct ApproxCertificate {
    pub direction: Direction,
    /// `X -> T` (left) or `T -> X` (right).
    pub map: ModuleMap,
    /// The `add S` object `T` as `(universe index, multiplicity)`.
    pub approximating: Vec<(usize, usize)>,
    pub status: ApproxStatus,
    /// Every map between `X` and a member of `S` factored through `map`.
    pub verified: bool,
}

/// The universal approximation of `x` by `add S`, assembled from Hom bases.
pub fn approximation(u: &Universe, x: &Module, s: &Subcat, dir: Direction) -> Result<ApproxCertificate> {
    let mut parts: Vec<Module> = Vec::new();
    let mut comps: Vec<ModuleMap> = Vec::new();
    let mut approximating = Vec::new();
    for &t in s.members() {
        let tm = u.module(t);
        let basis = match dir {
            Direction::Left => hom_basis(x, tm)?,
            Direction::Right => hom_basis(tm, x)?,
        };
        if !basis.is_empty() {
            approximating.push((t, basis.len()));
        }
        for h in basis {
            parts.push(tm.clone());
            comps.push(h);
        }
    }
    let refs: Vec<&Module> = parts.iter().collect();
    let sum = Module::direct_sum(&refs, u.algebra());
    let map = match dir {
        Direction::Left => ModuleMap::into_sum(x, &comps, &sum),
        Direction::Right => ModuleMap::from_sum(&sum, &comps, x),
    };
    let mut verified = true;
    for &t in s.members() {
        let tm = u.module(t);
        let ok = match dir {
            Direction::Left => hom_basis(x, tm)?
                .iter()
                .all(|g| extend_along(g, &map).is_some()),
            Direction::Right => hom_basis(tm, x)?
                .iter()
                .all(|g| factor_through(g, &map).is_some()),
        };
        verified &= ok;
    }
    Ok(ApproxCertificate {
        direction: dir,
        map,
        approximating,
        status: if s.is_empty() {
            ApproxStatus::Degenerate
        } else {
            ApproxStatus::Exists
        },
        verified,
    })
}

#[derive(Debug, Clone)]
pub struct Finiteness {
    pub holds: bool,
    pub degenerate: bool,
    /// One certificate per universe object, in universe order.
    pub certificates: Vec<ApproxCertificate>,
}

/// Covariant (left) or contravariant (right) finiteness of `add S`, scoped to the universe.
pub fn is_functorially_finite(u: &Universe, s: &Subcat, dir: Direction) -> Result<Finiteness> {
    let certificates = u
        .modules()
        .iter()
        .map(|x| approximation(u, x, s, dir))
        .collect::<Result<Vec<_>>>()?;
    Ok(Finiteness {
        holds: certificates.iter().all(|c| c.verified),
        degenerate: s.is_empty(),
        certificates,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSequence {
    pub object: String,
    /// Summands of the torsion part `tX`.
    pub torsion: Vec<String>,
    /// Summands of `X / tX`.
    pub free: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionPairCheck {
    pub holds: bool,
    pub hom_orthogonal: bool,
    pub traces: Vec<TraceSequence>,
    pub failures: Vec<String>,
}

/// `(D, F)` is a torsion pair: `Hom(D, F) = 0` and every `X` sits in
/// `0 -> tX -> X -> X/tX -> 0` with `tX in add D`, `X/tX in add F`.
pub fn is_torsion_pair(u: &Universe, d: &Subcat, f: &Subcat) -> Result<TorsionPairCheck> {
    let mut failures = Vec::new();
    for &a in d.members() {
        for &b in f.members() {
            if u.hom(a, b) != 0 {
                failures.push(format!("Hom({}, {}) != 0", u.name(a), u.name(b)));
            }
        }
    }
    let hom_orthogonal = failures.is_empty();
    let mut traces = Vec::new();
    for (i, x) in u.modules().iter().enumerate() {
        let t = trace(u, d, x)?;
        let q = t.inclusion.cokernel();
        let ts = u.support(&t.module)?;
        let fs = u.support(&q.module)?;
        if !ts.iter().all(|&k| d.contains(k)) {
            failures.push(format!("trace of {} is not in add D", u.name(i)));
        }
        if !fs.iter().all(|&k| f.contains(k)) {
            failures.push(format!("{} / trace is not in add F", u.name(i)));
        }
        traces.push(TraceSequence {
            object: u.name(i).to_string(),
            torsion: ts.iter().map(|&k| u.name(k).to_string()).collect(),
            free: fs.iter().map(|&k| u.name(k).to_string()).collect(),
        });
    }
    Ok(TorsionPairCheck {
        holds: failures.is_empty(),
        hom_orthogonal,
        traces,
        failures,
    })
}

#[cfg(test)]
mod tests;
