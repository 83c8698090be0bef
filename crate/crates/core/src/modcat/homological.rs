//! Projective covers, minimal resolutions, Ext, and all-degree Ext vanishing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactlin::Mat;
use crate::quivalg::Element;

use super::decomp::{decompose, indecomposable_iso};
use super::ops::{quotient, radical_spaces};
use super::{Module, ModuleMap};

/// `P -> M` with `P = ⊕ P_{tops[k]}`, summands in the order of `tops`.
#[derive(Debug, Clone)]
pub struct ProjectiveCover {
    pub module: Module,
    pub epi: ModuleMap,
    pub tops: Vec<usize>,
}

/// The map `P_v -> M` sending `e_v` to the vector `m in M_v`.
pub(crate) fn map_from_projective(pv: &Module, v: usize, m: &Module, vec: &Mat) -> ModuleMap {
    let a = m.algebra();
    let f = m.field();
    let maps = (0..a.num_vertices())
        .map(|w| {
            let block = a.block(v, w);
            let mut out = Mat::zeros(f, m.dims()[w], block.len());
            for (c, &b) in block.iter().enumerate() {
                let col = m.basis_action(b).dot(vec);
                for r in 0..m.dims()[w] {
                    out.set(r, c, col.get(r, 0));
                }
            }
            out
        })
        .collect();
    ModuleMap::new_unchecked(pv.clone(), m.clone(), maps)
}

/// Direct sum of indecomposable projectives in the given order.
pub(crate) fn projective_sum(m: &Module, tops: &[usize]) -> super::DirectSum {
    let a = m.algebra();
    let ps: Vec<Module> = tops.iter().map(|&v| Module::projective(a, v)).collect();
    let refs: Vec<&Module> = ps.iter().collect();
    Module::direct_sum(&refs, a)
}

/// The projective cover: one copy of `P_v` per basis vector of `top(M)_v`.
pub fn projective_cover(m: &Module) -> ProjectiveCover {
    let a = m.algebra();
    let rad = radical_spaces(m);
    let top = quotient(m, &rad);
    let mut tops = Vec::new();
    let mut gens = Vec::new();
    for v in 0..a.num_vertices() {
        let s = &top.sections[v];
        for c in 0..s.cols() {
            tops.push(v);
            gens.push(s.col(c));
        }
    }
    let sum = projective_sum(m, &tops);
    let comps: Vec<ModuleMap> = sum
        .projections
        .iter()
        .zip(tops.iter().zip(&gens))
        .map(|(p, (&v, g))| map_from_projective(p.target(), v, m, g))
        .collect();
    let epi = ModuleMap::from_sum(&sum, &comps, m);
    debug_assert!(epi.is_surjective());
    ProjectiveCover {
        module: sum.module,
        epi,
        tops,
    }
}

/// `Ω M = ker(P(M) -> M)` with its inclusion into the cover.
pub fn syzygy(m: &Module) -> (Module, ModuleMap) {
    let cover = projective_cover(m);
    let k = cover.epi.kernel();
    (k.module, k.inclusion)
}

/// A minimal projective resolution `... -> P_1 -> P_0 -> M`, truncated.
#[derive(Debug, Clone)]
pub struct Resolution {
    /// `tops[i]` lists the vertices of the indecomposable summands of `P_i`.
    pub tops: Vec<Vec<usize>>,
    pub terms: Vec<Module>,
    /// `differentials[i]: P_{i+1} -> P_i`.
    pub differentials: Vec<ModuleMap>,
    /// `syzygies[i] = Ω^i M` for the computed range (`syzygies[0] = M`).
    pub syzygies: Vec<Module>,
    pub augmentation: ModuleMap,
}

impl Resolution {
    /// True when the resolution is known to stop before `P_len`.
    pub fn finite_length(&self) -> Option<usize> {
        self.terms.iter().position(Module::is_zero)
    }
}

/// The first `len` terms `P_0, ..., P_{len-1}` of a minimal resolution.
pub fn resolution(m: &Module, len: usize) -> Resolution {
    let mut tops = Vec::new();
    let mut terms = Vec::new();
    let mut differentials = Vec::new();
    let mut syzygies = vec![m.clone()];
    let cover = projective_cover(m);
    let augmentation = cover.epi.clone();
    let mut prev_incl: Option<ModuleMap> = None;
    let mut current = cover;
    for i in 0..len {
        tops.push(current.tops.clone());
        terms.push(current.module.clone());
        if let Some(incl) = &prev_incl {
            differentials.push(incl.after(&current.epi).expect("compatible"));
        }
        if i + 1 == len {
            break;
        }
        let k = current.epi.kernel();
        syzygies.push(k.module.clone());
        prev_incl = Some(k.inclusion);
        current = projective_cover(&k.module);
    }
    Resolution {
        tops,
        terms,
        differentials,
        syzygies,
        augmentation,
    }
}

/// For `d: P' -> P` between projective sums, the element `x_{jk} in e_{u_j} A e_{v_k}`
/// with `d(g_k) = sum_j ι_j(x_{jk})`, `g_k` the k-th generator of `P'`.
fn generator_images(d: &ModuleMap, src_tops: &[usize], tgt_tops: &[usize]) -> Vec<Vec<Element>> {
    let a = d.source().algebra();
    let n = a.num_vertices();
    // Offsets of each summand inside each vertex space.
    let offsets = |tops: &[usize]| -> Vec<Vec<usize>> {
        let mut acc = vec![0; n];
        tops.iter()
            .map(|&u| {
                let here = acc.clone();
                for w in 0..n {
                    acc[w] += a.block_dim(u, w);
                }
                here
            })
            .collect()
    };
    let so = offsets(src_tops);
    let to = offsets(tgt_tops);
    src_tops
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let gen_pos = so[k][v] + a.block_position(a.idempotent(v));
            let img = d.vertex_map(v).col(gen_pos);
            tgt_tops
                .iter()
                .enumerate()
                .map(|(j, &u)| {
                    a.block(u, v)
                        .iter()
                        .enumerate()
                        .filter_map(|(pos, &b)| {
                            let c = img.get(to[j][v] + pos, 0);
                            (c != 0).then_some((b, c))
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Matrix of `d^*: Hom(P, N) -> Hom(P', N)` in the coordinates
/// `Hom(⊕ P_{u_j}, N) = ⊕ N_{u_j}`.
fn hom_pullback(d: &ModuleMap, src_tops: &[usize], tgt_tops: &[usize], n: &Module) -> Mat {
    let f = n.field();
    let x = generator_images(d, src_tops, tgt_tops);
    let rows: usize = src_tops.iter().map(|&v| n.dims()[v]).sum();
    let cols: usize = tgt_tops.iter().map(|&u| n.dims()[u]).sum();
    let mut out = Mat::zeros(f, rows, cols);
    let mut r0 = 0;
    for (k, &v) in src_tops.iter().enumerate() {
        let mut c0 = 0;
        for (j, &u) in tgt_tops.iter().enumerate() {
            if !x[k][j].is_empty() {
                out.set_block(r0, c0, &n.element_action(&x[k][j], u, v));
            }
            c0 += n.dims()[u];
        }
        r0 += n.dims()[v];
    }
    out
}

/// `dim Ext^i(M, N)` from the Hom complex of a minimal projective resolution.
pub fn ext_dim(m: &Module, n: &Module, i: usize) -> crate::Result<usize> {
    m.check_same_algebra(n)?;
    let res = resolution(m, i + 2);
    Ok(ext_dim_from(&res, n, i))
}

pub(crate) fn ext_dim_from(res: &Resolution, n: &Module, i: usize) -> usize {
    let h: usize = res.tops[i].iter().map(|&v| n.dims()[v]).sum();
    let out_rank = if res.terms.get(i + 1).is_some_and(|t| !t.is_zero()) {
        hom_pullback(&res.differentials[i], &res.tops[i + 1], &res.tops[i], n).rank()
    } else {
        0
    };
    let in_rank = if i == 0 {
        0
    } else {
        hom_pullback(&res.differentials[i - 1], &res.tops[i], &res.tops[i - 1], n).rank()
    };
    h - out_rank - in_rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "degree", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExtVerdict {
    VanishesAll,
    /// The smallest `i >= 1` with `Ext^i != 0`.
    Nonzero(usize),
    /// Vanishing verified only for degrees `1..=bound`.
    BoundedOnly(usize),
}

impl ExtVerdict {
    pub fn vanishes(self) -> Option<bool> {
        match self {
            ExtVerdict::VanishesAll => Some(true),
            ExtVerdict::Nonzero(_) => Some(false),
            ExtVerdict::BoundedOnly(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtCertificate {
    /// `ext_dims[i - 1] = dim Ext^i(M, N)` for the degrees examined.
    pub ext_dims: Vec<u128>,
    /// Orbit of the sets of indecomposable syzygy summands: `Ω^{pre}` repeats
    /// after `period` steps.
    pub pre_period: usize,
    pub period: usize,
    pub verdict: ExtVerdict,
}

/// Indecomposable classes reachable by taking syzygies, each with the
/// multiset of classes of its syzygy's summands.
#[derive(Debug, Clone)]
pub struct SyzygyGraph {
    classes: Vec<Module>,
    omega: Vec<Option<Vec<(usize, u128)>>>,
    max_classes: usize,
}

impl SyzygyGraph {
    /// `seeds` must be pairwise non-isomorphic indecomposables; they keep their indices.
    pub fn new(seeds: Vec<Module>, max_classes: usize) -> Self {
        let n = seeds.len();
        Self {
            classes: seeds,
            omega: vec![None; n],
            max_classes,
        }
    }

    pub fn classes(&self) -> &[Module] {
        &self.classes
    }

    pub fn omega(&self, c: usize) -> Option<&[(usize, u128)]> {
        self.omega[c].as_deref()
    }

    fn class_of(&mut self, x: &Module) -> Option<usize> {
        for (i, c) in self.classes.iter().enumerate() {
            if c.dims() == x.dims() && indecomposable_iso(x, c).ok().flatten().is_some() {
                return Some(i);
            }
        }
        if self.classes.len() >= self.max_classes {
            return None;
        }
        self.classes.push(x.clone());
        self.omega.push(None);
        Some(self.classes.len() - 1)
    }

    /// Classes (with multiplicity) of the summands of `M`; `None` past the class cap.
    pub fn classify(&mut self, m: &Module) -> Option<Vec<(usize, u128)>> {
        let mut acc: BTreeMap<usize, u128> = BTreeMap::new();
        for s in decompose(m) {
            *acc.entry(self.class_of(&s.module)?).or_insert(0) += 1;
        }
        Some(acc.into_iter().collect())
    }

    /// Computes `Ω` of class `c` if not yet known.
    pub fn expand(&mut self, c: usize) -> bool {
        if self.omega[c].is_some() {
            return true;
        }
        let (om, _) = syzygy(&self.classes[c]);
        match self.classify(&om) {
            Some(v) => {
                self.omega[c] = Some(v);
                true
            }
            None => false,
        }
    }

    /// Walks the orbit of summand sets starting from `level0` and decides
    /// `Ext^i(M, N) = 0` for all `i >= 1`, given `ext1(c) = dim Ext^1(X_c, N)`.
    pub fn certificate(
        &mut self,
        level0: Vec<(usize, u128)>,
        mut ext1: impl FnMut(&Module) -> usize,
        max_steps: usize,
    ) -> ExtCertificate {
        let mut ext1_cache: BTreeMap<usize, usize> = BTreeMap::new();
        let mut seen: Vec<Vec<usize>> = Vec::new();
        let mut ext_dims = Vec::new();
        let mut level = level0;
        let mut first_nonzero = None;
        for step in 0..=max_steps {
            let support: Vec<usize> = level.iter().map(|&(c, _)| c).collect();
            if let Some(pos) = seen.iter().position(|s| *s == support) {
                let verdict = match first_nonzero {
                    Some(i) => ExtVerdict::Nonzero(i),
                    None => ExtVerdict::VanishesAll,
                };
                return ExtCertificate {
                    ext_dims,
                    pre_period: pos,
                    period: step - pos,
                    verdict,
                };
            }
            if step == max_steps {
                break;
            }
            seen.push(support);
            let mut d: u128 = 0;
            for &(c, mult) in &level {
                let e = *ext1_cache
                    .entry(c)
                    .or_insert_with(|| ext1(&self.classes[c]));
                d = d.saturating_add(mult.saturating_mul(e as u128));
            }
            ext_dims.push(d);
            if d != 0 && first_nonzero.is_none() {
                first_nonzero = Some(step + 1);
            }
            let mut next: BTreeMap<usize, u128> = BTreeMap::new();
            for &(c, mult) in &level {
                if !self.expand(c) {
                    return self.bounded(ext_dims, first_nonzero, step + 1);
                }
                for &(c2, m2) in self.omega[c].as_ref().unwrap() {
                    let e = next.entry(c2).or_insert(0);
                    *e = e.saturating_add(mult.saturating_mul(m2));
                }
            }
            level = next.into_iter().collect();
        }
        self.bounded(ext_dims, first_nonzero, max_steps)
    }

    fn bounded(&self, ext_dims: Vec<u128>, first_nonzero: Option<usize>, bound: usize) -> ExtCertificate {
        ExtCertificate {
            ext_dims,
            pre_period: 0,
            period: 0,
            verdict: match first_nonzero {
                Some(i) => ExtVerdict::Nonzero(i),
                None => ExtVerdict::BoundedOnly(bound),
            },
        }
    }
}

/// Default number of orbit steps before giving up with `BOUNDED_ONLY`.
pub const DEFAULT_ORBIT_STEPS: usize = 64;
/// Default cap on distinct syzygy classes tracked.
pub const DEFAULT_MAX_CLASSES: usize = 512;

/// Decides `Ext^i(M, N) = 0` for every `i >= 1` by following the syzygy orbit of `M`.
pub fn ext_vanishes_all(m: &Module, n: &Module) -> crate::Result<ExtCertificate> {
    m.check_same_algebra(n)?;
    let mut g = SyzygyGraph::new(Vec::new(), DEFAULT_MAX_CLASSES);
    let Some(level0) = g.classify(m) else {
        return Ok(g.bounded(Vec::new(), None, 0));
    };
    Ok(g.certificate(
        level0,
        |x| ext_dim(x, n, 1).expect("same algebra"),
        DEFAULT_ORBIT_STEPS,
    ))
}
