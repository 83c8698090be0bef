//! Enumeration of indecomposables up to a total-dimension bound.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Mat;
use crate::quivalg::Algebra;

use super::decomp::{decompose, indecomposable_iso, is_indecomposable};
use super::homological::{
    ext_dim, ExtCertificate, ExtVerdict, SyzygyGraph, DEFAULT_MAX_CLASSES, DEFAULT_ORBIT_STEPS,
};
use super::{dim_string, hom_dim, Module};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseOptions {
    pub dmax: usize,
    /// Maximum number of representations tried for a single dimension vector.
    pub per_dim_vector_cap: u128,
}

impl UniverseOptions {
    pub fn new(dmax: usize) -> Self {
        Self {
            dmax,
            per_dim_vector_cap: 1 << 22,
        }
    }
}

/// Dimension vectors with `1 <= total <= dmax`, ordered by total then lex.
fn dimension_vectors(n: usize, dmax: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for d in 0..=left {
            cur.push(d);
            rec(n, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, dmax, &mut Vec::new(), &mut out);
    out.retain(|d| d.iter().sum::<usize>() >= 1);
    out.sort_by(|a, b| (a.iter().sum::<usize>(), a).cmp(&(b.iter().sum::<usize>(), b)));
    out
}

/// Pairwise non-isomorphic indecomposables of one dimension vector, in first-found order.
fn classes_of_dim(a: &Arc<Algebra>, dims: &[usize], cap: u128) -> Result<Vec<Module>> {
    let f = a.field();
    let p = u128::from(f.p());
    let shapes: Vec<(usize, usize)> = a
        .quiver()
        .arrows
        .iter()
        .map(|ar| (dims[ar.target], dims[ar.source]))
        .collect();
    let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let total = p.checked_pow(entries as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::CapExceeded(format!(
            "dimension vector {} needs {total} representations (cap {cap})",
            dim_string(dims)
        )));
    }
    let mut found: Vec<Module> = Vec::new();
    let mut digits = vec![0u32; entries];
    for _ in 0..total {
        let mut maps = Vec::with_capacity(shapes.len());
        let mut off = 0;
        for &(r, c) in &shapes {
            let data = digits[off..off + r * c].to_vec();
            maps.push(Mat::from_vec(f, r, c, data).expect("shape"));
            off += r * c;
        }
        if let Ok(m) = Module::new(a.clone(), dims.to_vec(), maps) {
            let mut known = false;
            for c in &found {
                if indecomposable_iso(&m, c)?.is_some() {
                    known = true;
                    break;
                }
            }
            if !known && is_indecomposable(&m) {
                found.push(m);
            }
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < f.p() {
                break;
            }
            *d = 0;
        }
    }
    Ok(found)
}

/// A finite set of indecomposable iso-classes standing in for the module category.
pub struct Universe {
    algebra: Arc<Algebra>,
    dmax: usize,
    modules: Vec<Module>,
    names: Vec<String>,
    hom: OnceLock<Vec<Vec<usize>>>,
    ext1: OnceLock<Vec<Vec<usize>>>,
    syzygies: Mutex<SyzygyGraph>,
    ext_all: OnceLock<Vec<Vec<ExtVerdict>>>,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Universe")
            .field("algebra", &self.algebra.label())
            .field("dmax", &self.dmax)
            .field("names", &self.names)
            .finish()
    }
}

/// Enumerates every indecomposable of total dimension `<= dmax` up to isomorphism.
pub fn enumerate_indecomposables(a: &Arc<Algebra>, options: UniverseOptions) -> Result<Universe> {
    if options.dmax == 0 {
        return Err(Error::CapExceeded("dmax must be at least 1".into()));
    }
    let dvs = dimension_vectors(a.num_vertices(), options.dmax);
    let groups: Vec<Result<Vec<Module>>> = dvs
        .par_iter()
        .map(|d| classes_of_dim(a, d, options.per_dim_vector_cap))
        .collect();
    let mut modules = Vec::new();
    let mut names = Vec::new();
    for (d, g) in dvs.iter().zip(groups) {
        for (k, m) in g?.into_iter().enumerate() {
            names.push(format!("D{}#{}", dim_string(d), k + 1));
            modules.push(m);
        }
    }
    Ok(Universe::from_parts(a.clone(), options.dmax, modules, names))
}

impl Universe {
    pub(crate) fn from_parts(algebra: Arc<Algebra>, dmax: usize, modules: Vec<Module>, names: Vec<String>) -> Self {
        let graph = SyzygyGraph::new(modules.clone(), modules.len() + DEFAULT_MAX_CLASSES);
        Self {
            algebra,
            dmax,
            modules,
            names,
            hom: OnceLock::new(),
            ext1: OnceLock::new(),
            syzygies: Mutex::new(graph),
            ext_all: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dmax(&self) -> usize {
        self.dmax
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn module(&self, i: usize) -> &Module {
        &self.modules[i]
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of_name(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Universe index of an indecomposable module.
    pub fn index_of(&self, x: &Module) -> Result<usize> {
        if !super::same_algebra(x.algebra(), &self.algebra) {
            return Err(Error::AlgebraMismatch(format!(
                "{} vs universe over {}",
                x.algebra().label(),
                self.algebra.label()
            )));
        }
        if x.dim() > self.dmax {
            return Err(Error::OutsideUniverse(format!(
                "summand of dimension vector {} exceeds dmax = {}",
                x.dim_string(),
                self.dmax
            )));
        }
        for (i, m) in self.modules.iter().enumerate() {
            if m.dims() == x.dims() && indecomposable_iso(x, m)?.is_some() {
                return Ok(i);
            }
        }
        Err(Error::Internal(format!(
            "indecomposable with dimension vector {} missing from the universe",
            x.dim_string()
        )))
    }

    /// Decomposes `M` and returns `(universe index, multiplicity)` sorted by index.
    pub fn identify(&self, m: &Module) -> Result<Vec<(usize, usize)>> {
        let mut acc: BTreeMap<usize, usize> = BTreeMap::new();
        for s in decompose(m) {
            *acc.entry(self.index_of(&s.module)?).or_insert(0) += 1;
        }
        Ok(acc.into_iter().collect())
    }

    /// Universe indices of the summands of `M` (without multiplicity).
    pub fn support(&self, m: &Module) -> Result<Vec<usize>> {
        Ok(self.identify(m)?.into_iter().map(|(i, _)| i).collect())
    }

    pub fn projectives(&self) -> Result<Vec<usize>> {
        (0..self.algebra.num_vertices())
            .map(|v| self.index_of(&Module::projective(&self.algebra, v)))
            .collect()
    }

    pub fn injectives(&self) -> Result<Vec<usize>> {
        (0..self.algebra.num_vertices())
            .map(|v| self.index_of(&Module::injective(&self.algebra, v)))
            .collect()
    }

    pub fn simples(&self) -> Result<Vec<usize>> {
        (0..self.algebra.num_vertices())
            .map(|v| self.index_of(&Module::simple(&self.algebra, v)))
            .collect()
    }

    fn table(&self, f: impl Fn(&Module, &Module) -> usize + Sync) -> Vec<Vec<usize>> {
        self.modules
            .par_iter()
            .map(|m| self.modules.iter().map(|n| f(m, n)).collect())
            .collect()
    }

    /// `dim Hom(U_i, U_j)`.
    pub fn hom(&self, i: usize, j: usize) -> usize {
        self.hom.get_or_init(|| self.table(|m, n| hom_dim(m, n).expect("same algebra")))[i][j]
    }

    /// `dim Ext^1(U_i, U_j)`.
    pub fn ext1(&self, i: usize, j: usize) -> usize {
        self.ext1.get_or_init(|| self.table(|m, n| ext_dim(m, n, 1).expect("same algebra")))[i][j]
    }

    /// Certificate for `Ext^{>=1}(M, U_j) = 0`, `M` arbitrary over the same algebra.
    pub fn ext_certificate(&self, m: &Module, j: usize) -> ExtCertificate {
        let n = &self.modules[j];
        let mut g = self.syzygies.lock().expect("poisoned");
        match g.classify(m) {
            Some(level0) => g.certificate(
                level0,
                |x| ext_dim(x, n, 1).expect("same algebra"),
                DEFAULT_ORBIT_STEPS,
            ),
            None => ExtCertificate {
                ext_dims: Vec::new(),
                pre_period: 0,
                period: 0,
                verdict: ExtVerdict::BoundedOnly(0),
            },
        }
    }

    /// `Ext^i(U_i, U_j) = 0` for all `i >= 1`, decided along syzygy orbits.
    pub fn ext_all(&self, i: usize, j: usize) -> ExtVerdict {
        self.ext_all.get_or_init(|| {
            (0..self.len())
                .map(|a| {
                    (0..self.len())
                        .map(|b| {
                            let level0 = vec![(a, 1u128)];
                            let n = &self.modules[b];
                            let mut g = self.syzygies.lock().expect("poisoned");
                            g.certificate(
                                level0,
                                |x| ext_dim(x, n, 1).expect("same algebra"),
                                DEFAULT_ORBIT_STEPS,
                            )
                            .verdict
                        })
                        .collect()
                })
                .collect()
        })[i][j]
    }

    pub fn describe(&self) -> UniverseDescription {
        UniverseDescription {
            algebra: self.algebra.label().to_string(),
            p: self.algebra.field().p(),
            dmax: self.dmax,
            size: self.len(),
            names: self.names.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseDescription {
    pub algebra: String,
    pub p: u32,
    pub dmax: usize,
    pub size: usize,
    pub names: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::quivalg::fixtures;

    fn universe(spec: crate::AlgebraSpec, dmax: usize) -> Universe {
        enumerate_indecomposables(&alg(spec), UniverseOptions::new(dmax)).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let u = universe(fixtures::a2(2), 2);
        assert_eq!(u.names(), &["D01#1", "D10#1", "D11#1"]);
        assert_eq!(universe(fixtures::loop2(2), 2).len(), 2);
        assert_eq!(universe(fixtures::loop2(2), 3).len(), 2);
        assert_eq!(universe(fixtures::a3(2), 3).len(), 6);
        assert_eq!(universe(fixtures::prod(2), 3).len(), 4);
        assert_eq!(universe(fixtures::a3(3), 3).len(), 6);
    }

    #[test]
    fn identification() {
        let u = universe(fixtures::a2(2), 3);
        let a = u.algebra().clone();
        let m = Module::sum(&[&Module::projective(&a, 0), &Module::simple(&a, 1), &Module::simple(&a, 1)], &a);
        let ids = u.identify(&m).unwrap();
        assert_eq!(ids, vec![(0, 2), (2, 1)]);
        assert_eq!(u.projectives().unwrap(), vec![2, 0]);
        assert_eq!(u.injectives().unwrap(), vec![1, 2]);
        let u2 = universe(fixtures::a2(2), 1);
        assert!(matches!(u2.index_of(&Module::projective(&a, 0)), Err(Error::OutsideUniverse(_))));
        assert!(matches!(u.index_of_name("D99#1"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn ext_tables() {
        let u = universe(fixtures::loop2(2), 2);
        let s = 0;
        assert_eq!(u.name(s), "D1#1");
        assert_eq!(u.ext_all(s, s), ExtVerdict::Nonzero(1));
        assert_eq!(u.ext_all(1, 0), ExtVerdict::VanishesAll);
        let u = universe(fixtures::a2(2), 2);
        // S1 = D10#1, S2 = D01#1
        assert_eq!(u.ext1(1, 0), 1);
        assert_eq!(u.ext_all(0, 1), ExtVerdict::VanishesAll);
        assert_eq!(u.hom(2, 1), 1);
    }

    #[test]
    fn cap_is_reported() {
        let a = alg(fixtures::a3(2));
        let opts = UniverseOptions {
            dmax: 3,
            per_dim_vector_cap: 2,
        };
        assert!(matches!(enumerate_indecomposables(&a, opts), Err(Error::CapExceeded(_))));
    }
}
