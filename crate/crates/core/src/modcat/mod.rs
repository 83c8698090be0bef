//! Finite-dimensional right modules as quiver representations, and the
//! homological toolkit built on them.

mod decomp;
mod homological;
mod ops;
mod universe;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat};
use crate::quivalg::{Algebra, Element, Path};

pub use decomp::{decompose, is_indecomposable, is_isomorphic, Summand};
pub use homological::{
    ext_dim, ext_vanishes_all, projective_cover, resolution, syzygy, ExtCertificate, ExtVerdict,
    ProjectiveCover, Resolution, SyzygyGraph,
};
pub use ops::{Cokernel, Kernel};
pub(crate) use homological::ext_dim_from;
pub use ops::{extend_along, factor_through, socle, top};
pub(crate) use ops::{generated_spaces, quotient, radical, submodule};
pub use universe::{enumerate_indecomposables, Universe, UniverseDescription, UniverseOptions};

/// A representation of the bound quiver: a space per vertex and a matrix per
/// arrow `a: u -> v` of shape `dims[v] x dims[u]`.
#[derive(Clone)]
pub struct Module {
    algebra: Arc<Algebra>,
    dims: Vec<usize>,
    maps: Vec<Mat>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.dims)?;
        if !self.maps.is_empty() {
            f.debug_list().entries(self.maps.iter()).finish()?;
        }
        Ok(())
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.dims == other.dims && self.maps == other.maps
    }
}

impl Eq for Module {}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Module {
    /// Builds and validates a representation.
    pub fn new(algebra: Arc<Algebra>, dims: Vec<usize>, maps: Vec<Mat>) -> Result<Self> {
        let m = Self {
            algebra,
            dims,
            maps,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, dims: Vec<usize>, maps: Vec<Mat>) -> Self {
        let m = Self {
            algebra,
            dims,
            maps,
        };
        debug_assert!(m.validate().is_ok(), "invalid module {m:?}");
        m
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        if self.dims.len() != a.num_vertices() {
            return Err(Error::InvalidModule(format!(
                "{} dimensions for {} vertices",
                self.dims.len(),
                a.num_vertices()
            )));
        }
        if self.maps.len() != a.num_arrows() {
            return Err(Error::InvalidModule(format!(
                "{} arrow maps for {} arrows",
                self.maps.len(),
                a.num_arrows()
            )));
        }
        for (arrow, m) in a.quiver().arrows.iter().zip(&self.maps) {
            if m.shape() != (self.dims[arrow.target], self.dims[arrow.source]) {
                return Err(Error::InvalidModule(format!(
                    "arrow {} has a {}x{} matrix, expected {}x{}",
                    arrow.name,
                    m.rows(),
                    m.cols(),
                    self.dims[arrow.target],
                    self.dims[arrow.source]
                )));
            }
            if m.field() != a.field() {
                return Err(Error::InvalidModule("matrix over the wrong field".into()));
            }
        }
        for r in a.relations() {
            let mut acc = Mat::zeros(a.field(), self.dims[r.target], self.dims[r.source]);
            for (c, p) in &r.terms {
                acc.add_scaled(&self.path_action(p), *c);
            }
            if !acc.is_zero() {
                return Err(Error::InvalidModule(format!(
                    "relation {} does not vanish",
                    r.terms
                        .iter()
                        .map(|(c, p)| format!("{c}*{}", p.render(a.quiver())))
                        .collect::<Vec<_>>()
                        .join(" + ")
                )));
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        let n = algebra.num_vertices();
        let f = algebra.field();
        let maps = algebra
            .quiver()
            .arrows
            .iter()
            .map(|_| Mat::zeros(f, 0, 0))
            .collect();
        Self {
            algebra,
            dims: vec![0; n],
            maps,
        }
    }

    /// The simple module at vertex `v`.
    pub fn simple(algebra: &Arc<Algebra>, v: usize) -> Self {
        let n = algebra.num_vertices();
        let f = algebra.field();
        let dims: Vec<usize> = (0..n).map(|w| usize::from(w == v)).collect();
        let maps = algebra
            .quiver()
            .arrows
            .iter()
            .map(|a| Mat::zeros(f, dims[a.target], dims[a.source]))
            .collect();
        Self::new_unchecked(algebra.clone(), dims, maps)
    }

    /// The indecomposable projective `P_v = e_v A`.
    pub fn projective(algebra: &Arc<Algebra>, v: usize) -> Self {
        let n = algebra.num_vertices();
        let dims: Vec<usize> = (0..n).map(|w| algebra.block_dim(v, w)).collect();
        let maps = (0..algebra.num_arrows())
            .map(|a| algebra.right_mult_matrix(v, a))
            .collect();
        Self::new_unchecked(algebra.clone(), dims, maps)
    }

    /// The indecomposable injective `I_v = D(A e_v)`.
    pub fn injective(algebra: &Arc<Algebra>, v: usize) -> Self {
        let n = algebra.num_vertices();
        let dims: Vec<usize> = (0..n).map(|w| algebra.block_dim(w, v)).collect();
        let maps = algebra
            .quiver()
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let x: Element = algebra.reduce(&Path {
                    source: a.source,
                    target: a.target,
                    arrows: vec![ai],
                });
                algebra.left_mult_matrix(&x, a.source, a.target, v).transpose()
            })
            .collect();
        Self::new_unchecked(algebra.clone(), dims, maps)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn arrow_map(&self, a: usize) -> &Mat {
        &self.maps[a]
    }

    pub fn arrow_maps(&self) -> &[Mat] {
        &self.maps
    }

    /// Action of a path: `M_{s(p)} -> M_{t(p)}`.
    pub fn path_action(&self, p: &Path) -> Mat {
        let mut acc = Mat::identity(self.field(), self.dims[p.source]);
        for &a in &p.arrows {
            acc = self.maps[a].dot(&acc);
        }
        acc
    }

    /// Action of an element of `e_u A e_v` as a map `M_u -> M_v`.
    pub fn element_action(&self, x: &Element, u: usize, v: usize) -> Mat {
        let mut acc = Mat::zeros(self.field(), self.dims[v], self.dims[u]);
        for &(b, c) in x {
            let p = &self.algebra.basis()[b];
            debug_assert_eq!((p.source, p.target), (u, v));
            acc.add_scaled(&self.path_action(p), c);
        }
        acc
    }

    /// Action of basis element `b` of the algebra.
    pub fn basis_action(&self, b: usize) -> Mat {
        self.path_action(&self.algebra.basis()[b])
    }

    pub(crate) fn check_same_algebra(&self, other: &Module) -> Result<()> {
        if same_algebra(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!(
                "{} vs {}",
                self.algebra.label(),
                other.algebra.label()
            )))
        }
    }

    /// Direct sum with the canonical injections and projections.
    pub fn direct_sum(parts: &[&Module], algebra: &Arc<Algebra>) -> DirectSum {
        let f = algebra.field();
        let n = algebra.num_vertices();
        let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|m| m.dims[v]).sum()).collect();
        let maps = (0..algebra.num_arrows())
            .map(|a| {
                let blocks: Vec<&Mat> = parts.iter().map(|m| &m.maps[a]).collect();
                Mat::block_diag(&blocks, f)
            })
            .collect();
        let sum = Module::new_unchecked(algebra.clone(), dims.clone(), maps);
        let mut offsets = vec![0; n];
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        for m in parts {
            let mut inj = Vec::new();
            let mut proj = Vec::new();
            for v in 0..n {
                let mut i = Mat::zeros(f, dims[v], m.dims[v]);
                let mut p = Mat::zeros(f, m.dims[v], dims[v]);
                for k in 0..m.dims[v] {
                    i.set(offsets[v] + k, k, 1);
                    p.set(k, offsets[v] + k, 1);
                }
                offsets[v] += m.dims[v];
                inj.push(i);
                proj.push(p);
            }
            injections.push(ModuleMap::new_unchecked((*m).clone(), sum.clone(), inj));
            projections.push(ModuleMap::new_unchecked(sum.clone(), (*m).clone(), proj));
        }
        DirectSum {
            module: sum,
            injections,
            projections,
        }
    }

    /// `M^r`.
    pub fn power(&self, r: usize) -> Module {
        let parts: Vec<&Module> = (0..r).map(|_| self).collect();
        Module::direct_sum(&parts, &self.algebra).module
    }

    pub fn sum(parts: &[&Module], algebra: &Arc<Algebra>) -> Module {
        Module::direct_sum(parts, algebra).module
    }

    /// Fingerprint usable as a map key (equal modules, equal keys).
    pub fn key(&self) -> (Vec<usize>, Vec<Vec<u32>>) {
        (
            self.dims.clone(),
            self.maps.iter().map(|m| m.data().to_vec()).collect(),
        )
    }

    /// Dimension vector rendered as in canonical names.
    pub fn dim_string(&self) -> String {
        dim_string(&self.dims)
    }

    pub fn identity(&self) -> ModuleMap {
        let maps = self
            .dims
            .iter()
            .map(|&d| Mat::identity(self.field(), d))
            .collect();
        ModuleMap::new_unchecked(self.clone(), self.clone(), maps)
    }

    pub fn is_projective(&self) -> bool {
        projective_cover(self).module.dim() == self.dim()
    }

    /// Radical layer count: smallest `l` with `M rad^l A = 0`.
    pub fn loewy_length(&self) -> usize {
        let mut cur = self.clone();
        let mut l = 0;
        while !cur.is_zero() {
            cur = ops::radical(&cur).0;
            l += 1;
        }
        l
    }
}

pub fn dim_string(dims: &[usize]) -> String {
    if dims.iter().all(|&d| d <= 9) {
        dims.iter().map(|d| d.to_string()).collect()
    } else {
        dims.iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Debug, Clone)]
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

/// A module homomorphism given by one matrix per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: Module,
    target: Module,
    maps: Vec<Mat>,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap{:?}->{:?}", self.source.dims, self.target.dims)?;
        f.debug_list().entries(self.maps.iter()).finish()
    }
}

impl ModuleMap {
    pub fn new(source: Module, target: Module, maps: Vec<Mat>) -> Result<Self> {
        source.check_same_algebra(&target)?;
        let m = Self {
            source,
            target,
            maps,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Module, target: Module, maps: Vec<Mat>) -> Self {
        let m = Self {
            source,
            target,
            maps,
        };
        debug_assert!(m.validate().is_ok(), "invalid map {m:?}");
        m
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.source.dims.len();
        if self.maps.len() != n {
            return Err(Error::InvalidMap(format!("{} vertex maps for {n} vertices", self.maps.len())));
        }
        for v in 0..n {
            if self.maps[v].shape() != (self.target.dims[v], self.source.dims[v]) {
                return Err(Error::InvalidMap(format!("vertex {v} has the wrong shape")));
            }
        }
        for (ai, a) in self.source.algebra.quiver().arrows.iter().enumerate() {
            let lhs = self.target.maps[ai].dot(&self.maps[a.source]);
            let rhs = self.maps[a.target].dot(&self.source.maps[ai]);
            if lhs != rhs {
                return Err(Error::InvalidMap(format!("square for arrow {} does not commute", a.name)));
            }
        }
        Ok(())
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        let f = source.field();
        let maps = (0..source.dims.len())
            .map(|v| Mat::zeros(f, target.dims[v], source.dims[v]))
            .collect();
        Self::new_unchecked(source.clone(), target.clone(), maps)
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn vertex_map(&self, v: usize) -> &Mat {
        &self.maps[v]
    }

    pub fn vertex_maps(&self) -> &[Mat] {
        &self.maps
    }

    /// `self ∘ g` (apply `g` first).
    pub fn after(&self, g: &ModuleMap) -> Result<ModuleMap> {
        if g.target.dims != self.source.dims {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&g.maps)
            .map(|(a, b)| a.dot(b))
            .collect();
        Ok(ModuleMap::new_unchecked(g.source.clone(), self.target.clone(), maps))
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), maps))
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        let maps = self.maps.iter().map(|m| m.scale(c)).collect();
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Mat::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(Mat::rank).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dims == self.target.dims && self.is_injective()
    }

    /// Vertex-wise inverse of an isomorphism.
    pub fn inverse(&self) -> Option<ModuleMap> {
        let maps = self
            .maps
            .iter()
            .map(|m| m.invert().ok().flatten())
            .collect::<Option<Vec<_>>>()?;
        Some(ModuleMap::new_unchecked(self.target.clone(), self.source.clone(), maps))
    }

    /// Flattened coordinates (vertex by vertex, row-major).
    pub fn coordinates(&self) -> Vec<u32> {
        self.maps.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    /// `sum_k coeffs[k] * maps[k]`, all maps sharing source and target.
    pub fn combination(source: &Module, target: &Module, maps: &[ModuleMap], coeffs: &[u32]) -> ModuleMap {
        let mut acc = ModuleMap::zero(source, target);
        for (m, &c) in maps.iter().zip(coeffs) {
            if c != 0 {
                for (a, b) in acc.maps.iter_mut().zip(&m.maps) {
                    a.add_scaled(b, c);
                }
            }
        }
        acc
    }

    /// Maps out of a direct sum, given componentwise.
    pub fn from_sum(sum: &DirectSum, components: &[ModuleMap], target: &Module) -> ModuleMap {
        let mut acc = ModuleMap::zero(&sum.module, target);
        for (p, c) in sum.projections.iter().zip(components) {
            let t = c.after(p).expect("compatible");
            for (a, b) in acc.maps.iter_mut().zip(&t.maps) {
                a.add_scaled(b, 1);
            }
        }
        acc
    }

    /// Maps into a direct sum, given componentwise.
    pub fn into_sum(source: &Module, components: &[ModuleMap], sum: &DirectSum) -> ModuleMap {
        let mut acc = ModuleMap::zero(source, &sum.module);
        for (i, c) in sum.injections.iter().zip(components) {
            let t = i.after(c).expect("compatible");
            for (a, b) in acc.maps.iter_mut().zip(&t.maps) {
                a.add_scaled(b, 1);
            }
        }
        acc
    }
}

/// The linear system whose solutions are the homomorphisms `M -> N`.
fn hom_system(m: &Module, n: &Module) -> (Mat, Vec<usize>) {
    let f = m.field();
    let nv = m.dims.len();
    let mut offsets = Vec::with_capacity(nv + 1);
    let mut total = 0;
    for v in 0..nv {
        offsets.push(total);
        total += n.dims[v] * m.dims[v];
    }
    offsets.push(total);
    let arrows = &m.algebra.quiver().arrows;
    let eqs: usize = arrows.iter().map(|a| n.dims[a.target] * m.dims[a.source]).sum();
    let mut sys = Mat::zeros(f, eqs, total);
    let mut row = 0;
    for (ai, a) in arrows.iter().enumerate() {
        let (u, v) = (a.source, a.target);
        let (na, ma) = (&n.maps[ai], &m.maps[ai]);
        let (du_m, dv_n, dv_m) = (m.dims[u], n.dims[v], m.dims[v]);
        for r in 0..dv_n {
            for c in 0..du_m {
                // (N_a f_u)[r, c] - (f_v M_a)[r, c]
                for k in 0..n.dims[u] {
                    let coef = na.get(r, k);
                    if coef != 0 {
                        let var = offsets[u] + k * du_m + c;
                        let cur = sys.get(row, var);
                        sys.set(row, var, f.add(cur, coef));
                    }
                }
                for k in 0..dv_m {
                    let coef = ma.get(k, c);
                    if coef != 0 {
                        let var = offsets[v] + r * dv_m + k;
                        let cur = sys.get(row, var);
                        sys.set(row, var, f.sub(cur, coef));
                    }
                }
                row += 1;
            }
        }
    }
    (sys, offsets)
}

fn map_from_vector(m: &Module, n: &Module, offsets: &[usize], x: &Mat) -> ModuleMap {
    let f = m.field();
    let maps = (0..m.dims.len())
        .map(|v| {
            let (r, c) = (n.dims[v], m.dims[v]);
            let data = (0..r * c).map(|i| x.get(offsets[v] + i, 0)).collect();
            Mat::from_vec(f, r, c, data).expect("shape")
        })
        .collect();
    ModuleMap::new_unchecked(m.clone(), n.clone(), maps)
}

/// A basis of `Hom(M, N)`.
pub fn hom_basis(m: &Module, n: &Module) -> Result<Vec<ModuleMap>> {
    m.check_same_algebra(n)?;
    let (sys, offsets) = hom_system(m, n);
    Ok(sys
        .kernel()
        .iter()
        .map(|x| map_from_vector(m, n, &offsets, x))
        .collect())
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    m.check_same_algebra(n)?;
    let (sys, _) = hom_system(m, n);
    Ok(sys.cols() - sys.rank())
}

pub fn end_basis(m: &Module) -> Vec<ModuleMap> {
    hom_basis(m, m).expect("same algebra")
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::quivalg::{fixtures, AlgebraSpec};

    pub fn alg(spec: AlgebraSpec) -> Arc<Algebra> {
        Arc::new(Algebra::build(&spec).unwrap())
    }

    pub fn a2() -> Arc<Algebra> {
        alg(fixtures::a2(2))
    }

    /// The A2 representation `k -> k` with arrow map `c`.
    pub fn a2_rep(a: &Arc<Algebra>, c: i64) -> Module {
        let f = a.field();
        Module::new(a.clone(), vec![1, 1], vec![Mat::from_rows(f, &[&[c]])]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use crate::quivalg::fixtures;

    #[test]
    fn a2_standard_modules() {
        let a = a2();
        assert_eq!(Module::projective(&a, 0).dims(), &[1, 1]);
        assert_eq!(Module::projective(&a, 1), Module::simple(&a, 1));
        assert_eq!(Module::injective(&a, 0), Module::simple(&a, 0));
        assert_eq!(Module::injective(&a, 1).dims(), &[1, 1]);
        assert!(!Module::injective(&a, 1).arrow_map(0).is_zero());
    }

    #[test]
    fn loop2_is_self_injective() {
        let a = alg(fixtures::loop2(2));
        let p = Module::projective(&a, 0);
        let i = Module::injective(&a, 0);
        assert_eq!(p.dims(), &[2]);
        assert!(is_isomorphic(&p, &i).unwrap().is_some());
        assert_eq!(Module::simple(&a, 0).dim(), 1);
    }

    #[test]
    fn hom_examples() {
        let a = a2();
        let (p1, s1, s2) = (Module::projective(&a, 0), Module::simple(&a, 0), Module::simple(&a, 1));
        assert_eq!(hom_dim(&p1, &s1).unwrap(), 1);
        assert_eq!(hom_dim(&s1, &s2).unwrap(), 0);
        for m in [&p1, &s1, &s2] {
            assert_eq!(hom_dim(m, m).unwrap(), 1);
        }
        for f in hom_basis(&p1, &s1).unwrap() {
            f.validate().unwrap();
        }
    }

    #[test]
    fn rejects_bad_representations() {
        let a = alg(fixtures::loop2(2));
        let f = a.field();
        let bad = Module::new(a.clone(), vec![1], vec![Mat::from_rows(f, &[&[1]])]);
        assert!(matches!(bad, Err(Error::InvalidModule(_))));
        let b = a2();
        let s = Module::simple(&b, 0);
        let t = Module::simple(&a, 0);
        assert!(matches!(hom_basis(&s, &t), Err(Error::AlgebraMismatch(_))));
        let p1 = Module::projective(&b, 0);
        let s2 = Module::simple(&b, 1);
        // The map S2 -> P1 that is zero at vertex 2 but forced elsewhere: not a hom.
        let bad = ModuleMap::new(p1.clone(), s2.clone(), vec![Mat::zeros(b.field(), 0, 1), Mat::identity(b.field(), 1)]);
        assert!(bad.is_err());
    }

    #[test]
    fn hom_from_projective_is_vertex_space() {
        let a = alg(fixtures::a3(3));
        let m = Module::injective(&a, 2);
        for v in 0..3 {
            assert_eq!(hom_dim(&Module::projective(&a, v), &m).unwrap(), m.dims()[v]);
        }
    }
}
