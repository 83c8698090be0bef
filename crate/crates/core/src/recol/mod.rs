//! The recollement `(Mod-A/AeA, Mod-A, Mod-eAe)` induced by a vertex idempotent.
//!
//! Naming follows the diagram: the middle algebra is `B` (the input algebra),
//! the left algebra is `A/AeA` (here `left`), the right algebra is `eAe`
//! (here `right`).

mod checks;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Mat, QuotientSpace};
use crate::modcat::{
    generated_spaces, hom_basis, quotient as quotient_module, same_algebra, submodule, Cokernel, Kernel, Module,
    ModuleMap,
};
use crate::quivalg::{Algebra, Corner, Element, Path, Quotient};

pub use checks::{canonical_ses, CanonicalSes, Exactness, SesKind, Universes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Functor {
    #[serde(rename = "i*")]
    IStar,
    #[serde(rename = "i_*")]
    ILowerStar,
    #[serde(rename = "i^!")]
    IShriek,
    #[serde(rename = "j_!")]
    JShriek,
    #[serde(rename = "j*")]
    JStar,
    #[serde(rename = "j_*")]
    JLowerStar,
}

impl Functor {
    pub const ALL: [Functor; 6] = [
        Functor::IStar,
        Functor::ILowerStar,
        Functor::IShriek,
        Functor::JShriek,
        Functor::JStar,
        Functor::JLowerStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functor::IStar => "i*",
            Functor::ILowerStar => "i_*",
            Functor::IShriek => "i^!",
            Functor::JShriek => "j_!",
            Functor::JStar => "j*",
            Functor::JLowerStar => "j_*",
        }
    }

    pub fn parse(s: &str) -> Option<Functor> {
        Functor::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which of the three categories a functor starts or ends in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Middle,
    Right,
}

/// Per-vertex layout of `⊕_x N_x ⊗ e_{v_x} A e_w` used by `j_!`.
struct TensorLayout {
    offsets: Vec<Vec<usize>>,
    spaces: Vec<QuotientSpace>,
    free_dims: Vec<usize>,
}

pub struct Recollement {
    middle: Arc<Algebra>,
    e: Vec<usize>,
    quotient: Quotient,
    left: Arc<Algebra>,
    corner: Corner,
    right: Arc<Algebra>,
    /// `Q_w = e_w A e` as a module over the corner, one per vertex of the middle algebra.
    corner_modules: Vec<Module>,
    exactness: Option<Exactness>,
}

impl fmt::Debug for Recollement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Recollement")
            .field("middle", &self.middle.label())
            .field("e", &self.e)
            .field("left_dim", &self.left.dim())
            .field("right_dim", &self.right.dim())
            .field("exactness", &self.exactness)
            .finish()
    }
}

impl Recollement {
    /// Builds the recollement for the vertex set `e` and decides functor exactness.
    pub fn build(algebra: Arc<Algebra>, e: &[usize]) -> Result<Self> {
        let mut r = Self::build_raw(algebra, e)?;
        let ex = checks::functor_exactness(&r)?;
        r.exactness = Some(ex);
        Ok(r)
    }

    /// Resolves vertex names to indices.
    pub fn build_named(algebra: Arc<Algebra>, names: &[&str]) -> Result<Self> {
        let e = names
            .iter()
            .map(|n| {
                algebra
                    .quiver()
                    .vertex_index(n)
                    .ok_or_else(|| Error::InvalidQuiver(format!("unknown vertex {n:?} in idempotent")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(algebra, &e)
    }

    pub(crate) fn build_raw(algebra: Arc<Algebra>, e: &[usize]) -> Result<Self> {
        if e.is_empty() {
            return Err(Error::InvalidQuiver("the idempotent needs at least one vertex".into()));
        }
        let quotient = algebra.idempotent_quotient(e)?;
        let corner = algebra.corner(e)?;
        let left = Arc::new(quotient.algebra.clone());
        let right = Arc::new(corner.algebra.clone());
        let e = corner.vertices.clone();
        let corner_modules = (0..algebra.num_vertices())
            .map(|w| corner_module(&algebra, &corner, &right, w))
            .collect();
        Ok(Self {
            middle: algebra,
            e,
            quotient,
            left,
            corner,
            right,
            corner_modules,
            exactness: None,
        })
    }

    pub fn middle(&self) -> &Arc<Algebra> {
        &self.middle
    }

    pub fn left(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn idempotent(&self) -> &[usize] {
        &self.e
    }

    pub fn idempotent_names(&self) -> Vec<String> {
        self.e
            .iter()
            .map(|&v| self.middle.quiver().vertices[v].clone())
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.left.num_vertices() == 0
    }

    pub fn exactness(&self) -> &Exactness {
        self.exactness.as_ref().expect("exactness decided at build time")
    }

    pub fn corner(&self) -> &Corner {
        &self.corner
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn algebra_of(&self, side: Side) -> &Arc<Algebra> {
        match side {
            Side::Left => &self.left,
            Side::Middle => &self.middle,
            Side::Right => &self.right,
        }
    }

    pub fn domain(f: Functor) -> Side {
        match f {
            Functor::IStar | Functor::IShriek | Functor::JStar => Side::Middle,
            Functor::ILowerStar => Side::Left,
            Functor::JShriek | Functor::JLowerStar => Side::Right,
        }
    }

    pub fn codomain(f: Functor) -> Side {
        match f {
            Functor::IStar | Functor::IShriek => Side::Left,
            Functor::JStar => Side::Right,
            Functor::ILowerStar | Functor::JShriek | Functor::JLowerStar => Side::Middle,
        }
    }

    fn check_domain(&self, f: Functor, m: &Module) -> Result<()> {
        let expected = self.algebra_of(Self::domain(f));
        if same_algebra(m.algebra(), expected) {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                functor: f.name(),
                message: format!(
                    "module over {} but the functor expects {}",
                    m.algebra().label(),
                    expected.label()
                ),
            })
        }
    }

    pub fn apply(&self, f: Functor, m: &Module) -> Result<Module> {
        self.check_domain(f, m)?;
        Ok(match f {
            Functor::IStar => self.i_star(m),
            Functor::ILowerStar => self.i_lower_star(m),
            Functor::IShriek => self.i_shriek(m),
            Functor::JShriek => self.j_shriek(m),
            Functor::JStar => self.j_star(m),
            Functor::JLowerStar => self.j_lower_star(m),
        })
    }

    pub fn apply_map(&self, f: Functor, g: &ModuleMap) -> Result<ModuleMap> {
        self.check_domain(f, g.source())?;
        self.check_domain(f, g.target())?;
        Ok(match f {
            Functor::IStar => self.i_star_map(g),
            Functor::ILowerStar => self.i_lower_star_map(g),
            Functor::IShriek => self.i_shriek_map(g),
            Functor::JShriek => self.j_shriek_map(g),
            Functor::JStar => self.j_star_map(g),
            Functor::JLowerStar => self.j_lower_star_map(g),
        })
    }

    /// Applies a chain of functors right to left: `compose(&[F, G], m) = F(G(m))`.
    pub fn compose(&self, fs: &[Functor], m: &Module) -> Result<Module> {
        let mut cur = m.clone();
        for &f in fs.iter().rev() {
            cur = self.apply(f, &cur)?;
        }
        Ok(cur)
    }

    // ---- the left side ----

    /// Restricts a middle module vanishing on `E` to the left algebra.
    fn restrict_left(&self, m: &Module) -> Module {
        let q = &self.quotient;
        let dims = q.vertices.iter().map(|&v| m.dims()[v]).collect();
        let maps = q.arrows.iter().map(|&a| m.arrow_map(a).clone()).collect();
        Module::new(self.left.clone(), dims, maps).expect("restriction of a module vanishing on E")
    }

    fn restrict_left_map(&self, g: &ModuleMap, src: Module, tgt: Module) -> ModuleMap {
        let maps = self
            .quotient
            .vertices
            .iter()
            .map(|&v| g.vertex_map(v).clone())
            .collect();
        ModuleMap::new(src, tgt, maps).expect("restricted map")
    }

    /// Generated submodule `M·AeA` as per-vertex bases.
    fn trace_of_e(&self, m: &Module) -> Vec<Mat> {
        let f = m.field();
        let gens: Vec<Mat> = (0..m.dims().len())
            .map(|v| {
                if self.e.contains(&v) {
                    Mat::identity(f, m.dims()[v])
                } else {
                    Mat::zeros(f, m.dims()[v], 0)
                }
            })
            .collect();
        generated_spaces(m, &gens)
    }

    fn i_star_parts(&self, m: &Module) -> Cokernel {
        quotient_module(m, &self.trace_of_e(m))
    }

    fn i_star(&self, m: &Module) -> Module {
        self.restrict_left(&self.i_star_parts(m).module)
    }

    fn i_star_map(&self, g: &ModuleMap) -> ModuleMap {
        let cs = self.i_star_parts(g.source());
        let ct = self.i_star_parts(g.target());
        let maps: Vec<Mat> = (0..g.source().dims().len())
            .map(|v| ct.projection.vertex_map(v).dot(g.vertex_map(v)).dot(&cs.sections[v]))
            .collect();
        let mid = ModuleMap::new(cs.module.clone(), ct.module.clone(), maps).expect("induced map");
        self.restrict_left_map(&mid, self.restrict_left(&cs.module), self.restrict_left(&ct.module))
    }

    /// `{m : m·AeA = 0}`: at `v`, the common kernel of all paths from `v` into `E`.
    fn i_shriek_parts(&self, m: &Module) -> Kernel {
        let f = m.field();
        let a = &self.middle;
        let spaces = (0..a.num_vertices())
            .map(|v| {
                let acts: Vec<Mat> = self
                    .e
                    .iter()
                    .flat_map(|&w| a.block(v, w).iter().map(|&b| m.basis_action(b)).collect::<Vec<_>>())
                    .collect();
                let refs: Vec<&Mat> = acts.iter().collect();
                Mat::vstack(&refs, f, m.dims()[v]).kernel_matrix()
            })
            .collect();
        submodule(m, spaces)
    }

    fn i_shriek(&self, m: &Module) -> Module {
        self.restrict_left(&self.i_shriek_parts(m).module)
    }

    fn i_shriek_map(&self, g: &ModuleMap) -> ModuleMap {
        let ks = self.i_shriek_parts(g.source());
        let kt = self.i_shriek_parts(g.target());
        let maps: Vec<Mat> = (0..g.source().dims().len())
            .map(|v| {
                let img = g.vertex_map(v).dot(ks.inclusion.vertex_map(v));
                kt.inclusion
                    .vertex_map(v)
                    .solve_matrix(&img)
                    .expect("maps preserve the annihilator")
            })
            .collect();
        let mid = ModuleMap::new(ks.module.clone(), kt.module.clone(), maps).expect("induced map");
        self.restrict_left_map(&mid, self.restrict_left(&ks.module), self.restrict_left(&kt.module))
    }

    /// Inflation along `B -> B/BeB`.
    fn i_lower_star(&self, n: &Module) -> Module {
        let a = &self.middle;
        let f = a.field();
        let q = &self.quotient;
        let mut dims = vec![0; a.num_vertices()];
        for (k, &v) in q.vertices.iter().enumerate() {
            dims[v] = n.dims()[k];
        }
        let maps = a
            .quiver()
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, ar)| match q.arrows.iter().position(|&x| x == ai) {
                Some(k) => n.arrow_map(k).clone(),
                None => Mat::zeros(f, dims[ar.target], dims[ar.source]),
            })
            .collect();
        Module::new(a.clone(), dims, maps).expect("inflation")
    }

    fn i_lower_star_map(&self, g: &ModuleMap) -> ModuleMap {
        let f = self.middle.field();
        let src = self.i_lower_star(g.source());
        let tgt = self.i_lower_star(g.target());
        let maps = (0..self.middle.num_vertices())
            .map(|v| match self.quotient.vertex_of(v) {
                Some(k) => g.vertex_map(k).clone(),
                None => Mat::zeros(f, 0, 0),
            })
            .collect();
        ModuleMap::new(src, tgt, maps).expect("inflated map")
    }

    // ---- the right side ----

    /// `j*(M) = Me` with corner arrows acting through their elements of `A`.
    fn j_star(&self, m: &Module) -> Module {
        let dims = self.e.iter().map(|&v| m.dims()[v]).collect();
        let maps = self
            .right
            .quiver()
            .arrows
            .iter()
            .zip(&self.corner.arrow_elements)
            .map(|(ar, x)| m.element_action(x, self.e[ar.source], self.e[ar.target]))
            .collect();
        Module::new(self.right.clone(), dims, maps).expect("restriction to the corner")
    }

    fn j_star_map(&self, g: &ModuleMap) -> ModuleMap {
        let maps = self.e.iter().map(|&v| g.vertex_map(v).clone()).collect();
        ModuleMap::new(self.j_star(g.source()), self.j_star(g.target()), maps).expect("restricted map")
    }

    fn tensor_layout(&self, n: &Module) -> TensorLayout {
        let a = &self.middle;
        let f = a.field();
        let nv = a.num_vertices();
        let mut offsets = Vec::with_capacity(nv);
        let mut spaces = Vec::with_capacity(nv);
        let mut free_dims = Vec::with_capacity(nv);
        for w in 0..nv {
            let mut off = Vec::with_capacity(self.e.len());
            let mut total = 0;
            for (x, &vx) in self.e.iter().enumerate() {
                off.push(total);
                total += n.dims()[x] * a.block_dim(vx, w);
            }
            let mut rels: Vec<Mat> = Vec::new();
            for (k, ar) in self.right.quiver().arrows.iter().enumerate() {
                let (x, x2) = (ar.source, ar.target);
                let (vx, vx2) = (self.e[x], self.e[x2]);
                let bd = a.block_dim(vx, w);
                let bd2 = a.block_dim(vx2, w);
                let lm = a.left_mult_matrix(&self.corner.arrow_elements[k], vx, vx2, w);
                let nc = n.arrow_map(k);
                for i in 0..n.dims()[x] {
                    for b2 in 0..bd2 {
                        let mut col = Mat::zeros(f, total, 1);
                        for i2 in 0..n.dims()[x2] {
                            let c = nc.get(i2, i);
                            if c != 0 {
                                let idx = off[x2] + i2 * bd2 + b2;
                                col.set(idx, 0, f.add(col.get(idx, 0), c));
                            }
                        }
                        for b in 0..bd {
                            let c = lm.get(b, b2);
                            if c != 0 {
                                let idx = off[x] + i * bd + b;
                                col.set(idx, 0, f.sub(col.get(idx, 0), c));
                            }
                        }
                        rels.push(col);
                    }
                }
            }
            let refs: Vec<&Mat> = rels.iter().collect();
            let span = Mat::hstack(&refs, f, total);
            spaces.push(QuotientSpace::new(f, total, &span));
            offsets.push(off);
            free_dims.push(total);
        }
        TensorLayout {
            offsets,
            spaces,
            free_dims,
        }
    }

    /// `j_!(N) = N ⊗_{eAe} eA`.
    fn j_shriek(&self, n: &Module) -> Module {
        let layout = self.tensor_layout(n);
        self.j_shriek_from(n, &layout)
    }

    fn j_shriek_from(&self, n: &Module, layout: &TensorLayout) -> Module {
        let a = &self.middle;
        let f = a.field();
        let dims: Vec<usize> = layout.spaces.iter().map(QuotientSpace::dim).collect();
        let maps = a
            .quiver()
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, ar)| {
                let (w, w2) = (ar.source, ar.target);
                let mut free = Mat::zeros(f, layout.free_dims[w2], layout.free_dims[w]);
                for (x, &vx) in self.e.iter().enumerate() {
                    let rm = a.right_mult_matrix(vx, ai);
                    let (bd, bd2) = (a.block_dim(vx, w), a.block_dim(vx, w2));
                    for i in 0..n.dims()[x] {
                        free.set_block(
                            layout.offsets[w2][x] + i * bd2,
                            layout.offsets[w][x] + i * bd,
                            &rm,
                        );
                    }
                }
                layout.spaces[w2]
                    .projection
                    .dot(&free)
                    .dot(&layout.spaces[w].section)
            })
            .collect();
        Module::new(a.clone(), dims, maps).expect("tensor product is a module")
    }

    fn j_shriek_map(&self, g: &ModuleMap) -> ModuleMap {
        let a = &self.middle;
        let f = a.field();
        let (n, n2) = (g.source(), g.target());
        let (ls, lt) = (self.tensor_layout(n), self.tensor_layout(n2));
        let maps = (0..a.num_vertices())
            .map(|w| {
                let mut free = Mat::zeros(f, lt.free_dims[w], ls.free_dims[w]);
                for (x, &vx) in self.e.iter().enumerate() {
                    let bd = a.block_dim(vx, w);
                    let gx = g.vertex_map(x);
                    for i in 0..n.dims()[x] {
                        for i2 in 0..n2.dims()[x] {
                            let c = gx.get(i2, i);
                            if c == 0 {
                                continue;
                            }
                            for b in 0..bd {
                                free.set(lt.offsets[w][x] + i2 * bd + b, ls.offsets[w][x] + i * bd + b, c);
                            }
                        }
                    }
                }
                lt.spaces[w].projection.dot(&free).dot(&ls.spaces[w].section)
            })
            .collect();
        ModuleMap::new(self.j_shriek_from(n, &ls), self.j_shriek_from(n2, &lt), maps)
            .expect("induced map on tensor products")
    }

    /// Flattened coordinates of the basis of `Hom(Q_w, N)` as matrix columns.
    fn hom_q(&self, w: usize, n: &Module) -> (Vec<ModuleMap>, Mat) {
        let basis = hom_basis(&self.corner_modules[w], n).expect("same algebra");
        let f = n.field();
        let len: usize = self.corner_modules[w]
            .dims()
            .iter()
            .zip(n.dims())
            .map(|(a, b)| a * b)
            .sum();
        let cols: Vec<Mat> = basis
            .iter()
            .map(|h| Mat::column(f, &h.coordinates()))
            .collect();
        let refs: Vec<&Mat> = cols.iter().collect();
        (basis, Mat::hstack(&refs, f, len))
    }

    fn coords_in(&self, phi: &Mat, h: &ModuleMap) -> Mat {
        let f = phi.field();
        phi.solve_matrix(&Mat::column(f, &h.coordinates()))
            .expect("element of the Hom space")
    }

    /// Left multiplication by arrow `b: w -> w2` as a corner map `Q_{w2} -> Q_w`.
    fn left_mult_q(&self, b: usize) -> ModuleMap {
        let a = &self.middle;
        let ar = &a.quiver().arrows[b];
        let x: Element = a.reduce(&Path {
            source: ar.source,
            target: ar.target,
            arrows: vec![b],
        });
        let maps = self
            .e
            .iter()
            .map(|&vx| a.left_mult_matrix(&x, ar.source, ar.target, vx))
            .collect();
        ModuleMap::new(
            self.corner_modules[ar.target].clone(),
            self.corner_modules[ar.source].clone(),
            maps,
        )
        .expect("left multiplication is right-linear")
    }

    /// `j_*(N) = Hom_{eAe}(Ae, N)`.
    fn j_lower_star(&self, n: &Module) -> Module {
        let a = &self.middle;
        let f = a.field();
        let homs: Vec<(Vec<ModuleMap>, Mat)> =
            (0..a.num_vertices()).map(|w| self.hom_q(w, n)).collect();
        let dims = homs.iter().map(|(b, _)| b.len()).collect();
        let maps = a
            .quiver()
            .arrows
            .iter()
            .enumerate()
            .map(|(bi, ar)| {
                let lb = self.left_mult_q(bi);
                let (src_basis, _) = &homs[ar.source];
                let (_, phi_t) = &homs[ar.target];
                let cols: Vec<Mat> = src_basis
                    .iter()
                    .map(|h| self.coords_in(phi_t, &h.after(&lb).expect("compatible")))
                    .collect();
                let refs: Vec<&Mat> = cols.iter().collect();
                Mat::hstack(&refs, f, homs[ar.target].0.len())
            })
            .collect();
        Module::new(a.clone(), dims, maps).expect("Hom module")
    }

    fn j_lower_star_map(&self, g: &ModuleMap) -> ModuleMap {
        let a = &self.middle;
        let f = a.field();
        let maps = (0..a.num_vertices())
            .map(|w| {
                let (bs, _) = self.hom_q(w, g.source());
                let (bt, phi_t) = self.hom_q(w, g.target());
                let cols: Vec<Mat> = bs
                    .iter()
                    .map(|h| self.coords_in(&phi_t, &g.after(h).expect("compatible")))
                    .collect();
                let refs: Vec<&Mat> = cols.iter().collect();
                Mat::hstack(&refs, f, bt.len())
            })
            .collect();
        ModuleMap::new(self.j_lower_star(g.source()), self.j_lower_star(g.target()), maps)
            .expect("induced map on Hom modules")
    }

    // ---- natural transformations ----

    /// `M -> i_* i^* M`.
    pub fn unit_i_star(&self, m: &Module) -> Result<ModuleMap> {
        self.check_domain(Functor::IStar, m)?;
        let parts = self.i_star_parts(m);
        let target = self.i_lower_star(&self.restrict_left(&parts.module));
        let maps = parts.projection.vertex_maps().to_vec();
        ModuleMap::new(m.clone(), target, maps)
    }

    /// `i_* i^! M -> M`.
    pub fn counit_i_shriek(&self, m: &Module) -> Result<ModuleMap> {
        self.check_domain(Functor::IShriek, m)?;
        let parts = self.i_shriek_parts(m);
        let source = self.i_lower_star(&self.restrict_left(&parts.module));
        ModuleMap::new(source, m.clone(), parts.inclusion.vertex_maps().to_vec())
    }

    /// `j_! j^* M -> M`, `m ⊗ y -> m·y`.
    pub fn counit_j_shriek(&self, m: &Module) -> Result<ModuleMap> {
        self.check_domain(Functor::JStar, m)?;
        let a = &self.middle;
        let f = a.field();
        let n = self.j_star(m);
        let layout = self.tensor_layout(&n);
        let source = self.j_shriek_from(&n, &layout);
        let maps = (0..a.num_vertices())
            .map(|w| {
                let mut free = Mat::zeros(f, m.dims()[w], layout.free_dims[w]);
                for (x, &vx) in self.e.iter().enumerate() {
                    let bd = a.block_dim(vx, w);
                    for (pos, &b) in a.block(vx, w).iter().enumerate() {
                        let act = m.basis_action(b);
                        for i in 0..n.dims()[x] {
                            for r in 0..m.dims()[w] {
                                free.set(r, layout.offsets[w][x] + i * bd + pos, act.get(r, i));
                            }
                        }
                    }
                }
                free.dot(&layout.spaces[w].section)
            })
            .collect();
        ModuleMap::new(source, m.clone(), maps)
    }

    /// `M -> j_* j^* M`, `m -> (y -> m·y)`.
    pub fn unit_j_star(&self, m: &Module) -> Result<ModuleMap> {
        self.check_domain(Functor::JStar, m)?;
        let a = &self.middle;
        let f = a.field();
        let n = self.j_star(m);
        let target = self.j_lower_star(&n);
        let maps = (0..a.num_vertices())
            .map(|w| {
                let (basis, phi) = self.hom_q(w, &n);
                let q = &self.corner_modules[w];
                let cols: Vec<Mat> = (0..m.dims()[w])
                    .map(|i| {
                        let unit = {
                            let mut c = Mat::zeros(f, m.dims()[w], 1);
                            c.set(i, 0, 1);
                            c
                        };
                        let vmaps: Vec<Mat> = self
                            .e
                            .iter()
                            .map(|&vx| {
                                let block = a.block(w, vx);
                                let mut out = Mat::zeros(f, m.dims()[vx], block.len());
                                for (pos, &b) in block.iter().enumerate() {
                                    let col = m.basis_action(b).dot(&unit);
                                    for r in 0..m.dims()[vx] {
                                        out.set(r, pos, col.get(r, 0));
                                    }
                                }
                                out
                            })
                            .collect();
                        let h = ModuleMap::new(q.clone(), n.clone(), vmaps).expect("evaluation map");
                        self.coords_in(&phi, &h)
                    })
                    .collect();
                let refs: Vec<&Mat> = cols.iter().collect();
                Mat::hstack(&refs, f, basis.len())
            })
            .collect();
        ModuleMap::new(m.clone(), target, maps)
    }

    /// `Z -> j^* j_! Z`, `z -> z ⊗ e`.
    pub fn unit_j_shriek(&self, z: &Module) -> Result<ModuleMap> {
        self.check_domain(Functor::JShriek, z)?;
        let a = &self.middle;
        let f = a.field();
        let layout = self.tensor_layout(z);
        let jz = self.j_shriek_from(z, &layout);
        let maps = self
            .e
            .iter()
            .enumerate()
            .map(|(x, &vx)| {
                let bd = a.block_dim(vx, vx);
                let pos = a.block_position(a.idempotent(vx));
                let mut free = Mat::zeros(f, layout.free_dims[vx], z.dims()[x]);
                for i in 0..z.dims()[x] {
                    free.set(layout.offsets[vx][x] + i * bd + pos, i, 1);
                }
                layout.spaces[vx].projection.dot(&free)
            })
            .collect();
        ModuleMap::new(z.clone(), self.j_star(&jz), maps)
    }

    /// `j^* j_* Z -> Z`, `f -> f(e)`.
    pub fn counit_j_lower_star(&self, z: &Module) -> Result<ModuleMap> {
        self.check_domain(Functor::JLowerStar, z)?;
        let a = &self.middle;
        let f = a.field();
        let jz = self.j_lower_star(z);
        let maps = self
            .e
            .iter()
            .enumerate()
            .map(|(x, &vx)| {
                let (basis, _) = self.hom_q(vx, z);
                let pos = a.block_position(a.idempotent(vx));
                let mut out = Mat::zeros(f, z.dims()[x], basis.len());
                for (k, h) in basis.iter().enumerate() {
                    let col = h.vertex_map(x).col(pos);
                    for r in 0..z.dims()[x] {
                        out.set(r, k, col.get(r, 0));
                    }
                }
                out
            })
            .collect();
        ModuleMap::new(self.j_star(&jz), z.clone(), maps)
    }

    /// `i^* i_* Y -> Y` (the identity on underlying spaces).
    pub fn counit_i_star(&self, y: &Module) -> Result<ModuleMap> {
        self.check_domain(Functor::ILowerStar, y)?;
        let iy = self.i_lower_star(y);
        let back = self.i_star(&iy);
        let maps = self
            .quotient
            .vertices
            .iter()
            .map(|&v| {
                // i^* of a module vanishing on E is the module itself.
                Mat::identity(y.field(), iy.dims()[v])
            })
            .collect();
        ModuleMap::new(back, y.clone(), maps)
    }

    /// `Y -> i^! i_* Y`.
    pub fn unit_i_shriek(&self, y: &Module) -> Result<ModuleMap> {
        self.check_domain(Functor::ILowerStar, y)?;
        let iy = self.i_lower_star(y);
        let parts = self.i_shriek_parts(&iy);
        let back = self.restrict_left(&parts.module);
        let maps = self
            .quotient
            .vertices
            .iter()
            .map(|&v| {
                parts
                    .inclusion
                    .vertex_map(v)
                    .solve_matrix(&Mat::identity(y.field(), iy.dims()[v]))
                    .unwrap_or_else(|| Mat::zeros(y.field(), parts.module.dims()[v], iy.dims()[v]))
            })
            .collect();
        ModuleMap::new(y.clone(), back, maps)
    }
}

/// `e_w A e` as a right module over the corner.
fn corner_module(a: &Algebra, corner: &Corner, right: &Arc<Algebra>, w: usize) -> Module {
    let dims = corner.vertices.iter().map(|&vx| a.block_dim(w, vx)).collect();
    let maps = right
        .quiver()
        .arrows
        .iter()
        .zip(&corner.arrow_elements)
        .map(|(ar, x)| a.right_mult_element(x, w, corner.vertices[ar.source], corner.vertices[ar.target]))
        .collect();
    Module::new(right.clone(), dims, maps).expect("e_w A e is a corner module")
}
