//! Kernels, cokernels, images, submodules and quotients.

use crate::exactlin::{Mat, QuotientSpace};

use super::{Module, ModuleMap};

#[derive(Debug, Clone)]
pub struct Kernel {
    pub module: Module,
    pub inclusion: ModuleMap,
}

#[derive(Debug, Clone)]
pub struct Cokernel {
    pub module: Module,
    pub projection: ModuleMap,
    /// Per-vertex linear sections of the projection (not module maps).
    pub sections: Vec<Mat>,
}

/// The submodule with basis columns `spaces[v]` at each vertex. The spaces
/// must be closed under the arrow maps.
pub(crate) fn submodule(m: &Module, spaces: Vec<Mat>) -> Kernel {
    let f = m.field();
    let a = m.algebra();
    let dims: Vec<usize> = spaces.iter().map(Mat::cols).collect();
    let maps = a
        .quiver()
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, ar)| {
            let img = m.arrow_map(ai).dot(&spaces[ar.source]);
            spaces[ar.target]
                .solve_matrix(&img)
                .unwrap_or_else(|| Mat::zeros(f, dims[ar.target], dims[ar.source]))
        })
        .collect();
    let module = Module::new_unchecked(a.clone(), dims, maps);
    let inclusion = ModuleMap::new_unchecked(module.clone(), m.clone(), spaces);
    Kernel { module, inclusion }
}

/// `M / U` for a submodule given by spanning columns per vertex.
pub(crate) fn quotient(m: &Module, spans: &[Mat]) -> Cokernel {
    let f = m.field();
    let a = m.algebra();
    let qs: Vec<QuotientSpace> = spans
        .iter()
        .enumerate()
        .map(|(v, s)| QuotientSpace::new(f, m.dims()[v], s))
        .collect();
    let dims: Vec<usize> = qs.iter().map(QuotientSpace::dim).collect();
    let maps = a
        .quiver()
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, ar)| {
            qs[ar.target]
                .projection
                .dot(&m.arrow_map(ai).dot(&qs[ar.source].section))
        })
        .collect();
    let module = Module::new_unchecked(a.clone(), dims, maps);
    let projection = ModuleMap::new_unchecked(
        m.clone(),
        module.clone(),
        qs.iter().map(|q| q.projection.clone()).collect(),
    );
    Cokernel {
        module,
        projection,
        sections: qs.into_iter().map(|q| q.section).collect(),
    }
}

/// Closure of the given per-vertex vectors under the arrow maps; returns a
/// basis (as columns) of the generated submodule at each vertex.
pub(crate) fn generated_spaces(m: &Module, gens: &[Mat]) -> Vec<Mat> {
    let f = m.field();
    let arrows = &m.algebra().quiver().arrows;
    let mut spaces: Vec<Mat> = gens.iter().map(Mat::column_space).collect();
    loop {
        let mut changed = false;
        for (ai, ar) in arrows.iter().enumerate() {
            let img = m.arrow_map(ai).dot(&spaces[ar.source]);
            if img.cols() == 0 || img.is_zero() {
                continue;
            }
            let t = ar.target;
            let joined = Mat::hstack(&[&spaces[t], &img], f, m.dims()[t]);
            let basis = joined.column_space();
            if basis.cols() > spaces[t].cols() {
                spaces[t] = basis;
                changed = true;
            }
        }
        if !changed {
            return spaces;
        }
    }
}

impl ModuleMap {
    pub fn kernel(&self) -> Kernel {
        let spaces = self.vertex_maps().iter().map(Mat::kernel_matrix).collect();
        submodule(self.source(), spaces)
    }

    /// The image as a submodule of the target.
    pub fn image(&self) -> Kernel {
        let spaces = self.vertex_maps().iter().map(Mat::column_space).collect();
        submodule(self.target(), spaces)
    }

    pub fn cokernel(&self) -> Cokernel {
        quotient(self.target(), self.vertex_maps())
    }

    /// `(ker f, coker f)` with inclusion and projection.
    pub fn kernel_cokernel(&self) -> (Kernel, Cokernel) {
        (self.kernel(), self.cokernel())
    }

    /// Solves `p ∘ g = self` for a homomorphism `g`, given `p: X -> self.target()`.
    pub fn lift_through(&self, p: &ModuleMap) -> Option<ModuleMap> {
        factor_through(self, p)
    }

    /// Solves `g ∘ i = self` for `g`, given `i: self.source() -> Y`.
    pub fn extend_along(&self, i: &ModuleMap) -> Option<ModuleMap> {
        extend_along(self, i)
    }
}

/// Solves `p ∘ g = f` for a homomorphism `g`; the condition is linear in `g`.
pub fn factor_through(f: &ModuleMap, p: &ModuleMap) -> Option<ModuleMap> {
    let basis = super::hom_basis(f.source(), p.source()).ok()?;
    let images: Vec<Vec<u32>> = basis
        .iter()
        .map(|g| p.after(g).expect("compatible").coordinates())
        .collect();
    solve_combination(f.source(), p.source(), &basis, &images, f.coordinates())
}

/// Solves `g ∘ i = f` for a homomorphism `g: i.target -> f.target`.
pub fn extend_along(f: &ModuleMap, i: &ModuleMap) -> Option<ModuleMap> {
    let basis = super::hom_basis(i.target(), f.target()).ok()?;
    let images: Vec<Vec<u32>> = basis
        .iter()
        .map(|g| g.after(i).expect("compatible").coordinates())
        .collect();
    solve_combination(i.target(), f.target(), &basis, &images, f.coordinates())
}

fn solve_combination(
    src: &Module,
    tgt: &Module,
    basis: &[ModuleMap],
    images: &[Vec<u32>],
    rhs: Vec<u32>,
) -> Option<ModuleMap> {
    let field = src.field();
    let n = rhs.len();
    let mut sys = Mat::zeros(field, n, basis.len());
    for (j, col) in images.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            sys.set(i, j, v);
        }
    }
    let b = Mat::column(field, &rhs);
    let x = sys.solve_matrix(&b)?;
    let coeffs: Vec<u32> = (0..basis.len()).map(|j| x.get(j, 0)).collect();
    Some(ModuleMap::combination(src, tgt, basis, &coeffs))
}

/// `rad M` (sum of images of all arrows) with its inclusion.
pub(crate) fn radical(m: &Module) -> (Module, ModuleMap) {
    let spaces = radical_spaces(m);
    let k = submodule(m, spaces);
    (k.module, k.inclusion)
}

pub(crate) fn radical_spaces(m: &Module) -> Vec<Mat> {
    let f = m.field();
    let a = m.algebra();
    (0..a.num_vertices())
        .map(|v| {
            let imgs: Vec<&Mat> = a
                .quiver()
                .arrows
                .iter()
                .enumerate()
                .filter(|(_, ar)| ar.target == v)
                .map(|(ai, _)| m.arrow_map(ai))
                .collect();
            Mat::hstack(&imgs, f, m.dims()[v]).column_space()
        })
        .collect()
}

/// `top M = M / rad M` with its projection.
pub fn top(m: &Module) -> Cokernel {
    quotient(m, &radical_spaces(m))
}

/// `soc M`: the common kernel of all arrow maps at each vertex.
pub fn socle(m: &Module) -> Kernel {
    let f = m.field();
    let a = m.algebra();
    let spaces = (0..a.num_vertices())
        .map(|v| {
            let outs: Vec<&Mat> = a
                .quiver()
                .arrows
                .iter()
                .enumerate()
                .filter(|(_, ar)| ar.source == v)
                .map(|(ai, _)| m.arrow_map(ai))
                .collect();
            Mat::vstack(&outs, f, m.dims()[v]).kernel_matrix()
        })
        .collect();
    submodule(m, spaces)
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::super::{hom_basis, is_isomorphic};
    use super::*;

    #[test]
    fn identity_and_zero_maps() {
        let a = a2();
        let m = Module::projective(&a, 0);
        let (k, c) = m.identity().kernel_cokernel();
        assert!(k.module.is_zero() && c.module.is_zero());
        let n = Module::injective(&a, 1);
        let (k, c) = ModuleMap::zero(&m, &n).kernel_cokernel();
        assert_eq!(k.module, m);
        assert_eq!(c.module.dims(), n.dims());
    }

    #[test]
    fn kernel_of_top_projection_is_s2() {
        let a = a2();
        let p1 = Module::projective(&a, 0);
        let s1 = Module::simple(&a, 0);
        let epi = hom_basis(&p1, &s1).unwrap().remove(0);
        assert!(epi.is_surjective());
        let k = epi.kernel();
        assert!(is_isomorphic(&k.module, &Module::simple(&a, 1)).unwrap().is_some());
        assert_eq!(top(&p1).module, s1);
        assert_eq!(socle(&p1).module.dims(), &[0, 1]);
    }

    #[test]
    fn exactness_vertexwise() {
        let a = a2();
        let m = a2_rep(&a, 1).power(2);
        for f in hom_basis(&m, &m).unwrap() {
            let (k, c) = f.kernel_cokernel();
            assert!(f.after(&k.inclusion).unwrap().is_zero());
            assert!(c.projection.after(&f).unwrap().is_zero());
            assert_eq!(k.module.dim() + f.rank(), m.dim());
            assert_eq!(c.module.dim() + f.rank(), m.dim());
        }
    }

    #[test]
    fn factorization() {
        let a = a2();
        let p1 = Module::projective(&a, 0);
        let s1 = Module::simple(&a, 0);
        let i1 = Module::injective(&a, 1);
        let epi = hom_basis(&p1, &s1).unwrap().remove(0);
        // id_{S1} does not lift through P1 -> S1.
        assert!(s1.identity().lift_through(&epi).is_none());
        // P1 -> I2 is an iso on A2, so every map out of P1 extends trivially.
        let iso = hom_basis(&p1, &i1).unwrap().remove(0);
        assert!(iso.is_isomorphism());
        let g = epi.extend_along(&iso).unwrap();
        assert_eq!(g.after(&iso).unwrap(), epi);
    }
}
