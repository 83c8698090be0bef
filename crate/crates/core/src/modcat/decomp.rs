//! Krull-Schmidt decomposition by Fitting splitting, and isomorphism tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exactlin::Mat;

use super::ops::submodule;
use super::{end_basis, hom_basis, Module, ModuleMap};

/// Endomorphism rings up to this many elements are searched exhaustively
/// when no sampled endomorphism splits the module.
pub const EXHAUSTIVE_CAP: u128 = 1 << 12;
/// Number of seeded random endomorphisms tried before the exhaustive pass.
///
/// For a non-local endomorphism ring a uniformly random element is a unit or
/// nilpotent with probability at most 5/8, so 200 misses leave an error
/// probability below 2^-135.
pub const RANDOM_TRIALS: usize = 200;

/// One indecomposable summand together with its split inclusion and projection.
#[derive(Debug, Clone)]
pub struct Summand {
    pub module: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

fn power_exponent(m: &Module) -> usize {
    m.dims().iter().copied().max().unwrap_or(0).max(1)
}

enum Kind {
    Nilpotent,
    Invertible,
    /// `φ^N` with rank strictly between 0 and dim M.
    Splits(ModuleMap),
}

fn classify(phi: &ModuleMap) -> Kind {
    let m = phi.source();
    let n = power_exponent(m);
    let maps: Vec<Mat> = phi.vertex_maps().iter().map(|x| x.pow(n)).collect();
    let rank: usize = maps.iter().map(Mat::rank).sum();
    if rank == 0 {
        Kind::Nilpotent
    } else if rank == m.dim() {
        Kind::Invertible
    } else {
        Kind::Splits(ModuleMap::new_unchecked(m.clone(), m.clone(), maps))
    }
}

/// Splits `M = ker ψ ⊕ im ψ` for an idempotent-like power `ψ = φ^N`.
fn fitting_split(psi: &ModuleMap) -> [Summand; 2] {
    let m = psi.source();
    let f = m.field();
    let k = submodule(m, psi.vertex_maps().iter().map(Mat::kernel_matrix).collect());
    let i = submodule(m, psi.vertex_maps().iter().map(Mat::column_space).collect());
    let mut pk = Vec::new();
    let mut pi = Vec::new();
    for v in 0..m.dims().len() {
        let (kv, iv) = (k.inclusion.vertex_map(v), i.inclusion.vertex_map(v));
        let basis = Mat::hstack(&[kv, iv], f, m.dims()[v]);
        let inv = basis
            .invert()
            .expect("square")
            .expect("Fitting decomposition is direct");
        pk.push(inv.block(0, 0, kv.cols(), m.dims()[v]));
        pi.push(inv.block(kv.cols(), 0, iv.cols(), m.dims()[v]));
    }
    [
        Summand {
            projection: ModuleMap::new_unchecked(m.clone(), k.module.clone(), pk),
            module: k.module,
            inclusion: k.inclusion,
        },
        Summand {
            projection: ModuleMap::new_unchecked(m.clone(), i.module.clone(), pi),
            module: i.module,
            inclusion: i.inclusion,
        },
    ]
}

fn seed_for(m: &Module) -> u64 {
    // Deterministic seed from the module contents.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut mix = |x: u64| {
        h ^= x;
        h = h.wrapping_mul(0x0100_0000_01b3);
    };
    for &d in m.dims() {
        mix(d as u64);
    }
    for a in m.arrow_maps() {
        for &x in a.data() {
            mix(u64::from(x));
        }
    }
    h
}

/// Finds an endomorphism whose Fitting power splits `M`, if there is one.
fn find_splitting(m: &Module) -> Option<ModuleMap> {
    let basis = end_basis(m);
    let h = basis.len();
    if h <= 1 {
        return None;
    }
    let field = m.field();
    let p = field.p();
    let id = m.identity();
    let shifts: Vec<u32> = (1..p.min(5)).collect();
    let try_phi = |phi: &ModuleMap| -> Option<ModuleMap> {
        if let Kind::Splits(psi) = classify(phi) {
            return Some(psi);
        }
        for &l in &shifts {
            let shifted = phi.add(&id.scale(field.neg(l))).expect("same shape");
            if let Kind::Splits(psi) = classify(&shifted) {
                return Some(psi);
            }
        }
        None
    };

    for b in &basis {
        if let Some(psi) = try_phi(b) {
            return Some(psi);
        }
    }
    for i in 0..h {
        for j in i + 1..h {
            if let Some(psi) = try_phi(&basis[i].add(&basis[j]).expect("same shape")) {
                return Some(psi);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(m));
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<u32> = (0..h).map(|_| rng.gen_range(0..p)).collect();
        let phi = ModuleMap::combination(m, m, &basis, &coeffs);
        if let Some(psi) = try_phi(&phi) {
            return Some(psi);
        }
    }
    let total = u128::from(p).checked_pow(h as u32);
    if total.is_some_and(|t| t <= EXHAUSTIVE_CAP) {
        let mut coeffs = vec![0u32; h];
        loop {
            let phi = ModuleMap::combination(m, m, &basis, &coeffs);
            if let Kind::Splits(psi) = classify(&phi) {
                return Some(psi);
            }
            // odometer increment
            let mut k = 0;
            while k < h {
                coeffs[k] += 1;
                if coeffs[k] < p {
                    break;
                }
                coeffs[k] = 0;
                k += 1;
            }
            if k == h {
                break;
            }
        }
    }
    None
}

/// True iff `M` is nonzero and has a local endomorphism ring.
pub fn is_indecomposable(m: &Module) -> bool {
    !m.is_zero() && find_splitting(m).is_none()
}

/// Decomposes `M` into indecomposable summands with split inclusions and
/// projections satisfying `sum_i ι_i π_i = id`. The zero module has no summands.
pub fn decompose(m: &Module) -> Vec<Summand> {
    if m.is_zero() {
        return Vec::new();
    }
    match find_splitting(m) {
        None => vec![Summand {
            module: m.clone(),
            inclusion: m.identity(),
            projection: m.identity(),
        }],
        Some(psi) => {
            let mut out = Vec::new();
            for part in fitting_split(&psi) {
                for sub in decompose(&part.module) {
                    out.push(Summand {
                        inclusion: part.inclusion.after(&sub.inclusion).expect("compatible"),
                        projection: sub.projection.after(&part.projection).expect("compatible"),
                        module: sub.module,
                    });
                }
            }
            out
        }
    }
}

/// For indecomposable `Y` and arbitrary `X`: an isomorphism `X -> Y` if one exists.
///
/// With `End Y` local, `X ≅ Y` iff some composite `f ∘ g` of basis maps
/// `f: X -> Y`, `g: Y -> X` is not nilpotent. Such an `f` is a split
/// epimorphism, hence invertible when the dimensions agree.
pub fn indecomposable_iso(x: &Module, y: &Module) -> Result<Option<ModuleMap>> {
    x.check_same_algebra(y)?;
    if x.dims() != y.dims() {
        return Ok(None);
    }
    let fs = hom_basis(x, y)?;
    if fs.is_empty() {
        return Ok(None);
    }
    let gs = hom_basis(y, x)?;
    for f in &fs {
        if f.is_isomorphism() {
            return Ok(Some(f.clone()));
        }
    }
    for f in &fs {
        for g in &gs {
            let fg = f.after(g).expect("compatible");
            if !matches!(classify(&fg), Kind::Nilpotent) {
                if f.is_isomorphism() {
                    return Ok(Some(f.clone()));
                }
                return Err(crate::Error::Internal(
                    "non-nilpotent composite through a non-isomorphism; target not indecomposable"
                        .into(),
                ));
            }
        }
    }
    Ok(None)
}

/// An isomorphism `M -> N` if `M ≅ N`.
pub fn is_isomorphic(m: &Module, n: &Module) -> Result<Option<ModuleMap>> {
    m.check_same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(None);
    }
    if m == n {
        return Ok(Some(m.identity()));
    }
    let dm = decompose(m);
    let dn = decompose(n);
    if dm.len() != dn.len() {
        return Ok(None);
    }
    let mut used = vec![false; dn.len()];
    let mut witness = ModuleMap::zero(m, n);
    for x in &dm {
        let mut found = false;
        for (j, y) in dn.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(w) = indecomposable_iso(&x.module, &y.module)? {
                used[j] = true;
                let piece = y
                    .inclusion
                    .after(&w)
                    .and_then(|t| t.after(&x.projection))
                    .expect("compatible");
                witness = witness.add(&piece)?;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    debug_assert!(witness.is_isomorphism());
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::quivalg::fixtures;

    #[test]
    fn a2_examples() {
        let a = a2();
        let p1 = Module::projective(&a, 0);
        let parts = decompose(&p1.power(2));
        assert_eq!(parts.len(), 2);
        for s in &parts {
            assert!(is_isomorphic(&s.module, &p1).unwrap().is_some());
        }
        assert!(is_indecomposable(&a2_rep(&a, 1)));
        let split = decompose(&a2_rep(&a, 0));
        let mut dims: Vec<Vec<usize>> = split.iter().map(|s| s.module.dims().to_vec()).collect();
        dims.sort();
        assert_eq!(dims, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn iso_examples() {
        let a = a2();
        let p1 = Module::projective(&a, 0);
        let w = is_isomorphic(&p1, &p1).unwrap().unwrap();
        assert!(w.is_isomorphism());
        assert!(is_isomorphic(&Module::simple(&a, 0), &Module::simple(&a, 1)).unwrap().is_none());
        let ss = Module::sum(&[&Module::simple(&a, 0), &Module::simple(&a, 1)], &a);
        assert!(is_isomorphic(&p1, &ss).unwrap().is_none());
    }

    #[test]
    fn summands_reassemble() {
        let a = alg(fixtures::a3(3));
        let m = Module::sum(
            &[&Module::projective(&a, 0), &Module::simple(&a, 1), &Module::injective(&a, 1)],
            &a,
        );
        let parts = decompose(&m);
        assert_eq!(parts.len(), 3);
        let mut acc = ModuleMap::zero(&m, &m);
        for s in &parts {
            assert!(s.projection.after(&s.inclusion).unwrap().is_isomorphism());
            acc = acc.add(&s.inclusion.after(&s.projection).unwrap()).unwrap();
        }
        assert_eq!(acc, m.identity());
    }

    #[test]
    fn loop2_endomorphisms_are_local() {
        let a = alg(fixtures::loop2(3));
        let p = Module::projective(&a, 0);
        assert_eq!(end_basis(&p).len(), 2);
        assert!(is_indecomposable(&p));
        assert_eq!(decompose(&p.power(3)).len(), 3);
    }

    #[test]
    fn witness_for_twisted_copy() {
        let a = alg(fixtures::a2(5));
        let m = a2_rep(&a, 3);
        let n = a2_rep(&a, 1);
        let w = is_isomorphic(&m, &n).unwrap().unwrap();
        assert!(w.is_isomorphism());
        w.validate().unwrap();
    }
}
