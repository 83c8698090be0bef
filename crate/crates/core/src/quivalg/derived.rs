//! The two algebras attached to a vertex idempotent `e = sum_{v in E} e_v`:
//! the quotient `A/AeA` and the corner `eAe`.

use std::collections::BTreeMap;

use super::{Algebra, Arrow, Element, Path, Quiver, Relation};
use crate::error::{Error, Result};
use crate::exactlin::Mat;

fn set_label(vertex_set: &[usize], a: &Algebra) -> String {
    let names: Vec<&str> = vertex_set
        .iter()
        .map(|&v| a.quiver().vertices[v].as_str())
        .collect();
    names.join(",")
}

fn normalize_set(a: &Algebra, e: &[usize]) -> Result<Vec<usize>> {
    let mut e = e.to_vec();
    e.sort_unstable();
    e.dedup();
    if let Some(&v) = e.iter().find(|&&v| v >= a.num_vertices()) {
        return Err(Error::InvalidQuiver(format!("vertex index {v} out of range")));
    }
    Ok(e)
}

/// `A/AeA`, presented on the vertices outside `E`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: Algebra,
    /// Quotient vertex -> vertex of `A`.
    pub vertices: Vec<usize>,
    /// Quotient arrow -> arrow of `A`.
    pub arrows: Vec<usize>,
}

impl Quotient {
    /// True when `E` is every vertex and the quotient is the zero algebra.
    pub fn is_zero(&self) -> bool {
        self.algebra.num_vertices() == 0
    }

    /// Position of an `A`-vertex in the quotient, if it survives.
    pub fn vertex_of(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }
}

/// `eAe`, presented as a bound quiver algebra with weighted arrows.
#[derive(Debug, Clone)]
pub struct Corner {
    pub algebra: Algebra,
    /// Corner vertex -> vertex of `A`.
    pub vertices: Vec<usize>,
    /// Each corner arrow as an element of `A`.
    pub arrow_elements: Vec<Element>,
    /// Each corner basis element as an element of `A`.
    pub basis_elements: Vec<Element>,
    /// For corner vertices `(x, y)`: invertible matrix from coordinates of
    /// `e_x C e_y` to coordinates of `e_{v_x} A e_{v_y}`.
    pub block_iso: BTreeMap<(usize, usize), Mat>,
}

impl Corner {
    pub fn vertex_of(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }
}

impl Algebra {
    /// `A/AeA`: drop the vertices in `E`, keep the arrows between the others
    /// and delete relation terms passing through `E`.
    pub fn idempotent_quotient(&self, e: &[usize]) -> Result<Quotient> {
        let e = normalize_set(self, e)?;
        let q = self.quiver();
        let vertices: Vec<usize> = (0..self.num_vertices()).filter(|v| !e.contains(v)).collect();
        let new_v = |v: usize| vertices.iter().position(|&x| x == v);
        let arrows: Vec<usize> = (0..self.num_arrows())
            .filter(|&a| !e.contains(&q.arrows[a].source) && !e.contains(&q.arrows[a].target))
            .collect();
        let new_a = |a: usize| arrows.iter().position(|&x| x == a);

        let quiver = Quiver {
            vertices: vertices.iter().map(|&v| q.vertices[v].clone()).collect(),
            arrows: arrows
                .iter()
                .map(|&a| {
                    let ar = &q.arrows[a];
                    Arrow {
                        name: ar.name.clone(),
                        source: new_v(ar.source).unwrap(),
                        target: new_v(ar.target).unwrap(),
                        weight: ar.weight,
                    }
                })
                .collect(),
        };
        let mut relations = Vec::new();
        for r in self.relations() {
            let terms: Vec<(u32, Path)> = r
                .terms
                .iter()
                .filter_map(|(c, p)| {
                    let arrows: Option<Vec<usize>> = p.arrows.iter().map(|&a| new_a(a)).collect();
                    Some((
                        *c,
                        Path {
                            source: new_v(p.source)?,
                            target: new_v(p.target)?,
                            arrows: arrows?,
                        },
                    ))
                })
                .collect();
            if let Some((_, first)) = terms.first() {
                relations.push(Relation {
                    source: first.source,
                    target: first.target,
                    degree: r.degree,
                    terms,
                });
            }
        }
        let label = format!("{}/AeA[{}]", self.label(), set_label(&e, self));
        let algebra = Algebra::from_parts(label, self.field(), quiver, relations)?;
        Ok(Quotient {
            algebra,
            vertices,
            arrows,
        })
    }

    /// `eAe` as a bound quiver algebra. Arrows are a graded complement of
    /// `rad^2(eAe)` in `rad(eAe)`; relations are the kernels of evaluating
    /// corner paths in `A`, degree by degree.
    pub fn corner(&self, e: &[usize]) -> Result<Corner> {
        let e = normalize_set(self, e)?;
        let f = self.field();
        let q = self.quiver();
        let basis = self.basis();
        let deg = |i: usize| basis[i].degree(q);
        let max_deg = (0..self.dim()).map(deg).max().unwrap_or(0);

        // rad(eAe) per (x, y, degree): basis elements of positive length.
        let rad = |x: usize, y: usize, d: usize| -> Vec<usize> {
            self.block(e[x], e[y])
                .iter()
                .copied()
                .filter(|&i| !basis[i].is_trivial() && deg(i) == d)
                .collect()
        };

        let mut arrows: Vec<Arrow> = Vec::new();
        let mut arrow_elements: Vec<Element> = Vec::new();
        for x in 0..e.len() {
            for y in 0..e.len() {
                for d in 1..=max_deg {
                    let target = rad(x, y, d);
                    if target.is_empty() {
                        continue;
                    }
                    let pos = |i: usize| target.iter().position(|&t| t == i);
                    // Spanning set of rad^2 in this graded piece.
                    let mut cols: Vec<Vec<u32>> = Vec::new();
                    for z in 0..e.len() {
                        for d1 in 1..d {
                            for &i in &rad(x, z, d1) {
                                for &j in &rad(z, y, d - d1) {
                                    let prod = self.mul_basis(i, j);
                                    if prod.is_empty() {
                                        continue;
                                    }
                                    let mut v = vec![0; target.len()];
                                    for (k, c) in prod {
                                        v[pos(k).expect("homogeneous product")] = c;
                                    }
                                    cols.push(v);
                                }
                            }
                        }
                    }
                    // Greedily extend rad^2 by basis vectors.
                    let mut span = Mat::zeros(f, target.len(), 0);
                    for v in &cols {
                        span = Mat::hstack(&[&span, &Mat::column(f, v)], f, target.len());
                    }
                    let mut rank = span.rank();
                    for (k, &i) in target.iter().enumerate() {
                        let mut v = vec![0; target.len()];
                        v[k] = 1;
                        let cand = Mat::hstack(&[&span, &Mat::column(f, &v)], f, target.len());
                        let r = cand.rank();
                        if r > rank {
                            rank = r;
                            span = cand;
                            arrows.push(Arrow {
                                name: basis[i].render(q).replace('*', "."),
                                source: x,
                                target: y,
                                weight: d,
                            });
                            arrow_elements.push(vec![(i, 1)]);
                        }
                    }
                }
            }
        }

        let quiver = Quiver {
            vertices: e.iter().map(|&v| q.vertices[v].clone()).collect(),
            arrows,
        };
        let eval = |p: &Path| -> Element {
            let mut acc: Element = vec![(self.idempotent(e[p.source]), 1)];
            for &a in &p.arrows {
                acc = self.mul(&acc, &arrow_elements[a]);
            }
            acc
        };

        // Relations: kernels of evaluation on corner paths of each weight,
        // up to one arrow weight past the top degree of A.
        let max_w = quiver.arrows.iter().map(|a| a.weight).max().unwrap_or(1);
        let top = self.saturation() + max_w;
        let mut paths_by_weight: Vec<Vec<Path>> =
            vec![(0..e.len()).map(Path::trivial).collect()];
        let mut relations = Vec::new();
        for d in 1..top {
            let mut layer = Vec::new();
            for (ai, a) in quiver.arrows.iter().enumerate() {
                if a.weight > d {
                    continue;
                }
                for p in &paths_by_weight[d - a.weight] {
                    if p.target == a.source {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        layer.push(Path {
                            source: p.source,
                            target: a.target,
                            arrows,
                        });
                    }
                }
            }
            if layer.len() > super::MAX_PATHS_PER_DEGREE {
                return Err(Error::InfiniteDimensional(
                    "corner presentation exceeds the path cap".into(),
                ));
            }
            layer.sort();
            for x in 0..e.len() {
                for y in 0..e.len() {
                    let long: Vec<&Path> = layer
                        .iter()
                        .filter(|p| p.source == x && p.target == y && p.len() >= 2)
                        .collect();
                    if long.is_empty() {
                        continue;
                    }
                    let block = self.block(e[x], e[y]);
                    let mut m = Mat::zeros(f, block.len(), long.len());
                    for (c, p) in long.iter().enumerate() {
                        for (k, v) in eval(p) {
                            m.set(self.block_position(k), c, v);
                        }
                    }
                    for kv in m.kernel() {
                        let terms: Vec<(u32, Path)> = long
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| kv.get(i, 0) != 0)
                            .map(|(i, p)| (kv.get(i, 0), (*p).clone()))
                            .collect();
                        relations.push(Relation {
                            source: x,
                            target: y,
                            degree: d,
                            terms,
                        });
                    }
                }
            }
            paths_by_weight.push(layer);
        }

        let label = format!("e{}e[{}]", self.label(), set_label(&e, self));
        let algebra = Algebra::from_parts(label, f, quiver, relations)?;

        let basis_elements: Vec<Element> = algebra.basis().iter().map(&eval).collect();
        let mut block_iso = BTreeMap::new();
        for x in 0..e.len() {
            for y in 0..e.len() {
                let cb = algebra.block(x, y);
                let ab = self.block(e[x], e[y]);
                if cb.len() != ab.len() {
                    return Err(Error::Internal(format!(
                        "corner block ({x},{y}) has dimension {} but e A e has {}",
                        cb.len(),
                        ab.len()
                    )));
                }
                let mut m = Mat::zeros(f, ab.len(), cb.len());
                for (c, &i) in cb.iter().enumerate() {
                    for &(k, v) in &basis_elements[i] {
                        m.set(self.block_position(k), c, v);
                    }
                }
                if !m.is_invertible() {
                    return Err(Error::Internal("corner basis does not map onto eAe".into()));
                }
                block_iso.insert((x, y), m);
            }
        }
        Ok(Corner {
            algebra,
            vertices: e,
            arrow_elements,
            basis_elements,
            block_iso,
        })
    }

    /// The opposite algebra: arrows and relation paths reversed.
    pub fn opposite(&self) -> Result<Algebra> {
        let q = self.quiver();
        let quiver = Quiver {
            vertices: q.vertices.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    source: a.target,
                    target: a.source,
                    weight: a.weight,
                })
                .collect(),
        };
        let relations = self
            .relations()
            .iter()
            .map(|r| Relation {
                source: r.target,
                target: r.source,
                degree: r.degree,
                terms: r
                    .terms
                    .iter()
                    .map(|(c, p)| {
                        (
                            *c,
                            Path {
                                source: p.target,
                                target: p.source,
                                arrows: p.arrows.iter().rev().copied().collect(),
                            },
                        )
                    })
                    .collect(),
            })
            .collect();
        Algebra::from_parts(format!("{}^op", self.label()), self.field(), quiver, relations)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{fixtures, AlgebraSpec};
    use super::*;

    fn build(s: AlgebraSpec) -> Algebra {
        Algebra::build(&s).unwrap()
    }

    /// dim AeA computed directly as the span of all products `x e y`.
    fn dim_two_sided_ideal(a: &Algebra, e: &[usize]) -> usize {
        let f = a.field();
        let mut cols = Vec::new();
        for &v in e {
            let ev = a.idempotent(v);
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    let prod = a.mul(&a.mul_basis(i, ev), &vec![(j, 1)]);
                    let mut col = vec![0; a.dim()];
                    for (k, c) in prod {
                        col[k] = c;
                    }
                    cols.push(Mat::column(f, &col));
                }
            }
        }
        let refs: Vec<&Mat> = cols.iter().collect();
        Mat::hstack(&refs, f, a.dim()).rank()
    }

    fn dim_corner_direct(a: &Algebra, e: &[usize]) -> usize {
        e.iter()
            .flat_map(|&x| e.iter().map(move |&y| (x, y)))
            .map(|(x, y)| a.block_dim(x, y))
            .sum()
    }

    #[test]
    fn a2_quotients_and_corners() {
        let a = build(fixtures::a2(2));
        let q = a.idempotent_quotient(&[1]).unwrap();
        assert_eq!((q.algebra.dim(), q.vertices.clone()), (1, vec![0]));
        let q = a.idempotent_quotient(&[0]).unwrap();
        assert_eq!((q.algebra.dim(), q.vertices.clone()), (1, vec![1]));
        let q = a.idempotent_quotient(&[0, 1]).unwrap();
        assert!(q.is_zero());
        assert_eq!(q.algebra.dim(), 0);
        for e in [vec![0], vec![1]] {
            assert_eq!(a.corner(&e).unwrap().algebra.dim(), 1);
        }
        let c = a.corner(&[0, 1]).unwrap();
        assert_eq!(c.algebra.dim(), 3);
        assert_eq!(c.algebra.num_arrows(), 1);
    }

    #[test]
    fn prod_corner_at_isolated_vertex() {
        let a = build(fixtures::prod(2));
        let c = a.corner(&[2]).unwrap();
        assert_eq!(c.algebra.dim(), 1);
        let q = a.idempotent_quotient(&[2]).unwrap();
        assert_eq!(q.algebra.dim(), 3);
    }

    #[test]
    fn corner_of_a3_at_ends_has_weighted_arrow() {
        let a = build(fixtures::a3(3));
        let c = a.corner(&[0, 2]).unwrap();
        assert_eq!(c.algebra.dim(), 3);
        assert_eq!(c.algebra.quiver().arrows[0].weight, 2);
        // With a*b = 0 the corner at {1,3} is semisimple.
        let spec = fixtures::a3(3).relation(&[(1, "a*b")]);
        let a = build(spec);
        assert_eq!(a.dim(), 5);
        let c = a.corner(&[0, 2]).unwrap();
        assert_eq!(c.algebra.dim(), 2);
        assert_eq!(c.algebra.num_arrows(), 0);
    }

    #[test]
    fn corner_with_relations_from_truncation() {
        // Loop y at 2 with 1 -> 2 -> 1: corner at 1 is k[t]/(t^2) with t = a*b.
        let spec = AlgebraSpec::new("L", 2)
            .vertex("1")
            .vertex("2")
            .arrow("a", "1", "2")
            .arrow("b", "2", "1")
            .relation(&[(1, "b*a")])
            .relation(&[(1, "a*b*a*b")]);
        let a = build(spec);
        let c = a.corner(&[0]).unwrap();
        assert_eq!(c.algebra.dim(), dim_corner_direct(&a, &[0]));
        assert_eq!(c.algebra.dim(), 1 + a.block_dim(0, 0) - 1);
    }

    #[test]
    fn dimension_additivity() {
        let specs = [
            fixtures::a2(2),
            fixtures::a3(2),
            fixtures::loop2(2),
            fixtures::prod(2),
            fixtures::a3(3).relation(&[(1, "a*b")]),
        ];
        for s in specs {
            let a = build(s);
            let n = a.num_vertices();
            for mask in 1u32..(1 << n) {
                let e: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                let q = a.idempotent_quotient(&e).unwrap();
                assert_eq!(q.algebra.dim() + dim_two_sided_ideal(&a, &e), a.dim());
                let c = a.corner(&e).unwrap();
                assert_eq!(c.algebra.dim(), dim_corner_direct(&a, &e));
            }
        }
    }

    #[test]
    fn opposite_swaps_blocks() {
        let a = build(fixtures::a3(2).relation(&[(1, "a*b")]));
        let o = a.opposite().unwrap();
        assert_eq!(o.dim(), a.dim());
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(o.block_dim(u, v), a.block_dim(v, u));
            }
        }
    }
}
