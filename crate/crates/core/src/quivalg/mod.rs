//! Bound quiver algebras `kQ/I` with homogeneous admissible relations.
//!
//! Conventions used throughout the crate:
//!
//! - Paths compose left to right: the word `a*b` means "first `a`, then `b`".
//! - Modules are right modules, i.e. representations assigning to an arrow
//!   `a: u -> v` a linear map `M_u -> M_v`.
//! - Arrows carry a positive weight (1 for everything parsed from text). The
//!   weighted length grades `kQ`, relations must be homogeneous for it, and
//!   the ideal is computed degree by degree. Weights other than 1 only arise
//!   when presenting a corner algebra `eAe`.

mod derived;
mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat};

pub use derived::{Corner, Quotient};

/// Degree bound after which an unsaturated algebra is declared infinite-dimensional.
pub const MAX_DEGREE: usize = 64;
/// Bound on the number of paths of a single degree.
pub const MAX_PATHS_PER_DEGREE: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

/// A path in the quiver. Trivial paths have no arrows and `source == target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Self {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `other`, if composable.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        (self.target == other.source).then(|| {
            let mut arrows = self.arrows.clone();
            arrows.extend_from_slice(&other.arrows);
            Path {
                source: self.source,
                target: other.target,
                arrows,
            }
        })
    }

    pub fn degree(&self, quiver: &Quiver) -> usize {
        self.arrows.iter().map(|&a| quiver.arrows[a].weight).sum()
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e{}", quiver.vertices[self.source])
        } else {
            self.arrows
                .iter()
                .map(|&a| quiver.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// A linear combination of parallel paths of equal degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub source: usize,
    pub target: usize,
    pub degree: usize,
    pub terms: Vec<(u32, Path)>,
}

/// A sparse element of the algebra in the path basis: `(basis index, coefficient)`.
pub type Element = Vec<(usize, u32)>;

/// Input description of an algebra; built into an [`Algebra`] by [`Algebra::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub label: String,
    pub field: u32,
    pub vertices: Vec<String>,
    /// `(name, source, target, weight)`
    pub arrows: Vec<(String, String, String, usize)>,
    /// Each relation is a list of `(coefficient, arrow word)`.
    pub relations: Vec<Vec<(i64, Vec<String>)>>,
}

impl AlgebraSpec {
    pub fn new(label: impl Into<String>, field: u32) -> Self {
        Self {
            label: label.into(),
            field,
            vertices: Vec::new(),
            arrows: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn vertex(mut self, v: impl Into<String>) -> Self {
        self.vertices.push(v.into());
        self
    }

    pub fn arrow(mut self, name: &str, source: &str, target: &str) -> Self {
        self.arrows
            .push((name.into(), source.into(), target.into(), 1));
        self
    }

    /// Adds a relation from `(coefficient, "a*b*c")` terms.
    pub fn relation(mut self, terms: &[(i64, &str)]) -> Self {
        self.relations.push(
            terms
                .iter()
                .map(|(c, w)| (*c, w.split('*').map(|s| s.trim().to_string()).collect()))
                .collect(),
        );
        self
    }

    /// Parses the line-oriented algebra format (see [`parse`](Self::parse_text)).
    pub fn parse_text(text: &str) -> Result<Self> {
        parse::parse_algebra(text, 0)
    }

    /// Same as [`parse_text`](Self::parse_text) with line numbers offset, for
    /// algebras embedded in a larger document.
    pub fn parse_text_at(text: &str, first_line: usize) -> Result<Self> {
        parse::parse_algebra(text, first_line)
    }
}

#[derive(Debug, Clone)]
struct PairBlock {
    /// Basis indices of the standard paths from `u` to `v`, in basis order.
    basis: Vec<usize>,
}

/// A finite-dimensional basic algebra `kQ/I`.
#[derive(Clone)]
pub struct Algebra {
    label: String,
    field: Field,
    quiver: Quiver,
    relations: Vec<Relation>,
    basis: Vec<Path>,
    /// Normal form of every path of degree below `saturation`.
    normal_forms: HashMap<Path, Element>,
    /// All paths of degree `>= saturation` lie in the ideal.
    saturation: usize,
    blocks: BTreeMap<(usize, usize), PairBlock>,
    /// Position of each basis element inside its `(source, target)` block.
    block_position: Vec<usize>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("label", &self.label)
            .field("field", &self.field)
            .field("vertices", &self.quiver.vertices)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.quiver == other.quiver && self.relations == other.relations
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Builds the algebra: enumerates paths degree by degree, reduces modulo
    /// the ideal generated by the relations, and stops once `max weight`
    /// consecutive degrees contain no surviving path.
    pub fn build(spec: &AlgebraSpec) -> Result<Self> {
        let field = Field::new(spec.field)?;
        let quiver = validate_quiver(spec)?;
        let relations = spec
            .relations
            .iter()
            .map(|r| resolve_relation(&quiver, field, r))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Self::from_parts(spec.label.clone(), field, quiver, relations)
    }

    pub(crate) fn from_parts(
        label: String,
        field: Field,
        quiver: Quiver,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        let n = quiver.vertices.len();
        let max_weight = quiver.arrows.iter().map(|a| a.weight).max().unwrap_or(1);

        let mut paths_by_degree: Vec<Vec<Path>> = vec![(0..n).map(Path::trivial).collect()];
        let mut normal_forms: HashMap<Path, Element> = HashMap::new();
        let mut basis: Vec<Path> = Vec::new();
        // Reductions are recorded against standard paths first, then re-indexed
        // once the basis order is known.
        let mut pending: Vec<(Path, Vec<(Path, u32)>)> = Vec::new();

        let mut empty_run = 0;
        let mut saturation = None;
        for d in 0..=MAX_DEGREE + max_weight {
            if d > 0 {
                let mut layer = Vec::new();
                for (ai, a) in quiver.arrows.iter().enumerate() {
                    if a.weight > d {
                        continue;
                    }
                    for q in &paths_by_degree[d - a.weight] {
                        if q.target == a.source {
                            let mut arrows = q.arrows.clone();
                            arrows.push(ai);
                            layer.push(Path {
                                source: q.source,
                                target: a.target,
                                arrows,
                            });
                        }
                    }
                }
                if layer.len() > MAX_PATHS_PER_DEGREE {
                    return Err(Error::InfiniteDimensional(format!(
                        "{} paths of degree {d} exceed the cap of {MAX_PATHS_PER_DEGREE}",
                        layer.len()
                    )));
                }
                layer.sort();
                paths_by_degree.push(layer);
            }

            let layer = &paths_by_degree[d];
            let mut standard_count = 0;
            let mut by_pair: BTreeMap<(usize, usize), Vec<&Path>> = BTreeMap::new();
            for p in layer {
                by_pair.entry((p.source, p.target)).or_default().push(p);
            }
            for ((u, v), paths) in by_pair {
                let generators = ideal_generators(&relations, &paths_by_degree, d, u, v);
                // Columns ordered with the largest path first so pivots land on
                // large paths and the smallest ones survive as standard.
                let cols: Vec<&Path> = paths.iter().rev().copied().collect();
                let col_of: HashMap<&Path, usize> =
                    cols.iter().enumerate().map(|(i, p)| (*p, i)).collect();
                let mut m = Mat::zeros(field, generators.len(), cols.len());
                for (r, g) in generators.iter().enumerate() {
                    for (c, p) in g {
                        let j = col_of[p];
                        let cur = m.get(r, j);
                        m.set(r, j, field.add(cur, *c));
                    }
                }
                let (red, piv) = m.rref();
                let mut is_pivot = vec![false; cols.len()];
                for &c in &piv {
                    is_pivot[c] = true;
                }
                for (j, p) in cols.iter().enumerate() {
                    if !is_pivot[j] {
                        standard_count += 1;
                        pending.push(((*p).clone(), vec![((*p).clone(), 1)]));
                    }
                }
                for (row, &pc) in piv.iter().enumerate() {
                    let mut nf = Vec::new();
                    for (j, p) in cols.iter().enumerate() {
                        if !is_pivot[j] {
                            let c = red.get(row, j);
                            if c != 0 {
                                nf.push(((*p).clone(), field.neg(c)));
                            }
                        }
                    }
                    pending.push((cols[pc].clone(), nf));
                }
                for (j, p) in cols.iter().enumerate() {
                    if !is_pivot[j] {
                        basis.push((*p).clone());
                    }
                }
            }

            if standard_count == 0 {
                empty_run += 1;
                if empty_run >= max_weight {
                    saturation = Some(d + 1 - max_weight);
                    break;
                }
            } else {
                empty_run = 0;
            }
        }
        let Some(saturation) = saturation else {
            return Err(Error::InfiniteDimensional(format!(
                "paths of length {MAX_DEGREE} still survive modulo the relations \
                 (a cycle without relations?)"
            )));
        };

        basis.sort_by(|a, b| {
            (a.degree(&quiver), a.source, a.target, &a.arrows).cmp(&(
                b.degree(&quiver),
                b.source,
                b.target,
                &b.arrows,
            ))
        });
        let index: HashMap<&Path, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
        for (p, nf) in pending {
            if p.degree(&quiver) >= saturation {
                continue;
            }
            let mut el: Element = nf.iter().map(|(q, c)| (index[q], *c)).collect();
            el.sort();
            normal_forms.insert(p, el);
        }

        let mut blocks: BTreeMap<(usize, usize), PairBlock> = BTreeMap::new();
        let mut block_position = vec![0; basis.len()];
        for (i, p) in basis.iter().enumerate() {
            let b = blocks
                .entry((p.source, p.target))
                .or_insert_with(|| PairBlock { basis: Vec::new() });
            block_position[i] = b.basis.len();
            b.basis.push(i);
        }

        Ok(Self {
            label,
            field,
            quiver,
            relations,
            basis,
            normal_forms,
            saturation,
            blocks,
            block_position,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.quiver.arrows.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn saturation(&self) -> usize {
        self.saturation
    }

    /// Basis indices of the standard paths from `u` to `v` (i.e. a basis of `e_u A e_v`).
    pub fn block(&self, u: usize, v: usize) -> &[usize] {
        self.blocks
            .get(&(u, v))
            .map_or(&[][..], |b| b.basis.as_slice())
    }

    pub fn block_dim(&self, u: usize, v: usize) -> usize {
        self.block(u, v).len()
    }

    /// Position of basis element `i` within its `(source, target)` block.
    pub fn block_position(&self, i: usize) -> usize {
        self.block_position[i]
    }

    /// Normal form of an arbitrary path.
    pub fn reduce(&self, p: &Path) -> Element {
        if p.degree(&self.quiver) >= self.saturation {
            return Vec::new();
        }
        self.normal_forms.get(p).cloned().unwrap_or_default()
    }

    pub fn mul_paths(&self, p: &Path, q: &Path) -> Element {
        match p.concat(q) {
            Some(pq) => self.reduce(&pq),
            None => Vec::new(),
        }
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Element {
        self.mul_paths(&self.basis[i], &self.basis[j])
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let f = self.field;
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for &(i, a) in x {
            for &(j, b) in y {
                for (k, c) in self.mul_basis(i, j) {
                    let e = acc.entry(k).or_insert(0);
                    *e = f.add(*e, f.mul(f.mul(a, b), c));
                }
            }
        }
        acc.into_iter().filter(|&(_, c)| c != 0).collect()
    }

    /// The basis index of the trivial path at `v`.
    pub fn idempotent(&self, v: usize) -> usize {
        self.reduce(&Path::trivial(v))[0].0
    }

    /// Structure constants `b_i * b_j = sum_k c_ijk b_k` as a dense table.
    pub fn mult_table(&self) -> Vec<Vec<Element>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.mul_basis(i, j)).collect())
            .collect()
    }

    /// Matrix of right multiplication by arrow `a` from `e_u A e_{s(a)}` to `e_u A e_{t(a)}`.
    pub fn right_mult_matrix(&self, u: usize, a: usize) -> Mat {
        let arrow = &self.quiver.arrows[a];
        let src = self.block(u, arrow.source);
        let tgt_dim = self.block_dim(u, arrow.target);
        let mut m = Mat::zeros(self.field, tgt_dim, src.len());
        let ap = Path {
            source: arrow.source,
            target: arrow.target,
            arrows: vec![a],
        };
        for (col, &b) in src.iter().enumerate() {
            for (k, c) in self.mul_paths(&self.basis[b], &ap) {
                m.set(self.block_position[k], col, c);
            }
        }
        m
    }

    /// Matrix of left multiplication by an element `x in e_u A e_w` as a map
    /// `e_w A e_v -> e_u A e_v`.
    pub fn left_mult_matrix(&self, x: &Element, u: usize, w: usize, v: usize) -> Mat {
        let src = self.block(w, v);
        let tgt_dim = self.block_dim(u, v);
        let mut m = Mat::zeros(self.field, tgt_dim, src.len());
        for (col, &b) in src.iter().enumerate() {
            for (k, c) in self.mul(x, &vec![(b, 1)]) {
                debug_assert_eq!((self.basis[k].source, self.basis[k].target), (u, v));
                m.set(self.block_position[k], col, c);
            }
        }
        m
    }

    /// Matrix of right multiplication by `x in e_w A e_v` as a map `e_u A e_w -> e_u A e_v`.
    pub fn right_mult_element(&self, x: &Element, u: usize, w: usize, v: usize) -> Mat {
        let src = self.block(u, w);
        let tgt_dim = self.block_dim(u, v);
        let mut m = Mat::zeros(self.field, tgt_dim, src.len());
        for (col, &b) in src.iter().enumerate() {
            for (k, c) in self.mul(&vec![(b, 1)], x) {
                m.set(self.block_position[k], col, c);
            }
        }
        m
    }

    /// A stable textual description, used for hashing and reports.
    pub fn describe(&self) -> String {
        let mut s = format!("field={};vertices=", self.field.p());
        s.push_str(&self.quiver.vertices.join(","));
        s.push_str(";arrows=");
        let arrows: Vec<String> = self
            .quiver
            .arrows
            .iter()
            .map(|a| {
                format!(
                    "{}:{}->{}/{}",
                    a.name, self.quiver.vertices[a.source], self.quiver.vertices[a.target], a.weight
                )
            })
            .collect();
        s.push_str(&arrows.join(","));
        s.push_str(";relations=");
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| {
                r.terms
                    .iter()
                    .map(|(c, p)| format!("{c}{}", p.render(&self.quiver)))
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect();
        s.push_str(&rels.join(","));
        s
    }
}

fn validate_quiver(spec: &AlgebraSpec) -> Result<Quiver> {
    let mut vertices = Vec::new();
    for v in &spec.vertices {
        if vertices.contains(v) {
            return Err(Error::InvalidQuiver(format!("duplicate vertex {v:?}")));
        }
        vertices.push(v.clone());
    }
    let mut arrows: Vec<Arrow> = Vec::new();
    for (name, s, t, w) in &spec.arrows {
        if arrows.iter().any(|a| &a.name == name) {
            return Err(Error::InvalidQuiver(format!("duplicate arrow {name:?}")));
        }
        let find = |v: &str| {
            vertices
                .iter()
                .position(|x| x == v)
                .ok_or_else(|| Error::InvalidQuiver(format!("arrow {name:?} uses undeclared vertex {v:?}")))
        };
        if *w == 0 {
            return Err(Error::InvalidQuiver(format!("arrow {name:?} has weight 0")));
        }
        arrows.push(Arrow {
            name: name.clone(),
            source: find(s)?,
            target: find(t)?,
            weight: *w,
        });
    }
    Ok(Quiver { vertices, arrows })
}

/// Resolves a relation; returns `None` for a relation whose coefficients all vanish.
fn resolve_relation(
    quiver: &Quiver,
    field: Field,
    terms: &[(i64, Vec<String>)],
) -> Result<Option<Relation>> {
    let mut acc: BTreeMap<Path, u32> = BTreeMap::new();
    for (c, word) in terms {
        let mut arrows = Vec::new();
        for name in word {
            let a = quiver
                .arrow_index(name)
                .ok_or_else(|| Error::InvalidQuiver(format!("unknown arrow {name:?} in relation")))?;
            arrows.push(a);
        }
        let Some(&first) = arrows.first() else {
            return Err(Error::NotAdmissible("empty path in relation".into()));
        };
        for w in arrows.windows(2) {
            if quiver.arrows[w[0]].target != quiver.arrows[w[1]].source {
                return Err(Error::InvalidQuiver(format!(
                    "word {} is not a path",
                    word.join("*")
                )));
            }
        }
        if arrows.len() < 2 {
            return Err(Error::NotAdmissible(format!(
                "term {} has length {} (relations must lie in the square of the arrow ideal)",
                word.join("*"),
                arrows.len()
            )));
        }
        let path = Path {
            source: quiver.arrows[first].source,
            target: quiver.arrows[*arrows.last().unwrap()].target,
            arrows,
        };
        let e = acc.entry(path).or_insert(0);
        *e = field.add(*e, field.from_i64(*c));
    }
    let terms: Vec<(u32, Path)> = acc
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(p, c)| (c, p))
        .collect();
    let Some((_, first)) = terms.first() else {
        return Ok(None);
    };
    let (source, target, degree) = (first.source, first.target, first.degree(quiver));
    for (_, p) in &terms {
        if (p.source, p.target) != (source, target) {
            return Err(Error::NotAdmissible(
                "relation mixes non-parallel paths".into(),
            ));
        }
        if p.degree(quiver) != degree {
            return Err(Error::NotAdmissible(
                "relation is not homogeneous in path length; only homogeneous relations are supported"
                    .into(),
            ));
        }
    }
    Ok(Some(Relation {
        source,
        target,
        degree,
        terms,
    }))
}

/// Spanning set of `I_d(u, v)`: all `p * r * q` of total degree `d`.
fn ideal_generators(
    relations: &[Relation],
    paths_by_degree: &[Vec<Path>],
    d: usize,
    u: usize,
    v: usize,
) -> Vec<Vec<(u32, Path)>> {
    let mut out = Vec::new();
    for r in relations {
        if r.degree > d {
            continue;
        }
        for i in 0..=d - r.degree {
            let j = d - r.degree - i;
            for p in paths_by_degree[i]
                .iter()
                .filter(|p| p.source == u && p.target == r.source)
            {
                for q in paths_by_degree[j]
                    .iter()
                    .filter(|q| q.source == r.target && q.target == v)
                {
                    out.push(
                        r.terms
                            .iter()
                            .map(|(c, t)| {
                                let pt = p.concat(t).expect("composable");
                                (*c, pt.concat(q).expect("composable"))
                            })
                            .collect(),
                    );
                }
            }
        }
    }
    out
}

/// Standard fixtures used across tests, examples and the acceptance suite.
pub mod fixtures {
    use super::AlgebraSpec;

    /// Path algebra of `1 -> 2`.
    pub fn a2(p: u32) -> AlgebraSpec {
        AlgebraSpec::new("A2", p)
            .vertex("1")
            .vertex("2")
            .arrow("a", "1", "2")
    }

    /// Path algebra of `1 -> 2 -> 3`.
    pub fn a3(p: u32) -> AlgebraSpec {
        AlgebraSpec::new("A3", p)
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .arrow("a", "1", "2")
            .arrow("b", "2", "3")
    }

    /// `k[x]/(x^2)`.
    pub fn loop2(p: u32) -> AlgebraSpec {
        AlgebraSpec::new("LOOP2", p)
            .vertex("1")
            .arrow("x", "1", "1")
            .relation(&[(1, "x*x")])
    }

    /// `A2 x k`: the quiver `1 -> 2` plus an isolated vertex `3`.
    pub fn prod(p: u32) -> AlgebraSpec {
        AlgebraSpec::new("PROD", p)
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .arrow("a", "1", "2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rendered_basis(a: &Algebra) -> Vec<String> {
        a.basis().iter().map(|p| p.render(a.quiver())).collect()
    }

    #[test]
    fn a2_has_three_paths() {
        let a = Algebra::build(&fixtures::a2(2)).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(rendered_basis(&a), vec!["e1", "e2", "a"]);
    }

    #[test]
    fn loop2_truncates_at_x_squared() {
        let a = Algebra::build(&fixtures::loop2(2)).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(rendered_basis(&a), vec!["e1", "x"]);
        let x = a.quiver().arrow_index("x").unwrap();
        let xp = Path {
            source: 0,
            target: 0,
            arrows: vec![x],
        };
        assert!(a.mul_paths(&xp, &xp).is_empty());
    }

    #[test]
    fn unrelated_two_cycle_is_infinite() {
        let spec = AlgebraSpec::new("C2", 2)
            .vertex("1")
            .vertex("2")
            .arrow("a", "1", "2")
            .arrow("b", "2", "1");
        assert!(matches!(
            Algebra::build(&spec),
            Err(Error::InfiniteDimensional(_))
        ));
    }

    #[test]
    fn two_cycle_with_zero_relations() {
        let spec = AlgebraSpec::new("C2", 3)
            .vertex("1")
            .vertex("2")
            .arrow("a", "1", "2")
            .arrow("b", "2", "1")
            .relation(&[(1, "a*b")])
            .relation(&[(1, "b*a")]);
        let a = Algebra::build(&spec).unwrap();
        assert_eq!(a.dim(), 4);
    }

    #[test]
    fn commutative_square() {
        // 1 -> 2 -> 4, 1 -> 3 -> 4 with a*b = c*d: dim = 4 + 4 + 1.
        let spec = AlgebraSpec::new("SQ", 3)
            .vertex("1")
            .vertex("2")
            .vertex("3")
            .vertex("4")
            .arrow("a", "1", "2")
            .arrow("b", "2", "4")
            .arrow("c", "1", "3")
            .arrow("d", "3", "4")
            .relation(&[(1, "a*b"), (-1, "c*d")]);
        let a = Algebra::build(&spec).unwrap();
        assert_eq!(a.dim(), 9);
        let ab = a.reduce(&Path {
            source: 0,
            target: 3,
            arrows: vec![0, 1],
        });
        let cd = a.reduce(&Path {
            source: 0,
            target: 3,
            arrows: vec![2, 3],
        });
        assert_eq!(ab, cd);
        assert_eq!(ab.len(), 1);
    }

    #[test]
    fn rejects_length_one_terms_and_bad_quivers() {
        let spec = fixtures::a2(2).arrow("b", "1", "2").relation(&[(1, "a"), (1, "b")]);
        assert!(matches!(Algebra::build(&spec), Err(Error::NotAdmissible(_))));
        let spec = AlgebraSpec::new("X", 2).vertex("1").arrow("a", "1", "9");
        assert!(matches!(Algebra::build(&spec), Err(Error::InvalidQuiver(_))));
        let spec = AlgebraSpec::new("X", 2).vertex("1").vertex("1");
        assert!(matches!(Algebra::build(&spec), Err(Error::InvalidQuiver(_))));
    }

    #[test]
    fn rejects_inhomogeneous_relations() {
        let spec = AlgebraSpec::new("X", 2)
            .vertex("1")
            .arrow("x", "1", "1")
            .relation(&[(1, "x*x"), (1, "x*x*x")]);
        assert!(matches!(Algebra::build(&spec), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn multiplication_is_associative() {
        for spec in [fixtures::a3(2), fixtures::loop2(3), fixtures::prod(2)] {
            let a = Algebra::build(&spec).unwrap();
            let n = a.dim();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let l = a.mul(&a.mul_basis(i, j), &vec![(k, 1)]);
                        let r = a.mul(&vec![(i, 1)], &a.mul_basis(j, k));
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn idempotents_sum_to_unit() {
        let a = Algebra::build(&fixtures::a3(2)).unwrap();
        let one: Element = (0..3).map(|v| (a.idempotent(v), 1)).collect();
        for i in 0..a.dim() {
            assert_eq!(a.mul(&one, &vec![(i, 1)]), vec![(i, 1)]);
            assert_eq!(a.mul(&vec![(i, 1)], &one), vec![(i, 1)]);
        }
    }
}
