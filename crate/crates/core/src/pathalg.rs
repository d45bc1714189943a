//! Bound quiver algebras `F_p Q / I` given by a quiver, parallel relations and a
//! user-supplied nilpotency bound `N`.
//!
//! Paths are written in traversal order: `[a, b]` means "first `a`, then `b`", so
//! `target(a) == source(b)`. The ideal is computed modulo paths of length `> N`;
//! admissibility is certified by checking that every path of length `N` lies in it.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{Field, Matrix, Subspace};

/// Upper limit on the number of paths of length `<= N`.
pub const MAX_PATHS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("arrow `{name}` has an endpoint outside 0..{vertices}")]
    VertexOutOfRange { name: String, vertices: usize },
    #[error("duplicate arrow name `{0}`")]
    DuplicateArrow(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows {0:?} do not compose to a path")]
    NotAPath(Vec<String>),
    #[error("relation {index} contains a path of length {length}; admissible relations need length >= 2")]
    RelationTooShort { index: usize, length: usize },
    #[error("relation {index} mixes paths with different endpoints")]
    NotHomogeneousRelation { index: usize },
    #[error("relation {index} has no terms")]
    EmptyRelation { index: usize },
    #[error("nilpotency bound must be at least 1")]
    ZeroNilpotencyBound,
    #[error("path {path} of length {bound} survives the relations; the ideal is not admissible for this bound")]
    NotAdmissible { path: String, bound: usize },
    #[error("more than {MAX_PATHS} paths of length <= {bound}")]
    TooManyPaths { bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<Arrow>) -> Result<Self, AlgebraError> {
        let mut seen = std::collections::HashSet::new();
        for a in &arrows {
            if a.source >= vertices || a.target >= vertices {
                return Err(AlgebraError::VertexOutOfRange {
                    name: a.name.clone(),
                    vertices,
                });
            }
            if !seen.insert(a.name.as_str()) {
                return Err(AlgebraError::DuplicateArrow(a.name.clone()));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Resolve a sequence of arrow names into a path. An empty sequence is not a
    /// path here (trivial paths need a vertex); callers use [`Path::trivial`].
    pub fn path(&self, names: &[String]) -> Result<Path, AlgebraError> {
        let idx = names
            .iter()
            .map(|n| self.arrow_index(n).ok_or_else(|| AlgebraError::UnknownArrow(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.path_from_indices(idx)
            .ok_or_else(|| AlgebraError::NotAPath(names.to_vec()))
    }

    pub fn path_from_indices(&self, arrows: Vec<usize>) -> Option<Path> {
        let first = *arrows.first()?;
        for w in arrows.windows(2) {
            if self.arrows[w[0]].target != self.arrows[w[1]].source {
                return None;
            }
        }
        Some(Path {
            source: self.arrows[first].source,
            target: self.arrows[*arrows.last().unwrap()].target,
            arrows,
        })
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e{}", p.source);
        }
        p.arrows
            .iter()
            .map(|&a| self.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: self.source,
            target: other.target,
            arrows,
        })
    }
}

/// A linear combination of parallel paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(u64, Path)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    pub relations: Vec<Relation>,
    pub nilpotency_bound: usize,
}

impl RelationSet {
    pub fn new(relations: Vec<Relation>, nilpotency_bound: usize) -> Self {
        RelationSet {
            relations,
            nilpotency_bound,
        }
    }

    /// Check the two admissibility conditions that do not need the ideal itself.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        if self.nilpotency_bound == 0 {
            return Err(AlgebraError::ZeroNilpotencyBound);
        }
        for (index, r) in self.relations.iter().enumerate() {
            let Some((_, first)) = r.terms.first() else {
                return Err(AlgebraError::EmptyRelation { index });
            };
            for (_, p) in &r.terms {
                if p.len() < 2 {
                    return Err(AlgebraError::RelationTooShort {
                        index,
                        length: p.len(),
                    });
                }
                if (p.source, p.target) != (first.source, first.target) {
                    return Err(AlgebraError::NotHomogeneousRelation { index });
                }
            }
        }
        Ok(())
    }
}

/// A finite-dimensional basic algebra with a basis of normal-form paths.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    quiver: Quiver,
    relations: RelationSet,
    bound: usize,
    basis: Vec<Path>,
    index_of: HashMap<Path, usize>,
    by_endpoints: Vec<Vec<Vec<usize>>>,
    /// Normal form of every path of length `<= N`, as sparse basis coordinates.
    normal_forms: HashMap<Path, Vec<(usize, u64)>>,
    /// `mult[i][j]` = basis_i followed by basis_j.
    mult: Vec<Vec<Vec<(usize, u64)>>>,
}

pub fn build_algebra(quiver: Quiver, relations: &RelationSet, field: Field) -> Result<Algebra, AlgebraError> {
    relations.validate()?;
    let bound = relations.nilpotency_bound;

    let paths = all_paths(&quiver, bound)?;
    let mut order: Vec<Path> = paths.clone();
    // longest paths first so that elimination pivots on them and shorter paths survive as normal forms
    order.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let column: HashMap<&Path, usize> = order.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = order.len();

    let mut generators: Vec<Vec<u64>> = Vec::new();
    for r in &relations.relations {
        let (s, t) = (r.terms[0].1.source, r.terms[0].1.target);
        let min_len = r.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0);
        for u in paths.iter().filter(|u| u.target == s && u.len() + min_len <= bound) {
            for v in paths.iter().filter(|v| v.source == t && u.len() + min_len + v.len() <= bound) {
                let mut g = vec![0u64; n];
                for (c, p) in &r.terms {
                    let full = u.then(p).and_then(|up| up.then(v)).expect("parallel");
                    if full.len() <= bound {
                        let col = column[&full];
                        g[col] = field.add(g[col], *c);
                    }
                }
                if g.iter().any(|&x| x != 0) {
                    generators.push(g);
                }
            }
        }
    }
    let ideal = Subspace::span(field, n, &generators);

    for p in order.iter().filter(|p| p.len() == bound) {
        let mut e = vec![0; n];
        e[column[p]] = 1;
        if !ideal.contains(&e) {
            return Err(AlgebraError::NotAdmissible {
                path: quiver.path_name(p),
                bound,
            });
        }
    }

    let pivots: std::collections::HashSet<usize> = ideal.pivots().iter().copied().collect();
    let mut basis: Vec<Path> = order
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivots.contains(i))
        .map(|(_, p)| p.clone())
        .collect();
    basis.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index_of: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

    let mut normal_forms = HashMap::new();
    for p in &order {
        let mut e = vec![0; n];
        e[column[p]] = 1;
        let rem = ideal.reduce(&e);
        let nf: Vec<(usize, u64)> = rem
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(col, &c)| (index_of[&order[col]], c))
            .collect();
        normal_forms.insert(p.clone(), nf);
    }

    let nv = quiver.vertices();
    let mut by_endpoints = vec![vec![Vec::new(); nv]; nv];
    for (i, p) in basis.iter().enumerate() {
        by_endpoints[p.source][p.target].push(i);
    }

    let mut alg = Algebra {
        field,
        quiver,
        relations: relations.clone(),
        bound,
        basis,
        index_of,
        by_endpoints,
        normal_forms,
        mult: Vec::new(),
    };
    let d = alg.basis.len();
    let mut mult = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            if let Some(prod) = alg.basis[i].then(&alg.basis[j]) {
                mult[i][j] = alg.reduce_path(&prod);
            }
        }
    }
    alg.mult = mult;
    Ok(alg)
}

fn all_paths(quiver: &Quiver, bound: usize) -> Result<Vec<Path>, AlgebraError> {
    let mut out: Vec<Path> = (0..quiver.vertices()).map(Path::trivial).collect();
    let mut frontier: Vec<Path> = out.clone();
    for _ in 0..bound {
        let mut next = Vec::new();
        for p in &frontier {
            for (ai, a) in quiver.arrows().iter().enumerate() {
                if a.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path {
                        source: p.source,
                        target: a.target,
                        arrows,
                    });
                }
            }
        }
        out.extend(next.iter().cloned());
        if out.len() > MAX_PATHS {
            return Err(AlgebraError::TooManyPaths { bound });
        }
        frontier = next;
    }
    Ok(out)
}

impl Algebra {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn vertices(&self) -> usize {
        self.quiver.vertices()
    }

    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    pub fn nilpotency_bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.index_of.get(p).copied()
    }

    /// Basis paths from `source` to `target`, i.e. a basis of `e_target A e_source`
    /// in the traversal convention.
    pub fn basis_between(&self, source: usize, target: usize) -> &[usize] {
        &self.by_endpoints[source][target]
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.index_of[&Path::trivial(v)]
    }

    /// Normal form of an arbitrary path; paths of length `>= N` vanish.
    pub fn reduce_path(&self, p: &Path) -> Vec<(usize, u64)> {
        if p.len() > self.bound {
            return Vec::new();
        }
        self.normal_forms.get(p).cloned().unwrap_or_default()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, u64)] {
        &self.mult[i][j]
    }

    /// Product of two elements given as dense basis coordinates.
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut out = vec![0; self.dim()];
        for (i, &ai) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &bj) in b.iter().enumerate().filter(|(_, &x)| x != 0) {
                let c = f.mul(ai, bj);
                for &(k, m) in &self.mult[i][j] {
                    out[k] = f.add(out[k], f.mul(c, m));
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Matrix of right multiplication by basis element `j` in the path basis.
    pub fn right_action(&self, j: usize) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(self.field, d, d);
        for i in 0..d {
            for &(k, c) in &self.mult[i][j] {
                m.set(k, i, c);
            }
        }
        m
    }

    pub fn path_name(&self, i: usize) -> String {
        self.quiver.path_name(&self.basis[i])
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "algebra over {} with {} vertices, {} arrows, dim {}",
            self.field,
            self.vertices(),
            self.quiver.arrows().len(),
            self.dim()
        )
    }
}

/// Convenience constructor: relations given as `(coefficient, arrow names)` terms.
pub fn relations_from_names(
    quiver: &Quiver,
    field: Field,
    relations: &[Vec<(i64, Vec<String>)>],
    nilpotency_bound: usize,
) -> Result<RelationSet, AlgebraError> {
    let mut out = Vec::new();
    for (index, terms) in relations.iter().enumerate() {
        if terms.is_empty() {
            return Err(AlgebraError::EmptyRelation { index });
        }
        let mut rterms = Vec::new();
        for (c, names) in terms {
            if names.len() < 2 {
                return Err(AlgebraError::RelationTooShort {
                    index,
                    length: names.len(),
                });
            }
            rterms.push((field.from_i64(*c), quiver.path(names)?));
        }
        out.push(Relation { terms: rterms });
    }
    Ok(RelationSet::new(out, nilpotency_bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow(name: &str, s: usize, t: usize) -> Arrow {
        Arrow {
            name: name.into(),
            source: s,
            target: t,
        }
    }

    fn f101() -> Field {
        Field::new(101).unwrap()
    }

    #[test]
    fn a2_without_relations() {
        let q = Quiver::new(2, vec![arrow("a", 0, 1)]).unwrap();
        let alg = build_algebra(q, &RelationSet::new(vec![], 2), f101()).unwrap();
        assert_eq!(alg.dim(), 3);
    }

    #[test]
    fn dual_numbers() {
        let q = Quiver::new(1, vec![arrow("x", 0, 0)]).unwrap();
        let rels = relations_from_names(&q, f101(), &[vec![(1, vec!["x".into(), "x".into()])]], 2).unwrap();
        let alg = build_algebra(q, &rels, f101()).unwrap();
        assert_eq!(alg.dim(), 2);
    }

    #[test]
    fn semisimple_two_vertices() {
        let q = Quiver::new(2, vec![]).unwrap();
        let alg = build_algebra(q, &RelationSet::new(vec![], 1), f101()).unwrap();
        assert_eq!(alg.dim(), 2);
        assert_eq!(alg.mul_basis(0, 1), &[] as &[(usize, u64)]);
    }

    #[test]
    fn bound_too_small_is_not_admissible() {
        let q = Quiver::new(3, vec![arrow("a", 0, 1), arrow("b", 1, 2)]).unwrap();
        let err = build_algebra(q, &RelationSet::new(vec![], 2), f101()).unwrap_err();
        assert!(matches!(err, AlgebraError::NotAdmissible { .. }), "{err}");
    }

    #[test]
    fn loop_without_relation_is_not_admissible() {
        let q = Quiver::new(1, vec![arrow("x", 0, 0)]).unwrap();
        assert!(build_algebra(q, &RelationSet::new(vec![], 4), f101()).is_err());
    }

    #[test]
    fn commutative_square_mod_commutativity() {
        // 0 -a-> 1 -b-> 3, 0 -c-> 2 -d-> 3 with ab = cd
        let q = Quiver::new(
            4,
            vec![arrow("a", 0, 1), arrow("b", 1, 3), arrow("c", 0, 2), arrow("d", 2, 3)],
        )
        .unwrap();
        let f = f101();
        let rels = relations_from_names(
            &q,
            f,
            &[vec![(1, vec!["a".into(), "b".into()]), (-1, vec!["c".into(), "d".into()])]],
            3,
        )
        .unwrap();
        let alg = build_algebra(q, &rels, f).unwrap();
        // 4 idempotents, 4 arrows, one surviving length-2 path
        assert_eq!(alg.dim(), 9);
        assert_associative(&alg);
    }

    #[test]
    fn relation_errors() {
        let q = Quiver::new(2, vec![arrow("a", 0, 1), arrow("b", 1, 0)]).unwrap();
        let f = f101();
        let short = relations_from_names(&q, f, &[vec![(1, vec!["a".into()])]], 3);
        assert!(matches!(short, Err(AlgebraError::RelationTooShort { .. })));
        let mixed = relations_from_names(
            &q,
            f,
            &[vec![(1, vec!["a".into(), "b".into()]), (1, vec!["b".into(), "a".into()])]],
            3,
        )
        .unwrap();
        assert!(matches!(mixed.validate(), Err(AlgebraError::NotHomogeneousRelation { .. })));
        assert!(matches!(
            q.path(&["a".into(), "a".into()]),
            Err(AlgebraError::NotAPath(_))
        ));
    }

    pub(crate) fn assert_associative(alg: &Algebra) {
        let d = alg.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (a, b, c) = (alg.unit_vector(i), alg.unit_vector(j), alg.unit_vector(k));
                    assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
                }
            }
        }
    }

    #[test]
    fn arrow_ideal_is_nilpotent() {
        let q = Quiver::new(3, vec![arrow("a", 0, 1), arrow("b", 1, 2)]).unwrap();
        let alg = build_algebra(q, &RelationSet::new(vec![], 3), f101()).unwrap();
        assert_eq!(alg.dim(), 6);
        assert_associative(&alg);
        let radical: Vec<usize> = (0..alg.dim()).filter(|&i| !alg.basis()[i].is_trivial()).collect();
        // product of N = 3 radical basis elements vanishes
        for &i in &radical {
            for &j in &radical {
                for &k in &radical {
                    let p = alg.mul(&alg.mul(&alg.unit_vector(i), &alg.unit_vector(j)), &alg.unit_vector(k));
                    assert!(p.iter().all(|&x| x == 0));
                }
            }
        }
    }
}
