//! Quiver representations, their morphisms and Hom spaces: the objects and
//! morphisms of the module category the rest of the crate works in.
//!
//! A representation assigns a space `M_v` to every vertex and a matrix
//! `M(a): M_s -> M_t` (shape `dim M_t x dim M_s`) to every arrow `a: s -> t`.

mod decompose;
mod hom;
mod radical;

pub use decompose::{krull_schmidt_decompose, Atlas, AtlasEntry, Decomposition, Summand};
pub use hom::{hom_space, HomSpace};
pub use radical::{end_radical, is_indecomposable, EndRadical, RadicalMethod};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exactfield::{Field, LinAlgError, Matrix, Quotient, Subspace};
use crate::pathalg::{Algebra, Path};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("representation violates relation {index}")]
    RelationViolated { index: usize },
    #[error("a path of length {0} acts nonzero on the representation")]
    NotNilpotent(usize),
    #[error("the given spaces are not closed under the arrow maps")]
    NotSubrepresentation,
    #[error("characteristic {p} too small for the radical of an endomorphism ring of dimension {end_dim} acting on dimension {module_dim}")]
    CharacteristicTooSmall { p: u64, end_dim: usize, module_dim: usize },
    #[error("no atlas member splits off a nonzero remainder of dimension vector {0:?}")]
    AtlasIncomplete(Vec<usize>),
    #[error("atlas entry `{0}` is not indecomposable")]
    NotIndecomposable(String),
    #[error("atlas entries `{0}` and `{1}` are isomorphic")]
    DuplicateIsoClass(String, String),
    #[error("linear algebra: {0}")]
    LinAlg(#[from] LinAlgError),
}

/// A finite-dimensional representation of a bound quiver.
#[derive(Clone)]
pub struct Representation {
    algebra: Arc<Algebra>,
    dims: Vec<usize>,
    arrows: Vec<Matrix>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.arrows == other.arrows
    }
}

impl Eq for Representation {}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("dims", &self.dims)
            .field("arrows", &self.arrows)
            .finish()
    }
}

impl Representation {
    /// Checks matrix shapes, every relation, and vanishing of all paths of length `N`.
    pub fn new(algebra: Arc<Algebra>, dims: Vec<usize>, arrows: Vec<Matrix>) -> Result<Self, RepError> {
        let q = algebra.quiver();
        if dims.len() != q.vertices() || arrows.len() != q.arrows().len() {
            return Err(RepError::DimensionMismatch(format!(
                "expected {} vertex dims and {} arrow matrices",
                q.vertices(),
                q.arrows().len()
            )));
        }
        for (a, m) in q.arrows().iter().zip(&arrows) {
            if m.shape() != (dims[a.target], dims[a.source]) {
                return Err(RepError::DimensionMismatch(format!(
                    "arrow `{}` needs a {}x{} matrix, got {}x{}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let rep = Representation { algebra, dims, arrows };
        for (index, r) in rep.algebra.relations().relations.iter().enumerate() {
            let (s, t) = (r.terms[0].1.source, r.terms[0].1.target);
            let mut acc = Matrix::zeros(rep.field(), rep.dims[t], rep.dims[s]);
            for (c, p) in &r.terms {
                acc.add_scaled(*c, &rep.path_matrix(p));
            }
            if !acc.is_zero() {
                return Err(RepError::RelationViolated { index });
            }
        }
        rep.check_nilpotent()?;
        Ok(rep)
    }

    fn check_nilpotent(&self) -> Result<(), RepError> {
        // products of N arrow maps must vanish; walk all paths of length N
        let n = self.algebra.nilpotency_bound();
        let q = self.algebra.quiver();
        let mut frontier: Vec<(usize, Matrix)> = (0..q.vertices())
            .filter(|&v| self.dims[v] > 0)
            .map(|v| (v, Matrix::identity(self.field(), self.dims[v])))
            .collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for (v, m) in &frontier {
                for (ai, a) in q.arrows().iter().enumerate() {
                    if a.source == *v {
                        let prod = &self.arrows[ai] * m;
                        if !prod.is_zero() {
                            next.push((a.target, prod));
                        }
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                return Ok(());
            }
        }
        if frontier.is_empty() {
            Ok(())
        } else {
            Err(RepError::NotNilpotent(n))
        }
    }

    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, dims: Vec<usize>, arrows: Vec<Matrix>) -> Self {
        Representation { algebra, dims, arrows }
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        let n = algebra.vertices();
        Self::from_dims_zero(algebra, vec![0; n])
    }

    fn from_dims_zero(algebra: &Arc<Algebra>, dims: Vec<usize>) -> Self {
        let f = algebra.field();
        let arrows = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(f, dims[a.target], dims[a.source]))
            .collect();
        Representation {
            algebra: algebra.clone(),
            dims,
            arrows,
        }
    }

    pub fn simple(algebra: &Arc<Algebra>, v: usize) -> Self {
        let mut dims = vec![0; algebra.vertices()];
        dims[v] = 1;
        Self::from_dims_zero(algebra, dims)
    }

    /// The indecomposable projective at `v`: at `w` it has the basis paths `v -> w`,
    /// and an arrow `a` appends itself to a path.
    pub fn projective(algebra: &Arc<Algebra>, v: usize) -> Self {
        let f = algebra.field();
        let n = algebra.vertices();
        let dims: Vec<usize> = (0..n).map(|w| algebra.basis_between(v, w).len()).collect();
        let arrows = algebra
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(ai, a)| {
                let src = algebra.basis_between(v, a.source);
                let tgt = algebra.basis_between(v, a.target);
                let arrow_path = Path {
                    source: a.source,
                    target: a.target,
                    arrows: vec![ai],
                };
                let mut m = Matrix::zeros(f, tgt.len(), src.len());
                for (j, &bj) in src.iter().enumerate() {
                    let prod = algebra.basis()[bj].then(&arrow_path).expect("composable");
                    for (k, c) in algebra.reduce_path(&prod) {
                        let row = tgt.iter().position(|&t| t == k).expect("normal form stays in e_w A e_v");
                        m.set(row, j, c);
                    }
                }
                m
            })
            .collect();
        Representation {
            algebra: algebra.clone(),
            dims,
            arrows,
        }
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

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow(&self, i: usize) -> &Matrix {
        &self.arrows[i]
    }

    pub fn arrows(&self) -> &[Matrix] {
        &self.arrows
    }

    /// Offsets of each vertex block inside the total space `⊕ M_v`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    pub fn path_matrix(&self, p: &Path) -> Matrix {
        let mut m = Matrix::identity(self.field(), self.dims[p.source]);
        for &a in &p.arrows {
            m = &self.arrows[a] * &m;
        }
        m
    }

    /// Sub-representation spanned at each vertex by the given subspaces.
    pub fn subrepresentation(&self, spaces: &[Subspace]) -> Result<(Representation, RepMorphism), RepError> {
        let f = self.field();
        let bases: Vec<Matrix> = spaces.iter().map(|s| s.basis_columns()).collect();
        let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
        let mut arrows = Vec::new();
        for (ai, a) in self.algebra.quiver().arrows().iter().enumerate() {
            let image = &self.arrows[ai] * &bases[a.source];
            let mut m = Matrix::zeros(f, dims[a.target], dims[a.source]);
            for j in 0..dims[a.source] {
                let col = image.column(j);
                let coords = spaces[a.target].coordinates(&col).ok_or(RepError::NotSubrepresentation)?;
                for (i, c) in coords.into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            arrows.push(m);
        }
        let sub = Representation::new_unchecked(self.algebra.clone(), dims, arrows);
        Ok((sub, RepMorphism { maps: bases }))
    }

    /// Quotient by a sub-representation given vertexwise; returns the projection.
    pub fn quotient(&self, spaces: &[Subspace]) -> Result<(Representation, RepMorphism, Vec<Quotient>), RepError> {
        let f = self.field();
        let quots: Vec<Quotient> = spaces
            .iter()
            .zip(&self.dims)
            .map(|(s, &d)| Subspace::full(f, d).quotient(s))
            .collect::<Result<_, _>>()?;
        let dims: Vec<usize> = quots.iter().map(|q| q.dim()).collect();
        let mut arrows = Vec::new();
        for (ai, a) in self.algebra.quiver().arrows().iter().enumerate() {
            // the sub-representation must be stable for the induced map to be well defined
            for v in spaces[a.source].basis_vectors() {
                if !spaces[a.target].contains(&self.arrows[ai].mul_vec(&v)) {
                    return Err(RepError::NotSubrepresentation);
                }
            }
            arrows.push(&(&quots[a.target].projection * &self.arrows[ai]) * &quots[a.source].lift);
        }
        let q = Representation::new_unchecked(self.algebra.clone(), dims, arrows);
        let proj = RepMorphism {
            maps: quots.iter().map(|q| q.projection.clone()).collect(),
        };
        Ok((q, proj, quots))
    }

    pub fn identity(&self) -> RepMorphism {
        RepMorphism {
            maps: self.dims.iter().map(|&d| Matrix::identity(self.field(), d)).collect(),
        }
    }
}

/// Direct sum with its canonical injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub rep: Representation,
    pub injections: Vec<RepMorphism>,
    pub projections: Vec<RepMorphism>,
}

pub fn direct_sum(algebra: &Arc<Algebra>, parts: &[&Representation]) -> DirectSum {
    let f = algebra.field();
    let n = algebra.vertices();
    let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
    let arrows = algebra
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, _)| {
            let blocks: Vec<&Matrix> = parts.iter().map(|p| &p.arrows[ai]).collect();
            Matrix::block_diag(f, &blocks)
        })
        .collect();
    let rep = Representation::new_unchecked(algebra.clone(), dims.clone(), arrows);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = vec![0usize; n];
    for p in parts {
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        for v in 0..n {
            let mut i = Matrix::zeros(f, dims[v], p.dims[v]);
            let mut q = Matrix::zeros(f, p.dims[v], dims[v]);
            for k in 0..p.dims[v] {
                i.set(offset[v] + k, k, 1);
                q.set(k, offset[v] + k, 1);
            }
            inj.push(i);
            proj.push(q);
            offset[v] += p.dims[v];
        }
        injections.push(RepMorphism { maps: inj });
        projections.push(RepMorphism { maps: proj });
    }
    DirectSum {
        rep,
        injections,
        projections,
    }
}

/// A morphism of representations, one matrix per vertex (`dim N_v x dim M_v`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepMorphism {
    pub maps: Vec<Matrix>,
}

impl RepMorphism {
    pub fn zero(field: Field, source: &[usize], target: &[usize]) -> Self {
        RepMorphism {
            maps: source
                .iter()
                .zip(target)
                .map(|(&s, &t)| Matrix::zeros(field, t, s))
                .collect(),
        }
    }

    pub fn source_dims(&self) -> Vec<usize> {
        self.maps.iter().map(|m| m.cols()).collect()
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.maps.iter().map(|m| m.rows()).collect()
    }

    pub fn field(&self) -> Field {
        self.maps.first().map(|m| m.field()).unwrap_or_default()
    }

    /// `self ∘ f`
    pub fn after(&self, f: &RepMorphism) -> RepMorphism {
        compose(self, f).expect("composable morphisms")
    }

    pub fn checked_add(&self, other: &RepMorphism) -> Result<RepMorphism, RepError> {
        if self.maps.len() != other.maps.len() {
            return Err(RepError::DimensionMismatch("vertex count".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_, _>>()?;
        Ok(RepMorphism { maps })
    }

    pub fn add(&self, other: &RepMorphism) -> RepMorphism {
        self.checked_add(other).expect("morphism sum shape")
    }

    pub fn sub(&self, other: &RepMorphism) -> RepMorphism {
        self.add(&other.scale(self.field().neg(1)))
    }

    pub fn scale(&self, c: u64) -> RepMorphism {
        RepMorphism {
            maps: self.maps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.maps.iter().all(|m| m.is_invertible())
    }

    pub fn inverse(&self) -> Option<RepMorphism> {
        let maps = self.maps.iter().map(|m| m.inverse()).collect::<Option<Vec<_>>>()?;
        Some(RepMorphism { maps })
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    /// Vertexwise concatenation of the row-major entries.
    pub fn to_vector(&self) -> Vec<u64> {
        self.maps.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    pub fn from_vector(field: Field, source: &[usize], target: &[usize], v: &[u64]) -> Self {
        let mut maps = Vec::with_capacity(source.len());
        let mut off = 0;
        for (&s, &t) in source.iter().zip(target) {
            maps.push(Matrix::from_vec(field, t, s, v[off..off + s * t].to_vec()));
            off += s * t;
        }
        assert_eq!(off, v.len(), "vector length for morphism");
        RepMorphism { maps }
    }

    /// Whether `self: source -> target` commutes with every arrow.
    pub fn commutes(&self, source: &Representation, target: &Representation) -> bool {
        if self.source_dims() != source.dims || self.target_dims() != target.dims {
            return false;
        }
        source
            .algebra
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .all(|(ai, a)| &target.arrows[ai] * &self.maps[a.source] == &self.maps[a.target] * &source.arrows[ai])
    }

    /// Per-vertex kernel subspaces.
    pub fn kernel_spaces(&self) -> Vec<Subspace> {
        self.maps.iter().map(|m| Subspace::from_column_matrix(&m.kernel_basis())).collect()
    }

    /// Per-vertex image subspaces.
    pub fn image_spaces(&self) -> Vec<Subspace> {
        self.maps.iter().map(|m| Subspace::from_column_matrix(m)).collect()
    }
}

/// `g ∘ f`
pub fn compose(g: &RepMorphism, f: &RepMorphism) -> Result<RepMorphism, RepError> {
    if g.maps.len() != f.maps.len() {
        return Err(RepError::DimensionMismatch("vertex count".into()));
    }
    let maps = g
        .maps
        .iter()
        .zip(&f.maps)
        .map(|(a, b)| a.checked_mul(b))
        .collect::<Result<_, _>>()
        .map_err(|e| RepError::DimensionMismatch(e.to_string()))?;
    Ok(RepMorphism { maps })
}

pub fn kernel(f: &RepMorphism, source: &Representation) -> (Representation, RepMorphism) {
    source
        .subrepresentation(&f.kernel_spaces())
        .expect("kernel of a morphism is a subrepresentation")
}

pub fn image(f: &RepMorphism, target: &Representation) -> (Representation, RepMorphism) {
    target
        .subrepresentation(&f.image_spaces())
        .expect("image of a morphism is a subrepresentation")
}

pub fn cokernel(f: &RepMorphism, target: &Representation) -> (Representation, RepMorphism) {
    let (q, proj, _) = target
        .quotient(&f.image_spaces())
        .expect("image of a morphism is a subrepresentation");
    (q, proj)
}

/// Solve `mono ∘ h = g` vertexwise. Returns `None` if `g` does not land in the image.
pub fn factor_through_mono(mono: &RepMorphism, g: &RepMorphism) -> Option<RepMorphism> {
    let field = g.field();
    let mut maps = Vec::with_capacity(g.maps.len());
    for (m, gv) in mono.maps.iter().zip(&g.maps) {
        let solver = crate::exactfield::Solver::new(m);
        let mut h = Matrix::zeros(field, m.cols(), gv.cols());
        for j in 0..gv.cols() {
            let x = solver.solve(&gv.column(j)).ok()?;
            for (i, xi) in x.into_iter().enumerate() {
                h.set(i, j, xi);
            }
        }
        maps.push(h);
    }
    Some(RepMorphism { maps })
}

/// Vertexwise exactness of `A -x-> B -y-> C` with `x` injective and `y` surjective.
pub fn is_short_exact(x: &RepMorphism, y: &RepMorphism) -> bool {
    x.is_injective()
        && y.is_surjective()
        && x.maps.iter().zip(&y.maps).all(|(xv, yv)| {
            (yv * xv).is_zero() && xv.rank() + yv.rank() == xv.rows()
        })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::pathalg::{build_algebra, relations_from_names, Arrow, Quiver, RelationSet};

    pub fn field(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    /// 0 -a-> 1
    pub fn a2(p: u64) -> Arc<Algebra> {
        let q = Quiver::new(
            2,
            vec![Arrow {
                name: "a".into(),
                source: 0,
                target: 1,
            }],
        )
        .unwrap();
        Arc::new(build_algebra(q, &RelationSet::new(vec![], 2), field(p)).unwrap())
    }

    /// 0 -a-> 1 -b-> 2
    pub fn a3(p: u64) -> Arc<Algebra> {
        let q = Quiver::new(
            3,
            vec![
                Arrow {
                    name: "a".into(),
                    source: 0,
                    target: 1,
                },
                Arrow {
                    name: "b".into(),
                    source: 1,
                    target: 2,
                },
            ],
        )
        .unwrap();
        Arc::new(build_algebra(q, &RelationSet::new(vec![], 3), field(p)).unwrap())
    }

    /// k[x]/x^2
    pub fn dual(p: u64) -> Arc<Algebra> {
        let q = Quiver::new(
            1,
            vec![Arrow {
                name: "x".into(),
                source: 0,
                target: 0,
            }],
        )
        .unwrap();
        let rels = relations_from_names(&q, field(p), &[vec![(1, vec!["x".into(), "x".into()])]], 2).unwrap();
        Arc::new(build_algebra(q, &rels, field(p)).unwrap())
    }

    /// Interval module [i, j] of the linear A3 quiver, identity maps inside the support.
    pub fn interval(alg: &Arc<Algebra>, i: usize, j: usize) -> Representation {
        let f = alg.field();
        let dims: Vec<usize> = (0..3).map(|v| usize::from(v >= i && v <= j)).collect();
        let arrows = alg
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::from_fn(f, dims[a.target], dims[a.source], |_, _| 1))
            .collect();
        Representation::new(alg.clone(), dims, arrows).unwrap()
    }

    /// S1, P1, S2 of the A2 quiver (vertex 0 = "1").
    pub fn a2_atlas(alg: &Arc<Algebra>) -> Vec<Representation> {
        vec![
            Representation::simple(alg, 0),
            Representation::projective(alg, 0),
            Representation::simple(alg, 1),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn projectives_of_a2() {
        let alg = a2(101);
        let p0 = Representation::projective(&alg, 0);
        assert_eq!(p0.dims(), &[1, 1]);
        assert!(p0.arrow(0).is_identity());
        let p1 = Representation::projective(&alg, 1);
        assert_eq!(p1, Representation::simple(&alg, 1));
    }

    #[test]
    fn relation_check_rejects_bad_dual_module() {
        let alg = dual(101);
        let f = alg.field();
        // x acting as identity violates x^2 = 0
        let bad = Representation::new(alg.clone(), vec![1], vec![Matrix::identity(f, 1)]);
        assert!(matches!(bad, Err(RepError::RelationViolated { .. })));
        let reg = Representation::projective(&alg, 0);
        assert_eq!(reg.dims(), &[2]);
    }

    #[test]
    fn kernel_cokernel_of_cover() {
        let alg = a2(101);
        let p0 = Representation::projective(&alg, 0);
        let s0 = Representation::simple(&alg, 0);
        let h = hom_space(&p0, &s0);
        assert_eq!(h.dim(), 1);
        let y = h.basis()[0].clone();
        let (k, inc) = kernel(&y, &p0);
        assert_eq!(k, Representation::simple(&alg, 1));
        assert!(is_short_exact(&inc, &y));
        let (c, _) = cokernel(&y, &s0);
        assert!(c.is_zero());
    }

    #[test]
    fn direct_sum_projections_split() {
        let alg = a3(101);
        let x = interval(&alg, 0, 1);
        let y = interval(&alg, 1, 2);
        let ds = direct_sum(&alg, &[&x, &y]);
        assert_eq!(ds.rep.dims(), &[1, 2, 1]);
        let sum = ds.injections[0]
            .after(&ds.projections[0])
            .add(&ds.injections[1].after(&ds.projections[1]));
        assert_eq!(sum, ds.rep.identity());
        assert!(ds.projections[1].after(&ds.injections[0]).is_zero());
    }
}
