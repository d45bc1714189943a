//! Finite-length modules over `Γ = End(⊕ X_i)` for an atlas `X_1..X_n`.
//!
//! A module is given by its evaluations `M(X_i)` and, for every basis morphism
//! `f: X_i -> X_j`, a matrix `M(f): M(X_j) -> M(X_i)`.

mod ops;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

pub use ops::{
    composition_factors, gamma_hom_space, generated_submodule, radical_filtration, radical_spaces,
    random_composition_series, socle, socle_isotypic, torsion_part,
};

use crate::exactfield::{Field, Matrix, Quotient, Subspace};
use crate::repmod::{hom_space, Atlas, HomSpace, RepError, RepMorphism, Representation};

/// A set of atlas indices (simple functors).
pub type IndexSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunError {
    #[error("not a Γ-module: {0}")]
    NotAModule(String),
    #[error("map is not natural")]
    NotNatural,
    #[error("spaces are not closed under the Γ-action")]
    NotASubmodule,
    #[error("multiplicity at index {index} is not an integer")]
    NonIntegralMultiplicity { index: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Hom spaces between atlas members, composition constants and radicals.
#[derive(Debug)]
pub struct CategoryTable {
    atlas: Atlas,
    homs: Vec<Vec<HomSpace>>,
    /// `composition[i][j][k][a][b]`: coordinates of `g_b ∘ f_a` for `f_a: X_i -> X_j`, `g_b: X_j -> X_k`.
    composition: Vec<Vec<Vec<Vec<Vec<Vec<u64>>>>>>,
    /// Basis of `rad(X_i, X_j)` in coordinates of `homs[i][j]`.
    radical: Vec<Vec<Subspace>>,
    /// `residue[i][a]`: the scalar `λ` with `f_a - λ id ∈ rad End(X_i)`.
    residue: Vec<Vec<u64>>,
}

impl CategoryTable {
    pub fn new(atlas: Atlas) -> Arc<Self> {
        let n = atlas.len();
        let homs: Vec<Vec<HomSpace>> = (0..n)
            .map(|i| (0..n).map(|j| hom_space(atlas.rep(i), atlas.rep(j))).collect())
            .collect();
        let composition = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|k| {
                                homs[i][j]
                                    .basis()
                                    .iter()
                                    .map(|f| {
                                        homs[j][k]
                                            .basis()
                                            .iter()
                                            .map(|g| homs[i][k].coords(&g.after(f)).expect("composite"))
                                            .collect()
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut radical = Vec::with_capacity(n);
        let mut residue = Vec::with_capacity(n);
        for i in 0..n {
            let row = (0..n)
                .map(|j| {
                    let field = atlas.rep(i).field();
                    if i == j {
                        atlas.entry(i).radical.radical.clone()
                    } else {
                        Subspace::full(field, homs[i][j].dim())
                    }
                })
                .collect::<Vec<_>>();
            let end = &homs[i][i];
            let rad = &row[i];
            let id = end.coords(&atlas.rep(i).identity()).expect("identity");
            let field = atlas.rep(i).field();
            let res = end
                .basis()
                .iter()
                .map(|f| {
                    let c = end.coords(f).expect("basis element");
                    (0..field.p())
                        .find(|&l| {
                            let d: Vec<u64> = c.iter().zip(&id).map(|(&x, &e)| field.sub(x, field.mul(l, e))).collect();
                            rad.contains(&d)
                        })
                        .expect("local endomorphism ring")
                })
                .collect();
            radical.push(row);
            residue.push(res);
        }
        Arc::new(CategoryTable {
            atlas,
            homs,
            composition,
            radical,
            residue,
        })
    }

    pub fn atlas(&self) -> &Atlas {
        &self.atlas
    }

    pub fn len(&self) -> usize {
        self.atlas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atlas.is_empty()
    }

    pub fn field(&self) -> Field {
        self.atlas.rep(0).field()
    }

    pub fn hom(&self, i: usize, j: usize) -> &HomSpace {
        &self.homs[i][j]
    }

    pub fn radical(&self, i: usize, j: usize) -> &Subspace {
        &self.radical[i][j]
    }

    /// Coordinates of `g_b ∘ f_a`.
    pub fn compose(&self, i: usize, j: usize, k: usize, a: usize, b: usize) -> &[u64] {
        &self.composition[i][j][k][a][b]
    }

    pub fn residue(&self, i: usize) -> &[u64] {
        &self.residue[i]
    }

    /// `dim End(X_i) / rad End(X_i)`.
    pub fn top_dim(&self, i: usize) -> usize {
        self.homs[i][i].dim() - self.radical[i][i].dim()
    }
}

/// A finite-dimensional right `Γ`-module.
#[derive(Clone, Debug)]
pub struct GammaModule {
    table: Arc<CategoryTable>,
    dims: Vec<usize>,
    /// `actions[i][j][a]` is `M(f_a): M(X_j) -> M(X_i)` for the basis `f_a` of `Hom(X_i, X_j)`.
    actions: Vec<Vec<Vec<Matrix>>>,
}

impl PartialEq for GammaModule {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.actions == other.actions
    }
}

impl GammaModule {
    pub fn new(table: &Arc<CategoryTable>, dims: Vec<usize>, actions: Vec<Vec<Vec<Matrix>>>) -> Result<Self, FunError> {
        let m = GammaModule {
            table: table.clone(),
            dims,
            actions,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(table: &Arc<CategoryTable>, dims: Vec<usize>, actions: Vec<Vec<Vec<Matrix>>>) -> Self {
        GammaModule {
            table: table.clone(),
            dims,
            actions,
        }
    }

    /// Shapes, identities and `M(g ∘ f) = M(f) M(g)` on all basis pairs.
    pub fn validate(&self) -> Result<(), FunError> {
        let t = &self.table;
        let n = t.len();
        if self.dims.len() != n || self.actions.len() != n {
            return Err(FunError::NotAModule("index count".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if self.actions[i][j].len() != t.hom(i, j).dim() {
                    return Err(FunError::NotAModule(format!("action count at ({i}, {j})")));
                }
                for m in &self.actions[i][j] {
                    if m.shape() != (self.dims[i], self.dims[j]) {
                        return Err(FunError::NotAModule(format!("action shape at ({i}, {j})")));
                    }
                }
            }
            let id = t.hom(i, i).coords(&t.atlas().rep(i).identity()).expect("identity");
            if !self.act(i, i, &id).is_identity() {
                return Err(FunError::NotAModule(format!("identity of X{i} acts nontrivially")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for a in 0..t.hom(i, j).dim() {
                        for b in 0..t.hom(j, k).dim() {
                            let lhs = self.act(i, k, t.compose(i, j, k, a, b));
                            let rhs = &self.actions[i][j][a] * &self.actions[j][k][b];
                            if lhs != rhs {
                                return Err(FunError::NotAModule(format!("composition ({i}, {j}, {k})")));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero(table: &Arc<CategoryTable>) -> Self {
        Self::from_dims_zero(table, vec![0; table.len()])
    }

    fn from_dims_zero(table: &Arc<CategoryTable>, dims: Vec<usize>) -> Self {
        let n = table.len();
        let f = table.field();
        let actions = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..table.hom(i, j).dim()).map(|_| Matrix::zeros(f, dims[i], dims[j])).collect())
                    .collect()
            })
            .collect();
        GammaModule {
            table: table.clone(),
            dims,
            actions,
        }
    }

    /// The simple functor `S_{X_i}`: top of the representable functor at `X_i`.
    pub fn simple(table: &Arc<CategoryTable>, i: usize) -> Self {
        let mut dims = vec![0; table.len()];
        dims[i] = 1;
        let mut m = Self::from_dims_zero(table, dims);
        let f = table.field();
        m.actions[i][i] = table.residue(i).iter().map(|&l| Matrix::from_vec(f, 1, 1, vec![l])).collect();
        m
    }

    pub fn table(&self) -> &Arc<CategoryTable> {
        &self.table
    }

    pub fn field(&self) -> Field {
        self.table.field()
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

    pub fn action(&self, i: usize, j: usize, a: usize) -> &Matrix {
        &self.actions[i][j][a]
    }

    /// `M(f)` for `f = Σ coeffs[a] f_a ∈ Hom(X_i, X_j)`.
    pub fn act(&self, i: usize, j: usize, coeffs: &[u64]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dims[i], self.dims[j]);
        for (c, a) in coeffs.iter().zip(&self.actions[i][j]) {
            if *c != 0 {
                m.add_scaled(*c, a);
            }
        }
        m
    }

    pub fn full_spaces(&self) -> Vec<Subspace> {
        self.dims.iter().map(|&d| Subspace::full(self.field(), d)).collect()
    }

    pub fn zero_spaces(&self) -> Vec<Subspace> {
        self.dims.iter().map(|&d| Subspace::zero(self.field(), d)).collect()
    }

    /// Whether the given spaces are closed under every action.
    pub fn is_submodule(&self, spaces: &[Subspace]) -> bool {
        let n = self.table.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.actions[i][j].iter().all(|m| {
                    spaces[j]
                        .basis_vectors()
                        .iter()
                        .all(|v| spaces[i].contains(&m.mul_vec(v)))
                })
            })
        })
    }

    pub fn submodule(&self, spaces: &[Subspace]) -> Result<(GammaModule, GammaMap), FunError> {
        if !self.is_submodule(spaces) {
            return Err(FunError::NotASubmodule);
        }
        let n = self.table.len();
        let bases: Vec<Matrix> = spaces.iter().map(|s| s.basis_columns()).collect();
        let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
        let f = self.field();
        let actions = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.actions[i][j]
                            .iter()
                            .map(|m| {
                                let img = m * &bases[j];
                                let cols: Vec<Vec<u64>> = img
                                    .columns()
                                    .iter()
                                    .map(|c| spaces[i].coordinates(c).expect("closed"))
                                    .collect();
                                Matrix::from_columns(f, dims[i], &cols)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let sub = GammaModule::new_unchecked(&self.table, dims, actions);
        Ok((sub, GammaMap { maps: bases }))
    }

    pub fn quotient(&self, spaces: &[Subspace]) -> Result<(GammaModule, GammaMap, Vec<Quotient>), FunError> {
        if !self.is_submodule(spaces) {
            return Err(FunError::NotASubmodule);
        }
        let n = self.table.len();
        let f = self.field();
        let quots: Vec<Quotient> = spaces
            .iter()
            .zip(&self.dims)
            .map(|(s, &d)| Subspace::full(f, d).quotient(s).expect("subspace"))
            .collect();
        let dims: Vec<usize> = quots.iter().map(|q| q.dim()).collect();
        let actions = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.actions[i][j]
                            .iter()
                            .map(|m| &(&quots[i].projection * m) * &quots[j].lift)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let q = GammaModule::new_unchecked(&self.table, dims, actions);
        let proj = GammaMap {
            maps: quots.iter().map(|q| q.projection.clone()).collect(),
        };
        Ok((q, proj, quots))
    }

    pub fn identity(&self) -> GammaMap {
        GammaMap {
            maps: self.dims.iter().map(|&d| Matrix::identity(self.field(), d)).collect(),
        }
    }

    pub fn direct_sum(parts: &[&GammaModule]) -> GammaModule {
        let table = parts[0].table.clone();
        let n = table.len();
        let f = table.field();
        let dims: Vec<usize> = (0..n).map(|i| parts.iter().map(|p| p.dims[i]).sum()).collect();
        let actions = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..table.hom(i, j).dim())
                            .map(|a| {
                                let blocks: Vec<&Matrix> = parts.iter().map(|p| &p.actions[i][j][a]).collect();
                                Matrix::block_diag(f, &blocks)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GammaModule::new_unchecked(&table, dims, actions)
    }
}

/// `Hom(−, X)` restricted to the atlas: `M(X_i) = Hom(X_i, X)`, acting by precomposition.
pub fn yoneda_module(table: &Arc<CategoryTable>, x: &Representation) -> (GammaModule, Vec<HomSpace>) {
    let n = table.len();
    let f = table.field();
    let evals: Vec<HomSpace> = (0..n).map(|i| hom_space(table.atlas().rep(i), x)).collect();
    let dims: Vec<usize> = evals.iter().map(|h| h.dim()).collect();
    let actions = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    table
                        .hom(i, j)
                        .basis()
                        .iter()
                        .map(|fa| {
                            let cols: Vec<Vec<u64>> = evals[j]
                                .basis()
                                .iter()
                                .map(|phi| evals[i].coords(&phi.after(fa)).expect("precomposite"))
                                .collect();
                            Matrix::from_columns(f, dims[i], &cols)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    (GammaModule::new_unchecked(table, dims, actions), evals)
}

/// `Hom(−, y): Hom(−, B) -> Hom(−, C)` in the bases returned by [`yoneda_module`].
pub fn yoneda_map(table: &Arc<CategoryTable>, y: &RepMorphism, from: &[HomSpace], to: &[HomSpace]) -> GammaMap {
    let f = table.field();
    let maps = (0..table.len())
        .map(|i| {
            let cols: Vec<Vec<u64>> = from[i]
                .basis()
                .iter()
                .map(|phi| to[i].coords(&y.after(phi)).expect("postcomposite"))
                .collect();
            Matrix::from_columns(f, to[i].dim(), &cols)
        })
        .collect();
    GammaMap { maps }
}

/// A natural transformation, one matrix `N(X_i) x M(X_i)` per atlas index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaMap {
    pub maps: Vec<Matrix>,
}

impl GammaMap {
    pub fn zero(m: &GammaModule, n: &GammaModule) -> Self {
        GammaMap {
            maps: m.dims.iter().zip(&n.dims).map(|(&s, &t)| Matrix::zeros(m.field(), t, s)).collect(),
        }
    }

    /// `self ∘ f`
    pub fn after(&self, f: &GammaMap) -> GammaMap {
        GammaMap {
            maps: self.maps.iter().zip(&f.maps).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn is_natural(&self, m: &GammaModule, n: &GammaModule) -> bool {
        let k = m.table.len();
        if self.maps.len() != k {
            return false;
        }
        for i in 0..k {
            if self.maps[i].shape() != (n.dims[i], m.dims[i]) {
                return false;
            }
        }
        (0..k).all(|i| {
            (0..k).all(|j| {
                (0..m.table.hom(i, j).dim())
                    .all(|a| &self.maps[i] * &m.actions[i][j][a] == &n.actions[i][j][a] * &self.maps[j])
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(|m| m.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn kernel_spaces(&self) -> Vec<Subspace> {
        self.maps.iter().map(|m| Subspace::from_column_matrix(&m.kernel_basis())).collect()
    }

    pub fn image_spaces(&self) -> Vec<Subspace> {
        self.maps.iter().map(Subspace::from_column_matrix).collect()
    }

    pub fn kernel(&self, m: &GammaModule) -> (GammaModule, GammaMap) {
        m.submodule(&self.kernel_spaces()).expect("kernel of a natural map")
    }

    pub fn image(&self, n: &GammaModule) -> (GammaModule, GammaMap) {
        n.submodule(&self.image_spaces()).expect("image of a natural map")
    }

    pub fn cokernel(&self, n: &GammaModule) -> (GammaModule, GammaMap) {
        let (q, p, _) = n.quotient(&self.image_spaces()).expect("image of a natural map");
        (q, p)
    }
}

#[cfg(test)]
pub(crate) mod tests;
