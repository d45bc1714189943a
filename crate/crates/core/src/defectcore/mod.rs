//! Defects of conflations, simple defects, and the correspondence between Serre
//! subsets of `def E` and closed subbifunctors of `E`.
//!
//! A substructure is stored as one subspace `F(c, a) ⊆ E(X_c, X_a)` per atlas pair.
//! The Serre side is a set of atlas indices: `def E` has finite length here, so a
//! Serre subcategory is determined by the simple functors it contains.

mod closure;
mod oracle;
mod suite;
mod table;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use closure::{ClosureReport, CompositeRecord, FirstStage};
pub use oracle::{ControlOutcome, ExactStructure, ExactStructureReport, OracleSweep, RoundtripReport, ORACLE_MAX_EXT_DIM, ORACLE_MAX_FAMILIES};
pub use suite::Check;
pub use table::ExtTable;

use crate::exactfield::{Matrix, Subspace};
use crate::extconf::{pullback_ext, realize, ConflationClass, ExtError, ExtGroup};
use crate::funcat::{
    composition_factors, generated_submodule, torsion_part, yoneda_map, yoneda_module, CategoryTable, FunError,
    GammaMap, GammaModule, IndexSet,
};
use crate::repmod::{Atlas, RepError, Representation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefectError {
    #[error("not a subbifunctor: {0}")]
    NotASubbifunctor(String),
    #[error("closure violation: {0}")]
    ClosureViolation(String),
    #[error("oracle guard exceeded: {0}")]
    TooLarge(String),
    #[error("the ambient category is not flagged as a full module category")]
    NotFullModuleCategory,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Ext(#[from] ExtError),
    #[error(transparent)]
    Fun(#[from] FunError),
}

/// `E(−, A)` restricted to the atlas.
#[derive(Clone, Debug)]
pub struct ExtColumn {
    pub groups: Vec<Arc<ExtGroup>>,
    pub module: GammaModule,
}

/// `δ̃ = coker Hom(−, y)` together with the image of `δ_♯` in `E(−, A)`.
#[derive(Clone, Debug)]
pub struct Defect {
    pub module: GammaModule,
    pub factors: Vec<usize>,
    /// `δ_♯: Hom(−, C) -> E(−, A)`, `φ ↦ φ^*δ`.
    pub sharp: GammaMap,
    pub image: Vec<Subspace>,
    /// The map `δ̃ -> E(−, A)` induced by `δ_♯`.
    pub iso: GammaMap,
    /// Whether `iso` is a natural isomorphism onto `image` (and `image = Γδ` when `C` is an atlas member).
    pub consistent: bool,
}

impl Defect {
    pub fn support(&self) -> IndexSet {
        support(&self.factors)
    }
}

pub fn support(factors: &[usize]) -> IndexSet {
    factors.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, _)| i).collect()
}

/// Where a substructure came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Serre(IndexSet),
    Oracle,
    Candidate(String),
}

/// Subspaces `F(c, a) ⊆ E(X_c, X_a)` for all atlas pairs.
#[derive(Clone, Debug)]
pub struct Substructure {
    pub spaces: Vec<Vec<Subspace>>,
    pub origin: Origin,
}

impl Substructure {
    pub fn same_family(&self, other: &Substructure) -> bool {
        self.spaces == other.spaces
    }

    pub fn is_contained_in(&self, other: &Substructure) -> bool {
        self.spaces
            .iter()
            .flatten()
            .zip(other.spaces.iter().flatten())
            .all(|(a, b)| a.is_subspace_of(b))
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.spaces.iter().map(|row| row.iter().map(|s| s.dim()).collect()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().flatten().map(|s| s.dim()).sum()
    }
}

/// The Serre subsets of `def E` ordered by inclusion, with Hasse edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerrePoset {
    pub simples: Vec<usize>,
    pub elements: Vec<IndexSet>,
    /// `(i, j)`: `elements[j]` covers `elements[i]`.
    pub edges: Vec<(usize, usize)>,
}

impl SerrePoset {
    /// Bitmask of an element over the ordered list of simple defects.
    pub fn mask(&self, s: &IndexSet) -> u64 {
        self.simples
            .iter()
            .enumerate()
            .filter(|(_, x)| s.contains(x))
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

/// Everything computed from an atlas: category table, Ext table, columns and simple defects.
pub struct Analysis {
    table: Arc<CategoryTable>,
    ext: ExtTable,
    columns: Vec<ExtColumn>,
    simple: IndexSet,
    simple_by_support: IndexSet,
}

impl fmt::Debug for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Analysis")
            .field("atlas", &self.table.atlas().names())
            .field("simple_defects", &self.simple)
            .finish()
    }
}

impl Analysis {
    pub fn new(atlas: Atlas) -> Self {
        let objects: Vec<Representation> = atlas.entries().iter().map(|e| e.rep.clone()).collect();
        let table = CategoryTable::new(atlas);
        let ext = ExtTable::new(&objects);
        let n = table.len();
        let columns: Vec<ExtColumn> = (0..n)
            .map(|a| {
                let dims = (0..n).map(|i| ext.group(i, a).dim()).collect();
                ExtColumn {
                    groups: (0..n).map(|i| ext.group(i, a).clone()).collect(),
                    module: GammaModule::new_unchecked(&table, dims, ext.pull_actions(a).to_vec()),
                }
            })
            .collect();
        let simple: IndexSet = (0..n).filter(|&c| (0..n).any(|a| ext.group(c, a).dim() > 0)).collect();
        let mut simple_by_support = IndexSet::new();
        for col in &columns {
            let f = composition_factors(&col.module).expect("atlas has local endomorphism rings");
            simple_by_support.extend(support(&f));
        }
        Analysis {
            table,
            ext,
            columns,
            simple,
            simple_by_support,
        }
    }

    pub fn table(&self) -> &Arc<CategoryTable> {
        &self.table
    }

    pub fn ext(&self) -> &ExtTable {
        &self.ext
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn atlas(&self) -> &Atlas {
        self.table.atlas()
    }

    pub fn column(&self, a: usize) -> &ExtColumn {
        &self.columns[a]
    }

    /// `{c : E(X_c, X_a) ≠ 0 for some a}`.
    pub fn simple_defects(&self) -> &IndexSet {
        &self.simple
    }

    /// Union of the composition-factor supports of all columns `E(−, X_a)`.
    pub fn simple_defects_by_support(&self) -> &IndexSet {
        &self.simple_by_support
    }

    pub fn atlas_index(&self, m: &Representation) -> Option<usize> {
        (0..self.len()).find(|&i| self.atlas().rep(i) == m)
    }

    /// `E(−, A)` for an arbitrary `A`.
    pub fn column_of(&self, a: &Representation) -> ExtColumn {
        if let Some(i) = self.atlas_index(a) {
            return self.columns[i].clone();
        }
        let n = self.len();
        let groups: Vec<Arc<ExtGroup>> = (0..n)
            .map(|i| Arc::new(ExtGroup::with_presentation(self.ext.presentation(i).clone(), a)))
            .collect();
        let dims = groups.iter().map(|g| g.dim()).collect();
        let actions = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.table
                            .hom(i, j)
                            .basis()
                            .iter()
                            .map(|f| groups[j].pullback_matrix(f, &groups[i]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ExtColumn {
            module: GammaModule::new_unchecked(&self.table, dims, actions),
            groups,
        }
    }

    /// Realize `δ ∈ E(X_c, X_a)` given in table coordinates.
    pub fn realize(&self, c: usize, a: usize, delta: &[u64]) -> ConflationClass {
        realize(self.ext.group(c, a), delta)
    }

    pub fn defect(&self, cl: &ConflationClass) -> Result<Defect, DefectError> {
        let t = &self.table;
        let n = t.len();
        let field = t.field();
        let conf = &cl.conf;
        let (_, eb) = yoneda_module(t, &conf.b);
        let (yc, ec) = yoneda_module(t, &conf.c);
        let ymap = yoneda_map(t, &conf.y, &eb, &ec);
        let (module, _, quots) = yc.quotient(&ymap.image_spaces())?;
        let column = self.column_of(&conf.a);
        let maps = (0..n)
            .map(|i| {
                let cols: Vec<Vec<u64>> = ec[i]
                    .basis()
                    .iter()
                    .map(|phi| pullback_ext(phi, &cl.ext, &cl.delta, &column.groups[i]))
                    .collect();
                Matrix::from_columns(field, column.groups[i].dim(), &cols)
            })
            .collect();
        let sharp = GammaMap { maps };
        let image = sharp.image_spaces();
        let iso = GammaMap {
            maps: sharp.maps.iter().zip(&quots).map(|(s, q)| s * &q.lift).collect(),
        };
        let factors = composition_factors(&module)?;
        let mut consistent = sharp.is_natural(&yc, &column.module)
            && sharp.after(&ymap).is_zero()
            && iso.is_natural(&module, &column.module)
            && iso.is_injective()
            && iso.image_spaces() == image;
        if let Some(c) = self.atlas_index(&conf.c) {
            let d = pullback_ext(&conf.c.identity(), &cl.ext, &cl.delta, &column.groups[c]);
            consistent &= generated_submodule(&column.module, &[(c, d)]) == image;
        }
        Ok(Defect {
            module,
            factors,
            sharp,
            image,
            iso,
            consistent,
        })
    }

    /// Composition factors of `Γδ ⊆ E(−, X_a)` for `δ ∈ E(X_c, X_a)`.
    pub fn cyclic_factors(&self, c: usize, a: usize, delta: &[u64]) -> Vec<usize> {
        let col = &self.columns[a].module;
        let spaces = generated_submodule(col, &[(c, delta.to_vec())]);
        let (sub, _) = col.submodule(&spaces).expect("generated submodule");
        composition_factors(&sub).expect("local atlas")
    }

    pub fn serre_subsets(&self) -> SerrePoset {
        let simples: Vec<usize> = self.simple.iter().copied().collect();
        let k = simples.len();
        let elements: Vec<IndexSet> = (0..1u64 << k)
            .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).map(|i| simples[i]).collect())
            .collect();
        let mut edges = Vec::new();
        for mask in 0..1u64 << k {
            for i in 0..k {
                if mask >> i & 1 == 0 {
                    edges.push((mask as usize, (mask | 1 << i) as usize));
                }
            }
        }
        SerrePoset {
            simples,
            elements,
            edges,
        }
    }

    /// `F(S)(c, a)`: the `S`-torsion part of `E(−, X_a)` evaluated at `X_c`.
    pub fn substructure_from_serre(&self, s: &IndexSet) -> Substructure {
        let n = self.len();
        let mut spaces = vec![Vec::with_capacity(n); n];
        for a in 0..n {
            let t = torsion_part(&self.columns[a].module, s);
            for (c, sp) in t.into_iter().enumerate() {
                spaces[c].push(sp);
            }
        }
        Substructure {
            spaces,
            origin: Origin::Serre(s.clone()),
        }
    }

    pub fn full_substructure(&self) -> Substructure {
        let n = self.len();
        Substructure {
            spaces: (0..n)
                .map(|c| (0..n).map(|a| Subspace::full(self.table.field(), self.ext.group(c, a).dim())).collect())
                .collect(),
            origin: Origin::Candidate("E".into()),
        }
    }

    pub fn zero_substructure(&self) -> Substructure {
        let n = self.len();
        Substructure {
            spaces: (0..n)
                .map(|c| (0..n).map(|a| Subspace::zero(self.table.field(), self.ext.group(c, a).dim())).collect())
                .collect(),
            origin: Origin::Candidate("0".into()),
        }
    }

    /// `def F`: the factor support of the submodules of the columns generated by `F`.
    pub fn serre_from_substructure(&self, f: &Substructure) -> Result<IndexSet, DefectError> {
        self.ext.check_stability(&f.spaces)?;
        let n = self.len();
        let mut out = IndexSet::new();
        for a in 0..n {
            let gens: Vec<(usize, Vec<u64>)> = (0..n)
                .flat_map(|c| f.spaces[c][a].basis_vectors().into_iter().map(move |v| (c, v)))
                .collect();
            if gens.is_empty() {
                continue;
            }
            let col = &self.columns[a].module;
            let (sub, _) = col.submodule(&generated_submodule(col, &gens))?;
            out.extend(support(&composition_factors(&sub)?));
        }
        Ok(out)
    }

    /// Whether `δ ∈ E(X_c, X_a)` has all defect factors in `s`.
    pub fn defect_in(&self, c: usize, a: usize, delta: &[u64], s: &IndexSet) -> bool {
        support(&self.cyclic_factors(c, a, delta)).is_subset(s)
    }
}

/// Sorted canonical key of a family, used for deterministic ordering and set comparison.
pub fn family_key(f: &Substructure) -> Vec<Vec<Vec<u64>>> {
    f.spaces.iter().flatten().map(|s| s.basis_vectors()).collect()
}

pub fn family_set(fs: &[Substructure]) -> BTreeSet<Vec<Vec<Vec<u64>>>> {
    fs.iter().map(family_key).collect()
}
