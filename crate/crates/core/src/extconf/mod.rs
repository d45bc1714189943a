//! Ext¹ groups of representations, conflations and their realizations.
//!
//! `E(C, A)` is computed as `coker(Hom(P0, A) -> Hom(Ω, A))` from the projective
//! presentation `0 -> Ω -> P0 -> C -> 0` built on a basis of the top of `C`.

mod conflation;

use std::sync::Arc;

use thiserror::Error;

pub use conflation::{
    check_long_exact, complete_conflation_morphism, equivalence, extension_class, factor_conflation_morphism,
    realize, realize_morphism, realize_pullback, Conflation, ConflationClass, ConflationMorphism, FactoredMorphism, LongExactReport,
    WeakPullback,
};

use crate::exactfield::{Matrix, Quotient, Subspace};
use crate::repmod::{direct_sum, factor_through_mono, hom_space, kernel, HomSpace, RepError, RepMorphism, Representation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtError {
    #[error("no mediating map for the weak pullback")]
    WeakPullbackFailure,
    #[error("(a, c) is not a morphism of extension classes: a_*δ ≠ c^*δ'")]
    NotAMorphism,
    #[error("b does not restrict to the kernels")]
    NoCompletion,
    #[error("squares of the conflation morphism do not commute")]
    NotCommuting,
    #[error("sequence is not short exact")]
    NotExact,
    #[error("ext group mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `0 -> Ω -> P0 -> M -> 0` with `P0` a projective cover.
#[derive(Clone, Debug)]
pub struct ProjectivePresentation {
    module: Representation,
    /// `(vertex, element of M_vertex)` lifting a basis of the top.
    generators: Vec<(usize, Vec<u64>)>,
    cover: Representation,
    surjection: RepMorphism,
    syzygy: Representation,
    inclusion: RepMorphism,
}

impl ProjectivePresentation {
    pub fn new(m: &Representation) -> Self {
        let alg = m.algebra();
        let field = m.field();
        let q = alg.quiver();
        let mut generators = Vec::new();
        for v in 0..alg.vertices() {
            let d = m.dims()[v];
            let mut rad = Subspace::zero(field, d);
            for (ai, a) in q.arrows().iter().enumerate() {
                if a.target == v {
                    rad = rad.sum(&Subspace::from_column_matrix(m.arrow(ai)));
                }
            }
            let top = Subspace::full(field, d).quotient(&rad).expect("radical inside the module");
            for g in top.complement {
                generators.push((v, g));
            }
        }
        let projectives: Vec<Representation> = generators
            .iter()
            .map(|(v, _)| Representation::projective(alg, *v))
            .collect();
        let refs: Vec<&Representation> = projectives.iter().collect();
        let cover = direct_sum(alg, &refs).rep;
        let surjection = cover_map(&generators, m, &generators.iter().map(|(_, g)| g.clone()).collect::<Vec<_>>());
        let (syzygy, inclusion) = kernel(&surjection, &cover);
        ProjectivePresentation {
            module: m.clone(),
            generators,
            cover,
            surjection,
            syzygy,
            inclusion,
        }
    }

    pub fn module(&self) -> &Representation {
        &self.module
    }

    pub fn generators(&self) -> &[(usize, Vec<u64>)] {
        &self.generators
    }

    pub fn cover(&self) -> &Representation {
        &self.cover
    }

    pub fn surjection(&self) -> &RepMorphism {
        &self.surjection
    }

    pub fn syzygy(&self) -> &Representation {
        &self.syzygy
    }

    pub fn inclusion(&self) -> &RepMorphism {
        &self.inclusion
    }

    /// The morphism `P0 -> N` sending the `k`-th generator to `images[k] ∈ N_{v_k}`.
    pub fn morphism_from_cover(&self, n: &Representation, images: &[Vec<u64>]) -> RepMorphism {
        cover_map(&self.generators, n, images)
    }

    /// Lift `g: P0 -> C` through a surjection `y: B -> C`.
    pub fn lift_through(&self, g_images: &[Vec<u64>], y: &RepMorphism, b: &Representation) -> Option<RepMorphism> {
        let mut pre = Vec::with_capacity(self.generators.len());
        for ((v, _), img) in self.generators.iter().zip(g_images) {
            pre.push(y.maps[*v].solve(img).ok()?);
        }
        Some(self.morphism_from_cover(b, &pre))
    }

    /// Images of the generators under `f: M -> N`.
    pub fn generator_images(&self, f: &RepMorphism) -> Vec<Vec<u64>> {
        self.generators.iter().map(|(v, g)| f.maps[*v].mul_vec(g)).collect()
    }
}

fn cover_map(generators: &[(usize, Vec<u64>)], n: &Representation, images: &[Vec<u64>]) -> RepMorphism {
    let alg = n.algebra();
    let field = n.field();
    let maps = (0..alg.vertices())
        .map(|w| {
            let mut cols = Vec::new();
            for ((v, _), img) in generators.iter().zip(images) {
                for &b in alg.basis_between(*v, w) {
                    cols.push(n.path_matrix(&alg.basis()[b]).mul_vec(img));
                }
            }
            Matrix::from_columns(field, n.dims()[w], &cols)
        })
        .collect();
    RepMorphism { maps }
}

/// `E(C, A)` with its cocycle space and coset structure.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    presentation: Arc<ProjectivePresentation>,
    target: Representation,
    cocycles: HomSpace,
    boundaries: Subspace,
    quotient: Quotient,
}

impl ExtGroup {
    pub fn new(c: &Representation, a: &Representation) -> Self {
        Self::with_presentation(Arc::new(ProjectivePresentation::new(c)), a)
    }

    pub fn with_presentation(presentation: Arc<ProjectivePresentation>, a: &Representation) -> Self {
        let field = a.field();
        let cocycles = hom_space(presentation.syzygy(), a);
        let mut images = Vec::new();
        let ngen = presentation.generators().len();
        for k in 0..ngen {
            let v = presentation.generators()[k].0;
            for i in 0..a.dims()[v] {
                let mut imgs: Vec<Vec<u64>> = presentation
                    .generators()
                    .iter()
                    .map(|(w, _)| vec![0; a.dims()[*w]])
                    .collect();
                imgs[k][i] = 1;
                let h = presentation.morphism_from_cover(a, &imgs);
                let restricted = h.after(presentation.inclusion());
                images.push(cocycles.coords(&restricted).expect("restriction is a cocycle"));
            }
        }
        let boundaries = Subspace::span(field, cocycles.dim(), &images);
        let quotient = Subspace::full(field, cocycles.dim())
            .quotient(&boundaries)
            .expect("boundaries inside cocycles");
        ExtGroup {
            presentation,
            target: a.clone(),
            cocycles,
            boundaries,
            quotient,
        }
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn presentation(&self) -> &Arc<ProjectivePresentation> {
        &self.presentation
    }

    pub fn first(&self) -> &Representation {
        self.presentation.module()
    }

    pub fn second(&self) -> &Representation {
        &self.target
    }

    pub fn cocycles(&self) -> &HomSpace {
        &self.cocycles
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    /// Canonical cocycle `Ω -> A` representing the class with coordinates `delta`.
    pub fn cocycle(&self, delta: &[u64]) -> RepMorphism {
        let coords = self.quotient.lift.mul_vec(delta);
        self.cocycles.combine(&coords)
    }

    pub fn class_of_cocycle(&self, f: &RepMorphism) -> Vec<u64> {
        let coords = self.cocycles.coords(f).expect("cocycle in Hom(Ω, A)");
        self.quotient.projection.mul_vec(&coords)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }

    /// Matrix of `c^*: E(C, A) -> E(C', A)` for `c: C' -> C`; `target` is `E(C', A)`.
    pub fn pullback_matrix(&self, c: &RepMorphism, target: &ExtGroup) -> Matrix {
        let field = self.target.field();
        let h = self.lift_to_syzygies(c, target.presentation());
        let cols: Vec<Vec<u64>> = (0..self.dim())
            .map(|i| {
                let mut e = vec![0; self.dim()];
                e[i] = 1;
                target.class_of_cocycle(&self.cocycle(&e).after(&h))
            })
            .collect();
        Matrix::from_columns(field, target.dim(), &cols)
    }

    /// Matrix of `a_*: E(C, A) -> E(C, A')` for `a: A -> A'`; `target` is `E(C, A')`.
    pub fn pushout_matrix(&self, a: &RepMorphism, target: &ExtGroup) -> Matrix {
        let field = self.target.field();
        let cols: Vec<Vec<u64>> = (0..self.dim())
            .map(|i| {
                let mut e = vec![0; self.dim()];
                e[i] = 1;
                target.class_of_cocycle(&a.after(&self.cocycle(&e)))
            })
            .collect();
        Matrix::from_columns(field, target.dim(), &cols)
    }

    /// The map `Ω' -> Ω` induced by lifting `c: C' -> C` to the covers.
    fn lift_to_syzygies(&self, c: &RepMorphism, source: &ProjectivePresentation) -> RepMorphism {
        let pres = &self.presentation;
        let images = source.generator_images(c);
        let g = source
            .lift_through(&images, pres.surjection(), pres.cover())
            .expect("cover surjects");
        let restricted = g.after(source.inclusion());
        factor_through_mono(pres.inclusion(), &restricted).expect("lift maps syzygy into syzygy")
    }
}

/// `c^*δ` for `c: C' -> C`, `δ ∈ from = E(C, A)`, landing in `to = E(C', A)`.
pub fn pullback_ext(c: &RepMorphism, from: &ExtGroup, delta: &[u64], to: &ExtGroup) -> Vec<u64> {
    let h = from.lift_to_syzygies(c, to.presentation());
    to.class_of_cocycle(&from.cocycle(delta).after(&h))
}

/// `a_*δ` for `a: A -> A'`, `δ ∈ from = E(C, A)`, landing in `to = E(C, A')`.
pub fn pushout_ext(a: &RepMorphism, from: &ExtGroup, delta: &[u64], to: &ExtGroup) -> Vec<u64> {
    to.class_of_cocycle(&a.after(&from.cocycle(delta)))
}

#[cfg(test)]
pub(crate) mod tests;
