use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{support, Analysis, DefectError, Substructure};
use crate::exactfield::Subspace;
use crate::extconf::{
    extension_class, pullback_ext, pushout_ext, realize, Conflation, ConflationClass, ExtGroup,
    ProjectivePresentation,
};
use crate::funcat::{composition_factors, yoneda_map, yoneda_module, GammaMap, GammaModule, IndexSet};
use crate::repmod::{kernel, krull_schmidt_decompose, Decomposition, HomSpace};

/// A realized `δ ∈ E(X_c, X_a)` with `B` decomposed, plus the data needed for step 3.
#[derive(Clone, Debug)]
pub struct FirstStage {
    pub c: usize,
    pub a: usize,
    pub class: ConflationClass,
    pub parts: Decomposition,
    presentation: Arc<ProjectivePresentation>,
    yb: (GammaModule, Vec<HomSpace>),
    yc: (GammaModule, Vec<HomSpace>),
    ymap: GammaMap,
}

/// The outcome of composing the deflation of a first stage with an inflation-deflation
/// `A' -> B' -> B` whose class is `Σ r_k^* ε_k`.
#[derive(Clone, Debug)]
pub struct CompositeRecord {
    pub c: usize,
    pub a: usize,
    pub delta: Vec<u64>,
    pub a2: usize,
    /// `(b_k, ε_k)` with `ε_k ∈ E(X_{b_k}, X_{a2})`.
    pub eps: Vec<(usize, Vec<u64>)>,
    /// `(k_l, η_l)`: components of the composite class in `E(X_c, X_{k_l})`.
    pub composite: Vec<(usize, Vec<u64>)>,
    pub factors_l: Vec<usize>,
    pub factors_m: Vec<usize>,
    pub factors_n: Vec<usize>,
    pub step3_exact: bool,
    pub step3_factors: bool,
}

impl CompositeRecord {
    /// Both deflations lie in `F`.
    pub fn applies(&self, f: &Substructure) -> bool {
        f.spaces[self.c][self.a].contains(&self.delta) && self.eps.iter().all(|(b, e)| f.spaces[*b][self.a2].contains(e))
    }

    /// The composite deflation lies in `F`.
    pub fn composite_in(&self, f: &Substructure) -> bool {
        self.composite.iter().all(|(k, e)| f.spaces[self.c][*k].contains(e))
    }

    pub fn step3_ok(&self) -> bool {
        self.step3_exact && self.step3_factors
    }

    pub fn describe(&self) -> String {
        format!(
            "delta {:?} in E({}, {}) composed with {:?} into {} gives {:?}",
            self.delta, self.c, self.a, self.eps, self.a2, self.composite
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub serre: IndexSet,
    pub samples: usize,
    pub step3_failures: usize,
}

impl Analysis {
    pub fn first_stage(&self, c: usize, a: usize, delta: &[u64]) -> Result<FirstStage, DefectError> {
        let t = self.table();
        let class = self.realize(c, a, delta);
        let parts = krull_schmidt_decompose(&class.conf.b, self.atlas())?;
        let presentation = Arc::new(ProjectivePresentation::new(&class.conf.b));
        let yb = yoneda_module(t, &class.conf.b);
        let yc = yoneda_module(t, &class.conf.c);
        let ymap = yoneda_map(t, &class.conf.y, &yb.1, &yc.1);
        Ok(FirstStage {
            c,
            a,
            class,
            parts,
            presentation,
            yb,
            yc,
            ymap,
        })
    }

    /// Composes `B -> X_c` of `first` with the deflation of `Σ r_k^* ε_k ∈ E(B, X_{a2})`.
    pub fn composite(&self, first: &FirstStage, a2: usize, eps: &[Vec<u64>]) -> Result<CompositeRecord, DefectError> {
        let t = self.table();
        let ext = self.ext();
        let b = &first.class.conf.b;
        let ext_b = Arc::new(ExtGroup::with_presentation(first.presentation.clone(), ext.object(a2)));
        let mut delta2 = ext_b.zero();
        for (s, e) in first.parts.summands.iter().zip(eps) {
            let d = pullback_ext(&s.retraction, ext.group(s.index, a2), e, &ext_b);
            delta2 = delta2.iter().zip(&d).map(|(&x, &y)| t.field().add(x, y)).collect();
        }
        let second = realize(&ext_b, &delta2);
        let z = first.class.conf.y.after(&second.conf.y);
        let (k, inc) = kernel(&z, &second.conf.b);
        let conf = Conflation::new(k.clone(), second.conf.b.clone(), first.class.conf.c.clone(), inc, z.clone())?;
        let ext_ck = ExtGroup::with_presentation(ext.presentation(first.c).clone(), &k);
        let eta = extension_class(&conf, &ext_ck)?;
        let kparts = krull_schmidt_decompose(&k, self.atlas())?;
        let composite = kparts
            .summands
            .iter()
            .map(|s| (s.index, pushout_ext(&s.retraction, &ext_ck, &eta, ext.group(first.c, s.index))))
            .collect();

        // L = coker Hom(−, y'), M = coker Hom(−, y y'), N = coker Hom(−, y)
        let yb2 = yoneda_module(t, &second.conf.b);
        let ymap2 = yoneda_map(t, &second.conf.y, &yb2.1, &first.yb.1);
        let zmap = yoneda_map(t, &z, &yb2.1, &first.yc.1);
        let (l, _, ql) = first.yb.0.quotient(&ymap2.image_spaces())?;
        let (m, _, qm) = first.yc.0.quotient(&zmap.image_spaces())?;
        let (nn, _, qn) = first.yc.0.quotient(&first.ymap.image_spaces())?;
        let f = GammaMap {
            maps: (0..t.len())
                .map(|i| &(&qm[i].projection * &first.ymap.maps[i]) * &ql[i].lift)
                .collect(),
        };
        let g = GammaMap {
            maps: (0..t.len()).map(|i| &qn[i].projection * &qm[i].lift).collect(),
        };
        let step3_exact = f.is_natural(&l, &m)
            && g.is_natural(&m, &nn)
            && g.after(&f).is_zero()
            && g.is_surjective()
            && (0..t.len()).all(|i| f.maps[i].rank() + g.maps[i].rank() == m.dims()[i]);
        let factors_l = composition_factors(&l)?;
        let factors_m = composition_factors(&m)?;
        let factors_n = composition_factors(&nn)?;
        let (sl, sm, sn) = (support(&factors_l), support(&factors_m), support(&factors_n));
        let step3_factors = sm.is_subset(&sl.union(&sn).copied().collect());
        debug_assert_eq!(b, &second.conf.c);
        Ok(CompositeRecord {
            c: first.c,
            a: first.a,
            delta: first.class.delta.clone(),
            a2,
            eps: first.parts.summands.iter().map(|s| s.index).zip(eps.iter().cloned()).collect(),
            composite,
            factors_l,
            factors_m,
            factors_n,
            step3_exact,
            step3_factors,
        })
    }

    /// Stability along all basis morphisms, then `samples` random composable pairs of
    /// `F`-deflations whose composite must again lie in `F` with defect inside `def F`.
    pub fn verify_closed(&self, f: &Substructure, samples: usize, seed: u64) -> Result<ClosureReport, DefectError> {
        let serre = self.serre_from_substructure(f)?;
        let n = self.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|c| (0..n).map(move |a| (c, a))).collect();
        let nonzero: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(c, a)| !f.spaces[c][a].is_zero()).collect();
        let mut step3_failures = 0;
        for _ in 0..samples {
            let pool = if nonzero.is_empty() || rng.gen_bool(0.1) { &pairs } else { &nonzero };
            let &(c, a) = pool.choose(&mut rng).expect("nonempty atlas");
            let delta = pick(&f.spaces[c][a], &mut rng);
            let first = self.first_stage(c, a, &delta)?;
            let live: Vec<usize> = (0..n)
                .filter(|&x| first.parts.summands.iter().any(|s| !f.spaces[s.index][x].is_zero()))
                .collect();
            let a2 = match live.choose(&mut rng) {
                Some(&x) if rng.gen_bool(0.9) => x,
                _ => rng.gen_range(0..n),
            };
            let eps: Vec<Vec<u64>> = first
                .parts
                .summands
                .iter()
                .map(|s| pick(&f.spaces[s.index][a2], &mut rng))
                .collect();
            let rec = self.composite(&first, a2, &eps)?;
            if !rec.step3_ok() {
                step3_failures += 1;
            }
            check_record(&rec, f, &serre)?;
        }
        Ok(ClosureReport {
            serre,
            samples,
            step3_failures,
        })
    }

    /// Every composable pair with atlas ends, over all elements of all Ext groups.
    pub fn all_composites(&self, limit: usize) -> Result<Vec<CompositeRecord>, DefectError> {
        let n = self.len();
        let field = self.table().field();
        let mut out = Vec::new();
        for c in 0..n {
            for a in 0..n {
                for delta in Subspace::full(field, self.ext().group(c, a).dim()).elements() {
                    let first = self.first_stage(c, a, &delta)?;
                    for a2 in 0..n {
                        let choices: Vec<Vec<Vec<u64>>> = first
                            .parts
                            .summands
                            .iter()
                            .map(|s| Subspace::full(field, self.ext().group(s.index, a2).dim()).elements())
                            .collect();
                        let count: usize = choices.iter().map(|c| c.len()).product();
                        if out.len() + count > limit {
                            return Err(DefectError::TooLarge(format!("more than {limit} composable pairs")));
                        }
                        for eps in cartesian(&choices) {
                            out.push(self.composite(&first, a2, &eps)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn check_record(rec: &CompositeRecord, f: &Substructure, serre: &IndexSet) -> Result<(), DefectError> {
    if !rec.applies(f) {
        return Ok(());
    }
    if !rec.composite_in(f) {
        return Err(DefectError::ClosureViolation(format!("composite leaves F: {}", rec.describe())));
    }
    if !support(&rec.factors_m).is_subset(serre) {
        return Err(DefectError::ClosureViolation(format!(
            "composite defect has factors outside def F: {}",
            rec.describe()
        )));
    }
    Ok(())
}

/// A random element, nonzero nine times out of ten when the space allows it.
pub(crate) fn pick<R: Rng>(space: &Subspace, rng: &mut R) -> Vec<u64> {
    if space.is_zero() || rng.gen_bool(0.1) {
        return space.random_element(rng);
    }
    loop {
        let v = space.random_element(rng);
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

fn cartesian(choices: &[Vec<Vec<u64>>]) -> Vec<Vec<Vec<u64>>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}
