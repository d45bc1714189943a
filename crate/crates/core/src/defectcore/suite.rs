use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::closure::pick;
use super::{support, Analysis, DefectError};
use crate::exactfield::{Matrix, Quotient, Subspace};
use crate::extconf::{
    equivalence, extension_class, pullback_ext, pushout_ext, realize, realize_pullback, ConflationClass, ExtGroup,
};
use crate::funcat::{composition_factors, gamma_hom_space, yoneda_map, yoneda_module, GammaMap, GammaModule};
use crate::repmod::{direct_sum, HomSpace, RepMorphism, Representation};

/// Outcome of one sampled invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// `coker Hom(−, y)` with the data needed to induce maps between such cokernels.
struct Coker {
    evals: Vec<HomSpace>,
    module: GammaModule,
    image: Vec<Subspace>,
    quots: Vec<Quotient>,
}

impl Analysis {
    fn coker(&self, y: &RepMorphism, b: &Representation, c: &Representation) -> Result<Coker, DefectError> {
        let t = self.table();
        let (_, eb) = yoneda_module(t, b);
        let (yc, ec) = yoneda_module(t, c);
        let image = yoneda_map(t, y, &eb, &ec).image_spaces();
        let (module, _, quots) = yc.quotient(&image)?;
        Ok(Coker {
            evals: ec,
            module,
            image,
            quots,
        })
    }

    /// The map of cokernels induced by `h: Hom(−, C) -> Hom(−, C')`, if it is well defined.
    fn induced(&self, from: &Coker, to: &Coker, h: &GammaMap) -> Option<GammaMap> {
        let n = self.len();
        let well_defined = (0..n).all(|i| from.image[i].image_under(&h.maps[i]).is_subspace_of(&to.image[i]));
        well_defined.then(|| GammaMap {
            maps: (0..n)
                .map(|i| &(&to.quots[i].projection * &h.maps[i]) * &from.quots[i].lift)
                .collect(),
        })
    }

    /// A random class, drawn from a nonzero Ext group most of the time.
    fn random_class<R: Rng>(&self, rng: &mut R) -> (usize, usize, Vec<u64>) {
        let n = self.len();
        let nonzero: Vec<(usize, usize)> = (0..n)
            .flat_map(|c| (0..n).map(move |a| (c, a)))
            .filter(|&(c, a)| self.ext().group(c, a).dim() > 0)
            .collect();
        let (c, a) = match nonzero.choose(rng) {
            Some(&pair) if rng.gen_bool(0.8) => pair,
            _ => (rng.gen_range(0..n), rng.gen_range(0..n)),
        };
        let full = Subspace::full(self.table().field(), self.ext().group(c, a).dim());
        (c, a, pick(&full, rng))
    }

    pub fn check_dual_construction(&self, samples: usize, seed: u64) -> Result<Check, DefectError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut passed = 0;
        for _ in 0..samples {
            let (c, a, delta) = self.random_class(&mut rng);
            let d = self.defect(&self.realize(c, a, &delta))?;
            if d.consistent && (!delta.iter().all(|&x| x == 0) || d.module.is_zero()) {
                passed += 1;
            }
        }
        Ok(Check {
            name: "defect dual construction",
            passed,
            total: samples,
        })
    }

    /// `defect(c^*δ) -> defect(δ)` along the square of a realized pullback is injective.
    pub fn check_pullback_monotone(&self, samples: usize, seed: u64) -> Result<Check, DefectError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        let t = self.table();
        let mut passed = 0;
        for _ in 0..samples {
            let (c, a, delta) = self.random_class(&mut rng);
            let sources: Vec<usize> = (0..n).filter(|&x| t.hom(x, c).dim() > 0).collect();
            let c2 = *sources.choose(&mut rng).expect("identity is a morphism");
            let (_, mor) = t.hom(c2, c).random(&mut rng);
            let cl = self.realize(c, a, &delta);
            let (pulled, _, _) = realize_pullback(&mor, &cl, self.ext().group(c2, a))?;
            let from = self.coker(&pulled.conf.y, &pulled.conf.b, &pulled.conf.c)?;
            let to = self.coker(&cl.conf.y, &cl.conf.b, &cl.conf.c)?;
            let h = yoneda_map(t, &mor, &from.evals, &to.evals);
            if let Some(map) = self.induced(&from, &to, &h) {
                if map.is_natural(&from.module, &to.module) && map.is_injective() {
                    passed += 1;
                }
            }
        }
        Ok(Check {
            name: "pullback monotonicity",
            passed,
            total: samples,
        })
    }

    /// `defect(δ) -> defect(a_*δ)` induced by the identity of `Hom(−, C)` is surjective.
    pub fn check_pushout_monotone(&self, samples: usize, seed: u64) -> Result<Check, DefectError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        let t = self.table();
        let mut passed = 0;
        for _ in 0..samples {
            let (c, a, delta) = self.random_class(&mut rng);
            let targets: Vec<usize> = (0..n).filter(|&x| t.hom(a, x).dim() > 0).collect();
            let a2 = *targets.choose(&mut rng).expect("identity is a morphism");
            let (_, mor) = t.hom(a, a2).random(&mut rng);
            let cl = self.realize(c, a, &delta);
            let pushed = pushout_ext(&mor, self.ext().group(c, a), &delta, self.ext().group(c, a2));
            let cl2 = self.realize(c, a2, &pushed);
            let from = self.coker(&cl.conf.y, &cl.conf.b, &cl.conf.c)?;
            let to = self.coker(&cl2.conf.y, &cl2.conf.b, &cl2.conf.c)?;
            if let Some(map) = self.induced(&from, &to, &identity_on(&from.evals)) {
                if map.is_natural(&from.module, &to.module) && map.is_surjective() {
                    passed += 1;
                }
            }
        }
        Ok(Check {
            name: "pushout monotonicity",
            passed,
            total: samples,
        })
    }

    /// The four-term sequence of composable deflations, sampled with `F = E`.
    pub fn check_step3(&self, samples: usize, seed: u64) -> Result<Check, DefectError> {
        let report = self.verify_closed(&self.full_substructure(), samples, seed)?;
        Ok(Check {
            name: "composition four-term sequence",
            passed: samples - report.step3_failures,
            total: samples,
        })
    }

    /// `defect(δ₁ ⊕ δ₂) ≅ defect(δ₁) ⊕ defect(δ₂)` and the sum conflation realizes `δ₁ ⊕ δ₂`.
    pub fn check_additivity(&self, samples: usize, seed: u64) -> Result<Check, DefectError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut passed = 0;
        for _ in 0..samples {
            let (c1, a1, d1) = self.random_class(&mut rng);
            let (c2, a2, d2) = self.random_class(&mut rng);
            let (k1, k2) = (self.realize(c1, a1, &d1), self.realize(c2, a2, &d2));
            if self.additive_pair(&k1, &k2)? {
                passed += 1;
            }
        }
        Ok(Check {
            name: "additivity",
            passed,
            total: samples,
        })
    }

    fn additive_pair(&self, k1: &ConflationClass, k2: &ConflationClass) -> Result<bool, DefectError> {
        let t = self.table();
        let n = self.len();
        let sum = k1.conf.direct_sum(&k2.conf);
        let alg = sum.a.algebra().clone();
        let cs = direct_sum(&alg, &[&k1.conf.c, &k2.conf.c]);
        let as_ = direct_sum(&alg, &[&k1.conf.a, &k2.conf.a]);

        let whole = self.coker(&sum.y, &sum.b, &sum.c)?;
        let parts = [
            self.coker(&k1.conf.y, &k1.conf.b, &k1.conf.c)?,
            self.coker(&k2.conf.y, &k2.conf.b, &k2.conf.c)?,
        ];
        let target = GammaModule::direct_sum(&[&parts[0].module, &parts[1].module]);
        let proj: Vec<GammaMap> = (0..2)
            .map(|k| yoneda_map(t, &cs.projections[k], &whole.evals, &parts[k].evals))
            .collect();
        let maps: Vec<Matrix> = (0..n)
            .map(|i| {
                let rows: Vec<Matrix> = (0..2)
                    .map(|k| &(&parts[k].quots[i].projection * &proj[k].maps[i]) * &whole.quots[i].lift)
                    .collect();
                Matrix::vstack(&[&rows[0], &rows[1]])
            })
            .collect();
        let iso = GammaMap { maps };
        let defects_ok = iso.is_natural(&whole.module, &target) && iso.is_isomorphism();

        let ext = Arc::new(ExtGroup::new(&sum.c, &sum.a));
        let class = extension_class(&sum, &ext)?;
        let realized = realize(&ext, &class);
        let mut class_ok = equivalence(&realized.conf, &sum).is_some();
        let cls = [(k1, 0usize), (k2, 1usize)];
        for &(kc, ic) in &cls {
            let cidx = self.atlas_index(&kc.conf.c);
            for &(ka, ia) in &cls {
                let (Some(c), Some(a)) = (cidx, self.atlas_index(&ka.conf.a)) else {
                    continue;
                };
                let mid = ExtGroup::with_presentation(self.ext().presentation(c).clone(), &sum.a);
                let restricted = pullback_ext(&cs.injections[ic], &ext, &class, &mid);
                let comp = pushout_ext(&as_.projections[ia], &mid, &restricted, self.ext().group(c, a));
                let expected = if ic == ia { kc.delta.clone() } else { vec![0; comp.len()] };
                class_ok &= comp == expected;
            }
        }
        Ok(defects_ok && class_ok)
    }

    /// Kernels and cokernels of random maps between defects have factors inside the simple defects.
    pub fn check_serre_closure(&self, samples: usize, seed: u64) -> Result<Check, DefectError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = self.table().field().p();
        let mut passed = 0;
        for _ in 0..samples {
            let (c1, a1, d1) = self.random_class(&mut rng);
            let (c2, a2, d2) = self.random_class(&mut rng);
            let m = self.defect(&self.realize(c1, a1, &d1))?.module;
            let n = self.defect(&self.realize(c2, a2, &d2))?.module;
            let basis = gamma_hom_space(&m, &n);
            let mut map = GammaMap::zero(&m, &n);
            for g in &basis {
                let s = rng.gen_range(0..p);
                for (acc, x) in map.maps.iter_mut().zip(&g.maps) {
                    acc.add_scaled(s, x);
                }
            }
            let (k, _) = map.kernel(&m);
            let (q, _) = map.cokernel(&n);
            let inside = support(&composition_factors(&k)?).is_subset(self.simple_defects())
                && support(&composition_factors(&q)?).is_subset(self.simple_defects());
            if inside && map.is_natural(&m, &n) {
                passed += 1;
            }
        }
        Ok(Check {
            name: "serre closure of defects",
            passed,
            total: samples,
        })
    }

    /// Nonzero classes ending in a simple-defect object are realized by radical deflations.
    pub fn check_effaceability(&self, samples: usize, seed: u64) -> Result<Check, DefectError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|c| (0..n).map(move |a| (c, a)))
            .filter(|&(c, a)| self.ext().group(c, a).dim() > 0)
            .collect();
        if pairs.is_empty() {
            return Ok(Check {
                name: "effaceability witness",
                passed: 0,
                total: 0,
            });
        }
        let mut passed = 0;
        for _ in 0..samples {
            let &(c, a) = pairs.choose(&mut rng).expect("nonempty");
            let full = Subspace::full(self.table().field(), self.ext().group(c, a).dim());
            let delta = loop {
                let v = full.random_element(&mut rng);
                if v.iter().any(|&x| x != 0) {
                    break v;
                }
            };
            let first = self.first_stage(c, a, &delta)?;
            let radical = first
                .parts
                .summands
                .iter()
                .all(|s| s.index != c || self.atlas().entry(c).in_radical(&first.class.conf.y.after(&s.section)));
            if radical && self.simple_defects().contains(&c) {
                passed += 1;
            }
        }
        Ok(Check {
            name: "effaceability witness",
            passed,
            total: samples,
        })
    }

    /// `F(S)(c, a) = {δ : factors(defect δ) ⊆ S}`, exhaustively for `p ≤ 3`, else sampled.
    pub fn check_membership(&self, samples: usize, seed: u64) -> Result<Check, DefectError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.len();
        let field = self.table().field();
        let exhaustive = field.p() <= 3;
        let subsets = self.serre_subsets().elements;
        let mut passed = 0;
        let mut total = 0;
        let mut check = |s: &super::IndexSet, c: usize, a: usize, delta: &[u64], f: &super::Substructure| {
            let factors = self.defect(&self.realize(c, a, delta))?.factors;
            total += 1;
            if f.spaces[c][a].contains(delta) == support(&factors).is_subset(s) {
                passed += 1;
            }
            Ok::<(), DefectError>(())
        };
        if exhaustive {
            for s in &subsets {
                let f = self.substructure_from_serre(s);
                for c in 0..n {
                    for a in 0..n {
                        for delta in Subspace::full(field, self.ext().group(c, a).dim()).elements() {
                            check(s, c, a, &delta, &f)?;
                        }
                    }
                }
            }
        } else {
            let fs: Vec<_> = subsets.iter().map(|s| self.substructure_from_serre(s)).collect();
            for _ in 0..samples {
                let k = rng.gen_range(0..subsets.len());
                let (c, a, delta) = self.random_class(&mut rng);
                check(&subsets[k], c, a, &delta, &fs[k])?;
            }
        }
        Ok(Check {
            name: "membership by defect factors",
            passed,
            total,
        })
    }
}

/// The identity of `Hom(−, C)`.
fn identity_on(evals: &[HomSpace]) -> GammaMap {
    GammaMap {
        maps: evals.iter().map(|e| Matrix::identity(e.field(), e.dim())).collect(),
    }
}
