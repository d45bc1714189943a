use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::closure::check_record;
use super::{family_set, Analysis, CompositeRecord, DefectError, ExtTable, Origin, Substructure};
use crate::exactfield::{enumerate_subspaces, Matrix, Subspace};
use crate::funcat::IndexSet;
use crate::repmod::{direct_sum, Representation};

pub const ORACLE_MAX_EXT_DIM: usize = 12;
pub const ORACLE_MAX_FAMILIES: usize = 1 << 20;
const ORACLE_MAX_COMPOSITES: usize = 200_000;

/// Every family of subspaces on the atlas pairs, sorted into unstable, stable and closed.
#[derive(Clone, Debug)]
pub struct OracleSweep {
    pub families: usize,
    pub closed: Vec<Substructure>,
    pub unstable: Vec<(Substructure, DefectError)>,
    pub stable_not_closed: Vec<(Substructure, DefectError)>,
    pub composites: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundtripReport {
    pub serre_count: usize,
    /// `def F(S) = S` for every Serre subset.
    pub serre_roundtrip: bool,
    /// `S ⊆ S'` iff `F(S) ⊆ F(S')`.
    pub order_preserving: bool,
    /// `{F(S)}` equals the oracle's closed families, and `F(def F) = F` on them.
    pub oracle_match: Option<bool>,
    pub failures: Vec<String>,
}

impl RoundtripReport {
    pub fn ok(&self) -> bool {
        self.serre_roundtrip && self.order_preserving && self.oracle_match != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactStructure {
    pub serre: IndexSet,
    /// `(c, a, dim F(c, a))` for the pairs with `F(c, a) ≠ 0`.
    pub classes: Vec<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactStructureReport {
    pub structures: Vec<ExactStructure>,
    pub maximal_is_all: bool,
    pub minimal_is_split: bool,
}

impl ExactStructureReport {
    pub fn count(&self) -> usize {
        self.structures.len()
    }
}

/// A deliberately broken family and what happened to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlOutcome {
    pub description: String,
    pub expected: &'static str,
    pub got: String,
}

impl ControlOutcome {
    pub fn rejected(&self) -> bool {
        self.got == self.expected
    }
}

fn diagnostic(r: &Result<(), DefectError>) -> String {
    match r {
        Ok(()) => "accepted".into(),
        Err(DefectError::NotASubbifunctor(_)) => "NotASubbifunctor".into(),
        Err(DefectError::ClosureViolation(_)) => "ClosureViolation".into(),
        Err(e) => format!("{e}"),
    }
}

impl Analysis {
    pub fn oracle_sweep(&self) -> Result<OracleSweep, DefectError> {
        let field = self.table().field();
        let n = self.len();
        if field.p() > 3 {
            return Err(DefectError::TooLarge(format!("p = {} exceeds 3", field.p())));
        }
        let total = self.ext().total_dim();
        if total > ORACLE_MAX_EXT_DIM {
            return Err(DefectError::TooLarge(format!(
                "total Ext dimension {total} exceeds {ORACLE_MAX_EXT_DIM}"
            )));
        }
        let slots: Vec<(usize, usize, Vec<Subspace>)> = (0..n)
            .flat_map(|c| (0..n).map(move |a| (c, a)))
            .filter_map(|(c, a)| {
                let d = self.ext().group(c, a).dim();
                (d > 0).then(|| (c, a, enumerate_subspaces(field, d)))
            })
            .collect();
        let families = slots
            .iter()
            .try_fold(1usize, |acc, s| acc.checked_mul(s.2.len()).filter(|&x| x <= ORACLE_MAX_FAMILIES))
            .ok_or_else(|| DefectError::TooLarge(format!("more than {ORACLE_MAX_FAMILIES} families")))?;
        let base = self.zero_substructure();
        let mut stable = Vec::new();
        let mut unstable = Vec::new();
        let mut idx = vec![0usize; slots.len()];
        for _ in 0..families {
            let mut f = base.clone();
            f.origin = Origin::Oracle;
            for (k, (c, a, subs)) in slots.iter().enumerate() {
                f.spaces[*c][*a] = subs[idx[k]].clone();
            }
            match self.ext().check_stability(&f.spaces) {
                Ok(()) => stable.push(f),
                Err(e) => unstable.push((f, e)),
            }
            for (k, s) in slots.iter().enumerate() {
                idx[k] += 1;
                if idx[k] < s.2.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
        let records = if stable.is_empty() {
            Vec::new()
        } else {
            self.all_composites(ORACLE_MAX_COMPOSITES)?
        };
        let mut closed = Vec::new();
        let mut stable_not_closed = Vec::new();
        for f in stable {
            match self.check_closed_exhaustive(&f, &records) {
                Ok(()) => closed.push(f),
                Err(e) => stable_not_closed.push((f, e)),
            }
        }
        Ok(OracleSweep {
            families,
            closed,
            unstable,
            stable_not_closed,
            composites: records.len(),
        })
    }

    /// The closed subbifunctors found by brute force, independent of the defect correspondence.
    pub fn enumerate_substructures_oracle(&self) -> Result<Vec<Substructure>, DefectError> {
        Ok(self.oracle_sweep()?.closed)
    }

    pub fn check_closed_exhaustive(&self, f: &Substructure, records: &[CompositeRecord]) -> Result<(), DefectError> {
        let serre = self.serre_from_substructure(f)?;
        records.iter().try_for_each(|r| check_record(r, f, &serre))
    }

    pub fn theorem_roundtrip(&self, oracle: Option<&[Substructure]>) -> Result<RoundtripReport, DefectError> {
        let poset = self.serre_subsets();
        let subs: Vec<Substructure> = poset.elements.iter().map(|s| self.substructure_from_serre(s)).collect();
        let mut report = RoundtripReport {
            serre_count: poset.elements.len(),
            serre_roundtrip: true,
            order_preserving: true,
            ..Default::default()
        };
        for (s, f) in poset.elements.iter().zip(&subs) {
            let back = self.serre_from_substructure(f)?;
            if &back != s {
                report.serre_roundtrip = false;
                report.failures.push(format!("def F({s:?}) = {back:?}"));
            }
        }
        for (i, s) in poset.elements.iter().enumerate() {
            for (j, t) in poset.elements.iter().enumerate() {
                if s.is_subset(t) != subs[i].is_contained_in(&subs[j]) {
                    report.order_preserving = false;
                    report.failures.push(format!("order differs between {s:?} and {t:?}"));
                }
            }
        }
        if let Some(oracle) = oracle {
            let mut ok = family_set(oracle) == family_set(&subs);
            if !ok {
                report.failures.push(format!(
                    "oracle finds {} closed families, the correspondence gives {}",
                    oracle.len(),
                    subs.len()
                ));
            }
            for f in oracle {
                let g = self.substructure_from_serre(&self.serre_from_substructure(f)?);
                if !g.same_family(f) {
                    ok = false;
                    report.failures.push(format!("F(def F) differs from F for dims {:?}", f.dims()));
                }
            }
            report.oracle_match = Some(ok);
        }
        Ok(report)
    }

    pub fn exact_structure_report(&self, full_module_category: bool) -> Result<ExactStructureReport, DefectError> {
        if !full_module_category {
            return Err(DefectError::NotFullModuleCategory);
        }
        let n = self.len();
        let poset = self.serre_subsets();
        let structures: Vec<ExactStructure> = poset
            .elements
            .iter()
            .map(|s| {
                let f = self.substructure_from_serre(s);
                let classes = (0..n)
                    .flat_map(|c| (0..n).map(move |a| (c, a)))
                    .filter(|&(c, a)| !f.spaces[c][a].is_zero())
                    .map(|(c, a)| (c, a, f.spaces[c][a].dim()))
                    .collect();
                ExactStructure {
                    serre: s.clone(),
                    classes,
                }
            })
            .collect();
        let all = self.substructure_from_serre(&self.simple_defects().clone());
        let none = self.substructure_from_serre(&IndexSet::new());
        Ok(ExactStructureReport {
            structures,
            maximal_is_all: all.same_family(&self.full_substructure()),
            minimal_is_split: none.same_family(&self.zero_substructure()),
        })
    }

    /// Broken families that must be rejected: brute-force non-closed families when the
    /// oracle is in range, random subspace families, and families on the atlas extended
    /// by doubled objects that ignore the inclusions into the double.
    pub fn negative_controls(&self, samples: usize, seed: u64) -> Vec<ControlOutcome> {
        let mut out = Vec::new();
        if let Ok(sweep) = self.oracle_sweep() {
            for (f, e) in sweep.unstable.iter().take(3) {
                out.push(ControlOutcome {
                    description: format!("unstable family with dims {:?}", f.dims()),
                    expected: "NotASubbifunctor",
                    got: {
                        debug_assert!(matches!(e, DefectError::NotASubbifunctor(_)));
                        diagnostic(&self.verify_closed(f, samples, seed).map(|_| ()))
                    },
                });
            }
            for (f, e) in sweep.stable_not_closed.iter().take(3) {
                out.push(ControlOutcome {
                    description: format!("stable, non-closed family with dims {:?}", f.dims()),
                    expected: "ClosureViolation",
                    got: diagnostic(&Err(e.clone())),
                });
            }
        }
        out.extend(self.random_controls(samples, seed));
        out.extend(self.doubled_object_controls());
        out
    }

    fn random_controls(&self, samples: usize, seed: u64) -> Vec<ControlOutcome> {
        let n = self.len();
        let field = self.table().field();
        let known = family_set(
            &self
                .serre_subsets()
                .elements
                .iter()
                .map(|s| self.substructure_from_serre(s))
                .collect::<Vec<_>>(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for _ in 0..40 {
            if out.len() == 3 {
                break;
            }
            let mut f = self.zero_substructure();
            for c in 0..n {
                for a in 0..n {
                    let d = self.ext().group(c, a).dim();
                    let k = rng.gen_range(0..=d);
                    f.spaces[c][a] = Subspace::random(field, d, k, &mut rng);
                }
            }
            if known.contains(&super::family_key(&f)) {
                continue;
            }
            f.origin = Origin::Candidate("random".into());
            let expected = if self.ext().check_stability(&f.spaces).is_err() {
                "NotASubbifunctor"
            } else {
                "ClosureViolation"
            };
            out.push(ControlOutcome {
                description: format!("random family with dims {:?}", f.dims()),
                expected,
                got: diagnostic(&self.verify_closed(&f, samples, seed).map(|_| ())),
            });
        }
        out
    }

    fn doubled_object_controls(&self) -> Vec<ControlOutcome> {
        let n = self.len();
        let field = self.table().field();
        let Some((c, a)) = (0..n)
            .flat_map(|c| (0..n).map(move |a| (c, a)))
            .find(|&(c, a)| self.ext().group(c, a).dim() > 0)
        else {
            return Vec::new();
        };
        let x = self.atlas().rep(a);
        let double = direct_sum(x.algebra(), &[x, x]);
        let mut objects: Vec<Representation> = (0..n).map(|i| self.atlas().rep(i).clone()).collect();
        objects.push(double.rep.clone());
        let big = ExtTable::new(&objects);
        let full: Vec<Vec<Subspace>> = (0..=n)
            .map(|i| (0..=n).map(|j| Subspace::full(field, big.group(i, j).dim())).collect())
            .collect();
        let target = big.group(c, n);
        let image = |m: &Matrix| Subspace::full(field, m.shape().1).image_under(m);
        let first = image(&big.group(c, a).pushout_matrix(&double.injections[0], target));
        let diag = image(&big.group(c, a).pushout_matrix(
            &double.injections[0].add(&double.injections[1]),
            target,
        ));
        let names = self.atlas().names();
        let (cname, name) = (names[c], names[a]);
        [
            ("first summand", first),
            ("diagonal", diag),
            ("zero", Subspace::zero(field, target.dim())),
        ]
        .into_iter()
        .map(|(label, sp)| {
            let mut spaces = full.clone();
            spaces[c][n] = sp;
            ControlOutcome {
                description: format!("{label} subspace of E({cname}, {name} ⊕ {name}), all else full"),
                expected: "NotASubbifunctor",
                got: diagnostic(&big.check_stability(&spaces)),
            }
        })
        .collect()
    }
}
