use super::{end_radical, hom_space, is_indecomposable, kernel, factor_through_mono, EndRadical, RepError, RepMorphism, Representation};

/// One indecomposable of the atlas with its endomorphism radical.
#[derive(Clone, Debug)]
pub struct AtlasEntry {
    pub name: String,
    pub rep: Representation,
    pub radical: EndRadical,
}

impl AtlasEntry {
    pub fn in_radical(&self, f: &RepMorphism) -> bool {
        self.radical.contains(f)
    }
}

/// A list of pairwise non-isomorphic indecomposables.
#[derive(Clone, Debug)]
pub struct Atlas {
    entries: Vec<AtlasEntry>,
}

impl Atlas {
    pub fn new(members: Vec<(String, Representation)>) -> Result<Self, RepError> {
        let mut entries: Vec<AtlasEntry> = Vec::with_capacity(members.len());
        for (name, rep) in members {
            if !is_indecomposable(&rep)? {
                return Err(RepError::NotIndecomposable(name));
            }
            let radical = end_radical(&rep)?;
            let entry = AtlasEntry { name, rep, radical };
            for other in &entries {
                if other.rep.dims() == entry.rep.dims() && splits_off(other, &entry.rep).is_some() {
                    return Err(RepError::DuplicateIsoClass(other.name.clone(), entry.name.clone()));
                }
            }
            entries.push(entry);
        }
        Ok(Atlas { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[AtlasEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &AtlasEntry {
        &self.entries[i]
    }

    pub fn rep(&self, i: usize) -> &Representation {
        &self.entries[i].rep
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    /// Index of the atlas member isomorphic to `m`, if `m` is indecomposable and listed.
    pub fn identify(&self, m: &Representation) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.rep.dims() == m.dims() && splits_off(e, m).is_some())
    }
}

/// A pair `f: X -> M`, `g: M -> X` with `g f` invertible, found among basis pairs.
fn splits_off(entry: &AtlasEntry, m: &Representation) -> Option<(RepMorphism, RepMorphism)> {
    let into = hom_space(&entry.rep, m);
    if into.dim() == 0 {
        return None;
    }
    let back = hom_space(m, &entry.rep);
    // rad End(X) is a subspace, so if every basis product is radical, all products are
    for f in into.basis() {
        for g in back.basis() {
            let gf = g.after(f);
            if !entry.in_radical(&gf) {
                return Some((f.clone(), g.clone()));
            }
        }
    }
    None
}

/// A summand `X_index` of `B` with `retraction ∘ section = id`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub index: usize,
    pub section: RepMorphism,
    pub retraction: RepMorphism,
}

#[derive(Clone, Debug, Default)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn multiplicities(&self, atlas_len: usize) -> Vec<usize> {
        let mut m = vec![0; atlas_len];
        for s in &self.summands {
            m[s.index] += 1;
        }
        m
    }

    pub fn indices(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.index).collect()
    }
}

/// Split `B` into atlas members, peeling off one summand at a time.
pub fn krull_schmidt_decompose(b: &Representation, atlas: &Atlas) -> Result<Decomposition, RepError> {
    let mut summands = Vec::new();
    let mut cur = b.clone();
    let mut cur_inc = b.identity();
    let mut cur_ret = b.identity();
    while !cur.is_zero() {
        let found = atlas
            .entries()
            .iter()
            .enumerate()
            .find_map(|(i, e)| splits_off(e, &cur).map(|fg| (i, fg)));
        let Some((index, (f, g))) = found else {
            return Err(RepError::AtlasIncomplete(cur.dims().to_vec()));
        };
        let gf_inv = g.after(&f).inverse().expect("non-radical endomorphism of a local ring");
        let s = f;
        let r = gf_inv.after(&g);
        summands.push(Summand {
            index,
            section: cur_inc.after(&s),
            retraction: r.after(&cur_ret),
        });
        let (rest, k) = kernel(&r, &cur);
        let complement = cur.identity().sub(&s.after(&r));
        let rho = factor_through_mono(&k, &complement).expect("id - s r lands in ker r");
        cur_inc = cur_inc.after(&k);
        cur_ret = rho.after(&cur_ret);
        cur = rest;
    }
    Ok(Decomposition { summands })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::*;
    use crate::exactfield::Matrix;

    fn atlas_of(reps: Vec<Representation>) -> Atlas {
        Atlas::new(reps.into_iter().enumerate().map(|(i, r)| (format!("X{i}"), r)).collect()).unwrap()
    }

    fn check_sections(b: &Representation, d: &Decomposition, atlas: &Atlas) {
        let mut total = RepMorphism::zero(b.field(), b.dims(), b.dims());
        for s in &d.summands {
            let x = atlas.rep(s.index);
            assert!(s.section.commutes(x, b));
            assert!(s.retraction.commutes(b, x));
            assert_eq!(s.retraction.after(&s.section), x.identity());
            total = total.add(&s.section.after(&s.retraction));
        }
        assert_eq!(total, b.identity());
    }

    #[test]
    fn semisimple_sum_splits() {
        let alg = a2(101);
        let atlas = atlas_of(a2_atlas(&alg));
        let b = direct_sum(&alg, &[&Representation::simple(&alg, 0), &Representation::simple(&alg, 1)]).rep;
        let d = krull_schmidt_decompose(&b, &atlas).unwrap();
        assert_eq!(d.multiplicities(3), vec![1, 0, 1]);
        check_sections(&b, &d, &atlas);
    }

    #[test]
    fn nonsplit_middle_term_is_projective() {
        let alg = a2(101);
        let atlas = atlas_of(a2_atlas(&alg));
        // P1 presented in a non-standard basis
        let b = Representation::new(
            alg.clone(),
            vec![1, 1],
            vec![Matrix::from_i64_rows(field(101), &[vec![5]], 1).unwrap()],
        )
        .unwrap();
        let d = krull_schmidt_decompose(&b, &atlas).unwrap();
        assert_eq!(d.multiplicities(3), vec![0, 1, 0]);
        check_sections(&b, &d, &atlas);
    }

    #[test]
    fn zero_has_empty_decomposition() {
        let alg = a2(101);
        let atlas = atlas_of(a2_atlas(&alg));
        let d = krull_schmidt_decompose(&Representation::zero(&alg), &atlas).unwrap();
        assert!(d.summands.is_empty());
    }

    #[test]
    fn multiplicities_do_not_depend_on_atlas_order() {
        let alg = a3(7);
        let reps: Vec<Representation> = (0..3)
            .flat_map(|i| (i..3).map(move |j| (i, j)))
            .map(|(i, j)| interval(&alg, i, j))
            .collect();
        let forward = atlas_of(reps.clone());
        let mut rev = reps.clone();
        rev.reverse();
        let backward = atlas_of(rev);
        let b = direct_sum(&alg, &[&reps[0], &reps[1], &reps[1], &reps[4], &reps[5]]).rep;
        let d1 = krull_schmidt_decompose(&b, &forward).unwrap();
        let d2 = krull_schmidt_decompose(&b, &backward).unwrap();
        let m1 = d1.multiplicities(6);
        let mut m2 = d2.multiplicities(6);
        m2.reverse();
        assert_eq!(m1, m2);
        assert_eq!(m1, vec![1, 2, 0, 0, 1, 1]);
        check_sections(&b, &d1, &forward);
        check_sections(&b, &d2, &backward);
    }

    #[test]
    fn missing_indecomposable_is_reported() {
        let alg = a2(101);
        let atlas = atlas_of(vec![Representation::simple(&alg, 0), Representation::simple(&alg, 1)]);
        let p1 = Representation::projective(&alg, 0);
        assert!(matches!(
            krull_schmidt_decompose(&p1, &atlas),
            Err(RepError::AtlasIncomplete(_))
        ));
    }

    #[test]
    fn atlas_rejects_duplicates_and_decomposables() {
        let alg = a2(101);
        let s = Representation::simple(&alg, 0);
        let err = Atlas::new(vec![("a".into(), s.clone()), ("b".into(), s.clone())]).unwrap_err();
        assert_eq!(err, RepError::DuplicateIsoClass("a".into(), "b".into()));
        let ss = direct_sum(&alg, &[&s, &Representation::simple(&alg, 1)]).rep;
        assert_eq!(
            Atlas::new(vec![("ss".into(), ss)]).unwrap_err(),
            RepError::NotIndecomposable("ss".into())
        );
    }

    #[test]
    fn decomposes_in_characteristic_two() {
        let alg = a2(2);
        let atlas = atlas_of(a2_atlas(&alg));
        let reps = a2_atlas(&alg);
        let b = direct_sum(&alg, &[&reps[1], &reps[1], &reps[0]]).rep;
        let d = krull_schmidt_decompose(&b, &atlas).unwrap();
        assert_eq!(d.multiplicities(3), vec![1, 2, 0]);
        check_sections(&b, &d, &atlas);
    }
}
