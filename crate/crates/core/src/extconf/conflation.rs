use std::sync::Arc;

use super::{pullback_ext, pushout_ext, ExtError, ExtGroup, ProjectivePresentation};
use crate::exactfield::Matrix;
use crate::repmod::{direct_sum, factor_through_mono, hom_space, is_short_exact, RepMorphism, Representation};

/// A short exact sequence `A -x-> B -y-> C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflation {
    pub a: Representation,
    pub b: Representation,
    pub c: Representation,
    pub x: RepMorphism,
    pub y: RepMorphism,
}

impl Conflation {
    pub fn new(
        a: Representation,
        b: Representation,
        c: Representation,
        x: RepMorphism,
        y: RepMorphism,
    ) -> Result<Self, ExtError> {
        let conf = Conflation { a, b, c, x, y };
        if !conf.x.commutes(&conf.a, &conf.b) || !conf.y.commutes(&conf.b, &conf.c) || !conf.is_exact() {
            return Err(ExtError::NotExact);
        }
        Ok(conf)
    }

    /// `A -> A ⊕ C -> C`.
    pub fn split(a: &Representation, c: &Representation) -> Self {
        let ds = direct_sum(a.algebra(), &[a, c]);
        Conflation {
            a: a.clone(),
            b: ds.rep,
            c: c.clone(),
            x: ds.injections[0].clone(),
            y: ds.projections[1].clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        is_short_exact(&self.x, &self.y)
    }

    /// Termwise direct sum of two conflations.
    pub fn direct_sum(&self, other: &Conflation) -> Conflation {
        let alg = self.a.algebra();
        let sa = direct_sum(alg, &[&self.a, &other.a]);
        let sb = direct_sum(alg, &[&self.b, &other.b]);
        let sc = direct_sum(alg, &[&self.c, &other.c]);
        let x = sb.injections[0]
            .after(&self.x)
            .after(&sa.projections[0])
            .add(&sb.injections[1].after(&other.x).after(&sa.projections[1]));
        let y = sc.injections[0]
            .after(&self.y)
            .after(&sb.projections[0])
            .add(&sc.injections[1].after(&other.y).after(&sb.projections[1]));
        Conflation {
            a: sa.rep,
            b: sb.rep,
            c: sc.rep,
            x,
            y,
        }
    }
}

/// A class `δ ∈ E(C, A)` with a chosen realization.
#[derive(Clone, Debug)]
pub struct ConflationClass {
    pub ext: Arc<ExtGroup>,
    pub delta: Vec<u64>,
    pub conf: Conflation,
}

impl ConflationClass {
    pub fn is_split(&self) -> bool {
        self.delta.iter().all(|&d| d == 0)
    }
}

/// Pushout realization `B = (A ⊕ P0) / {(f ω, -ι ω)}`; the zero class gives `A ⊕ C`.
pub fn realize(ext: &Arc<ExtGroup>, delta: &[u64]) -> ConflationClass {
    assert_eq!(delta.len(), ext.dim(), "class length");
    let a = ext.second();
    let c = ext.first();
    if delta.iter().all(|&d| d == 0) {
        return ConflationClass {
            ext: ext.clone(),
            delta: delta.to_vec(),
            conf: Conflation::split(a, c),
        };
    }
    let pres = ext.presentation();
    let f = ext.cocycle(delta);
    let s = direct_sum(a.algebra(), &[a, pres.cover()]);
    let phi = s.injections[0]
        .after(&f)
        .sub(&s.injections[1].after(pres.inclusion()));
    let (b, proj, quots) = s.rep.quotient(&phi.image_spaces()).expect("image is a subrepresentation");
    let x = proj.after(&s.injections[0]);
    let psi = pres.surjection().after(&s.projections[1]);
    let y = RepMorphism {
        maps: psi.maps.iter().zip(&quots).map(|(m, q)| m * &q.lift).collect(),
    };
    ConflationClass {
        ext: ext.clone(),
        delta: delta.to_vec(),
        conf: Conflation {
            a: a.clone(),
            b,
            c: c.clone(),
            x,
            y,
        },
    }
}

/// The class in `ext` of a short exact sequence ending in `ext.first()` and starting in `ext.second()`.
pub fn extension_class(conf: &Conflation, ext: &ExtGroup) -> Result<Vec<u64>, ExtError> {
    if &conf.c != ext.first() || &conf.a != ext.second() {
        return Err(ExtError::Mismatch("conflation ends differ from the ext group".into()));
    }
    let pres = ext.presentation();
    let gens: Vec<Vec<u64>> = pres.generators().iter().map(|(_, g)| g.clone()).collect();
    let g = pres.lift_through(&gens, &conf.y, &conf.b).ok_or(ExtError::NotExact)?;
    let f = factor_through_mono(&conf.x, &g.after(pres.inclusion())).ok_or(ExtError::NotExact)?;
    Ok(ext.class_of_cocycle(&f))
}

/// Find `h: B1 -> B2` with `h x1 = want_x` and `y2 h = want_y`.
fn mediate(
    b1: &Representation,
    b2: &Representation,
    x1: &RepMorphism,
    y2: &RepMorphism,
    want_x: &RepMorphism,
    want_y: &RepMorphism,
) -> Option<RepMorphism> {
    let hs = hom_space(b1, b2);
    let mut target = want_x.to_vector();
    target.extend(want_y.to_vector());
    hs.solve_linear(&target, |h| {
        let mut v = h.after(x1).to_vector();
        v.extend(y2.after(h).to_vector());
        v
    })
}

/// An isomorphism `b: B1 -> B2` restricting to the identity on both ends, if the
/// two conflations are equivalent.
pub fn equivalence(c1: &Conflation, c2: &Conflation) -> Option<RepMorphism> {
    if c1.a != c2.a || c1.c != c2.c {
        return None;
    }
    let b = mediate(&c1.b, &c2.b, &c1.x, &c2.y, &c2.x, &c1.y)?;
    b.is_isomorphism().then_some(b)
}

/// `(a, b, c)` from one realized class to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflationMorphism {
    pub a: RepMorphism,
    pub b: RepMorphism,
    pub c: RepMorphism,
}

impl ConflationMorphism {
    pub fn identity(conf: &Conflation) -> Self {
        ConflationMorphism {
            a: conf.a.identity(),
            b: conf.b.identity(),
            c: conf.c.identity(),
        }
    }

    pub fn squares_commute(&self, src: &Conflation, tgt: &Conflation) -> bool {
        self.b.after(&src.x) == tgt.x.after(&self.a) && self.c.after(&src.y) == tgt.y.after(&self.b)
    }

    /// Commuting squares and `a_*δ1 = c^*δ2`.
    pub fn validate(&self, src: &ConflationClass, tgt: &ConflationClass) -> Result<(), ExtError> {
        if !self.squares_commute(&src.conf, &tgt.conf) {
            return Err(ExtError::NotCommuting);
        }
        if !classes_match(&self.a, &self.c, src, tgt) {
            return Err(ExtError::NotAMorphism);
        }
        Ok(())
    }
}

/// `E(C1, A2)` built on the presentation of `src`.
fn mixed_group(src: &ConflationClass, tgt: &ConflationClass) -> ExtGroup {
    ExtGroup::with_presentation(src.ext.presentation().clone(), tgt.ext.second())
}

fn classes_match(a: &RepMorphism, c: &RepMorphism, src: &ConflationClass, tgt: &ConflationClass) -> bool {
    let mid = mixed_group(src, tgt);
    pushout_ext(a, &src.ext, &src.delta, &mid) == pullback_ext(c, &tgt.ext, &tgt.delta, &mid)
}

/// Realize a morphism of extension classes `(a, c): δ1 -> δ2` by a middle map `b`.
pub fn realize_morphism(
    a: &RepMorphism,
    c: &RepMorphism,
    src: &ConflationClass,
    tgt: &ConflationClass,
) -> Result<ConflationMorphism, ExtError> {
    if !classes_match(a, c, src, tgt) {
        return Err(ExtError::NotAMorphism);
    }
    let want_x = tgt.conf.x.after(a);
    let want_y = c.after(&src.conf.y);
    let b = mediate(&src.conf.b, &tgt.conf.b, &src.conf.x, &tgt.conf.y, &want_x, &want_y)
        .ok_or(ExtError::NoCompletion)?;
    Ok(ConflationMorphism {
        a: a.clone(),
        b,
        c: c.clone(),
    })
}

/// Solver for the weak universal property of a pullback square
/// `B' -b-> B`, `B' -y'-> C'`, `C' -c-> C`, `B -y-> C`.
#[derive(Clone, Debug)]
pub struct WeakPullback {
    pub b: RepMorphism,
    pub y_prime: RepMorphism,
    pub c: RepMorphism,
    pub y: RepMorphism,
    pub apex: Representation,
}

impl WeakPullback {
    /// `w: T -> B'` with `b w = u` and `y' w = v`, given `y u = c v`.
    pub fn mediate(&self, t: &Representation, u: &RepMorphism, v: &RepMorphism) -> Result<RepMorphism, ExtError> {
        if self.y.after(u) != self.c.after(v) {
            return Err(ExtError::Mismatch("test pair does not commute".into()));
        }
        let hs = hom_space(t, &self.apex);
        let mut target = u.to_vector();
        target.extend(v.to_vector());
        hs.solve_linear(&target, |w| {
            let mut out = self.b.after(w).to_vector();
            out.extend(self.y_prime.after(w).to_vector());
            out
        })
        .ok_or(ExtError::WeakPullbackFailure)
    }
}

/// Realize `c^*δ` and the morphism `(id_A, b, c)` into the given realization of `δ`.
pub fn realize_pullback(
    c: &RepMorphism,
    conf: &ConflationClass,
    target: &Arc<ExtGroup>,
) -> Result<(ConflationClass, ConflationMorphism, WeakPullback), ExtError> {
    let delta = pullback_ext(c, &conf.ext, &conf.delta, target);
    let pulled = realize(target, &delta);
    let m = realize_morphism(&conf.conf.a.identity(), c, &pulled, conf)?;
    let witness = WeakPullback {
        b: m.b.clone(),
        y_prime: pulled.conf.y.clone(),
        c: c.clone(),
        y: conf.conf.y.clone(),
        apex: pulled.conf.b.clone(),
    };
    Ok((pulled, m, witness))
}

/// A morphism `(a, b, c): δ -> δ'` split through `δ'' = a_*δ = c^*δ'`.
#[derive(Clone, Debug)]
pub struct FactoredMorphism {
    pub middle: ConflationClass,
    /// `(a, b1, id_C): δ -> δ''`
    pub upper: ConflationMorphism,
    /// `(id_A', b2, c): δ'' -> δ'`
    pub lower: ConflationMorphism,
}

pub fn factor_conflation_morphism(
    m: &ConflationMorphism,
    src: &ConflationClass,
    tgt: &ConflationClass,
) -> Result<FactoredMorphism, ExtError> {
    let mid = Arc::new(mixed_group(src, tgt));
    let pushed = pushout_ext(&m.a, &src.ext, &src.delta, &mid);
    let pulled = pullback_ext(&m.c, &tgt.ext, &tgt.delta, &mid);
    if pushed != pulled {
        return Err(ExtError::NotAMorphism);
    }
    let middle = realize(&mid, &pushed);
    let upper = realize_morphism(&m.a, &src.conf.c.identity(), src, &middle)?;
    let lower = realize_morphism(&tgt.conf.a.identity(), &m.c, &middle, tgt)?;
    Ok(FactoredMorphism { middle, upper, lower })
}

/// Given `c y1 = y2 b`, restrict `b` to the kernels.
pub fn complete_conflation_morphism(
    b: &RepMorphism,
    c: &RepMorphism,
    src: &ConflationClass,
    tgt: &ConflationClass,
) -> Result<ConflationMorphism, ExtError> {
    if c.after(&src.conf.y) != tgt.conf.y.after(b) {
        return Err(ExtError::NotCommuting);
    }
    let a = factor_through_mono(&tgt.conf.x, &b.after(&src.conf.x)).ok_or(ExtError::NoCompletion)?;
    if !classes_match(&a, c, src, tgt) {
        return Err(ExtError::NotAMorphism);
    }
    Ok(ConflationMorphism { a, b: b.clone(), c: c.clone() })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LongExactReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl LongExactReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Matrix of `h ↦ g ∘ h` between Hom spaces given by coordinates.
fn post_matrix(
    g: &RepMorphism,
    from: &crate::repmod::HomSpace,
    to: &crate::repmod::HomSpace,
) -> Matrix {
    let cols: Vec<Vec<u64>> = from
        .basis()
        .iter()
        .map(|h| to.coords(&g.after(h)).expect("composite lies in the Hom space"))
        .collect();
    Matrix::from_columns(from.field(), to.dim(), &cols)
}

struct RowAtT {
    hom_a: crate::repmod::HomSpace,
    hom_c: crate::repmod::HomSpace,
    ext_ta: ExtGroup,
}

fn check_row(
    conf: &ConflationClass,
    t: &Representation,
    pres_t: &Arc<ProjectivePresentation>,
    name: &str,
    report: &mut LongExactReport,
) -> RowAtT {
    let hom_a = hom_space(t, &conf.conf.a);
    let hom_b = hom_space(t, &conf.conf.b);
    let hom_c = hom_space(t, &conf.conf.c);
    let ext_ta = ExtGroup::with_presentation(pres_t.clone(), &conf.conf.a);
    let xs = post_matrix(&conf.conf.x, &hom_a, &hom_b);
    let ys = post_matrix(&conf.conf.y, &hom_b, &hom_c);
    let cols: Vec<Vec<u64>> = hom_c
        .basis()
        .iter()
        .map(|phi| pullback_ext(phi, &conf.ext, &conf.delta, &ext_ta))
        .collect();
    let sharp = Matrix::from_columns(t.field(), ext_ta.dim(), &cols);
    let (rx, ry, rs) = (xs.rank(), ys.rank(), sharp.rank());
    report.checked += 1;
    if rx != hom_a.dim() {
        report.violations.push(format!("{name}: Hom(T, x) not injective"));
    }
    if !(&ys * &xs).is_zero() || rx + ry != hom_b.dim() {
        report.violations.push(format!("{name}: not exact at Hom(T, B)"));
    }
    if !(&sharp * &ys).is_zero() || ry + rs != hom_c.dim() {
        report.violations.push(format!("{name}: not exact at Hom(T, C)"));
    }
    RowAtT { hom_a, hom_c, ext_ta }
}

/// Exactness of `Hom(T, A) -> Hom(T, B) -> Hom(T, C) -> E(T, A)` for both rows of `m`
/// at every test object `T`, and commutativity of the connecting square.
pub fn check_long_exact(
    m: &ConflationMorphism,
    src: &ConflationClass,
    tgt: &ConflationClass,
    tests: &[Representation],
) -> LongExactReport {
    let mut report = LongExactReport::default();
    if !m.squares_commute(&src.conf, &tgt.conf) {
        report.violations.push("conflation squares do not commute".into());
    }
    for (ti, t) in tests.iter().enumerate() {
        let pres_t = Arc::new(ProjectivePresentation::new(t));
        let r1 = check_row(src, t, &pres_t, &format!("T{ti} row 1"), &mut report);
        let r2 = check_row(tgt, t, &pres_t, &format!("T{ti} row 2"), &mut report);
        for h in r1.hom_a.basis() {
            if !r2.hom_a.contains(&m.a.after(h)) {
                report.violations.push(format!("T{ti}: a ∘ h not a morphism"));
            }
        }
        for phi in r1.hom_c.basis() {
            let left = pushout_ext(&m.a, &r1.ext_ta, &pullback_ext(phi, &src.ext, &src.delta, &r1.ext_ta), &r2.ext_ta);
            let right = pullback_ext(&m.c.after(phi), &tgt.ext, &tgt.delta, &r2.ext_ta);
            if left != right {
                report.violations.push(format!("T{ti}: connecting square does not commute"));
            }
        }
    }
    report
}
