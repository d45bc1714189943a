//! Jacobson radicals of endomorphism rings.
//!
//! Two methods:
//! - trace form: `rad End(M)` is the kernel of `(f, g) ↦ tr(f g)`. Valid whenever
//!   `p > dim M`, which keeps every composition-factor multiplicity of `M` (as an
//!   `End(M)`-module) invertible in `F_p`.
//! - local certificate: in a local ring every `f` is `λ + n` with `n` nilpotent, and in
//!   characteristic `p` this gives `f^q = λ` for any `q = p^s >= dim M`. The candidate
//!   `λ` is checked to be an algebra map with a nilpotent kernel; that kernel is then
//!   the radical. This works in every characteristic but only for local rings.

use super::{hom_space, HomSpace, RepError, RepMorphism, Representation};
use crate::exactfield::{Matrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadicalMethod {
    TraceForm,
    LocalCertificate,
}

#[derive(Clone, Debug)]
pub struct EndRadical {
    pub end: HomSpace,
    /// The radical, in coordinates of `end`.
    pub radical: Subspace,
    pub method: RadicalMethod,
}

impl EndRadical {
    pub fn contains(&self, f: &RepMorphism) -> bool {
        self.end.coords(f).map(|c| self.radical.contains(&c)).unwrap_or(false)
    }

    /// `dim End / rad End`.
    pub fn top_dim(&self) -> usize {
        self.end.dim() - self.radical.dim()
    }
}

enum LocalOutcome {
    Local(Subspace),
    NotLocal,
    Inconclusive,
}

pub fn end_radical(m: &Representation) -> Result<EndRadical, RepError> {
    let end = hom_space(m, m);
    let p = m.field().p();
    if p as usize > m.total_dim() {
        let radical = trace_form_radical(m, &end);
        return Ok(EndRadical {
            end,
            radical,
            method: RadicalMethod::TraceForm,
        });
    }
    match local_radical(m, &end) {
        LocalOutcome::Local(radical) => Ok(EndRadical {
            end,
            radical,
            method: RadicalMethod::LocalCertificate,
        }),
        _ => Err(RepError::CharacteristicTooSmall {
            p,
            end_dim: end.dim(),
            module_dim: m.total_dim(),
        }),
    }
}

/// True iff `End(M) / rad End(M)` is one-dimensional.
pub fn is_indecomposable(m: &Representation) -> Result<bool, RepError> {
    if m.is_zero() {
        return Ok(false);
    }
    let p = m.field().p();
    if p as usize > m.total_dim() {
        return Ok(end_radical(m)?.top_dim() == 1);
    }
    let end = hom_space(m, m);
    match local_radical(m, &end) {
        LocalOutcome::Local(_) => Ok(true),
        LocalOutcome::NotLocal => Ok(false),
        LocalOutcome::Inconclusive => Err(RepError::CharacteristicTooSmall {
            p,
            end_dim: end.dim(),
            module_dim: m.total_dim(),
        }),
    }
}

fn total_matrix(f: &RepMorphism) -> Matrix {
    let blocks: Vec<&Matrix> = f.maps.iter().collect();
    Matrix::block_diag(f.field(), &blocks)
}

fn trace_form_radical(m: &Representation, end: &HomSpace) -> Subspace {
    let field = m.field();
    let d = end.dim();
    let mats: Vec<Matrix> = end.basis().iter().map(total_matrix).collect();
    let gram = Matrix::from_fn(field, d, d, |i, j| (&mats[i] * &mats[j]).trace());
    Subspace::from_column_matrix(&gram.kernel_basis())
}

fn local_radical(m: &Representation, end: &HomSpace) -> LocalOutcome {
    let field = m.field();
    let p = field.p();
    let n = m.total_dim();
    let mut q = p;
    while (q as usize) < n {
        q *= p;
    }
    let mats: Vec<Matrix> = end.basis().iter().map(total_matrix).collect();
    let mut lambda = Vec::with_capacity(mats.len());
    for a in &mats {
        let power = a.pow(q);
        let l = power.get(0, 0);
        if power != Matrix::identity(field, n).scale(l) {
            return LocalOutcome::NotLocal;
        }
        lambda.push(l);
    }
    let eval = |f: &RepMorphism| -> u64 {
        let c = end.coords(f).expect("product of endomorphisms");
        c.iter().zip(&lambda).fold(0, |acc, (&x, &l)| field.add(acc, field.mul(x, l)))
    };
    // λ must be multiplicative on basis pairs
    for (i, fi) in end.basis().iter().enumerate() {
        for (j, fj) in end.basis().iter().enumerate() {
            if eval(&fi.after(fj)) != field.mul(lambda[i], lambda[j]) {
                return LocalOutcome::NotLocal;
            }
        }
    }
    let functional = Matrix::from_vec(field, 1, lambda.len(), lambda.clone());
    if functional.is_zero() {
        return LocalOutcome::Inconclusive;
    }
    let kernel = Subspace::from_column_matrix(&functional.kernel_basis());
    // nilpotency of the kernel ideal: its n-th power vanishes
    let gens: Vec<Matrix> = kernel.basis_vectors().iter().map(|c| total_matrix(&end.combine(c))).collect();
    let mut power: Vec<Matrix> = gens.clone();
    for _ in 1..n.max(1) {
        let mut next: Vec<Matrix> = Vec::new();
        for a in &power {
            for g in &gens {
                next.push(a * g);
            }
        }
        let span = span_of(&next, n);
        power = span;
        if power.is_empty() {
            break;
        }
    }
    if power.iter().all(|a| a.is_zero()) {
        LocalOutcome::Local(kernel)
    } else {
        LocalOutcome::Inconclusive
    }
}

/// Reduce a list of `n x n` matrices to a basis of their span.
fn span_of(mats: &[Matrix], n: usize) -> Vec<Matrix> {
    if mats.is_empty() || n == 0 {
        return Vec::new();
    }
    let field = mats[0].field();
    let rows: Vec<Vec<u64>> = mats.iter().map(|m| m.data().to_vec()).collect();
    let s = Subspace::span(field, n * n, &rows);
    s.basis_vectors()
        .into_iter()
        .map(|v| Matrix::from_vec(field, n, n, v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::*;

    #[test]
    fn radical_of_simple_is_zero() {
        let alg = a2(101);
        let s = Representation::simple(&alg, 0);
        let r = end_radical(&s).unwrap();
        assert_eq!(r.end.dim(), 1);
        assert!(r.radical.is_zero());
        assert!(is_indecomposable(&s).unwrap());
    }

    #[test]
    fn radical_of_dual_numbers_is_one_dimensional() {
        for p in [2, 3, 101] {
            let alg = dual(p);
            let a = Representation::projective(&alg, 0);
            let r = end_radical(&a).unwrap();
            assert_eq!(r.end.dim(), 2, "p={p}");
            assert_eq!(r.radical.dim(), 1, "p={p}");
            // the radical consists of nilpotent maps: multiplication by x
            let x = r.end.combine(&r.radical.basis_vectors()[0]);
            assert!(x.after(&x).is_zero());
            assert!(is_indecomposable(&a).unwrap());
        }
    }

    #[test]
    fn matrix_algebra_has_zero_radical() {
        let alg = a2(101);
        let s = Representation::simple(&alg, 0);
        let ds = direct_sum(&alg, &[&s, &s]);
        let r = end_radical(&ds.rep).unwrap();
        assert_eq!(r.end.dim(), 4);
        assert!(r.radical.is_zero());
        assert!(!is_indecomposable(&ds.rep).unwrap());
    }

    #[test]
    fn trace_form_would_fail_where_local_certificate_works() {
        // P1 of A2 at p = 2: dim 2 with End = F_2, the trace form is identically zero
        let alg = a2(2);
        let p1 = Representation::projective(&alg, 0);
        let r = end_radical(&p1).unwrap();
        assert_eq!(r.method, RadicalMethod::LocalCertificate);
        assert!(r.radical.is_zero());
        let s = direct_sum(&alg, &[&Representation::simple(&alg, 0), &Representation::simple(&alg, 1)]);
        assert!(!is_indecomposable(&s.rep).unwrap());
    }

    #[test]
    fn decomposable_small_characteristic_radical_is_refused() {
        let alg = a2(2);
        let s = Representation::simple(&alg, 0);
        let ds = direct_sum(&alg, &[&s, &s]);
        assert!(matches!(end_radical(&ds.rep), Err(RepError::CharacteristicTooSmall { .. })));
    }

    #[test]
    fn nilpotent_endomorphism_is_not_an_isomorphism() {
        let alg = dual(101);
        let a = Representation::projective(&alg, 0);
        let r = end_radical(&a).unwrap();
        let x = r.end.combine(&r.radical.basis_vectors()[0]);
        assert!(!x.is_isomorphism());
        assert!(a.identity().is_isomorphism());
    }
}
