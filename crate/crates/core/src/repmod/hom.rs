use rand::Rng;

use super::{RepMorphism, Representation};
use crate::exactfield::{Field, Matrix, Solver};

/// A basis of `Hom(M, N)` together with a solver for coordinates.
#[derive(Clone, Debug)]
pub struct HomSpace {
    field: Field,
    source_dims: Vec<usize>,
    target_dims: Vec<usize>,
    basis: Vec<RepMorphism>,
    /// Basis morphisms flattened into the columns of one matrix.
    columns: Matrix,
    solver: Solver,
}

/// All commuting vertex-tuples `(φ_v)`: the kernel of the stacked constraints
/// `N(a) φ_s - φ_t M(a) = 0`, one block per arrow `a: s -> t`.
pub fn hom_space(m: &Representation, n: &Representation) -> HomSpace {
    let f = m.field();
    let nv = m.dims().len();
    let mut offsets = Vec::with_capacity(nv);
    let mut unknowns = 0;
    for v in 0..nv {
        offsets.push(unknowns);
        unknowns += m.dims()[v] * n.dims()[v];
    }
    let arrows = m.algebra().quiver().arrows();
    let rows: usize = arrows.iter().map(|a| n.dims()[a.target] * m.dims()[a.source]).sum();
    let mut c = Matrix::zeros(f, rows, unknowns);
    let mut r0 = 0;
    for (ai, a) in arrows.iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ms, nt, ns, mt) = (m.dims()[s], n.dims()[t], n.dims()[s], m.dims()[t]);
        let na = n.arrow(ai);
        let ma = m.arrow(ai);
        for i in 0..nt {
            for j in 0..ms {
                let row = r0 + i * ms + j;
                // (N(a) φ_s)[i,j] = Σ_k N(a)[i,k] φ_s[k,j]
                for k in 0..ns {
                    let v = na.get(i, k);
                    if v != 0 {
                        let col = offsets[s] + k * ms + j;
                        c.set(row, col, f.add(c.get(row, col), v));
                    }
                }
                // (φ_t M(a))[i,j] = Σ_l φ_t[i,l] M(a)[l,j]
                for l in 0..mt {
                    let v = ma.get(l, j);
                    if v != 0 {
                        let col = offsets[t] + i * mt + l;
                        c.set(row, col, f.sub(c.get(row, col), v));
                    }
                }
            }
        }
        r0 += nt * ms;
    }
    let kernel = c.kernel_basis();
    HomSpace::from_columns(f, m.dims().to_vec(), n.dims().to_vec(), kernel)
}

impl HomSpace {
    fn from_columns(field: Field, source_dims: Vec<usize>, target_dims: Vec<usize>, columns: Matrix) -> Self {
        let basis = (0..columns.cols())
            .map(|j| RepMorphism::from_vector(field, &source_dims, &target_dims, &columns.column(j)))
            .collect();
        let solver = Solver::new(&columns);
        HomSpace {
            field,
            source_dims,
            target_dims,
            basis,
            columns,
            solver,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &[RepMorphism] {
        &self.basis
    }

    pub fn source_dims(&self) -> &[usize] {
        &self.source_dims
    }

    pub fn target_dims(&self) -> &[usize] {
        &self.target_dims
    }

    pub fn combine(&self, coeffs: &[u64]) -> RepMorphism {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count");
        let v = self.columns.mul_vec(coeffs);
        RepMorphism::from_vector(self.field, &self.source_dims, &self.target_dims, &v)
    }

    /// Coordinates of `f` in the basis; `None` if `f` is not in this Hom space.
    pub fn coords(&self, f: &RepMorphism) -> Option<Vec<u64>> {
        if f.source_dims() != self.source_dims || f.target_dims() != self.target_dims {
            return None;
        }
        self.solver.solve(&f.to_vector()).ok()
    }

    pub fn contains(&self, f: &RepMorphism) -> bool {
        self.coords(f).is_some()
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> (Vec<u64>, RepMorphism) {
        let p = self.field.p();
        let c: Vec<u64> = (0..self.dim()).map(|_| rng.gen_range(0..p)).collect();
        let m = self.combine(&c);
        (c, m)
    }

    /// Find `h` in this Hom space with `map(h) = target`, where `map` is linear.
    pub fn solve_linear(&self, target: &[u64], map: impl Fn(&RepMorphism) -> Vec<u64>) -> Option<RepMorphism> {
        if self.dim() == 0 {
            return target.iter().all(|&x| x == 0).then(|| self.combine(&[]));
        }
        let images: Vec<Vec<u64>> = self.basis.iter().map(&map).collect();
        let a = Matrix::from_columns(self.field, target.len(), &images);
        let x = a.solve(target).ok()?;
        Some(self.combine(&x))
    }

    /// Basis of the subspace `{ h : map(h) = 0 }`, as coefficient columns.
    pub fn kernel_of_linear(&self, out_len: usize, map: impl Fn(&RepMorphism) -> Vec<u64>) -> Matrix {
        if self.dim() == 0 {
            return Matrix::zeros(self.field, 0, 0);
        }
        let images: Vec<Vec<u64>> = self.basis.iter().map(&map).collect();
        Matrix::from_columns(self.field, out_len, &images).kernel_basis()
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn a2_hom_dimensions() {
        let alg = a2(101);
        let s1 = Representation::simple(&alg, 0);
        let p1 = Representation::projective(&alg, 0);
        let s2 = Representation::simple(&alg, 1);
        assert_eq!(hom_space(&s1, &p1).dim(), 0);
        assert_eq!(hom_space(&p1, &s1).dim(), 1);
        assert_eq!(hom_space(&s2, &p1).dim(), 1);
        assert_eq!(hom_space(&p1, &s2).dim(), 0);
        for m in [&s1, &p1, &s2] {
            let h = hom_space(m, m);
            assert!(h.contains(&m.identity()));
        }
    }

    #[test]
    fn basis_morphisms_commute() {
        let alg = a3(7);
        let all: Vec<Representation> = (0..3)
            .flat_map(|i| (i..3).map(move |j| (i, j)))
            .map(|(i, j)| interval(&alg, i, j))
            .collect();
        for m in &all {
            for n in &all {
                for b in hom_space(m, n).basis() {
                    assert!(b.commutes(m, n));
                }
            }
        }
    }

    #[test]
    fn hom_is_additive_in_first_argument() {
        let alg = a3(101);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let all: Vec<Representation> = (0..3)
            .flat_map(|i| (i..3).map(move |j| (i, j)))
            .map(|(i, j)| interval(&alg, i, j))
            .collect();
        for _ in 0..30 {
            let a = &all[rng.gen_range(0..all.len())];
            let b = &all[rng.gen_range(0..all.len())];
            let n = &all[rng.gen_range(0..all.len())];
            let s = direct_sum(&alg, &[a, b]);
            assert_eq!(
                hom_space(&s.rep, n).dim(),
                hom_space(a, n).dim() + hom_space(b, n).dim()
            );
        }
    }
}
