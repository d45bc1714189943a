use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Field, LinAlgError, Matrix};

/// A subspace of `F_p^n`, stored as the nonzero rows of its reduced row-echelon
/// basis. The representation is canonical, so `==` is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

/// `V / U` for `U ⊆ V ⊆ F_p^n`.
///
/// `projection` (q x n) sends a vector of `V` to its coordinates in the quotient;
/// `lift` (n x q) has the complement vectors as columns, so `projection * lift = I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub complement: Vec<Vec<u64>>,
    pub projection: Matrix,
    pub lift: Matrix,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn from_row_matrix(m: &Matrix) -> Self {
        let r = m.rref();
        let rank = r.rank();
        Subspace {
            ambient: m.cols(),
            basis: r.reduced.block(0, 0, rank, m.cols()),
            pivots: r.pivots,
        }
    }

    /// Span of the columns of `m`.
    pub fn from_column_matrix(m: &Matrix) -> Self {
        Self::from_row_matrix(&m.transpose())
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        Self::from_row_matrix(&Matrix::from_rows(field, vectors, ambient))
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Basis vectors as rows.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u64>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_columns(&self) -> Matrix {
        self.basis.transpose()
    }

    /// Remainder of `v` after clearing the pivot coordinates.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let f = self.field();
        let mut out = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c != 0 {
                let nc = f.neg(c);
                for (o, &b) in out.iter_mut().zip(self.basis.row(i)) {
                    *o = (*o + nc * b) % f.p();
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    pub fn combine(&self, coeffs: &[u64]) -> Vec<u64> {
        assert_eq!(coeffs.len(), self.dim());
        let f = self.field();
        let mut out = vec![0; self.ambient];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(self.basis.row(i)) {
                    *o = (*o + c * b) % f.p();
                }
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        Self::from_row_matrix(&Matrix::vstack(&[&self.basis, &other.basis]))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let f = self.field();
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(f, self.ambient);
        }
        // Solve sum a_i u_i - sum b_j w_j = 0; the vectors sum a_i u_i span the intersection.
        let stacked = Matrix::hstack(&[&self.basis.transpose(), &(-&other.basis.transpose())]);
        let k = stacked.kernel_basis();
        let a = k.block(0, 0, self.dim(), k.cols());
        let vecs = &self.basis.transpose() * &a;
        Subspace::from_column_matrix(&vecs)
    }

    /// Rows of a matrix whose kernel is exactly this subspace.
    pub fn annihilator(&self) -> Matrix {
        self.basis.kernel_basis().transpose()
    }

    /// Image of the subspace under `m` (m: ambient -> m.rows()).
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let f = self.field();
        if self.is_zero() {
            return Subspace::zero(f, m.rows());
        }
        Subspace::from_column_matrix(&(m * &self.basis.transpose()))
    }

    /// `{ v : m v ∈ self }`.
    pub fn preimage_under(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient);
        let ann = self.annihilator();
        if ann.rows() == 0 {
            return Subspace::full(self.field(), m.cols());
        }
        Subspace::from_column_matrix(&(&ann * m).kernel_basis())
    }

    /// Complement of `sub` inside `self`, with the projection onto `self / sub`.
    pub fn quotient(&self, sub: &Subspace) -> Result<Quotient, LinAlgError> {
        if !sub.is_subspace_of(self) {
            return Err(LinAlgError::NotASubspace);
        }
        let f = self.field();
        let n = self.ambient;
        let mut acc = sub.clone();
        let mut complement = Vec::new();
        for v in self.basis_vectors() {
            if !acc.contains(&v) {
                acc = acc.sum(&Subspace::span(f, n, std::slice::from_ref(&v)));
                complement.push(v);
            }
        }
        // Extend sub ∪ complement to a basis of F_p^n, invert, and keep the complement rows.
        let mut full: Vec<Vec<u64>> = sub.basis_vectors();
        full.extend(complement.iter().cloned());
        let mut span = Subspace::span(f, n, &full);
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            if !span.contains(&e) {
                span = span.sum(&Subspace::span(f, n, std::slice::from_ref(&e)));
                full.push(e);
            }
        }
        let q = complement.len();
        let lift = Matrix::from_columns(f, n, &complement);
        let projection = if n == 0 {
            Matrix::zeros(f, q, 0)
        } else {
            let inv = Matrix::from_columns(f, n, &full)
                .inverse()
                .expect("completed basis is invertible");
            inv.block(sub.dim(), 0, q, n)
        };
        Ok(Quotient {
            complement,
            projection,
            lift,
        })
    }

    /// Every vector of the subspace (`p^dim` of them); intended for tiny `p`.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let p = self.field().p();
        let d = self.dim();
        let total = (p as usize).checked_pow(d as u32).expect("subspace too large to enumerate");
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u64; d];
        for _ in 0..total {
            out.push(self.combine(&coeffs));
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
        out
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        let p = self.field().p();
        let coeffs: Vec<u64> = (0..self.dim()).map(|_| rng.gen_range(0..p)).collect();
        self.combine(&coeffs)
    }

    /// Random subspace of the given dimension bound (span of `k` random vectors).
    pub fn random<R: Rng>(field: Field, ambient: usize, k: usize, rng: &mut R) -> Subspace {
        let vecs: Vec<Vec<u64>> = (0..k)
            .map(|_| (0..ambient).map(|_| rng.gen_range(0..field.p())).collect())
            .collect();
        Subspace::span(field, ambient, &vecs)
    }
}

/// All subspaces of `F_p^n`, enumerated through their reduced echelon forms
/// (rank, then pivot set, then free entries).
pub fn enumerate_subspaces(field: Field, n: usize) -> Vec<Subspace> {
    let p = field.p();
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            // free positions: (row i, column j) with j > pivots[i] and j not a pivot
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| {
                    let pv = &pivots;
                    (pv[i] + 1..n).filter(move |j| !pv.contains(j)).map(move |j| (i, j))
                })
                .collect();
            let count = (p as usize).pow(free.len() as u32);
            let mut vals = vec![0u64; free.len()];
            for _ in 0..count {
                let mut m = Matrix::zeros(field, k, n);
                for (i, &pc) in pivots.iter().enumerate() {
                    m.set(i, pc, 1);
                }
                for (&(i, j), &v) in free.iter().zip(&vals) {
                    m.set(i, j, v);
                }
                out.push(Subspace {
                    ambient: n,
                    basis: m,
                    pivots: pivots.clone(),
                });
                for v in vals.iter_mut() {
                    *v += 1;
                    if *v < p {
                        break;
                    }
                    *v = 0;
                }
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    /// Gaussian binomial coefficients, counted independently by brute force over all
    /// sets of vectors.
    fn brute_count_subspaces(p: u64, n: usize) -> usize {
        let fl = f(p);
        let all: Vec<Vec<u64>> = Subspace::full(fl, n).elements();
        let mut seen = std::collections::BTreeSet::new();
        // every subspace of dim <= n is spanned by at most n vectors; n <= 3 keeps this small
        let m = all.len();
        for mask in 0u64..(1 << m.min(16)) {
            if mask.count_ones() as usize > n {
                continue;
            }
            let vecs: Vec<Vec<u64>> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| all[i].clone()).collect();
            let s = Subspace::span(fl, n, &vecs);
            seen.insert(s.basis_vectors());
        }
        seen.len()
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        for (p, n) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
            assert_eq!(enumerate_subspaces(f(p), n).len(), brute_count_subspaces(p, n), "p={p} n={n}");
        }
        assert_eq!(enumerate_subspaces(f(2), 3).len(), 16);
        assert_eq!(enumerate_subspaces(f(2), 2).len(), 5);
    }

    #[test]
    fn quotient_projection_and_lift() {
        let fl = f(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let v = Subspace::random(fl, 5, 4, &mut rng);
            let u = Subspace::span(fl, 5, &[v.random_element(&mut rng)]);
            let q = v.quotient(&u).unwrap();
            assert_eq!(q.dim() + u.dim(), v.dim());
            assert!((&q.projection * &q.lift).is_identity() || q.dim() == 0);
            for b in u.basis_vectors() {
                assert!(q.projection.mul_vec(&b).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn intersection_and_sum_dimensions() {
        let fl = f(2);
        let a = Subspace::span(fl, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(fl, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(a.intersection(&b), Subspace::span(fl, 3, &[vec![0, 1, 0]]));
        assert!(a.sum(&b).is_full());
    }
}
