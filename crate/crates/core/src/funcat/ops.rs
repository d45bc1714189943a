use rand::seq::SliceRandom;
use rand::Rng;

use super::{FunError, GammaMap, GammaModule, IndexSet};
use crate::exactfield::{Matrix, Subspace};

/// `U · rad Γ` for a submodule `U` of `M`.
pub fn radical_spaces(m: &GammaModule, u: &[Subspace]) -> Vec<Subspace> {
    let t = m.table();
    let n = t.len();
    (0..n)
        .map(|i| {
            let mut acc = Subspace::zero(m.field(), m.dims()[i]);
            for j in 0..n {
                if u[j].is_zero() {
                    continue;
                }
                for c in t.radical(i, j).basis_vectors() {
                    acc = acc.sum(&u[j].image_under(&m.act(i, j, &c)));
                }
            }
            acc
        })
        .collect()
}

/// `M ⊇ rad M ⊇ rad² M ⊇ … ⊇ 0`; empty for `M = 0`.
pub fn radical_filtration(m: &GammaModule) -> Vec<Vec<Subspace>> {
    if m.is_zero() {
        return Vec::new();
    }
    let mut chain = vec![m.full_spaces()];
    loop {
        let next = radical_spaces(m, chain.last().expect("nonempty"));
        let done = next.iter().all(|s| s.is_zero());
        chain.push(next);
        if done {
            return chain;
        }
    }
}

/// Multiplicity of each simple `S_{X_i}` in `M`, read off the radical layers.
pub fn composition_factors(m: &GammaModule) -> Result<Vec<usize>, FunError> {
    let t = m.table();
    let n = t.len();
    let chain = radical_filtration(m);
    let mut counts = vec![0; n];
    for w in chain.windows(2) {
        for i in 0..n {
            let d = w[0][i].dim() - w[1][i].dim();
            let top = t.top_dim(i);
            if d % top != 0 {
                return Err(FunError::NonIntegralMultiplicity { index: i });
            }
            counts[i] += d / top;
        }
    }
    Ok(counts)
}

/// Joint kernel of the radical: at `X_i`, everything killed by every `M(f)`, `f ∈ rad(X_j, X_i)`.
pub fn socle(m: &GammaModule) -> Vec<Subspace> {
    let t = m.table();
    let n = t.len();
    (0..n)
        .map(|i| {
            let mut blocks = Vec::new();
            for j in 0..n {
                for c in t.radical(j, i).basis_vectors() {
                    blocks.push(m.act(j, i, &c));
                }
            }
            let refs: Vec<&Matrix> = blocks.iter().collect();
            if refs.is_empty() {
                Subspace::full(m.field(), m.dims()[i])
            } else {
                Subspace::from_column_matrix(&Matrix::vstack(&refs).kernel_basis())
            }
        })
        .collect()
}

pub fn socle_isotypic(m: &GammaModule, s: &IndexSet) -> Vec<Subspace> {
    socle(m)
        .into_iter()
        .enumerate()
        .map(|(i, sp)| if s.contains(&i) { sp } else { Subspace::zero(m.field(), m.dims()[i]) })
        .collect()
}

/// The largest submodule all of whose composition factors lie in `s`.
pub fn torsion_part(m: &GammaModule, s: &IndexSet) -> Vec<Subspace> {
    let mut u = m.zero_spaces();
    loop {
        let (q, _, quots) = m.quotient(&u).expect("torsion steps are submodules");
        let soc = socle_isotypic(&q, s);
        if soc.iter().all(|sp| sp.is_zero()) {
            return u;
        }
        u = u
            .iter()
            .zip(&soc)
            .zip(&quots)
            .map(|((ui, si), qi)| ui.sum(&si.image_under(&qi.lift)))
            .collect();
    }
}

/// The smallest submodule containing the given `(index, vector)` elements.
pub fn generated_submodule(m: &GammaModule, gens: &[(usize, Vec<u64>)]) -> Vec<Subspace> {
    let t = m.table();
    let n = t.len();
    let mut spaces = m.zero_spaces();
    for (i, v) in gens {
        spaces[*i] = spaces[*i].sum(&Subspace::span(m.field(), m.dims()[*i], std::slice::from_ref(v)));
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if spaces[j].is_zero() {
                    continue;
                }
                for a in 0..t.hom(i, j).dim() {
                    let img = spaces[j].image_under(m.action(i, j, a));
                    if !img.is_subspace_of(&spaces[i]) {
                        spaces[i] = spaces[i].sum(&img);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return spaces;
        }
    }
}

/// Factors read off a randomly chosen composition series: repeatedly split off a
/// simple submodule spanned by a random socle vector.
pub fn random_composition_series<R: Rng>(m: &GammaModule, rng: &mut R) -> Vec<usize> {
    let n = m.table().len();
    let mut counts = vec![0; n];
    let mut cur = m.clone();
    while !cur.is_zero() {
        let soc = socle(&cur);
        let candidates: Vec<usize> = (0..n).filter(|&i| !soc[i].is_zero()).collect();
        let i = *candidates.choose(rng).expect("nonzero module has a nonzero socle");
        let v = loop {
            let v = soc[i].random_element(rng);
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let simple = generated_submodule(&cur, &[(i, v)]);
        debug_assert_eq!(simple.iter().map(|s| s.dim()).sum::<usize>(), m.table().top_dim(i));
        counts[i] += 1;
        cur = cur.quotient(&simple).expect("generated submodule").0;
    }
    counts
}

/// A basis of the natural transformations `M -> N`.
pub fn gamma_hom_space(m: &GammaModule, n: &GammaModule) -> Vec<GammaMap> {
    let t = m.table();
    let k = t.len();
    let f = m.field();
    let mut offsets = Vec::with_capacity(k);
    let mut unknowns = 0;
    for i in 0..k {
        offsets.push(unknowns);
        unknowns += n.dims()[i] * m.dims()[i];
    }
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for i in 0..k {
        for j in 0..k {
            for a in 0..t.hom(i, j).dim() {
                let (ma, na) = (m.action(i, j, a), n.action(i, j, a));
                // (g_i M(f))[r,c] - (N(f) g_j)[r,c] for r < dim N_i, c < dim M_j
                for r in 0..n.dims()[i] {
                    for c in 0..m.dims()[j] {
                        let mut row = vec![0; unknowns];
                        for l in 0..m.dims()[i] {
                            let v = ma.get(l, c);
                            if v != 0 {
                                let col = offsets[i] + r * m.dims()[i] + l;
                                row[col] = f.add(row[col], v);
                            }
                        }
                        for l in 0..n.dims()[j] {
                            let v = na.get(r, l);
                            if v != 0 {
                                let col = offsets[j] + l * m.dims()[j] + c;
                                row[col] = f.sub(row[col], v);
                            }
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::identity(f, unknowns)
    } else {
        Matrix::from_rows(f, &rows, unknowns).kernel_basis()
    };
    kernel
        .columns()
        .into_iter()
        .map(|v| {
            let maps = (0..k)
                .map(|i| {
                    let (r, c) = (n.dims()[i], m.dims()[i]);
                    Matrix::from_vec(f, r, c, v[offsets[i]..offsets[i] + r * c].to_vec())
                })
                .collect();
            GammaMap { maps }
        })
        .collect()
}
