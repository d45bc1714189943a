use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::repmod::fixtures::*;
use crate::repmod::{direct_sum, Atlas, Representation};

fn named(reps: Vec<Representation>) -> Atlas {
    Atlas::new(reps.into_iter().enumerate().map(|(i, r)| (format!("X{i}"), r)).collect()).unwrap()
}

/// S1, P1, S2
pub(crate) fn a2_table(p: u64) -> Arc<CategoryTable> {
    CategoryTable::new(named(a2_atlas(&a2(p))))
}

/// Intervals (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
pub(crate) fn a3_table(p: u64) -> Arc<CategoryTable> {
    let alg = a3(p);
    let reps = (0..3)
        .flat_map(|i| (i..3).map(move |j| (i, j)))
        .map(|(i, j)| interval(&alg, i, j))
        .collect();
    CategoryTable::new(named(reps))
}

/// k, k[x]/x²
pub(crate) fn dual_table(p: u64) -> Arc<CategoryTable> {
    let alg = dual(p);
    CategoryTable::new(named(vec![Representation::simple(&alg, 0), Representation::projective(&alg, 0)]))
}

fn set(xs: &[usize]) -> IndexSet {
    xs.iter().copied().collect()
}

fn dims(spaces: &[Subspace]) -> Vec<usize> {
    spaces.iter().map(|s| s.dim()).collect()
}

/// Yoneda modules of all atlas members and of a few sums.
fn sample_modules(t: &Arc<CategoryTable>) -> Vec<GammaModule> {
    let n = t.len();
    let mut out: Vec<GammaModule> = (0..n).map(|i| yoneda_module(t, t.atlas().rep(i)).0).collect();
    for i in 0..n {
        out.push(GammaModule::simple(t, i));
    }
    let alg = t.atlas().rep(0).algebra().clone();
    let all: Vec<&Representation> = (0..n).map(|i| t.atlas().rep(i)).collect();
    out.push(yoneda_module(t, &direct_sum(&alg, &all).rep).0);
    out
}

#[test]
fn tables_are_consistent() {
    for t in [a2_table(101), a3_table(5), dual_table(2)] {
        let n = t.len();
        for i in 0..n {
            assert_eq!(t.top_dim(i), 1);
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        // associativity of the composition constants
                        for a in 0..t.hom(i, j).dim() {
                            for b in 0..t.hom(j, k).dim() {
                                for c in 0..t.hom(k, l).dim() {
                                    let gf = t.hom(i, k).combine(t.compose(i, j, k, a, b));
                                    let h = &t.hom(k, l).basis()[c];
                                    let left = t.hom(i, l).coords(&h.after(&gf)).unwrap();
                                    let hg = t.hom(j, l).combine(t.compose(j, k, l, b, c));
                                    let right = t.hom(i, l).coords(&hg.after(&t.hom(i, j).basis()[a])).unwrap();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
        for m in sample_modules(&t) {
            m.validate().unwrap();
        }
    }
}

#[test]
fn yoneda_modules_of_a2() {
    let t = a2_table(101);
    let alg = t.atlas().rep(0).algebra().clone();
    assert_eq!(yoneda_module(&t, t.atlas().rep(2)).0.dims(), &[0, 0, 1]);
    assert_eq!(yoneda_module(&t, t.atlas().rep(1)).0.dims(), &[0, 1, 1]);
    assert_eq!(yoneda_module(&t, t.atlas().rep(0)).0.dims(), &[1, 1, 0]);
    assert!(yoneda_module(&t, &Representation::zero(&alg)).0.is_zero());
    let sum = direct_sum(&alg, &[t.atlas().rep(0), t.atlas().rep(2)]).rep;
    assert_eq!(yoneda_module(&t, &sum).0.dims(), &[1, 1, 1]);
}

#[test]
fn kernels_and_cokernels() {
    let t = a2_table(101);
    let (m, _) = yoneda_module(&t, t.atlas().rep(1));
    assert!(m.identity().cokernel(&m).0.is_zero());
    let zero = GammaMap::zero(&m, &m);
    assert_eq!(zero.kernel(&m).0.dims(), m.dims());
    // Hom(−, P1 -> S1)
    let (yb, eb) = yoneda_module(&t, t.atlas().rep(1));
    let (yc, ec) = yoneda_module(&t, t.atlas().rep(0));
    let y = crate::repmod::hom_space(t.atlas().rep(1), t.atlas().rep(0)).basis()[0].clone();
    let map = yoneda_map(&t, &y, &eb, &ec);
    assert!(map.is_natural(&yb, &yc));
    let (coker, _) = map.cokernel(&yc);
    assert_eq!(coker.dims(), &[1, 0, 0]);
    assert_eq!(composition_factors(&coker).unwrap(), vec![1, 0, 0]);
}

#[test]
fn radical_layers_and_factors() {
    let t = a2_table(101);
    let (p1, _) = yoneda_module(&t, t.atlas().rep(1));
    let chain = radical_filtration(&p1);
    assert_eq!(chain.len(), 3);
    assert_eq!(dims(&chain[1]), vec![0, 0, 1]);
    assert_eq!(composition_factors(&p1).unwrap(), vec![0, 1, 1]);
    let s = GammaModule::simple(&t, 1);
    assert_eq!(radical_filtration(&s).len(), 2);
    assert!(radical_filtration(&GammaModule::zero(&t)).is_empty());
    let both = GammaModule::direct_sum(&[&p1, &s]);
    assert_eq!(composition_factors(&both).unwrap(), vec![0, 2, 1]);
}

#[test]
fn socles_and_torsion_parts() {
    let t = a2_table(101);
    let s = GammaModule::simple(&t, 0);
    assert_eq!(dims(&socle_isotypic(&s, &set(&[0]))), vec![1, 0, 0]);
    assert_eq!(dims(&socle_isotypic(&s, &set(&[1, 2]))), vec![0, 0, 0]);
    let (p1, _) = yoneda_module(&t, t.atlas().rep(1));
    assert_eq!(dims(&socle_isotypic(&p1, &set(&[2]))), vec![0, 0, 1]);
    assert_eq!(dims(&socle_isotypic(&p1, &set(&[0]))), vec![0, 0, 0]);
    assert_eq!(dims(&torsion_part(&p1, &set(&[2]))), vec![0, 0, 1]);
    assert_eq!(dims(&torsion_part(&p1, &set(&[0]))), vec![0, 0, 0]);
    assert_eq!(dims(&torsion_part(&p1, &set(&[0, 1, 2]))), vec![0, 1, 1]);
    assert_eq!(dims(&torsion_part(&p1, &IndexSet::new())), vec![0, 0, 0]);
    // the top factor alone is not a submodule
    assert_eq!(dims(&torsion_part(&p1, &set(&[1]))), vec![0, 0, 0]);
}

#[test]
fn jordan_holder() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in [a2_table(7), a3_table(3), dual_table(2), dual_table(5)] {
        for m in sample_modules(&t) {
            let expected = composition_factors(&m).unwrap();
            for _ in 0..3 {
                assert_eq!(random_composition_series(&m, &mut rng), expected);
            }
        }
    }
}

fn random_submodule<R: Rng>(m: &GammaModule, rng: &mut R) -> Vec<Subspace> {
    let n = m.dims().len();
    let k = rng.gen_range(0..3);
    let gens: Vec<(usize, Vec<u64>)> = (0..k)
        .filter_map(|_| {
            let i = rng.gen_range(0..n);
            (m.dims()[i] > 0).then(|| (i, Subspace::full(m.field(), m.dims()[i]).random_element(rng)))
        })
        .collect();
    generated_submodule(m, &gens)
}

fn subsets(n: usize) -> Vec<IndexSet> {
    (0..1u32 << n).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

#[test]
fn torsion_is_maximal_idempotent_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for t in [a2_table(3), a3_table(2), dual_table(3)] {
        let mods = sample_modules(&t);
        let all_s = subsets(t.len());
        for _ in 0..100 {
            let m = &mods[rng.gen_range(0..mods.len())];
            let s = &all_s[rng.gen_range(0..all_s.len())];
            let ts = torsion_part(m, s);
            let u = random_submodule(m, &mut rng);
            let (um, _) = m.submodule(&u).unwrap();
            let fu = composition_factors(&um).unwrap();
            if fu.iter().enumerate().all(|(i, &c)| c == 0 || s.contains(&i)) {
                assert!(u.iter().zip(&ts).all(|(a, b)| a.is_subspace_of(b)));
            }
            // idempotent
            let (tm, inc) = m.submodule(&ts).unwrap();
            let tt = torsion_part(&tm, s);
            assert_eq!(dims(&tt), dims(&ts));
            assert!(inc.is_injective());
            // monotone in S
            let bigger: IndexSet = s.iter().copied().chain([rng.gen_range(0..t.len())]).collect();
            let tb = torsion_part(m, &bigger);
            assert!(ts.iter().zip(&tb).all(|(a, b)| a.is_subspace_of(b)));
            // additivity of factors along U ⊆ M
            let (q, _, _) = m.quotient(&u).unwrap();
            let fm = composition_factors(m).unwrap();
            let fq = composition_factors(&q).unwrap();
            for i in 0..t.len() {
                assert_eq!(fm[i], fu[i] + fq[i]);
            }
        }
    }
}

#[test]
fn natural_maps() {
    let t = a3_table(3);
    let mods = sample_modules(&t);
    let m = &mods[1];
    let n = &mods[mods.len() - 1];
    let basis = gamma_hom_space(m, n);
    assert!(!basis.is_empty());
    for g in &basis {
        assert!(g.is_natural(m, n));
    }
    // Hom(Yoneda X, Yoneda Y) = Hom(X, Y)
    for i in 0..t.len() {
        for j in 0..t.len() {
            assert_eq!(gamma_hom_space(&mods[i], &mods[j]).len(), t.hom(i, j).dim());
        }
    }
}
