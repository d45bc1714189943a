use std::sync::Arc;

use rayon::prelude::*;

use super::DefectError;
use crate::exactfield::{Matrix, Subspace};
use crate::extconf::{ExtGroup, ProjectivePresentation};
use crate::repmod::{hom_space, HomSpace, Representation};

/// `E(O_c, O_a)` for a finite list of objects, with the induced maps along a basis
/// of every `Hom(O_i, O_j)`.
#[derive(Clone, Debug)]
pub struct ExtTable {
    objects: Vec<Representation>,
    homs: Vec<Vec<HomSpace>>,
    presentations: Vec<Arc<ProjectivePresentation>>,
    groups: Vec<Vec<Arc<ExtGroup>>>,
    /// `pull[a][i][j][g] = f_g^*: E(O_j, O_a) -> E(O_i, O_a)` for `f_g: O_i -> O_j`.
    pull: Vec<Vec<Vec<Vec<Matrix>>>>,
    /// `push[c][i][j][g] = (f_g)_*: E(O_c, O_i) -> E(O_c, O_j)`.
    push: Vec<Vec<Vec<Vec<Matrix>>>>,
}

impl ExtTable {
    pub fn new(objects: &[Representation]) -> Self {
        let n = objects.len();
        let homs: Vec<Vec<HomSpace>> = objects
            .par_iter()
            .map(|x| objects.iter().map(|y| hom_space(x, y)).collect())
            .collect();
        let presentations: Vec<Arc<ProjectivePresentation>> =
            objects.par_iter().map(|x| Arc::new(ProjectivePresentation::new(x))).collect();
        let groups: Vec<Vec<Arc<ExtGroup>>> = presentations
            .par_iter()
            .map(|p| {
                objects
                    .iter()
                    .map(|a| Arc::new(ExtGroup::with_presentation(p.clone(), a)))
                    .collect()
            })
            .collect();
        let pull = (0..n)
            .into_par_iter()
            .map(|a| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                homs[i][j]
                                    .basis()
                                    .iter()
                                    .map(|f| groups[j][a].pullback_matrix(f, &groups[i][a]))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let push = (0..n)
            .into_par_iter()
            .map(|c| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                homs[i][j]
                                    .basis()
                                    .iter()
                                    .map(|f| groups[c][i].pushout_matrix(f, &groups[c][j]))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ExtTable {
            objects: objects.to_vec(),
            homs,
            presentations,
            groups,
            pull,
            push,
        }
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn object(&self, i: usize) -> &Representation {
        &self.objects[i]
    }

    pub fn hom(&self, i: usize, j: usize) -> &HomSpace {
        &self.homs[i][j]
    }

    pub fn presentation(&self, i: usize) -> &Arc<ProjectivePresentation> {
        &self.presentations[i]
    }

    pub fn group(&self, c: usize, a: usize) -> &Arc<ExtGroup> {
        &self.groups[c][a]
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.groups.iter().map(|row| row.iter().map(|g| g.dim()).collect()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.groups.iter().flatten().map(|g| g.dim()).sum()
    }

    pub fn pull_actions(&self, a: usize) -> &[Vec<Vec<Matrix>>] {
        &self.pull[a]
    }

    pub fn pull(&self, a: usize, i: usize, j: usize, g: usize) -> &Matrix {
        &self.pull[a][i][j][g]
    }

    pub fn push(&self, c: usize, i: usize, j: usize, g: usize) -> &Matrix {
        &self.push[c][i][j][g]
    }

    /// Checks `f^* F(j, a) ⊆ F(i, a)` and `f_* F(c, i) ⊆ F(c, j)` along every basis morphism.
    pub fn check_stability(&self, spaces: &[Vec<Subspace>]) -> Result<(), DefectError> {
        let n = self.len();
        for x in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for g in 0..self.homs[i][j].dim() {
                        if !spaces[j][x].image_under(&self.pull[x][i][j][g]).is_subspace_of(&spaces[i][x]) {
                            return Err(DefectError::NotASubbifunctor(format!(
                                "pullback along morphism {g} in Hom({i}, {j}) moves F({j}, {x}) out of F({i}, {x})"
                            )));
                        }
                        if !spaces[x][i].image_under(&self.push[x][i][j][g]).is_subspace_of(&spaces[x][j]) {
                            return Err(DefectError::NotASubbifunctor(format!(
                                "pushout along morphism {g} in Hom({i}, {j}) moves F({x}, {i}) out of F({x}, {j})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
