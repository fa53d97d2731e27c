//! Simple factors of the socle of a semisimple group.

use crate::group::{Closure, Group, SubgroupSet};

use super::{is_semisimple, minimal_normal_of_subgroup, minimal_normal_subgroups, StructureError};

/// `Soc(G) = S_1 × ⋯ × S_m` with a generating pair for each factor.
#[derive(Debug, Clone)]
pub struct SocleDecomposition<'g> {
    group: &'g Group,
    socle: SubgroupSet,
    factors: Vec<SubgroupSet>,
    gen_pairs: Vec<(usize, usize)>,
    /// Factor index of each non-identity socle element lying in a factor.
    factor_of: Vec<Option<usize>>,
    /// Membership in `Π_{j≠i} S_j`, per factor.
    complements: Vec<Vec<bool>>,
}

/// Splits `Soc(G)` of a semisimple group into its simple factors.
///
/// Each nonabelian minimal normal subgroup is a power `T^r` whose own
/// minimal normal subgroups are the `r` copies of `T`. Factors are listed in
/// increasing order of their sorted element lists; generating pairs are the
/// lexicographically least `(x, y)` with `⟨x, y⟩ = S_i`.
pub fn soc_factors(g: &Group) -> Result<SocleDecomposition<'_>, StructureError> {
    let minimal = minimal_normal_subgroups(g);
    if minimal.iter().any(|n| n.is_abelian(g)) {
        return Err(StructureError::NotSemisimple);
    }
    let mut factors: Vec<SubgroupSet> = minimal
        .iter()
        .flat_map(|n| minimal_normal_of_subgroup(g, n))
        .collect();
    factors.sort();
    factors.dedup();

    let gen_pairs = factors
        .iter()
        .enumerate()
        .map(|(i, s)| generating_pair(g, s).ok_or(StructureError::NoGeneratingPair { factor: i }))
        .collect::<Result<Vec<_>, _>>()?;

    let mut socle = Closure::new(g);
    for &(x, y) in &gen_pairs {
        socle.add(x);
        socle.add(y);
    }
    Ok(SocleDecomposition::assemble(g, socle.into_subgroup(), factors, gen_pairs))
}

fn generating_pair(g: &Group, s: &SubgroupSet) -> Option<(usize, usize)> {
    let elems = s.elements();
    for &x in elems {
        if x == g.identity() {
            continue;
        }
        for &y in elems {
            let mut c = Closure::new(g);
            c.add(x);
            c.add(y);
            if c.len() == s.order() {
                return Some((x, y));
            }
        }
    }
    // The trivial group is generated by the empty set; factors are never
    // trivial, so this only happens if the factor is not 2-generated.
    None
}

impl<'g> SocleDecomposition<'g> {
    fn assemble(
        group: &'g Group,
        socle: SubgroupSet,
        factors: Vec<SubgroupSet>,
        gen_pairs: Vec<(usize, usize)>,
    ) -> Self {
        let mut factor_of = vec![None; group.order()];
        for (i, s) in factors.iter().enumerate() {
            for &x in s.elements() {
                if x != group.identity() {
                    factor_of[x] = Some(i);
                }
            }
        }
        let complements = (0..factors.len())
            .map(|i| {
                let mut c = Closure::new(group);
                for (j, &(x, y)) in gen_pairs.iter().enumerate() {
                    if j != i {
                        c.add(x);
                        c.add(y);
                    }
                }
                c.inside
            })
            .collect();
        SocleDecomposition {
            group,
            socle,
            factors,
            gen_pairs,
            factor_of,
            complements,
        }
    }

    /// The same decomposition with factors listed in a different order:
    /// position `i` of the result holds factor `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> SocleDecomposition<'g> {
        assert_eq!(order.len(), self.factors.len());
        let factors = order.iter().map(|&i| self.factors[i].clone()).collect();
        let gen_pairs = order.iter().map(|&i| self.gen_pairs[i]).collect();
        Self::assemble(self.group, self.socle.clone(), factors, gen_pairs)
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn socle(&self) -> &SubgroupSet {
        &self.socle
    }

    pub fn factors(&self) -> &[SubgroupSet] {
        &self.factors
    }

    pub fn gen_pairs(&self) -> &[(usize, usize)] {
        &self.gen_pairs
    }

    /// The unique `(s_1, …, s_m)` with `s_i ∈ S_i` and `s = s_1⋯s_m`;
    /// `s_i` is the element of `S_i ∩ s·Π_{j≠i} S_j`.
    pub fn components(&self, s: usize) -> Result<Vec<usize>, StructureError> {
        if !self.socle.contains(s) {
            return Err(StructureError::NotInSocle { element: s });
        }
        let g = self.group;
        Ok(self
            .factors
            .iter()
            .zip(&self.complements)
            .map(|(factor, rest)| {
                *factor
                    .elements()
                    .iter()
                    .find(|&&t| rest[g.mul(g.inv(t), s)])
                    .expect("socle elements project onto every factor")
            })
            .collect())
    }

    /// Number of factors on which `s` has a nontrivial component.
    pub fn weight(&self, s: usize) -> Result<usize, StructureError> {
        let e = self.group.identity();
        Ok(self.components(s)?.into_iter().filter(|&c| c != e).count())
    }

    /// Index of the factor containing `x`, for non-identity `x` lying in a
    /// single factor.
    pub fn factor_of(&self, x: usize) -> Option<usize> {
        self.factor_of[x]
    }

    pub fn perm_action(&self) -> PermAction<'_, 'g> {
        let g = self.group;
        let factor_perms = g
            .elements()
            .map(|x| {
                self.gen_pairs
                    .iter()
                    .map(|&(a, _)| {
                        self.factor_of[g.conj(x, a)]
                            .expect("conjugation permutes the simple factors")
                    })
                    .collect()
            })
            .collect();
        PermAction {
            decomposition: self,
            factor_perms,
        }
    }

    /// Elements whose conjugation fixes every factor setwise.
    pub fn pker(&self) -> SubgroupSet {
        let action = self.perm_action();
        let elements = self
            .group
            .elements()
            .filter(|&x| action.factor_permutation(x).iter().enumerate().all(|(i, &j)| i == j));
        SubgroupSet::from_sorted_unchecked(elements.collect())
    }
}

/// `PKer(G)` for a semisimple group.
pub fn pker(g: &Group) -> Result<SubgroupSet, StructureError> {
    if !is_semisimple(g) {
        return Err(StructureError::NotSemisimple);
    }
    Ok(soc_factors(g)?.pker())
}

/// Conjugation action of `G` on its socle factors and socle elements.
#[derive(Debug, Clone)]
pub struct PermAction<'d, 'g> {
    decomposition: &'d SocleDecomposition<'g>,
    factor_perms: Vec<Vec<usize>>,
}

impl PermAction<'_, '_> {
    /// `perm[i] = j` when `x S_i x⁻¹ = S_j`.
    pub fn factor_permutation(&self, x: usize) -> &[usize] {
        &self.factor_perms[x]
    }

    /// Conjugation by `x` on the socle, as a map over `socle().elements()`
    /// positions.
    pub fn socle_permutation(&self, x: usize) -> Vec<usize> {
        let g = self.decomposition.group;
        let soc = self.decomposition.socle();
        soc.elements()
            .iter()
            .map(|&s| {
                soc.elements()
                    .binary_search(&g.conj(x, s))
                    .expect("the socle is normal")
            })
            .collect()
    }
}
