use super::{Group, GroupError};

/// A subgroup of some parent group, stored as its sorted element indices.
///
/// The parent is not stored; every operation takes the group explicitly and
/// the caller keeps the pairing straight. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgroupSet {
    elements: Vec<usize>,
}

/// `G/N` together with the projection `G → G/N` (element → coset index).
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: Group,
    pub projection: Vec<usize>,
}

/// Extends `members` (closed under a prefix of `gens`) to the closure under
/// all of `gens`, keeping `inside` in sync.
pub(crate) fn close_into(g: &Group, gens: &[usize], inside: &mut [bool], members: &mut Vec<usize>) {
    let mut head = 0;
    while head < members.len() {
        let x = members[head];
        head += 1;
        for &s in gens {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                members.push(y);
            }
        }
    }
}

/// Incrementally maintained subgroup `⟨gens⟩` with a membership table.
pub(crate) struct Closure<'g> {
    group: &'g Group,
    pub gens: Vec<usize>,
    pub inside: Vec<bool>,
    pub members: Vec<usize>,
}

impl<'g> Closure<'g> {
    pub fn new(group: &'g Group) -> Self {
        let mut inside = vec![false; group.order()];
        inside[group.identity()] = true;
        Closure {
            group,
            gens: Vec::new(),
            inside,
            members: vec![group.identity()],
        }
    }

    /// Adds `x` as a generator unless it is already a member. Returns whether
    /// the subgroup grew.
    pub fn add(&mut self, x: usize) -> bool {
        if self.inside[x] {
            return false;
        }
        self.gens.push(x);
        close_into(self.group, &self.gens, &mut self.inside, &mut self.members);
        true
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn into_subgroup(self) -> SubgroupSet {
        SubgroupSet::from_sorted_unchecked(sorted(self.members))
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

impl SubgroupSet {
    pub(crate) fn from_sorted_unchecked(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        SubgroupSet { elements }
    }

    pub fn trivial(g: &Group) -> Self {
        SubgroupSet {
            elements: vec![g.identity()],
        }
    }

    pub fn whole(g: &Group) -> Self {
        SubgroupSet {
            elements: g.elements().collect(),
        }
    }

    /// Wraps an element set after checking that it is a subgroup of `g`.
    pub fn from_elements(g: &Group, elements: impl IntoIterator<Item = usize>) -> Option<Self> {
        let mut elements: Vec<usize> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        let s = SubgroupSet { elements };
        let closed = s.contains(g.identity())
            && s.elements.iter().all(|&a| {
                s.contains(g.inv(a)) && s.elements.iter().all(|&b| s.contains(g.mul(a, b)))
            });
        closed.then_some(s)
    }

    /// `⟨gens⟩`: closure of `gens ∪ {e}` under the product.
    pub fn generate(g: &Group, gens: &[usize]) -> Self {
        let mut c = Closure::new(g);
        for &x in gens {
            c.add(x);
        }
        c.into_subgroup()
    }

    /// Smallest normal subgroup containing `set`.
    pub fn normal_closure(g: &Group, set: &[usize]) -> Self {
        normal_closure_under(g, g.generators(), set).into_subgroup()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubgroupSet) -> bool {
        self.elements.len() <= other.elements.len() && self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn membership(&self, g: &Group) -> Vec<bool> {
        let mut inside = vec![false; g.order()];
        for &x in &self.elements {
            inside[x] = true;
        }
        inside
    }

    /// A small generating set, chosen greedily in increasing element order.
    pub fn generators(&self, g: &Group) -> Vec<usize> {
        let mut c = Closure::new(g);
        for &x in &self.elements {
            c.add(x);
            if c.len() == self.elements.len() {
                break;
            }
        }
        c.gens
    }

    pub fn is_normal(&self, g: &Group) -> bool {
        self.normality_witness(g).is_none()
    }

    fn normality_witness(&self, g: &Group) -> Option<(usize, usize)> {
        let gens = self.generators(g);
        g.generators().iter().find_map(|&c| {
            gens.iter()
                .find(|&&s| !self.contains(g.conj(c, s)))
                .map(|&s| (s, c))
        })
    }

    pub fn is_abelian(&self, g: &Group) -> bool {
        let gens = self.generators(g);
        gens.iter()
            .enumerate()
            .all(|(i, &a)| gens[i + 1..].iter().all(|&b| g.commute(a, b)))
    }

    /// Subgroup generated by `self ∪ other`.
    pub fn join(&self, g: &Group, other: &SubgroupSet) -> SubgroupSet {
        let mut c = Closure::new(g);
        for &x in self.generators(g).iter().chain(other.generators(g).iter()) {
            c.add(x);
        }
        c.into_subgroup()
    }

    pub fn center(g: &Group) -> SubgroupSet {
        Self::centralizer(g, g.generators())
    }

    /// Elements commuting with every element of `set`.
    pub fn centralizer(g: &Group, set: &[usize]) -> SubgroupSet {
        // Commuting with a generating set of ⟨set⟩ is enough.
        let mut c = Closure::new(g);
        for &x in set {
            c.add(x);
        }
        let gens = c.gens;
        SubgroupSet {
            elements: g
                .elements()
                .filter(|&x| gens.iter().all(|&s| g.commute(x, s)))
                .collect(),
        }
    }

    /// Builds `G/N` on the cosets of `self`, numbered by smallest
    /// representative.
    pub fn quotient(&self, g: &Group) -> Result<Quotient, GroupError> {
        if let Some((element, conjugator)) = self.normality_witness(g) {
            return Err(GroupError::NotNormal {
                element,
                conjugator,
            });
        }
        let n = g.order();
        let mut projection = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in g.elements() {
            if projection[x] == usize::MAX {
                let id = reps.len();
                reps.push(x);
                for &m in &self.elements {
                    projection[g.mul(x, m)] = id;
                }
            }
        }
        let m = reps.len();
        let mut table = vec![0u16; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * m + j] = projection[g.mul(a, b)] as u16;
            }
        }
        let group = Group::from_flat(m, table)?;
        Ok(Quotient { group, projection })
    }

    /// Full preimage of a subgroup of a quotient.
    pub fn preimage(q: &Quotient, sub: &SubgroupSet) -> SubgroupSet {
        SubgroupSet {
            elements: (0..q.projection.len())
                .filter(|&x| sub.contains(q.projection[x]))
                .collect(),
        }
    }
}

/// Normal closure of `set` with respect to conjugation by `conjugators`
/// (a generating set of the ambient group). Works inside a subgroup of `g`
/// when `conjugators` generate that subgroup.
pub(crate) fn normal_closure_under<'g>(
    g: &'g Group,
    conjugators: &[usize],
    set: &[usize],
) -> Closure<'g> {
    let mut c = Closure::new(g);
    for &x in set {
        c.add(x);
    }
    let mut i = 0;
    while i < c.gens.len() {
        let s = c.gens[i];
        for &t in conjugators {
            let y = g.conj(t, s);
            c.add(y);
        }
        i += 1;
    }
    c
}
