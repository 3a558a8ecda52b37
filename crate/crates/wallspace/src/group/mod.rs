//! Group arithmetic with canonical normal forms for the three supported
//! kinds: free abelian, free, and fundamental groups of trees of groups with
//! cyclic edge groups.

pub mod abelian;
pub mod amalgam;
pub mod free;

use crate::error::{Error, Result};
use abelian::{l1, Lattice};
use amalgam::{AmalgamWord, TreePresentation, VertexElem, VertexKind};
use free::{FreeWord, StallingsGraph};
use std::collections::BTreeSet;

pub const DEFAULT_BALL_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Abelian(Vec<i64>),
    Free(FreeWord),
    Amalgam(AmalgamWord),
}

impl GroupElement {
    /// Word length with respect to the model's standard generators. For
    /// amalgam elements this is an upper bound (syllable norms summed); exact
    /// lengths come from ball enumeration depth.
    pub fn norm(&self) -> i64 {
        match self {
            GroupElement::Abelian(v) => l1(v),
            GroupElement::Free(w) => w.len() as i64,
            GroupElement::Amalgam(w) => w.total_norm(),
        }
    }

    /// Deterministic shortlex-style ordering key: norm first, then the
    /// structural order of the canonical form.
    fn canonical_key(&self) -> (i64, GroupElement) {
        (self.norm(), self.clone())
    }
}

#[derive(Clone, Debug)]
pub enum GroupModel {
    FreeAbelian { rank: usize },
    Free { rank: u32 },
    Amalgam(TreePresentation),
}

impl GroupModel {
    pub fn identity(&self) -> GroupElement {
        match self {
            GroupModel::FreeAbelian { rank } => GroupElement::Abelian(vec![0; *rank]),
            GroupModel::Free { .. } => GroupElement::Free(FreeWord::identity()),
            GroupModel::Amalgam(_) => GroupElement::Amalgam(AmalgamWord::identity()),
        }
    }

    /// Standard generators together with their inverses, in a fixed order.
    pub fn symmetric_generators(&self) -> Vec<GroupElement> {
        match self {
            GroupModel::FreeAbelian { rank } => (0..*rank)
                .flat_map(|i| {
                    [1i64, -1].map(|s| {
                        let mut v = vec![0; *rank];
                        v[i] = s;
                        GroupElement::Abelian(v)
                    })
                })
                .collect(),
            GroupModel::Free { rank } => (1..=*rank as i32)
                .flat_map(|g| [g, -g].map(|s| GroupElement::Free(FreeWord::new([s]))))
                .collect(),
            GroupModel::Amalgam(p) => {
                let mut out = Vec::new();
                for (v, kind) in p.vertices.iter().enumerate() {
                    let local = match kind {
                        VertexKind::FreeAbelian { rank } => (0..*rank)
                            .flat_map(|i| {
                                [1i64, -1].map(|s| {
                                    let mut c = vec![0; *rank];
                                    c[i] = s;
                                    VertexElem::Abelian(c)
                                })
                            })
                            .collect::<Vec<_>>(),
                        VertexKind::Free { rank } => (1..=*rank as i32)
                            .flat_map(|g| [g, -g].map(|s| VertexElem::Free(FreeWord::new([s]))))
                            .collect(),
                    };
                    for g in local {
                        out.push(GroupElement::Amalgam(AmalgamWord::vertex_element(p, v, g)));
                    }
                }
                out
            }
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        match (self, a, b) {
            (GroupModel::FreeAbelian { rank }, GroupElement::Abelian(x), GroupElement::Abelian(y))
                if x.len() == *rank && y.len() == *rank =>
            {
                Ok(GroupElement::Abelian(x.iter().zip(y).map(|(&a, &b)| a + b).collect()))
            }
            (GroupModel::Free { rank }, GroupElement::Free(x), GroupElement::Free(y))
                if valid_rank(x, *rank) && valid_rank(y, *rank) =>
            {
                Ok(GroupElement::Free(x.mul(y)))
            }
            (GroupModel::Amalgam(p), GroupElement::Amalgam(x), GroupElement::Amalgam(y)) => {
                Ok(GroupElement::Amalgam(x.mul(p, y)))
            }
            _ => Err(Error::MalformedWord(format!("{a:?} * {b:?} in model {self:?}"))),
        }
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement> {
        match (self, a) {
            (GroupModel::FreeAbelian { .. }, GroupElement::Abelian(x)) => {
                Ok(GroupElement::Abelian(x.iter().map(|&v| -v).collect()))
            }
            (GroupModel::Free { .. }, GroupElement::Free(x)) => {
                Ok(GroupElement::Free(x.inverse()))
            }
            (GroupModel::Amalgam(p), GroupElement::Amalgam(x)) => {
                Ok(GroupElement::Amalgam(x.inverse(p)))
            }
            _ => Err(Error::MalformedWord(format!("{a:?} in model {self:?}"))),
        }
    }

    /// All elements of word length at most `radius`, in breadth-first order
    /// (elements of equal length sorted by canonical key).
    pub fn ball(&self, radius: u32) -> Result<Vec<GroupElement>> {
        self.ball_capped(radius, DEFAULT_BALL_CAP)
    }

    pub fn ball_capped(&self, radius: u32, cap: usize) -> Result<Vec<GroupElement>> {
        let gens = self.symmetric_generators();
        let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
        let id = self.identity();
        seen.insert(id.clone());
        let mut out = vec![id.clone()];
        let mut frontier = vec![id];
        for _ in 0..radius {
            let mut next: Vec<GroupElement> = Vec::new();
            for w in &frontier {
                for g in &gens {
                    let prod = self.multiply(w, g)?;
                    if seen.insert(prod.clone()) {
                        next.push(prod);
                    }
                }
            }
            if seen.len() > cap {
                return Err(Error::TruncationOverflow { cap });
            }
            next.sort_by_key(|a| a.canonical_key());
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }

    /// Ball elements annotated with their exact word length.
    pub fn ball_with_lengths(&self, radius: u32) -> Result<Vec<(GroupElement, u32)>> {
        let gens = self.symmetric_generators();
        let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
        let id = self.identity();
        seen.insert(id.clone());
        let mut out = vec![(id.clone(), 0)];
        let mut frontier = vec![id];
        for d in 1..=radius {
            let mut next: Vec<GroupElement> = Vec::new();
            for w in &frontier {
                for g in &gens {
                    let prod = self.multiply(w, g)?;
                    if seen.insert(prod.clone()) {
                        next.push(prod);
                    }
                }
            }
            if seen.len() > DEFAULT_BALL_CAP {
                return Err(Error::TruncationOverflow { cap: DEFAULT_BALL_CAP });
            }
            next.sort_by_key(|a| a.canonical_key());
            out.extend(next.iter().cloned().map(|e| (e, d)));
            frontier = next;
        }
        Ok(out)
    }

    /// One canonical representative (lexicographically least among the
    /// shortest) per left coset `gH` meeting the radius-`radius` ball.
    pub fn coset_representatives(
        &self,
        h: &SubgroupSpec,
        radius: u32,
    ) -> Result<Vec<GroupElement>> {
        let ball = self.ball(radius)?;
        let mut reps: Vec<GroupElement> = Vec::new();
        for g in ball {
            let mut fresh = true;
            for r in &reps {
                let diff = self.multiply(&self.invert(r)?, &g)?;
                if h.contains(self, &diff)? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                reps.push(g);
            }
        }
        Ok(reps)
    }
}

fn valid_rank(w: &FreeWord, rank: u32) -> bool {
    w.letters().iter().all(|&x| x.unsigned_abs() <= rank)
}

/// A finitely generated subgroup given by generators, or the whole group.
#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    pub generators: Vec<GroupElement>,
    pub whole_group: bool,
    membership: Membership,
}

#[derive(Clone, Debug)]
enum Membership {
    Whole,
    Lattice(Lattice),
    Stallings(StallingsGraph),
    AmalgamCyclic(AmalgamWord),
}

impl SubgroupSpec {
    pub fn whole(m: &GroupModel) -> Self {
        let _ = m;
        SubgroupSpec { generators: Vec::new(), whole_group: true, membership: Membership::Whole }
    }

    pub fn new(m: &GroupModel, generators: Vec<GroupElement>) -> Result<Self> {
        let membership = match m {
            GroupModel::FreeAbelian { rank } => {
                let rows: Vec<Vec<i64>> = generators
                    .iter()
                    .map(|g| match g {
                        GroupElement::Abelian(v) if v.len() == *rank => Ok(v.clone()),
                        _ => Err(Error::MalformedWord(format!("{g:?}"))),
                    })
                    .collect::<Result<_>>()?;
                Membership::Lattice(Lattice::new(*rank, &rows))
            }
            GroupModel::Free { .. } => {
                let words: Vec<FreeWord> = generators
                    .iter()
                    .map(|g| match g {
                        GroupElement::Free(w) => Ok(w.clone()),
                        _ => Err(Error::MalformedWord(format!("{g:?}"))),
                    })
                    .collect::<Result<_>>()?;
                Membership::Stallings(StallingsGraph::new(&words))
            }
            GroupModel::Amalgam(_) => {
                // only cyclic subgroups are decidable here
                match generators.as_slice() {
                    [GroupElement::Amalgam(z)] if !z.is_identity() => {
                        Membership::AmalgamCyclic(z.clone())
                    }
                    _ => {
                        return Err(Error::UndecidableAtRadius { budget: 0 });
                    }
                }
            }
        };
        Ok(SubgroupSpec { generators, whole_group: false, membership })
    }

    pub fn contains(&self, m: &GroupModel, g: &GroupElement) -> Result<bool> {
        match (&self.membership, g) {
            (Membership::Whole, _) => Ok(true),
            (Membership::Lattice(l), GroupElement::Abelian(v)) => Ok(l.contains(v)),
            (Membership::Stallings(s), GroupElement::Free(w)) => Ok(s.contains(w)),
            (Membership::AmalgamCyclic(z), GroupElement::Amalgam(w)) => {
                let GroupModel::Amalgam(p) = m else {
                    return Err(Error::MalformedWord("model/subgroup mismatch".into()));
                };
                // canonical powers of z grow in norm at least linearly, so a
                // bounded scan decides membership
                let bound = w.total_norm() + 2;
                let mut acc = AmalgamWord::identity();
                let zi = z.inverse(p);
                for _ in 0..=bound {
                    if acc == *w {
                        return Ok(true);
                    }
                    acc = acc.mul(p, z);
                }
                let mut acc = zi.clone();
                for _ in 0..=bound {
                    if acc == *w {
                        return Ok(true);
                    }
                    acc = acc.mul(p, &zi);
                }
                Ok(false)
            }
            _ => Err(Error::MalformedWord(format!("{g:?}"))),
        }
    }
}
