//! Freely reduced words in a finitely generated free group.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A freely reduced word. Letters are signed 1-based generator indices:
/// `1` is the first generator, `-1` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<i32>,
}

fn reduce<I: IntoIterator<Item = i32>>(iter: I) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for x in iter {
        if x == 0 {
            continue;
        }
        if out.last().is_some_and(|&y| y == -x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl FreeWord {
    pub fn new<I: IntoIterator<Item = i32>>(letters: I) -> Self {
        FreeWord { letters: reduce(letters) }
    }

    pub fn identity() -> Self {
        FreeWord { letters: Vec::new() }
    }

    pub fn generator(i: u32) -> Self {
        FreeWord { letters: vec![i as i32] }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        FreeWord::new(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|&x| -x).collect() }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k >= 0 { self.clone() } else { self.inverse() };
        let mut acc = FreeWord::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn is_prefix_of(&self, other: &FreeWord) -> bool {
        other.letters.len() >= self.letters.len()
            && other.letters[..self.letters.len()] == self.letters[..]
    }

    /// Vertices of the geodesic from `self` to `other` in the Cayley tree,
    /// endpoints included.
    pub fn geodesic(&self, other: &FreeWord) -> Vec<FreeWord> {
        let mut common = 0;
        while common < self.letters.len()
            && common < other.letters.len()
            && self.letters[common] == other.letters[common]
        {
            common += 1;
        }
        let mut path = Vec::new();
        for k in (common..=self.letters.len()).rev() {
            path.push(FreeWord { letters: self.letters[..k].to_vec() });
        }
        for k in common + 1..=other.letters.len() {
            path.push(FreeWord { letters: other.letters[..k].to_vec() });
        }
        path
    }

    pub fn distance(&self, other: &FreeWord) -> usize {
        self.geodesic(other).len() - 1
    }

    /// Writes `self = u r u^{-1}` with `r` cyclically reduced; returns `(u, r)`.
    pub fn cyclic_decomposition(&self) -> (FreeWord, FreeWord) {
        let mut w = self.letters.clone();
        let mut u = Vec::new();
        while w.len() >= 2 && w[0] == -w[w.len() - 1] {
            u.push(w[0]);
            w = w[1..w.len() - 1].to_vec();
        }
        (FreeWord { letters: u }, FreeWord { letters: w })
    }

    /// Combinatorial translation length: the length of the cyclically
    /// reduced core. Zero only for the identity.
    pub fn translation_length(&self) -> usize {
        self.cyclic_decomposition().1.len()
    }

    /// Shortlex order: by length first, then lexicographically with
    /// `1 < -1 < 2 < -2 < ...`.
    pub fn shortlex_key(&self) -> (usize, Vec<u32>) {
        let key = self
            .letters
            .iter()
            .map(|&x| if x > 0 { 2 * (x as u32 - 1) } else { 2 * ((-x) as u32 - 1) + 1 })
            .collect();
        (self.letters.len(), key)
    }

    pub fn shortlex_cmp(&self, other: &FreeWord) -> Ordering {
        self.shortlex_key().cmp(&other.shortlex_key())
    }
}

/// All reduced words of length at most `radius` in rank `rank`.
pub fn ball(rank: u32, radius: u32) -> Vec<FreeWord> {
    let mut out = vec![FreeWord::identity()];
    let mut frontier = vec![FreeWord::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 1..=rank as i32 {
                for s in [g, -g] {
                    if w.letters.last() != Some(&-s) {
                        let mut v = w.letters.clone();
                        v.push(s);
                        next.push(FreeWord { letters: v });
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Stallings subgroup graph for a finitely generated subgroup of a free
/// group. Gives an exact membership test.
#[derive(Clone, Debug)]
pub struct StallingsGraph {
    // transitions[state][letter] with letter keyed by signed generator
    transitions: Vec<BTreeMap<i32, usize>>,
    base: usize,
}

fn uf_find(parent: &mut Vec<usize>, x: usize) -> usize {
    if parent[x] != x {
        let root = uf_find(parent, parent[x]);
        parent[x] = root;
    }
    parent[x]
}

impl StallingsGraph {
    pub fn new(generators: &[FreeWord]) -> Self {
        // Wedge of generator loops at a base state, folded with union-find.
        let mut edges: Vec<(usize, i32, usize)> = Vec::new();
        let mut n_states = 1usize;
        for g in generators {
            let mut state = 0usize;
            for (i, &letter) in g.letters().iter().enumerate() {
                let target = if i + 1 == g.letters().len() {
                    0
                } else {
                    n_states += 1;
                    n_states - 1
                };
                edges.push((state, letter, target));
                state = target;
            }
        }
        let mut parent: Vec<usize> = (0..n_states).collect();
        loop {
            let mut seen: BTreeMap<(usize, i32), usize> = BTreeMap::new();
            let mut merged = false;
            for &(s, letter, t) in &edges {
                let (s, t) = (uf_find(&mut parent, s), uf_find(&mut parent, t));
                // an edge determines transitions in both directions
                for (from, lab, to) in [(s, letter, t), (t, -letter, s)] {
                    match seen.get(&(from, lab)) {
                        Some(&prev) if prev != to => {
                            let (a, b) = (uf_find(&mut parent, prev), uf_find(&mut parent, to));
                            if a != b {
                                parent[a.max(b)] = a.min(b);
                                merged = true;
                            }
                        }
                        _ => {
                            seen.insert((from, lab), to);
                        }
                    }
                }
            }
            if !merged {
                break;
            }
        }
        let mut transitions: Vec<BTreeMap<i32, usize>> = vec![BTreeMap::new(); n_states];
        for &(s, letter, t) in &edges {
            let (s, t) = (uf_find(&mut parent, s), uf_find(&mut parent, t));
            transitions[s].insert(letter, t);
            transitions[t].insert(-letter, s);
        }
        let base = uf_find(&mut parent, 0);
        StallingsGraph { transitions, base }
    }

    pub fn contains(&self, word: &FreeWord) -> bool {
        let mut state = self.base;
        for &letter in word.letters() {
            match self.transitions[state].get(&letter) {
                Some(&t) => state = t,
                None => return false,
            }
        }
        state == self.base
    }
}

/// Breadth-first enumeration of subgroup elements as products of the given
/// generators, up to `depth` factors.
pub fn subgroup_elements(generators: &[FreeWord], depth: u32) -> BTreeSet<FreeWord> {
    let mut gens: Vec<FreeWord> = Vec::new();
    for g in generators {
        gens.push(g.clone());
        gens.push(g.inverse());
    }
    let mut seen: BTreeSet<FreeWord> = BTreeSet::new();
    seen.insert(FreeWord::identity());
    let mut queue: VecDeque<(FreeWord, u32)> = VecDeque::new();
    queue.push_back((FreeWord::identity(), 0));
    while let Some((w, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for g in &gens {
            let next = w.mul(g);
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    seen
}
