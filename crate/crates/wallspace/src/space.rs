//! Measured wallspaces built from one-parameter wall family charts.
//!
//! A point universe is a tuple of integer coordinates and free-group
//! coordinates. Each chart is a family of walls indexed by a real parameter
//! carrying a density; separator sets of point pairs are finite interval
//! unions, so every wall measure is computed exactly.

use crate::error::{Error, Result};
use crate::group::free::FreeWord;
use crate::interval::{Density, IntervalSet};

/// A point of the universe: integer coordinates followed by tree coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub ints: Vec<i64>,
    pub words: Vec<FreeWord>,
}

impl Point {
    pub fn lattice<I: IntoIterator<Item = i64>>(coords: I) -> Self {
        Point { ints: coords.into_iter().collect(), words: Vec::new() }
    }

    pub fn tree(w: FreeWord) -> Self {
        Point { ints: Vec::new(), words: vec![w] }
    }

    pub fn pair(a: &Point, b: &Point) -> Self {
        Point {
            ints: a.ints.iter().chain(b.ints.iter()).cloned().collect(),
            words: a.words.iter().chain(b.words.iter()).cloned().collect(),
        }
    }
}

/// Injective encoding of a reduced word as a nonnegative integer: its rank in
/// the shortlex enumeration of the free group.
pub fn shortlex_index(w: &FreeWord, rank: u32) -> i64 {
    let r = rank as i64;
    let mut below = 0i64; // words strictly shorter
    let mut count = 1i64;
    for _ in 0..w.len() {
        below += count;
        count *= if count == 1 { 2 * r } else { 2 * r - 1 };
    }
    // lex rank within the given length
    let mut rank_in_len = 0i64;
    let mut prev: Option<i32> = None;
    for (i, &letter) in w.letters().iter().enumerate() {
        let width = if i == 0 { 2 * r } else { 2 * r - 1 };
        let mut tail = 1i64;
        for j in i + 1..w.len() {
            let _ = j;
            tail *= 2 * r - 1;
        }
        // letters ordered 1 < -1 < 2 < -2 < ...
        let code = |x: i32| -> i64 {
            if x > 0 {
                2 * (x as i64 - 1)
            } else {
                2 * ((-x) as i64 - 1) + 1
            }
        };
        let mut pos = code(letter);
        if let Some(p) = prev {
            // the inverse of the previous letter is skipped at this slot
            if code(letter) > code(-p) {
                pos -= 1;
            }
        }
        debug_assert!(pos < width);
        let _ = width;
        rank_in_len += pos * tail;
        prev = Some(letter);
    }
    below + rank_in_len
}

/// How a chart's walls read off a side for a point.
#[derive(Clone, Debug, PartialEq)]
pub enum ChartKind {
    /// Walls {t} x transverse; side by comparing a linear functional
    /// sum(coeffs . ints)/denom against the parameter.
    Linear { coeffs: Vec<i64>, denom: f64 },
    /// Edges of the Cayley tree of the free-group coordinate `word_index`;
    /// the wall at parameter `shortlex_index(far endpoint)` cuts off the
    /// subtree of words extending that endpoint.
    TreeEdges { word_index: usize, rank: u32 },
    /// All lattice translates of the box `prod [-h_i, h_i]`; the translate by
    /// m is the wall at the pairing-encoded parameter of m.
    FolnerBox { half_widths: Vec<i64> },
}

const PAIR_BASE: i64 = 1 << 20;

fn encode_translate(m: &[i64]) -> f64 {
    let mut acc = 0i64;
    for &c in m {
        assert!(c.abs() < PAIR_BASE / 2);
        acc = acc * PAIR_BASE + (c + PAIR_BASE / 2);
    }
    acc as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct WallFamilyChart {
    pub id: String,
    pub kind: ChartKind,
    pub density: Density,
    /// Deck-translation period of a Z-standard chart, if any.
    pub period: Option<f64>,
    /// Measure multiplier folded in from wallspace scaling and products.
    pub scale: f64,
}

impl WallFamilyChart {
    fn linear_value(&self, p: &Point) -> f64 {
        match &self.kind {
            ChartKind::Linear { coeffs, denom } => {
                let s: i64 = coeffs.iter().zip(&p.ints).map(|(&c, &x)| c * x).sum();
                s as f64 / denom
            }
            _ => panic!("not a linear chart"),
        }
    }

    /// Parameters of the walls separating `p` from `q`, as a canonical
    /// interval union.
    pub fn separator_set(&self, p: &Point, q: &Point) -> IntervalSet {
        match &self.kind {
            ChartKind::Linear { .. } => {
                let (a, b) = (self.linear_value(p), self.linear_value(q));
                IntervalSet::interval(a.min(b), a.max(b))
            }
            ChartKind::TreeEdges { word_index, rank } => {
                let (wp, wq) = (&p.words[*word_index], &q.words[*word_index]);
                let path = wp.geodesic(wq);
                let mut atoms = IntervalSet::empty();
                for pair in path.windows(2) {
                    let far = if pair[0].len() > pair[1].len() { &pair[0] } else { &pair[1] };
                    atoms = atoms.union(&IntervalSet::atom(shortlex_index(far, *rank) as f64));
                }
                atoms
            }
            ChartKind::FolnerBox { half_widths } => {
                // translates m+A containing exactly one endpoint: m in
                // (p - A) symmetric-difference (q - A)
                let mut atoms = IntervalSet::empty();
                let mut m = vec![0i64; half_widths.len()];
                self.folner_walk(half_widths, p, q, 0, &mut m, &mut atoms);
                atoms
            }
        }
    }

    fn folner_walk(
        &self,
        h: &[i64],
        p: &Point,
        q: &Point,
        dim: usize,
        m: &mut Vec<i64>,
        atoms: &mut IntervalSet,
    ) {
        if dim == h.len() {
            let inside = |x: &Point| {
                m.iter().zip(h).zip(&x.ints).all(|((&mi, &hi), &xi)| (xi - mi).abs() <= hi)
            };
            if inside(p) != inside(q) {
                *atoms = atoms.union(&IntervalSet::atom(encode_translate(m)));
            }
            return;
        }
        let lo = (p.ints[dim] - h[dim]).min(q.ints[dim] - h[dim]);
        let hi = (p.ints[dim] + h[dim]).max(q.ints[dim] + h[dim]);
        for c in lo..=hi {
            m[dim] = c;
            self.folner_walk(h, p, q, dim + 1, m, atoms);
        }
    }

    /// Which side of the wall at parameter `t` the point lies on.
    pub fn side(&self, t: f64, p: &Point) -> Side {
        match &self.kind {
            ChartKind::Linear { .. } => {
                if self.linear_value(p) < t {
                    Side::Left
                } else {
                    Side::Right
                }
            }
            ChartKind::TreeEdges { word_index, rank } => {
                let far = word_at_index(t as i64, *rank);
                if far.is_prefix_of(&p.words[*word_index]) {
                    Side::Right
                } else {
                    Side::Left
                }
            }
            ChartKind::FolnerBox { half_widths } => {
                let m = decode_translate(t as i64, half_widths.len());
                let inside = m
                    .iter()
                    .zip(half_widths)
                    .zip(&p.ints)
                    .all(|((&mi, &hi), &xi)| (xi - mi).abs() <= hi);
                if inside {
                    Side::Right
                } else {
                    Side::Left
                }
            }
        }
    }

    pub fn measure(&self, set: &IntervalSet) -> f64 {
        self.scale * self.density.measure(set)
    }
}

fn decode_translate(mut code: i64, dims: usize) -> Vec<i64> {
    let mut out = vec![0i64; dims];
    for i in (0..dims).rev() {
        out[i] = code.rem_euclid(PAIR_BASE) - PAIR_BASE / 2;
        code = code.div_euclid(PAIR_BASE);
    }
    out
}

/// Inverse of `shortlex_index` (used only for side evaluation of tree walls).
pub fn word_at_index(idx: i64, rank: u32) -> FreeWord {
    let r = rank as i64;
    let mut below = 0i64;
    let mut count = 1i64;
    let mut len = 0usize;
    loop {
        if idx < below + count {
            break;
        }
        below += count;
        count *= if count == 1 { 2 * r } else { 2 * r - 1 };
        len += 1;
    }
    let mut rem = idx - below;
    let mut letters: Vec<i32> = Vec::with_capacity(len);
    for i in 0..len {
        let mut tail = 1i64;
        for _ in i + 1..len {
            tail *= 2 * r - 1;
        }
        let mut pos = rem / tail;
        rem %= tail;
        // reconstruct the letter from its position among allowed letters
        let decode = |c: i64| -> i32 {
            let g = (c / 2) as i32 + 1;
            if c % 2 == 0 {
                g
            } else {
                -g
            }
        };
        let letter = match letters.last() {
            None => decode(pos),
            Some(&prev) => {
                let skip = {
                    let x = -prev;
                    if x > 0 {
                        2 * (x as i64 - 1)
                    } else {
                        2 * ((-x) as i64 - 1) + 1
                    }
                };
                if pos >= skip {
                    pos += 1;
                }
                decode(pos)
            }
        };
        letters.push(letter);
    }
    FreeWord::new(letters)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WallClass {
    Cut,
    Skim,
    Disjoint,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredWallspace {
    pub charts: Vec<WallFamilyChart>,
    /// Global measure scale lambda.
    pub lambda: f64,
    pub int_dims: usize,
    pub word_dims: usize,
}

impl MeasuredWallspace {
    pub fn separator_set(&self, family: usize, p: &Point, q: &Point) -> IntervalSet {
        self.charts[family].separator_set(p, q)
    }

    /// The wall pseudo-metric #.
    pub fn pseudometric(&self, p: &Point, q: &Point) -> f64 {
        self.lambda
            * self
                .charts
                .iter()
                .map(|c| c.measure(&c.separator_set(p, q)))
                .sum::<f64>()
    }

    /// Per-family omega(A,B): walls separating all of A from all of B.
    pub fn set_separators(&self, a: &[Point], b: &[Point]) -> Vec<IntervalSet> {
        assert!(!a.is_empty() && !b.is_empty());
        self.charts
            .iter()
            .map(|c| {
                let mut acc: Option<IntervalSet> = None;
                for p in a {
                    for q in b {
                        let s = c.separator_set(p, q);
                        acc = Some(match acc {
                            None => s,
                            Some(prev) => prev.intersection(&s),
                        });
                    }
                }
                acc.unwrap()
            })
            .collect()
    }

    /// #(A, B) = lambda . sum of family measures of omega(A,B).
    pub fn set_distance(&self, a: &[Point], b: &[Point]) -> f64 {
        self.lambda
            * self
                .set_separators(a, b)
                .iter()
                .zip(&self.charts)
                .map(|(s, c)| c.measure(s))
                .sum::<f64>()
    }

    /// Disjoint-union product; # adds componentwise.
    pub fn product(&self, other: &MeasuredWallspace) -> MeasuredWallspace {
        let mut charts = Vec::with_capacity(self.charts.len() + other.charts.len());
        for c in &self.charts {
            let mut c = c.clone();
            c.scale *= self.lambda;
            charts.push(c);
        }
        for c in &other.charts {
            let mut c = c.clone();
            c.scale *= other.lambda;
            c.kind = match c.kind {
                ChartKind::Linear { coeffs, denom } => {
                    let mut shifted = vec![0i64; self.int_dims];
                    shifted.extend(coeffs);
                    ChartKind::Linear { coeffs: shifted, denom }
                }
                ChartKind::TreeEdges { word_index, rank } => {
                    ChartKind::TreeEdges { word_index: word_index + self.word_dims, rank }
                }
                ChartKind::FolnerBox { half_widths } => {
                    // translate boxes live in the second factor's coordinates
                    let mut h = vec![0i64; self.int_dims];
                    h.extend(half_widths);
                    ChartKind::FolnerBox { half_widths: h }
                }
            };
            charts.push(c);
        }
        MeasuredWallspace {
            charts,
            lambda: 1.0,
            int_dims: self.int_dims + other.int_dims,
            word_dims: self.word_dims + other.word_dims,
        }
    }

    pub fn scale(&self, lambda: f64) -> Result<MeasuredWallspace> {
        if lambda <= 0.0 {
            return Err(Error::NonpositiveScale(lambda));
        }
        let mut w = self.clone();
        w.lambda *= lambda;
        Ok(w)
    }

    /// Classifies the wall at `(family, t)` against a truncated two-tailed
    /// orbit `{z^k x : |k| <= K}` given in increasing `k` order.
    pub fn classify_wall(&self, family: usize, t: f64, orbit: &[Point]) -> Result<WallClass> {
        if orbit.is_empty() {
            return Err(Error::EmptyOrbit);
        }
        let chart = &self.charts[family];
        let sides: Vec<Side> = orbit.iter().map(|p| chart.side(t, p)).collect();
        let n = sides.len();
        let tail = (n / 3).max(2).min(n);
        let neg = &sides[..tail];
        let pos = &sides[n - tail..];
        let stable = |s: &[Side]| s.iter().all(|&x| x == s[0]);
        if !stable(neg) || !stable(pos) {
            return Ok(WallClass::Undetermined);
        }
        if neg[0] != pos[0] {
            return Ok(WallClass::Cut);
        }
        let majority = neg[0];
        let minority: Vec<usize> =
            (0..n).filter(|&i| sides[i] != majority).collect();
        if minority.is_empty() {
            Ok(WallClass::Disjoint)
        } else if minority.iter().all(|&i| i >= tail && i < n - tail) {
            Ok(WallClass::Skim)
        } else {
            Ok(WallClass::Undetermined)
        }
    }
}

/// Fölner-box schedule for Z^n: at stage k the set A_k is the box with the
/// given half-width, its translates forming one atomic wall family of the
/// given weight.
#[derive(Clone, Debug)]
pub struct FolnerSchedule {
    pub stages: Vec<(i64, f64)>, // (half_width, weight)
}

impl FolnerSchedule {
    /// Boxes [-k 2^k, k 2^k]^n with weight k/|A_k|; satisfies the almost-
    /// invariance rate |g A_k symdiff A_k| / |A_k| < 2^-k.
    pub fn standard(rank: usize, stages: usize) -> Self {
        let mut out = Vec::with_capacity(stages);
        for k in 1..=stages as i64 {
            let h = k << k;
            let card = ((2 * h + 1) as f64).powi(rank as i32);
            out.push((h, k as f64 / card));
        }
        FolnerSchedule { stages: out }
    }
}

pub fn folner_wallspace(rank: usize, schedule: &FolnerSchedule) -> MeasuredWallspace {
    let charts = schedule
        .stages
        .iter()
        .enumerate()
        .map(|(i, &(h, w))| WallFamilyChart {
            id: format!("folner-{}", i + 1),
            kind: ChartKind::FolnerBox { half_widths: vec![h; rank] },
            density: Density::UniformAtoms { weight: w },
            period: None,
            scale: 1.0,
        })
        .collect();
    MeasuredWallspace { charts, lambda: 1.0, int_dims: rank, word_dims: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> MeasuredWallspace {
        crate::cube::standard_cubing(2)
    }

    #[test]
    fn separator_interval() {
        let w = z2();
        let s = w.separator_set(0, &Point::lattice([0, 3]), &Point::lattice([5, 9]));
        assert_eq!(s.intervals(), &[(0.0, 5.0)]);
        let same = w.separator_set(0, &Point::lattice([2, 2]), &Point::lattice([2, 7]));
        assert!(same.is_empty());
    }

    #[test]
    fn set_separators_parallel_segments() {
        let w = z2();
        let a = vec![Point::lattice([0, 0]), Point::lattice([0, 1])];
        let b = vec![Point::lattice([5, 0]), Point::lattice([5, 1])];
        let seps = w.set_separators(&a, &b);
        assert_eq!(seps[0].intervals(), &[(0.0, 5.0)]);
        assert!(seps[1].is_empty());
        assert_eq!(w.set_distance(&a, &b), 5.0);
        // shared point kills everything
        let overlap = w.set_distance(&a, &a);
        assert_eq!(overlap, 0.0);
    }

    #[test]
    fn tree_separators() {
        let w = crate::cube::tree_wallspace(2);
        let a = vec![Point::tree(FreeWord::identity())];
        let b = vec![Point::tree(FreeWord::new([1, 1, 1]))];
        assert_eq!(w.set_distance(&a, &b), 3.0);
        let e = Point::tree(FreeWord::identity());
        let aba = Point::tree(FreeWord::new([1, 2, -1]));
        assert_eq!(w.separator_set(0, &e, &aba).integer_count(), 3);
    }

    #[test]
    fn shortlex_index_roundtrip() {
        for (i, w) in crate::group::free::ball(2, 4).iter().enumerate() {
            let _ = i;
            let idx = shortlex_index(w, 2);
            assert_eq!(&word_at_index(idx, 2), w, "word {w:?}");
        }
        // indices are injective on the ball
        let mut seen = std::collections::BTreeSet::new();
        for w in crate::group::free::ball(2, 4) {
            assert!(seen.insert(shortlex_index(&w, 2)));
        }
    }

    #[test]
    fn product_adds() {
        let line = crate::cube::standard_cubing(1);
        let prod = line.product(&line);
        let p = Point::lattice([0, 0]);
        let q = Point::lattice([3, 4]);
        assert_eq!(prod.pseudometric(&p, &q), 7.0);
    }

    #[test]
    fn scale_multiplies() {
        let w = z2().scale(2.0).unwrap();
        assert_eq!(w.pseudometric(&Point::lattice([0, 0]), &Point::lattice([3, 4])), 14.0);
        let back = w.scale(0.5).unwrap();
        assert_eq!(back.pseudometric(&Point::lattice([0, 0]), &Point::lattice([3, 4])), 7.0);
        assert!(z2().scale(0.0).is_err());
    }

    #[test]
    fn classify_cut_disjoint_skim() {
        let w = z2();
        let orbit: Vec<Point> = (-6..=6).map(|k| Point::lattice([k, 0])).collect();
        assert_eq!(w.classify_wall(0, 0.5, &orbit).unwrap(), WallClass::Cut);
        assert_eq!(w.classify_wall(1, 0.5, &orbit).unwrap(), WallClass::Disjoint);

        let t = crate::cube::tree_wallspace(2);
        let orbit: Vec<Point> =
            (-6..=6).map(|k| Point::tree(FreeWord::new([1]).pow(k).mul(&FreeWord::new([2])))).collect();
        // wall = edge (e, b): cuts off the subtree under b, holding exactly b
        let t_param = shortlex_index(&FreeWord::new([2]), 2) as f64;
        assert_eq!(t.classify_wall(0, t_param, &orbit).unwrap(), WallClass::Skim);
    }

    #[test]
    fn folner_distances() {
        let sched = FolnerSchedule::standard(1, 8);
        let w = folner_wallspace(1, &sched);
        let d01 = w.pseudometric(&Point::lattice([0]), &Point::lattice([1]));
        let expect: f64 = sched.stages.iter().map(|&(_, wt)| 2.0 * wt).sum();
        assert!((d01 - expect).abs() < 1e-12);
        assert_eq!(w.pseudometric(&Point::lattice([0]), &Point::lattice([0])), 0.0);
        // nondecreasing in separation
        let mut prev = 0.0;
        for m in 1..=20 {
            let d = w.pseudometric(&Point::lattice([0]), &Point::lattice([m]));
            assert!(d >= prev - 1e-12);
            prev = d;
        }
    }
}
