//! Cube-complex wallspaces: standard cubings of Z^n, Cayley trees of free
//! groups, convex hulls with r-thickening, hull separation, and the dual
//! cube complex of a free-abelian subgroup.

use crate::error::{Error, Result};
use crate::group::abelian::{adjugate, det, Lattice};
use crate::group::free::FreeWord;
use crate::interval::{Density, IntervalSet};
use crate::space::{ChartKind, MeasuredWallspace, Point, WallFamilyChart};
use std::collections::BTreeSet;

/// Standard cubing of Z^n: one Lebesgue axis chart per coordinate, walls at
/// every half-integer; # is the l1 distance on integer points.
pub fn standard_cubing(n: usize) -> MeasuredWallspace {
    let charts = (0..n)
        .map(|i| {
            let mut coeffs = vec![0i64; n];
            coeffs[i] = 1;
            WallFamilyChart {
                id: format!("axis-{i}"),
                kind: ChartKind::Linear { coeffs, denom: 1.0 },
                density: Density::Lebesgue,
                period: Some(1.0),
                scale: 1.0,
            }
        })
        .collect();
    MeasuredWallspace { charts, lambda: 1.0, int_dims: n, word_dims: 0 }
}

/// Cayley-tree wallspace of the free group of rank r: one atom of weight 1
/// per tree edge; # is the tree distance.
pub fn tree_wallspace(r: u32) -> MeasuredWallspace {
    MeasuredWallspace {
        charts: vec![WallFamilyChart {
            id: "tree-edges".into(),
            kind: ChartKind::TreeEdges { word_index: 0, rank: r },
            density: Density::UniformAtoms { weight: 1.0 },
            period: None,
            scale: 1.0,
        }],
        lambda: 1.0,
        int_dims: 0,
        word_dims: 1,
    }
}

/// Convex (median-closed) subcomplex hull.
#[derive(Clone, Debug, PartialEq)]
pub enum CubeHull {
    /// Product of integer intervals; `None` marks an unbounded direction.
    Box { intervals: Vec<(Option<i64>, Option<i64>)> },
    /// Connected subtree of a Cayley tree, with optional infinite ray
    /// directions `(base, period)` covering {base . period^j . prefix}.
    Subtree { rank: u32, core: BTreeSet<FreeWord>, rays: Vec<(FreeWord, FreeWord)> },
}

impl CubeHull {
    pub fn contains_lattice(&self, p: &[i64]) -> bool {
        match self {
            CubeHull::Box { intervals } => intervals
                .iter()
                .zip(p)
                .all(|(&(lo, hi), &x)| lo.is_none_or(|l| l <= x) && hi.is_none_or(|h| x <= h)),
            _ => false,
        }
    }

    pub fn contains_word(&self, w: &FreeWord) -> bool {
        match self {
            CubeHull::Subtree { core, rays, .. } => {
                core.contains(w) || rays.iter().any(|(base, period)| on_ray(base, period, w))
            }
            _ => false,
        }
    }

    /// Finite vertex sample: all box corners / all core vertices, with rays
    /// represented by a long truncation beyond `depth` letters.
    fn sample(&self, depth: usize) -> Vec<Point> {
        match self {
            CubeHull::Box { intervals } => {
                let mut pts = vec![Vec::new()];
                for &(lo, hi) in intervals {
                    let choices = match (lo, hi) {
                        (Some(l), Some(h)) if l == h => vec![l],
                        (Some(l), Some(h)) => vec![l, h],
                        (Some(l), None) => vec![l, l + depth as i64],
                        (None, Some(h)) => vec![h - depth as i64, h],
                        (None, None) => vec![-(depth as i64), depth as i64],
                    };
                    pts = pts
                        .into_iter()
                        .flat_map(|p| {
                            choices.iter().map(move |&c| {
                                let mut q = p.clone();
                                q.push(c);
                                q
                            })
                        })
                        .collect();
                }
                pts.into_iter().map(Point::lattice).collect()
            }
            CubeHull::Subtree { core, rays, .. } => {
                let mut out: Vec<Point> =
                    core.iter().cloned().map(Point::tree).collect();
                for (base, period) in rays {
                    let reps = depth / period.len().max(1) + 2;
                    out.push(Point::tree(base.mul(&period.pow(reps as i64))));
                }
                out
            }
        }
    }
}

fn on_ray(base: &FreeWord, period: &FreeWord, w: &FreeWord) -> bool {
    if period.is_empty() {
        return w == base;
    }
    if !base.is_prefix_of(w) {
        return false;
    }
    let mut rest = w.letters()[base.len()..].to_vec();
    loop {
        if rest.len() < period.len() {
            return rest[..] == period.letters()[..rest.len()];
        }
        if rest[..period.len()] != period.letters()[..] {
            return false;
        }
        rest.drain(..period.len());
    }
}

/// Smallest median-closed hull of a finite set of lattice points.
pub fn hull_lattice(points: &[Vec<i64>]) -> CubeHull {
    assert!(!points.is_empty());
    let n = points[0].len();
    let intervals = (0..n)
        .map(|i| {
            let lo = points.iter().map(|p| p[i]).min().unwrap();
            let hi = points.iter().map(|p| p[i]).max().unwrap();
            (Some(lo), Some(hi))
        })
        .collect();
    CubeHull::Box { intervals }
}

/// Smallest subtree containing a finite set of tree vertices.
pub fn hull_tree(rank: u32, points: &[FreeWord]) -> CubeHull {
    assert!(!points.is_empty());
    let mut core = BTreeSet::new();
    for a in points {
        for b in points {
            for v in a.geodesic(b) {
                core.insert(v);
            }
        }
    }
    CubeHull::Subtree { rank, core, rays: Vec::new() }
}

/// r-thickening: a convex hull with N_r(Y) subset Y^{+r} subset N_{dim.r}(Y).
pub fn thicken(y: &CubeHull, r: u32) -> CubeHull {
    match y {
        CubeHull::Box { intervals } => CubeHull::Box {
            intervals: intervals
                .iter()
                .map(|&(lo, hi)| (lo.map(|l| l - r as i64), hi.map(|h| h + r as i64)))
                .collect(),
        },
        CubeHull::Subtree { rank, core, rays } => {
            // trees have dim 1: the r-neighborhood is itself convex
            let mut grown = core.clone();
            let mut frontier: Vec<FreeWord> = core.iter().cloned().collect();
            for _ in 0..r {
                let mut next = Vec::new();
                for w in &frontier {
                    for g in 1..=*rank as i32 {
                        for s in [g, -g] {
                            let v = w.mul(&FreeWord::new([s]));
                            if grown.insert(v.clone()) {
                                next.push(v);
                            }
                        }
                    }
                }
                frontier = next;
            }
            CubeHull::Subtree { rank: *rank, core: grown, rays: rays.clone() }
        }
    }
}

/// Measure of the walls separating `y1` entirely from `y2`; equals the
/// combinatorial distance for disjoint convex hulls, 0 when they meet.
/// Boundary walls (parameter on a face) count as intersecting.
pub fn hull_separation(w: &MeasuredWallspace, y1: &CubeHull, y2: &CubeHull) -> f64 {
    match (y1, y2) {
        (CubeHull::Box { intervals: a }, CubeHull::Box { intervals: b }) => {
            let mut total = 0.0;
            for (i, chart) in w.charts.iter().enumerate() {
                let ChartKind::Linear { coeffs, denom } = &chart.kind else { continue };
                // only unit axis charts correspond to box faces
                let Some(axis) = unit_axis(coeffs) else { continue };
                let _ = i;
                let (alo, ahi) = a[axis];
                let (blo, bhi) = b[axis];
                let gap = match (ahi, blo) {
                    (Some(ah), Some(bl)) if bl > ah => Some((ah as f64, bl as f64)),
                    _ => match (bhi, alo) {
                        (Some(bh), Some(al)) if al > bh => Some((bh as f64, al as f64)),
                        _ => None,
                    },
                };
                if let Some((lo, hi)) = gap {
                    let set = IntervalSet::interval(lo / denom, hi / denom);
                    total += chart.measure(&set);
                }
            }
            w.lambda * total
        }
        (CubeHull::Subtree { rank, .. }, CubeHull::Subtree { .. }) => {
            if intersects(y1, y2) {
                return 0.0;
            }
            let depth = 64;
            let p1 = y1.sample(depth);
            let p2 = y2.sample(depth);
            // any separating edge lies on the geodesic between one sample pair
            let a = &p1[0].words[0];
            let b = &p2[0].words[0];
            let mut atoms = IntervalSet::empty();
            for pair in a.geodesic(b).windows(2) {
                let far = if pair[0].len() > pair[1].len() { &pair[0] } else { &pair[1] };
                let side = |v: &FreeWord| far.is_prefix_of(v);
                let s1: Vec<bool> = p1.iter().map(|p| side(&p.words[0])).collect();
                let s2: Vec<bool> = p2.iter().map(|p| side(&p.words[0])).collect();
                let const1 = s1.iter().all(|&x| x == s1[0]);
                let const2 = s2.iter().all(|&x| x == s2[0]);
                if const1 && const2 && s1[0] != s2[0] {
                    let pos = crate::space::shortlex_index(far, *rank) as f64;
                    atoms = atoms.union(&IntervalSet::atom(pos));
                }
            }
            w.lambda
                * w.charts
                    .iter()
                    .filter(|c| matches!(c.kind, ChartKind::TreeEdges { .. }))
                    .map(|c| c.measure(&atoms))
                    .sum::<f64>()
        }
        _ => panic!("hull kinds must match the wallspace"),
    }
}

fn unit_axis(coeffs: &[i64]) -> Option<usize> {
    let mut axis = None;
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            if axis.is_some() || c != 1 {
                return None;
            }
            axis = Some(i);
        }
    }
    axis
}

fn intersects(y1: &CubeHull, y2: &CubeHull) -> bool {
    match (y1, y2) {
        (CubeHull::Subtree { core: c1, .. }, CubeHull::Subtree { core: c2, .. }) => {
            c1.intersection(c2).next().is_some()
        }
        (CubeHull::Box { intervals: a }, CubeHull::Box { intervals: b }) => {
            a.iter().zip(b).all(|(&(alo, ahi), &(blo, bhi))| {
                let lo = match (alo, blo) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    _ => None,
                };
                let hi = match (ahi, bhi) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    _ => None,
                };
                match (lo, hi) {
                    (Some(l), Some(h)) => l <= h,
                    _ => true,
                }
            })
        }
        _ => false,
    }
}

/// The dual cube complex of Z^n relative to a rank-k free abelian subgroup:
/// the quotient is R^{n-k} and the wall metric pushes down to l1 on the
/// integer quotient lattice.
#[derive(Clone, Debug)]
pub struct DualComplexDescriptor {
    pub ambient_rank: usize,
    pub subgroup_basis: Vec<Vec<i64>>,
    pub complement: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct DualComplexAction {
    /// One integer functional per quotient dimension, vanishing on the
    /// subgroup; quotient coordinates are functional values / det.
    pub functionals: Vec<Vec<i64>>,
    pub det: i64,
    pub subgroup: Lattice,
}

impl DualComplexAction {
    /// Whether `g` stabilizes the base 0-cube (all functionals vanish).
    pub fn stabilizes(&self, g: &[i64]) -> bool {
        self.functionals
            .iter()
            .map(|f| f.iter().zip(g).map(|(&a, &b)| a * b).sum::<i64>())
            .all(|v| v == 0)
    }

    /// Quotient coordinates of a point, in units of 1/det.
    pub fn project(&self, g: &[i64]) -> Vec<i64> {
        self.functionals
            .iter()
            .map(|f| f.iter().zip(g).map(|(&a, &b)| a * b).sum::<i64>())
            .collect()
    }
}

pub fn dual_cube_complex(
    d: &DualComplexDescriptor,
) -> Result<(MeasuredWallspace, DualComplexAction)> {
    let n = d.ambient_rank;
    let k = d.subgroup_basis.len();
    assert_eq!(k + d.complement.len(), n);
    // columns: subgroup basis then complement
    let mut m = vec![vec![0i64; n]; n];
    for (j, col) in d.subgroup_basis.iter().chain(d.complement.iter()).enumerate() {
        for i in 0..n {
            m[i][j] = col[i];
        }
    }
    let dm = det(&m);
    if dm == 0 {
        return Err(Error::RankDeficient);
    }
    let adj = adjugate(&m);
    // adj . M = det . I, so rows k..n of adj vanish on the subgroup basis
    let functionals: Vec<Vec<i64>> = adj[k..].to_vec();
    let charts = functionals
        .iter()
        .enumerate()
        .map(|(i, f)| WallFamilyChart {
            id: format!("dual-{i}"),
            kind: ChartKind::Linear { coeffs: f.clone(), denom: dm.abs() as f64 },
            density: Density::Lebesgue,
            period: Some(1.0),
            scale: 1.0,
        })
        .collect();
    let space = MeasuredWallspace { charts, lambda: 1.0, int_dims: n, word_dims: 0 };
    let action = DualComplexAction {
        functionals,
        det: dm,
        subgroup: Lattice::new(n, &d.subgroup_basis),
    };
    Ok((space, action))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubing_is_l1() {
        let w = standard_cubing(3);
        assert_eq!(w.pseudometric(&Point::lattice([0, 0, 0]), &Point::lattice([1, 1, 1])), 3.0);
        let w2 = standard_cubing(2);
        assert_eq!(w2.pseudometric(&Point::lattice([0, 0]), &Point::lattice([3, 4])), 7.0);
        assert_eq!(w2.pseudometric(&Point::lattice([0, 0]), &Point::lattice([-2, 5])), 7.0);
    }

    #[test]
    fn tree_is_tree_distance() {
        let w = tree_wallspace(2);
        let e = Point::tree(FreeWord::identity());
        let ab = Point::tree(FreeWord::new([1, 2]));
        assert_eq!(w.pseudometric(&e, &ab), 2.0);
        assert_eq!(w.pseudometric(&e, &e), 0.0);
        let b = Point::tree(FreeWord::new([2]));
        let aba = Point::tree(FreeWord::new([1, 2, -1]));
        assert_eq!(w.pseudometric(&b, &aba), 4.0);
    }

    #[test]
    fn hulls() {
        let h = hull_lattice(&[vec![0, 0], vec![2, 3]]);
        assert_eq!(h, CubeHull::Box { intervals: vec![(Some(0), Some(2)), (Some(0), Some(3))] });
        let single = hull_lattice(&[vec![5, -1]]);
        assert!(single.contains_lattice(&[5, -1]));
        assert!(!single.contains_lattice(&[5, 0]));
        let t = hull_tree(2, &[FreeWord::identity(), FreeWord::new([1, 2]), FreeWord::new([1])]);
        let CubeHull::Subtree { core, .. } = &t else { panic!() };
        let expect: BTreeSet<FreeWord> =
            [FreeWord::identity(), FreeWord::new([1]), FreeWord::new([1, 2])].into_iter().collect();
        assert_eq!(core, &expect);
    }

    #[test]
    fn thicken_box() {
        let h = hull_lattice(&[vec![0, 0], vec![2, 3]]);
        let t = thicken(&h, 1);
        assert_eq!(
            t,
            CubeHull::Box { intervals: vec![(Some(-1), Some(3)), (Some(-1), Some(4))] }
        );
        assert_eq!(thicken(&h, 0), h);
    }

    #[test]
    fn thicken_tree_bfs() {
        let t = hull_tree(2, &[FreeWord::identity()]);
        let t2 = thicken(&t, 2);
        let CubeHull::Subtree { core, .. } = &t2 else { panic!() };
        assert_eq!(core.len(), 17); // radius-2 ball of F2
    }

    #[test]
    fn separation_boxes() {
        let w = standard_cubing(2);
        let y1 = CubeHull::Box { intervals: vec![(Some(0), Some(1)), (Some(0), Some(1))] };
        let y2 = CubeHull::Box { intervals: vec![(Some(5), Some(6)), (Some(0), Some(1))] };
        assert_eq!(hull_separation(&w, &y1, &y2), 4.0);
        let overlap = CubeHull::Box { intervals: vec![(Some(1), Some(3)), (Some(0), Some(1))] };
        assert_eq!(hull_separation(&w, &y1, &overlap), 0.0);
        // parallel lines y=0 and y=k
        let l0 = CubeHull::Box { intervals: vec![(None, None), (Some(0), Some(0))] };
        let lk = CubeHull::Box { intervals: vec![(None, None), (Some(4), Some(4))] };
        assert_eq!(hull_separation(&w, &l0, &lk), 4.0);
    }

    #[test]
    fn separation_trees() {
        let w = tree_wallspace(2);
        let y1 = hull_tree(2, &[FreeWord::identity()]);
        let y2 = hull_tree(2, &[FreeWord::new([1, 1, 1])]);
        assert_eq!(hull_separation(&w, &y1, &y2), 3.0);
        let touching = hull_tree(2, &[FreeWord::identity(), FreeWord::new([2])]);
        assert_eq!(hull_separation(&w, &y1, &touching), 0.0);
        // axes of a and bab^-1 as rays
        let ya = CubeHull::Subtree {
            rank: 2,
            core: [FreeWord::identity()].into_iter().collect(),
            rays: vec![
                (FreeWord::identity(), FreeWord::new([1])),
                (FreeWord::identity(), FreeWord::new([-1])),
            ],
        };
        let yb = CubeHull::Subtree {
            rank: 2,
            core: [FreeWord::new([2])].into_iter().collect(),
            rays: vec![
                (FreeWord::new([2]), FreeWord::new([1])),
                (FreeWord::new([2]), FreeWord::new([-1])),
            ],
        };
        assert_eq!(hull_separation(&w, &ya, &yb), 1.0);
    }

    #[test]
    fn dual_complex_line() {
        let d = DualComplexDescriptor {
            ambient_rank: 2,
            subgroup_basis: vec![vec![1, 0]],
            complement: vec![vec![0, 1]],
        };
        let (w, act) = dual_cube_complex(&d).unwrap();
        assert_eq!(w.charts.len(), 1);
        for m in 0..6i64 {
            let p = Point::lattice([0, 0]);
            let q = Point::lattice([0, m]);
            assert_eq!(w.pseudometric(&p, &q), m as f64);
        }
        assert!(act.stabilizes(&[7, 0]));
        assert!(!act.stabilizes(&[0, 1]));
    }

    #[test]
    fn dual_complex_rank_deficient() {
        let d = DualComplexDescriptor {
            ambient_rank: 2,
            subgroup_basis: vec![vec![1, 0]],
            complement: vec![vec![2, 0]],
        };
        assert!(matches!(dual_cube_complex(&d), Err(Error::RankDeficient)));
    }

    #[test]
    fn dual_complex_plane() {
        let d = DualComplexDescriptor {
            ambient_rank: 3,
            subgroup_basis: vec![vec![1, 0, 0]],
            complement: vec![vec![0, 1, 0], vec![0, 0, 1]],
        };
        let (w, _) = dual_cube_complex(&d).unwrap();
        assert_eq!(w.charts.len(), 2);
        let p = Point::lattice([9, 0, 0]);
        let q = Point::lattice([0, 3, -4]);
        assert_eq!(w.pseudometric(&p, &q), 7.0);
    }
}
