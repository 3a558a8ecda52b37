//! Dispersal profiles of subgroups acting on cube-type wallspaces: coset
//! distance tables over truncated orbit sets, exact max-clique profiles, and
//! the finite-index / transitivity / intersection lemma checkers.

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel, SubgroupSpec};
use crate::interval::IntervalSet;
use crate::space::{ChartKind, MeasuredWallspace, Point};
use std::collections::BTreeSet;

/// Left action of a group element on a point of its standard wallspace:
/// translation for free abelian, left multiplication for free.
pub fn act(m: &GroupModel, g: &GroupElement, p: &Point) -> Point {
    match (m, g) {
        (GroupModel::FreeAbelian { .. }, GroupElement::Abelian(v)) => {
            let mut q = p.clone();
            for (c, &d) in q.ints.iter_mut().zip(v) {
                *c += d;
            }
            q
        }
        (GroupModel::Free { .. }, GroupElement::Free(w)) => {
            let mut q = p.clone();
            q.words[0] = w.mul(&q.words[0]);
            q
        }
        _ => panic!("unsupported action"),
    }
}

/// Products of the generators with at most `depth` factors.
pub fn subgroup_ball(
    m: &GroupModel,
    generators: &[GroupElement],
    depth: u32,
) -> Result<Vec<GroupElement>> {
    let mut gens = Vec::new();
    for g in generators {
        gens.push(g.clone());
        gens.push(m.invert(g)?);
    }
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    seen.insert(m.identity());
    let mut frontier = vec![m.identity()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let prod = m.multiply(w, g)?;
                if seen.insert(prod.clone()) {
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

fn orbit_set(
    m: &GroupModel,
    h: &SubgroupSpec,
    g: &GroupElement,
    x: &Point,
    k: u32,
) -> Result<Vec<Point>> {
    let elems = subgroup_ball(m, &h.generators, k)?;
    Ok(elems.iter().map(|e| act(m, &m.multiply(g, e).unwrap(), x)).collect())
}

#[derive(Clone, Debug)]
pub struct CosetDistanceTable {
    pub reps: Vec<GroupElement>,
    pub dist: Vec<Vec<f64>>,
    pub stable: bool,
}

impl CosetDistanceTable {
    pub fn ensure_stable(&self) -> Result<()> {
        if self.stable {
            Ok(())
        } else {
            Err(Error::UnstableTruncation("coset table changed under enlarged budgets".into()))
        }
    }
}

fn table_for(
    w: &MeasuredWallspace,
    m: &GroupModel,
    h: &SubgroupSpec,
    reps: &[GroupElement],
    x: &Point,
    k: u32,
) -> Result<Vec<Vec<f64>>> {
    let orbits: Vec<Vec<Point>> = reps
        .iter()
        .map(|g| orbit_set(m, h, g, x, k))
        .collect::<Result<_>>()?;
    let n = reps.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = w.set_distance(&orbits[i], &orbits[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    Ok(dist)
}

/// Pairwise wall distances between truncated coset orbit sets, with a
/// stability recheck at budgets enlarged by half.
pub fn coset_distance_table(
    w: &MeasuredWallspace,
    m: &GroupModel,
    h: &SubgroupSpec,
    x: &Point,
    radius: u32,
    k: u32,
) -> Result<CosetDistanceTable> {
    let reps = m.coset_representatives(h, radius)?;
    coset_distance_table_for_reps(w, m, h, reps, x, k)
}

/// Same, with the coset representatives supplied by the caller.
pub fn coset_distance_table_for_reps(
    w: &MeasuredWallspace,
    m: &GroupModel,
    h: &SubgroupSpec,
    reps: Vec<GroupElement>,
    x: &Point,
    k: u32,
) -> Result<CosetDistanceTable> {
    let dist = table_for(w, m, h, &reps, x, k)?;
    let bigger = table_for(w, m, h, &reps, x, k + k.div_ceil(2))?;
    let stable = dist
        .iter()
        .flatten()
        .zip(bigger.iter().flatten())
        .all(|(a, b)| (a - b).abs() < 1e-9);
    Ok(CosetDistanceTable { reps, dist, stable })
}

#[derive(Clone, Debug)]
pub struct DispersalProfile {
    /// (threshold d, n(d)) with n(d) = 1 + largest pairwise-within-d clique.
    pub entries: Vec<(f64, usize)>,
}

/// Exact maximum clique (Bron-Kerbosch with pivoting) on up to 64 vertices.
fn max_clique(adj: &[u64], n: usize) -> usize {
    fn expand(adj: &[u64], r: u32, mut p: u64, mut x: u64, best: &mut u32) {
        if p == 0 && x == 0 {
            *best = (*best).max(r);
            return;
        }
        if r + p.count_ones() <= *best {
            return;
        }
        // pivot with most neighbours in p
        let pivot = {
            let mut best_u = 0;
            let mut best_deg = -1i64;
            let mut s = p | x;
            while s != 0 {
                let u = s.trailing_zeros() as usize;
                s &= s - 1;
                let deg = (p & adj[u]).count_ones() as i64;
                if deg > best_deg {
                    best_deg = deg;
                    best_u = u;
                }
            }
            best_u
        };
        let mut cands = p & !adj[pivot];
        while cands != 0 {
            let v = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            let bit = 1u64 << v;
            expand(adj, r + 1, p & adj[v], x & adj[v], best);
            p &= !bit;
            x |= bit;
        }
    }
    let mut best = 0;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    expand(adj, 0, full, 0, &mut best);
    best as usize
}

pub fn clique_at(t: &CosetDistanceTable, d: f64) -> Result<usize> {
    let n = t.reps.len();
    if n > 40 {
        return Err(Error::TableTooLarge(n));
    }
    if n == 0 {
        return Ok(0);
    }
    let mut adj = vec![0u64; n];
    for (i, row) in adj.iter_mut().enumerate() {
        for j in 0..n {
            if i != j && t.dist[i][j] <= d + 1e-9 {
                *row |= 1 << j;
            }
        }
    }
    Ok(max_clique(&adj, n))
}

pub fn dispersal_profile(t: &CosetDistanceTable, grid: &[f64]) -> Result<DispersalProfile> {
    let entries = grid
        .iter()
        .map(|&d| clique_at(t, d).map(|c| (d, c + 1)))
        .collect::<Result<_>>()?;
    Ok(DispersalProfile { entries })
}

/// The explicit finite-index transfer constant k = K + 2 r dim(X).
pub fn check_finite_index_bound(k_cap: f64, r: u32, dim: u32) -> f64 {
    k_cap + 2.0 * (r as f64) * (dim as f64)
}

/// Verifies, on parallel tables over the same representatives, that
/// #_sub > k implies #_sup > K for every coset pair.
pub fn finite_index_implication(
    sub: &CosetDistanceTable,
    sup: &CosetDistanceTable,
    k_cap: f64,
    k: f64,
) -> bool {
    assert_eq!(sub.reps, sup.reps);
    let n = sub.reps.len();
    (0..n).all(|i| {
        (0..n).all(|j| i == j || !(sub.dist[i][j] > k && sup.dist[i][j] <= k_cap))
    })
}

#[derive(Clone, Debug)]
pub struct TransitivityReport {
    pub rows: Vec<(f64, usize, usize, usize)>, // (d, c31, c32, c21)
    pub pass: bool,
}

/// For nested G3 <= G2 <= G1 over one wallspace and basepoint: the G3-in-G1
/// cliques stay within the composition bound c21 * c32, and G3-in-G2 cliques
/// (a subset of cosets) never exceed G3-in-G1 cliques.
pub fn check_transitivity(
    t31: &CosetDistanceTable,
    t32: &CosetDistanceTable,
    t21: &CosetDistanceTable,
    grid: &[f64],
) -> Result<TransitivityReport> {
    let mut rows = Vec::new();
    let mut pass = true;
    for &d in grid {
        let c31 = clique_at(t31, d)?;
        let c32 = clique_at(t32, d)?;
        let c21 = clique_at(t21, d)?;
        if c31 > c21 * c32 || c32 > c31 {
            pass = false;
        }
        rows.push((d, c31, c32, c21));
    }
    Ok(TransitivityReport { rows, pass })
}

#[derive(Clone, Debug)]
pub struct IntersectionReport {
    pub distinct_in_h: bool,
    pub rows: Vec<(f64, usize, usize)>, // (d, clique_h_prime, clique_h)
    pub pass: bool,
}

/// For G' <= G and H <= G with H' = H intersect G': distinct H'-cosets in G'
/// give distinct H-cosets, and H'-profile cliques are bounded by H-profile
/// cliques over the same representatives.
pub fn check_intersection(
    m: &GroupModel,
    h: &SubgroupSpec,
    t_h_prime: &CosetDistanceTable,
    t_h: &CosetDistanceTable,
    grid: &[f64],
) -> Result<IntersectionReport> {
    assert_eq!(t_h_prime.reps, t_h.reps);
    let mut distinct = true;
    let n = t_h.reps.len();
    for i in 0..n {
        for j in i + 1..n {
            let diff = m.multiply(&m.invert(&t_h.reps[i])?, &t_h.reps[j])?;
            if h.contains(m, &diff)? {
                distinct = false;
            }
        }
    }
    let mut rows = Vec::new();
    let mut pass = distinct;
    for &d in grid {
        let cp = clique_at(t_h_prime, d)?;
        let ch = clique_at(t_h, d)?;
        if cp > ch {
            pass = false;
        }
        rows.push((d, cp, ch));
    }
    Ok(IntersectionReport { distinct_in_h: distinct, rows, pass })
}

#[derive(Clone, Debug)]
pub struct BasepointReport {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub bound2: f64,
    pub bound3: f64,
    pub pass: bool,
}

/// Partition of omega(Hx, gHx) into walls shared with omega(Hy, gHy), walls
/// separating x from y or gx from gy, and the remainder; the last two are
/// bounded by the basepoint displacements.
#[allow(clippy::too_many_arguments)]
pub fn basepoint_decomposition(
    w: &MeasuredWallspace,
    m: &GroupModel,
    h: &SubgroupSpec,
    g: &GroupElement,
    x: &Point,
    y: &Point,
    k: u32,
) -> Result<BasepointReport> {
    if w.charts.iter().any(|c| matches!(c.kind, ChartKind::FolnerBox { .. })) {
        return Err(Error::NotCubeType);
    }
    let id = m.identity();
    let hx = orbit_set(m, h, &id, x, k)?;
    let hy = orbit_set(m, h, &id, y, k)?;
    let ghx = orbit_set(m, h, g, x, k)?;
    let ghy = orbit_set(m, h, g, y, k)?;
    let gx = act(m, g, x);
    let gy = act(m, g, y);

    let s = w.set_separators(&hx, &ghx);
    let t = w.set_separators(&hy, &ghy);
    let mut mu = [0.0; 3];
    for (i, chart) in w.charts.iter().enumerate() {
        let pairs: IntervalSet =
            chart.separator_set(x, y).union(&chart.separator_set(&gx, &gy));
        let omega1 = s[i].intersection(&t[i]);
        let rest = s[i].difference(&t[i]);
        let omega2 = rest.intersection(&pairs);
        let omega3 = rest.difference(&pairs);
        mu[0] += chart.measure(&omega1);
        mu[1] += chart.measure(&omega2);
        mu[2] += chart.measure(&omega3);
    }
    let bound2 = w.pseudometric(x, y) + w.pseudometric(&gx, &gy);
    // Hausdorff-type reach: Hy within N_m(Hx)
    let bound3 = hy
        .iter()
        .map(|p| {
            hx.iter()
                .map(|q| w.pseudometric(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let lam = w.lambda;
    let (mu1, mu2, mu3) = (lam * mu[0], lam * mu[1], lam * mu[2]);
    let pass = mu2 <= bound2 + 1e-9 && mu3 <= bound3 + 1e-9;
    Ok(BasepointReport { mu1, mu2, mu3, bound2, bound3, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::standard_cubing;
    use crate::group::free::FreeWord;

    fn z2_setup() -> (MeasuredWallspace, GroupModel, SubgroupSpec) {
        let w = standard_cubing(2);
        let m = GroupModel::FreeAbelian { rank: 2 };
        let h = SubgroupSpec::new(&m, vec![GroupElement::Abelian(vec![1, 0])]).unwrap();
        (w, m, h)
    }

    #[test]
    fn z2_table_is_offset_distance() {
        let (w, m, h) = z2_setup();
        let x = Point::lattice([0, 0]);
        let t = coset_distance_table(&w, &m, &h, &x, 4, 6).unwrap();
        assert!(t.stable);
        for (i, gi) in t.reps.iter().enumerate() {
            for (j, gj) in t.reps.iter().enumerate() {
                let (GroupElement::Abelian(a), GroupElement::Abelian(b)) = (gi, gj) else {
                    panic!()
                };
                assert_eq!(t.dist[i][j], (a[1] - b[1]).abs() as f64, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn z2_profile_clique() {
        let (w, m, h) = z2_setup();
        let x = Point::lattice([0, 0]);
        let t = coset_distance_table(&w, &m, &h, &x, 4, 6).unwrap();
        // reps are offsets -4..4: d=3 allows 4 consecutive offsets
        let p = dispersal_profile(&t, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.entries.last().unwrap().1, 5);
        assert_eq!(p.entries[0].1, 2);
        // nondecreasing
        for pair in p.entries.windows(2) {
            assert!(pair[0].1 <= pair[1].1);
        }
    }

    #[test]
    fn f2_single_edge_between_cosets() {
        let w = crate::cube::tree_wallspace(2);
        let m = GroupModel::Free { rank: 2 };
        let h = SubgroupSpec::new(&m, vec![GroupElement::Free(FreeWord::new([1]))]).unwrap();
        let x = Point::tree(FreeWord::identity());
        let t = coset_distance_table(&w, &m, &h, &x, 1, 5).unwrap();
        assert!(t.stable);
        let b_idx = t
            .reps
            .iter()
            .position(|r| r == &GroupElement::Free(FreeWord::new([2])))
            .unwrap();
        let e_idx = t
            .reps
            .iter()
            .position(|r| r == &GroupElement::Free(FreeWord::identity()))
            .unwrap();
        assert_eq!(t.dist[e_idx][b_idx], 1.0);
    }

    #[test]
    fn finite_index_constant() {
        assert_eq!(check_finite_index_bound(10.0, 1, 2), 14.0);
        assert_eq!(check_finite_index_bound(7.0, 0, 3), 7.0);
    }

    #[test]
    fn transitivity_chain() {
        // Z^3 >= Z^2 >= Z with the standard cubing
        let w = standard_cubing(3);
        let m = GroupModel::FreeAbelian { rank: 3 };
        let g1 = |v: [i64; 3]| GroupElement::Abelian(v.to_vec());
        let h3 = SubgroupSpec::new(&m, vec![g1([1, 0, 0])]).unwrap();
        let h2 = SubgroupSpec::new(&m, vec![g1([1, 0, 0]), g1([0, 1, 0])]).unwrap();
        let x = Point::lattice([0, 0, 0]);
        let t31 = coset_distance_table(&w, &m, &h3, &x, 3, 4).unwrap();
        let t21 = coset_distance_table(&w, &m, &h2, &x, 3, 4).unwrap();
        // G3 cosets inside G2 = Z^2: reps along the y axis
        let reps32: Vec<GroupElement> =
            (-3..=3).map(|k| g1([0, k, 0])).collect();
        let t32 = coset_distance_table_for_reps(&w, &m, &h3, reps32, &x, 4).unwrap();
        let rep = check_transitivity(&t31, &t32, &t21, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(rep.pass, "{:?}", rep.rows);
    }

    #[test]
    fn intersection_z2() {
        // G' = 2Z x Z, H = <(1,0)>, H' = <(2,0)>
        let (w, m, h) = z2_setup();
        let hp = SubgroupSpec::new(&m, vec![GroupElement::Abelian(vec![2, 0])]).unwrap();
        let gp_gens =
            [GroupElement::Abelian(vec![2, 0]), GroupElement::Abelian(vec![0, 1])];
        // H'-coset reps within G': offsets in y (x-offsets collapse mod 2
        // but stay within distinct H'-cosets only via x parity; keep y line)
        let reps: Vec<GroupElement> = subgroup_ball(&m, &gp_gens, 3)
            .unwrap()
            .into_iter()
            .filter(|g| matches!(g, GroupElement::Abelian(v) if v[0] == 0))
            .collect();
        let x = Point::lattice([0, 0]);
        let tp = coset_distance_table_for_reps(&w, &m, &hp, reps.clone(), &x, 6).unwrap();
        let th = coset_distance_table_for_reps(&w, &m, &h, reps, &x, 6).unwrap();
        let rep = check_intersection(&m, &h, &tp, &th, &[0.0, 1.0, 2.0]).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn omega_partition_z2() {
        let (w, m, h) = z2_setup();
        let x = Point::lattice([0, 0]);
        let y = Point::lattice([0, 5]);
        let g = GroupElement::Abelian(vec![0, 9]);
        let rep = basepoint_decomposition(&w, &m, &h, &g, &x, &y, 8).unwrap();
        let total = rep.mu1 + rep.mu2 + rep.mu3;
        // omega(Hx, gHx) is the slab of 9 horizontal walls
        assert!((total - 9.0).abs() < 1e-9, "{rep:?}");
        assert!(rep.mu2 <= 10.0 + 1e-9);
        assert!(rep.mu3 <= 5.0 + 1e-9);
        assert!(rep.pass);
        // y = x degenerates to omega1 only
        let triv = basepoint_decomposition(&w, &m, &h, &g, &x, &x, 8).unwrap();
        assert_eq!(triv.mu2, 0.0);
        assert_eq!(triv.mu3, 0.0);
        assert!((triv.mu1 - 9.0).abs() < 1e-9);
    }

    #[test]
    fn folner_not_cube_type() {
        let sched = crate::space::FolnerSchedule::standard(1, 3);
        let w = crate::space::folner_wallspace(1, &sched);
        let m = GroupModel::FreeAbelian { rank: 1 };
        let h = SubgroupSpec::new(&m, vec![GroupElement::Abelian(vec![1])]).unwrap();
        let x = Point::lattice([0]);
        let g = GroupElement::Abelian(vec![3]);
        assert!(matches!(
            basepoint_decomposition(&w, &m, &h, &g, &x, &x, 3),
            Err(Error::NotCubeType)
        ));
    }
}
