//! Assembled wallspace of a monic tree of groups: a truncated Bass-Serre
//! tree of vertex-space copies, horizontal wall families glued along edge
//! orbits, and one vertical wall family per tree edge.
//!
//! A point lives in the vertex-space copy at a tree node; nodes are rooted
//! coset walks with canonical transversal representatives. The pseudo-metric
//! sweeps the node geodesic: vertical walls contribute the orbit weight of
//! each crossed edge, and horizontal walls are carried across crossings via
//! measure-preserving line charts, accumulating separation parity by
//! symmetric difference.

use crate::error::{Error, Result};
use crate::graph_spec::{EndData, GraphOfGroupsSpec};
use crate::group::amalgam::{AmalgamWord, TreePresentation, VertexElem, VertexKind};
use crate::group::free::FreeWord;
use crate::group::{GroupElement, GroupModel};
use crate::interval::{Density, IntervalSet};
use crate::space::{shortlex_index, word_at_index, ChartKind, MeasuredWallspace, Point};
use std::collections::{BTreeSet, HashMap, VecDeque};

/// One crossing of the Bass-Serre tree: the spec edge and the transversal
/// representative in the near (parent-side) vertex group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: usize,
    pub rep: VertexElem,
}

/// A tree node as the reduced walk from the root coset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodePath {
    pub steps: Vec<Step>,
}

impl NodePath {
    pub fn root() -> Self {
        NodePath::default()
    }

    pub fn depth(&self) -> u32 {
        self.steps.len() as u32
    }

    pub fn label(&self) -> String {
        if self.steps.is_empty() {
            return "root".into();
        }
        self.steps
            .iter()
            .map(|s| format!("e{}[{}]", s.edge, elem_label(&s.rep)))
            .collect::<Vec<_>>()
            .join("/")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmalgamPoint {
    pub node: NodePath,
    pub local: Point,
}

fn elem_label(g: &VertexElem) -> String {
    match g {
        VertexElem::Abelian(c) => {
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            format!("({})", body.join(" "))
        }
        VertexElem::Free(w) => {
            if w.is_empty() {
                return "e".into();
            }
            w.letters()
                .iter()
                .map(|&l| {
                    let base = (b'a' + (l.unsigned_abs() as u8) - 1) as char;
                    if l > 0 { base.to_string() } else { format!("{base}'") }
                })
                .collect()
        }
    }
}

pub fn word_label(w: &AmalgamWord) -> String {
    if w.is_identity() {
        return "e".into();
    }
    w.syllables()
        .iter()
        .map(|(v, g)| format!("v{v}{}", elem_label(g)))
        .collect::<Vec<_>>()
        .join(".")
}

fn vertex_act(h: &VertexElem, p: &Point) -> Point {
    match h {
        VertexElem::Abelian(c) => {
            Point::lattice(p.ints.iter().zip(c).map(|(&x, &d)| x + d))
        }
        VertexElem::Free(w) => Point::tree(w.mul(&p.words[0])),
    }
}

fn origin_of(kind: &VertexKind) -> Point {
    match kind {
        VertexKind::FreeAbelian { rank } => Point::lattice(vec![0; *rank]),
        VertexKind::Free { .. } => Point::tree(FreeWord::identity()),
    }
}

// ---------- line charts across an edge ----------

/// Measure-preserving chart from the walls of a vertex space that cut an
/// edge orbit onto the real line: fundamental domains stack into consecutive
/// blocks of the gluing period, so Lebesgue measure on the line equals wall
/// measure upstairs. Both ends of an edge place the block of walls between
/// x and z x at [0, period), which realizes the alignment of fundamental
/// domains.
enum LineLayout {
    Cube {
        /// Per chart: functional at the basepoint, functional of z, cell
        /// width (measure of one fundamental domain's walls), block offset.
        fx: Vec<f64>,
        c: Vec<f64>,
        width: Vec<f64>,
        offset: Vec<f64>,
        m: f64,
    },
    Tree {
        rank: u32,
        /// Geodesic from x to z x; axis vertex k*l + i is z^k * path[i].
        path: Vec<FreeWord>,
        z: FreeWord,
        l: i64,
        cellw: f64,
        m: f64,
    },
}

impl LineLayout {
    fn new(w: &MeasuredWallspace, x: &Point, z: &VertexElem) -> LineLayout {
        match z {
            VertexElem::Abelian(zc) => {
                let mut fx = Vec::new();
                let mut c = Vec::new();
                let mut width = Vec::new();
                let mut offset = Vec::new();
                let mut acc = 0.0;
                for chart in &w.charts {
                    let ChartKind::Linear { coeffs, denom } = &chart.kind else {
                        panic!("cube layout requires linear charts");
                    };
                    let dot = |v: &[i64]| {
                        coeffs.iter().zip(v).map(|(&a, &b)| a * b).sum::<i64>() as f64 / denom
                    };
                    let ci = dot(zc);
                    let wi = w.lambda * chart.scale * ci.abs();
                    fx.push(dot(&x.ints));
                    c.push(ci);
                    offset.push(acc);
                    width.push(wi);
                    acc += wi;
                }
                LineLayout::Cube { fx, c, width, offset, m: acc }
            }
            VertexElem::Free(zw) => {
                let chart = &w.charts[0];
                let Density::UniformAtoms { weight } = chart.density else {
                    panic!("tree layout requires an atomic chart");
                };
                let xw = x.words[0].clone();
                let zx = zw.mul(&xw);
                let path = xw.geodesic(&zx);
                let l = (path.len() - 1) as i64;
                let cellw = w.lambda * chart.scale * weight;
                LineLayout::Tree { rank: tree_rank(chart), path, z: zw.clone(), l, cellw, m: cellw * l as f64 }
            }
        }
    }

    fn period(&self) -> f64 {
        match self {
            LineLayout::Cube { m, .. } | LineLayout::Tree { m, .. } => *m,
        }
    }

    fn axis_vertex(path: &[FreeWord], z: &FreeWord, l: i64, j: i64) -> FreeWord {
        let (k, i) = (j.div_euclid(l), j.rem_euclid(l));
        z.pow(k).mul(&path[i as usize])
    }

    fn axis_far_word(path: &[FreeWord], z: &FreeWord, l: i64, j: i64) -> FreeWord {
        let a = Self::axis_vertex(path, z, l, j);
        let b = Self::axis_vertex(path, z, l, j + 1);
        if a.len() > b.len() {
            a
        } else {
            b
        }
    }

    /// Splits per-chart wall sets into the part cutting the orbit (returned
    /// in line coordinates) and the resident remainder.
    fn to_line(&self, sets: &[IntervalSet]) -> (Vec<IntervalSet>, IntervalSet) {
        match self {
            LineLayout::Cube { fx, c, width, offset, m } => {
                let mut residual = Vec::with_capacity(sets.len());
                let mut line = Vec::new();
                for (i, set) in sets.iter().enumerate() {
                    if c[i] == 0.0 {
                        residual.push(set.clone());
                        continue;
                    }
                    residual.push(IntervalSet::empty());
                    for &(t1, t2) in set.intervals() {
                        let (s1, s2) = ((t1 - fx[i]) / c[i], (t2 - fx[i]) / c[i]);
                        let (lo, hi) = (s1.min(s2), s1.max(s2));
                        let mut k = lo.floor() as i64;
                        while (k as f64) < hi {
                            let a = lo.max(k as f64);
                            let b = hi.min((k + 1) as f64);
                            if b > a {
                                let base = k as f64 * m + offset[i];
                                line.push((base + (a - k as f64) * width[i], base + (b - k as f64) * width[i]));
                            }
                            k += 1;
                        }
                    }
                }
                (residual, IntervalSet::from_intervals(line))
            }
            LineLayout::Tree { rank, path, z, l, cellw, .. } => {
                let mut max_len = path.last().unwrap().len() + z.len();
                let mut atoms = Vec::new();
                for &(lo, _) in sets[0].intervals() {
                    let far = word_at_index(lo.round() as i64, *rank);
                    max_len = max_len.max(far.len());
                    atoms.push(far);
                }
                let j_range = (max_len + path[0].len() + z.len() + 4) as i64;
                let mut index: HashMap<FreeWord, i64> = HashMap::new();
                for j in -j_range..=j_range {
                    index.insert(Self::axis_far_word(path, z, *l, j), j);
                }
                let mut residual = IntervalSet::empty();
                let mut line = Vec::new();
                for far in atoms {
                    match index.get(&far) {
                        Some(&j) => line.push((j as f64 * cellw, (j + 1) as f64 * cellw)),
                        None => {
                            residual =
                                residual.union(&IntervalSet::atom(shortlex_index(&far, *rank) as f64))
                        }
                    }
                }
                (vec![residual], IntervalSet::from_intervals(line))
            }
        }
    }

    /// Pulls a line set back to per-chart wall sets.
    #[allow(clippy::wrong_self_convention)] // chart direction, not a constructor
    fn from_line(&self, line: &IntervalSet) -> Vec<IntervalSet> {
        match self {
            LineLayout::Cube { fx, c, width, offset, m } => {
                (0..fx.len())
                    .map(|i| {
                        if c[i] == 0.0 || line.is_empty() {
                            return IntervalSet::empty();
                        }
                        let mut out = Vec::new();
                        for &(l1, l2) in line.intervals() {
                            let mut k = ((l1 - offset[i]) / m).floor() as i64 - 1;
                            let k_hi = ((l2 - offset[i]) / m).ceil() as i64 + 1;
                            while k <= k_hi {
                                let base = k as f64 * m + offset[i];
                                let a = l1.max(base);
                                let b = l2.min(base + width[i]);
                                if b > a + 1e-12 {
                                    let (r1, r2) = ((a - base) / width[i], (b - base) / width[i]);
                                    let t1 = fx[i] + c[i] * (k as f64 + r1);
                                    let t2 = fx[i] + c[i] * (k as f64 + r2);
                                    out.push((t1.min(t2), t1.max(t2)));
                                }
                                k += 1;
                            }
                        }
                        IntervalSet::from_intervals(out)
                    })
                    .collect()
            }
            LineLayout::Tree { rank, path, z, l, cellw, .. } => {
                let mut atoms = IntervalSet::empty();
                for &(l1, l2) in line.intervals() {
                    let j_lo = (l1 / cellw).floor() as i64 - 1;
                    let j_hi = (l2 / cellw).ceil() as i64 + 1;
                    for j in j_lo..=j_hi {
                        let a = l1.max(j as f64 * cellw);
                        let b = l2.min((j + 1) as f64 * cellw);
                        if b - a > cellw / 2.0 {
                            let far = Self::axis_far_word(path, z, *l, j);
                            atoms = atoms.union(&IntervalSet::atom(shortlex_index(&far, *rank) as f64));
                        }
                    }
                }
                vec![atoms]
            }
        }
    }
}

fn tree_rank(chart: &crate::space::WallFamilyChart) -> u32 {
    match chart.kind {
        ChartKind::TreeEdges { rank, .. } => rank,
        _ => panic!("not a tree chart"),
    }
}

// ---------- the assembled wallspace ----------

pub struct AmalgamWallspace {
    pub spec: GraphOfGroupsSpec,
    pub presentation: TreePresentation,
    pub model: GroupModel,
    /// Truncation depth of the Bass-Serre tree.
    pub radius: u32,
    /// Enumeration budget for transversal representatives.
    pub rep_radius: u32,
    vspaces: Vec<MeasuredWallspace>,
}

struct Crossing {
    edge: usize,
    rep: VertexElem,
    /// True when the first node of the pair is the parent side.
    down: bool,
}

impl AmalgamWallspace {
    pub fn assemble(spec: &GraphOfGroupsSpec, radius: u32, rep_radius: u32) -> Result<Self> {
        let presentation = spec.presentation()?;
        if spec.edges.iter().any(|e| e.ends.iter().any(|x| x.rho != 1.0)) {
            return Err(Error::ParseError(
                "assembly requires a monic spec; apply the monic rescale first".into(),
            ));
        }
        for e in &spec.edges {
            let (left, right) = (spec.end_mass(&e.ends[0]), spec.end_mass(&e.ends[1]));
            if (left - right).abs() > 1e-9 {
                return Err(Error::GluePeriodMismatch { edge: e.id.clone(), left, right });
            }
        }
        let vspaces = (0..spec.vertices.len()).map(|v| spec.vertex_wallspace(v)).collect();
        Ok(AmalgamWallspace {
            spec: spec.clone(),
            model: GroupModel::Amalgam(presentation.clone()),
            presentation,
            radius,
            rep_radius,
            vspaces,
        })
    }

    pub fn vertex_of(&self, node: &NodePath) -> usize {
        let mut v = 0;
        for s in &node.steps {
            v = self.presentation.edges[s.edge].other(v);
        }
        v
    }

    pub fn basepoint(&self) -> AmalgamPoint {
        AmalgamPoint { node: NodePath::root(), local: origin_of(&self.presentation.vertices[0]) }
    }

    fn end_at(&self, edge: usize, vertex: usize) -> &EndData {
        self.spec.edges[edge]
            .ends
            .iter()
            .find(|end| end.vertex == vertex)
            .expect("edge incident to vertex")
    }

    /// The group element carried by a node (any representative of its coset).
    pub fn node_word(&self, node: &NodePath) -> AmalgamWord {
        let p = &self.presentation;
        let mut v = 0;
        let mut w = AmalgamWord::identity();
        for s in &node.steps {
            w = w.mul(p, &AmalgamWord::vertex_element(p, v, s.rep.clone()));
            v = p.edges[s.edge].other(v);
        }
        w
    }

    /// Left action of the fundamental group on points.
    pub fn act(&self, g: &AmalgamWord, pt: &AmalgamPoint) -> AmalgamPoint {
        let p = &self.presentation;
        let target = self.vertex_of(&pt.node);
        let u = g.mul(p, &self.node_word(&pt.node));
        let (walk, h) = u.decompose_at(p, 0, target);
        let mut out = Vec::with_capacity(walk.len());
        for (i, (near, rep)) in walk.iter().enumerate() {
            let next = if i + 1 < walk.len() { walk[i + 1].0 } else { target };
            let edge = p.edge_between(*near, next).expect("walk crosses tree edges");
            out.push(Step { edge, rep: rep.clone() });
        }
        AmalgamPoint { node: NodePath { steps: out }, local: vertex_act(&h, &pt.local) }
    }

    fn check_depth(&self, pt: &AmalgamPoint) -> Result<()> {
        if pt.node.depth() > self.radius {
            return Err(Error::HostOutsideTruncation(pt.node.label()));
        }
        Ok(())
    }

    /// Node geodesic with crossing data between consecutive nodes.
    fn geodesic(&self, a: &NodePath, b: &NodePath) -> (Vec<NodePath>, Vec<Crossing>) {
        let common = a
            .steps
            .iter()
            .zip(&b.steps)
            .take_while(|(x, y)| x == y)
            .count();
        let mut nodes = Vec::new();
        let mut crossings = Vec::new();
        for d in (common..a.steps.len()).rev() {
            nodes.push(NodePath { steps: a.steps[..=d].to_vec() });
            crossings.push(Crossing {
                edge: a.steps[d].edge,
                rep: a.steps[d].rep.clone(),
                down: false,
            });
        }
        nodes.push(NodePath { steps: a.steps[..common].to_vec() });
        for d in common..b.steps.len() {
            crossings.push(Crossing {
                edge: b.steps[d].edge,
                rep: b.steps[d].rep.clone(),
                down: true,
            });
            nodes.push(NodePath { steps: b.steps[..=d].to_vec() });
        }
        (nodes, crossings)
    }

    /// Basepoint and line layout of a crossing as seen from one of its two
    /// nodes. The parent side translates by the transversal representative;
    /// on free vertices the translation conjugates the axis.
    fn crossing_frame(&self, cr: &Crossing, node_vertex: usize, is_parent: bool) -> (Point, LineLayout) {
        let end = self.end_at(cr.edge, node_vertex);
        let w = &self.vspaces[node_vertex];
        if !is_parent {
            let x = end.basepoint.clone();
            let lay = LineLayout::new(w, &x, &end.image);
            return (x, lay);
        }
        let x = vertex_act(&cr.rep, &end.basepoint);
        let z = match (&cr.rep, &end.image) {
            (VertexElem::Free(r), VertexElem::Free(z)) => {
                VertexElem::Free(r.mul(z).mul(&r.inverse()))
            }
            (_, z) => z.clone(),
        };
        let lay = LineLayout::new(w, &x, &z);
        (x, lay)
    }

    /// The wall pseudo-metric # on the assembled space.
    pub fn pseudometric(&self, a: &AmalgamPoint, b: &AmalgamPoint) -> Result<f64> {
        self.check_depth(a)?;
        self.check_depth(b)?;
        let (nodes, crossings) = self.geodesic(&a.node, &b.node);
        let vertical: f64 = crossings.iter().map(|c| (c.edge + 1) as f64).sum();
        let mut total = vertical;
        let mut line_pending = IntervalSet::empty();
        let mut sent_period = 0.0f64;
        for (i, node) in nodes.iter().enumerate() {
            let v = self.vertex_of(node);
            let w = &self.vspaces[v];
            let left = if i == 0 {
                a.local.clone()
            } else {
                let cr = &crossings[i - 1];
                self.crossing_frame(cr, v, !cr.down).0
            };
            let right = if i + 1 == nodes.len() {
                b.local.clone()
            } else {
                let cr = &crossings[i];
                self.crossing_frame(cr, v, cr.down).0
            };
            let mut sets: Vec<IntervalSet> =
                w.charts.iter().map(|c| c.separator_set(&left, &right)).collect();
            if i > 0 {
                let cr = &crossings[i - 1];
                let lay = self.crossing_frame(cr, v, !cr.down).1;
                debug_assert!((lay.period() - sent_period).abs() < 1e-9, "glue period drift");
                for (s, inc) in sets.iter_mut().zip(lay.from_line(&line_pending)) {
                    *s = s.symmetric_difference(&inc);
                }
            }
            if i + 1 < nodes.len() {
                let cr = &crossings[i];
                let lay = self.crossing_frame(cr, v, cr.down).1;
                sent_period = lay.period();
                let (residual, line) = lay.to_line(&sets);
                line_pending = line;
                sets = residual;
            }
            total += sets
                .iter()
                .zip(&w.charts)
                .map(|(s, c)| w.lambda * c.measure(s))
                .sum::<f64>();
        }
        Ok(total)
    }

    /// Canonical transversal representatives of the cosets of the edge group
    /// image within the enumeration budget, identity first.
    fn edge_coset_reps(&self, vertex: usize, edge: usize) -> Result<Vec<VertexElem>> {
        let model = self.spec.vertex_model(vertex);
        let z = &self.end_at(edge, vertex).image;
        let mut reps = BTreeSet::new();
        for g in model.ball(self.rep_radius)? {
            let e = match g {
                GroupElement::Abelian(c) => VertexElem::Abelian(c),
                GroupElement::Free(w) => VertexElem::Free(w),
                GroupElement::Amalgam(_) => unreachable!("vertex models are not amalgams"),
            };
            reps.insert(e.coset_decompose(z).0);
        }
        let mut out: Vec<VertexElem> = reps.into_iter().collect();
        out.sort_by_key(|r| !r.is_identity()); // identity first
        Ok(out)
    }

    /// Breadth-first truncation of the Bass-Serre tree: every node within
    /// `radius` crossings of the root whose transversal representatives fall
    /// inside the enumeration budget.
    pub fn bass_serre_truncation(&self) -> Result<Vec<TruncationNode>> {
        let mut out = vec![TruncationNode { path: NodePath::root(), vertex: 0, depth: 0 }];
        let mut queue = VecDeque::from([0usize]);
        while let Some(idx) = queue.pop_front() {
            let (path, vertex, depth) =
                (out[idx].path.clone(), out[idx].vertex, out[idx].depth);
            if depth == self.radius {
                continue;
            }
            let parent_edge = path.steps.last().map(|s| s.edge);
            for edge in self.presentation.edges_at(vertex) {
                for rep in self.edge_coset_reps(vertex, edge)? {
                    if Some(edge) == parent_edge && rep.is_identity() {
                        continue; // that's the parent
                    }
                    let mut steps = path.steps.clone();
                    steps.push(Step { edge, rep });
                    let child = TruncationNode {
                        path: NodePath { steps },
                        vertex: self.presentation.edges[edge].other(vertex),
                        depth: depth + 1,
                    };
                    out.push(child);
                    queue.push_back(out.len() - 1);
                }
            }
        }
        Ok(out)
    }

    /// Per word-length minimum displacement of the basepoint.
    pub fn properness_profile(&self, radius: u32) -> Result<Vec<ProfileRow>> {
        let x = self.basepoint();
        let mut rows: Vec<ProfileRow> = Vec::new();
        for (g, len) in self.model.ball_with_lengths(radius)? {
            let GroupElement::Amalgam(word) = &g else { unreachable!() };
            let gx = self.act(word, &x);
            let d = self.pseudometric(&x, &gx)?.max(0.0);
            match rows.iter_mut().find(|r| r.n == len) {
                Some(row) => {
                    if d < row.min_hash {
                        row.min_hash = d;
                        row.argmin_word = word_label(word);
                    }
                }
                None => rows.push(ProfileRow {
                    n: len,
                    min_hash: d,
                    argmin_word: word_label(word),
                }),
            }
        }
        rows.sort_by_key(|r| r.n);
        Ok(rows)
    }
}

#[derive(Clone, Debug)]
pub struct TruncationNode {
    pub path: NodePath,
    pub vertex: usize,
    pub depth: u32,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ProfileRow {
    pub n: u32,
    pub min_hash: f64,
    pub argmin_word: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_spec::parse_spec;

    fn z2_spec() -> GraphOfGroupsSpec {
        parse_spec(
            r#"{"graph": {
                "vertices": [
                    {"id": "u", "kind": "free_abelian", "rank": 2},
                    {"id": "v", "kind": "free_abelian", "rank": 2}
                ],
                "edges": [{"id": "e", "ends": [
                    {"vertex": "u", "generator_image": [1,0], "basepoint": [0,0], "rho": 1.0},
                    {"vertex": "v", "generator_image": [1,0], "basepoint": [0,0], "rho": 1.0}
                ]}]
            }}"#,
        )
        .unwrap()
    }

    fn aw(s: &AmalgamWallspace) -> (AmalgamPoint, AmalgamPoint) {
        // root basepoint and the adjacent node's basepoint
        let a = s.basepoint();
        let b = AmalgamPoint {
            node: NodePath {
                steps: vec![Step { edge: 0, rep: VertexElem::Abelian(vec![0, 0]) }],
            },
            local: Point::lattice([0, 0]),
        };
        (a, b)
    }

    #[test]
    fn adjacent_basepoints_distance_one() {
        let s = AmalgamWallspace::assemble(&z2_spec(), 4, 3).unwrap();
        let (a, b) = aw(&s);
        assert_eq!(s.pseudometric(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_cross_edge_distance() {
        // a = (0,2) on one side, b = (0,3) on the other: 2 + 1 + 3
        let s = AmalgamWallspace::assemble(&z2_spec(), 4, 3).unwrap();
        let (mut a, mut b) = aw(&s);
        a.local = Point::lattice([0, 2]);
        b.local = Point::lattice([0, 3]);
        assert_eq!(s.pseudometric(&a, &b).unwrap(), 6.0);
    }

    #[test]
    fn glued_family_crosses_edge() {
        // horizontal x-walls glue: (5,0) vs (2,0) across the edge is
        // |5-2| plus the vertical wall
        let s = AmalgamWallspace::assemble(&z2_spec(), 4, 3).unwrap();
        let (mut a, mut b) = aw(&s);
        a.local = Point::lattice([5, 0]);
        b.local = Point::lattice([2, 0]);
        assert_eq!(s.pseudometric(&a, &b).unwrap(), 4.0);
        let (mut a, mut b) = aw(&s);
        a.local = Point::lattice([5, 0]);
        b.local = Point::lattice([0, 0]);
        assert_eq!(s.pseudometric(&a, &b).unwrap(), 6.0);
    }

    #[test]
    fn within_vertex_is_l1() {
        let s = AmalgamWallspace::assemble(&z2_spec(), 4, 3).unwrap();
        let a = AmalgamPoint { node: NodePath::root(), local: Point::lattice([0, 2]) };
        let b = AmalgamPoint { node: NodePath::root(), local: Point::lattice([3, -1]) };
        assert_eq!(s.pseudometric(&a, &b).unwrap(), 6.0);
    }

    #[test]
    fn action_is_isometric() {
        let s = AmalgamWallspace::assemble(&z2_spec(), 8, 3).unwrap();
        let (mut a, mut b) = aw(&s);
        a.local = Point::lattice([1, -2]);
        b.local = Point::lattice([0, 3]);
        let d = s.pseudometric(&a, &b).unwrap();
        for g in s.model.ball(3).unwrap() {
            let GroupElement::Amalgam(w) = &g else { unreachable!() };
            let (ga, gb) = (s.act(w, &a), s.act(w, &b));
            let dg = s.pseudometric(&ga, &gb).unwrap();
            assert!((d - dg).abs() < 1e-9, "g = {} moves # from {d} to {dg}", word_label(w));
        }
    }

    #[test]
    fn single_vertical_wall_per_tree_edge() {
        let s = AmalgamWallspace::assemble(&z2_spec(), 2, 2).unwrap();
        for node in s.bass_serre_truncation().unwrap() {
            let Some(last) = node.path.steps.last() else { continue };
            let parent = NodePath { steps: node.path.steps[..node.path.steps.len() - 1].to_vec() };
            let pv = s.vertex_of(&parent);
            let a = AmalgamPoint {
                node: parent.clone(),
                local: vertex_act(&last.rep, &s.end_at(last.edge, pv).basepoint),
            };
            let b = AmalgamPoint {
                node: node.path.clone(),
                local: s.end_at(last.edge, node.vertex).basepoint.clone(),
            };
            assert_eq!(s.pseudometric(&a, &b).unwrap(), (last.edge + 1) as f64);
        }
    }

    #[test]
    fn truncation_node_count() {
        let s = AmalgamWallspace::assemble(&z2_spec(), 1, 2).unwrap();
        // cosets of <(1,0)> meeting the radius-2 ball: reps (0,y), |y| <= 2
        let nodes = s.bass_serre_truncation().unwrap();
        assert_eq!(nodes.len(), 1 + 5);
        assert!(nodes.iter().skip(1).all(|n| n.vertex == 1 && n.depth == 1));
    }

    #[test]
    fn depth_outside_truncation_errors() {
        let s = AmalgamWallspace::assemble(&z2_spec(), 0, 2).unwrap();
        let (a, b) = aw(&s);
        assert!(matches!(
            s.pseudometric(&a, &b),
            Err(Error::HostOutsideTruncation(_))
        ));
    }

    #[test]
    fn properness_profile_monotone() {
        let s = AmalgamWallspace::assemble(&z2_spec(), 8, 3).unwrap();
        let rows = s.properness_profile(4).unwrap();
        assert_eq!(rows.first().map(|r| (r.n, r.min_hash)), Some((0, 0.0)));
        for pair in rows.windows(2) {
            assert!(pair[0].min_hash <= pair[1].min_hash + 1e-9);
        }
        assert_eq!(rows[1].min_hash, 1.0);
    }

    #[test]
    fn non_monic_assembly_refused() {
        let mut s = z2_spec();
        s.edges[0].ends[1].rho = 2.0;
        assert!(AmalgamWallspace::assemble(&s, 2, 2).is_err());
    }
}
