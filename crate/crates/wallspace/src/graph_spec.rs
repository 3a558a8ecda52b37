//! Graphs of groups with measured wallspaces: JSON spec documents, semantic
//! validation of the gluing axioms, the modular homomorphism, and monic
//! rescaling.
//!
//! Scale conventions: the edge measure restricted to a fundamental domain is
//! rho_v^e times the vertex measure of its image, so validity of an edge
//! requires rho_a * mass_a = rho_b * mass_b where mass is the vertex-space
//! wall mass of omega(x, z x). Monic means every rho is 1, equivalently the
//! two end masses agree; that common mass is the gluing period.

use crate::cube::{standard_cubing, tree_wallspace};
use crate::dispersal::{coset_distance_table, dispersal_profile};
use crate::error::{Error, Result};
use crate::group::amalgam::{AmalgamEdge, TreePresentation, VertexElem, VertexKind};
use crate::group::free::FreeWord;
use crate::group::{GroupElement, GroupModel, SubgroupSpec};
use crate::space::{MeasuredWallspace, Point};
use serde::{Deserialize, Serialize};

// ---------- document schema ----------

#[derive(Debug, Deserialize)]
struct SpecDocument {
    graph: GraphSection,
    #[serde(default)]
    dispersal: Option<DispersalSection>,
}

#[derive(Debug, Deserialize)]
struct GraphSection {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Deserialize)]
struct VertexDoc {
    id: String,
    kind: String,
    rank: u32,
    #[serde(default)]
    extra_factors: Vec<serde_json::Value>,
}

#[derive(Debug, Deserialize)]
struct EdgeDoc {
    id: String,
    ends: Vec<EndDoc>,
}

#[derive(Debug, Deserialize)]
struct EndDoc {
    vertex: String,
    generator_image: Vec<i64>,
    basepoint: Vec<i64>,
    rho: f64,
}

#[derive(Debug, Deserialize)]
struct DispersalSection {
    vertex: String,
    subgroup: Vec<Vec<i64>>,
    #[serde(default)]
    grid: Vec<f64>,
}

// ---------- domain model ----------

#[derive(Clone, Debug)]
pub struct VertexData {
    pub id: String,
    pub kind: VertexKind,
    /// Measure rescale applied to this vertex's wallspace.
    pub lambda: f64,
}

#[derive(Clone, Debug)]
pub struct EndData {
    pub vertex: usize,
    pub image: VertexElem,
    pub basepoint: Point,
    pub rho: f64,
}

#[derive(Clone, Debug)]
pub struct EdgeData {
    pub id: String,
    pub ends: [EndData; 2],
}

#[derive(Clone, Debug)]
pub struct GraphOfGroupsSpec {
    pub vertices: Vec<VertexData>,
    pub edges: Vec<EdgeData>,
    /// Optional subgroup-of-a-vertex section for dispersal experiments.
    pub dispersal: Option<DispersalRequest>,
}

#[derive(Clone, Debug)]
pub struct DispersalRequest {
    pub vertex: usize,
    pub subgroup: Vec<Vec<i64>>,
    pub grid: Vec<f64>,
}

impl GraphOfGroupsSpec {
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn vertex_model(&self, v: usize) -> GroupModel {
        match self.vertices[v].kind {
            VertexKind::FreeAbelian { rank } => GroupModel::FreeAbelian { rank },
            VertexKind::Free { rank } => GroupModel::Free { rank },
        }
    }

    /// The vertex wallspace, including the vertex's lambda rescale.
    pub fn vertex_wallspace(&self, v: usize) -> MeasuredWallspace {
        let base = match self.vertices[v].kind {
            VertexKind::FreeAbelian { rank } => standard_cubing(rank),
            VertexKind::Free { rank } => tree_wallspace(rank),
        };
        base.scale(self.vertices[v].lambda).expect("lambda positive")
    }

    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if self.edges.len() + 1 != n {
            return false;
        }
        // connectivity by union-find
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.ends[0].vertex), find(&mut parent, e.ends[1].vertex));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// The underlying tree presentation for group arithmetic (tree specs
    /// only).
    pub fn presentation(&self) -> Result<TreePresentation> {
        if !self.is_tree() {
            return Err(Error::ParseError("underlying graph must be a tree for assembly".into()));
        }
        Ok(TreePresentation::new(
            self.vertices.iter().map(|v| v.kind.clone()).collect(),
            self.edges
                .iter()
                .map(|e| AmalgamEdge {
                    u: e.ends[0].vertex,
                    v: e.ends[1].vertex,
                    z_u: e.ends[0].image.clone(),
                    z_v: e.ends[1].image.clone(),
                })
                .collect(),
        ))
    }

    /// Wall mass of the edge fundamental domain omega(x, z x) at an end, in
    /// the (lambda-scaled) vertex wallspace.
    pub fn end_mass(&self, end: &EndData) -> f64 {
        let w = self.vertex_wallspace(end.vertex);
        let model = self.vertex_model(end.vertex);
        let g = elem_of(&end.image);
        let moved = crate::dispersal::act(&model, &g, &end.basepoint);
        w.pseudometric(&end.basepoint, &moved)
    }
}

fn elem_of(v: &VertexElem) -> GroupElement {
    match v {
        VertexElem::Abelian(c) => GroupElement::Abelian(c.clone()),
        VertexElem::Free(w) => GroupElement::Free(w.clone()),
    }
}

// ---------- parsing ----------

fn parse_vertex_elem(kind: &VertexKind, data: &[i64], what: &str) -> Result<VertexElem> {
    match kind {
        VertexKind::FreeAbelian { rank } => {
            if data.len() != *rank {
                return Err(Error::ParseError(format!(
                    "{what}: expected {rank} coordinates, got {}",
                    data.len()
                )));
            }
            Ok(VertexElem::Abelian(data.to_vec()))
        }
        VertexKind::Free { rank } => {
            if data.iter().any(|&x| x == 0 || x.unsigned_abs() > *rank as u64) {
                return Err(Error::ParseError(format!("{what}: invalid letter for rank {rank}")));
            }
            Ok(VertexElem::Free(FreeWord::new(data.iter().map(|&x| x as i32))))
        }
    }
}

fn parse_point(kind: &VertexKind, data: &[i64], what: &str) -> Result<Point> {
    match parse_vertex_elem(kind, data, what)? {
        VertexElem::Abelian(c) => Ok(Point::lattice(c)),
        VertexElem::Free(w) => Ok(Point::tree(w)),
    }
}

pub fn parse_spec(text: &str) -> Result<GraphOfGroupsSpec> {
    let doc: SpecDocument =
        serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    if doc.graph.vertices.is_empty() {
        return Err(Error::ParseError("graph has no vertices".into()));
    }
    let mut vertices = Vec::new();
    for v in &doc.graph.vertices {
        if vertices.iter().any(|w: &VertexData| w.id == v.id) {
            return Err(Error::ParseError(format!("duplicate vertex id {}", v.id)));
        }
        if v.rank == 0 {
            return Err(Error::ParseError(format!("vertex {}: rank must be positive", v.id)));
        }
        if !v.extra_factors.is_empty() {
            return Err(Error::ParseError(format!(
                "vertex {}: extra_factors are not supported",
                v.id
            )));
        }
        let kind = match v.kind.as_str() {
            "free_abelian" => VertexKind::FreeAbelian { rank: v.rank as usize },
            "free" => VertexKind::Free { rank: v.rank },
            other => {
                return Err(Error::ParseError(format!("vertex {}: unknown kind {other}", v.id)))
            }
        };
        vertices.push(VertexData { id: v.id.clone(), kind, lambda: 1.0 });
    }
    let spec_v = |id: &str| -> Result<usize> {
        vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::ParseError(format!("unknown vertex id {id}")))
    };
    let mut edges = Vec::new();
    for e in &doc.graph.edges {
        if e.ends.len() != 2 {
            return Err(Error::ParseError(format!("edge {}: needs exactly two ends", e.id)));
        }
        let mut ends = Vec::new();
        for end in &e.ends {
            let vi = spec_v(&end.vertex)?;
            let kind = &vertices[vi].kind;
            if end.rho <= 0.0 {
                return Err(Error::ParseError(format!("edge {}: rho must be positive", e.id)));
            }
            ends.push(EndData {
                vertex: vi,
                image: parse_vertex_elem(kind, &end.generator_image, &format!("edge {}", e.id))?,
                basepoint: parse_point(kind, &end.basepoint, &format!("edge {}", e.id))?,
                rho: end.rho,
            });
        }
        let ends: [EndData; 2] = [ends.remove(0), ends.remove(0)];
        if ends[0].vertex == ends[1].vertex {
            return Err(Error::ParseError(format!(
                "edge {}: graph must be simplicial (loop edge)",
                e.id
            )));
        }
        let pair = (ends[0].vertex.min(ends[1].vertex), ends[0].vertex.max(ends[1].vertex));
        if edges.iter().any(|prev: &EdgeData| {
            let pp = (
                prev.ends[0].vertex.min(prev.ends[1].vertex),
                prev.ends[0].vertex.max(prev.ends[1].vertex),
            );
            pp == pair
        }) {
            return Err(Error::ParseError(format!(
                "edge {}: graph must be simplicial (parallel edge)",
                e.id
            )));
        }
        edges.push(EdgeData { id: e.id.clone(), ends });
    }
    let dispersal = match &doc.dispersal {
        None => None,
        Some(d) => Some(DispersalRequest {
            vertex: spec_v(&d.vertex)?,
            subgroup: d.subgroup.clone(),
            grid: if d.grid.is_empty() {
                (0..=4).map(|k| k as f64).collect()
            } else {
                d.grid.clone()
            },
        }),
    };
    Ok(GraphOfGroupsSpec { vertices, edges, dispersal })
}

// ---------- validation ----------

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub code: String,
    pub edge: String,
    pub detail: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ValidationBudgets {
    pub rep_radius: u32,
    pub orbit_k: u32,
}

impl Default for ValidationBudgets {
    fn default() -> Self {
        ValidationBudgets { rep_radius: 3, orbit_k: 4 }
    }
}

/// Checks the gluing axioms edge by edge: infinite cyclic edge groups, the
/// fundamental-domain mass relation, zero skim mass against the edge orbit,
/// and a stable dispersal profile of the edge group in each vertex group.
pub fn validate(s: &GraphOfGroupsSpec, budgets: ValidationBudgets) -> ValidationReport {
    let mut checks = Vec::new();
    for e in &s.edges {
        // Condition: infinite cyclic edge group
        let cyc_ok = e.ends.iter().all(|end| !end.image.is_identity());
        checks.push(AxiomCheck {
            code: "E_EDGE_NOT_INFINITE_CYCLIC".into(),
            edge: e.id.clone(),
            detail: "generator images have infinite order".into(),
            pass: cyc_ok,
        });
        if !cyc_ok {
            continue;
        }
        // Condition: fundamental domains match across the edge
        let m0 = s.end_mass(&e.ends[0]);
        let m1 = s.end_mass(&e.ends[1]);
        let fundom_ok = m0 > 0.0
            && m1 > 0.0
            && (e.ends[0].rho * m0 - e.ends[1].rho * m1).abs() < 1e-9;
        checks.push(AxiomCheck {
            code: "E_FUNDOM".into(),
            edge: e.id.clone(),
            detail: format!(
                "rho-weighted fundamental masses {} vs {}",
                e.ends[0].rho * m0,
                e.ends[1].rho * m1
            ),
            pass: fundom_ok,
        });
        for end in &e.ends {
            // Condition: skim mass zero. Linear families never skim a
            // bi-infinite translation orbit; tree walls skim exactly when
            // the basepoint sits off the translation axis.
            let skim_ok = match (&s.vertices[end.vertex].kind, &end.image) {
                (VertexKind::FreeAbelian { .. }, _) => true,
                (VertexKind::Free { .. }, VertexElem::Free(z)) => {
                    let x = &end.basepoint.words[0];
                    let moved = z.mul(x);
                    x.distance(&moved) == z.translation_length()
                }
                _ => false,
            };
            checks.push(AxiomCheck {
                code: "E_SKIM_MASS".into(),
                edge: e.id.clone(),
                detail: format!(
                    "walls skimming the orbit at {} have zero mass",
                    s.vertices[end.vertex].id
                ),
                pass: skim_ok,
            });
            // Condition: edge group dispersed in the vertex group
            let model = s.vertex_model(end.vertex);
            let w = s.vertex_wallspace(end.vertex);
            let rep_radius = match s.vertices[end.vertex].kind {
                VertexKind::Free { .. } => budgets.rep_radius.min(2),
                _ => budgets.rep_radius,
            };
            let disp = SubgroupSpec::new(&model, vec![elem_of(&end.image)]).and_then(|h| {
                let t = coset_distance_table(
                    &w,
                    &model,
                    &h,
                    &end.basepoint,
                    rep_radius,
                    budgets.orbit_k,
                )?;
                t.ensure_stable()?;
                dispersal_profile(&t, &[0.0, 1.0, 2.0])?;
                Ok(())
            });
            checks.push(AxiomCheck {
                code: "E_DISPERSAL_UNSTABLE".into(),
                edge: e.id.clone(),
                detail: format!(
                    "edge group dispersal at {} stable under enlarged budgets",
                    s.vertices[end.vertex].id
                ),
                pass: disp.is_ok(),
            });
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    ValidationReport { checks, pass }
}

// ---------- modular homomorphism ----------

#[derive(Clone, Debug, Serialize)]
pub struct ModularData {
    /// w(e) = rho_plus / rho_minus per edge, in spec order.
    pub weights: Vec<f64>,
    /// Independent cycle products (one per non-spanning-tree edge).
    pub cycles: Vec<CycleProduct>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleProduct {
    pub edges: Vec<String>,
    pub product: f64,
}

impl ModularData {
    /// Product of w(e)^{+-1} along a closed combinatorial path given as
    /// oriented edge indices (true = forward, ends[0] -> ends[1]).
    pub fn cycle_product(&self, path: &[(usize, bool)]) -> f64 {
        path.iter()
            .map(|&(e, fwd)| if fwd { self.weights[e] } else { 1.0 / self.weights[e] })
            .product()
    }

    pub fn image_trivial(&self) -> bool {
        self.cycles.iter().all(|c| (c.product - 1.0).abs() < 1e-9)
    }
}

fn spanning_tree(s: &GraphOfGroupsSpec, base: usize) -> (Vec<Option<(usize, bool)>>, Vec<usize>) {
    // parent edge per vertex (edge index, direction into vertex) and the
    // leftover non-tree edges
    let n = s.vertices.len();
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[base] = true;
    let mut queue = std::collections::VecDeque::from([base]);
    let mut used = vec![false; s.edges.len()];
    while let Some(v) = queue.pop_front() {
        for (i, e) in s.edges.iter().enumerate() {
            for (from, to, fwd) in [
                (e.ends[0].vertex, e.ends[1].vertex, true),
                (e.ends[1].vertex, e.ends[0].vertex, false),
            ] {
                if from == v && !seen[to] {
                    seen[to] = true;
                    parent[to] = Some((i, fwd));
                    used[i] = true;
                    queue.push_back(to);
                }
            }
        }
    }
    let extra = (0..s.edges.len()).filter(|&i| !used[i]).collect();
    (parent, extra)
}

pub fn modular_weights(s: &GraphOfGroupsSpec) -> ModularData {
    let weights: Vec<f64> = s.edges.iter().map(|e| e.ends[1].rho / e.ends[0].rho).collect();
    // lambda propagation along a spanning tree gives cycle products for the
    // non-tree edges
    let (parent, extra) = spanning_tree(s, 0);
    let mut lambda = vec![1.0f64; s.vertices.len()];
    let mut order: Vec<usize> = (0..s.vertices.len()).collect();
    order.sort_by_key(|&v| depth_of(&parent, s, v));
    for &v in &order {
        if let Some((e, fwd)) = parent[v] {
            let (near, far) = if fwd { (0, 1) } else { (1, 0) };
            let u = s.edges[e].ends[near].vertex;
            lambda[v] = lambda[u] * s.edges[e].ends[far].rho / s.edges[e].ends[near].rho;
        }
    }
    let cycles = extra
        .into_iter()
        .map(|i| {
            let e = &s.edges[i];
            // cycle: tree path from ends[0] to ends[1], then e backwards;
            // its product is (lambda ratio) / w(e)
            let product =
                lambda[e.ends[1].vertex] / lambda[e.ends[0].vertex] / (e.ends[1].rho / e.ends[0].rho);
            CycleProduct { edges: vec![e.id.clone()], product }
        })
        .collect();
    ModularData { weights, cycles }
}

fn depth_of(
    parent: &[Option<(usize, bool)>],
    s: &GraphOfGroupsSpec,
    mut v: usize,
) -> usize {
    let mut d = 0;
    while let Some((e, fwd)) = parent[v] {
        let near = if fwd { 0 } else { 1 };
        v = s.edges[e].ends[near].vertex;
        d += 1;
        if d > s.vertices.len() {
            break;
        }
    }
    d
}

/// Rescales vertex measures along a spanning tree so every rho becomes 1.
/// Fails with the offending cycle when the modular image is nontrivial.
pub fn monic_rescale(s: &GraphOfGroupsSpec, base: usize) -> Result<GraphOfGroupsSpec> {
    let data = modular_weights(s);
    if let Some(bad) = data.cycles.iter().find(|c| (c.product - 1.0).abs() >= 1e-9) {
        return Err(Error::NontrivialModular {
            cycle: bad.edges.clone(),
            product: bad.product,
        });
    }
    let (parent, _) = spanning_tree(s, base);
    let mut out = s.clone();
    let mut order: Vec<usize> = (0..s.vertices.len()).collect();
    order.sort_by_key(|&v| depth_of(&parent, s, v));
    let mut lambda = vec![1.0f64; s.vertices.len()];
    for &v in &order {
        if let Some((e, fwd)) = parent[v] {
            let (near, far) = if fwd { (0, 1) } else { (1, 0) };
            let u = s.edges[e].ends[near].vertex;
            lambda[v] = lambda[u] * s.edges[e].ends[far].rho / s.edges[e].ends[near].rho;
        }
    }
    for (v, l) in lambda.iter().enumerate() {
        out.vertices[v].lambda *= l;
    }
    for e in &mut out.edges {
        e.ends[0].rho = 1.0;
        e.ends[1].rho = 1.0;
    }
    Ok(out)
}
