//! The reduced power graph on a [`VertexTable`], in compressed sparse row
//! form, with component labelling, exact component diameters and the
//! census that aggregates them.
//!
//! Diameters are computed with one BFS per conjugacy class present in a
//! component: conjugation by any `g` in `GL_3` maps powers of `A` to powers
//! of `gAg^-1`, so it is a graph automorphism and eccentricity is constant on
//! classes.
//!
//! Cache file layout (little endian):
//!
//! ```text
//! offset        size     field
//! 0             4        magic "RPGG"
//! 4             4        q (u32)
//! 8             4        graph kind (u32; 0 = pgl, 1 = gl)
//! 12            8        V (u64)
//! 20            8        E (u64, undirected edges)
//! 28            8*(V+1)  row offsets
//! 36+8V         4*2E     neighbour ids, sorted per row
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::mat::{JordanType, Mat3};
use crate::pgl::{read_header, GraphKind, GroupSpec, VertexTable};

pub const GRAPH_MAGIC: &[u8; 4] = b"RPGG";

/// Largest vertex set that DOT export will write.
pub const DOT_EXPORT_CAP: usize = 10_000;

pub type VertexId = u32;

pub struct PowerGraph {
    spec: GroupSpec,
    vertices: VertexTable,
    offsets: Vec<u64>,
    neighbors: Vec<u32>,
}

impl PowerGraph {
    pub fn build(spec: &GroupSpec) -> PowerGraph {
        let table = VertexTable::enumerate(spec);
        PowerGraph::build_on(spec, table)
    }

    pub fn build_on(spec: &GroupSpec, vertices: VertexTable) -> PowerGraph {
        let n = vertices.len();
        let f = &spec.field;
        let targets = |v: u32| power_targets(&vertices, f, v);

        let degree: Vec<AtomicU32> = (0..n).map(|_| AtomicU32::new(0)).collect();
        (0..n as u32).into_par_iter().for_each(|v| {
            for w in targets(v) {
                degree[v as usize].fetch_add(1, Ordering::Relaxed);
                degree[w as usize].fetch_add(1, Ordering::Relaxed);
            }
        });
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0u64;
        offsets.push(0);
        for d in &degree {
            acc += d.load(Ordering::Relaxed) as u64;
            offsets.push(acc);
        }
        drop(degree);

        let cursor: Vec<AtomicU64> = offsets[..n].iter().map(|&o| AtomicU64::new(o)).collect();
        let slots: Vec<AtomicU32> = (0..acc).map(|_| AtomicU32::new(0)).collect();
        (0..n as u32).into_par_iter().for_each(|v| {
            for w in targets(v) {
                let s = cursor[v as usize].fetch_add(1, Ordering::Relaxed);
                slots[s as usize].store(w, Ordering::Relaxed);
                let s = cursor[w as usize].fetch_add(1, Ordering::Relaxed);
                slots[s as usize].store(v, Ordering::Relaxed);
            }
        });
        drop(cursor);
        let mut raw: Vec<u32> = slots.into_iter().map(AtomicU32::into_inner).collect();

        // Sort each row and drop duplicates (a pair of mutual generators is
        // emitted from both ends).
        let mut rows: Vec<&mut [u32]> = Vec::with_capacity(n);
        let mut rest: &mut [u32] = &mut raw;
        for v in 0..n {
            let len = (offsets[v + 1] - offsets[v]) as usize;
            let (head, tail) = rest.split_at_mut(len);
            rows.push(head);
            rest = tail;
        }
        let kept: Vec<usize> = rows
            .par_iter_mut()
            .map(|row| {
                row.sort_unstable();
                let mut k = 0;
                for i in 0..row.len() {
                    if i == 0 || row[i] != row[k - 1] {
                        row[k] = row[i];
                        k += 1;
                    }
                }
                k
            })
            .collect();
        drop(rows);

        let mut neighbors = Vec::with_capacity(kept.iter().sum());
        let mut new_offsets = Vec::with_capacity(n + 1);
        new_offsets.push(0u64);
        for v in 0..n {
            let start = offsets[v] as usize;
            neighbors.extend_from_slice(&raw[start..start + kept[v]]);
            new_offsets.push(neighbors.len() as u64);
        }
        PowerGraph {
            spec: spec.clone(),
            vertices,
            offsets: new_offsets,
            neighbors,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn field(&self) -> &Field {
        &self.spec.field
    }

    pub fn kind(&self) -> GraphKind {
        self.spec.kind
    }

    pub fn vertices(&self) -> &VertexTable {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> u64 {
        self.neighbors.len() as u64 / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[u32] {
        &self.neighbors[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// Number of directed arcs, `2E`.
    pub fn arc_count(&self) -> u64 {
        self.neighbors.len() as u64
    }

    /// The `i`-th directed arc in row order.
    pub fn arc(&self, i: u64) -> (VertexId, VertexId) {
        let u = self.offsets.partition_point(|&o| o <= i) - 1;
        (u as u32, self.neighbors[i as usize])
    }

    pub fn are_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn matrix(&self, v: VertexId) -> Mat3 {
        self.vertices.matrix(v)
    }

    pub fn id_of(&self, m: &Mat3) -> Option<VertexId> {
        self.vertices.id_of(m, self.field())
    }

    pub fn jordan_type(&self, v: VertexId) -> JordanType {
        self.matrix(v).jordan_type(self.field()).expect("vertices are invertible")
    }

    /// Vertices that are powers of `v`, excluding `v` itself.
    pub fn power_targets(&self, v: VertexId) -> Vec<VertexId> {
        power_targets(&self.vertices, self.field(), v)
    }

    /// Jordan type of every vertex.
    pub fn jordan_types(&self) -> Vec<JordanType> {
        let f = self.field();
        (0..self.vertex_count() as u32)
            .into_par_iter()
            .map(|v| self.vertices.matrix(v).jordan_type(f).expect("vertices are invertible"))
            .collect()
    }

    /// Conjugacy-class key per vertex: scalar-minimised signature on the
    /// PGL graph, plain (char, min) pair on the GL graph.
    pub fn class_keys(&self) -> Vec<u32> {
        let f = self.field();
        let kind = self.kind();
        (0..self.vertex_count() as u32)
            .into_par_iter()
            .map(|v| {
                let m = self.vertices.matrix(v);
                match kind {
                    GraphKind::Pgl => m.class_signature(f).key(),
                    GraphKind::Gl => m.gl_class_signature(f).key(),
                }
            })
            .collect()
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Option<u32> {
        Bfs::new(self.vertex_count()).distance(self, u, v)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(GRAPH_MAGIC)?;
        w.write_all(&self.spec.q().to_le_bytes())?;
        w.write_all(&self.kind().tag().to_le_bytes())?;
        w.write_all(&(self.vertex_count() as u64).to_le_bytes())?;
        w.write_all(&self.edge_count().to_le_bytes())?;
        let mut buf = Vec::with_capacity(8 * self.offsets.len() + 4 * self.neighbors.len());
        for o in &self.offsets {
            buf.extend_from_slice(&o.to_le_bytes());
        }
        for x in &self.neighbors {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    /// Loads a graph cache written for the same `q`, kind and vertex table.
    pub fn read_from<R: Read>(mut r: R, spec: &GroupSpec, vertices: VertexTable) -> Result<PowerGraph> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let header = read_header(&bytes, GRAPH_MAGIC, 28)?;
        if header.q != spec.q() || header.kind != spec.kind {
            return Err(Error::CorruptCache(format!(
                "graph cache is for q = {} {}, expected q = {} {}",
                header.q,
                header.kind,
                spec.q(),
                spec.kind
            )));
        }
        if vertices.q() != spec.q() || vertices.kind() != spec.kind {
            return Err(Error::CorruptCache("vertex table does not match the graph".into()));
        }
        let v = u64::from_le_bytes(bytes[12..20].try_into().unwrap());
        let e = u64::from_le_bytes(bytes[20..28].try_into().unwrap());
        if v != vertices.len() as u64 {
            return Err(Error::CorruptCache(format!(
                "graph cache has {v} vertices, vertex table has {}",
                vertices.len()
            )));
        }
        let expected = 28 + 8 * (v + 1) + 8 * e;
        if bytes.len() as u64 != expected {
            return Err(Error::CorruptCache(format!(
                "graph file has {} bytes, header implies {expected}",
                bytes.len()
            )));
        }
        let off_end = 28 + 8 * (v as usize + 1);
        let offsets: Vec<u64> = bytes[28..off_end]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let neighbors: Vec<u32> = bytes[off_end..]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if offsets[0] != 0
            || offsets.windows(2).any(|w| w[0] > w[1])
            || *offsets.last().unwrap() != neighbors.len() as u64
            || neighbors.iter().any(|&x| x as u64 >= v)
        {
            return Err(Error::CorruptCache("inconsistent adjacency arrays".into()));
        }
        Ok(PowerGraph {
            spec: spec.clone(),
            vertices,
            offsets,
            neighbors,
        })
    }

    /// DOT text for the subgraph induced on `subset` (sorted ids).
    pub fn to_dot(&self, subset: &[VertexId]) -> Result<String> {
        if subset.len() > DOT_EXPORT_CAP {
            return Err(Error::ExportCap {
                vertices: subset.len(),
                cap: DOT_EXPORT_CAP,
            });
        }
        let mut ids = subset.to_vec();
        ids.sort_unstable();
        let mut out = String::new();
        writeln!(out, "graph rpg_q{}_{} {{", self.spec.q(), self.kind()).unwrap();
        for &v in &ids {
            writeln!(
                out,
                "  {v} [label=\"{:09x} {}\"];",
                self.vertices.code(v),
                self.jordan_type(v)
            )
            .unwrap();
        }
        for &u in &ids {
            for &w in self.neighbors(u) {
                if u < w && ids.binary_search(&w).is_ok() {
                    writeln!(out, "  {u} -- {w};").unwrap();
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }

    /// CSV edge list of the subgraph induced on `subset`.
    pub fn to_csv(&self, subset: &[VertexId]) -> String {
        let mut ids = subset.to_vec();
        ids.sort_unstable();
        let mut out = String::from("source,target,source_code,target_code\n");
        for &u in &ids {
            for &w in self.neighbors(u) {
                if u < w && ids.binary_search(&w).is_ok() {
                    writeln!(out, "{u},{w},{:09x},{:09x}", self.vertices.code(u), self.vertices.code(w)).unwrap();
                }
            }
        }
        out
    }
}

fn power_targets(table: &VertexTable, f: &Field, v: u32) -> Vec<u32> {
    let a = table.matrix(v);
    let mut out = Vec::new();
    let mut p = a.mul(&a, f);
    match table.kind() {
        GraphKind::Pgl => {
            while !p.is_scalar() {
                out.push(table.id_of(&p, f).expect("nonscalar power is a vertex"));
                p = p.mul(&a, f);
            }
        }
        GraphKind::Gl => {
            while p != Mat3::identity() && p != a {
                if !p.is_scalar() {
                    out.push(table.id_of_rep(&p).expect("nonscalar power is a vertex"));
                }
                p = p.mul(&a, f);
            }
        }
    }
    out
}

/// Reusable breadth-first search state.
pub struct Bfs {
    dist: Vec<u32>,
    queue: Vec<u32>,
}

pub const UNREACHED: u32 = u32::MAX;

impl Bfs {
    pub fn new(n: usize) -> Bfs {
        Bfs {
            dist: vec![UNREACHED; n],
            queue: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.queue {
            self.dist[v as usize] = UNREACHED;
        }
        self.queue.clear();
    }

    /// Runs from all `sources` at once; the visited vertices stay readable
    /// through [`Bfs::dist`] and [`Bfs::visited`] until the next run.
    pub fn run_multi(&mut self, g: &PowerGraph, sources: &[VertexId], stop_at: Option<VertexId>) -> u32 {
        self.reset();
        for &s in sources {
            if self.dist[s as usize] == UNREACHED {
                self.dist[s as usize] = 0;
                self.queue.push(s);
            }
        }
        let mut head = 0;
        let mut ecc = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let du = self.dist[u as usize];
            ecc = du;
            if Some(u) == stop_at {
                break;
            }
            for &w in g.neighbors(u) {
                if self.dist[w as usize] == UNREACHED {
                    self.dist[w as usize] = du + 1;
                    self.queue.push(w);
                }
            }
        }
        ecc
    }

    /// Eccentricity of `src` within its component.
    pub fn eccentricity(&mut self, g: &PowerGraph, src: VertexId) -> u32 {
        self.run_multi(g, &[src], None)
    }

    pub fn distance(&mut self, g: &PowerGraph, u: VertexId, v: VertexId) -> Option<u32> {
        self.run_multi(g, &[u], Some(v));
        let d = self.dist[v as usize];
        (d != UNREACHED).then_some(d)
    }

    pub fn dist(&self, v: VertexId) -> Option<u32> {
        let d = self.dist[v as usize];
        (d != UNREACHED).then_some(d)
    }

    pub fn visited(&self) -> &[u32] {
        &self.queue
    }
}

/// Disjoint-set forest with path halving and union by size.
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// Connected components with ids assigned in order of least vertex id.
#[derive(Clone, Debug)]
pub struct ComponentLabeling {
    pub label: Vec<u32>,
    pub sizes: Vec<u32>,
    member_offsets: Vec<u32>,
    members: Vec<u32>,
    /// Per component, vertex count of each Jordan type (indexed by
    /// [`JordanType::index`]).
    pub type_profile: Vec<[u32; 8]>,
    /// The component containing Pivot-type vertices, if any.
    pub pivot_component: Option<u32>,
}

impl ComponentLabeling {
    pub fn compute(g: &PowerGraph) -> ComponentLabeling {
        let types = g.jordan_types();
        ComponentLabeling::with_types(g, &types)
    }

    pub fn with_types(g: &PowerGraph, types: &[JordanType]) -> ComponentLabeling {
        let n = g.vertex_count();
        let mut uf = UnionFind::new(n);
        for u in 0..n as u32 {
            for &w in g.neighbors(u) {
                if u < w {
                    uf.union(u, w);
                }
            }
        }
        let mut root_label: HashMap<u32, u32> = HashMap::new();
        let mut label = vec![0u32; n];
        let mut sizes: Vec<u32> = Vec::new();
        for v in 0..n as u32 {
            let r = uf.find(v);
            let next = root_label.len() as u32;
            let l = *root_label.entry(r).or_insert(next);
            if l as usize == sizes.len() {
                sizes.push(0);
            }
            sizes[l as usize] += 1;
            label[v as usize] = l;
        }
        let mut member_offsets = vec![0u32; sizes.len() + 1];
        for (i, s) in sizes.iter().enumerate() {
            member_offsets[i + 1] = member_offsets[i] + s;
        }
        let mut fill = member_offsets.clone();
        let mut members = vec![0u32; n];
        let mut type_profile = vec![[0u32; 8]; sizes.len()];
        for v in 0..n {
            let l = label[v] as usize;
            members[fill[l] as usize] = v as u32;
            fill[l] += 1;
            type_profile[l][types[v].index()] += 1;
        }
        let pivot_component = type_profile
            .iter()
            .position(|p| p[JordanType::Pivot.index()] > 0)
            .map(|c| c as u32);
        ComponentLabeling {
            label,
            sizes,
            member_offsets,
            members,
            type_profile,
            pivot_component,
        }
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Vertices of a component in ascending id order.
    pub fn members(&self, comp: u32) -> &[u32] {
        &self.members[self.member_offsets[comp as usize] as usize..self.member_offsets[comp as usize + 1] as usize]
    }

    /// Number of components that contain a Pivot-type vertex.
    pub fn pivot_component_count(&self) -> usize {
        self.type_profile
            .iter()
            .filter(|p| p[JordanType::Pivot.index()] > 0)
            .count()
    }

    pub fn types_present(&self, comp: u32) -> Vec<JordanType> {
        JordanType::ALL
            .into_iter()
            .filter(|t| self.type_profile[comp as usize][t.index()] > 0)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiameterMode {
    /// One BFS per conjugacy class present in the component.
    OrbitReduced,
    /// One BFS per vertex.
    Full,
}

/// BFS sources per component: every vertex in full mode, otherwise the
/// least vertex of each class present.
fn bfs_sources(lab: &ComponentLabeling, keys: Option<&[u32]>, comp: u32) -> Vec<u32> {
    match keys {
        None => lab.members(comp).to_vec(),
        Some(keys) => {
            let mut seen: BTreeMap<u32, u32> = BTreeMap::new();
            for &v in lab.members(comp) {
                seen.entry(keys[v as usize]).or_insert(v);
            }
            seen.into_values().collect()
        }
    }
}

/// Exact diameter of one component.
pub fn component_diameter(g: &PowerGraph, lab: &ComponentLabeling, comp: u32, mode: DiameterMode) -> u32 {
    let keys = match mode {
        DiameterMode::OrbitReduced => Some(component_keys(g, lab, comp)),
        DiameterMode::Full => None,
    };
    let sources = match &keys {
        Some(k) => {
            let mut seen: BTreeMap<u32, u32> = BTreeMap::new();
            for (&v, &key) in lab.members(comp).iter().zip(k) {
                seen.entry(key).or_insert(v);
            }
            seen.into_values().collect()
        }
        None => lab.members(comp).to_vec(),
    };
    sources
        .par_iter()
        .map_init(|| Bfs::new(g.vertex_count()), |bfs, &s| bfs.eccentricity(g, s))
        .max()
        .unwrap_or(0)
}

fn component_keys(g: &PowerGraph, lab: &ComponentLabeling, comp: u32) -> Vec<u32> {
    let f = g.field();
    lab.members(comp)
        .iter()
        .map(|&v| {
            let m = g.matrix(v);
            match g.kind() {
                GraphKind::Pgl => m.class_signature(f).key(),
                GraphKind::Gl => m.gl_class_signature(f).key(),
            }
        })
        .collect()
}

/// Diameters of all components.
pub fn all_diameters(g: &PowerGraph, lab: &ComponentLabeling, mode: DiameterMode) -> Vec<u32> {
    let keys = match mode {
        DiameterMode::OrbitReduced => Some(g.class_keys()),
        DiameterMode::Full => None,
    };
    let jobs: Vec<(u32, u32)> = (0..lab.count() as u32)
        .flat_map(|c| {
            let sources = if lab.sizes[c as usize] == 1 {
                Vec::new()
            } else {
                bfs_sources(lab, keys.as_deref(), c)
            };
            sources.into_iter().map(move |s| (c, s))
        })
        .collect();
    let eccs: Vec<(u32, u32)> = jobs
        .par_iter()
        .map_init(|| Bfs::new(g.vertex_count()), |bfs, &(c, s)| (c, bfs.eccentricity(g, s)))
        .collect();
    let mut diam = vec![0u32; lab.count()];
    for (c, e) in eccs {
        diam[c as usize] = diam[c as usize].max(e);
    }
    diam
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub diameter: u32,
    pub size: u64,
    pub count: u64,
    pub types: Vec<JordanType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub id: u32,
    pub size: u64,
    pub diameter: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub q: u32,
    pub graph: GraphKind,
    pub vertices: u64,
    pub edges: u64,
    pub components: u64,
    pub records: Vec<CensusRecord>,
    pub pivot_component: Option<ComponentSummary>,
    /// Vertex count per Jordan type, zero counts omitted.
    pub type_totals: BTreeMap<JordanType, u64>,
}

impl Census {
    pub fn compute(g: &PowerGraph, lab: &ComponentLabeling, diameters: &[u32]) -> Census {
        let mut groups: BTreeMap<(u32, u64, Vec<JordanType>), u64> = BTreeMap::new();
        for c in 0..lab.count() as u32 {
            let key = (diameters[c as usize], lab.sizes[c as usize] as u64, lab.types_present(c));
            *groups.entry(key).or_default() += 1;
        }
        let mut records: Vec<CensusRecord> = groups
            .into_iter()
            .map(|((diameter, size, types), count)| CensusRecord {
                diameter,
                size,
                count,
                types,
            })
            .collect();
        records.sort_by(|a, b| {
            b.size
                .cmp(&a.size)
                .then(a.diameter.cmp(&b.diameter))
                .then(a.types.cmp(&b.types))
        });
        let mut type_totals = BTreeMap::new();
        for profile in &lab.type_profile {
            for t in JordanType::ALL {
                if profile[t.index()] > 0 {
                    *type_totals.entry(t).or_default() += profile[t.index()] as u64;
                }
            }
        }
        Census {
            q: g.spec().q(),
            graph: g.kind(),
            vertices: g.vertex_count() as u64,
            edges: g.edge_count(),
            components: lab.count() as u64,
            records,
            pivot_component: lab.pivot_component.map(|c| ComponentSummary {
                id: c,
                size: lab.sizes[c as usize] as u64,
                diameter: diameters[c as usize],
            }),
            type_totals,
        }
    }

    pub fn vertex_total(&self) -> u64 {
        self.records.iter().map(|r| r.size * r.count).sum()
    }
}

/// Graph, labelling, diameters and census in one bundle.
pub struct Analysis {
    pub graph: PowerGraph,
    pub types: Vec<JordanType>,
    pub labeling: ComponentLabeling,
    pub diameters: Vec<u32>,
    pub census: Census,
}

impl Analysis {
    pub fn run(graph: PowerGraph, mode: DiameterMode) -> Analysis {
        let types = graph.jordan_types();
        let labeling = ComponentLabeling::with_types(&graph, &types);
        let diameters = all_diameters(&graph, &labeling, mode);
        let census = Census::compute(&graph, &labeling, &diameters);
        Analysis {
            graph,
            types,
            labeling,
            diameters,
            census,
        }
    }

    pub fn build(q: u32, kind: GraphKind) -> Result<Analysis> {
        let spec = GroupSpec::new(q, kind)?;
        Ok(Analysis::run(PowerGraph::build(&spec), DiameterMode::OrbitReduced))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub q: u32,
    pub gl_edges_checked: u64,
    pub homomorphism_violations: u64,
    pub pairs_checked: u64,
    pub distance_violations: u64,
}

impl QuotientReport {
    pub fn holds(&self) -> bool {
        self.homomorphism_violations == 0 && self.distance_violations == 0
    }
}

/// Checks that the scalar-class map from the GL graph to the PGL graph is a
/// graph homomorphism (edges map to edges or collapse), and that PGL
/// distances never exceed GL distances from `sources` random GL vertices.
pub fn quotient_check(gl: &PowerGraph, pgl: &PowerGraph, sources: usize, seed: u64) -> Result<QuotientReport> {
    if gl.kind() != GraphKind::Gl || pgl.kind() != GraphKind::Pgl || gl.spec().q() != pgl.spec().q() {
        return Err(Error::Precondition("quotient_check needs the GL and PGL graphs for one q".into()));
    }
    let image: Vec<Option<u32>> = (0..gl.vertex_count() as u32)
        .into_par_iter()
        .map(|v| pgl.id_of(&gl.matrix(v)))
        .collect();
    let mut edges = 0u64;
    let mut violations = 0u64;
    for u in 0..gl.vertex_count() as u32 {
        for &w in gl.neighbors(u) {
            if u < w {
                edges += 1;
                match (image[u as usize], image[w as usize]) {
                    (Some(a), Some(b)) if a == b || pgl.are_adjacent(a, b) => {}
                    _ => violations += 1,
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gl_bfs = Bfs::new(gl.vertex_count());
    let mut pgl_bfs = Bfs::new(pgl.vertex_count());
    let mut pairs = 0u64;
    let mut dist_violations = 0u64;
    for _ in 0..sources {
        let s = rng.gen_range(0..gl.vertex_count() as u32);
        let ps = image[s as usize].expect("nonscalar GL element maps to a PGL vertex");
        gl_bfs.eccentricity(gl, s);
        pgl_bfs.eccentricity(pgl, ps);
        for &t in gl_bfs.visited() {
            pairs += 1;
            let dg = gl_bfs.dist(t).expect("visited");
            let pt = image[t as usize].expect("nonscalar GL element maps to a PGL vertex");
            match pgl_bfs.dist(pt) {
                Some(dp) if dp <= dg => {}
                _ => dist_violations += 1,
            }
        }
    }
    Ok(QuotientReport {
        q: gl.spec().q(),
        gl_edges_checked: edges,
        homomorphism_violations: violations,
        pairs_checked: pairs,
        distance_violations: dist_violations,
    })
}

/// Set of Jordan types present among `vertices`.
pub fn type_set(types: &[JordanType], vertices: &[VertexId]) -> BTreeSet<JordanType> {
    vertices.iter().map(|&v| types[v as usize]).collect()
}
