//! Structural checks on built graphs: obstruction components, membership of
//! the pivot component, the allowed type transitions, the subspace
//! coincidences forced along edges, conjugation invariance, and the
//! distance bounds used by the diameter arguments.
//!
//! Every check returns a [`CheckOutcome`]; a check passes when it found no
//! violations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gf::{classify_prime_power, factorize, is_prime, Field, FieldElem};
use crate::graph::{Analysis, Bfs, PowerGraph, VertexId};
use crate::mat::{JordanType, Mat3, Subspace};
use crate::pgl::GraphKind;
use crate::witness::{centralizer_factorization, diagonal_conjugate_pair, pivot_spaces, power_witness};

/// Examples kept per failing check.
const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    pub examples: Vec<String>,
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>) -> CheckOutcome {
        CheckOutcome {
            name: name.into(),
            checked: 0,
            violations: 0,
            examples: Vec::new(),
            detail: String::new(),
        }
    }

    pub fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(example());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn with_detail(mut self, detail: impl Into<String>) -> CheckOutcome {
        self.detail = detail.into();
        self
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{}: {} ({} checked, {} violations)", self.name, verdict, self.checked, self.violations)?;
        if !self.detail.is_empty() {
            write!(f, "; {}", self.detail)?;
        }
        for e in &self.examples {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

fn pgl_only(an: &Analysis) -> Result<()> {
    if an.graph.kind() != GraphKind::Pgl {
        return Err(Error::Precondition("check runs on the PGL graph".into()));
    }
    Ok(())
}

fn is_power_of(n: u64, p: u64) -> bool {
    let mut n = n;
    while n > 1 && n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Components containing a vertex of type `ty` must consist of that type
/// only, have `size` vertices and diameter in `diameters`.
fn component_shape(an: &Analysis, name: &str, ty: JordanType, size: u64, diameters: &[u32]) -> CheckOutcome {
    let lab = &an.labeling;
    let mut out = CheckOutcome::new(name);
    for comp in 0..lab.count() as u32 {
        let profile = &lab.type_profile[comp as usize];
        if profile[ty.index()] == 0 {
            continue;
        }
        let actual = lab.sizes[comp as usize] as u64;
        let d = an.diameters[comp as usize];
        let pure = profile[ty.index()] as u64 == actual;
        out.record(pure && actual == size && diameters.contains(&d), || {
            format!("component {comp}: size {actual}, diameter {d}, types {:?}", lab.types_present(comp))
        });
    }
    out.with_detail(format!("{ty} components of size {size}, diameter in {diameters:?}"))
}

/// The forced shapes of the obstruction components that apply at this `q`.
pub fn obstruction_checks(an: &Analysis) -> Result<Vec<CheckOutcome>> {
    pgl_only(an)?;
    let f = an.graph.field();
    let q = f.q() as u64;
    let p = f.p() as u64;
    let mut out = Vec::new();
    if p == 2 && is_prime(q - 1) {
        out.push(component_shape(an, "diagonalizable obstruction", JordanType::LLL, q - 2, &[1]));
    }
    let irreducible_diameters: &[u32] = if q == 2 { &[1] } else { &[1, 2] };
    out.push(component_shape(
        an,
        "irreducible obstruction",
        JordanType::Irreducible,
        q * (q + 1),
        irreducible_diameters,
    ));
    if p != 2 {
        out.push(component_shape(an, "unipotent obstruction", JordanType::NPJ, p - 1, &[1]));
    }
    if q == 2 {
        out.push(component_shape(an, "quasi-diagonalizable obstruction", JordanType::LP, 2, &[1]));
    }
    Ok(out)
}

/// Every vertex of the pivot component is decomposable, or NPJ in even
/// characteristic.
pub fn pivot_component_membership(an: &Analysis) -> Result<CheckOutcome> {
    pgl_only(an)?;
    let comp = an
        .labeling
        .pivot_component
        .ok_or_else(|| Error::Precondition("graph has no pivot component".into()))?;
    let even = an.graph.field().p() == 2;
    let mut out = CheckOutcome::new("pivot component membership");
    for &v in an.labeling.members(comp) {
        let t = an.types[v as usize];
        out.record(t.is_decomposable() || (even && t == JordanType::NPJ), || {
            format!("{} of type {t} in the pivot component", an.graph.matrix(v))
        });
    }
    let count = an.labeling.pivot_component_count();
    out.record(count == 1, || format!("{count} components contain pivot vertices"));
    Ok(out)
}

/// Which type-transition diagram governs `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionDiagram {
    /// `q - 1` is not a prime power.
    Generic,
    /// `q = 9` or a Fermat prime other than 3.
    FermatOrNine,
    /// `q` even and `q - 1` prime.
    EvenMersenne,
    Three,
    Two,
}

impl TransitionDiagram {
    pub fn for_q(q: u32) -> Result<TransitionDiagram> {
        let f = Field::with_order(q)?;
        let q = q as u64;
        Ok(match q {
            2 => TransitionDiagram::Two,
            3 => TransitionDiagram::Three,
            _ if !classify_prime_power(q - 1)?.is_prime_power() => TransitionDiagram::Generic,
            _ if f.p() == 2 => TransitionDiagram::EvenMersenne,
            _ => TransitionDiagram::FermatOrNine,
        })
    }

    /// Arrows `T1 -> T2` between distinct types: some matrix of type `T1`
    /// has a power of type `T2`.
    pub fn arrows(self, even: bool) -> BTreeSet<(JordanType, JordanType)> {
        use JordanType::*;
        let list: &[(JordanType, JordanType)] = match self {
            TransitionDiagram::Generic if even => {
                &[(LLL, Pivot), (LP, Pivot), (LLP, Pivot), (LLP, JordanPivot), (NPJ, JordanPivot)]
            }
            TransitionDiagram::Generic | TransitionDiagram::FermatOrNine => {
                &[(LLL, Pivot), (LP, Pivot), (LLP, Pivot), (LLP, JordanPivot)]
            }
            TransitionDiagram::EvenMersenne => &[(LP, Pivot), (LLP, Pivot), (LLP, JordanPivot), (NPJ, JordanPivot)],
            TransitionDiagram::Three => &[(LP, Pivot), (LLP, Pivot), (LLP, JordanPivot)],
            TransitionDiagram::Two => &[(NPJ, JordanPivot)],
        };
        list.iter().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionReport {
    pub diagram: TransitionDiagram,
    /// `(from, to, arcs)` for every cross-type power relation seen.
    pub observed: Vec<(JordanType, JordanType, u64)>,
    pub outcome: CheckOutcome,
}

/// Compares the cross-type power relations in the graph with the diagram:
/// every observed arrow must be drawn and every drawn arrow must occur.
pub fn transition_audit(an: &Analysis) -> Result<TransitionReport> {
    pgl_only(an)?;
    let g = &an.graph;
    let f = g.field();
    let diagram = TransitionDiagram::for_q(f.q())?;
    let allowed = diagram.arrows(f.p() == 2);
    let observed: BTreeMap<(JordanType, JordanType), u64> = (0..g.vertex_count() as u32)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc, u| {
            let tu = an.types[u as usize];
            for t in g.power_targets(u) {
                let tt = an.types[t as usize];
                if tt != tu {
                    *acc.entry((tu, tt)).or_insert(0u64) += 1;
                }
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, n) in b {
                *a.entry(k).or_insert(0) += n;
            }
            a
        });
    let mut outcome = CheckOutcome::new("type transitions");
    for (&(from, to), &n) in &observed {
        outcome.record(allowed.contains(&(from, to)), || format!("{n} arcs {from} -> {to} not in the diagram"));
    }
    for &(from, to) in &allowed {
        outcome.record(observed.contains_key(&(from, to)), || format!("diagram arrow {from} -> {to} never occurs"));
    }
    Ok(TransitionReport {
        diagram,
        observed: observed.into_iter().map(|((a, b), n)| (a, b, n)).collect(),
        outcome,
    })
}

/// The unique eigenvalue of a matrix with one eigenvalue.
fn sole_eigenvalue(m: &Mat3, f: &Field) -> Option<FieldElem> {
    match m.char_poly(f).roots(f).as_slice() {
        [(b, 3)] => Some(*b),
        _ => None,
    }
}

/// Checks the subspace coincidences forced on an edge between `a` and `b`.
/// Returns `None` when no restriction covers the pair of types, which for
/// an edge of the graph means a transition outside the diagrams.
pub fn edge_restriction(a: &Mat3, b: &Mat3, f: &Field) -> Result<Option<bool>> {
    use JordanType::*;
    let (ta, tb) = (a.jordan_type(f)?, b.jordan_type(f)?);
    if ta == tb {
        let (ea, eb) = (a.eigen_structure(f), b.eigen_structure(f));
        return Ok(Some(
            ea.eigenspaces() == eb.eigenspaces()
                && ea.generalized_eigenspaces() == eb.generalized_eigenspaces()
                && ea.invariant == eb.invariant,
        ));
    }
    let ((root, tr), (power, tp)) = if matches!(ta, Pivot | JordanPivot) {
        ((b, tb), (a, ta))
    } else {
        ((a, ta), (b, tb))
    };
    let er = root.eigen_structure(f);
    let ep = power.eigen_structure(f);
    Ok(match (tr, tp) {
        (LLL, Pivot) => {
            let lines = er.eigenspaces();
            Some(ep.eigenspaces().iter().all(|space| {
                let inside: Vec<_> = lines.iter().filter(|l| space.contains(l, f)).flat_map(|l| l.basis()).collect();
                Subspace::span(&inside, f) == *space
            }))
        }
        (LP, Pivot) => Some(er.invariant == ep.eigenspaces()),
        (LLP, Pivot) => Some(er.generalized_eigenspaces() == ep.eigenspaces()),
        (LLP, JordanPivot) => {
            let b = sole_eigenvalue(power, f).expect("Jordan pivot has one eigenvalue");
            let n = power.shift(b, f);
            let repeated = root.char_poly(f).roots(f).into_iter().find(|r| r.1 == 2).map(|r| r.0);
            let spaces = er.eigenspaces();
            Some(
                repeated.and_then(|r| er.eigenspace_of(r)) == Some(Subspace::column_space(&n, f))
                    && spaces.len() == 2
                    && spaces[0].join(&spaces[1], f) == Subspace::kernel(&n, f),
            )
        }
        (NPJ, JordanPivot) => {
            let a0 = sole_eigenvalue(root, f).expect("NPJ has one eigenvalue");
            let b0 = sole_eigenvalue(power, f).expect("Jordan pivot has one eigenvalue");
            let (na, nb) = (root.shift(a0, f), power.shift(b0, f));
            Some(
                er.eigenspaces() == vec![Subspace::column_space(&nb, f)]
                    && Subspace::kernel(&nb, f) == Subspace::kernel(&na.mul(&na, f), f),
            )
        }
        _ => None,
    })
}

/// A uniformly random edge, as an arc of the adjacency array.
fn random_edge(g: &PowerGraph, rng: &mut ChaCha8Rng) -> (VertexId, VertexId) {
    g.arc(rng.gen_range(0..g.arc_count()))
}

/// Subspace restrictions on `samples` uniformly random edges.
pub fn edge_restriction_sample(g: &PowerGraph, samples: usize, seed: u64) -> Result<CheckOutcome> {
    let f = g.field();
    let mut out = CheckOutcome::new("edge restrictions");
    if g.arc_count() == 0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_pair: BTreeMap<(JordanType, JordanType), u64> = BTreeMap::new();
    for _ in 0..samples {
        let (u, v) = random_edge(g, &mut rng);
        let (a, b) = (g.matrix(u), g.matrix(v));
        let (ta, tb) = (g.jordan_type(u), g.jordan_type(v));
        *per_pair.entry((ta.min(tb), ta.max(tb))).or_insert(0) += 1;
        match edge_restriction(&a, &b, f)? {
            Some(ok) => out.record(ok, || format!("{a} ({ta}) -- {b} ({tb}): subspaces disagree")),
            None => out.record(false, || format!("{a} ({ta}) -- {b} ({tb}): no restriction covers this pair")),
        }
    }
    let detail = per_pair
        .iter()
        .map(|((x, y), n)| format!("{x}-{y}: {n}"))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(out.with_detail(detail))
}

/// Every sampled edge is a power relation up to scalars.
pub fn edge_soundness_sample(g: &PowerGraph, samples: usize, seed: u64) -> CheckOutcome {
    let f = g.field();
    let mut out = CheckOutcome::new("edge soundness");
    if g.arc_count() == 0 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (u, v) = random_edge(g, &mut rng);
        let (a, b) = (g.matrix(u), g.matrix(v));
        let ok = match g.kind() {
            GraphKind::Pgl => power_witness(&a, &b, f).is_some(),
            GraphKind::Gl => power_witness(&a, &b, f).is_some_and(|w| w.scalar == FieldElem::ONE),
        };
        out.record(ok, || format!("{a} -- {b} is not a power relation"));
    }
    out
}

pub fn random_invertible(f: &Field, rng: &mut impl Rng) -> Mat3 {
    loop {
        let m = Mat3(std::array::from_fn(|_| FieldElem::from_code(rng.gen_range(0..f.q()) as u8)));
        if m.is_invertible(f) {
            return m;
        }
    }
}

/// Eccentricity of `v` equals that of a random conjugate of `v`.
pub fn eccentricity_invariance(g: &PowerGraph, samples: usize, seed: u64) -> Result<CheckOutcome> {
    let f = g.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bfs = Bfs::new(g.vertex_count());
    let mut out = CheckOutcome::new("eccentricity under conjugation");
    for _ in 0..samples {
        let v = rng.gen_range(0..g.vertex_count() as u32);
        let x = random_invertible(f, &mut rng);
        let a = g.matrix(v);
        let w = g
            .id_of(&a.conjugate_by(&x, f)?)
            .ok_or_else(|| Error::Internal("conjugate of a vertex is not a vertex".into()))?;
        let (ev, ew) = (bfs.eccentricity(g, v), bfs.eccentricity(g, w));
        out.record(ev == ew, || format!("ecc({a}) = {ev} but its conjugate by {x} has {ew}"));
    }
    Ok(out)
}

/// Pivot vertices of projective order `order`.
pub fn pivots_of_order(an: &Analysis, order: u64) -> Vec<VertexId> {
    let f = an.graph.field();
    (0..an.graph.vertex_count() as u32)
        .into_par_iter()
        .filter(|&v| an.types[v as usize] == JordanType::Pivot && an.graph.matrix(v).projective_order(f) == order)
        .collect()
}

/// Every vertex selected by `target` lies within `radius` of a pivot of
/// projective order `order`.
fn coverage(
    an: &Analysis,
    name: &str,
    order: u64,
    radius: u32,
    target: impl Fn(VertexId) -> bool + Sync,
) -> CheckOutcome {
    let g = &an.graph;
    let sources = pivots_of_order(an, order);
    let mut bfs = Bfs::new(g.vertex_count());
    bfs.run_multi(g, &sources, None);
    let targets: Vec<VertexId> = (0..g.vertex_count() as u32).into_par_iter().filter(|&v| target(v)).collect();
    let mut out = CheckOutcome::new(name);
    let mut farthest = 0;
    for v in targets {
        let d = bfs.dist(v);
        farthest = farthest.max(d.unwrap_or(u32::MAX));
        out.record(d.is_some_and(|d| d <= radius), || {
            format!("{} ({}) at distance {:?}", g.matrix(v), an.types[v as usize], d)
        });
    }
    let far = if farthest == u32::MAX { "unreachable".to_string() } else { farthest.to_string() };
    out.with_detail(format!("{} sources of order {order}, farthest target {far}", sources.len()))
}

/// In odd characteristic, every decomposable vertex is within distance 2 of
/// a pivot of projective order 2.
pub fn order_two_coverage(an: &Analysis) -> Result<CheckOutcome> {
    pgl_only(an)?;
    if an.graph.field().p() == 2 {
        return Err(Error::Precondition("order-2 pivot coverage needs odd q".into()));
    }
    Ok(coverage(an, "order-2 pivot coverage", 2, 2, |v| an.types[v as usize].is_decomposable()))
}

/// In even characteristic, with `p0` a prime factor of `q - 1`: decomposable
/// vertices whose projective order is not a power of `p0`, and all NPJ
/// vertices, are within distance 3 of a pivot of projective order `p0`.
pub fn prime_order_coverage(an: &Analysis, p0: u64) -> Result<CheckOutcome> {
    pgl_only(an)?;
    let f = an.graph.field();
    let q = f.q() as u64;
    if f.p() != 2 || q == 2 || !is_prime(p0) || (q - 1) % p0 != 0 {
        return Err(Error::Precondition(format!("need q > 2 even and p0 a prime factor of q - 1, got q = {q}, p0 = {p0}")));
    }
    Ok(coverage(an, &format!("order-{p0} pivot coverage"), p0, 3, |v| match an.types[v as usize] {
        JordanType::NPJ => true,
        t if t.is_decomposable() => !is_power_of(an.graph.matrix(v).projective_order(f), p0),
        _ => false,
    }))
}

/// For `q` even with `p0 = q - 1` prime: a matrix whose projective order is
/// a power of `p0` is diagonalizable or has irreducible characteristic
/// polynomial.
pub fn mersenne_order_shapes(f: &Field, matrices: impl Iterator<Item = Mat3>) -> Result<CheckOutcome> {
    let q = f.q() as u64;
    if f.p() != 2 || !is_prime(q - 1) {
        return Err(Error::Precondition(format!("q = {q} is not even with q - 1 prime")));
    }
    let p0 = q - 1;
    let mut out = CheckOutcome::new("prime-power order shapes");
    let mut seen = 0u64;
    for m in matrices {
        seen += 1;
        if m.is_scalar() || !is_power_of(m.projective_order(f), p0) {
            continue;
        }
        let t = m.jordan_type(f)?;
        out.record(matches!(t, JordanType::Pivot | JordanType::LLL | JordanType::Irreducible), || {
            format!("{m} has projective order a power of {p0} but type {t}")
        });
    }
    Ok(out.with_detail(format!("{seen} matrices scanned")))
}

/// The diagonal witness `A = diag(1, x, x^2)` and its conjugate `B` stay at
/// distance at least 2 (odd `q`) or 3 (even `q`) from every pivot vertex.
/// For even `q`, `x` is a generator; for odd `q`, `x` has odd prime order.
pub fn diagonal_witness_pivot_distance(an: &Analysis) -> Result<CheckOutcome> {
    pgl_only(an)?;
    let g = &an.graph;
    let f = g.field();
    let q = f.q() as u64;
    let even = f.p() == 2;
    let x = if even {
        if q < 4 {
            return Err(Error::Precondition("need q >= 4".into()));
        }
        f.generator()
    } else {
        let p0 = factorize(q - 1)
            .into_iter()
            .map(|(p, _)| p)
            .find(|&p| p != 2)
            .ok_or_else(|| Error::Precondition(format!("q - 1 = {} has no odd prime factor", q - 1)))?;
        f.element_of_order(p0)?
    };
    let bound = if even { 3 } else { 2 };
    let (a, b) = diagonal_conjugate_pair(x, f)?;
    let pivots: Vec<VertexId> = (0..g.vertex_count() as u32)
        .filter(|&v| an.types[v as usize] == JordanType::Pivot)
        .collect();
    let mut out = CheckOutcome::new("diagonal witness distance to pivots");
    let mut bfs = Bfs::new(g.vertex_count());
    let mut nearest: Option<u32> = None;
    for m in [a, b] {
        let s = g.id_of(&m).ok_or_else(|| Error::Internal(format!("{m} is not a vertex")))?;
        bfs.eccentricity(g, s);
        for &p in &pivots {
            let d = bfs.dist(p);
            if let Some(d) = d {
                nearest = Some(nearest.map_or(d, |n| n.min(d)));
            }
            out.record(d.map_or(true, |d| d >= bound), || format!("{m} is at distance {d:?} from pivot {}", g.matrix(p)));
        }
    }
    let near = nearest.map_or("no pivot reachable".to_string(), |d| format!("nearest pivot at distance {d}"));
    Ok(out.with_detail(format!("A = {a}, B = {b}, bound {bound}, {near}")))
}

/// Pivot `A` and Jordan pivot `B` with the plane of `A` equal to
/// `ker(B - bI)` are at distance at least 10, for `q - 1` a prime power.
/// Checks `B = I + E13` against every such pivot, then `conjugates` random
/// conjugates of the configuration.
pub fn pivot_jordan_plane_separation(an: &Analysis, conjugates: usize, seed: u64) -> Result<CheckOutcome> {
    pgl_only(an)?;
    let g = &an.graph;
    let f = g.field();
    let q = f.q() as u64;
    if q == 2 || !classify_prime_power(q - 1)?.is_prime_power() {
        return Err(Error::Precondition(format!("q = {q} needs q > 2 with q - 1 a prime power")));
    }
    let pivots: Vec<(VertexId, Subspace)> = (0..g.vertex_count() as u32)
        .into_par_iter()
        .filter(|&v| an.types[v as usize] == JordanType::Pivot)
        .map(|v| (v, pivot_spaces(&g.matrix(v), f).expect("pivot vertex").1))
        .collect();
    let base = Mat3::identity().add(&Mat3::unit(0, 2), f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bfs = Bfs::new(g.vertex_count());
    let mut out = CheckOutcome::new("pivot and Jordan pivot sharing a plane");
    let mut closest: Option<u32> = None;
    for round in 0..=conjugates {
        let jp = if round == 0 { base } else { base.conjugate_by(&random_invertible(f, &mut rng), f)? };
        let b0 = sole_eigenvalue(&jp, f).expect("Jordan pivot");
        let plane = Subspace::kernel(&jp.shift(b0, f), f);
        let s = g.id_of(&jp).ok_or_else(|| Error::Internal(format!("{jp} is not a vertex")))?;
        bfs.eccentricity(g, s);
        for &(p, ref pp) in &pivots {
            if *pp != plane {
                continue;
            }
            let d = bfs.dist(p);
            if let Some(d) = d {
                closest = Some(closest.map_or(d, |c| c.min(d)));
            }
            out.record(d.map_or(true, |d| d >= 10), || format!("pivot {} at distance {d:?} from {jp}", g.matrix(p)));
        }
    }
    let near = closest.map_or("none reachable".to_string(), |d| format!("closest pair at distance {d}"));
    Ok(out.with_detail(near))
}

/// Any two vertices selected by `member` are within `bound` of each other.
/// One BFS per conjugacy class among them covers every pair, since
/// conjugation is an automorphism and `member` is conjugation invariant.
fn pairwise_distance(g: &PowerGraph, name: &str, bound: u32, member: impl Fn(&Mat3) -> bool + Sync) -> CheckOutcome {
    let keys = g.class_keys();
    let members: Vec<VertexId> = (0..g.vertex_count() as u32)
        .into_par_iter()
        .filter(|&v| member(&g.matrix(v)))
        .collect();
    let mut reps: BTreeMap<u32, VertexId> = BTreeMap::new();
    for &v in &members {
        reps.entry(keys[v as usize]).or_insert(v);
    }
    let mut out = CheckOutcome::new(name);
    let mut bfs = Bfs::new(g.vertex_count());
    let mut farthest = 0;
    for &r in reps.values() {
        bfs.eccentricity(g, r);
        for &w in &members {
            let d = bfs.dist(w);
            farthest = farthest.max(d.unwrap_or(u32::MAX));
            out.record(d.is_some_and(|d| d <= bound), || {
                format!("{} and {} at distance {d:?}", g.matrix(r), g.matrix(w))
            });
        }
    }
    let far = if farthest == u32::MAX { "unreachable".to_string() } else { farthest.to_string() };
    out.with_detail(format!("{} classes, {} vertices, largest distance {far}", reps.len(), members.len()))
}

/// Any two pivot vertices are within `bound`.
pub fn pivot_pairwise_distance(g: &PowerGraph, bound: u32) -> CheckOutcome {
    let f = g.field();
    pairwise_distance(g, "pivot pairwise distance", bound, |m| {
        m.jordan_type(f).is_ok_and(|t| t == JordanType::Pivot)
    })
}

/// Any two Jordan pivot matrices, `A` with `A - I` of rank one and
/// `(A - I)^2 = 0`, are within `bound`.
pub fn unipotent_jordan_pivot_distance(g: &PowerGraph, bound: u32) -> CheckOutcome {
    let f = g.field();
    pairwise_distance(g, "unipotent Jordan pivot pairwise distance", bound, |m| {
        let n = m.shift(FieldElem::ONE, f);
        n.rank(f) == 1 && n.mul(&n, f) == Mat3::zero()
    })
}

/// Centralizer factorization of `trials` random invertible matrices, each
/// with a random `b` outside `{0, 1}`.
pub fn factorization_suite(q: u32, trials: usize, seed: u64) -> Result<CheckOutcome> {
    let f = Field::with_order(q)?;
    if q < 3 {
        return Err(Error::Precondition("need q >= 3 for b outside {0, 1}".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CheckOutcome::new(format!("centralizer factorization over F_{q}"));
    let mut cases = BTreeMap::new();
    for _ in 0..trials {
        let x = random_invertible(&f, &mut rng);
        let b = FieldElem::from_code(rng.gen_range(2..q) as u8);
        let t = centralizer_factorization(&x, b, &f)?;
        *cases.entry(format!("{:?}", t.case)).or_insert(0u64) += 1;
        out.record(t.holds(&x, b, &f), || format!("X = {x}, b = {b}: factors fail"));
    }
    let detail = cases.iter().map(|(c, n)| format!("{c}: {n}")).collect::<Vec<_>>().join(", ");
    Ok(out.with_detail(detail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pgl::GroupSpec;

    fn e(c: u8) -> FieldElem {
        FieldElem::from_code(c)
    }

    fn analysis(q: u32) -> Analysis {
        Analysis::build(q, GraphKind::Pgl).unwrap()
    }

    #[test]
    fn outcome_keeps_few_examples() {
        let mut o = CheckOutcome::new("x");
        for i in 0..20 {
            o.record(i % 2 == 0, || format!("bad {i}"));
        }
        assert_eq!((o.checked, o.violations, o.examples.len()), (20, 10, MAX_EXAMPLES));
        assert!(!o.passed());
        assert!(o.to_string().contains("FAILED"));
    }

    #[test]
    fn diagrams_by_q() {
        use TransitionDiagram::*;
        let got: Vec<_> = [2, 3, 4, 5, 7, 8, 9, 16].iter().map(|&q| TransitionDiagram::for_q(q).unwrap()).collect();
        assert_eq!(got, [Two, Three, EvenMersenne, FermatOrNine, Generic, EvenMersenne, FermatOrNine, Generic]);
        assert!(Generic.arrows(true).contains(&(JordanType::NPJ, JordanType::JordanPivot)));
        assert!(!Generic.arrows(false).contains(&(JordanType::NPJ, JordanType::JordanPivot)));
        assert!(!EvenMersenne.arrows(true).contains(&(JordanType::LLL, JordanType::Pivot)));
    }

    #[test]
    fn obstructions_at_two_and_three() {
        for q in [2, 3] {
            let an = analysis(q);
            let checks = obstruction_checks(&an).unwrap();
            assert!(!checks.is_empty());
            for c in checks {
                assert!(c.passed(), "q = {q}: {c}");
                assert!(c.checked > 0, "q = {q}: {c}");
            }
        }
    }

    #[test]
    fn membership_and_transitions_at_three() {
        let an = analysis(3);
        let m = pivot_component_membership(&an).unwrap();
        assert!(m.passed(), "{m}");
        let t = transition_audit(&an).unwrap();
        assert_eq!(t.diagram, TransitionDiagram::Three);
        assert!(t.outcome.passed(), "{}", t.outcome);
        assert_eq!(t.observed.len(), 3);
    }

    #[test]
    fn transitions_at_two() {
        let an = analysis(2);
        assert!(pivot_component_membership(&an).is_err());
        let t = transition_audit(&an).unwrap();
        assert!(t.outcome.passed(), "{}", t.outcome);
        assert_eq!(t.observed.iter().map(|o| (o.0, o.1)).collect::<Vec<_>>(), [(JordanType::NPJ, JordanType::JordanPivot)]);
    }

    #[test]
    fn restriction_rejects_mismatched_pivot() {
        let f = Field::with_order(5).unwrap();
        // diag(1, 2, 4) squares to diag(1, 4, 1): eigenspaces are spanned by
        // the LLL eigenlines.
        let lll = Mat3::diag(e(1), e(2), e(4));
        assert_eq!(edge_restriction(&lll, &lll.pow(2, &f), &f).unwrap(), Some(true));
        // An unrelated pivot with a tilted plane.
        let g = Mat3::from_codes([1, 1, 0, 0, 1, 0, 0, 0, 1]);
        let tilted = Mat3::diag(e(1), e(4), e(1)).conjugate_by(&g, &f).unwrap();
        assert_eq!(edge_restriction(&lll, &tilted, &f).unwrap(), Some(false));
        // No restriction relates a pivot and a Jordan pivot.
        let jp = Mat3::identity().add(&Mat3::unit(0, 2), &f);
        assert_eq!(edge_restriction(&Mat3::diag(e(1), e(2), e(2)), &jp, &f).unwrap(), None);
    }

    #[test]
    fn restrictions_hold_on_every_edge_at_three() {
        let g = PowerGraph::build(&GroupSpec::new(3, GraphKind::Pgl).unwrap());
        let f = g.field();
        for u in 0..g.vertex_count() as u32 {
            for &v in g.neighbors(u) {
                if u < v {
                    assert_eq!(edge_restriction(&g.matrix(u), &g.matrix(v), f).unwrap(), Some(true), "{u} {v}");
                }
            }
        }
        assert!(edge_soundness_sample(&g, 500, 0).passed());
        let s = edge_restriction_sample(&g, 500, 0).unwrap();
        assert_eq!(s.checked, 500);
        assert!(s.passed(), "{s}");
    }

    #[test]
    fn conjugation_preserves_eccentricity() {
        let g = PowerGraph::build(&GroupSpec::new(3, GraphKind::Pgl).unwrap());
        let o = eccentricity_invariance(&g, 50, 0).unwrap();
        assert!(o.passed() && o.checked == 50, "{o}");
    }

    #[test]
    fn order_two_pivots_cover_three() {
        let an = analysis(3);
        let o = order_two_coverage(&an).unwrap();
        assert!(o.passed(), "{o}");
        assert_eq!(o.checked, an.census.type_totals.iter().filter(|(t, _)| t.is_decomposable()).map(|(_, n)| n).sum::<u64>());
        assert!(prime_order_coverage(&an, 2).is_err());
    }

    #[test]
    fn separation_at_three() {
        let an = analysis(3);
        let o = pivot_jordan_plane_separation(&an, 3, 0).unwrap();
        assert!(o.passed() && o.checked > 0, "{o}");
    }

    #[test]
    fn gl_same_type_distances_at_three() {
        let g = PowerGraph::build(&GroupSpec::new(3, GraphKind::Gl).unwrap());
        for o in [pivot_pairwise_distance(&g, 8), unipotent_jordan_pivot_distance(&g, 8)] {
            assert!(o.passed() && o.checked > 0, "{o}");
        }
        // Jordan pivots with another eigenvalue fall outside the bound.
        let f = g.field();
        let a = g.id_of(&Mat3::from_codes([0, 0, 1, 0, 2, 0, 2, 0, 1])).unwrap();
        let b = g.id_of(&Mat3::from_codes([0, 0, 1, 1, 2, 1, 2, 0, 1])).unwrap();
        assert_eq!(g.jordan_type(a), JordanType::JordanPivot);
        assert_eq!(sole_eigenvalue(&g.matrix(a), f), Some(e(2)));
        assert_eq!(g.distance(a, b), Some(10));
    }

    #[test]
    fn factorization_suite_small() {
        let o = factorization_suite(5, 200, 0).unwrap();
        assert!(o.passed() && o.checked == 200, "{o}");
        assert!(factorization_suite(2, 1, 0).is_err());
    }

    #[test]
    fn mersenne_shapes_reject_other_fields() {
        let f = Field::with_order(5).unwrap();
        assert!(mersenne_order_shapes(&f, std::iter::empty()).is_err());
    }
}
