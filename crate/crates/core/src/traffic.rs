//! Test graphs, partition quotients and traffic states.
//!
//! An edge `e` labeled `i` contributes the entry `M_i(phi(tgt e), phi(src e))`,
//! so the directed cycle built by [`TestGraph::cycle`] evaluates to the
//! normalized trace of the product of its labels.

use std::collections::HashMap;
use std::io::BufRead;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entry::EntrySpec;
use crate::error::{Error, Result};
use crate::free::CovarianceSpec;
use crate::perm::EntryPermutation;

/// Cap on `N^|V|` for sums over all vertex maps of deterministic matrices.
pub const MAP_BUDGET: f64 = 1e7;

/// Cap on the number of search nodes of [`expected_injective_traffic`].
pub const SEARCH_BUDGET: f64 = 5e7;

pub const CYCLE_QUOTIENT_MAX_N: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub tgt: usize,
    pub label: usize,
}

/// A finite connected edge-labeled multidigraph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestGraph {
    vertices: usize,
    edges: Vec<Edge>,
}

impl TestGraph {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidGraph("a test graph needs at least one vertex".into()));
        }
        if let Some(e) = edges.iter().find(|e| e.src >= vertices || e.tgt >= vertices) {
            return Err(Error::InvalidGraph(format!(
                "edge {} -> {} uses a vertex outside 1..={vertices}",
                e.src + 1,
                e.tgt + 1
            )));
        }
        // union-find connectivity
        let mut parent: Vec<usize> = (0..vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &edges {
            let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.tgt));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..vertices).any(|v| find(&mut parent, v) != root) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(TestGraph { vertices, edges })
    }

    /// Builds from `(src, tgt, label)` triples.
    pub fn from_triples(vertices: usize, triples: &[(usize, usize, usize)]) -> Result<Self> {
        Self::new(
            vertices,
            triples.iter().map(|&(src, tgt, label)| Edge { src, tgt, label }).collect(),
        )
    }

    /// The directed cycle whose edge `k` runs from `v_{k+1}` to `v_k`.
    pub fn cycle(labels: &[usize]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidGraph("a cycle needs at least one edge".into()));
        }
        Self::new(
            n,
            labels
                .iter()
                .enumerate()
                .map(|(k, &label)| Edge {
                    src: (k + 1) % n,
                    tgt: k,
                    label,
                })
                .collect(),
        )
    }

    /// Two vertices with twin edges of labels `(i, i2)`; opposing or congruent.
    pub fn two_vertex(i: usize, i2: usize, opposing: bool) -> Self {
        let second = if opposing {
            Edge { src: 0, tgt: 1, label: i2 }
        } else {
            Edge { src: 1, tgt: 0, label: i2 }
        };
        TestGraph {
            vertices: 2,
            edges: vec![Edge { src: 1, tgt: 0, label: i }, second],
        }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn max_label(&self) -> Option<usize> {
        self.edges.iter().map(|e| e.label).max()
    }

    /// Text form: `V k`, then one `src tgt label` line per edge, all 1-based.
    pub fn to_text(&self) -> String {
        let mut s = format!("V {}\n", self.vertices);
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.src + 1, e.tgt + 1, e.label + 1));
        }
        s
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut vertices = None;
        let mut edges = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Parse {
                line: i + 1,
                msg: format!("{msg}: `{t}`"),
            };
            if vertices.is_none() {
                let k = t
                    .strip_prefix('V')
                    .and_then(|r| r.trim().parse::<usize>().ok())
                    .ok_or_else(|| bad("expected `V k`"))?;
                vertices = Some(k);
                continue;
            }
            let nums: Vec<usize> = t
                .split_whitespace()
                .map(|x| x.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("expected `src tgt label`"))?;
            if nums.len() != 3 || nums.contains(&0) {
                return Err(bad("expected three 1-based integers"));
            }
            edges.push(Edge {
                src: nums[0] - 1,
                tgt: nums[1] - 1,
                label: nums[2] - 1,
            });
        }
        let vertices = vertices.ok_or(Error::Parse {
            line: 1,
            msg: "missing `V k` header".into(),
        })?;
        Self::new(vertices, edges)
    }
}

/// A set partition stored as a restricted growth string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexPartition {
    block_of: Vec<usize>,
}

impl VertexPartition {
    /// Accepts any block assignment and renumbers it to restricted growth form.
    pub fn from_assignment(assign: &[usize]) -> Self {
        let mut map = HashMap::new();
        let block_of = assign
            .iter()
            .map(|&b| {
                let next = map.len();
                *map.entry(b).or_insert(next)
            })
            .collect();
        VertexPartition { block_of }
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition {
            block_of: (0..n).collect(),
        }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut assign = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                if v >= n || assign[v] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("vertex {} repeated or out of range", v + 1)));
                }
                assign[v] = b;
            }
        }
        if assign.contains(&usize::MAX) {
            return Err(Error::InvalidParameter("blocks do not cover every vertex".into()));
        }
        Ok(Self::from_assignment(&assign))
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count()];
        for &b in &self.block_of {
            sizes[b] += 1;
        }
        sizes
    }
}

/// All set partitions of `n` elements, in restricted growth string order.
pub fn enumerate_partitions(n: usize) -> Vec<VertexPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(pos: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<VertexPartition>) {
        if pos == rgs.len() {
            out.push(VertexPartition { block_of: rgs.clone() });
            return;
        }
        for b in 0..=max + 1 {
            rgs[pos] = b;
            rec(pos + 1, max.max(b), rgs, out);
        }
    }
    if n == 0 {
        out.push(VertexPartition { block_of: vec![] });
    } else {
        rec(1, 0, &mut rgs, &mut out);
    }
    out
}

/// `mu(0, pi) = prod over blocks of (-1)^(|B|-1) (|B|-1)!`.
pub fn partition_mobius(pi: &VertexPartition) -> i64 {
    pi.block_sizes()
        .into_iter()
        .map(|s| {
            let f: i64 = (1..s as i64).product();
            if s % 2 == 0 { -f } else { f }
        })
        .product()
}

/// Identifies the vertices in each block; the edge list is kept in order.
pub fn quotient(t: &TestGraph, pi: &VertexPartition) -> Result<TestGraph> {
    if pi.len() != t.vertices {
        return Err(Error::DimensionMismatch {
            expected: t.vertices,
            got: pi.len(),
        });
    }
    Ok(TestGraph {
        vertices: pi.block_count(),
        edges: t
            .edges
            .iter()
            .map(|e| Edge {
                src: pi.block_of(e.src),
                tgt: pi.block_of(e.tgt),
                label: e.label,
            })
            .collect(),
    })
}

fn check_labels(t: &TestGraph, available: usize) -> Result<()> {
    if let Some(m) = t.max_label() {
        if m >= available {
            return Err(Error::InvalidGraph(format!(
                "edge label {} has no matrix ({} supplied)",
                m + 1,
                available
            )));
        }
    }
    Ok(())
}

/// A vertex order in which each vertex after the first touches an earlier one,
/// starting from a vertex of maximal degree; with the edges completed at each step.
fn search_order(t: &TestGraph) -> (Vec<usize>, Vec<Vec<usize>>) {
    let v = t.vertices;
    let mut deg = vec![0usize; v];
    for e in &t.edges {
        deg[e.src] += 1;
        deg[e.tgt] += 1;
    }
    let mut placed = vec![false; v];
    let mut order = Vec::with_capacity(v);
    let first = (0..v).max_by_key(|&x| (deg[x], std::cmp::Reverse(x))).unwrap_or(0);
    order.push(first);
    placed[first] = true;
    while order.len() < v {
        let next = (0..v)
            .filter(|&x| !placed[x])
            .max_by_key(|&x| {
                let links = t
                    .edges
                    .iter()
                    .filter(|e| (e.src == x && placed[e.tgt]) || (e.tgt == x && placed[e.src]))
                    .count();
                (links, deg[x], std::cmp::Reverse(x))
            })
            .expect("unplaced vertex");
        order.push(next);
        placed[next] = true;
    }
    let mut pos = vec![0; v];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let mut completed = vec![Vec::new(); v];
    for (i, e) in t.edges.iter().enumerate() {
        completed[pos[e.src].max(pos[e.tgt])].push(i);
    }
    (order, completed)
}

fn map_sum(t: &TestGraph, mats: &[Mat<Complex64>], n: usize, injective: bool) -> Result<Complex64> {
    check_labels(t, mats.len())?;
    if let Some(m) = mats.iter().find(|m| m.nrows() != n || m.ncols() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.nrows().max(m.ncols()),
        });
    }
    let needed = (n as f64).powi(t.vertices as i32);
    if needed > MAP_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "traffic state",
            needed,
            cap: MAP_BUDGET,
        });
    }
    let (order, completed) = search_order(t);
    struct Ctx<'a> {
        t: &'a TestGraph,
        mats: &'a [Mat<Complex64>],
        order: Vec<usize>,
        completed: Vec<Vec<usize>>,
        phi: Vec<usize>,
        used: Vec<bool>,
        injective: bool,
        n: usize,
    }
    fn rec(c: &mut Ctx, step: usize, acc: Complex64) -> Complex64 {
        if step == c.order.len() {
            return acc;
        }
        let v = c.order[step];
        let mut total = Complex64::new(0.0, 0.0);
        for x in 0..c.n {
            if c.injective && c.used[x] {
                continue;
            }
            c.phi[v] = x;
            let mut val = acc;
            for &ei in &c.completed[step] {
                let e = c.t.edges[ei];
                val *= c.mats[e.label][(c.phi[e.tgt], c.phi[e.src])];
            }
            if val == Complex64::new(0.0, 0.0) {
                continue;
            }
            c.used[x] = true;
            total += rec(c, step + 1, val);
            c.used[x] = false;
        }
        total
    }
    let mut ctx = Ctx {
        t,
        mats,
        order,
        completed,
        phi: vec![0; t.vertices],
        used: vec![false; n],
        injective,
        n,
    };
    Ok(rec(&mut ctx, 0, Complex64::new(1.0, 0.0)) / n as f64)
}

/// `tau_N[T] = (1/N) sum over phi: V -> [N] of prod M_{label e}(phi(tgt e), phi(src e))`.
pub fn traffic_state(t: &TestGraph, mats: &[Mat<Complex64>], n: usize) -> Result<Complex64> {
    map_sum(t, mats, n, false)
}

/// As [`traffic_state`], restricted to injective `phi`.
pub fn injective_traffic_state(t: &TestGraph, mats: &[Mat<Complex64>], n: usize) -> Result<Complex64> {
    map_sum(t, mats, n, true)
}

/// Running exponents of the entry classes met so far, with undo.
struct Tally {
    // (lo, hi) with lo <= hi -> (holomorphic, antiholomorphic); diagonal uses .0
    counts: HashMap<(usize, usize), (u32, u32)>,
    open: usize,
}

impl Tally {
    #[inline]
    fn key(a: usize, b: usize) -> ((usize, usize), bool) {
        if a <= b { ((a, b), true) } else { ((b, a), false) }
    }

    fn push(&mut self, a: usize, b: usize) {
        let (k, holo) = Self::key(a, b);
        let c = self.counts.entry(k).or_insert((0, 0));
        let before = c.0 + c.1;
        if holo { c.0 += 1 } else { c.1 += 1 }
        match before {
            0 => self.open += 1,
            1 => self.open -= 1,
            _ => {}
        }
    }

    fn pop(&mut self, a: usize, b: usize) {
        let (k, holo) = Self::key(a, b);
        let c = self.counts.get_mut(&k).expect("pushed before");
        if holo { c.0 -= 1 } else { c.1 -= 1 }
        match c.0 + c.1 {
            0 => {
                self.counts.remove(&k);
                self.open -= 1;
            }
            1 => self.open += 1,
            _ => {}
        }
    }

    fn expectation(&self, spec: &EntrySpec) -> Result<Complex64> {
        let mut val = Complex64::new(1.0, 0.0);
        for (&(lo, hi), &(p, q)) in &self.counts {
            if lo == hi {
                val *= spec.diagonal_moment((p + q) as usize)?;
            } else {
                val *= spec.mixed_moment(p as usize, q as usize)?;
            }
        }
        Ok(val)
    }

    fn open_classes(&self) -> Vec<(usize, usize)> {
        self.counts
            .iter()
            .filter(|(_, &(p, q))| p + q == 1)
            .map(|(&k, _)| k)
            .collect()
    }
}

/// `E[tau^0_N[T]]` for the family `W^{sigma_i}` built from one Wigner matrix.
///
/// The sum runs over injective vertex maps, pruning any partial map that leaves
/// more singly-used entry classes than there are edges left to pair them; a
/// class seen once has zero mean since both entry laws are centered.
pub fn expected_injective_traffic(
    t: &TestGraph,
    spec: &EntrySpec,
    perms: &[EntryPermutation],
    n: usize,
) -> Result<Complex64> {
    expected_injective_traffic_with_budget(t, spec, perms, n, SEARCH_BUDGET)
}

pub fn expected_injective_traffic_with_budget(
    t: &TestGraph,
    spec: &EntrySpec,
    perms: &[EntryPermutation],
    n: usize,
    budget: f64,
) -> Result<Complex64> {
    check_labels(t, perms.len())?;
    if let Some(p) = perms.iter().find(|p| p.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.n(),
        });
    }
    if t.vertices > n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (order, completed) = search_order(t);
    let mut remaining_after = vec![0usize; order.len()];
    let mut acc = 0;
    for step in (0..order.len()).rev() {
        remaining_after[step] = acc;
        acc += completed[step].len();
    }
    struct Ctx<'a> {
        t: &'a TestGraph,
        spec: &'a EntrySpec,
        perms: &'a [EntryPermutation],
        order: Vec<usize>,
        completed: Vec<Vec<usize>>,
        remaining_after: Vec<usize>,
        phi: Vec<usize>,
        used: Vec<bool>,
        tally: Tally,
        n: usize,
        work: f64,
        budget: f64,
    }
    impl Ctx<'_> {
        fn entry(&self, ei: usize) -> (usize, usize) {
            let e = self.t.edges[ei];
            self.perms[e.label].apply(self.phi[e.tgt], self.phi[e.src])
        }

        // values of phi(v) for which some completed edge lands in an open class
        fn forced_candidates(&self, step: usize, v: usize) -> Vec<usize> {
            let mut out = Vec::new();
            for (lo, hi) in self.tally.open_classes() {
                for (x, y) in [(lo, hi), (hi, lo)] {
                    for &ei in &self.completed[step] {
                        let e = self.t.edges[ei];
                        let (r, c) = self.perms[e.label].apply_inverse(x, y);
                        let cand = match (e.tgt == v, e.src == v) {
                            (true, true) => (r == c).then_some(r),
                            (true, false) => (c == self.phi[e.src]).then_some(r),
                            (false, true) => (r == self.phi[e.tgt]).then_some(c),
                            (false, false) => None,
                        };
                        if let Some(x) = cand {
                            out.push(x);
                        }
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        }

        fn rec(&mut self, step: usize) -> Result<Complex64> {
            if step == self.order.len() {
                return self.tally.expectation(self.spec);
            }
            let v = self.order[step];
            let m = self.completed[step].len();
            let rem = self.remaining_after[step];
            let open = self.tally.open;
            if open > m + rem {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let candidates: Vec<usize> = if open > rem {
                self.forced_candidates(step, v)
            } else {
                (0..self.n).collect()
            };
            self.work += candidates.len() as f64;
            if self.work > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "expected injective traffic search",
                    needed: self.work,
                    cap: self.budget,
                });
            }
            let mut total = Complex64::new(0.0, 0.0);
            for x in candidates {
                if self.used[x] {
                    continue;
                }
                self.phi[v] = x;
                self.used[x] = true;
                let edges = self.completed[step].clone();
                let entries: Vec<(usize, usize)> = edges.iter().map(|&ei| self.entry(ei)).collect();
                for &(a, b) in &entries {
                    self.tally.push(a, b);
                }
                if self.tally.open <= rem {
                    total += self.rec(step + 1)?;
                }
                for &(a, b) in entries.iter().rev() {
                    self.tally.pop(a, b);
                }
                self.used[x] = false;
            }
            Ok(total)
        }
    }
    let mut ctx = Ctx {
        t,
        spec,
        perms,
        order,
        completed,
        remaining_after,
        phi: vec![0; t.vertices],
        used: vec![false; n],
        tally: Tally {
            counts: HashMap::new(),
            open: 0,
        },
        n,
        work: 0.0,
        budget,
    };
    let total = ctx.rec(0)?;
    Ok(total / (n as f64).powf(1.0 + t.edges.len() as f64 / 2.0))
}

/// `E[tau_N[T]] = sum over vertex partitions pi of E[tau^0_N[T^pi]]`.
pub fn expected_traffic_by_mobius(
    t: &TestGraph,
    spec: &EntrySpec,
    perms: &[EntryPermutation],
    n: usize,
) -> Result<Complex64> {
    enumerate_partitions(t.vertices)
        .iter()
        .map(|pi| expected_injective_traffic(&quotient(t, pi)?, spec, perms, n))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Antiparallel twins.
    Opposing,
    /// Parallel twins.
    Congruent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinClass {
    /// Indices of the two edges in the graph's edge list.
    pub edges: (usize, usize),
    pub orientation: Orientation,
    pub labels: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleTreeReport {
    pub is_double_tree: bool,
    /// Empty unless `is_double_tree`.
    pub twin_classes: Vec<TwinClass>,
}

impl DoubleTreeReport {
    pub fn congruent_count(&self) -> usize {
        self.twin_classes
            .iter()
            .filter(|c| c.orientation == Orientation::Congruent)
            .count()
    }
}

/// Loop-free, every undirected class of multiplicity two, and the classes form
/// a tree.
pub fn classify_double_tree(t: &TestGraph) -> DoubleTreeReport {
    let no = DoubleTreeReport {
        is_double_tree: false,
        twin_classes: vec![],
    };
    if t.edges.iter().any(|e| e.src == e.tgt) {
        return no;
    }
    let mut classes: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, e) in t.edges.iter().enumerate() {
        classes.entry((e.src.min(e.tgt), e.src.max(e.tgt))).or_default().push(i);
    }
    // a connected graph whose simple graph has V - 1 edges is a tree
    if classes.values().any(|c| c.len() != 2) || classes.len() + 1 != t.vertices {
        return no;
    }
    let mut twin_classes: Vec<TwinClass> = classes
        .into_values()
        .map(|c| {
            let (a, b) = (t.edges[c[0]], t.edges[c[1]]);
            TwinClass {
                edges: (c[0], c[1]),
                orientation: if a.src == b.tgt {
                    Orientation::Opposing
                } else {
                    Orientation::Congruent
                },
                labels: (a.label, b.label),
            }
        })
        .collect();
    twin_classes.sort_by_key(|c| c.edges);
    DoubleTreeReport {
        is_double_tree: true,
        twin_classes,
    }
}

/// Limit of the injective state for a semicircular traffic family: zero off
/// double trees, otherwise the product of `K` over opposing twins and `J` over
/// congruent twins.
pub fn predicted_injective(t: &TestGraph, cov: &CovarianceSpec) -> Result<f64> {
    check_labels(t, cov.labels())?;
    let rep = classify_double_tree(t);
    if !rep.is_double_tree {
        return Ok(0.0);
    }
    Ok(rep
        .twin_classes
        .iter()
        .map(|c| {
            let (i, j) = c.labels;
            match c.orientation {
                Orientation::Opposing => cov.k[i][j],
                Orientation::Congruent => cov.j[i][j],
            }
        })
        .product())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleQuotient {
    pub partition: VertexPartition,
    pub graph: TestGraph,
}

/// Every vertex partition of the directed `n`-cycle (edge `k` labeled `k`)
/// whose quotient is a double tree.
pub fn cycle_quotient_double_trees(n: usize) -> Result<Vec<CycleQuotient>> {
    if n == 0 || n > CYCLE_QUOTIENT_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "cycle length {n} outside 1..={CYCLE_QUOTIENT_MAX_N}"
        )));
    }
    let cycle = TestGraph::cycle(&(0..n).collect::<Vec<_>>())?;
    let mut out = Vec::new();
    for pi in enumerate_partitions(n) {
        let g = quotient(&cycle, &pi)?;
        if classify_double_tree(&g).is_double_tree {
            out.push(CycleQuotient { partition: pi, graph: g });
        }
    }
    Ok(out)
}
