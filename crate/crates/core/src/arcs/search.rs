//! Backtracking arc extension with a forbidden-point bitmask.
//!
//! Points are added in increasing order, so every arc is visited exactly
//! once as its sorted point list. A point is a candidate when it lies on no
//! secant of the current arc. The exhaustive search splits the tree by the
//! first two points; the randomized search relabels the points at random on
//! each restart and reports the first oval it reaches.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{classify_oval, KArc, OvalClass};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::plane::Plane;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Node budget of a randomized search.
    pub budget: u64,
    pub seed: u64,
    /// Classify every oval found (Desarguesian planes only).
    pub classify: bool,
    /// Keep the ovals themselves, not just counts.
    pub collect: bool,
    /// Allow exhaustive search above order 9.
    pub long: bool,
}

impl SearchOptions {
    pub fn exhaustive() -> Self {
        SearchOptions { mode: SearchMode::Exhaustive, budget: 0, seed: 0, classify: false, collect: false, long: false }
    }

    pub fn random(budget: u64, seed: u64) -> Self {
        SearchOptions { mode: SearchMode::Random, budget, seed, ..SearchOptions::exhaustive() }
    }

    pub fn classify(mut self, yes: bool) -> Self {
        self.classify = yes;
        self
    }

    pub fn collect(mut self, yes: bool) -> Self {
        self.collect = yes;
        self
    }
}

/// Nodes a single randomized restart may expand.
pub const RESTART_NODES: u64 = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// Every arc was visited.
    Complete,
    /// Budget spent; at least one oval was found.
    Sampled,
    /// Budget spent without finding an oval.
    BudgetExceeded,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub conic: u64,
    pub pointed_conic: u64,
    pub irregular: u64,
}

impl ClassCounts {
    pub fn get(&self, c: OvalClass) -> u64 {
        match c {
            OvalClass::Conic => self.conic,
            OvalClass::PointedConic => self.pointed_conic,
            OvalClass::Irregular => self.irregular,
        }
    }

    fn bump(&mut self, c: OvalClass) {
        match c {
            OvalClass::Conic => self.conic += 1,
            OvalClass::PointedConic => self.pointed_conic += 1,
            OvalClass::Irregular => self.irregular += 1,
        }
    }

    fn merge(&mut self, o: &ClassCounts) {
        self.conic += o.conic;
        self.pointed_conic += o.pointed_conic;
        self.irregular += o.irregular;
    }

    pub fn found(&self) -> BTreeSet<OvalClass> {
        OvalClass::ALL.into_iter().filter(|&c| self.get(c) > 0).collect()
    }
}

/// Census of (d+1)- and (d+2)-arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OvalCensus {
    pub plane: String,
    pub order: usize,
    pub mode: SearchMode,
    pub status: SearchStatus,
    pub nodes: u64,
    pub ovals: u64,
    pub hyperovals: u64,
    pub classes: Option<ClassCounts>,
    /// First oval of each class in search order.
    pub witnesses: BTreeMap<OvalClass, Vec<usize>>,
    /// All ovals found, when collected.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oval_list: Option<Vec<KArc>>,
}

impl OvalCensus {
    pub fn to_text(&self) -> String {
        let mut s =
            format!("oval census {} (order {}), {:?} search: {:?}\n", self.plane, self.order, self.mode, self.status);
        s += &format!("  nodes: {}\n", self.nodes);
        s += &format!("  ovals ({}-arcs): {}\n", self.order + 1, self.ovals);
        s += &format!("  hyperovals ({}-arcs): {}\n", self.order + 2, self.hyperovals);
        if let Some(c) = &self.classes {
            for class in OvalClass::ALL {
                s += &format!("  {class}: {}\n", c.get(class));
            }
        }
        for (class, w) in &self.witnesses {
            s += &format!("  first {class}: {w:?}\n");
        }
        s
    }
}

#[derive(Default)]
struct Partial {
    nodes: u64,
    ovals: u64,
    hyperovals: u64,
    classes: ClassCounts,
    witnesses: BTreeMap<OvalClass, Vec<usize>>,
    list: Vec<KArc>,
    error: Option<Error>,
}

impl Partial {
    fn merge(&mut self, o: Partial) {
        self.nodes += o.nodes;
        self.ovals += o.ovals;
        self.hyperovals += o.hyperovals;
        self.classes.merge(&o.classes);
        for (k, v) in o.witnesses {
            self.witnesses.entry(k).or_insert(v);
        }
        self.list.extend(o.list);
        if self.error.is_none() {
            self.error = o.error;
        }
    }
}

/// Bitmask view of a plane under a relabeling of its points.
struct Masks<const W: usize> {
    label_to_point: Vec<usize>,
    lines: Vec<[u64; W]>,
    /// Labels strictly greater than the index.
    above: Vec<[u64; W]>,
    target: usize,
    max: usize,
}

fn or<const W: usize>(a: &mut [u64; W], b: &[u64; W]) {
    for i in 0..W {
        a[i] |= b[i];
    }
}

fn popcount<const W: usize>(a: &[u64; W]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

impl<const W: usize> Masks<W> {
    fn new(plane: &Plane, label_to_point: Vec<usize>) -> Self {
        let n = plane.num_points();
        assert!(n <= 64 * W);
        let mut point_to_label = vec![0; n];
        for (l, &p) in label_to_point.iter().enumerate() {
            point_to_label[p] = l;
        }
        let lines = plane
            .lines()
            .iter()
            .map(|line| {
                let mut m = [0u64; W];
                for &p in line {
                    let l = point_to_label[p as usize];
                    m[l / 64] |= 1 << (l % 64);
                }
                m
            })
            .collect();
        let above = (0..n)
            .map(|i| {
                let mut m = [0u64; W];
                for l in i + 1..n {
                    m[l / 64] |= 1 << (l % 64);
                }
                m
            })
            .collect();
        let d = plane.order();
        let max = if d.is_multiple_of(2) { d + 2 } else { d + 1 };
        Masks { label_to_point, lines, above, target: d + 1, max }
    }

    fn secant(&self, plane: &Plane, a: usize, b: usize) -> &[u64; W] {
        let l = plane.join(self.label_to_point[a], self.label_to_point[b]).expect("distinct points");
        &self.lines[l]
    }

    /// Depth-first extension of `arc`. `visit` sees each arc of size at
    /// least d+1 and returns false to stop; the return value says whether
    /// the search ran to completion.
    fn extend(
        &self,
        plane: &Plane,
        arc: &mut Vec<usize>,
        forbidden: [u64; W],
        nodes: &mut u64,
        limit: u64,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let k = arc.len();
        if k >= self.target && !visit(arc) {
            return false;
        }
        if k == self.max {
            return true;
        }
        let last = *arc.last().expect("arcs start with two points");
        let mut cand = self.above[last];
        for i in 0..W {
            cand[i] &= !forbidden[i];
        }
        let need = self.target.saturating_sub(k).max(1);
        let total = popcount(&cand);
        if total < need {
            return true;
        }
        let mut seen = 0;
        for (wi, &word) in cand.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                if total - seen < need {
                    return true;
                }
                if *nodes >= limit {
                    return false;
                }
                *nodes += 1;
                let x = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                seen += 1;
                let mut next = forbidden;
                for &s in arc.iter() {
                    or(&mut next, self.secant(plane, s, x));
                }
                arc.push(x);
                let go_on = self.extend(plane, arc, next, nodes, limit, visit);
                arc.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    fn points_of(&self, arc: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = arc.iter().map(|&l| self.label_to_point[l]).collect();
        v.sort_unstable();
        v
    }
}

fn record(plane: &Plane, opts: &SearchOptions, pts: Vec<usize>, out: &mut Partial) {
    if pts.len() == plane.order() + 1 {
        out.ovals += 1;
        if opts.classify && out.error.is_none() {
            match classify_oval(plane, &pts) {
                Ok(c) => {
                    out.classes.bump(c.class);
                    out.witnesses.entry(c.class).or_insert_with(|| pts.clone());
                }
                Err(e) => out.error = Some(e),
            }
        }
        if opts.collect {
            out.list.push(KArc::from_points(pts));
        }
    } else {
        out.hyperovals += 1;
    }
}

fn exhaustive<const W: usize>(plane: &Plane, opts: &SearchOptions, exec: &Exec) -> Partial {
    let n = plane.num_points();
    let masks = Masks::<W>::new(plane, (0..n).collect());
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let parts = exec.map(&pairs, |&(a, b)| {
        let mut out = Partial::default();
        let mut arc = vec![a, b];
        let forbidden = *masks.secant(plane, a, b);
        let mut nodes = 0;
        masks.extend(plane, &mut arc, forbidden, &mut nodes, u64::MAX, &mut |arc| {
            record(plane, opts, masks.points_of(arc), &mut out);
            true
        });
        out.nodes = nodes;
        out
    });
    let mut total = Partial::default();
    for p in parts {
        total.merge(p);
    }
    total
}

/// One restart: a random relabeling, then the first oval in label order.
fn restart<const W: usize>(plane: &Plane, seed: u64, index: u64, limit: u64) -> (u64, Option<Vec<usize>>) {
    let n = plane.num_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let masks = Masks::<W>::new(plane, order);
    let mut nodes = 0;
    let mut found = None;
    for a in 0..n {
        for b in a + 1..n {
            if nodes >= limit || found.is_some() {
                return (nodes, found);
            }
            let mut arc = vec![a, b];
            let forbidden = *masks.secant(plane, a, b);
            masks.extend(plane, &mut arc, forbidden, &mut nodes, limit, &mut |arc| {
                if arc.len() == masks.target {
                    found = Some(masks.points_of(arc));
                    return false;
                }
                true
            });
        }
    }
    (nodes, found)
}

fn random<const W: usize>(plane: &Plane, opts: &SearchOptions, exec: &Exec) -> Partial {
    let restarts = opts.budget.div_ceil(RESTART_NODES);
    let results = exec.map_range(restarts as usize, |i| {
        let limit = RESTART_NODES.min(opts.budget - i as u64 * RESTART_NODES);
        restart::<W>(plane, opts.seed, i as u64, limit)
    });
    let mut out = Partial::default();
    let mut seen = BTreeSet::new();
    for (nodes, found) in results {
        out.nodes += nodes;
        if let Some(pts) = found {
            if seen.insert(pts.clone()) {
                record(plane, opts, pts, &mut out);
            }
        }
    }
    out
}

/// Searches a plane for ovals and hyperovals.
pub fn search_ovals(plane: &Plane, opts: &SearchOptions, exec: &Exec) -> Result<OvalCensus> {
    if opts.classify && plane.field().is_none() {
        return Err(Error::NotDesarguesian);
    }
    if opts.mode == SearchMode::Exhaustive && plane.order() > 9 && !opts.long {
        return Err(Error::InvalidArgument(format!("exhaustive search of order {} needs long mode", plane.order())));
    }
    let n = plane.num_points();
    let run = |w: usize| -> Partial {
        match (opts.mode, w) {
            (SearchMode::Exhaustive, 2) => exhaustive::<2>(plane, opts, exec),
            (SearchMode::Exhaustive, 5) => exhaustive::<5>(plane, opts, exec),
            (SearchMode::Exhaustive, _) => exhaustive::<17>(plane, opts, exec),
            (SearchMode::Random, 2) => random::<2>(plane, opts, exec),
            (SearchMode::Random, 5) => random::<5>(plane, opts, exec),
            (SearchMode::Random, _) => random::<17>(plane, opts, exec),
        }
    };
    let words = match n {
        0..=128 => 2,
        129..=320 => 5,
        321..=1088 => 17,
        _ => return Err(Error::OrderTooLarge { order: plane.order() as u64, max: 32 }),
    };
    let p = run(words);
    if let Some(e) = p.error {
        return Err(e);
    }
    let status = match opts.mode {
        SearchMode::Exhaustive => SearchStatus::Complete,
        SearchMode::Random if p.ovals > 0 => SearchStatus::Sampled,
        SearchMode::Random => SearchStatus::BudgetExceeded,
    };
    Ok(OvalCensus {
        plane: plane.name().to_string(),
        order: plane.order(),
        mode: opts.mode,
        status,
        nodes: p.nodes,
        ovals: p.ovals,
        hyperovals: p.hyperovals,
        classes: opts.classify.then_some(p.classes),
        witnesses: p.witnesses,
        oval_list: opts.collect.then_some(p.list),
    })
}
