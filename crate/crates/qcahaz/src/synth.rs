//! Sum-of-products to QCA layout synthesis, plus the built-in demonstration
//! layouts and small primitive layouts used for engine verification.
//!
//! ## Floorplan
//!
//! The synthesized layout is a three-stage pipeline on the pitch grid:
//!
//! * **Distribution (clock zone 0).** Input cells sit on header rows at the
//!   top. Each variable drops one or more vertical trunk wires that are
//!   tapped eastward at the product terms using it; complemented taps pass
//!   through a two-cell diagonal inverter.
//! * **AND stage (zone 1).** Each term is a horizontal majority-gate chain:
//!   the first literal seeds the chain and every further literal descends
//!   into the north port of a majority device whose south port is a fixed -1
//!   cell, computing the running AND.
//! * **OR stage + output (zone 2).** Term results run east into a vertical
//!   spine of majority devices with fixed +1 east ports, ORing the terms top
//!   to bottom. The result exits south through a short tail to the labeled
//!   output cell.
//!
//! Wire crossings cannot be built in a single standard-cell layer, so column
//! placement is searched in three tiers: one shared trunk per variable, a
//! shared-trunk plan with one term-0 literal fed from a drop east of the OR
//! spine, and finally one dedicated trunk per tap (grouped by term, deepest
//! term westmost) with header heights ordered by span containment. Unrelated
//! wires keep at least two pitches of separation, which makes stray coupling
//! two orders of magnitude weaker than the intended one-pitch couplings; a
//! coupling audit rejects any candidate violating that. Tap patterns no tier
//! can route are reported as unroutable rather than silently misplaced.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::layout::{CellRole, Geometry, QcaCell, QcaLayout};
use crate::sop::Cover;

/// Synthesis accepts at most this many variables.
pub const MAX_SYNTH_VARIABLES: usize = 8;

/// Trunk columns are three pitches apart.
const COL: i64 = 3;
/// Lanes within a row block are three pitches apart.
const LANE: i64 = 3;
/// Majority devices along a chain are four pitches apart.
const DEV: i64 = 4;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("constant cover cannot be synthesized")]
    ConstantCover,
    #[error("cover has {0} variables; synthesis is capped at {MAX_SYNTH_VARIABLES}")]
    TooManyVariables(usize),
    #[error("no crossing-free placement found for this cover under the column floorplan")]
    NotRoutable,
    #[error("bad geometry: {0}")]
    BadGeometry(String),
}

/// The two built-in demonstration layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoKind {
    /// The two-term cover with a static-1 hazard.
    WithHazard,
    /// The consensus-cured three-term cover.
    HazardFree,
}

#[derive(Debug, Clone)]
struct BuildCell {
    g: (i64, i64),
    zone: u8,
    role: CellRole,
}

#[derive(Debug, Default)]
struct Builder {
    cells: Vec<BuildCell>,
    index: BTreeMap<(i64, i64), usize>,
    intended: BTreeSet<((i64, i64), (i64, i64))>,
}

fn pair_key(a: (i64, i64), b: (i64, i64)) -> ((i64, i64), (i64, i64)) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Builder {
    fn push(&mut self, g: (i64, i64), zone: u8, role: CellRole) -> Result<(), String> {
        if self.index.contains_key(&g) {
            return Err(format!("cell collision at {g:?}"));
        }
        self.index.insert(g, self.cells.len());
        self.cells.push(BuildCell { g, zone, role });
        Ok(())
    }

    fn link(&mut self, a: (i64, i64), b: (i64, i64)) {
        self.intended.insert(pair_key(a, b));
    }

    /// Pushes a path of cells, linking consecutive pairs. The first point may
    /// already exist (junction), in which case it is only linked.
    fn path<F>(&mut self, points: &[(i64, i64)], zone_of: F) -> Result<(), String>
    where
        F: Fn((i64, i64)) -> u8,
    {
        for (i, &g) in points.iter().enumerate() {
            if i == 0 && self.index.contains_key(&g) {
                // junction with an existing wire
            } else {
                self.push(g, zone_of(g), CellRole::Normal)?;
            }
            if i > 0 {
                self.link(points[i - 1], g);
            }
        }
        Ok(())
    }

    /// Every cell pair closer than two pitches must be an intended coupling.
    /// Diagonal pairs that share a linked neighbor (wire corners, junctions,
    /// gate ports around a device) are inherent to connected material and
    /// weakly coupled, so they pass.
    fn audit(&self) -> Result<(), String> {
        let mut adjacency: BTreeMap<(i64, i64), Vec<(i64, i64)>> = BTreeMap::new();
        for &(a, b) in &self.intended {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
        let corner_of_same_net = |a: (i64, i64), b: (i64, i64)| -> bool {
            adjacency
                .get(&a)
                .map(|na| {
                    na.iter().any(|c| {
                        adjacency
                            .get(&b)
                            .map(|nb| nb.contains(c))
                            .unwrap_or(false)
                    })
                })
                .unwrap_or(false)
        };
        for (i, a) in self.cells.iter().enumerate() {
            for b in self.cells.iter().skip(i + 1) {
                let dx = a.g.0 - b.g.0;
                let dy = a.g.1 - b.g.1;
                let d2 = dx * dx + dy * dy;
                if d2 >= 4 || self.intended.contains(&pair_key(a.g, b.g)) {
                    continue;
                }
                if d2 == 2 && corner_of_same_net(a.g, b.g) {
                    continue;
                }
                return Err(format!(
                    "unintended coupling between {:?} and {:?}",
                    a.g, b.g
                ));
            }
        }
        Ok(())
    }
}

/// One literal occurrence with its routing geometry.
#[derive(Debug, Clone, Copy)]
struct LaneGeo {
    var: usize,
    complemented: bool,
    /// Lane index within the row; 0 is the chain seed.
    index: usize,
    /// West trunk column (grid x), or the drop column for east feeds.
    col_x: i64,
    east: bool,
}

/// Top-band wiring for one variable.
#[derive(Debug, Clone)]
struct HeaderGeo {
    /// Header row height (grid y).
    y: i64,
    /// Input cell column; the header runs east from here.
    x_input: i64,
    /// Eastmost extent of the header run (equals `x_input` when unused).
    x_end: i64,
    /// Trunk columns hanging from this header (west side).
    trunk_xs: Vec<i64>,
}

struct PlanGeo {
    rows: Vec<Vec<LaneGeo>>,
    headers: Vec<HeaderGeo>,
    /// Total west-side column count; fixes the inverter hop column.
    col_count: i64,
}

/// Compiles a cover into a QCA layout. Fails on constant covers, more than
/// [`MAX_SYNTH_VARIABLES`] variables, or tap patterns no placement tier can
/// route without crossings.
pub fn synthesize_sop(cover: &Cover, geom: &Geometry) -> Result<QcaLayout, SynthError> {
    geom.validate()
        .map_err(|e| SynthError::BadGeometry(e.to_string()))?;
    if cover.is_structurally_constant() {
        return Err(SynthError::ConstantCover);
    }
    let n = cover.var_count();
    if n > MAX_SYNTH_VARIABLES {
        return Err(SynthError::TooManyVariables(n));
    }

    let terms: Vec<Vec<(usize, bool)>> = cover
        .terms()
        .iter()
        .map(|t| {
            t.literals()
                .iter()
                .map(|l| (l.variable, l.complemented))
                .collect()
        })
        .collect();

    // Tier 1: one shared trunk per variable.
    let mut found = for_each_permutation(n, |perm| {
        let plan = plan_shared(&terms, perm, None)?;
        build_layout(cover, geom, &plan).ok()
    });
    // Tier 2: shared trunks plus one term-0 literal fed from an east drop.
    if found.is_none() && terms[0].len() >= 2 {
        for east_idx in 0..terms[0].len() {
            found = for_each_permutation(n, |perm| {
                let plan = plan_shared(&terms, perm, Some(east_idx))?;
                build_layout(cover, geom, &plan).ok()
            });
            if found.is_some() {
                break;
            }
        }
    }
    // Tier 3: one dedicated trunk per tap.
    if found.is_none() {
        for zigzag in [false, true] {
            found = for_each_permutation(n, |perm| {
                let plan = plan_duplicated(&terms, perm, zigzag)?;
                build_layout(cover, geom, &plan).ok()
            });
            if found.is_some() {
                break;
            }
        }
    }
    found.ok_or(SynthError::NotRoutable)
}

/// Runs `f` over permutations of `0..n` in lexicographic order, returning the
/// first success.
fn for_each_permutation<T>(n: usize, mut f: impl FnMut(&[usize]) -> Option<T>) -> Option<T> {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if let Some(t) = f(&perm) {
            return Some(t);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn chain_heights(rows: &[Vec<LaneGeo>]) -> Vec<i64> {
    let mut y = Vec::with_capacity(rows.len());
    let mut current = 0i64;
    for lanes in rows {
        current -= LANE * (lanes.len() as i64 - 1) + 4;
        y.push(current);
    }
    y
}

fn lane_y(y_chain: &[i64], row: usize, lane_index: usize) -> i64 {
    y_chain[row] + LANE * lane_index as i64
}

/// The y of a tap run inside the trunk band (one below the lane when the
/// inverter hop shifts it up).
fn tap_run_y(y_chain: &[i64], row: usize, lane: &LaneGeo) -> i64 {
    let y = lane_y(y_chain, row, lane.index);
    if lane.complemented {
        y - 1
    } else {
        y
    }
}

/// Shared-trunk plan: one column per variable in `perm` order, optionally
/// feeding row-0 literal `east_idx` from a drop east of the OR spine.
fn plan_shared(
    terms: &[Vec<(usize, bool)>],
    perm: &[usize],
    east_idx: Option<usize>,
) -> Option<PlanGeo> {
    let n = perm.len();
    let mut x_of = vec![0i64; n];
    for (pos, &v) in perm.iter().enumerate() {
        x_of[v] = pos as i64 * COL;
    }

    let mut rows: Vec<Vec<LaneGeo>> = Vec::with_capacity(terms.len());
    let mut east_var: Option<(usize, bool)> = None;
    for (r, term) in terms.iter().enumerate() {
        let mut west: Vec<(usize, bool)> = Vec::new();
        for (i, &(v, c)) in term.iter().enumerate() {
            if r == 0 && east_idx == Some(i) {
                east_var = Some((v, c));
            } else {
                west.push((v, c));
            }
        }
        if west.is_empty() {
            return None;
        }
        west.sort_by_key(|&(v, _)| x_of[v]);
        let mut lanes: Vec<LaneGeo> = west
            .iter()
            .enumerate()
            .map(|(j, &(v, c))| LaneGeo {
                var: v,
                complemented: c,
                index: j,
                col_x: x_of[v],
                east: false,
            })
            .collect();
        if r == 0 {
            if let Some((v, c)) = east_var {
                // The single east-fed literal takes the top lane so its
                // westward run passes no north-port descents.
                lanes.push(LaneGeo {
                    var: v,
                    complemented: c,
                    index: lanes.len(),
                    col_x: 0, // patched below once the spine column is known
                    east: true,
                });
            }
        }
        rows.push(lanes);
    }

    let col_count = n as i64;
    let x_or = or_column(&rows, col_count);
    for lanes in &mut rows {
        for lane in lanes.iter_mut().filter(|l| l.east) {
            lane.col_x = x_or + 3;
        }
    }

    finish_plan(rows, col_count, &x_of)
}

/// Duplicated-trunk plan: one column per tap, grouped by term with the
/// deepest term westmost. `zigzag` reverses the in-group variable order on
/// alternating groups, which nests header spans for cyclic tap patterns.
fn plan_duplicated(
    terms: &[Vec<(usize, bool)>],
    perm: &[usize],
    zigzag: bool,
) -> Option<PlanGeo> {
    let n = perm.len();
    let mut order_of = vec![0usize; n];
    for (pos, &v) in perm.iter().enumerate() {
        order_of[v] = pos;
    }

    let m = terms.len();
    let mut rows: Vec<Vec<LaneGeo>> = vec![Vec::new(); m];
    let mut next_col = 0i64;
    // Column groups west to east: deepest row first, so a tap run only ever
    // passes columns that are already dead at its height.
    for r in (0..m).rev() {
        let mut lits = terms[r].clone();
        lits.sort_by_key(|&(v, _)| order_of[v]);
        if zigzag && r % 2 == 1 {
            lits.reverse();
        }
        rows[r] = lits
            .iter()
            .enumerate()
            .map(|(j, &(v, c))| LaneGeo {
                var: v,
                complemented: c,
                index: j,
                col_x: (next_col + j as i64) * COL,
                east: false,
            })
            .collect();
        next_col += lits.len() as i64;
    }

    // Input column per variable: its westmost trunk.
    let mut x_of = vec![i64::MAX; n];
    for lanes in &rows {
        for lane in lanes {
            x_of[lane.var] = x_of[lane.var].min(lane.col_x);
        }
    }

    finish_plan(rows, next_col, &x_of)
}

/// Shared planning tail: trunk-band crossing checks, header spans, and
/// containment-ordered header heights.
fn finish_plan(rows: Vec<Vec<LaneGeo>>, col_count: i64, x_input: &[i64]) -> Option<PlanGeo> {
    let n = x_input.len();
    let y_chain = chain_heights(&rows);

    // Trunk extents per column.
    let mut deepest: BTreeMap<i64, i64> = BTreeMap::new();
    for (r, lanes) in rows.iter().enumerate() {
        for lane in lanes.iter().filter(|l| !l.east) {
            let run_y = tap_run_y(&y_chain, r, lane);
            let d = deepest.entry(lane.col_x).or_insert(i64::MAX);
            *d = (*d).min(run_y);
        }
    }

    // A tap run must clear every live trunk east of its own column by at
    // least two pitches.
    for (r, lanes) in rows.iter().enumerate() {
        for lane in lanes.iter().filter(|l| !l.east) {
            let run_y = tap_run_y(&y_chain, r, lane);
            for (&x, &deep) in &deepest {
                if x <= lane.col_x {
                    continue;
                }
                if deep < run_y + 2 {
                    return None;
                }
            }
        }
    }

    // Header spans: input column to eastmost hanging column (west trunks
    // plus the east drop when present).
    let mut span_end = x_input.to_vec();
    let mut trunk_xs: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); n];
    let mut hang_xs: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); n];
    for lanes in &rows {
        for lane in lanes {
            hang_xs[lane.var].insert(lane.col_x);
            span_end[lane.var] = span_end[lane.var].max(lane.col_x);
            if !lane.east {
                trunk_xs[lane.var].insert(lane.col_x);
            }
        }
    }

    // Height order by span containment: a header running over a foreign
    // hanging column must sit above that column's header.
    let mut above: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let covers = hang_xs[v]
                .iter()
                .any(|&x| x > x_input[u] && x < span_end[u]);
            if covers {
                above[u].insert(v);
            }
        }
    }
    // Kahn order from the top, smallest variable index first; a containment
    // cycle means this candidate cannot be routed.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let mut picked = None;
        for v in 0..n {
            if placed[v] {
                continue;
            }
            let blocked = (0..n).any(|u| !placed[u] && u != v && above[u].contains(&v));
            if !blocked {
                picked = Some(v);
                break;
            }
        }
        match picked {
            Some(v) => {
                placed[v] = true;
                order.push(v);
            }
            None => return None,
        }
    }
    let headers: Vec<HeaderGeo> = (0..n)
        .map(|v| {
            let rank = order.iter().position(|&u| u == v).unwrap() as i64;
            HeaderGeo {
                y: 2 + 2 * (n as i64 - 1 - rank),
                x_input: x_input[v],
                x_end: span_end[v],
                trunk_xs: trunk_xs[v].iter().copied().collect(),
            }
        })
        .collect();

    Some(PlanGeo {
        rows,
        headers,
        col_count,
    })
}

/// The OR spine column for a given lane structure.
fn or_column(rows: &[Vec<LaneGeo>], col_count: i64) -> i64 {
    let x_hop = COL * (col_count - 1) + 2;
    let x_and = x_hop + 4;
    let max_k = rows.iter().map(|r| r.len()).max().unwrap() as i64;
    let chain_reach = if max_k >= 2 {
        x_and + (max_k - 2) * DEV + 1
    } else {
        x_and
    };
    chain_reach + 3
}

fn build_layout(cover: &Cover, geom: &Geometry, plan: &PlanGeo) -> Result<QcaLayout, String> {
    let rows = &plan.rows;
    let y_chain = chain_heights(rows);

    let x_hop = COL * (plan.col_count - 1) + 2;
    let x_and = x_hop + 4;
    let x_or = or_column(rows, plan.col_count);
    let dev_x = |lane_index: usize| x_and + (lane_index as i64 - 1) * DEV;

    let zone_of_chain = move |g: (i64, i64)| -> u8 {
        if g.0 < x_and - 1 {
            0
        } else if g.0 < x_or - 1 {
            1
        } else {
            2
        }
    };

    let mut b = Builder::default();

    // 1. Input cells, in variable order so the simulator drives them as the
    // most-significant-first binary counter.
    for (v, h) in plan.headers.iter().enumerate() {
        b.push(
            (h.x_input, h.y),
            0,
            CellRole::Input(cover.variables()[v].name.clone()),
        )?;
    }

    // 2. Header runs east of the input cell.
    for h in &plan.headers {
        if h.x_end > h.x_input {
            let pts: Vec<(i64, i64)> = (h.x_input..=h.x_end).map(|x| (x, h.y)).collect();
            b.path(&pts, |_| 0)?;
        }
    }

    // 3. Trunks from the header band down to each column's deepest tap.
    let mut deepest: BTreeMap<i64, i64> = BTreeMap::new();
    for (r, lanes) in rows.iter().enumerate() {
        for lane in lanes.iter().filter(|l| !l.east) {
            let run_y = tap_run_y(&y_chain, r, lane);
            let d = deepest.entry(lane.col_x).or_insert(i64::MAX);
            *d = (*d).min(run_y);
        }
    }
    for h in &plan.headers {
        for &x in &h.trunk_xs {
            let deep = deepest[&x];
            let pts: Vec<(i64, i64)> = (deep..=h.y).rev().map(|y| (x, y)).collect();
            b.path(&pts, |_| 0)?;
        }
    }

    // 4. Lanes.
    for (r, lanes) in rows.iter().enumerate() {
        let yc = y_chain[r];
        for lane in lanes {
            let ly = lane_y(&y_chain, r, lane.index);
            if lane.east {
                // Drop from the header east of the spine, optional inverter
                // hop, run west to the device column, then descend toward
                // the north port.
                let xe = lane.col_x;
                let cx = dev_x(lane.index);
                let top = plan.headers[lane.var].y;
                if lane.complemented {
                    let pre: Vec<(i64, i64)> =
                        (ly + 1..=top).rev().map(|y| (xe, y)).collect();
                    b.path(&pre, |_| 0)?;
                    b.link((xe, ly + 1), (xe - 1, ly));
                    let mut west: Vec<(i64, i64)> =
                        (cx..=xe - 1).rev().map(|x| (x, ly)).collect();
                    west.extend((yc + 2..ly).rev().map(|y| (cx, y)));
                    b.path(&west, |_| 0)?;
                } else {
                    let mut pts: Vec<(i64, i64)> =
                        (ly..=top).rev().map(|y| (xe, y)).collect();
                    pts.extend((cx..xe).rev().map(|x| (x, ly)));
                    pts.extend((yc + 2..ly).rev().map(|y| (cx, y)));
                    b.path(&pts, |_| 0)?;
                }
            } else if lane.index == 0 {
                // Chain seed: built with the chain below.
            } else {
                let xw = lane.col_x;
                let cx = dev_x(lane.index);
                if lane.complemented {
                    let pre: Vec<(i64, i64)> = (xw..=x_hop).map(|x| (x, ly - 1)).collect();
                    b.path(&pre, |_| 0)?;
                    b.link((x_hop, ly - 1), (x_hop + 1, ly));
                    let mut post: Vec<(i64, i64)> =
                        (x_hop + 1..=cx).map(|x| (x, ly)).collect();
                    post.extend((yc + 2..ly).rev().map(|y| (cx, y)));
                    b.path(&post, |_| 0)?;
                } else {
                    let mut pts: Vec<(i64, i64)> = (xw..=cx).map(|x| (x, ly)).collect();
                    pts.extend((yc + 2..ly).rev().map(|y| (cx, y)));
                    b.path(&pts, |_| 0)?;
                }
            }
        }
    }

    // 5. Chains: seed run plus AND devices, extending east to the OR stage
    // (row 0 turns down into the spine; other rows stop at the west port).
    let m = rows.len();
    for (r, lanes) in rows.iter().enumerate() {
        let yc = y_chain[r];
        let seed = &lanes[0];
        let xw = seed.col_x;
        let x_end = if m == 1 {
            x_or + 3
        } else if r == 0 {
            x_or
        } else {
            x_or - 1
        };
        if seed.complemented {
            let pre: Vec<(i64, i64)> = (xw..=x_hop).map(|x| (x, yc - 1)).collect();
            b.path(&pre, |_| 0)?;
            b.link((x_hop, yc - 1), (x_hop + 1, yc));
            let post: Vec<(i64, i64)> = (x_hop + 1..=x_end).map(|x| (x, yc)).collect();
            b.path(&post, zone_of_chain)?;
        } else {
            let pts: Vec<(i64, i64)> = (xw..=x_end).map(|x| (x, yc)).collect();
            b.path(&pts, zone_of_chain)?;
        }

        // AND devices: north port joins the descent, south port is fixed -1.
        for lane in lanes.iter().skip(1) {
            let cx = dev_x(lane.index);
            b.push((cx, yc + 1), 1, CellRole::Normal)?;
            b.push((cx, yc - 1), 1, CellRole::Fixed(-1))?;
            b.link((cx, yc + 2), (cx, yc + 1));
            b.link((cx, yc + 1), (cx, yc));
            b.link((cx, yc - 1), (cx, yc));
            for port in [(cx, yc + 1), (cx, yc - 1)] {
                b.link((cx - 1, yc), port);
                b.link((cx + 1, yc), port);
            }
        }
    }

    // 6. OR spine and output tail.
    let (tail_x, tail_y) = if m == 1 {
        (x_or + 3, y_chain[0])
    } else {
        let y_bottom = y_chain[m - 1] - 2;
        let pts: Vec<(i64, i64)> = (y_bottom..y_chain[0]).rev().map(|y| (x_or, y)).collect();
        b.path(&pts, |_| 2)?;
        b.link((x_or, y_chain[0]), (x_or, y_chain[0] - 1));
        for &yc in y_chain.iter().skip(1) {
            b.push((x_or + 1, yc), 2, CellRole::Fixed(1))?;
            b.link((x_or - 1, yc), (x_or, yc));
            b.link((x_or + 1, yc), (x_or, yc));
            for port in [(x_or, yc + 1), (x_or, yc - 1)] {
                b.link((x_or - 1, yc), port);
                b.link((x_or + 1, yc), port);
            }
        }
        let tail: Vec<(i64, i64)> = (x_or..=x_or + 4).map(|x| (x, y_bottom)).collect();
        b.path(&tail, |_| 2)?;
        (x_or + 4, y_bottom)
    };

    let out_idx = b.index[&(tail_x, tail_y)];
    b.cells[out_idx].role = CellRole::Output("f".into());

    b.audit()?;

    let p = geom.pitch;
    let cells: Vec<QcaCell> = b
        .cells
        .iter()
        .map(|c| QcaCell {
            x: c.g.0 as f64 * p,
            y: c.g.1 as f64 * p,
            rotation: crate::layout::Rotation::Standard,
            zone: c.zone,
            role: c.role.clone(),
        })
        .collect();
    Ok(QcaLayout::new(format!("synth: {cover}"), *geom, cells))
}

/// The repository's demonstration layouts: the hazardous two-term cover and
/// its consensus-cured counterpart, as produced by [`synthesize_sop`].
pub fn builtin_demo(kind: DemoKind) -> QcaLayout {
    let (expr, name) = match kind {
        DemoKind::WithHazard => ("AB' + BC'", "with_hazard"),
        DemoKind::HazardFree => ("AB' + BC' + AC'", "hazard_free"),
    };
    let cover = crate::sop::parse_expression(expr).expect("built-in expression parses");
    let mut layout = synthesize_sop(&cover, &Geometry::default()).expect("built-in cover routes");
    layout.name = name.to_string();
    layout
}

/// Primitive verification layouts: a straight wire, the two-cell inverter,
/// and the majority/AND/OR gates, each wrapped with zone-0 input wiring and
/// a zone-2 output tail so the truth table reads out at hold windows.
pub mod primitives {
    use super::*;

    fn grid_cell(g: (i64, i64), zone: u8, geom: &Geometry) -> QcaCell {
        QcaCell::normal(g.0 as f64 * geom.pitch, g.1 as f64 * geom.pitch, zone)
    }

    /// Nine-cell wire bridging zones 0-1-2; output mirrors the input.
    pub fn wire_demo(geom: &Geometry) -> QcaLayout {
        let mut cells: Vec<QcaCell> = (0..9)
            .map(|i| grid_cell((i, 0), (i / 3) as u8, geom))
            .collect();
        cells[0].role = CellRole::Input("A".into());
        cells[8].role = CellRole::Output("f".into());
        QcaLayout::new("wire", *geom, cells)
    }

    /// Wire into a diagonal inverter hop; output is the complement.
    pub fn inverter_demo(geom: &Geometry) -> QcaLayout {
        let mut cells = Vec::new();
        for x in 0..3 {
            cells.push(grid_cell((x, 0), 0, geom));
        }
        for x in 3..6 {
            cells.push(grid_cell((x, 1), 1, geom));
        }
        for x in 6..9 {
            cells.push(grid_cell((x, 1), 2, geom));
        }
        cells[0].role = CellRole::Input("A".into());
        cells[8].role = CellRole::Output("f".into());
        QcaLayout::new("inverter", *geom, cells)
    }

    /// Three-input majority gate with wired inputs A (west), B (north),
    /// C (south) and output f.
    pub fn majority_demo(geom: &Geometry) -> QcaLayout {
        let mut cells = Vec::new();
        for (dx, dy, label) in [(-1i64, 0i64, "A"), (0, 1, "B"), (0, -1, "C")] {
            for step in (2..=4).rev() {
                let mut c = grid_cell((dx * step, dy * step), 0, geom);
                if step == 4 {
                    c.role = CellRole::Input(label.into());
                }
                cells.push(c);
            }
        }
        for g in [(-1i64, 0i64), (0, 1), (0, -1), (0, 0), (1, 0)] {
            cells.push(grid_cell(g, 1, geom));
        }
        for x in 2..=4 {
            let mut c = grid_cell((x, 0), 2, geom);
            if x == 4 {
                c.role = CellRole::Output("f".into());
            }
            cells.push(c);
        }
        QcaLayout::new("majority", *geom, cells)
    }

    fn two_input_gate(fixed: i8, name: &str, geom: &Geometry) -> QcaLayout {
        let mut cells = Vec::new();
        for (dx, dy, label) in [(-1i64, 0i64, "A"), (0, 1, "B")] {
            for step in (2..=4).rev() {
                let mut c = grid_cell((dx * step, dy * step), 0, geom);
                if step == 4 {
                    c.role = CellRole::Input(label.into());
                }
                cells.push(c);
            }
        }
        for g in [(-1i64, 0i64), (0, 1), (0, 0), (1, 0)] {
            cells.push(grid_cell(g, 1, geom));
        }
        let mut south = grid_cell((0, -1), 1, geom);
        south.role = CellRole::Fixed(fixed);
        cells.push(south);
        for x in 2..=4 {
            let mut c = grid_cell((x, 0), 2, geom);
            if x == 4 {
                c.role = CellRole::Output("f".into());
            }
            cells.push(c);
        }
        QcaLayout::new(name, *geom, cells)
    }

    /// Majority gate with the south input pinned to -1: a two-input AND.
    pub fn and_gate_demo(geom: &Geometry) -> QcaLayout {
        two_input_gate(-1, "and_gate", geom)
    }

    /// Majority gate with the south input pinned to +1: a two-input OR.
    pub fn or_gate_demo(geom: &Geometry) -> QcaLayout {
        two_input_gate(1, "or_gate", geom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::validate;
    use crate::sop::parse_expression;

    fn synth(expr: &str) -> QcaLayout {
        synthesize_sop(&parse_expression(expr).unwrap(), &Geometry::default()).unwrap()
    }

    fn count_fixed(layout: &QcaLayout, pol: i8) -> usize {
        layout
            .cells
            .iter()
            .filter(|c| c.role == CellRole::Fixed(pol))
            .count()
    }

    #[test]
    fn case_study_layout_has_expected_structure() {
        let layout = synth("AB' + BC'");
        assert!(validate(&layout).is_empty());
        assert_eq!(layout.input_labels(), vec!["A", "B", "C"]);
        assert_eq!(layout.output_labels(), vec!["f"]);
        // Two AND majorities (fixed -1) and one OR majority (fixed +1).
        assert_eq!(count_fixed(&layout, -1), 2);
        assert_eq!(count_fixed(&layout, 1), 1);
    }

    #[test]
    fn cured_layout_has_three_ands_and_two_ors() {
        let layout = synth("AB' + BC' + AC'");
        assert!(validate(&layout).is_empty());
        assert_eq!(count_fixed(&layout, -1), 3);
        assert_eq!(count_fixed(&layout, 1), 2);
    }

    #[test]
    fn single_literal_function_is_wire_only() {
        let layout = synth("A");
        assert!(validate(&layout).is_empty());
        assert_eq!(count_fixed(&layout, -1), 0);
        assert_eq!(count_fixed(&layout, 1), 0);
    }

    #[test]
    fn complemented_single_literal_is_wire_plus_inverter() {
        let layout = synth("A'");
        assert!(validate(&layout).is_empty());
        assert_eq!(count_fixed(&layout, -1), 0);
    }

    #[test]
    fn constant_and_oversized_covers_are_rejected() {
        let c = Cover::new(vec!["A".into()], vec![]).unwrap();
        assert_eq!(
            synthesize_sop(&c, &Geometry::default()).unwrap_err(),
            SynthError::ConstantCover
        );
        let names: Vec<String> = (0..9).map(|i| format!("v{i}")).collect();
        let t = crate::sop::ProductTerm::from_pairs([(0, false)]).unwrap();
        let c = Cover::new(names, vec![t]).unwrap();
        assert_eq!(
            synthesize_sop(&c, &Geometry::default()).unwrap_err(),
            SynthError::TooManyVariables(9)
        );
    }

    #[test]
    fn synthesized_layouts_validate_on_assorted_covers() {
        for expr in [
            "A + B",
            "AB",
            "AB + C",
            "A'B' + AB",
            "AB'C + A'BC",
            "x0x1 + x1x2 + x0x2",
            "AB + CD",
            "AB'C'D + A'BCD'",
            "A'B'C' + ABC",
        ] {
            let layout = synth(expr);
            assert!(validate(&layout).is_empty(), "{expr}");
        }
    }

    #[test]
    fn isolated_minterm_triple_is_reported_unroutable() {
        // Three pairwise-disjoint full minterms interleave every variable
        // span in the header band; no placement tier can order that without
        // a wire crossing, so synthesis refuses rather than misplacing.
        let cover = parse_expression("AB'C' + A'BC' + A'B'C").unwrap();
        assert_eq!(
            synthesize_sop(&cover, &Geometry::default()).unwrap_err(),
            SynthError::NotRoutable
        );
    }

    #[test]
    fn output_neighborhood_is_identical_across_demos() {
        // The kink-energy comparison between the two demos relies on the
        // output tail seeing exactly the same relative cell placement.
        let neighborhood = |layout: &QcaLayout| -> Vec<(i64, i64)> {
            let out = layout.find_output("f").unwrap();
            let o = &layout.cells[out];
            let mut near: Vec<(i64, i64)> = layout
                .cells
                .iter()
                .enumerate()
                .filter(|&(i, c)| i != out && o.distance_to(c) <= 65.0)
                .map(|(_, c)| ((c.x - o.x) as i64, (c.y - o.y) as i64))
                .collect();
            near.sort();
            near
        };
        let a = builtin_demo(DemoKind::WithHazard);
        let b = builtin_demo(DemoKind::HazardFree);
        let na = neighborhood(&a);
        let nb = neighborhood(&b);
        assert_eq!(na, nb);
        assert_eq!(na, vec![(-60, 0), (-40, 0), (-20, 0)]);
    }

    #[test]
    fn demos_are_deterministic() {
        let a = builtin_demo(DemoKind::WithHazard);
        let b = builtin_demo(DemoKind::WithHazard);
        assert_eq!(a, b);
        assert_eq!(a.name, "with_hazard");
    }

    #[test]
    fn primitive_layouts_validate() {
        let g = Geometry::default();
        for layout in [
            primitives::wire_demo(&g),
            primitives::inverter_demo(&g),
            primitives::majority_demo(&g),
            primitives::and_gate_demo(&g),
            primitives::or_gate_demo(&g),
        ] {
            assert!(validate(&layout).is_empty(), "{}", layout.name);
        }
    }
}

