//! Latticed paths `𝕃(T)` and well-nested collections `Ω(T_A^B)`.
//!
//! A latticed path over a window is the generic path `Γ` of the window with
//! a down-closed set of its matched `(+, -)` pairs flattened. Flattening a
//! pair turns both of its strokes, and everything nested inside, into flat
//! steps.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::signseq::{bijective, match_pairs, PosSet, Sign, SignSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Down,
    Flat,
}

impl Step {
    pub fn delta(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Down => -1,
            Step::Flat => 0,
        }
    }
}

/// A member of `𝕃(window)`, or the empty path of a self-paired window.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticedPath {
    window: SignSequence,
    flattened: BTreeSet<(i64, i64)>,
    degenerate: bool,
}

impl LatticedPath {
    /// The unflattened path `Γ(window)`.
    pub fn generic(window: SignSequence) -> Self {
        LatticedPath { window, flattened: BTreeSet::new(), degenerate: false }
    }

    /// The empty path of a window `T_a^a`, of norm zero.
    pub fn degenerate() -> Self {
        LatticedPath { window: SignSequence::default(), flattened: BTreeSet::new(), degenerate: true }
    }

    /// Every matched pair flattened.
    pub fn descending(window: SignSequence) -> Self {
        let flattened = match_pairs(window.plus(), window.minus()).pairs.into_iter().collect();
        LatticedPath { window, flattened, degenerate: false }
    }

    /// The path whose flat steps are exactly `flats`, if it is latticed.
    pub fn from_flat_positions(window: SignSequence, flats: &PosSet) -> Result<Self> {
        let pairs = match_pairs(window.plus(), window.minus()).pairs;
        let flattened: BTreeSet<(i64, i64)> =
            pairs.into_iter().filter(|(p, m)| flats.contains(p) && flats.contains(m)).collect();
        let path = LatticedPath { window, flattened, degenerate: false };
        if path.flat_positions() != *flats || !path.is_down_closed() {
            return Err(Error::Precondition(format!(
                "flat set {flats:?} is not a latticed path of {}",
                path.window
            )));
        }
        Ok(path)
    }

    /// The path with the given step at each window position, if latticed.
    pub fn from_steps(window: SignSequence, steps: &[(i64, Step)]) -> Result<Self> {
        let positions: Vec<(i64, Sign)> = window.signed_positions();
        let ok = positions.len() == steps.len()
            && positions.iter().zip(steps).all(|(&(x, s), &(y, st))| {
                x == y
                    && match st {
                        Step::Flat => true,
                        Step::Up => s == Sign::Plus,
                        Step::Down => s == Sign::Minus,
                    }
            });
        if !ok {
            return Err(Error::Precondition(format!("steps {steps:?} do not fit {window}")));
        }
        let flats: PosSet = steps.iter().filter(|s| s.1 == Step::Flat).map(|s| s.0).collect();
        Self::from_flat_positions(window, &flats)
    }

    pub fn window(&self) -> &SignSequence {
        &self.window
    }

    pub fn flattened(&self) -> &BTreeSet<(i64, i64)> {
        &self.flattened
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_generic(&self) -> bool {
        !self.degenerate && self.flattened.is_empty()
    }

    fn flat_positions(&self) -> PosSet {
        self.flattened.iter().flat_map(|&(p, m)| [p, m]).collect()
    }

    fn is_down_closed(&self) -> bool {
        let flats = self.flat_positions();
        self.flattened.iter().all(|&(p, m)| flats.range(p..=m).count() == self.window.between(p, m).len() + 2)
    }

    pub fn steps(&self) -> Vec<(i64, Step)> {
        let flats = self.flat_positions();
        self.window
            .signed_positions()
            .into_iter()
            .map(|(x, s)| {
                let st = if flats.contains(&x) {
                    Step::Flat
                } else if s == Sign::Plus {
                    Step::Up
                } else {
                    Step::Down
                };
                (x, st)
            })
            .collect()
    }

    pub fn num_down(&self) -> usize {
        self.steps().iter().filter(|s| s.1 == Step::Down).count()
    }

    pub fn num_up(&self) -> usize {
        self.steps().iter().filter(|s| s.1 == Step::Up).count()
    }

    /// `1 +` the number of diagonal strokes; zero for the degenerate path.
    pub fn norm(&self) -> i64 {
        if self.degenerate {
            return 0;
        }
        1 + self.window.len() as i64 - 2 * self.flattened.len() as i64
    }

    /// Heights at the start and after each step, beginning at `start`.
    pub fn heights(&self, start: i64) -> Vec<i64> {
        let mut h = start;
        let mut out = vec![h];
        for (_, st) in self.steps() {
            h += st.delta();
            out.push(h);
        }
        out
    }
}

/// `𝕃(window)`: one path per down-closed set of matched pairs, generic first.
pub fn enumerate_latticed(window: &SignSequence) -> Vec<LatticedPath> {
    let pairs = match_pairs(window.plus(), window.minus()).pairs;
    // Nesting forest: parent = innermost enclosing pair.
    let mut by_open: Vec<(i64, i64)> = pairs;
    by_open.sort_unstable();
    let mut children: BTreeMap<Option<usize>, Vec<usize>> = BTreeMap::new();
    let mut stack: Vec<usize> = Vec::new();
    for (i, &(p, _)) in by_open.iter().enumerate() {
        while let Some(&top) = stack.last() {
            if by_open[top].1 < p {
                stack.pop();
            } else {
                break;
            }
        }
        children.entry(stack.last().copied()).or_default().push(i);
        stack.push(i);
    }

    fn subtree(i: usize, pairs: &[(i64, i64)], children: &BTreeMap<Option<usize>, Vec<usize>>, out: &mut BTreeSet<(i64, i64)>) {
        out.insert(pairs[i]);
        for &c in children.get(&Some(i)).map(Vec::as_slice).unwrap_or(&[]) {
            subtree(c, pairs, children, out);
        }
    }

    fn ideals(
        nodes: &[usize],
        pairs: &[(i64, i64)],
        children: &BTreeMap<Option<usize>, Vec<usize>>,
    ) -> Vec<BTreeSet<(i64, i64)>> {
        let mut acc = vec![BTreeSet::new()];
        for &n in nodes {
            let kids = children.get(&Some(n)).map(Vec::as_slice).unwrap_or(&[]);
            let mut options = ideals(kids, pairs, children);
            let mut whole = BTreeSet::new();
            subtree(n, pairs, children, &mut whole);
            options.push(whole);
            acc = acc
                .iter()
                .flat_map(|a| {
                    options.iter().map(move |o| a.union(o).copied().collect::<BTreeSet<_>>())
                })
                .collect();
        }
        acc
    }

    let roots = children.get(&None).cloned().unwrap_or_default();
    let mut sets = ideals(&roots, &by_open, &children);
    sets.sort_by_key(|s| s.len());
    sets.into_iter()
        .map(|flattened| LatticedPath { window: window.clone(), flattened, degenerate: false })
        .collect()
}

/// Reference generator for `𝕃(window)`: closure of the generic path under
/// replacing an `up flat* down` excursion by flat steps.
pub fn enumerate_latticed_slow(window: &SignSequence) -> BTreeSet<Vec<Step>> {
    let generic: Vec<Step> = LatticedPath::generic(window.clone()).steps().into_iter().map(|s| s.1).collect();
    let mut seen = BTreeSet::new();
    let mut todo = vec![generic];
    while let Some(steps) = todo.pop() {
        if !seen.insert(steps.clone()) {
            continue;
        }
        for i in 0..steps.len() {
            if steps[i] != Step::Up {
                continue;
            }
            let mut j = i + 1;
            while j < steps.len() && steps[j] == Step::Flat {
                j += 1;
            }
            if j < steps.len() && steps[j] == Step::Down {
                let mut next = steps.clone();
                for s in &mut next[i..=j] {
                    *s = Step::Flat;
                }
                todo.push(next);
            }
        }
    }
    seen
}

/// One latticed path per matched pair `(a, π(a))`, inner paths never below
/// outer ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WellNestedCollection {
    pub pairs: BTreeMap<i64, i64>,
    pub paths: BTreeMap<i64, LatticedPath>,
}

impl WellNestedCollection {
    pub fn norm(&self) -> i64 {
        self.paths.values().map(LatticedPath::norm).sum()
    }

    pub fn is_generic(&self) -> bool {
        self.paths.values().all(|p| p.is_degenerate() || p.is_generic())
    }
}

/// Vertex heights of `γ` over window `(a, ·)` in the absolute embedding,
/// keyed by the position just passed (the start vertex is keyed by `a`).
fn absolute_heights(t: &SignSequence, a: i64, path: &LatticedPath) -> BTreeMap<i64, i64> {
    let hs = path.heights(t.height_after(a));
    core::iter::once(a).chain(path.steps().into_iter().map(|s| s.0)).zip(hs).collect()
}

fn check_pairing_input(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<()> {
    if let Some(x) = a.difference(b).find(|x| !t.minus().contains(x)) {
        return Err(Error::Pairing(format!("opener {x} is not a - position of {t}")));
    }
    if let Some(x) = b.difference(a).find(|x| !t.plus().contains(x)) {
        return Err(Error::Pairing(format!("closer {x} is not a + position of {t}")));
    }
    if !bijective(a, b) {
        return Err(Error::Pairing(format!("{a:?} and {b:?} are not perfectly matched")));
    }
    Ok(())
}

/// `Ω(T_A^B)`.
pub fn enumerate_wellnested(t: &SignSequence, a: &PosSet, b: &PosSet) -> Result<Vec<WellNestedCollection>> {
    check_pairing_input(t, a, b)?;
    let pairs = match_pairs(a, b).partner_map();
    let keys: Vec<i64> = pairs.keys().copied().collect();
    let options: Vec<Vec<(LatticedPath, BTreeMap<i64, i64>)>> = keys
        .iter()
        .map(|&x| {
            let y = pairs[&x];
            if x == y {
                vec![(LatticedPath::degenerate(), BTreeMap::new())]
            } else {
                enumerate_latticed(&t.between(x, y))
                    .into_iter()
                    .map(|p| {
                        let h = absolute_heights(t, x, &p);
                        (p, h)
                    })
                    .collect()
            }
        })
        .collect();
    // For each pair, the earlier pairs that strictly enclose it.
    let enclosing: Vec<Vec<usize>> = keys
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let y = pairs[&x];
            (0..i).filter(|&j| keys[j] < x && y < pairs[&keys[j]] && x != y).collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; keys.len()];
    fn dfs(
        i: usize,
        options: &[Vec<(LatticedPath, BTreeMap<i64, i64>)>],
        enclosing: &[Vec<usize>],
        choice: &mut [usize],
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if i == options.len() {
            emit(choice);
            return;
        }
        for k in 0..options[i].len() {
            let inner = &options[i][k].1;
            let ok = enclosing[i].iter().all(|&j| {
                let outer = &options[j][choice[j]].1;
                inner.iter().all(|(x, h)| outer.get(x).is_none_or(|ho| h >= ho))
            });
            if ok {
                choice[i] = k;
                dfs(i + 1, options, enclosing, choice, emit);
            }
        }
    }
    dfs(0, &options, &enclosing, &mut choice, &mut |ch| {
        let paths = keys.iter().zip(ch).enumerate().map(|(i, (&x, &k))| (x, options[i][k].0.clone())).collect();
        out.push(WellNestedCollection { pairs: pairs.clone(), paths });
    });
    Ok(out)
}

/// True iff `paths` (one per pair of `A → B`) form a member of `Ω(T_A^B)`.
pub fn is_well_nested(t: &SignSequence, a: &PosSet, b: &PosSet, paths: &BTreeMap<i64, LatticedPath>) -> Result<bool> {
    check_pairing_input(t, a, b)?;
    let pairs = match_pairs(a, b).partner_map();
    if pairs.keys().ne(paths.keys()) {
        return Ok(false);
    }
    let mut heights = BTreeMap::new();
    for (&x, &y) in &pairs {
        let p = &paths[&x];
        if x == y {
            if !p.is_degenerate() {
                return Ok(false);
            }
            continue;
        }
        if p.is_degenerate() || *p.window() != t.between(x, y) {
            return Ok(false);
        }
        heights.insert(x, absolute_heights(t, x, p));
    }
    for (&x, &y) in &pairs {
        for (&x2, &y2) in &pairs {
            if x2 < x && y < y2 && x != y {
                let inner = &heights[&x];
                let outer = &heights[&x2];
                if !inner.iter().all(|(k, h)| outer.get(k).is_none_or(|ho| h >= ho)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Output format for path drawings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(RenderFormat::Ascii),
            "svg" => Ok(RenderFormat::Svg),
            _ => Err(Error::Unsupported(format!("unknown render format {s:?}"))),
        }
    }
}

/// Steps of `Γ(T)`.
pub fn generic_steps(t: &SignSequence) -> Vec<Step> {
    t.signed_positions()
        .into_iter()
        .map(|(_, s)| if s == Sign::Plus { Step::Up } else { Step::Down })
        .collect()
}

/// Draws a step sequence; `overlay` is drawn with `.` where it differs.
pub fn render_steps(steps: &[Step], overlay: Option<&[Step]>, format: RenderFormat) -> String {
    match format {
        RenderFormat::Ascii => render_ascii(steps, overlay),
        RenderFormat::Svg => render_svg(steps, overlay),
    }
}

pub fn render_path(path: &LatticedPath, overlay_generic: bool, format: RenderFormat) -> String {
    let steps: Vec<Step> = path.steps().into_iter().map(|s| s.1).collect();
    let generic = generic_steps(path.window());
    let overlay = (overlay_generic && !path.is_generic()).then_some(generic.as_slice());
    render_steps(&steps, overlay, format)
}

// Band `y` is the strip between heights y and y+1.
fn strokes(steps: &[Step]) -> Vec<(i64, char)> {
    let mut h = 0;
    steps
        .iter()
        .map(|st| match st {
            Step::Up => {
                h += 1;
                (h - 1, '/')
            }
            Step::Down => {
                h -= 1;
                (h, '\\')
            }
            Step::Flat => (h, '_'),
        })
        .collect()
}

fn render_ascii(steps: &[Step], overlay: Option<&[Step]>) -> String {
    if steps.is_empty() {
        return String::new();
    }
    let main = strokes(steps);
    let extra = overlay.map(strokes).unwrap_or_default();
    let bands = main.iter().chain(extra.iter()).map(|s| s.0);
    let lo = bands.clone().min().unwrap_or(0);
    let hi = bands.max().unwrap_or(0);
    let mut out = String::new();
    for y in (lo..=hi).rev() {
        let mut row: Vec<char> = main.iter().map(|&(b, c)| if b == y { c } else { ' ' }).collect();
        for (i, &(b, c)) in extra.iter().enumerate() {
            if b == y && row[i] == ' ' && (c != main[i].1 || b != main[i].0) {
                row[i] = '.';
            }
        }
        let line: String = row.into_iter().collect();
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn polyline_points(steps: &[Step], unit: i64, top: i64) -> String {
    let mut pts = String::new();
    let mut h = 0;
    let _ = write!(pts, "0,{}", (top - h) * unit);
    for (i, st) in steps.iter().enumerate() {
        h += st.delta();
        let _ = write!(pts, " {},{}", (i as i64 + 1) * unit, (top - h) * unit);
    }
    pts
}

fn render_svg(steps: &[Step], overlay: Option<&[Step]>) -> String {
    const UNIT: i64 = 20;
    let heights = |s: &[Step]| {
        let mut h = 0;
        let mut v = vec![0];
        for st in s {
            h += st.delta();
            v.push(h);
        }
        v
    };
    let mut all = heights(steps);
    if let Some(o) = overlay {
        all.extend(heights(o));
    }
    let top = all.iter().copied().max().unwrap_or(0);
    let bottom = all.iter().copied().min().unwrap_or(0);
    let width = steps.len() as i64 * UNIT;
    let height = (top - bottom) * UNIT;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"-2 -2 {} {}\">",
        width + 4,
        height + 4,
        width + 4,
        height + 4
    );
    if let Some(o) = overlay {
        let _ = writeln!(
            out,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>",
            polyline_points(o, UNIT, top)
        );
    }
    let _ = writeln!(
        out,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
        polyline_points(steps, UNIT, top)
    );
    out.push_str("</svg>\n");
    out
}
