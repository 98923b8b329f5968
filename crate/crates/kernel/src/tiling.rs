//! Aztec diamond combinatorics: dominoes and their classes, exact enumeration,
//! the domino-shuffling sampler, polar regions, DR paths and the particle
//! configuration they induce.
//!
//! Coordinates are CS-I: unit squares `[m, m+1] x [l, l+1]` are addressed by
//! their lower-left corner `(m, l)`. The second frame (CS-II) is only reached
//! through [`cs1_to_cs2`] and [`cs2_to_cs1`].

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt::Write as _;

/// Largest order accepted by [`enumerate_tilings`] by default.
pub const DEFAULT_ENUM_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AztecDiamond {
    pub n: usize,
}

impl AztecDiamond {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("order must be positive".into()));
        }
        Ok(Self { n })
    }

    /// Whether the unit square with lower-left corner `(m, l)` lies inside.
    pub fn contains(&self, m: i64, l: i64) -> bool {
        let n = self.n as i64;
        if l < -n || l >= n {
            return false;
        }
        let h = l.abs().max((l + 1).abs());
        m >= -(n + 1 - h) && m <= n - h
    }

    pub fn cells(&self) -> Vec<(i64, i64)> {
        let n = self.n as i64;
        let mut out = Vec::with_capacity(2 * self.n * (self.n + 1));
        for l in -n..n {
            for m in -n..n {
                if self.contains(m, l) {
                    out.push((m, l));
                }
            }
        }
        out
    }

    /// Checkerboard colouring: the leftmost square of each top-half row is white.
    pub fn is_white(&self, m: i64, l: i64) -> bool {
        (m + l + self.n as i64).rem_euclid(2) == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "h")]
    Horizontal,
    #[serde(rename = "v")]
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DominoClass {
    N,
    S,
    W,
    E,
}

/// A domino anchored at the lower-left unit square it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domino {
    pub x: i64,
    pub y: i64,
    pub orient: Orientation,
    pub class: DominoClass,
}

impl Domino {
    pub fn cells(&self) -> [(i64, i64); 2] {
        match self.orient {
            Orientation::Horizontal => [(self.x, self.y), (self.x + 1, self.y)],
            Orientation::Vertical => [(self.x, self.y), (self.x, self.y + 1)],
        }
    }
}

pub fn classify_domino(x: i64, y: i64, orient: Orientation, n: usize) -> Result<DominoClass> {
    let d = AztecDiamond::new(n)?;
    let probe = Domino {
        x,
        y,
        orient,
        class: DominoClass::N,
    };
    if probe.cells().iter().any(|&(m, l)| !d.contains(m, l)) {
        return Err(Error::Input(format!(
            "domino at ({x}, {y}) lies outside the order-{n} diamond"
        )));
    }
    Ok(class_unchecked(x, y, orient, n))
}

fn class_unchecked(x: i64, y: i64, orient: Orientation, n: usize) -> DominoClass {
    let white = |m: i64, l: i64| (m + l + n as i64).rem_euclid(2) == 0;
    match orient {
        Orientation::Horizontal if white(x, y) => DominoClass::N,
        Orientation::Horizontal => DominoClass::S,
        Orientation::Vertical if white(x, y + 1) => DominoClass::W,
        Orientation::Vertical => DominoClass::E,
    }
}

/// CS-II coordinates of a CS-I point.
pub fn cs1_to_cs2(p: (f64, f64), n: usize) -> (f64, f64) {
    let n = n as f64;
    let (x1, y1) = p;
    ((x1 + y1 + n + 0.5) / 2.0, (y1 - x1 - n + 0.5) / 2.0)
}

/// CS-I coordinates of a CS-II point.
pub fn cs2_to_cs1(p: (f64, f64), n: usize) -> (f64, f64) {
    let n = n as f64;
    let (x2, y2) = p;
    (x2 - y2 - n, x2 + y2 - 0.5)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tiling {
    pub diamond: AztecDiamond,
    /// Sorted by `(x, y, orient)`.
    pub dominoes: Vec<Domino>,
}

impl Tiling {
    /// Builds a tiling from `(x, y, orient)` triples, validating coverage.
    pub fn from_placements(n: usize, placements: &[(i64, i64, Orientation)]) -> Result<Self> {
        let diamond = AztecDiamond::new(n)?;
        let mut grid = CellGrid::new(n);
        let mut dominoes = Vec::with_capacity(placements.len());
        for &(x, y, orient) in placements {
            let class = classify_domino(x, y, orient, n)?;
            let d = Domino {
                x,
                y,
                orient,
                class,
            };
            for (m, l) in d.cells() {
                if grid.get(m, l) {
                    return Err(Error::Input(format!("overlapping dominoes at ({m}, {l})")));
                }
                grid.set(m, l, true);
            }
            dominoes.push(d);
        }
        if dominoes.len() != n * (n + 1) {
            return Err(Error::Input(format!(
                "an order-{n} tiling has {} dominoes, got {}",
                n * (n + 1),
                dominoes.len()
            )));
        }
        Ok(Self::from_sorted(diamond, dominoes))
    }

    fn from_sorted(diamond: AztecDiamond, mut dominoes: Vec<Domino>) -> Self {
        dominoes.sort();
        Self { diamond, dominoes }
    }

    pub fn n(&self) -> usize {
        self.diamond.n
    }

    pub fn vertical_count(&self) -> usize {
        self.dominoes
            .iter()
            .filter(|d| d.orient == Orientation::Vertical)
            .count()
    }

    /// Unnormalised weight `a^v`.
    pub fn weight(&self, a: f64) -> f64 {
        a.powi(self.vertical_count() as i32)
    }

    /// Domino index covering each cell.
    fn owner_map(&self) -> std::collections::HashMap<(i64, i64), usize> {
        let mut map = std::collections::HashMap::with_capacity(2 * self.dominoes.len());
        for (i, d) in self.dominoes.iter().enumerate() {
            for c in d.cells() {
                map.insert(c, i);
            }
        }
        map
    }

    pub fn to_json(&self, a: f64) -> serde_json::Value {
        let doms: Vec<serde_json::Value> = self
            .dominoes
            .iter()
            .map(|d| {
                serde_json::json!({
                    "x": d.x,
                    "y": d.y,
                    "orient": d.orient,
                    "class": d.class,
                })
            })
            .collect();
        serde_json::json!({ "n": self.n(), "a": a, "dominoes": doms })
    }

    /// SVG picture with the four polar regions in distinct fills and the
    /// NPR boundary overlaid.
    pub fn to_svg(&self) -> String {
        let n = self.n() as f64;
        let scale = (600.0 / (2.0 * n + 2.0)).max(2.0);
        let size = scale * (2.0 * n + 2.0);
        let px = |x: f64| (x + n + 1.0) * scale;
        let py = |y: f64| (n + 1.0 - y) * scale;
        let regions = polar_regions(self);
        let mut fill = vec!["#d9d9d9"; self.dominoes.len()];
        for &i in &regions.north {
            fill[i] = "#d62728";
        }
        for &i in &regions.south {
            fill[i] = "#1f77b4";
        }
        for &i in &regions.west {
            fill[i] = "#2ca02c";
        }
        for &i in &regions.east {
            fill[i] = "#ffbf00";
        }
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.2} {size:.2}">"#
        );
        for (d, f) in self.dominoes.iter().zip(&fill) {
            let (w, h) = match d.orient {
                Orientation::Horizontal => (2.0, 1.0),
                Orientation::Vertical => (1.0, 2.0),
            };
            let _ = writeln!(
                s,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{f}" stroke="#333" stroke-width="{:.2}"/>"##,
                px(d.x as f64),
                py(d.y as f64 + h),
                w * scale,
                h * scale,
                (scale * 0.05).max(0.2)
            );
        }
        let boundary = boundary_process(&particles_from_tiling(self));
        let pts: Vec<String> = boundary
            .vertices
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="black" stroke-width="{:.2}"/>"#,
            pts.join(" "),
            (scale * 0.15).max(0.5)
        );
        s.push_str("</svg>\n");
        s
    }
}

/// Boolean occupancy grid over the bounding box `[-n, n)^2`.
struct CellGrid {
    n: i64,
    bits: Vec<bool>,
}

impl CellGrid {
    fn new(n: usize) -> Self {
        let n = n as i64;
        Self {
            n,
            bits: vec![false; (4 * n * n) as usize],
        }
    }

    fn idx(&self, m: i64, l: i64) -> usize {
        ((l + self.n) * 2 * self.n + (m + self.n)) as usize
    }

    fn get(&self, m: i64, l: i64) -> bool {
        self.bits[self.idx(m, l)]
    }

    fn set(&mut self, m: i64, l: i64, v: bool) {
        let i = self.idx(m, l);
        self.bits[i] = v;
    }
}

/// All tilings of the order-`n` diamond with their weights `a^v`.
pub fn enumerate_tilings(n: usize, a: f64, cap: usize) -> Result<Vec<(Tiling, f64)>> {
    let diamond = AztecDiamond::new(n)?;
    if n > cap {
        return Err(Error::Resource(format!(
            "enumeration of order {n} exceeds cap {cap}"
        )));
    }
    let cells = diamond.cells();
    let mut grid = CellGrid::new(n);
    let mut current = Vec::new();
    let mut out = Vec::new();
    enumerate_rec(&diamond, &cells, 0, &mut grid, &mut current, &mut out);
    Ok(out
        .into_iter()
        .map(|doms| {
            let t = Tiling::from_sorted(diamond, doms);
            let w = t.weight(a);
            (t, w)
        })
        .collect())
}

fn enumerate_rec(
    d: &AztecDiamond,
    cells: &[(i64, i64)],
    mut pos: usize,
    grid: &mut CellGrid,
    current: &mut Vec<Domino>,
    out: &mut Vec<Vec<Domino>>,
) {
    while pos < cells.len() && grid.get(cells[pos].0, cells[pos].1) {
        pos += 1;
    }
    if pos == cells.len() {
        out.push(current.clone());
        return;
    }
    let (m, l) = cells[pos];
    for orient in [Orientation::Horizontal, Orientation::Vertical] {
        let (m2, l2) = match orient {
            Orientation::Horizontal => (m + 1, l),
            Orientation::Vertical => (m, l + 1),
        };
        if !d.contains(m2, l2) || grid.get(m2, l2) {
            continue;
        }
        grid.set(m, l, true);
        grid.set(m2, l2, true);
        current.push(Domino {
            x: m,
            y: l,
            orient,
            class: class_unchecked(m, l, orient, d.n),
        });
        enumerate_rec(d, cells, pos + 1, grid, current, out);
        current.pop();
        grid.set(m, l, false);
        grid.set(m2, l2, false);
    }
}

/// Per-sample seed derived from a base seed and a sample index, so parallel
/// runs do not depend on scheduling.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Exact sample from the measure `a^v / Z` by domino shuffling.
pub fn sample_tiling(n: usize, a: f64, seed: u64) -> Result<Tiling> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_tiling_with(n, a, &mut rng)
}

pub fn sample_tiling_with<R: Rng>(n: usize, a: f64, rng: &mut R) -> Result<Tiling> {
    let diamond = AztecDiamond::new(n)?;
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Input(format!("weight must be positive, got {a}")));
    }
    let p_vertical = a * a / (1.0 + a * a);
    let nn = n as i64;
    // Cell codes: 0 empty, otherwise 1 + class index, stored at the anchor
    // cell only; the partner cell holds PARTNER.
    const PARTNER: u8 = 255;
    let side = 2 * nn as usize;
    let idx = |m: i64, l: i64| ((l + nn) as usize) * side + (m + nn) as usize;
    let mut grid = vec![0u8; side * side];
    let mut next = vec![0u8; side * side];
    let code = |c: DominoClass| 1 + c as u8;
    for k in 0..nn {
        // Destruction and sliding from order k to order k + 1.
        next.iter_mut().for_each(|c| *c = 0);
        for l in -k..k {
            for m in -k..k {
                let c = grid[idx(m, l)];
                if c == 0 || c == PARTNER {
                    continue;
                }
                let class = class_from_code(c);
                let bad = match class {
                    DominoClass::N => l + 1 < k && grid[idx(m, l + 1)] == code(DominoClass::S),
                    DominoClass::S => l - 1 >= -k && grid[idx(m, l - 1)] == code(DominoClass::N),
                    DominoClass::E => m + 1 < k && grid[idx(m + 1, l)] == code(DominoClass::W),
                    DominoClass::W => m - 1 >= -k && grid[idx(m - 1, l)] == code(DominoClass::E),
                };
                if bad {
                    continue;
                }
                let (dm, dl, horizontal) = match class {
                    DominoClass::N => (0, 1, true),
                    DominoClass::S => (0, -1, true),
                    DominoClass::E => (1, 0, false),
                    DominoClass::W => (-1, 0, false),
                };
                let (m2, l2) = (m + dm, l + dl);
                next[idx(m2, l2)] = c;
                if horizontal {
                    next[idx(m2 + 1, l2)] = PARTNER;
                } else {
                    next[idx(m2, l2 + 1)] = PARTNER;
                }
            }
        }
        std::mem::swap(&mut grid, &mut next);
        // Creation: fill every empty 2x2 block of the order-(k+1) diamond.
        let order = (k + 1) as usize;
        let d = AztecDiamond { n: order };
        let kk = k + 1;
        for l in -kk..kk {
            for m in -kk..kk {
                if !d.contains(m, l) || grid[idx(m, l)] != 0 {
                    continue;
                }
                if rng.gen::<f64>() < p_vertical {
                    grid[idx(m, l)] = code(class_unchecked(m, l, Orientation::Vertical, order));
                    grid[idx(m, l + 1)] = PARTNER;
                    grid[idx(m + 1, l)] =
                        code(class_unchecked(m + 1, l, Orientation::Vertical, order));
                    grid[idx(m + 1, l + 1)] = PARTNER;
                } else {
                    grid[idx(m, l)] = code(class_unchecked(m, l, Orientation::Horizontal, order));
                    grid[idx(m + 1, l)] = PARTNER;
                    grid[idx(m, l + 1)] =
                        code(class_unchecked(m, l + 1, Orientation::Horizontal, order));
                    grid[idx(m + 1, l + 1)] = PARTNER;
                }
            }
        }
    }
    let mut dominoes = Vec::with_capacity(n * (n + 1));
    for l in -nn..nn {
        for m in -nn..nn {
            let c = grid[idx(m, l)];
            if c == 0 || c == PARTNER {
                continue;
            }
            let class = class_from_code(c);
            let orient = match class {
                DominoClass::N | DominoClass::S => Orientation::Horizontal,
                _ => Orientation::Vertical,
            };
            dominoes.push(Domino {
                x: m,
                y: l,
                orient,
                class,
            });
        }
    }
    Ok(Tiling::from_sorted(diamond, dominoes))
}

fn class_from_code(c: u8) -> DominoClass {
    match c {
        1 => DominoClass::N,
        2 => DominoClass::S,
        3 => DominoClass::W,
        _ => DominoClass::E,
    }
}

/// Indices into `Tiling::dominoes` of each polar region.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PolarRegions {
    pub north: Vec<usize>,
    pub south: Vec<usize>,
    pub west: Vec<usize>,
    pub east: Vec<usize>,
    pub temperate: Vec<usize>,
}

pub fn polar_regions(t: &Tiling) -> PolarRegions {
    let owner = t.owner_map();
    let d = t.diamond;
    let nb = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    let on_boundary = |dom: &Domino| {
        dom.cells()
            .iter()
            .any(|&(m, l)| nb.iter().any(|&(dm, dl)| !d.contains(m + dm, l + dl)))
    };
    let mut region: Vec<Option<DominoClass>> = vec![None; t.dominoes.len()];
    for class in [
        DominoClass::N,
        DominoClass::S,
        DominoClass::W,
        DominoClass::E,
    ] {
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (i, dom) in t.dominoes.iter().enumerate() {
            if dom.class == class && on_boundary(dom) {
                region[i] = Some(class);
                queue.push_back(i);
            }
        }
        while let Some(i) = queue.pop_front() {
            for (m, l) in t.dominoes[i].cells() {
                for (dm, dl) in nb {
                    if let Some(&j) = owner.get(&(m + dm, l + dl)) {
                        if region[j].is_none() && t.dominoes[j].class == class {
                            region[j] = Some(class);
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
    }
    let mut out = PolarRegions::default();
    for (i, r) in region.into_iter().enumerate() {
        match r {
            Some(DominoClass::N) => out.north.push(i),
            Some(DominoClass::S) => out.south.push(i),
            Some(DominoClass::W) => out.west.push(i),
            Some(DominoClass::E) => out.east.push(i),
            None => out.temperate.push(i),
        }
    }
    out
}

/// A DR path vertex `(x, h)` stands for the CS-I point `(x, h + 1/2)`.
pub type PathVertex = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DRPathFamily {
    pub n: usize,
    /// `paths[r - 1]` runs from `A_r` to `B_r`.
    pub paths: Vec<Vec<PathVertex>>,
}

impl DRPathFamily {
    pub fn cs1_points(&self, r: usize) -> Vec<(f64, f64)> {
        self.paths[r - 1]
            .iter()
            .map(|&(x, h)| (x as f64, h as f64 + 0.5))
            .collect()
    }

    /// Integer CS-II coordinates of a vertex.
    pub fn to_cs2(&self, v: PathVertex) -> (i64, i64) {
        let n = self.n as i64;
        let (x1, h) = v;
        ((x1 + h + n + 1) / 2, (h - x1 - n + 1) / 2)
    }
}

pub fn dr_paths(t: &Tiling) -> DRPathFamily {
    let n = t.n() as i64;
    let mut step = std::collections::HashMap::new();
    for d in &t.dominoes {
        let (from, to) = match d.class {
            DominoClass::N => continue,
            DominoClass::W => ((d.x, d.y), (d.x + 1, d.y + 1)),
            DominoClass::E => ((d.x, d.y + 1), (d.x + 1, d.y)),
            DominoClass::S => ((d.x, d.y), (d.x + 2, d.y)),
        };
        step.insert(from, to);
    }
    let mut paths = Vec::with_capacity(t.n());
    for r in 1..=n {
        let start = (-n - 1 + r, -r);
        let end = (n + 1 - r, -r);
        let mut path = vec![start];
        let mut cur = start;
        while cur != end {
            match step.get(&cur) {
                Some(&nxt) => {
                    path.push(nxt);
                    cur = nxt;
                }
                None => break,
            }
        }
        paths.push(path);
    }
    DRPathFamily { n: t.n(), paths }
}

/// The particle array `x_k^r`, `0 <= r <= 2n`, `1 <= k <= n`, with the
/// frozen continuation of each path past its endpoint. Particles of
/// index `k > n` sit at `1 - k` on every line and are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParticleConfiguration {
    pub n: usize,
    /// `lines[r][k - 1] = x_k^r`, strictly decreasing in `k`.
    pub lines: Vec<Vec<i64>>,
}

impl ParticleConfiguration {
    /// Lowest admissible site on line `r`: `-n + ceil(r/2)`.
    pub fn window_floor(n: usize, r: usize) -> i64 {
        -(n as i64) + r.div_ceil(2) as i64
    }

    /// Highest site a particle can reach on line `r`: `ceil(r/2)`.
    pub fn window_ceiling(r: usize) -> i64 {
        r.div_ceil(2) as i64
    }

    /// Particles of line `r` inside the window, in decreasing order.
    pub fn window_particles(&self, r: usize) -> Vec<i64> {
        let lo = Self::window_floor(self.n, r);
        self.lines[r].iter().copied().filter(|&x| x >= lo).collect()
    }

    pub fn top(&self, r: usize) -> i64 {
        self.lines[r][0]
    }

    /// Whether consecutive lines obey the step rules of the path graph.
    pub fn is_interlaced(&self) -> bool {
        let n = self.n;
        for r in 0..2 * n {
            for k in 0..n {
                let (a, b) = (self.lines[r][k], self.lines[r + 1][k]);
                let ok = if r % 2 == 0 {
                    b - a == 0 || b - a == 1
                } else {
                    b <= a
                };
                if !ok {
                    return false;
                }
            }
        }
        self.lines.iter().all(|l| l.windows(2).all(|w| w[0] > w[1]))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("line,rank,position\n");
        for r in 1..2 * self.n {
            for (k, x) in self.window_particles(r).iter().enumerate() {
                let _ = writeln!(s, "{r},{},{x}", k + 1);
            }
        }
        s
    }
}

pub fn particles_from_tiling(t: &Tiling) -> ParticleConfiguration {
    let fam = dr_paths(t);
    let n = t.n();
    let mut lines = vec![vec![0i64; n]; 2 * n + 1];
    for k in 1..=n {
        let ki = k as i64;
        let mut first = vec![None; n + 1];
        let mut last = vec![None; n + 1];
        for &v in &fam.paths[k - 1] {
            let (x2, y2) = fam.to_cs2(v);
            let j = x2 as usize;
            if first[j].is_none() {
                first[j] = Some(y2);
            }
            last[j] = Some(y2);
        }
        for j in 0..=n {
            let ji = j as i64;
            let (p, q) = match (first[j], last[j]) {
                (Some(p), Some(q)) => (p + ji, q + ji),
                // Beyond B_k the path is a frozen diagonal staircase.
                _ => (1 - ki, 1 - ki),
            };
            if j >= 1 {
                lines[2 * j - 1][k - 1] = p;
            }
            lines[2 * j][k - 1] = q;
        }
        lines[0][k - 1] = 1 - ki;
        lines[2 * n][k - 1] = 1 - ki;
    }
    ParticleConfiguration { n, lines }
}

/// The NPR boundary `t -> X_n(t)` as a CS-I polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProcess {
    pub n: usize,
    /// `Q_1(0), P_1(1), Q_1(1), ..., P_1(n), Q_1(n)`.
    pub vertices: Vec<(f64, f64)>,
}

impl BoundaryProcess {
    /// Height of the boundary at abscissa `t`, `|t| <= n`. Where the
    /// polyline has a vertical piece the upper value is returned.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let n = self.n as f64;
        if !(t.abs() <= n) {
            return Err(Error::Input(format!("t = {t} outside [-{n}, {n}]")));
        }
        let mut best: Option<f64> = None;
        for w in self.vertices.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if t < x0.min(x1) || t > x0.max(x1) {
                continue;
            }
            let y = if x1 == x0 {
                y0.max(y1)
            } else {
                y0 + (y1 - y0) * (t - x0) / (x1 - x0)
            };
            best = Some(best.map_or(y, |b: f64| b.max(y)));
        }
        best.ok_or_else(|| Error::Input(format!("t = {t} not covered by the boundary")))
    }
}

pub fn boundary_process(p: &ParticleConfiguration) -> BoundaryProcess {
    let n = p.n as i64;
    let pt = |j: i64, x: i64| ((2 * j - x - n) as f64, x as f64 - 0.5);
    let mut vertices = vec![pt(0, p.top(0))];
    for j in 1..=n {
        vertices.push(pt(j, p.top(2 * j as usize - 1)));
        vertices.push(pt(j, p.top(2 * j as usize)));
    }
    BoundaryProcess { n: p.n, vertices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet};

    fn all_horizontal_n1() -> Tiling {
        Tiling::from_placements(
            1,
            &[
                (-1, 0, Orientation::Horizontal),
                (-1, -1, Orientation::Horizontal),
            ],
        )
        .unwrap()
    }

    fn all_vertical_n1() -> Tiling {
        Tiling::from_placements(
            1,
            &[
                (-1, -1, Orientation::Vertical),
                (0, -1, Orientation::Vertical),
            ],
        )
        .unwrap()
    }

    #[test]
    fn cell_count() {
        for n in 1..8 {
            assert_eq!(AztecDiamond::new(n).unwrap().cells().len(), 2 * n * (n + 1));
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_domino(-1, 0, Orientation::Horizontal, 1).unwrap(),
            DominoClass::N
        );
        assert_eq!(
            classify_domino(-1, -1, Orientation::Horizontal, 1).unwrap(),
            DominoClass::S
        );
        assert_eq!(
            classify_domino(-1, -1, Orientation::Vertical, 1).unwrap(),
            DominoClass::W
        );
        assert_eq!(
            classify_domino(0, -1, Orientation::Vertical, 1).unwrap(),
            DominoClass::E
        );
        assert!(classify_domino(0, 0, Orientation::Horizontal, 1).is_err());
    }

    #[test]
    fn coordinate_frames() {
        let n = 5;
        assert_eq!(cs2_to_cs1((0.0, 0.0), n), (-5.0, -0.5));
        assert_eq!(cs2_to_cs1((1.0, 0.0), 1), (0.0, 0.5));
        for &p in &[(0.3, -2.0), (4.0, 7.5), (-1.25, 0.0)] {
            let q = cs1_to_cs2(cs2_to_cs1(p, n), n);
            assert!((q.0 - p.0).abs() < 1e-12 && (q.1 - p.1).abs() < 1e-12);
        }
    }

    #[test]
    fn enumeration_counts() {
        let t1 = enumerate_tilings(1, 0.5, DEFAULT_ENUM_CAP).unwrap();
        let mut w: Vec<f64> = t1.iter().map(|x| x.1).collect();
        w.sort_by(f64::total_cmp);
        assert_eq!(w, vec![0.25, 1.0]);
        assert_eq!(enumerate_tilings(2, 1.0, 4).unwrap().len(), 8);
        assert_eq!(enumerate_tilings(3, 1.0, 4).unwrap().len(), 64);
        assert_eq!(enumerate_tilings(4, 1.0, 4).unwrap().len(), 1024);
        assert!(matches!(
            enumerate_tilings(5, 1.0, 4),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn tiling_invariants() {
        for n in 1..=4 {
            for (t, _) in enumerate_tilings(n, 1.0, 4).unwrap() {
                assert_eq!(t.dominoes.len(), n * (n + 1));
                assert_eq!(t.vertical_count() % 2, 0);
            }
        }
    }

    #[test]
    fn polar_region_examples() {
        let h = all_horizontal_n1();
        let r = polar_regions(&h);
        assert_eq!(r.north.len(), 1);
        assert_eq!(h.dominoes[r.north[0]].y, 0);
        assert_eq!(r.south.len(), 1);
        assert!(r.temperate.is_empty());
        let v = polar_regions(&all_vertical_n1());
        assert_eq!((v.west.len(), v.east.len()), (1, 1));
        for n in 1..=4 {
            for (t, _) in enumerate_tilings(n, 1.0, 4).unwrap() {
                let r = polar_regions(&t);
                let mut all: Vec<usize> = [r.north, r.south, r.west, r.east, r.temperate].concat();
                all.sort();
                assert_eq!(all, (0..t.dominoes.len()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn dr_path_examples() {
        let h = dr_paths(&all_horizontal_n1());
        assert_eq!(h.cs1_points(1), vec![(-1.0, -0.5), (1.0, -0.5)]);
        let v = dr_paths(&all_vertical_n1());
        assert_eq!(v.cs1_points(1), vec![(-1.0, -0.5), (0.0, 0.5), (1.0, -0.5)]);
    }

    #[test]
    fn paths_end_at_b_and_are_disjoint() {
        for n in 1..=4 {
            for (t, _) in enumerate_tilings(n, 1.0, 4).unwrap() {
                let fam = dr_paths(&t);
                let mut seen = HashSet::new();
                for (k, path) in fam.paths.iter().enumerate() {
                    let k = k as i64 + 1;
                    let last = *path.last().unwrap();
                    assert_eq!(fam.to_cs2(last), (n as i64 + 1 - k, -(n as i64)));
                    assert_eq!(fam.to_cs2(path[0]), (0, 1 - k));
                    for &v in path {
                        assert!(seen.insert(v), "paths share a vertex");
                    }
                }
            }
        }
    }

    #[test]
    fn particle_examples() {
        let h = particles_from_tiling(&all_horizontal_n1());
        assert_eq!(h.lines[1], vec![0]);
        let v = particles_from_tiling(&all_vertical_n1());
        assert_eq!(v.lines[1], vec![1]);
        assert_eq!(v.lines[0], vec![0]);
        assert_eq!(v.lines[2], vec![0]);
    }

    #[test]
    fn particles_injective_and_interlaced() {
        for n in 1..=3 {
            let mut seen = HashSet::new();
            for (t, _) in enumerate_tilings(n, 1.0, 4).unwrap() {
                let p = particles_from_tiling(&t);
                assert!(p.is_interlaced());
                for r in 1..2 * n {
                    assert!(p.top(r) <= ParticleConfiguration::window_ceiling(r));
                }
                assert!(seen.insert(p));
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let b = boundary_process(&particles_from_tiling(&all_horizontal_n1()));
        for t in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert_eq!(b.value_at(t).unwrap(), -0.5);
        }
        let b = boundary_process(&particles_from_tiling(&all_vertical_n1()));
        assert_eq!(b.value_at(0.0).unwrap(), 0.5);
        assert_eq!(b.vertices.first().copied(), Some((-1.0, -0.5)));
        assert_eq!(b.vertices.last().copied(), Some((1.0, -0.5)));
    }

    #[test]
    fn npr_lies_above_boundary() {
        for n in 1..=4 {
            for (t, _) in enumerate_tilings(n, 1.0, 4).unwrap() {
                let b = boundary_process(&particles_from_tiling(&t));
                let north: HashSet<usize> = polar_regions(&t).north.into_iter().collect();
                for (i, d) in t.dominoes.iter().enumerate() {
                    let (cx, cy) = match d.orient {
                        Orientation::Horizontal => (d.x as f64 + 1.0, d.y as f64 + 0.5),
                        Orientation::Vertical => (d.x as f64 + 0.5, d.y as f64 + 1.0),
                    };
                    let above = cy > b.value_at(cx).unwrap();
                    assert_eq!(above, north.contains(&i), "n={n} domino {d:?}");
                    if above {
                        assert_eq!(d.class, DominoClass::N);
                    }
                }
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_and_valid() {
        let a = sample_tiling(12, 0.7, 99).unwrap();
        let b = sample_tiling(12, 0.7, 99).unwrap();
        assert_eq!(a, b);
        let placements: Vec<_> = a.dominoes.iter().map(|d| (d.x, d.y, d.orient)).collect();
        let rebuilt = Tiling::from_placements(12, &placements).unwrap();
        assert_eq!(rebuilt, a);
        assert!(particles_from_tiling(&a).is_interlaced());
    }

    #[test]
    fn sampler_n1_frequency() {
        let a = 0.5;
        let trials = 40_000;
        let vertical = (0..trials)
            .filter(|&i| {
                sample_tiling(1, a, derive_seed(7, i))
                    .unwrap()
                    .vertical_count()
                    == 2
            })
            .count();
        let p = a * a / (1.0 + a * a);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((vertical as f64 / trials as f64 - p).abs() < 4.0 * sigma);
    }

    #[test]
    fn sampler_matches_enumeration_n2() {
        let a = 0.5;
        let exact = enumerate_tilings(2, a, 4).unwrap();
        let z: f64 = exact.iter().map(|x| x.1).sum();
        let mut counts: HashMap<Tiling, usize> = HashMap::new();
        let trials = 100_000u64;
        for i in 0..trials {
            *counts
                .entry(sample_tiling(2, a, derive_seed(3, i)).unwrap())
                .or_default() += 1;
        }
        assert_eq!(counts.len(), 8);
        let tv: f64 = exact
            .iter()
            .map(|(t, w)| {
                (counts.get(t).copied().unwrap_or(0) as f64 / trials as f64 - w / z).abs()
            })
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.01, "tv = {tv}");
    }

    #[test]
    fn json_and_csv_shapes() {
        let t = all_vertical_n1();
        let j = t.to_json(1.0);
        assert_eq!(j["n"], 1);
        assert_eq!(j["dominoes"].as_array().unwrap().len(), 2);
        assert_eq!(j["dominoes"][0]["orient"], "v");
        let csv = particles_from_tiling(&t).to_csv();
        assert_eq!(csv, "line,rank,position\n1,1,1\n");
        assert!(t.to_svg().starts_with("<svg"));
    }
}
