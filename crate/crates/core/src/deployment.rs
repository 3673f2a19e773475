//! Placement of non-overlapping RF-source discs over an event field,
//! seeded node scatter, coverage measurement and interference detection.
//!
//! Random points come from ChaCha8 with one stream per fixed-size batch of
//! point indices, so the sample sequence depends only on `(seed, index)`
//! and not on how batches are spread over worker threads.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coverage::EventField;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::quantities::Length;

/// Points generated per RNG stream.
pub const BATCH_SIZE: usize = 4096;

/// Relative slack on the `2 r_rf` spacing test. Hex rows are built from
/// `r * sqrt(3)`, so tangent neighbours land a few ulps either side of
/// `2 r`; they must not be reported as overlapping.
pub const SPACING_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    SquareGrid,
    HexGrid,
    Explicit,
}

/// Regular placements produced by [`place_sources`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    Square,
    Hex,
}

impl From<Grid> for Strategy {
    fn from(g: Grid) -> Self {
        match g {
            Grid::Square => Strategy::SquareGrid,
            Grid::Hex => Strategy::HexGrid,
        }
    }
}

/// RF sources sharing a common activation range.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    field: EventField,
    sources: Vec<Point>,
    r_rf: Length,
    strategy: Strategy,
}

impl Deployment {
    /// Deployment at caller-chosen positions. Positions must lie in the
    /// field but may overlap.
    pub fn explicit(field: EventField, r_rf: Length, sources: Vec<Point>) -> Result<Self> {
        for (index, p) in sources.iter().enumerate() {
            if !field.contains(p.x, p.y) {
                return Err(Error::SourceOutsideField { index, x: p.x, y: p.y });
            }
        }
        Ok(Self {
            field,
            sources,
            r_rf,
            strategy: Strategy::Explicit,
        })
    }

    pub fn field(&self) -> &EventField {
        &self.field
    }

    pub fn sources(&self) -> &[Point] {
        &self.sources
    }

    pub fn r_rf(&self) -> Length {
        self.r_rf
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }
}

/// `floor(x)` that forgives values a few ulps below an integer.
fn slack_floor(x: f64) -> usize {
    (x * (1.0 + SPACING_REL_TOL)).floor() as usize
}

/// Places discs of radius `r_rf` on a regular grid with every disc wholly
/// inside the field and no two discs overlapping.
pub fn place_sources(field: EventField, r_rf: Length, grid: Grid) -> Result<Deployment> {
    let r = r_rf.as_meters();
    let w = field.width().as_meters();
    let h = field.height().as_meters();
    let cols = slack_floor(w / (2.0 * r));
    let rows = slack_floor(h / (2.0 * r));
    if cols == 0 || rows == 0 {
        return Err(Error::NoDiscFits {
            r_rf: r,
            width: w,
            height: h,
        });
    }

    let mut sources = Vec::new();
    match grid {
        Grid::Square => {
            for j in 0..rows {
                for i in 0..cols {
                    sources.push(Point::new(
                        (2 * i + 1) as f64 * r,
                        (2 * j + 1) as f64 * r,
                    ));
                }
            }
        }
        Grid::Hex => {
            let pitch = r * 3f64.sqrt();
            let hex_rows = slack_floor((h - 2.0 * r) / pitch) + 1;
            for j in 0..hex_rows {
                let y = r + j as f64 * pitch;
                let offset = if j % 2 == 1 { r } else { 0.0 };
                if w - 2.0 * r - offset < -SPACING_REL_TOL * w {
                    continue;
                }
                let per_row = slack_floor((w - 2.0 * r - offset) / (2.0 * r)) + 1;
                for i in 0..per_row {
                    let x = r + offset + (2 * i) as f64 * r;
                    sources.push(Point::new(x.min(w - r), y.min(h - r)));
                }
            }
        }
    }

    Ok(Deployment {
        field,
        sources,
        r_rf,
        strategy: grid.into(),
    })
}

/// Passive nodes scattered uniformly over a field.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeField {
    field: EventField,
    positions: Vec<Point>,
    seed: u64,
}

impl NodeField {
    /// Nodes at given positions. Positions must lie in the field.
    pub fn from_positions(field: EventField, positions: Vec<Point>) -> Result<Self> {
        for (index, p) in positions.iter().enumerate() {
            if !field.contains(p.x, p.y) {
                return Err(Error::SourceOutsideField { index, x: p.x, y: p.y });
            }
        }
        Ok(Self {
            field,
            positions,
            seed: 0,
        })
    }

    pub fn field(&self) -> &EventField {
        &self.field
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

fn batch_rng(seed: u64, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    rng
}

fn batch_points(field: &EventField, n: usize, seed: u64, batch: usize) -> Vec<Point> {
    let w = field.width().as_meters();
    let h = field.height().as_meters();
    let start = batch * BATCH_SIZE;
    let len = BATCH_SIZE.min(n - start);
    let mut rng = batch_rng(seed, batch);
    (0..len)
        .map(|_| {
            let x = rng.random::<f64>() * w;
            let y = rng.random::<f64>() * h;
            Point::new(x, y)
        })
        .collect()
}

fn batch_count(n: usize) -> usize {
    n.div_ceil(BATCH_SIZE)
}

/// Uniform points over the field; point `i` depends only on `(seed, i)`.
pub fn sample_points(field: &EventField, n: usize, seed: u64, exec: Execution) -> Vec<Point> {
    par::map_range(batch_count(n), exec, |b| batch_points(field, n, seed, b))
        .into_iter()
        .flatten()
        .collect()
}

pub fn scatter_nodes(field: EventField, n: usize, seed: u64) -> NodeField {
    scatter_nodes_with(field, n, seed, Execution::default())
}

pub fn scatter_nodes_with(field: EventField, n: usize, seed: u64, exec: Execution) -> NodeField {
    NodeField {
        positions: sample_points(&field, n, seed, exec),
        field,
        seed,
    }
}

/// Uniform bucket grid over source centers. Cells are at least `r_rf`
/// wide, so a disc covering a point has its center in the point's cell or
/// one of the eight neighbours.
struct DiscIndex<'a> {
    sources: &'a [Point],
    r2: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl<'a> DiscIndex<'a> {
    fn new(dep: &'a Deployment) -> Self {
        let w = dep.field.width().as_meters();
        let h = dep.field.height().as_meters();
        let r = dep.r_rf.as_meters();
        let n = dep.sources.len().max(1) as f64;
        let cell = r.max((w * h / n).sqrt());
        let nx = (w / cell).floor() as usize + 1;
        let ny = (h / cell).floor() as usize + 1;
        let mut buckets = vec![Vec::new(); nx * ny];
        for (i, p) in dep.sources.iter().enumerate() {
            let (cx, cy) = Self::cell_of(cell, nx, ny, p);
            buckets[cy * nx + cx].push(i as u32);
        }
        Self {
            sources: &dep.sources,
            r2: r * r,
            cell,
            nx,
            ny,
            buckets,
        }
    }

    fn cell_of(cell: f64, nx: usize, ny: usize, p: &Point) -> (usize, usize) {
        let cx = ((p.x / cell).floor().max(0.0) as usize).min(nx - 1);
        let cy = ((p.y / cell).floor().max(0.0) as usize).min(ny - 1);
        (cx, cy)
    }

    fn neighbours(&self, p: &Point) -> impl Iterator<Item = usize> + '_ {
        let (cx, cy) = Self::cell_of(self.cell, self.nx, self.ny, p);
        let xs = cx.saturating_sub(1)..=(cx + 1).min(self.nx - 1);
        let ys = cy.saturating_sub(1)..=(cy + 1).min(self.ny - 1);
        ys.flat_map(move |y| xs.clone().map(move |x| y * self.nx + x))
            .flat_map(move |b| self.buckets[b].iter().map(|&i| i as usize))
    }

    fn inside(&self, i: usize, p: &Point) -> bool {
        let s = &self.sources[i];
        let dx = s.x - p.x;
        let dy = s.y - p.y;
        dx * dx + dy * dy <= self.r2
    }

    fn is_covered(&self, p: &Point) -> bool {
        self.neighbours(p).any(|i| self.inside(i, p))
    }

    /// Indices of every disc containing `p`, ascending.
    fn covering(&self, p: &Point) -> Vec<usize> {
        let mut hits: Vec<usize> = self.neighbours(p).filter(|&i| self.inside(i, p)).collect();
        hits.sort_unstable();
        hits
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub covered_count: usize,
    pub total_count: usize,
    /// Zero when there are no nodes.
    pub coverage_fraction: f64,
    /// Per node, the ascending indices of sources whose closed disc holds it.
    pub feeding_sources: Vec<Vec<usize>>,
}

pub fn coverage_report(dep: &Deployment, nodes: &NodeField) -> Result<CoverageReport> {
    coverage_report_with(dep, nodes, Execution::default())
}

pub fn coverage_report_with(
    dep: &Deployment,
    nodes: &NodeField,
    exec: Execution,
) -> Result<CoverageReport> {
    if dep.field != nodes.field {
        return Err(Error::FieldMismatch);
    }
    let index = DiscIndex::new(dep);
    let feeding_sources = par::map_slice(&nodes.positions, exec, |p| index.covering(p));
    let covered_count = feeding_sources.iter().filter(|f| !f.is_empty()).count();
    let total_count = nodes.positions.len();
    let coverage_fraction = if total_count == 0 {
        0.0
    } else {
        covered_count as f64 / total_count as f64
    };
    Ok(CoverageReport {
        covered_count,
        total_count,
        coverage_fraction,
        feeding_sources,
    })
}

/// Fraction of `samples` uniform field points lying in at least one disc.
pub fn monte_carlo_coverage(dep: &Deployment, samples: usize, seed: u64) -> Result<f64> {
    monte_carlo_coverage_with(dep, samples, seed, Execution::default())
}

pub fn monte_carlo_coverage_with(
    dep: &Deployment,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidQuantity {
            quantity: "sample count",
            value: 0.0,
            reason: "must be positive",
        });
    }
    if dep.is_empty() {
        return Ok(0.0);
    }
    let index = DiscIndex::new(dep);
    let hits = par::sum_range(batch_count(samples), exec, |b| {
        batch_points(&dep.field, samples, seed, b)
            .iter()
            .filter(|p| index.is_covered(p))
            .count() as u64
    });
    Ok(hits as f64 / samples as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourcePair {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferenceReport {
    /// Source pairs (i < j) whose ranges overlap, ordered by (i, j).
    pub source_pairs: Vec<SourcePair>,
    /// Nodes inside two or more source ranges, ascending.
    pub multi_fed_nodes: Vec<usize>,
}

impl InterferenceReport {
    pub fn is_clear(&self) -> bool {
        self.source_pairs.is_empty() && self.multi_fed_nodes.is_empty()
    }
}

/// Whether two discs of radius `r` centered `d` apart overlap.
pub fn ranges_overlap(d: f64, r: f64) -> bool {
    d < 2.0 * r * (1.0 - SPACING_REL_TOL)
}

/// Flags source-to-source interference (overlapping ranges) and
/// source-to-node interference (nodes fed by more than one source).
pub fn detect_interference(dep: &Deployment, nodes: &NodeField) -> Result<InterferenceReport> {
    let coverage = coverage_report(dep, nodes)?;
    let r = dep.r_rf.as_meters();
    // buckets of side 2r: any overlapping pair sits in adjacent buckets
    let side = 2.0 * r;
    let key = |p: &Point| ((p.x / side).floor() as i64, (p.y / side).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in dep.sources.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(i);
    }
    let mut source_pairs = Vec::new();
    for (i, a) in dep.sources.iter().enumerate() {
        let (kx, ky) = key(a);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = buckets.get(&(kx + dx, ky + dy)) else {
                    continue;
                };
                for &j in bucket.iter().filter(|&&j| j > i) {
                    let distance = a.distance(&dep.sources[j]);
                    if ranges_overlap(distance, r) {
                        source_pairs.push(SourcePair { i, j, distance });
                    }
                }
            }
        }
    }
    source_pairs.sort_unstable_by_key(|p| (p.i, p.j));
    let multi_fed_nodes = coverage
        .feeding_sources
        .iter()
        .enumerate()
        .filter(|(_, f)| f.len() >= 2)
        .map(|(n, _)| n)
        .collect();
    Ok(InterferenceReport {
        source_pairs,
        multi_fed_nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::source_count_from_range;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn m(v: f64) -> Length {
        Length::meters(v).unwrap()
    }

    fn field(w: f64, h: f64) -> EventField {
        EventField::new(m(w), m(h))
    }

    #[test]
    fn square_grid_counts() {
        let dep = place_sources(field(100.0, 100.0), m(13.49), Grid::Square).unwrap();
        assert_eq!(dep.len(), 9);
        assert_eq!(dep.strategy(), super::Strategy::SquareGrid);

        let dep = place_sources(field(8.0, 8.0), m(4.0), Grid::Square).unwrap();
        assert_eq!(dep.sources(), &[Point::new(4.0, 4.0)]);
    }

    #[test]
    fn no_disc_fits() {
        assert!(matches!(
            place_sources(field(10.0, 100.0), m(6.0), Grid::Square),
            Err(Error::NoDiscFits { .. })
        ));
        assert!(place_sources(field(100.0, 10.0), m(6.0), Grid::Hex).is_err());
    }

    #[test]
    fn hex_beats_square_on_large_field() {
        let f = field(1000.0, 1000.0);
        let sq = place_sources(f, m(10.0), Grid::Square).unwrap().len();
        let hex = place_sources(f, m(10.0), Grid::Hex).unwrap().len();
        assert_eq!(sq, 2500);
        assert!(hex > sq);
        let ratio = hex as f64 / sq as f64;
        assert!(ratio > 1.10 && ratio < 2.0 / 3f64.sqrt(), "ratio {ratio}");
    }

    #[test]
    fn explicit_rejects_outside() {
        assert!(matches!(
            Deployment::explicit(field(10.0, 10.0), m(1.0), vec![Point::new(11.0, 1.0)]),
            Err(Error::SourceOutsideField { index: 0, .. })
        ));
    }

    #[test]
    fn scatter_basics() {
        let f = field(100.0, 40.0);
        assert!(scatter_nodes(f, 0, 7).is_empty());
        let a = scatter_nodes(f, 10_000, 7);
        let b = scatter_nodes(f, 10_000, 7);
        assert_eq!(a, b);
        assert_ne!(a, scatter_nodes(f, 10_000, 8));
        assert!(a.positions().iter().all(|p| f.contains(p.x, p.y)));
        // prefix-stable: point i depends only on (seed, i)
        let short = scatter_nodes(f, 5000, 7);
        assert_eq!(short.positions(), &a.positions()[..5000]);
    }

    #[test]
    fn scatter_mean() {
        let nodes = scatter_nodes(field(100.0, 100.0), 1_000_000, 42);
        let mean = nodes.positions().iter().map(|p| p.x).sum::<f64>() / nodes.len() as f64;
        assert!((mean - 50.0).abs() < 0.1, "mean {mean}");
    }

    #[test]
    fn coverage_boundary() {
        let f = field(10.0, 10.0);
        let dep = Deployment::explicit(f, m(2.0), vec![Point::new(5.0, 5.0)]).unwrap();
        let nodes = NodeField::from_positions(
            f,
            vec![
                Point::new(5.0 + 0.999 * 2.0, 5.0),
                Point::new(5.0 + 1.001 * 2.0, 5.0),
                Point::new(5.0, 7.0),
            ],
        )
        .unwrap();
        let rep = coverage_report(&dep, &nodes).unwrap();
        assert_eq!(rep.feeding_sources, vec![vec![0], vec![], vec![0]]);
        assert_eq!(rep.covered_count, 2);
        assert_eq!(rep.total_count, 3);
    }

    #[test]
    fn coverage_field_mismatch() {
        let dep = place_sources(field(10.0, 10.0), m(1.0), Grid::Square).unwrap();
        let nodes = scatter_nodes(field(10.0, 11.0), 3, 1);
        assert!(matches!(coverage_report(&dep, &nodes), Err(Error::FieldMismatch)));
        assert!(matches!(detect_interference(&dep, &nodes), Err(Error::FieldMismatch)));
    }

    #[test]
    fn square_tiled_node_coverage_is_quarter_pi() {
        let f = field(100.0, 100.0);
        let dep = place_sources(f, m(5.0), Grid::Square).unwrap();
        let nodes = scatter_nodes(f, 1_000_000, 3);
        let rep = coverage_report(&dep, &nodes).unwrap();
        assert!((rep.coverage_fraction - PI / 4.0).abs() < 0.01);
    }

    #[test]
    fn monte_carlo_examples() {
        let f = field(2.0, 2.0);
        let single = place_sources(f, m(1.0), Grid::Square).unwrap();
        let frac = monte_carlo_coverage(&single, 1_000_000, 11).unwrap();
        assert!((frac - PI / 4.0).abs() < 0.003, "frac {frac}");

        let empty = Deployment::explicit(f, m(1.0), vec![]).unwrap();
        assert_eq!(monte_carlo_coverage(&empty, 1000, 1).unwrap(), 0.0);
        assert!(monte_carlo_coverage(&single, 0, 1).is_err());
    }

    #[test]
    fn monte_carlo_matches_node_coverage_on_same_points() {
        let f = field(300.0, 170.0);
        let dep = place_sources(f, m(12.0), Grid::Hex).unwrap();
        let n = 50_000;
        let nodes = scatter_nodes(f, n, 99);
        let rep = coverage_report(&dep, &nodes).unwrap();
        let mc = monte_carlo_coverage(&dep, n, 99).unwrap();
        assert_eq!(mc, rep.coverage_fraction);
    }

    #[test]
    fn index_agrees_with_brute_force() {
        let f = field(120.0, 80.0);
        let mut sources = scatter_nodes(f, 60, 5).positions().to_vec();
        sources.push(Point::new(0.0, 0.0));
        sources.push(Point::new(120.0, 80.0));
        let dep = Deployment::explicit(f, m(9.0), sources).unwrap();
        let nodes = scatter_nodes(f, 20_000, 6);
        let rep = coverage_report(&dep, &nodes).unwrap();
        for (p, fed) in nodes.positions().iter().zip(&rep.feeding_sources) {
            let brute: Vec<usize> = dep
                .sources()
                .iter()
                .enumerate()
                .filter(|(_, s)| s.distance(p) <= 9.0)
                .map(|(i, _)| i)
                .collect();
            assert_eq!(&brute, fed);
        }
    }

    #[test]
    fn interference_fixtures() {
        let f = field(100.0, 100.0);
        let r = 10.0;
        let apart = Deployment::explicit(
            f,
            m(r),
            vec![Point::new(20.0, 50.0), Point::new(20.0 + 3.0 * r, 50.0)],
        )
        .unwrap();
        let nodes = scatter_nodes(f, 2000, 1);
        assert!(detect_interference(&apart, &nodes).unwrap().is_clear());

        let close = Deployment::explicit(
            f,
            m(r),
            vec![Point::new(20.0, 50.0), Point::new(20.0 + 1.5 * r, 50.0)],
        )
        .unwrap();
        let mid = NodeField::from_positions(f, vec![Point::new(20.0 + 0.75 * r, 50.0)]).unwrap();
        let rep = detect_interference(&close, &mid).unwrap();
        assert_eq!(rep.source_pairs.len(), 1);
        assert_eq!((rep.source_pairs[0].i, rep.source_pairs[0].j), (0, 1));
        assert!((rep.source_pairs[0].distance - 15.0).abs() < 1e-12);
        assert_eq!(rep.multi_fed_nodes, vec![0]);
    }

    #[test]
    fn pair_search_agrees_with_brute_force() {
        let f = field(200.0, 150.0);
        let sources = scatter_nodes(f, 300, 17).positions().to_vec();
        let r = 6.0;
        let dep = Deployment::explicit(f, m(r), sources).unwrap();
        let rep = detect_interference(&dep, &scatter_nodes(f, 10, 1)).unwrap();
        let mut brute = Vec::new();
        for i in 0..dep.len() {
            for j in i + 1..dep.len() {
                if ranges_overlap(dep.sources()[i].distance(&dep.sources()[j]), r) {
                    brute.push((i, j));
                }
            }
        }
        let found: Vec<_> = rep.source_pairs.iter().map(|p| (p.i, p.j)).collect();
        assert!(!brute.is_empty());
        assert_eq!(found, brute);
    }

    fn grid_strategy() -> impl proptest::strategy::Strategy<Value = Grid> {
        prop_oneof![Just(Grid::Square), Just(Grid::Hex)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn grids_never_overlap(
            w in 1.0f64..400.0,
            h in 1.0f64..400.0,
            r in 0.5f64..60.0,
            grid in grid_strategy(),
            seed in any::<u64>(),
        ) {
            let f = field(w, h);
            match place_sources(f, m(r), grid) {
                Err(Error::NoDiscFits { .. }) => prop_assert!(2.0 * r > w.min(h) * (1.0 - 1e-9)),
                Err(e) => prop_assert!(false, "unexpected {e}"),
                Ok(dep) => {
                    prop_assert!(!dep.is_empty());
                    for s in dep.sources() {
                        prop_assert!(f.contains(s.x, s.y));
                        prop_assert!(s.x >= r * (1.0 - 1e-9) && s.x <= w - r * (1.0 - 1e-9));
                        prop_assert!(s.y >= r * (1.0 - 1e-9) && s.y <= h - r * (1.0 - 1e-9));
                    }
                    let nodes = scatter_nodes(f, 500, seed);
                    let rep = detect_interference(&dep, &nodes).unwrap();
                    prop_assert!(rep.is_clear());
                    // placed count never beats the zero-packing-loss bound
                    let bound = source_count_from_range(f.area(), m(r)).exact;
                    prop_assert!(dep.len() as f64 <= bound);
                }
            }
        }

        #[test]
        fn multi_fed_implies_overlapping_pair(
            pts in proptest::collection::vec((0.0f64..50.0, 0.0f64..50.0), 0..8),
            r in 1.0f64..15.0,
            seed in any::<u64>(),
        ) {
            let f = field(50.0, 50.0);
            let sources = pts.into_iter().map(|(x, y)| Point::new(x, y)).collect();
            let dep = Deployment::explicit(f, m(r), sources).unwrap();
            let nodes = scatter_nodes(f, 300, seed);
            let rep = detect_interference(&dep, &nodes).unwrap();
            if !rep.multi_fed_nodes.is_empty() {
                prop_assert!(!rep.source_pairs.is_empty());
            }
            for p in &rep.source_pairs {
                prop_assert!(p.i < p.j);
            }
        }
    }
}
