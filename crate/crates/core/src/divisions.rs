//! Countable divisions of a set's interior, materialized as finite dyadic
//! prefixes with a certified tail.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::DivisionError;
use crate::geometry::{scalar, BoxClass, Interval, Region, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct DivisionCell {
    pub generation: u32,
    pub interval: Interval,
}

impl fmt::Debug for DivisionCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.generation, self.interval)
    }
}

/// `|host°| − Σ|cells|`: exact for interval-algebra hosts, an upper bound otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TailMeasure {
    Exact(#[serde(serialize_with = "ser_scalar")] Scalar),
    Bound(f64),
}

fn ser_scalar<S: serde::Serializer>(q: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(scalar::to_f64(q))
}

impl TailMeasure {
    pub fn to_f64(&self) -> f64 {
        match self {
            TailMeasure::Exact(q) => scalar::to_f64(q),
            TailMeasure::Bound(b) => *b,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TailMeasure::Exact(q) => q.is_zero(),
            TailMeasure::Bound(b) => *b == 0.0,
        }
    }
}

#[derive(Clone)]
pub struct Division {
    cells: Vec<DivisionCell>,
    host: Arc<dyn Region>,
    covers_interior: bool,
    tail: TailMeasure,
    depth: u32,
}

impl fmt::Debug for Division {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Division")
            .field("depth", &self.depth)
            .field("cells", &self.cells.len())
            .field("covers_interior", &self.covers_interior)
            .field("tail", &self.tail)
            .finish()
    }
}

impl Division {
    /// A division from explicit cells; they must be pairwise non-overlapping
    /// and lie in the host.
    pub fn from_cells(
        cells: Vec<DivisionCell>,
        host: Arc<dyn Region>,
        covers_interior: bool,
        tail: TailMeasure,
        depth: u32,
    ) -> Result<Self, DivisionError> {
        for (i, a) in cells.iter().enumerate() {
            if host.classify(&a.interval) != BoxClass::Inside {
                return Err(DivisionError::Geometry(crate::GeometryError::OutsideBoundingBox));
            }
            if cells[..i].iter().any(|b| b.interval.overlaps(&a.interval)) {
                return Err(DivisionError::Geometry(crate::GeometryError::MalformedBox(format!(
                    "division cell {} overlaps an earlier cell",
                    a.interval
                ))));
            }
        }
        Ok(Division {
            cells,
            host,
            covers_interior,
            tail,
            depth,
        })
    }

    pub fn cells(&self) -> &[DivisionCell] {
        &self.cells
    }

    pub fn intervals(&self) -> impl Iterator<Item = &Interval> {
        self.cells.iter().map(|c| &c.interval)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn host(&self) -> &Arc<dyn Region> {
        &self.host
    }

    pub fn covers_interior(&self) -> bool {
        self.covers_interior
    }

    pub fn tail_measure(&self) -> &TailMeasure {
        &self.tail
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn covered_measure(&self) -> Scalar {
        self.cells.iter().map(|c| c.interval.volume()).sum()
    }

    /// Keeps the cells selected by `keep`; the result no longer covers the interior.
    pub fn sparse(&self, keep: impl Fn(usize) -> bool) -> Division {
        let cells: Vec<DivisionCell> = self
            .cells
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, c)| c.clone())
            .collect();
        let tail = match &self.tail {
            TailMeasure::Exact(_) => match self.host.exact_measure() {
                Some(m) => TailMeasure::Exact(m - cells.iter().map(|c| c.interval.volume()).sum::<Scalar>()),
                None => TailMeasure::Bound(self.host.measure_f64()),
            },
            TailMeasure::Bound(b) => TailMeasure::Bound(
                b + scalar::to_f64(
                    &(self.covered_measure() - cells.iter().map(|c| c.interval.volume()).sum::<Scalar>()),
                ),
            ),
        };
        Division {
            cells,
            host: self.host.clone(),
            covers_interior: false,
            tail,
            depth: self.depth,
        }
    }

    /// Dump format: a header, then `generation | box` per cell.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "# division of {}\n# depth {} cells {} tail {} ({})\n",
            self.host.describe(),
            self.depth,
            self.cells.len(),
            match &self.tail {
                TailMeasure::Exact(q) => scalar::fmt_scalar(q),
                TailMeasure::Bound(b) => format!("{b:e}"),
            },
            match &self.tail {
                TailMeasure::Exact(_) => "exact",
                TailMeasure::Bound(_) => "bound",
            }
        );
        for c in &self.cells {
            out.push_str(&format!("{} | {}\n", c.generation, c.interval));
        }
        out
    }
}

/// Maximal dyadic boxes of generations `1..=depth` (anchored to the host's
/// bounding box) whose interiors lie in the host's interior, in canonical
/// `(generation, lexicographic)` order.
///
/// Depth 0 yields an empty prefix.
pub fn dyadic_division(host: Arc<dyn Region>, depth: u32) -> Result<Division, DivisionError> {
    if host.measure_f64() <= 0.0 {
        return Err(DivisionError::EmptyInterior);
    }
    let mut cells = Vec::new();
    let mut straddle = Scalar::zero();
    let mut frontier = vec![host.bounding_box().clone()];
    for generation in 1..=depth {
        let mut next = Vec::new();
        for parent in &frontier {
            for child in parent.bisect_all() {
                match host.classify(&child) {
                    BoxClass::Inside => cells.push(DivisionCell {
                        generation,
                        interval: child,
                    }),
                    BoxClass::Outside => {}
                    BoxClass::Boundary => {
                        if generation == depth {
                            straddle += child.volume();
                        } else {
                            next.push(child);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    if depth == 0 {
        straddle = host.bounding_box().volume();
    }
    cells.sort_by(|a, b| {
        a.generation
            .cmp(&b.generation)
            .then_with(|| a.interval.cmp(&b.interval))
    });
    let covered: Scalar = cells.iter().map(|c| c.interval.volume()).sum();
    let tail = match host.exact_measure() {
        Some(m) if host.is_exact() => TailMeasure::Exact(m - covered),
        _ => TailMeasure::Bound(scalar::to_f64(&straddle)),
    };
    Ok(Division {
        cells,
        host,
        covers_interior: true,
        tail,
        depth,
    })
}

/// Same cells in a seeded order; seed 0 keeps the order.
pub fn permute_division(d: &Division, seed: u64) -> Division {
    let mut out = d.clone();
    if seed != 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        out.cells.shuffle(&mut rng);
    }
    out
}

/// `(k, I ∩ C_k)` for every cell overlapping `I`, in division order.
pub fn restrict_division(d: &Division, i: &Interval) -> Vec<(usize, Interval)> {
    d.cells
        .iter()
        .enumerate()
        .filter_map(|(k, c)| c.interval.meet(i).map(|j| (k, j)))
        .collect()
}
