//! Tagged intervals and tagged partitions.

use std::fmt;

use serde::Serialize;

use super::gauge::Gauge;
use crate::error::PartitionError;
use crate::geometry::{Interval, IntervalAlgebraSet, Point, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PartitionMode {
    /// Tags may lie outside their boxes.
    M,
    /// Every tag lies in its box.
    HK,
}

#[derive(Clone, PartialEq, Eq)]
pub struct TaggedInterval {
    pub tag: Point,
    pub interval: Interval,
}

impl fmt::Debug for TaggedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.tag, self.interval)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct TaggedPartition {
    items: Vec<TaggedInterval>,
    mode: PartitionMode,
}

impl fmt::Debug for TaggedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TaggedPartition")
            .field("mode", &self.mode)
            .field("items", &self.items)
            .finish()
    }
}

impl TaggedPartition {
    /// Checks the pairwise non-overlap invariant, and tag ∈ box in HK mode.
    pub fn new(items: Vec<TaggedInterval>, mode: PartitionMode) -> Result<Self, PartitionError> {
        let p = TaggedPartition { items, mode };
        if let Some(index) = p.first_invalid_item() {
            return Err(PartitionError::Parse {
                line: index + 1,
                message: "boxes overlap, or an HK tag lies outside its box".into(),
            });
        }
        Ok(p)
    }

    pub(crate) fn new_unchecked(items: Vec<TaggedInterval>, mode: PartitionMode) -> Self {
        TaggedPartition { items, mode }
    }

    pub fn empty(mode: PartitionMode) -> Self {
        TaggedPartition {
            items: Vec::new(),
            mode,
        }
    }

    fn first_invalid_item(&self) -> Option<usize> {
        for (i, a) in self.items.iter().enumerate() {
            if self.mode == PartitionMode::HK && !a.interval.contains_point(&a.tag) {
                return Some(i);
            }
            if self.items[..i].iter().any(|b| b.interval.overlaps(&a.interval)) {
                return Some(i);
            }
        }
        None
    }

    pub fn items(&self) -> &[TaggedInterval] {
        &self.items
    }

    pub fn mode(&self) -> PartitionMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn with_mode(mut self, mode: PartitionMode) -> Result<Self, PartitionError> {
        self.mode = mode;
        if let Some(index) = self.first_invalid_item() {
            return Err(PartitionError::Parse {
                line: index + 1,
                message: "tag outside its box".into(),
            });
        }
        Ok(self)
    }

    pub fn total_volume(&self) -> Scalar {
        self.items.iter().map(|it| it.interval.volume()).sum()
    }

    /// Sub-collection by item indices.
    pub fn select(&self, indices: &[usize]) -> TaggedPartition {
        TaggedPartition {
            items: indices.iter().map(|&i| self.items[i].clone()).collect(),
            mode: self.mode,
        }
    }

    /// Line format: `# mode HK` then one `tag | box` per item.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# mode {}\n",
            match self.mode {
                PartitionMode::M => "M",
                PartitionMode::HK => "HK",
            }
        );
        for it in &self.items {
            out.push_str(&format!("{} | {}\n", it.tag, it.interval));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, PartitionError> {
        let mut mode = PartitionMode::HK;
        let mut items = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(m) = rest.strip_prefix("mode") {
                    mode = match m.trim() {
                        "M" => PartitionMode::M,
                        "HK" => PartitionMode::HK,
                        other => {
                            return Err(PartitionError::Parse {
                                line: n + 1,
                                message: format!("unknown mode `{other}`"),
                            })
                        }
                    };
                }
                continue;
            }
            let (tag, b) = line.split_once('|').ok_or_else(|| PartitionError::Parse {
                line: n + 1,
                message: "expected `tag | box`".into(),
            })?;
            let wrap = |e: crate::GeometryError| PartitionError::Parse {
                line: n + 1,
                message: e.to_string(),
            };
            items.push(TaggedInterval {
                tag: Point::parse(tag).map_err(wrap)?,
                interval: Interval::parse(b).map_err(wrap)?,
            });
        }
        TaggedPartition::new(items, mode)
    }
}

pub fn is_delta_fine(p: &TaggedPartition, delta: &Gauge) -> bool {
    p.items()
        .iter()
        .all(|it| it.interval.in_ball(&it.tag, &delta.radius(&it.tag)))
}

/// Boxes non-overlapping, inside `i`, and of total volume `|i|`.
pub fn is_partition_of(p: &TaggedPartition, i: &Interval) -> bool {
    let items = p.items();
    if items.iter().any(|it| !i.contains_interval(&it.interval)) {
        return false;
    }
    non_overlapping(items.iter().map(|it| &it.interval)) && p.total_volume() == i.volume()
}

/// Pairwise non-overlap by a sweep along the first axis.
pub fn non_overlapping<'a>(boxes: impl IntoIterator<Item = &'a Interval>) -> bool {
    let mut sorted: Vec<&Interval> = boxes.into_iter().collect();
    sorted.sort_by(|a, b| a.lo(0).cmp(b.lo(0)));
    let mut active: Vec<&Interval> = Vec::new();
    for b in sorted {
        active.retain(|a| a.hi(0) > b.lo(0));
        if active.iter().any(|a| a.overlaps(b)) {
            return false;
        }
        active.push(b);
    }
    true
}

/// Point sets used as tag constraints.
#[derive(Clone)]
pub enum ZSet {
    Points(Vec<Point>),
    /// The boundary `∂S` of an interval-algebra set.
    Boundary(IntervalAlgebraSet),
    /// `W ∖ G°` for a box `W` and region `G`.
    Complement {
        within: Interval,
        of: std::sync::Arc<dyn crate::geometry::Region>,
    },
}

impl fmt::Debug for ZSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZSet::Points(p) => write!(f, "Points({p:?})"),
            ZSet::Boundary(s) => write!(f, "Boundary({s:?})"),
            ZSet::Complement { within, of } => write!(f, "{within} minus interior of {}", of.describe()),
        }
    }
}

impl ZSet {
    pub fn contains(&self, t: &Point) -> bool {
        match self {
            ZSet::Points(ps) => ps.contains(t),
            ZSet::Boundary(s) => s.contains_point(t) && !s.interior_contains(t),
            ZSet::Complement { within, of } => within.contains_point(t) && !of.interior_contains(t),
        }
    }

    /// Whether the set is known to have no points. Boundaries of bounded
    /// sets and complements of interiors in a closed box never are.
    pub fn is_empty(&self) -> bool {
        match self {
            ZSet::Points(ps) => ps.is_empty(),
            ZSet::Boundary(_) | ZSet::Complement { .. } => false,
        }
    }
}

pub fn is_z_tagged(p: &TaggedPartition, z: &ZSet) -> bool {
    p.items().iter().all(|it| z.contains(&it.tag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};

    fn item(tag: &str, b: &str) -> TaggedInterval {
        TaggedInterval {
            tag: Point::parse(tag).unwrap(),
            interval: Interval::parse(b).unwrap(),
        }
    }

    #[test]
    fn fineness_examples() {
        let p = TaggedPartition::new(vec![item("(1/2)", "[0,1]")], PartitionMode::HK).unwrap();
        assert!(is_delta_fine(&p, &Gauge::constant(int(10))));
        // Corner at distance exactly 1/2 from the tag.
        assert!(!is_delta_fine(&p, &Gauge::constant(ratio(1, 2))));
    }

    #[test]
    fn partition_of_examples() {
        let unit = Interval::unit_cube(1);
        let halves = TaggedPartition::new(
            vec![item("(1/4)", "[0,1/2]"), item("(3/4)", "[1/2,1]")],
            PartitionMode::HK,
        )
        .unwrap();
        assert!(is_partition_of(&halves, &unit));
        assert!(!is_partition_of(&halves.select(&[0]), &unit));
        let quads = TaggedPartition::new(
            Interval::unit_cube(2)
                .bisect_all()
                .into_iter()
                .map(|b| TaggedInterval {
                    tag: b.center(),
                    interval: b,
                })
                .collect(),
            PartitionMode::HK,
        )
        .unwrap();
        assert!(is_partition_of(&quads, &Interval::unit_cube(2)));
    }

    #[test]
    fn z_tagged_examples() {
        let z = ZSet::Points(vec![Point::parse("(1/2)").unwrap()]);
        let p = TaggedPartition::new(vec![item("(1/2)", "[1/4,3/4]")], PartitionMode::HK).unwrap();
        assert!(is_z_tagged(&p, &z));
        let off = TaggedPartition::new(vec![item("(5/8)", "[1/4,3/4]")], PartitionMode::HK).unwrap();
        assert!(!is_z_tagged(&off, &z));
        assert!(is_z_tagged(&TaggedPartition::empty(PartitionMode::M), &z));
    }

    #[test]
    fn hk_mode_rejects_outside_tags() {
        assert!(TaggedPartition::new(vec![item("(2)", "[0,1]")], PartitionMode::HK).is_err());
        assert!(TaggedPartition::new(vec![item("(2)", "[0,1]")], PartitionMode::M).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let p = TaggedPartition::new(vec![item("(0)", "[0,1/2]"), item("(3/4)", "[1/2,1]")], PartitionMode::M).unwrap();
        let text = p.to_text();
        assert_eq!(text, "# mode M\n(0) | [0,1/2]\n(3/4) | [1/2,1]\n");
        assert_eq!(TaggedPartition::parse(&text).unwrap(), p);
    }
}
