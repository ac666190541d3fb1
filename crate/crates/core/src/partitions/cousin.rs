//! Constructive Cousin lemma: δ-fine partitions by simultaneous bisection.

use super::gauge::Gauge;
use super::tagged::{PartitionMode, TaggedInterval, TaggedPartition};
use crate::error::PartitionError;
use crate::geometry::{Interval, Point};

/// Tag and acceptance test for one cell.
fn try_accept(cell: &Interval, delta: &Gauge) -> Option<Point> {
    let inside: Vec<&Point> = delta
        .singular_points()
        .iter()
        .filter(|s| cell.contains_point(s))
        .collect();
    match inside.len() {
        0 => {
            let tag = cell.center();
            let reach = cell.circumradius_from(&tag);
            match delta.lower_bound(cell) {
                Some(lb) if lb > reach => Some(tag),
                Some(_) => None,
                None => (delta.radius(&tag) > reach).then_some(tag),
            }
        }
        1 => {
            let s = inside[0];
            (delta.radius(s) > cell.circumradius_from(s)).then(|| s.clone())
        }
        _ => None,
    }
}

/// HK-partition of `i` fine for `delta`.
///
/// Cells are bisected along all axes until accepted. A cell containing one
/// singular point of the gauge is tagged at that point; any other cell is
/// tagged at its centre and accepted once the gauge's lower bound on the cell
/// exceeds its half-edge. Items come out in depth-first lexicographic order.
pub fn cousin_hk_partition(i: &Interval, delta: &Gauge, depth_cap: u32) -> Result<TaggedPartition, PartitionError> {
    let mut items = Vec::new();
    let mut stack = vec![(i.clone(), 0u32)];
    while let Some((cell, depth)) = stack.pop() {
        if let Some(tag) = try_accept(&cell, delta) {
            items.push(TaggedInterval { tag, interval: cell });
            continue;
        }
        if depth >= depth_cap {
            return Err(PartitionError::DepthExceeded { depth_cap });
        }
        for child in cell.bisect_all().into_iter().rev() {
            stack.push((child, depth + 1));
        }
    }
    Ok(TaggedPartition::new_unchecked(items, PartitionMode::HK))
}

/// New tag for an item, or `None` to keep it.
pub type Redirect<'a> = &'a dyn Fn(&TaggedInterval) -> Option<Point>;

/// M-partition of `i`: the HK construction, then optional tag redirection.
///
/// `redirect` may move the tag of any item, including outside its box; the
/// new tag must keep the item fine.
pub fn mcshane_partition(
    i: &Interval,
    delta: &Gauge,
    depth_cap: u32,
    redirect: Option<Redirect<'_>>,
) -> Result<TaggedPartition, PartitionError> {
    let hk = cousin_hk_partition(i, delta, depth_cap)?;
    let mut items = Vec::with_capacity(hk.len());
    for (index, item) in hk.items().iter().enumerate() {
        let tag = match redirect.and_then(|r| r(item)) {
            Some(new_tag) => {
                if !item.interval.in_ball(&new_tag, &delta.radius(&new_tag)) {
                    return Err(PartitionError::RedirectViolatesFineness { index });
                }
                new_tag
            }
            None => item.tag.clone(),
        };
        items.push(TaggedInterval {
            tag,
            interval: item.interval.clone(),
        });
    }
    Ok(TaggedPartition::new_unchecked(items, PartitionMode::M))
}
