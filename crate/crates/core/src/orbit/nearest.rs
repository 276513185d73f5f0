//! Exact nearest-neighbour search over recorded positions.

use crate::scalar::Real;
use crate::vec3::Vec3;

/// Static 3-d tree. Queries return the smallest index among equidistant
/// points, matching a linear scan that keeps the first minimum.
#[derive(Clone, Debug)]
pub struct NearestIndex<T> {
    points: Vec<Vec3<T>>,
    /// Permutation of point indices arranged as an implicit balanced tree.
    order: Vec<usize>,
}

impl<T: Real> NearestIndex<T> {
    pub fn build(points: Vec<Vec3<T>>) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        build_node(&points, &mut order, 0);
        NearestIndex { points, order }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Vec3<T> {
        self.points[i]
    }

    /// Index of the nearest point and its squared distance, or `None` when empty.
    pub fn nearest(&self, q: Vec3<T>) -> Option<(usize, T)> {
        if self.points.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, T::infinity());
        self.search(q, 0, self.order.len(), 0, &mut best);
        Some(best)
    }

    fn search(&self, q: Vec3<T>, lo: usize, hi: usize, depth: usize, best: &mut (usize, T)) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let idx = self.order[mid];
        let p = self.points[idx];
        let d = q.distance_squared(p);
        if d < best.1 || (d == best.1 && idx < best.0) {
            *best = (idx, d);
        }
        let axis = depth % 3;
        let diff = q[axis] - p[axis];
        let (near, far) = if diff < T::zero() {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(q, near.0, near.1, depth + 1, best);
        // Equal distance to the splitting plane may still hide a smaller index.
        if diff * diff <= best.1 {
            self.search(q, far.0, far.1, depth + 1, best);
        }
    }
}

fn build_node<T: Real>(points: &[Vec3<T>], order: &mut [usize], depth: usize) {
    if order.len() <= 1 {
        return;
    }
    let axis = depth % 3;
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        points[a][axis]
            .partial_cmp(&points[b][axis])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let (left, right) = order.split_at_mut(mid);
    build_node(points, left, depth + 1);
    build_node(points, &mut right[1..], depth + 1);
}

/// Linear scan keeping the first minimum; the reference behaviour.
pub fn brute_force_nearest<T: Real>(points: &[Vec3<T>], q: Vec3<T>) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, p) in points.iter().enumerate() {
        let d = q.distance_squared(*p);
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best
}
