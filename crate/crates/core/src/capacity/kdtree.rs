/// Static 2-d tree for nearest-neighbour queries among its own points.
#[derive(Debug, Clone)]
pub struct KdTree2 {
    /// Points reordered so each subtree is a contiguous range whose median
    /// element is the splitting node.
    pts: Vec<[f64; 2]>,
}

const LEAF: usize = 8;

impl KdTree2 {
    pub fn new(points: impl IntoIterator<Item = [f64; 2]>) -> Self {
        let mut pts: Vec<[f64; 2]> = points.into_iter().collect();
        build(&mut pts, 0);
        Self { pts }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.pts
    }

    /// Squared distance from stored point `i` to its nearest other point.
    pub fn nearest_other_sq(&self, i: usize) -> f64 {
        let mut best = f64::INFINITY;
        search(&self.pts, 0, self.pts.len(), 0, self.pts[i], i, &mut best);
        best
    }
}

fn build(pts: &mut [[f64; 2]], axis: usize) {
    if pts.len() <= LEAF {
        return;
    }
    let mid = pts.len() / 2;
    pts.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
    let (left, right) = pts.split_at_mut(mid);
    build(left, axis ^ 1);
    build(&mut right[1..], axis ^ 1);
}

fn search(pts: &[[f64; 2]], lo: usize, hi: usize, axis: usize, q: [f64; 2], skip: usize, best: &mut f64) {
    let n = hi - lo;
    if n <= LEAF {
        for (j, p) in pts[lo..hi].iter().enumerate() {
            if lo + j != skip {
                let d = (p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]);
                if d < *best {
                    *best = d;
                }
            }
        }
        return;
    }
    let mid = lo + n / 2;
    let node = pts[mid];
    if mid != skip {
        let d = (node[0] - q[0]) * (node[0] - q[0]) + (node[1] - q[1]) * (node[1] - q[1]);
        if d < *best {
            *best = d;
        }
    }
    let diff = q[axis] - node[axis];
    let (near, far) = if diff < 0.0 {
        ((lo, mid), (mid + 1, hi))
    } else {
        ((mid + 1, hi), (lo, mid))
    };
    search(pts, near.0, near.1, axis ^ 1, q, skip, best);
    if diff * diff < *best {
        search(pts, far.0, far.1, axis ^ 1, q, skip, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn matches_brute_force() {
        let mut rng = rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64(1);
        let pts: Vec<[f64; 2]> = (0..2000)
            .map(|_| {
                let a: f64 = rng.random::<f64>() - 0.5;
                let b: f64 = rng.random::<f64>() - 0.5;
                [a / b.abs().max(1e-3), b]
            })
            .collect();
        let tree = KdTree2::new(pts);
        let stored = tree.points();
        for i in (0..stored.len()).step_by(7) {
            let q = stored[i];
            let brute = stored
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(tree.nearest_other_sq(i), brute);
        }
    }
}
