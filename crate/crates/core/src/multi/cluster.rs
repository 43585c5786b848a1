//! Clustering of 2-D objective vectors for the clustered moUMDA.

use crate::bits::unit_f64;
use crate::rng::RngStream;

#[inline]
fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Maximum Lloyd iterations.
pub const KMEANS_ITERATIONS: usize = 20;

/// K-means with k-means++ seeding. Returns a label in `0..k` per point;
/// clusters may end up empty. `k` is clamped to `1..=points.len()`.
pub fn kmeans(points: &[[f64; 2]], k: usize, rng: &mut RngStream) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let k = k.clamp(1, points.len());
    let mut centres = Vec::with_capacity(k);
    centres.push(points[rng.below(points.len())]);
    let mut nearest: Vec<f64> = points.iter().map(|&p| dist2(p, centres[0])).collect();
    while centres.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = unit_f64(rng) * total;
            let mut acc = 0.0;
            let mut chosen = points.len() - 1;
            for (i, &d) in nearest.iter().enumerate() {
                acc += d;
                if acc > target && d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.below(points.len())
        };
        let c = points[pick];
        centres.push(c);
        for (d, &p) in nearest.iter_mut().zip(points) {
            *d = d.min(dist2(p, c));
        }
    }
    let assign = |centres: &[[f64; 2]]| -> Vec<usize> {
        points
            .iter()
            .map(|&p| {
                let mut best = 0;
                for (j, &c) in centres.iter().enumerate().skip(1) {
                    if dist2(p, c) < dist2(p, centres[best]) {
                        best = j;
                    }
                }
                best
            })
            .collect()
    };
    let mut labels = assign(&centres);
    for _ in 0..KMEANS_ITERATIONS {
        let mut sums = vec![[0.0f64; 3]; k];
        for (&l, &p) in labels.iter().zip(points) {
            sums[l][0] += p[0];
            sums[l][1] += p[1];
            sums[l][2] += 1.0;
        }
        for (c, s) in centres.iter_mut().zip(&sums) {
            if s[2] > 0.0 {
                *c = [s[0] / s[2], s[1] / s[2]];
            }
        }
        let next = assign(&centres);
        if next == labels {
            break;
        }
        labels = next;
    }
    labels
}

/// Single-linkage agglomerative clustering cut at `k` clusters, computed
/// from a minimum spanning tree with its `k - 1` longest edges removed.
/// Labels are numbered by first appearance.
pub fn hac_single_linkage(points: &[[f64; 2]], k: usize) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let k = k.clamp(1, n);
    // Prim on the complete graph
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(n - 1);
    best[0] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        if parent[u] != usize::MAX {
            edges.push((best[u], parent[u], u));
        }
        for v in 0..n {
            if !in_tree[v] {
                let d = dist2(points[u], points[v]);
                if d < best[v] {
                    best[v] = d;
                    parent[v] = u;
                }
            }
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    edges.truncate(n - k);
    // union-find over the kept edges
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for &(_, a, b) in &edges {
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        if ra != rb {
            root[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label_of_root = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|i| {
            let r = find(&mut root, i);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            label_of_root[r]
        })
        .collect()
}
