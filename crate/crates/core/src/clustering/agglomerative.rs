use serde::{Deserialize, Serialize};

use super::{canonical_labels, Algorithm, Clustering, Linkage};
use crate::distance::DistanceMatrix;
use crate::error::ClusterError;

/// One merge step. A merged cluster keeps the smaller of the two ids, so
/// `left < right` and ids always refer to input rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
    /// Size of the merged cluster.
    pub size: usize,
}

/// Full merge sequence from singletons down to one cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub n: usize,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    /// Labels after applying the first `n - k` merges.
    pub fn cut(&self, k: usize) -> Result<Vec<usize>, ClusterError> {
        if k == 0 || k > self.n {
            return Err(ClusterError::InvalidK { k, n: self.n });
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for m in &self.merges[..self.n - k] {
            let (a, b) = (find(&mut parent, m.left), find(&mut parent, m.right));
            parent[b.max(a)] = a.min(b);
        }
        let roots: Vec<usize> = (0..self.n).map(|i| find(&mut parent, i)).collect();
        Ok(canonical_labels(&roots))
    }
}

#[derive(Clone, Copy)]
struct Nearest {
    dist: f64,
    to: usize,
}

/// Builds the merge sequence. At each step the pair with the smallest
/// linkage distance is merged; among equal distances the lexicographically
/// smallest `(left, right)` pair wins.
pub fn dendrogram(matrix: &DistanceMatrix, linkage: Linkage) -> Dendrogram {
    let n = matrix.n();
    let mut d: Vec<f64> = (0..n).flat_map(|i| matrix.row(i).to_vec()).collect();
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];

    // nearest active neighbour with a larger id
    let scan = |d: &[f64], active: &[bool], i: usize| -> Option<Nearest> {
        let mut best: Option<Nearest> = None;
        for j in i + 1..n {
            if active[j] && best.is_none_or(|b| d[i * n + j] < b.dist) {
                best = Some(Nearest { dist: d[i * n + j], to: j });
            }
        }
        best
    };
    let mut nearest: Vec<Option<Nearest>> = (0..n).map(|i| scan(&d, &active, i)).collect();

    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for _ in 1..n {
        let (i, nn) = (0..n)
            .filter(|&i| active[i])
            .filter_map(|i| nearest[i].map(|nn| (i, nn)))
            .fold(None::<(usize, Nearest)>, |best, (i, nn)| match best {
                Some((_, b)) if b.dist <= nn.dist => best,
                _ => Some((i, nn)),
            })
            .expect("at least two active clusters");
        let j = nn.to;

        for x in 0..n {
            if !active[x] || x == i || x == j {
                continue;
            }
            let (dix, djx) = (d[i * n + x], d[j * n + x]);
            let merged = match linkage {
                Linkage::Single => dix.min(djx),
                Linkage::Complete => dix.max(djx),
                Linkage::Average => {
                    (size[i] as f64 * dix + size[j] as f64 * djx) / (size[i] + size[j]) as f64
                }
            };
            d[i * n + x] = merged;
            d[x * n + i] = merged;
        }
        active[j] = false;
        size[i] += size[j];
        nearest[j] = None;
        merges.push(Merge {
            left: i,
            right: j,
            distance: nn.dist,
            size: size[i],
        });

        for x in 0..n {
            if !active[x] || x == i {
                continue;
            }
            match nearest[x] {
                Some(cur) if cur.to == i || cur.to == j => nearest[x] = scan(&d, &active, x),
                Some(cur) if x < i => {
                    let dx = d[x * n + i];
                    if dx < cur.dist || (dx == cur.dist && i < cur.to) {
                        nearest[x] = Some(Nearest { dist: dx, to: i });
                    }
                }
                None if x < i => nearest[x] = scan(&d, &active, x),
                _ => {}
            }
        }
        nearest[i] = scan(&d, &active, i);
    }
    Dendrogram { n, merges }
}

pub fn agglomerative(
    matrix: &DistanceMatrix,
    k: usize,
    linkage: Linkage,
) -> Result<Clustering, ClusterError> {
    let n = matrix.n();
    if n == 0 {
        return Err(ClusterError::Empty);
    }
    if k == 0 || k > n {
        return Err(ClusterError::InvalidK { k, n });
    }
    let labels = dendrogram(matrix, linkage).cut(k)?;
    Ok(Clustering::from_labels(
        matrix.otype(),
        matrix.ids(),
        &labels,
        Algorithm::Agglomerative,
        None,
        Some(linkage),
    ))
}
