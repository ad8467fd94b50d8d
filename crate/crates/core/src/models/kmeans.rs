//! Lloyd's k-means with k-means++ seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textpipe::Dtm;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            k: 4,
            seed: 42,
            max_iter: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squared distances.
    pub wcss: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn kmeans(dtm: &Dtm, cfg: &KMeansConfig) -> Result<KMeansResult> {
    let n = dtm.n_docs();
    let d = dtm.n_terms();
    if cfg.k == 0 || cfg.k > n {
        return Err(Error::InvalidParameter(format!(
            "k = {} needs 1 <= k <= {n} rows",
            cfg.k
        )));
    }
    let rows = dtm.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dist = |i: usize, c: &[f64]| {
        let sq: f64 = c.iter().map(|v| v * v).sum();
        rows[i].squared_distance_dense(c, sq).max(0.0)
    };

    // k-means++ seeding
    let mut centroids = vec![rows[rng.random_range(0..n)].to_dense(d)];
    let mut nearest: Vec<f64> = (0..n).map(|i| dist(i, &centroids[0])).collect();
    while centroids.len() < cfg.k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in nearest.iter().enumerate() {
                if w > 0.0 && target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            rng.random_range(0..n)
        };
        let c = rows[pick].to_dense(d);
        for (i, best) in nearest.iter_mut().enumerate() {
            *best = best.min(dist(i, &c));
        }
        centroids.push(c);
    }

    let mut assignments = vec![usize::MAX; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter {
        iterations += 1;
        let next: Vec<usize> = (0..n)
            .map(|i| {
                let mut best = (f64::INFINITY, 0);
                for (c, centroid) in centroids.iter().enumerate() {
                    let dd = dist(i, centroid);
                    if dd < best.0 {
                        best = (dd, c);
                    }
                }
                best.1
            })
            .collect();
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;
        update_centroids(dtm, &mut assignments, &mut centroids, &dist);
    }

    let wcss = (0..n).map(|i| dist(i, &centroids[assignments[i]])).sum();
    Ok(KMeansResult {
        assignments,
        centroids,
        wcss,
        iterations,
        converged,
    })
}

fn update_centroids(
    dtm: &Dtm,
    assignments: &mut [usize],
    centroids: &mut [Vec<f64>],
    dist: &impl Fn(usize, &[f64]) -> f64,
) {
    let d = dtm.n_terms();
    let k = centroids.len();
    let mut sums = vec![vec![0.0; d]; k];
    let mut sizes = vec![0usize; k];
    for (i, &c) in assignments.iter().enumerate() {
        sizes[c] += 1;
        for (j, v) in dtm.row(i).iter() {
            sums[c][j] += v;
        }
    }
    for c in 0..k {
        if sizes[c] > 0 {
            centroids[c] = sums[c].iter().map(|s| s / sizes[c] as f64).collect();
        }
    }
    // empty cluster: move the point farthest from its centroid into it
    for c in 0..k {
        if sizes[c] > 0 {
            continue;
        }
        let far = (0..assignments.len())
            .filter(|&i| sizes[assignments[i]] > 1)
            .map(|i| (dist(i, &centroids[assignments[i]]), i))
            .fold(None, |acc: Option<(f64, usize)>, x| match acc {
                Some(a) if a.0 >= x.0 => Some(a),
                _ => Some(x),
            });
        if let Some((_, i)) = far {
            sizes[assignments[i]] -= 1;
            assignments[i] = c;
            sizes[c] = 1;
            centroids[c] = dtm.row(i).to_dense(d);
        }
    }
}
