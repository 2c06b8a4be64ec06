use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::rng;

fn centered(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut c = m.clone();
    for mut col in c.column_iter_mut() {
        // Shifting by the first entry first leaves constant columns exactly zero.
        let first = col[0];
        col.add_scalar_mut(-first);
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    c
}

fn order_key(m: &DMatrix<f64>) -> (usize, Vec<u64>) {
    (m.ncols(), m.iter().map(|v| v.to_bits()).collect())
}

/// Linear CKA between two feature matrices with the same number of rows.
pub fn linear_cka(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    if a.nrows() != b.nrows() {
        return Err(invalid(format!(
            "row counts differ: {} vs {}",
            a.nrows(),
            b.nrows()
        )));
    }
    if a.nrows() < 3 {
        return Err(invalid("linear CKA needs at least 3 samples"));
    }
    let (a, b) = if order_key(b) < order_key(a) {
        (b, a)
    } else {
        (a, b)
    };
    let (ac, bc) = (centered(a), centered(b));
    let num = (ac.transpose() * &bc).norm_squared();
    let den = (ac.transpose() * &ac).norm() * (bc.transpose() * &bc).norm();
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::UndefinedSimilarity(
            "an input has zero variance".into(),
        ));
    }
    Ok((num / den).clamp(0.0, 1.0))
}

/// Cyclically shifts a random subset of `⌊alpha·n⌋` rows of `a` (every chosen
/// row moves when at least two are chosen) and averages the CKA against `b`
/// over `repeats` draws.
pub fn permutation_ablation(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    alpha: f64,
    seed: u64,
    repeats: usize,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if repeats == 0 {
        return Err(invalid("repeats must be positive"));
    }
    let n = a.nrows();
    let m = ((alpha * n as f64).floor() as usize).min(n);
    let mut total = 0.0;
    for r in 0..repeats {
        let mut rng = rng::indexed_stream(seed, "permutation-ablation", r as u64);
        let subset = sample(&mut rng, n, m).into_vec();
        // Sattolo's algorithm: a uniformly random single cycle, hence a derangement.
        let mut targets = subset.clone();
        for i in (1..targets.len()).rev() {
            let j = rng.random_range(0..i);
            targets.swap(i, j);
        }
        let mut permuted = a.clone();
        for (&src, &dst) in subset.iter().zip(&targets) {
            permuted.set_row(dst, &a.row(src));
        }
        total += linear_cka(&permuted, b)?;
    }
    Ok(total / repeats as f64)
}
