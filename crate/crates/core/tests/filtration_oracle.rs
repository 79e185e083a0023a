use std::time::Instant;

use andersen_core::filtration::{pairing_layer_dims, smith_valuations, FiltrationError, PSeriesMatrix};
use andersen_core::laurent::LaurentPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRUNCATION: usize = 16;

/// Rank over Q of an integer matrix, by fraction-free (Bareiss) elimination.
fn rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Rank of `x -> x M` on `(Q[v]/v^i)^rows`, via the block-Toeplitz matrix
/// whose block `(p, p+k)` is the coefficient matrix of `v^k` in `M`.
fn truncated_rank(grid: &[Vec<LaurentPoly>], i: usize) -> usize {
    let (r, c) = (grid.len(), grid[0].len());
    let mut big = vec![vec![BigInt::zero(); c * i]; r * i];
    for a in 0..r {
        for b in 0..c {
            for (k, coeff) in grid[a][b].terms() {
                let k = k as usize;
                for p in 0..i.saturating_sub(k) {
                    big[p * r + a][(p + k) * c + b] = coeff.clone();
                }
            }
        }
    }
    rank(big)
}

/// `#{k : d_k >= i}` for `i = 0..=top`, from truncated ranks.
fn oracle_counts(grid: &[Vec<LaurentPoly>], top: usize) -> Vec<usize> {
    let rows = grid.len();
    let mut counts = vec![rows];
    let mut prev = 0;
    for i in 1..=top {
        let f = truncated_rank(grid, i);
        counts.push(rows - (f - prev));
        prev = f;
    }
    counts
}

fn random_poly(rng: &mut ChaCha8Rng, low: usize) -> LaurentPoly {
    let deg = rng.gen_range(0..=4);
    LaurentPoly::from_terms((low.min(deg)..=deg).map(|e| (e as i32, rng.gen_range(-3i64..=3))))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<LaurentPoly>> {
    let cols = rng.gen_range(1..=6);
    let rows = if rng.gen_bool(0.1) { rng.gen_range(1..=6) } else { rng.gen_range(1..=cols) };
    let shifts: Vec<usize> = (0..rows).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..3) } else { 0 }).collect();
    let mut grid: Vec<Vec<LaurentPoly>> = shifts
        .iter()
        .map(|&low| (0..cols).map(|_| random_poly(rng, low)).collect())
        .collect();
    // occasionally make a row agree with another to low order
    if rows >= 2 && rng.gen_bool(0.3) {
        let k = rng.gen_range(1..=3);
        let v_k = LaurentPoly::monomial(1, k);
        let base = grid[0].clone();
        grid[1] = base
            .iter()
            .map(|p| {
                let noise = LaurentPoly::from_terms([(0, rng.gen_range(-2i64..=2)), (1, rng.gen_range(-2i64..=2))]);
                let s = p + &(&v_k * &noise);
                s.truncate_above(4)
            })
            .collect();
    }
    grid
}

fn counts_from(vals: &[usize], top: usize) -> Vec<usize> {
    (0..=top).map(|i| vals.iter().filter(|&&d| d >= i).count()).collect()
}

#[test]
fn smith_valuations_match_rank_drop_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let start = Instant::now();
    let (mut ok, mut failed) = (0, 0);
    let mut nontrivial = 0;
    for _ in 0..1200 {
        let grid = random_matrix(&mut rng);
        let m = PSeriesMatrix::from_polynomials(&grid, Some(TRUNCATION)).unwrap();
        match smith_valuations(&m) {
            Ok(vals) => {
                let top = vals.iter().max().copied().unwrap_or(0) + 1;
                assert_eq!(oracle_counts(&grid, top), counts_from(&vals, top), "{grid:?}");
                ok += 1;
                nontrivial += usize::from(vals.iter().any(|&d| d > 0));
            }
            Err(FiltrationError::RankDeficient { .. } | FiltrationError::InsufficientTruncation { .. }) => {
                let f_n = truncated_rank(&grid, TRUNCATION);
                let f_prev = truncated_rank(&grid, TRUNCATION - 1);
                assert!(f_n - f_prev < grid.len(), "oracle sees full rank for {grid:?}");
                failed += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(ok >= 1000, "only {ok} successful instances");
    assert!(nontrivial >= 300, "only {nontrivial} instances with positive valuations");
    assert!(failed > 0);
    assert!(start.elapsed().as_secs() < 30);
}

fn det(grid: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = grid.len();
    if n == 1 {
        return grid[0][0].clone();
    }
    let mut acc = LaurentPoly::zero();
    for j in 0..n {
        let minor: Vec<Vec<LaurentPoly>> = grid[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &grid[0][j] * &det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[test]
fn valuation_sum_is_det_valuation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut checked = 0;
    for _ in 0..400 {
        let n = rng.gen_range(1..=5);
        let grid: Vec<Vec<LaurentPoly>> = (0..n)
            .map(|_| {
                let low = rng.gen_range(0..2);
                (0..n).map(|_| random_poly(&mut rng, low)).collect()
            })
            .collect();
        let d = det(&grid);
        // one more than the largest possible valuation of a nonzero determinant
        let bound: usize = grid.iter().map(|row| row.iter().filter_map(|p| p.max_exp()).max().unwrap_or(0) as usize).sum();
        let m = PSeriesMatrix::from_polynomials(&grid, Some(bound + 1)).unwrap();
        match smith_valuations(&m) {
            Ok(vals) => {
                assert_eq!(Some(vals.iter().sum::<usize>() as i32), d.min_exp());
                checked += 1;
            }
            Err(FiltrationError::RankDeficient { .. }) => assert!(d.is_zero()),
            Err(e) => panic!("{e}"),
        }
    }
    assert!(checked > 300);
}

#[test]
fn layers_are_histograms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..100 {
        let grid = random_matrix(&mut rng);
        let m = PSeriesMatrix::from_polynomials(&grid, Some(TRUNCATION)).unwrap();
        if let Ok(vals) = smith_valuations(&m) {
            let layers = pairing_layer_dims(&m).unwrap();
            assert_eq!(layers.values().sum::<usize>(), vals.len());
            for (&i, &n) in &layers {
                assert_eq!(vals.iter().filter(|&&d| d == i).count(), n);
            }
        }
    }
}
