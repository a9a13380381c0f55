#![allow(dead_code)]

use hdicv_core::{Matrix, TickPanel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rows = Vec<Vec<f64>>;

/// Small random panel with `1..=max_l` prices per cell.
pub fn random_panel(seed: u64, p: usize, n: usize, days: usize, max_l: u32, synchronous: bool) -> TickPanel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = Vec::new();
    let mut prices = Vec::new();
    for _ in 0..days {
        for _ in 0..n {
            let shared = rng.random_range(1..=max_l);
            for _ in 0..p {
                let l = if synchronous { shared } else { rng.random_range(1..=max_l) };
                counts.push(l);
                for _ in 0..l {
                    prices.push(rng.random_range(-1.0..1.0));
                }
            }
        }
    }
    TickPanel::from_parts(p, n, days, counts, prices).unwrap()
}

/// `avg[d][q][i]` by plain loops.
pub fn averages(panel: &TickPanel) -> Vec<Rows> {
    (0..panel.days())
        .map(|d| {
            (0..panel.p())
                .map(|q| {
                    (0..panel.n())
                        .map(|i| {
                            let v = panel.prices(d, i, q);
                            let mut s = 0.0;
                            for x in v {
                                s += x;
                            }
                            s / v.len() as f64
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Even increments `V[2i+1] - V[2i]` (0-based) per day, as vectors over stocks.
pub fn even_increments(avg: &[Rows]) -> Vec<Vec<Vec<f64>>> {
    avg.iter()
        .map(|day| {
            let n = day[0].len();
            (0..n / 2).map(|i| day.iter().map(|row| row[2 * i + 1] - row[2 * i]).collect()).collect()
        })
        .collect()
}

pub fn all_increments(avg: &[Rows]) -> Vec<Vec<Vec<f64>>> {
    avg.iter()
        .map(|day| {
            let n = day[0].len();
            (0..n - 1).map(|i| day.iter().map(|row| row[i + 1] - row[i]).collect()).collect()
        })
        .collect()
}

pub fn preavg_increments(avg: &[Rows], h: usize) -> Vec<Vec<Vec<f64>>> {
    avg.iter()
        .map(|day| {
            let n = day[0].len();
            (0..n / (2 * h))
                .map(|i| {
                    day.iter()
                        .map(|row| {
                            let mut a = 0.0;
                            let mut b = 0.0;
                            for j in 0..h {
                                a += row[2 * i * h + j];
                                b += row[(2 * i + 1) * h + j];
                            }
                            (b - a) / h as f64
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn outer_sum(incs: &[&Vec<f64>], p: usize, normalize: bool) -> Rows {
    let mut out = vec![vec![0.0; p]; p];
    for v in incs {
        let w = if normalize { sq_norm(v) } else { 1.0 };
        if w == 0.0 {
            continue;
        }
        for a in 0..p {
            for b in 0..p {
                out[a][b] += v[a] * v[b] / w;
            }
        }
    }
    out
}

pub fn scale(m: &Rows, s: f64) -> Rows {
    m.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn rcv(incs: &[Vec<Vec<f64>>], p: usize) -> Rows {
    let flat: Vec<&Vec<f64>> = incs.iter().flatten().collect();
    outer_sum(&flat, p, false)
}

pub fn tva(incs: &[Vec<Vec<f64>>], p: usize) -> Rows {
    let flat: Vec<&Vec<f64>> = incs.iter().flatten().collect();
    let total: f64 = flat.iter().map(|v| sq_norm(v)).sum();
    scale(&outer_sum(&flat, p, true), total / flat.len() as f64)
}

/// `(p/K) Σ zzᵀ` pooled over all days.
pub fn self_normalized(incs: &[Vec<Vec<f64>>], p: usize) -> Rows {
    let flat: Vec<&Vec<f64>> = incs.iter().flatten().collect();
    scale(&outer_sum(&flat, p, true), p as f64 / flat.len() as f64)
}

pub fn atva(avg: &[Rows]) -> Rows {
    let p = avg[0].len();
    let incs = even_increments(avg);
    let last: f64 = incs.last().unwrap().iter().map(|v| sq_norm(v)).sum();
    scale(&self_normalized(&incs, p), last / p as f64)
}

/// Single-day A-ATVA with `inv_sq[j]` the (mean) `1/L_j²` of stamp `j`.
pub fn a_atva(avg: &Rows, inv_sq: &[f64], ends: &[usize]) -> Rows {
    let p = avg.len();
    let days = vec![avg.clone()];
    let incs = &even_increments(&days)[0];
    let mut s = 0.0;
    let mut prev = 0;
    for &l in ends {
        let mut f2 = 0.0;
        for v in &inv_sq[prev..l] {
            f2 += v;
        }
        f2 /= (l - prev) as f64;
        // 1-based m with both stamps 2m-1 and 2m in (prev, l]
        let mut piece = 0.0;
        for m in 1..=incs.len() {
            if 2 * m - 1 > prev && 2 * m <= l {
                piece += sq_norm(&incs[m - 1]);
            }
        }
        s += piece / (1.0 / 3.0 + f2 / 6.0);
        prev = l;
    }
    scale(&self_normalized(std::slice::from_ref(incs), p), s / p as f64)
}

pub fn theta_hat(incs_last_day: &[Vec<f64>], p: usize) -> f64 {
    3.0 * incs_last_day.iter().map(|v| sq_norm(v)).sum::<f64>() / p as f64
}

pub fn max_diff(a: &Matrix, b: &Rows) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - b[i][j]).abs());
        }
    }
    worst
}

pub fn trace(m: &Matrix) -> f64 {
    m.diagonal().sum()
}

/// Random symmetric positive definite matrix.
pub fn random_spd(rng: &mut ChaCha8Rng, p: usize) -> Matrix {
    let a = Matrix::from_fn(p, p, |_, _| rng.random_range(-1.0..1.0));
    &a * a.transpose() + Matrix::identity(p, p) * 0.1
}

/// Eigenpairs of a symmetric 2×2 matrix in closed form.
fn eig2(a: f64, b: f64, d: f64) -> [(f64, [f64; 2]); 2] {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let vec_for = |l: f64| {
        let (x, y) = ([b, l - a], [l - d, b]);
        let v = if b.abs() > 1e-300 {
            if x[1].abs() >= y[0].abs() {
                x
            } else {
                y
            }
        } else if (l - a).abs() <= (l - d).abs() {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        };
        let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
        [v[0] / n, v[1] / n]
    };
    [(mean + r, vec_for(mean + r)), (mean - r, vec_for(mean - r))]
}

/// Independent ANS for two stocks: `(estimate, chosen split)`.
pub fn ans_two_stocks(cols: &[[f64; 2]], theta: f64, b: usize, perms: &[Vec<usize>]) -> ([[f64; 2]; 2], usize) {
    let m = cols.len();
    let unit: Vec<[f64; 2]> = cols
        .iter()
        .map(|c| {
            let n = (c[0] * c[0] + c[1] * c[1]).sqrt();
            [c[0] / n, c[1] / n]
        })
        .collect();
    let mf = m as f64;
    let r = mf.sqrt();
    let mut cands: Vec<usize> = [2.0 * r, 0.2 * mf, 0.4 * mf, 0.6 * mf, 0.8 * mf, mf - 2.5 * r, mf - 1.5 * r]
        .iter()
        .map(|v| (v.round() as usize).clamp(2, m - 2))
        .collect();
    cands.sort();
    cands.dedup();
    let mut best: Option<(f64, usize, [[f64; 2]; 2])> = None;
    for &m1 in &cands {
        let m2 = m - m1;
        let mut ans_sum = [[0.0; 2]; 2];
        let mut second_sum = [[0.0; 2]; 2];
        for perm in perms.iter().take(b) {
            let mut s1 = [[0.0; 2]; 2];
            let mut s2 = [[0.0; 2]; 2];
            for (pos, &k) in perm.iter().enumerate() {
                let z = unit[k];
                let target = if pos < m1 { &mut s1 } else { &mut s2 };
                for x in 0..2 {
                    for y in 0..2 {
                        target[x][y] += z[x] * z[y];
                    }
                }
            }
            let f1 = 2.0 / m1 as f64;
            let f2 = 2.0 / m2 as f64;
            for (_, u) in eig2(s1[0][0] * f1, s1[0][1] * f1, s1[1][1] * f1) {
                let mut d = 0.0;
                for &k in &perm[m1..] {
                    let proj = u[0] * unit[k][0] + u[1] * unit[k][1];
                    d += proj * proj;
                }
                d *= f2;
                for x in 0..2 {
                    for y in 0..2 {
                        ans_sum[x][y] += d * u[x] * u[y];
                    }
                }
            }
            for x in 0..2 {
                for y in 0..2 {
                    second_sum[x][y] += s2[x][y] * f2;
                }
            }
        }
        let mut loss = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let diff = (ans_sum[x][y] - second_sum[x][y]) / b as f64;
                loss += diff * diff;
            }
        }
        if best.as_ref().is_none_or(|(l, _, _)| loss < *l) {
            best = Some((loss, m1, ans_sum));
        }
    }
    let (_, m1, sum) = best.unwrap();
    let mut out = [[0.0; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            out[x][y] = sum[x][y] * theta / b as f64;
        }
    }
    (out, m1)
}

/// Driftless path with unit integrated variance sampled at `n + 1` points.
pub fn unit_vol_path(seed: u64, n: usize) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = (1.0 / n as f64).sqrt();
    let mut y = vec![0.0; n + 1];
    for i in 1..=n {
        let z: f64 = StandardNormal.sample(&mut rng);
        y[i] = y[i - 1] + step * z;
    }
    y
}
