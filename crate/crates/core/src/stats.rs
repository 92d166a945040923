//! Monte Carlo estimates of cylinder probabilities for any [`OrderSampler`].
//!
//! Sample `i` of a run with seed `s` uses seed `sample_seed(s, i)`, and counts
//! are summed as integers, so results do not depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::order::{CylinderSpec, OrderMatrix};
use crate::rng::sample_seed;
use crate::sampler::OrderSampler;
use crate::window::Window;

/// Largest `|F|!` accepted by the uniformity test.
pub const MAX_CELLS: usize = 1000;
/// Largest domain accepted by the invariance test.
pub const MAX_INVARIANCE_DOMAIN: usize = 4;

pub fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Lexicographic rank of a permutation of `0..k`.
pub fn permutation_rank(perm: &[usize]) -> usize {
    let k = perm.len();
    let mut rank = 0;
    for i in 0..k {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank += smaller * factorial(k - 1 - i);
    }
    rank
}

pub fn permutation_unrank(mut rank: usize, k: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..k).collect();
    let mut out = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let f = factorial(i);
        out.push(pool.remove(rank / f));
        rank %= f;
    }
    out
}

/// Pattern id of `m` on the elements at `idx`: the rank of the list of
/// positions `0..idx.len()` sorted increasingly by `m`.
pub fn pattern_id(m: &OrderMatrix, idx: &[usize]) -> Result<usize> {
    let k = idx.len();
    let mut pos: Vec<usize> = (0..k).collect();
    for a in 0..k {
        for b in (a + 1)..k {
            if !m.precedes(idx[a], idx[b]) && !m.precedes(idx[b], idx[a]) {
                return Err(Error::NotTotal);
            }
        }
    }
    pos.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if m.precedes(idx[a], idx[b]) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    Ok(permutation_rank(&pos))
}

/// The cylinder with the given pattern id on `d`.
pub fn pattern_cylinder(d: &Window, id: usize) -> Result<CylinderSpec> {
    let perm = permutation_unrank(id, d.len());
    CylinderSpec::new(OrderMatrix::from_permutation(d.clone(), &perm)?)
}

fn indices(w: &Window, elems: &[GroupElement]) -> Result<Vec<usize>> {
    elems
        .iter()
        .map(|g| {
            w.index_of(g)
                .ok_or_else(|| Error::DomainNotCovered(format!("{g} outside the sampler window")))
        })
        .collect()
}

fn check_samples(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    Ok(())
}

/// Histograms of pattern ids, one per index list, over `n` samples.
fn pattern_histograms<S: OrderSampler + ?Sized>(s: &S, lists: &[Vec<usize>], cells: usize, n: u64, seed: u64) -> Result<Vec<Vec<u64>>> {
    let zero = || vec![vec![0u64; cells]; lists.len()];
    (0..n)
        .into_par_iter()
        .try_fold(zero, |mut acc, i| {
            let m = s.sample(sample_seed(seed, i))?;
            for (h, idx) in acc.iter_mut().zip(lists) {
                h[pattern_id(&m, idx)?] += 1;
            }
            Ok(acc)
        })
        .try_reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                for (u, v) in x.iter_mut().zip(y) {
                    *u += v;
                }
            }
            Ok(a)
        })
}

fn stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub samples: u64,
    pub hits: u64,
    pub frequency: f64,
    pub stderr: f64,
}

impl EstimateReport {
    pub fn new(hits: u64, samples: u64) -> EstimateReport {
        let frequency = hits as f64 / samples as f64;
        EstimateReport {
            samples,
            hits,
            frequency,
            stderr: stderr(frequency, samples),
        }
    }
}

/// Frequency of the cylinder `c` over `n` samples.
pub fn estimate_cylinder<S: OrderSampler + ?Sized>(s: &S, c: &CylinderSpec, n: u64, seed: u64) -> Result<EstimateReport> {
    check_samples(n)?;
    let idx = indices(s.window(), c.domain().elements())?;
    let want = pattern_id(c.pattern(), &(0..idx.len()).collect::<Vec<_>>())?;
    let h = pattern_histograms(s, &[idx], factorial(c.domain().len()), n, seed)?;
    Ok(EstimateReport::new(h[0][want], n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternRow {
    pub pattern_id: usize,
    pub count: u64,
    pub frequency: f64,
    pub stderr: f64,
}

/// Counts of every total pattern on `d`, by pattern id.
pub fn pattern_table<S: OrderSampler + ?Sized>(s: &S, d: &Window, n: u64, seed: u64) -> Result<Vec<PatternRow>> {
    check_samples(n)?;
    let cells = factorial(d.len());
    if cells > MAX_CELLS {
        return Err(Error::InvalidParameter(format!("{} patterns exceed {MAX_CELLS}", cells)));
    }
    let idx = indices(s.window(), d.elements())?;
    let h = pattern_histograms(s, &[idx], cells, n, seed)?;
    Ok(h[0]
        .iter()
        .enumerate()
        .map(|(id, &count)| {
            let r = EstimateReport::new(count, n);
            PatternRow {
                pattern_id: id,
                count,
                frequency: r.frequency,
                stderr: r.stderr,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceRow {
    pub pattern_id: usize,
    pub count: u64,
    pub translated_count: u64,
    pub gap: f64,
    /// `sqrt(se_1^2 + se_2^2)` of the two frequencies.
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub samples: u64,
    pub rows: Vec<InvarianceRow>,
    pub max_gap: f64,
}

impl InvarianceReport {
    /// Every gap is below `k` combined standard errors (or exactly zero).
    pub fn within_sigma(&self, k: f64) -> bool {
        self.rows.iter().all(|r| r.gap == 0.0 || r.gap < k * r.stderr)
    }
}

/// Compares pattern frequencies on `d` with those of the `g`-translated
/// samples, whose restriction to `d` is the sample's order on `g^{-1} d`.
pub fn invariance_test<S: OrderSampler + ?Sized>(s: &S, g: &GroupElement, d: &Window, n: u64, seed: u64) -> Result<InvarianceReport> {
    check_samples(n)?;
    if d.len() > MAX_INVARIANCE_DOMAIN {
        return Err(Error::InvalidParameter(format!(
            "invariance domain has {} elements, at most {MAX_INVARIANCE_DOMAIN} allowed",
            d.len()
        )));
    }
    let ginv = g.inverse()?;
    let moved: Vec<GroupElement> = d.elements().iter().map(|x| ginv.multiply(x)).collect::<Result<_>>()?;
    let base = indices(s.window(), d.elements())?;
    let shifted = indices(s.window(), &moved)?;
    let cells = factorial(d.len());
    let h = pattern_histograms(s, &[base, shifted], cells, n, seed)?;
    let rows: Vec<InvarianceRow> = (0..cells)
        .map(|id| {
            let (a, b) = (h[0][id], h[1][id]);
            let (pa, pb) = (a as f64 / n as f64, b as f64 / n as f64);
            InvarianceRow {
                pattern_id: id,
                count: a,
                translated_count: b,
                gap: (pa - pb).abs(),
                stderr: (stderr(pa, n).powi(2) + stderr(pb, n).powi(2)).sqrt(),
            }
        })
        .collect();
    let max_gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    Ok(InvarianceReport {
        samples: n,
        rows,
        max_gap,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub samples: u64,
}

impl ChiSquare {
    /// Statistic at or below the `p` quantile of its null distribution.
    pub fn passes(&self, p: f64) -> bool {
        self.dof == 0 || self.statistic <= chi_square_quantile(p, self.dof as f64)
    }
}

/// Pearson statistic of the `|F|!` ranking cells against the uniform null.
pub fn uniformity_chisq<S: OrderSampler + ?Sized>(s: &S, f: &Window, n: u64, seed: u64) -> Result<ChiSquare> {
    let rows = pattern_table(s, f, n, seed)?;
    let expected = n as f64 / rows.len() as f64;
    let statistic = rows
        .iter()
        .map(|r| (r.count as f64 - expected).powi(2) / expected)
        .sum();
    Ok(ChiSquare {
        statistic,
        dof: rows.len() - 1,
        samples: n,
    })
}

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let mut a = C[0];
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularised lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let lead = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..10_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        (sum.ln() + lead).exp()
    } else {
        // Lentz continued fraction for Q(a, x)
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (lead.exp() * h)
    }
}

pub fn chi_square_cdf(x: f64, dof: f64) -> f64 {
    gamma_p(dof / 2.0, x / 2.0)
}

/// Quantile of the chi-square distribution by bisection on the CDF.
pub fn chi_square_quantile(p: f64, dof: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0 && dof > 0.0);
    let mut lo = 0.0;
    let mut hi = dof.max(1.0);
    while chi_square_cdf(hi, dof) < p {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi_square_cdf(mid, dof) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}
