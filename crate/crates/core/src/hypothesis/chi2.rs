use crate::error::{Error, Result};
use crate::graph::{BlockCounts, Covariates, Graph};

use super::{PValueMethod, Tail, TestReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi2Statistic {
    pub statistic: f64,
    pub dof: usize,
}

/// Pearson chi-square for independence on the 3x2 table of links and
/// non-links per block.
pub fn stat_chi2(counts: &BlockCounts) -> Result<Chi2Statistic> {
    let rows: Vec<[f64; 2]> = (0..3)
        .map(|b| {
            let links = counts.links[b] as f64;
            [links, counts.pairs[b] as f64 - links]
        })
        .collect();
    let row_totals: Vec<f64> = rows.iter().map(|r| r[0] + r[1]).collect();
    let col_totals = [
        rows.iter().map(|r| r[0]).sum::<f64>(),
        rows.iter().map(|r| r[1]).sum::<f64>(),
    ];
    let grand: f64 = row_totals.iter().sum();
    if let Some(b) = row_totals.iter().position(|&t| t == 0.0) {
        return Err(Error::DegenerateTable(format!(
            "block {b} has no node pairs"
        )));
    }
    if col_totals.contains(&0.0) {
        return Err(Error::DegenerateTable(
            "all pairs are linked or all are unlinked".into(),
        ));
    }
    let mut statistic = 0.0;
    for (r, row) in rows.iter().enumerate() {
        for (c, &observed) in row.iter().enumerate() {
            let expected = row_totals[r] * col_totals[c] / grand;
            statistic += (observed - expected).powi(2) / expected;
        }
    }
    Ok(Chi2Statistic { statistic, dof: 2 })
}

/// Upper-tail probability of the chi-square distribution with `dof` degrees
/// of freedom.
pub fn chi2_pvalue(statistic: f64, dof: usize) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    regularized_gamma_q(dof as f64 / 2.0, statistic / 2.0)
}

/// Analytic contingency-table test of the Erdős–Rényi null given known
/// labels.
pub fn chi2_test(g: &Graph, c: &Covariates) -> Result<TestReport> {
    let chi = stat_chi2(&g.conformal_partition(c)?)?;
    Ok(TestReport {
        statistic_name: "chi2".into(),
        observed: chi.statistic,
        log_scale: false,
        tail: Tail::Upper,
        p_value: chi2_pvalue(chi.statistic, chi.dof),
        replicates: 0,
        exceedances: 0,
        seed: 0,
        method: PValueMethod::Asymptotic,
    })
}

/// Upper regularized incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`: power
/// series below `x = a + 1`, Lentz continued fraction above.
pub fn regularized_gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "Q({a}, {x}) undefined");
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

const MAX_ITER: usize = 500;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

// Lanczos approximation (g = 7, n = 9).
fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
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
    let mut acc = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}
