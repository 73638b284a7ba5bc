//! Statistical machinery for run comparisons: paired t-test, exact
//! binomial sign test, studentized-range quantiles and Tukey's HSD,
//! Bonferroni correction, Pearson correlation, and ordinary least
//! squares.
//!
//! The distributions are computed from first principles (see
//! [`special`]) so every value asserted in the tests can be traced to
//! a published algorithm: the t-distribution tail through the
//! regularized incomplete beta function, the binomial tail through
//! exact big-integer arithmetic, and the studentized range through
//! direct quadrature of its defining double integral.

mod special;

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::theory::choose;
use crate::BigRational;

/// Outcome of a single hypothesis test.
#[derive(Clone, Debug, PartialEq)]
pub struct TestResult {
    /// Test statistic: the t value for the t-test, the positive count
    /// for the sign test.
    pub statistic: f64,
    /// Two-sided p-value in `[0, 1]`.
    pub p_value: f64,
    /// Number of observations the test consumed.
    pub n: usize,
    /// Degrees of freedom where the test has them.
    pub df: Option<f64>,
}

/// Two-sided paired t-test on a sample of differences.
///
/// The statistic is `mean / (sd / sqrt(n))` with the sample standard
/// deviation (n-1 denominator); the p-value comes from the t
/// distribution with `n - 1` degrees of freedom. Degenerate samples
/// follow the conventions: all differences zero gives statistic 0 and
/// p = 1, zero spread around a nonzero mean gives p = 0.
pub fn paired_t_test(differences: &[f64]) -> Result<TestResult> {
    let n = differences.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "paired t-test needs at least 2 differences, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = differences.iter().sum::<f64>() / nf;
    let var = differences.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (nf - 1.0);
    let df = nf - 1.0;
    if var == 0.0 {
        return Ok(if mean == 0.0 {
            TestResult {
                statistic: 0.0,
                p_value: 1.0,
                n,
                df: Some(df),
            }
        } else {
            TestResult {
                statistic: f64::INFINITY * mean.signum(),
                p_value: 0.0,
                n,
                df: Some(df),
            }
        });
    }
    let t = mean / (var.sqrt() / nf.sqrt());
    let p = special::student_t_two_sided(t, df)?;
    Ok(TestResult {
        statistic: t,
        p_value: p,
        n,
        df: Some(df),
    })
}

/// Exact two-sided binomial sign test at success probability 1/2.
///
/// `p = min(1, 2 * sum_{k >= max(n_pos, n_neg)} C(n, k) / 2^n)`,
/// computed in exact arithmetic before the final conversion. Zero
/// differences are excluded by the caller, following the classical
/// sign-test convention.
pub fn sign_test(n_pos: u64, n_neg: u64) -> Result<TestResult> {
    let n = n_pos + n_neg;
    if n == 0 {
        return Err(Error::InsufficientData(
            "sign test needs at least one nonzero difference".into(),
        ));
    }
    let m = n_pos.max(n_neg);
    let mut tail = BigUint::zero();
    for k in m..=n {
        tail += choose(n, k);
    }
    let p = BigRational::new(
        BigInt::from(tail) * BigInt::from(2u32),
        BigInt::from(BigUint::one() << n),
    );
    let p = p.min(BigRational::one()).to_f64().unwrap_or(1.0);
    Ok(TestResult {
        statistic: n_pos as f64,
        p_value: p,
        n: n as usize,
        df: None,
    })
}

/// Multiplies each p-value by the family size, capping at 1.
pub fn bonferroni(p_values: &[f64]) -> Vec<f64> {
    let m = p_values.len() as f64;
    p_values.iter().map(|p| (p * m).min(1.0)).collect()
}

/// Sample Pearson correlation coefficient.
///
/// Errors when either side has zero variance (the coefficient is
/// undefined there).
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidParameter(format!(
            "correlation inputs of different lengths: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "correlation needs at least 2 points, got {n}"
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate(
            "correlation undefined for a constant sequence".into(),
        ));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Ordinary least squares via Householder QR.
///
/// `rows` are observations; include an explicit intercept column of
/// ones if an intercept is wanted. Requires more observations than
/// coefficients and a full-rank design matrix.
pub fn ols(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::InsufficientData("empty design matrix".into()));
    }
    let p = rows[0].len();
    if p == 0 {
        return Err(Error::InvalidParameter("design rows are empty".into()));
    }
    if rows.iter().any(|r| r.len() != p) {
        return Err(Error::InvalidParameter("ragged design matrix".into()));
    }
    if y.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} responses for {} observations",
            y.len(),
            n
        )));
    }
    if n <= p {
        return Err(Error::InsufficientData(format!(
            "{n} observations cannot fit {p} coefficients"
        )));
    }

    // Column-major working copy; Householder vectors overwrite the
    // sub-diagonal as columns are triangularized.
    let mut a = vec![0.0f64; n * p];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            a[j * n + i] = *v;
        }
    }
    let mut qty = y.to_vec();
    let frob = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-12 * frob.max(1.0);
    let mut rdiag = vec![0.0f64; p];

    for k in 0..p {
        let norm = a[k * n + k..(k + 1) * n]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        if norm <= tol {
            return Err(Error::Degenerate("design matrix is rank deficient".into()));
        }
        let alpha = if a[k * n + k] >= 0.0 { -norm } else { norm };
        a[k * n + k] -= alpha;
        let vtv: f64 = a[k * n + k..(k + 1) * n].iter().map(|v| v * v).sum();
        for j in (k + 1)..p {
            let mut dot = 0.0;
            for i in k..n {
                dot += a[k * n + i] * a[j * n + i];
            }
            let factor = 2.0 * dot / vtv;
            for i in k..n {
                a[j * n + i] -= factor * a[k * n + i];
            }
        }
        let mut dot = 0.0;
        for i in k..n {
            dot += a[k * n + i] * qty[i];
        }
        let factor = 2.0 * dot / vtv;
        for i in k..n {
            qty[i] -= factor * a[k * n + i];
        }
        rdiag[k] = alpha;
    }

    let mut beta = vec![0.0f64; p];
    for k in (0..p).rev() {
        let mut s = qty[k];
        for j in (k + 1)..p {
            s -= a[j * n + k] * beta[j];
        }
        beta[k] = s / rdiag[k];
    }
    Ok(beta)
}

/// Degrees of freedom beyond this bound are treated as infinite: the
/// scaled chi variable is then concentrated at 1 far below any
/// tolerance used here.
const INFINITE_DF: f64 = 1e6;

struct ZGrid {
    z: Vec<f64>,
    weighted_pdf: Vec<f64>,
    cdf: Vec<f64>,
}

/// Quadrature grid over the normal kernel's support, built once. The
/// inner integral of the range CDF is evaluated thousands of times
/// during a quantile search, so the node positions, `weight * pdf`
/// products, and CDF values are shared across calls.
fn zgrid() -> &'static ZGrid {
    static GRID: OnceLock<ZGrid> = OnceLock::new();
    GRID.get_or_init(|| {
        let points = special::gl20_points(-8.5, 8.5, 0.75);
        let z: Vec<f64> = points.iter().map(|&(zi, _)| zi).collect();
        let weighted_pdf = points
            .iter()
            .map(|&(zi, w)| w * special::normal_pdf(zi))
            .collect();
        let cdf = z.iter().map(|&zi| special::normal_cdf(zi)).collect();
        ZGrid {
            z,
            weighted_pdf,
            cdf,
        }
    })
}

/// CDF of the range of `k` independent standard normals:
/// `k * integral phi(z) [Phi(z) - Phi(z - q)]^(k-1) dz`.
fn normal_range_cdf(q: f64, k: u32) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    let grid = zgrid();
    let km1 = (k - 1) as i32;
    let mut acc = 0.0;
    for i in 0..grid.z.len() {
        let diff = grid.cdf[i] - special::normal_cdf(grid.z[i] - q);
        if diff > 0.0 {
            acc += grid.weighted_pdf[i] * diff.powi(km1);
        }
    }
    (f64::from(k) * acc).clamp(0.0, 1.0)
}

/// Log-density of the scaled chi variable `s = chi_df / sqrt(df)`.
fn ln_scaled_chi_density(s: f64, df: f64) -> f64 {
    0.5 * df * df.ln() - special::ln_gamma(0.5 * df) - (0.5 * df - 1.0) * 2f64.ln()
        + (df - 1.0) * s.ln()
        - 0.5 * df * s * s
}

fn validate_range_params(k: u32, df: f64) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "studentized range needs at least 2 groups, got {k}"
        )));
    }
    if df.is_nan() || df < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "degrees of freedom {df} below 1"
        )));
    }
    Ok(())
}

/// CDF of the studentized range distribution `Q_{k, df}`.
///
/// For infinite degrees of freedom this is the normal-range integral;
/// for finite `df` the normal-range CDF is mixed over the scaled chi
/// distribution of the pooled standard deviation estimate, both by
/// composite Gauss-Legendre quadrature.
pub fn studentized_range_cdf(q: f64, k: u32, df: f64) -> Result<f64> {
    validate_range_params(k, df)?;
    if q <= 0.0 {
        return Ok(0.0);
    }
    if df > INFINITE_DF {
        return Ok(normal_range_cdf(q, k));
    }
    let sd = 1.0 / (2.0 * df).sqrt();
    let lo = (1.0 - 10.0 * sd).max(0.0);
    let hi = 1.0 + 10.0 * sd;
    let value = special::integrate(lo, hi, sd, |s| {
        ln_scaled_chi_density(s, df).exp() * normal_range_cdf(q * s, k)
    });
    Ok(value.clamp(0.0, 1.0))
}

/// Upper quantile of the studentized range: the `q` with
/// `P(Q_{k, df} <= q) = 1 - alpha`, root-found to 1e-6.
pub fn studentized_range_quantile(alpha: f64, k: u32, df: f64) -> Result<f64> {
    validate_range_params(k, df)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    let target = 1.0 - alpha;
    let mut lo = 0.0;
    let mut f_lo = -target;
    let mut hi = 1.0;
    let mut f_hi = studentized_range_cdf(hi, k, df)? - target;
    while f_hi < 0.0 {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::NonConvergence(format!(
                "no bracket for studentized range quantile at alpha={alpha}, k={k}, df={df}"
            )));
        }
        f_hi = studentized_range_cdf(hi, k, df)? - target;
    }

    // Illinois variant of regula falsi on the bracket.
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo < 1e-7 {
            return Ok(0.5 * (lo + hi));
        }
        let mut x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if !x.is_finite() || x <= lo || x >= hi {
            x = 0.5 * (lo + hi);
        }
        let fx = studentized_range_cdf(x, k, df)? - target;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::NonConvergence(format!(
        "studentized range quantile did not converge at alpha={alpha}, k={k}, df={df} \
         (bracket [{lo}, {hi}])"
    )))
}

/// Alpha grid used to report Tukey HSD p-values: the p-value of a
/// pair is the smallest grid level at which it is significant.
pub const DEFAULT_ALPHA_GRID: [f64; 8] = [0.001, 0.005, 0.01, 0.025, 0.05, 0.1, 0.25, 0.5];

/// One system pair's HSD outcome.
#[derive(Clone, Debug)]
pub struct HsdPair {
    /// Row indices of the two systems in the input matrix.
    pub system_a: usize,
    pub system_b: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    /// `|mean_a - mean_b| / sqrt(MSE / n)`.
    pub statistic: f64,
    /// Smallest grid alpha at which the pair is significant, 1.0 when
    /// it is significant at none.
    pub p_value: f64,
    /// Whether the pair is significant at the requested alpha.
    pub significant: bool,
}

/// Tukey's honestly significant difference test over a complete
/// systems-by-topics matrix.
///
/// Uses two-way ANOVA without replication: topic effects are removed,
/// the residual mean square has `(k - 1)(n - 1)` degrees of freedom,
/// and a pair differs significantly when
/// `|mean_i - mean_j| / sqrt(MSE / n)` reaches the studentized range
/// quantile. A zero residual (values exactly system-plus-topic
/// additive) makes every pair with differing means significant and
/// identical-mean pairs not.
pub fn tukey_hsd(values: &[Vec<f64>], alpha: f64) -> Result<Vec<HsdPair>> {
    tukey_hsd_with_grid(values, alpha, &DEFAULT_ALPHA_GRID)
}

/// [`tukey_hsd`] with a custom p-value grid.
pub fn tukey_hsd_with_grid(
    values: &[Vec<f64>],
    alpha: f64,
    grid: &[f64],
) -> Result<Vec<HsdPair>> {
    let k = values.len();
    if k < 2 {
        return Err(Error::InsufficientData(format!(
            "HSD needs at least 2 systems, got {k}"
        )));
    }
    let n = values[0].len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "HSD needs at least 2 topics, got {n}"
        )));
    }
    if values.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter(
            "incomplete matrix: rows have different lengths".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }

    let kf = k as f64;
    let nf = n as f64;
    let row_means: Vec<f64> = values.iter().map(|r| r.iter().sum::<f64>() / nf).collect();
    let col_means: Vec<f64> = (0..n)
        .map(|j| values.iter().map(|r| r[j]).sum::<f64>() / kf)
        .collect();
    let grand = row_means.iter().sum::<f64>() / kf;
    let mut sse = 0.0;
    for (i, row) in values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let resid = v - row_means[i] - col_means[j] + grand;
            sse += resid * resid;
        }
    }
    let df = (kf - 1.0) * (nf - 1.0);
    let mse = sse / df;
    let scale = values
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v * v)
        .sum::<f64>()
        / (kf * nf);

    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    if mse <= scale * 1e-14 {
        // Degenerate residual: the matrix is exactly additive, so any
        // difference in system means is noiseless.
        for i in 0..k {
            for j in (i + 1)..k {
                let identical = row_means[i] == row_means[j];
                pairs.push(HsdPair {
                    system_a: i,
                    system_b: j,
                    mean_a: row_means[i],
                    mean_b: row_means[j],
                    statistic: if identical { 0.0 } else { f64::INFINITY },
                    p_value: if identical { 1.0 } else { 0.0 },
                    significant: !identical,
                });
            }
        }
        return Ok(pairs);
    }

    let se = (mse / nf).sqrt();
    let qcrit = studentized_range_quantile(alpha, k as u32, df)?;
    let mut grid_sorted: Vec<f64> = grid.to_vec();
    grid_sorted.sort_by(f64::total_cmp);
    let grid_quantiles: Vec<(f64, f64)> = grid_sorted
        .iter()
        .map(|&g| Ok((g, studentized_range_quantile(g, k as u32, df)?)))
        .collect::<Result<_>>()?;

    for i in 0..k {
        for j in (i + 1)..k {
            let statistic = (row_means[i] - row_means[j]).abs() / se;
            let p_value = grid_quantiles
                .iter()
                .find(|(_, qg)| statistic >= *qg)
                .map_or(1.0, |(g, _)| *g);
            pairs.push(HsdPair {
                system_a: i,
                system_b: j,
                mean_a: row_means[i],
                mean_b: row_means[j],
                statistic,
                p_value,
                significant: statistic >= qcrit,
            });
        }
    }
    Ok(pairs)
}
