//! Seasonal autoregressive integrated (SARI) models for scalar series:
//! differencing, conditional-sum-of-squares Gaussian likelihood fitting,
//! AICc order selection over a small grid, and multi-step forecasting.
//!
//! A SARI(p, b)(P, B)_s process applies regular differencing of order b and
//! seasonal differencing of order B at period s, then models the result as
//! a causal autoregression with multiplicative regular and seasonal
//! polynomials. There are no moving-average terms. An intercept (mean term)
//! is included only for undifferenced specifications.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model orders (p, b)(P, B)_s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SariSpec {
    /// Autoregressive order p.
    pub ar: usize,
    /// Regular differencing order b.
    pub diff: usize,
    /// Seasonal autoregressive order P.
    pub seasonal_ar: usize,
    /// Seasonal differencing order B.
    pub seasonal_diff: usize,
    /// Seasonal period s >= 1.
    pub period: usize,
}

impl SariSpec {
    pub fn new(ar: usize, diff: usize, seasonal_ar: usize, seasonal_diff: usize, period: usize) -> Self {
        SariSpec {
            ar,
            diff,
            seasonal_ar,
            seasonal_diff,
            period: period.max(1),
        }
    }

    /// The no-dynamics specification (0,0)(0,0)_s.
    pub fn null_spec(period: usize) -> Self {
        SariSpec::new(0, 0, 0, 0, period)
    }

    /// Deepest autoregressive lag: p + s*P.
    pub fn ar_span(&self) -> usize {
        self.ar + self.period * self.seasonal_ar
    }

    /// Observations consumed by differencing: b + s*B.
    pub fn diff_span(&self) -> usize {
        self.diff + self.period * self.seasonal_diff
    }

    /// An intercept is estimated only when no differencing is applied.
    pub fn has_intercept(&self) -> bool {
        self.diff + self.seasonal_diff == 0
    }
}

/// Fitted SARI model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SariModel {
    pub spec: SariSpec,
    /// Regular AR coefficients.
    pub ar_coeffs: Vec<f64>,
    /// Seasonal AR coefficients.
    pub seasonal_ar_coeffs: Vec<f64>,
    /// Mean of the differenced series; zero for differenced specifications.
    pub intercept: f64,
    /// Innovation variance (mean squared one-step residual).
    pub sigma2: f64,
}

/// Search bounds for [`auto_sari`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SariBounds {
    pub max_ar: usize,
    pub max_diff: usize,
    pub max_seasonal_ar: usize,
    pub max_seasonal_diff: usize,
}

impl Default for SariBounds {
    fn default() -> Self {
        SariBounds {
            max_ar: 2,
            max_diff: 1,
            max_seasonal_ar: 1,
            max_seasonal_diff: 1,
        }
    }
}

/// Result of automatic order selection.
#[derive(Debug, Clone)]
pub struct AutoFit {
    pub model: SariModel,
    pub aicc: f64,
    /// True when every grid candidate failed and the null specification was
    /// used as a last resort.
    pub degenerate: bool,
}

/// Apply (1-L)^b (1-L^s)^B to a series. Output length shrinks by b + B*s.
pub fn difference(z: &[f64], b: usize, seasonal_b: usize, s: usize) -> Result<Vec<f64>> {
    let span = b + seasonal_b * s.max(1);
    if z.len() <= span {
        return Err(Error::InsufficientData(format!(
            "series length {} cannot absorb differencing span {}",
            z.len(),
            span
        )));
    }
    let mut w = z.to_vec();
    for _ in 0..b {
        w = w.windows(2).map(|p| p[1] - p[0]).collect();
    }
    let s = s.max(1);
    for _ in 0..seasonal_b {
        w = (s..w.len()).map(|i| w[i] - w[i - s]).collect();
    }
    Ok(w)
}

/// Largest root magnitude reciprocal of 1 - a1 v - ... - ak v^k; the
/// polynomial is causal when this is strictly below 1.
fn max_inverse_root(coeffs: &[f64]) -> f64 {
    let mut deg = coeffs.len();
    while deg > 0 && coeffs[deg - 1].abs() < 1e-300 {
        deg -= 1;
    }
    if deg == 0 {
        return 0.0;
    }
    // Durand-Kerner on c(v) = 1 - sum a_i v^i
    let poly: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0))
        .chain(coeffs[..deg].iter().map(|&a| Complex64::new(-a, 0.0)))
        .collect();
    let eval = |v: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in poly.iter().rev() {
            acc = acc * v + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..200 {
        let mut shift = 0.0f64;
        for k in 0..deg {
            let mut denom = poly[deg]; // leading coefficient
            for j in 0..deg {
                if j != k {
                    denom *= roots[k] - roots[j];
                }
            }
            if denom.norm() < 1e-30 {
                continue;
            }
            let delta = eval(roots[k]) / denom;
            roots[k] -= delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-12 {
            break;
        }
    }
    roots
        .iter()
        .map(|r| 1.0 / r.norm().max(1e-30))
        .fold(0.0, f64::max)
}

/// True when both fitted polynomials are causal (all roots strictly outside
/// the unit disk).
pub fn is_causal(model: &SariModel) -> bool {
    max_inverse_root(&model.ar_coeffs) < 1.0 && max_inverse_root(&model.seasonal_ar_coeffs) < 1.0
}

/// Residuals of the differenced series under the model equation, starting
/// after the first p + s*P values.
fn residuals(w: &[f64], spec: &SariSpec, mu: f64, phi: &[f64], sphi: &[f64]) -> Vec<f64> {
    let s = spec.period;
    let r = spec.ar_span();
    let u: Vec<f64> = w.iter().map(|v| v - mu).collect();
    (r..w.len())
        .map(|t| {
            let mut e = u[t];
            for (i, &ph) in phi.iter().enumerate() {
                e -= ph * u[t - (i + 1)];
            }
            for (j, &sp) in sphi.iter().enumerate() {
                e -= sp * u[t - (j + 1) * s];
                for (i, &ph) in phi.iter().enumerate() {
                    e += ph * sp * u[t - (i + 1) - (j + 1) * s];
                }
            }
            e
        })
        .collect()
}

/// Yule-Walker AR coefficients of order p via Levinson-Durbin on the
/// centred series. Returns zeros for degenerate inputs.
fn yule_walker(x: &[f64], p: usize) -> Vec<f64> {
    if p == 0 || x.len() <= p {
        return vec![0.0; p];
    }
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let cov = |lag: usize| -> f64 {
        (lag..n).map(|t| (x[t] - mean) * (x[t - lag] - mean)).sum::<f64>() / n as f64
    };
    let c0 = cov(0);
    if c0 < 1e-300 {
        return vec![0.0; p];
    }
    let r: Vec<f64> = (1..=p).map(cov).collect();
    let mut a = vec![0.0; p];
    let mut e = c0;
    for k in 0..p {
        let mut acc = r[k];
        for j in 0..k {
            acc -= a[j] * r[k - 1 - j];
        }
        let refl = acc / e;
        let mut new_a = a.clone();
        new_a[k] = refl;
        for j in 0..k {
            new_a[j] = a[j] - refl * a[k - 1 - j];
        }
        a = new_a;
        e *= 1.0 - refl * refl;
        if e < 1e-300 {
            break;
        }
    }
    a
}

/// Lag autocorrelation of the centred series, clipped to (-0.95, 0.95).
fn autocorr(x: &[f64], lag: usize) -> f64 {
    if x.len() <= lag {
        return 0.0;
    }
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let c0: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    if c0 < 1e-300 {
        return 0.0;
    }
    let c: f64 = (lag..n).map(|t| (x[t] - mean) * (x[t - lag] - mean)).sum();
    (c / c0).clamp(-0.95, 0.95)
}

struct CssProblem<'a> {
    w: &'a [f64],
    spec: &'a SariSpec,
}

impl CssProblem<'_> {
    fn unpack<'p>(&self, theta: &'p [f64]) -> (f64, &'p [f64], &'p [f64]) {
        let has_mu = self.spec.has_intercept();
        let (mu, rest) = if has_mu {
            (theta[0], &theta[1..])
        } else {
            (0.0, theta)
        };
        let (phi, sphi) = rest.split_at(self.spec.ar);
        (mu, phi, sphi)
    }

    fn css(&self, theta: &[f64]) -> f64 {
        let (mu, phi, sphi) = self.unpack(theta);
        residuals(self.w, self.spec, mu, phi, sphi)
            .iter()
            .map(|e| e * e)
            .sum()
    }

    /// Analytic Jacobian of the residual vector.
    fn jacobian(&self, theta: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
        let (mu, phi, sphi) = self.unpack(theta);
        let s = self.spec.period;
        let r = self.spec.ar_span();
        let u: Vec<f64> = self.w.iter().map(|v| v - mu).collect();
        let e = residuals(self.w, self.spec, mu, phi, sphi);
        let m = e.len();
        let k = theta.len();
        let mut jac = vec![vec![0.0; k]; m];
        let phi_one: f64 = 1.0 - phi.iter().sum::<f64>();
        let sphi_one: f64 = 1.0 - sphi.iter().sum::<f64>();
        for (row, t) in (r..self.w.len()).enumerate() {
            let mut col = 0;
            if self.spec.has_intercept() {
                jac[row][col] = -phi_one * sphi_one;
                col += 1;
            }
            for i in 0..self.spec.ar {
                let mut g = -u[t - (i + 1)];
                for (j, &sp) in sphi.iter().enumerate() {
                    g += sp * u[t - (i + 1) - (j + 1) * s];
                }
                jac[row][col] = g;
                col += 1;
            }
            for j in 0..self.spec.seasonal_ar {
                let mut g = -u[t - (j + 1) * s];
                for (i, &ph) in phi.iter().enumerate() {
                    g += ph * u[t - (i + 1) - (j + 1) * s];
                }
                jac[row][col] = g;
                col += 1;
            }
        }
        (e, jac)
    }
}

/// Fit by Gauss-Newton on the conditional sum of squares, retrying from
/// shrunk initial values until the fitted polynomials are causal.
pub fn fit_sari(z: &[f64], spec: SariSpec) -> Result<SariModel> {
    let w = difference(z, spec.diff, spec.seasonal_diff, spec.period)?;
    let r = spec.ar_span();
    if w.len() <= r + 1 {
        return Err(Error::InsufficientData(format!(
            "differenced length {} is too short for AR span {}",
            w.len(),
            r
        )));
    }
    let problem = CssProblem { w: &w, spec: &spec };

    let mu0 = w.iter().sum::<f64>() / w.len() as f64;
    let centred: Vec<f64> = w.iter().map(|v| v - mu0).collect();
    let phi0 = yule_walker(&centred, spec.ar);
    let sphi0: Vec<f64> = (1..=spec.seasonal_ar)
        .map(|j| if j == 1 { autocorr(&centred, spec.period) } else { 0.0 })
        .collect();

    let mut shrink = 1.0;
    for _attempt in 0..5 {
        let mut theta = Vec::new();
        if spec.has_intercept() {
            theta.push(mu0);
        }
        theta.extend(phi0.iter().map(|v| v * shrink));
        theta.extend(sphi0.iter().map(|v| v * shrink));

        if let Some(theta) = gauss_newton(&problem, theta) {
            let (mu, phi, sphi) = problem.unpack(&theta);
            let model = SariModel {
                spec,
                ar_coeffs: phi.to_vec(),
                seasonal_ar_coeffs: sphi.to_vec(),
                intercept: mu,
                sigma2: 0.0,
            };
            if is_causal(&model) {
                let e = residuals(&w, &spec, mu, phi, sphi);
                let sigma2 = e.iter().map(|v| v * v).sum::<f64>() / e.len() as f64;
                return Ok(SariModel { sigma2, ..model });
            }
        }
        shrink *= 0.5;
    }
    Err(Error::NonCausalFit)
}

fn gauss_newton(problem: &CssProblem<'_>, mut theta: Vec<f64>) -> Option<Vec<f64>> {
    let k = theta.len();
    if k == 0 {
        return Some(theta);
    }
    let mut css = problem.css(&theta);
    if !css.is_finite() {
        return None;
    }
    for _iter in 0..100 {
        let (e, jac) = problem.jacobian(&theta);
        // normal equations JtJ delta = -Jte with a small ridge
        let mut jtj = ndarray::Array2::<f64>::zeros((k, k));
        let mut jte = vec![0.0; k];
        for (row, res) in jac.iter().zip(&e) {
            for a in 0..k {
                jte[a] += row[a] * res;
                for b in a..k {
                    jtj[[a, b]] += row[a] * row[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                jtj[[a, b]] = jtj[[b, a]];
            }
        }
        let ridge = 1e-10 * (0..k).map(|i| jtj[[i, i]]).fold(0.0, f64::max).max(1e-12);
        for i in 0..k {
            jtj[[i, i]] += ridge;
        }
        let rhs = ndarray::Array2::from_shape_fn((k, 1), |(i, _)| -jte[i]);
        let delta = crate::spectral::dense::solve(&jtj, &rhs)?;
        let delta: Vec<f64> = (0..k).map(|i| delta[[i, 0]]).collect();
        let delta_norm: f64 = delta.iter().map(|v| v * v).sum::<f64>().sqrt();

        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..25 {
            let cand: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + step * d).collect();
            let c = problem.css(&cand);
            if c.is_finite() && c <= css {
                let improvement = css - c;
                theta = cand;
                css = c;
                accepted = true;
                if improvement <= 1e-13 * css.max(1.0) {
                    return Some(theta);
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted || delta_norm <= 1e-12 {
            return Some(theta);
        }
    }
    Some(theta)
}

/// Corrected Akaike information criterion of a fitted model on `z`:
/// -2 logLik + 2km/(m - k - 1) with k counting AR terms, the intercept and
/// the innovation variance, and m the number of conditional residuals.
pub fn aicc(model: &SariModel, z: &[f64]) -> Result<f64> {
    let spec = &model.spec;
    let w = difference(z, spec.diff, spec.seasonal_diff, spec.period)?;
    let r = spec.ar_span();
    if w.len() <= r {
        return Err(Error::InsufficientData("series shorter than AR span".into()));
    }
    let e = residuals(
        &w,
        spec,
        model.intercept,
        &model.ar_coeffs,
        &model.seasonal_ar_coeffs,
    );
    let m = e.len();
    let k = spec.ar + spec.seasonal_ar + usize::from(spec.has_intercept()) + 1;
    if m <= k + 1 {
        return Err(Error::UndefinedMetric(format!(
            "AICc undefined: m = {m}, k = {k}"
        )));
    }
    let sigma2 = e.iter().map(|v| v * v).sum::<f64>() / m as f64;
    let loglik = if sigma2 < 1e-300 {
        f64::INFINITY
    } else {
        -0.5 * m as f64 * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0)
    };
    let penalty = 2.0 * k as f64 * m as f64 / (m - k - 1) as f64;
    Ok(-2.0 * loglik + penalty)
}

/// Exhaustive AICc selection over the bounded order grid. Falls back to the
/// null specification for series shorter than 3s, and flags the fit as
/// degenerate when every candidate fails.
pub fn auto_sari(z: &[f64], period: usize, bounds: &SariBounds) -> Result<AutoFit> {
    let s = period.max(1);
    if z.len() < 3 * s {
        let model = fit_sari(z, SariSpec::null_spec(s))?;
        let crit = aicc(&model, z).unwrap_or(f64::INFINITY);
        return Ok(AutoFit {
            model,
            aicc: crit,
            degenerate: false,
        });
    }
    let mut best: Option<(f64, SariModel)> = None;
    let (sp_hi, sb_hi) = if s == 1 {
        (0, 0) // seasonal terms alias the regular ones at unit period
    } else {
        (bounds.max_seasonal_ar, bounds.max_seasonal_diff)
    };
    for b in 0..=bounds.max_diff {
        for sb in 0..=sb_hi {
            for p in 0..=bounds.max_ar {
                for sp in 0..=sp_hi {
                    let spec = SariSpec::new(p, b, sp, sb, s);
                    let Ok(model) = fit_sari(z, spec) else {
                        continue;
                    };
                    let Ok(crit) = aicc(&model, z) else {
                        continue;
                    };
                    let better = match &best {
                        Some((bc, _)) => crit < *bc,
                        None => true,
                    };
                    if better {
                        best = Some((crit, model));
                    }
                }
            }
        }
    }
    match best {
        Some((crit, model)) => Ok(AutoFit {
            model,
            aicc: crit,
            degenerate: false,
        }),
        None => {
            let model = fit_sari(z, SariSpec::null_spec(s))?;
            let crit = aicc(&model, z).unwrap_or(f64::INFINITY);
            Ok(AutoFit {
                model,
                aicc: crit,
                degenerate: true,
            })
        }
    }
}

/// k-step forecasts on the original scale: iterate the model equation with
/// future innovations set to zero, then invert the differencing ladder.
pub fn forecast(model: &SariModel, history: &[f64], horizon: usize) -> Result<Vec<f64>> {
    let spec = &model.spec;
    let s = spec.period;
    if history.len() <= spec.diff_span() {
        return Err(Error::InsufficientData(
            "history shorter than differencing span".into(),
        ));
    }
    // differencing ladder: regular levels first, then seasonal
    let mut levels: Vec<(usize, Vec<f64>)> = vec![(0, history.to_vec())];
    for _ in 0..spec.diff {
        let prev = &levels.last().unwrap().1;
        let next: Vec<f64> = prev.windows(2).map(|p| p[1] - p[0]).collect();
        levels.push((1, next));
    }
    for _ in 0..spec.seasonal_diff {
        let prev = &levels.last().unwrap().1;
        if prev.len() <= s {
            return Err(Error::InsufficientData(
                "history shorter than differencing span".into(),
            ));
        }
        let next: Vec<f64> = (s..prev.len()).map(|i| prev[i] - prev[i - s]).collect();
        levels.push((s, next));
    }

    let r = spec.ar_span();
    {
        let w = &levels.last().unwrap().1;
        if w.len() < r {
            return Err(Error::InsufficientData(format!(
                "differenced history length {} below AR span {r}",
                w.len()
            )));
        }
    }

    // extend the innermost level by the AR recursion
    let mu = model.intercept;
    let innermost = levels.len() - 1;
    for _h in 0..horizon {
        let w = &levels[innermost].1;
        let t = w.len();
        let u = |idx: usize| w[idx] - mu;
        let mut pred = mu;
        for (i, &ph) in model.ar_coeffs.iter().enumerate() {
            pred += ph * u(t - (i + 1));
        }
        for (j, &sp) in model.seasonal_ar_coeffs.iter().enumerate() {
            pred += sp * u(t - (j + 1) * s);
            for (i, &ph) in model.ar_coeffs.iter().enumerate() {
                pred -= ph * sp * u(t - (i + 1) - (j + 1) * s);
            }
        }
        levels[innermost].1.push(pred);
    }

    // undo the differencing from the innermost level outwards
    for lev in (1..levels.len()).rev() {
        let lag = levels[lev].0;
        let orig_prev_len = levels[lev - 1].1.len();
        for h in 0..horizon {
            let t = orig_prev_len + h;
            let inner = levels[lev].1[t - lag];
            let outer = levels[lev - 1].1[t - lag];
            levels[lev - 1].1.push(inner + outer);
        }
    }
    let full = &levels[0].1;
    Ok(full[full.len() - horizon..].to_vec())
}
