use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::diameter::Algorithm;

use super::{fmt_float, HarnessError, Row};

pub fn parse_rows(text: &str) -> Result<Vec<Row>, HarnessError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(HarnessError::from)).collect()
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// distinct abscissae.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if lx.len() < 2 || sxx < 1e-12 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// The round bound each algorithm is expected to follow, up to log factors.
pub fn model(algo: Algorithm, n: f64, d: f64) -> f64 {
    match algo {
        Algorithm::Exact => (n * d).sqrt(),
        Algorithm::Simple => n.sqrt() * d,
        Algorithm::Approx => (n * d).cbrt() + d,
    }
}

fn model_name(algo: Algorithm) -> &'static str {
    match algo {
        Algorithm::Exact => "sqrt(nD)",
        Algorithm::Simple => "sqrt(n)D",
        Algorithm::Approx => "cbrt(nD)+D",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub family: String,
    pub algo: Algorithm,
    pub sizes: usize,
    /// Exponent of mean rounds against n.
    pub slope_n: Option<f64>,
    /// Exponent of mean rounds against the algorithm's model bound.
    pub slope_model: Option<f64>,
    /// Largest `rounds / (model · log₂² n)` over all rows.
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingSummary {
    pub fits: Vec<ScalingFit>,
}

impl ScalingSummary {
    pub fn get(&self, family: &str, algo: Algorithm) -> Option<&ScalingFit> {
        self.fits.iter().find(|f| f.family == family && f.algo == algo)
    }

    pub fn to_text(&self) -> String {
        let opt = |s: Option<f64>| s.map_or_else(|| "undefined".to_string(), fmt_float);
        let mut out = String::from("family,algo,sizes,model,slope_vs_n,slope_vs_model,max_ratio\n");
        for f in &self.fits {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                f.family,
                f.algo,
                f.sizes,
                model_name(f.algo),
                opt(f.slope_n),
                opt(f.slope_model),
                fmt_float(f.max_ratio)
            );
        }
        out
    }
}

/// Per (family, algorithm): mean rounds and mean diameter per size, then
/// log-log fits against `n` and against the model bound.
pub fn cmd_scaling(csv_text: &str) -> Result<ScalingSummary, HarnessError> {
    summarize(&parse_rows(csv_text)?)
}

pub fn summarize(rows: &[Row]) -> Result<ScalingSummary, HarnessError> {
    let mut groups: BTreeMap<(String, Algorithm), BTreeMap<usize, Vec<&Row>>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.family.clone(), r.algo)).or_default().entry(r.n).or_default().push(r);
    }
    let mut fits = Vec::new();
    for ((family, algo), by_n) in groups {
        let (mut ns, mut models, mut rounds) = (Vec::new(), Vec::new(), Vec::new());
        let mut max_ratio: f64 = 0.0;
        for (&n, rs) in &by_n {
            let k = rs.len() as f64;
            let mean_rounds = rs.iter().map(|r| r.rounds as f64).sum::<f64>() / k;
            let mean_d = rs.iter().map(|r| r.d_true as f64).sum::<f64>() / k;
            let nf = n as f64;
            ns.push(nf);
            models.push(model(algo, nf, mean_d.max(1.0)));
            rounds.push(mean_rounds.max(1.0));
            let log2 = nf.log2().max(1.0).powi(2);
            for r in rs {
                max_ratio = max_ratio.max(r.rounds as f64 / (model(algo, nf, (r.d_true as f64).max(1.0)) * log2));
            }
        }
        fits.push(ScalingFit {
            family,
            algo,
            sizes: ns.len(),
            slope_n: fit_slope(&ns, &rounds),
            slope_model: fit_slope(&models, &rounds),
            max_ratio,
        });
    }
    Ok(ScalingSummary { fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((fit_slope(&xs, &ys).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(fit_slope(&[4.0, 4.0], &[1.0, 2.0]), None);
        assert_eq!(fit_slope(&[4.0], &[1.0]), None);
    }

    #[test]
    fn single_size_is_undefined() {
        let csv = "family,n,D_true,algo,D_out,rounds,words,leader_qubits,seed,ok,setup_calls,eval_calls,inverse_calls\n\
                   path,8,7,exact,7,100,10,5,0,true,1,1,0\n\
                   path,8,7,exact,7,110,10,5,1,true,1,1,0\n";
        let s = cmd_scaling(csv).unwrap();
        assert_eq!(s.fits.len(), 1);
        assert_eq!(s.fits[0].slope_n, None);
        assert!(s.to_text().contains("undefined"));
    }
}
