//! Control-parameter schedules.

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

/// The `2p` control parameters of a depth-`p` circuit.
///
/// The cut count is integer valued, so the objective is 2π-periodic in each
/// `gamma` and π-periodic in each `beta`; [`AngleSchedule::new`] stores the
/// canonical representative (`gamma` in `[0, 2π)`, `beta` in `[0, π)`), which
/// makes schedules directly comparable. Searches that need the covering
/// space can keep raw values via [`AngleSchedule::new_unreduced`].
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSchedule {
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

impl AngleSchedule {
    /// Builds a canonical schedule: angles reduced into their fundamental
    /// domains at construction time.
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        Self::validate(&gamma, &beta)?;
        Ok(Self {
            gamma: gamma.iter().map(|&g| g.rem_euclid(2.0 * PI)).collect(),
            beta: beta.iter().map(|&b| b.rem_euclid(PI)).collect(),
        })
    }

    /// Keeps the given values verbatim. Intended for covering-space searches
    /// and for exercising the simulator's periodicity directly.
    pub fn new_unreduced(gamma: Vec<f64>, beta: Vec<f64>) -> Self {
        Self::validate(&gamma, &beta).expect("valid unreduced schedule");
        Self { gamma, beta }
    }

    fn validate(gamma: &[f64], beta: &[f64]) -> Result<()> {
        if gamma.is_empty() || gamma.len() != beta.len() {
            return Err(Error::InvalidParameter(format!(
                "schedule needs equal, non-empty gamma/beta lists (got {} and {})",
                gamma.len(),
                beta.len()
            )));
        }
        if gamma.iter().chain(beta).any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("angles must be finite".into()));
        }
        Ok(())
    }

    /// Uniform draw: `gamma` in `[0, 2π)^p`, `beta` in `[0, π)^p`.
    pub fn random<R: Rng>(p: usize, rng: &mut R) -> Self {
        let gamma = (0..p).map(|_| rng.gen::<f64>() * 2.0 * PI).collect();
        let beta = (0..p).map(|_| rng.gen::<f64>() * PI).collect();
        Self::new(gamma, beta).expect("finite draws")
    }

    pub fn zeros(p: usize) -> Self {
        Self::new(vec![0.0; p], vec![0.0; p]).expect("p >= 1")
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Canonical schedule with every angle negated; prepares the conjugate
    /// state.
    pub fn negated(&self) -> Self {
        Self::new(self.gamma.iter().map(|g| -g).collect(), self.beta.iter().map(|b| -b).collect())
            .expect("negation preserves validity")
    }

    /// Flat coordinate view `[gamma_1..gamma_p, beta_1..beta_p]`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut flat = self.gamma.clone();
        flat.extend_from_slice(&self.beta);
        flat
    }

    /// Canonical schedule from the flat layout `[gamma.., beta..]`.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if flat.is_empty() || flat.len() % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "flat schedule needs an even, non-zero length (got {})",
                flat.len()
            )));
        }
        let p = flat.len() / 2;
        Self::new(flat[..p].to_vec(), flat[p..].to_vec())
    }

    /// Serializes as structured text: `p`, then the angle lists in radians
    /// with round-trip-exact float formatting.
    pub fn to_text(&self) -> String {
        let fmt = |values: &[f64]| {
            values.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(" ")
        };
        format!(
            "p = {}\ngamma = {}\nbeta = {}\n",
            self.p(),
            fmt(&self.gamma),
            fmt(&self.beta)
        )
    }

    /// Parses the [`to_text`](Self::to_text) format. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut p: Option<usize> = None;
        let mut gamma: Option<Vec<f64>> = None;
        let mut beta: Option<Vec<f64>> = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected `key = value`, got `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "p" => {
                    p = Some(
                        value
                            .parse()
                            .map_err(|_| Error::Parse(format!("malformed depth `{value}`")))?,
                    )
                }
                "gamma" => gamma = Some(parse_angle_list(value)?),
                "beta" => beta = Some(parse_angle_list(value)?),
                other => return Err(Error::Parse(format!("unknown field `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| Error::Parse("missing field `p`".into()))?;
        let gamma = gamma.ok_or_else(|| Error::Parse("missing field `gamma`".into()))?;
        let beta = beta.ok_or_else(|| Error::Parse("missing field `beta`".into()))?;
        if gamma.len() != p || beta.len() != p {
            return Err(Error::Parse(format!(
                "angle lists do not match p = {p} (gamma: {}, beta: {})",
                gamma.len(),
                beta.len()
            )));
        }
        Self::new(gamma, beta)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn parse_angle_list(value: &str) -> Result<Vec<f64>> {
    value
        .split_whitespace()
        .map(|token| {
            token.parse().map_err(|_| Error::Parse(format!("malformed angle `{token}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn construction_reduces_into_fundamental_domains() {
        let s = AngleSchedule::new(vec![7.0, -0.5], vec![4.0, -0.25]).unwrap();
        for &g in s.gamma() {
            assert!((0.0..2.0 * PI).contains(&g));
        }
        for &b in s.beta() {
            assert!((0.0..PI).contains(&b));
        }
        assert!((s.gamma()[0] - (7.0 - 2.0 * PI)).abs() < 1e-15);
        assert!((s.beta()[0] - (4.0 - PI)).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_lists() {
        assert!(AngleSchedule::new(vec![], vec![]).is_err());
        assert!(AngleSchedule::new(vec![0.1], vec![0.1, 0.2]).is_err());
        assert!(AngleSchedule::new(vec![f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn flat_round_trip() {
        let s = AngleSchedule::random(3, &mut stream(1, "angles", 0));
        let back = AngleSchedule::from_flat(&s.to_flat()).unwrap();
        assert_eq!(s, back);
        assert!(AngleSchedule::from_flat(&[0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let s = AngleSchedule::random(4, &mut stream(2, "angles", 7));
        let text = s.to_text();
        let back = AngleSchedule::from_text(&text).unwrap();
        assert_eq!(s, back);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_parser_rejects_malformed_documents() {
        assert!(AngleSchedule::from_text("gamma = 0.1\nbeta = 0.1\n").is_err());
        assert!(AngleSchedule::from_text("p = 2\ngamma = 0.1\nbeta = 0.1 0.2\n").is_err());
        assert!(AngleSchedule::from_text("p = 1\ngamma = x\nbeta = 0.1\n").is_err());
        assert!(AngleSchedule::from_text("p = 1\ngamma = 0.1\nbeta = 0.1\nq = 2\n").is_err());
    }
}
