use crate::error::{Error, Result};
use crate::window::GroupDelaySamples;

/// Observations `(x_i, y_i)` with strictly increasing, finite `x` and finite `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl DataSet {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "x has {} values but y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: x.len(),
            });
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("data set"));
        }
        if let Some(i) = x.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput(format!(
                "x must be strictly increasing (x[{}] = {:e}, x[{}] = {:e})",
                i,
                x[i],
                i + 1,
                x[i + 1]
            )));
        }
        Ok(DataSet { x, y })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (x, y) = pairs.into_iter().unzip();
        Self::new(x, y)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (f64, f64)> + ExactSizeIterator + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    pub fn span(&self) -> f64 {
        self.x[self.x.len() - 1] - self.x[0]
    }
}

impl TryFrom<&GroupDelaySamples> for DataSet {
    type Error = Error;

    fn try_from(samples: &GroupDelaySamples) -> Result<Self> {
        DataSet::new(samples.times().to_vec(), samples.freqs().to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(DataSet::new(vec![0.0], vec![1.0]).is_err());
        assert!(DataSet::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(DataSet::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(DataSet::new(vec![1.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(DataSet::new(vec![0.0, f64::NAN], vec![1.0, 2.0]).is_err());
        assert!(DataSet::new(vec![0.0, 1.0], vec![f64::INFINITY, 2.0]).is_err());
    }

    #[test]
    fn pairs_unzip() {
        let d = DataSet::from_pairs([(0.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(d.x(), &[0.0, 2.0]);
        assert_eq!(d.y(), &[1.0, 3.0]);
        assert_eq!(d.span(), 2.0);
    }
}
