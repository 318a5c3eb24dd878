use serde::Serialize;

/// Mean, spread and maximum of a sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for fewer than two samples.
    pub stddev: f64,
    pub max: f64,
    pub count: usize,
}

impl SummaryStats {
    pub fn from_samples<I>(samples: I) -> SummaryStats
    where
        I: IntoIterator,
        I::Item: Into<f64>,
    {
        // Welford's update keeps the variance stable for long runs.
        let mut count = 0usize;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        let mut max = f64::NEG_INFINITY;
        for x in samples {
            let x = x.into();
            count += 1;
            let delta = x - mean;
            mean += delta / count as f64;
            m2 += delta * (x - mean);
            max = max.max(x);
        }
        if count == 0 {
            return SummaryStats::default();
        }
        let stddev = if count > 1 {
            (m2 / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        SummaryStats {
            mean,
            stddev,
            max,
            count,
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.stddev / (self.count as f64).sqrt()
        }
    }
}
