//! CSV and JSON rendering of experiment records.
//!
//! CSV columns, in order: experiment, n, trials, seed, metric, mean, stddev,
//! max, bound, pass. `bound` and `pass` are empty for metrics without a
//! bound. The JSON form is an array with one object per CSV row.

use ziptree::experiments::ExperimentRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn render(records: &[ExperimentRecord], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r).expect("records serialize to CSV");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize to JSON");
            s.push('\n');
            s
        }
    }
}
