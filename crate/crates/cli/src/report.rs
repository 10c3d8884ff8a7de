use std::fmt::Write as _;
use std::time::Duration;

/// Output of one run. Everything except `wall_time` goes into the CSV, so two
/// runs with the same config and seed render to the same bytes.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub header: Vec<(String, String)>,
    pub summary: Vec<(String, String)>,
    pub columns: String,
    pub rows: Vec<String>,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn new(columns: &str) -> RunReport {
        RunReport {
            header: Vec::new(),
            summary: Vec::new(),
            columns: columns.to_string(),
            rows: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn stat(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.header.iter().chain(&self.summary) {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s.push_str(&self.columns);
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }
}
