//! Report rendering: one table model, three output formats.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Flagged,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Flagged => "flagged",
            Status::Skipped => "skipped",
        }
    }
}

/// One claim of the reproduction report.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimRow {
    pub claim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Plain string table rendered to markdown or CSV.
pub struct TextTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(headers: Vec<S>) -> Self {
        TextTable {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: Vec<S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render_md(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let line = |cells: &[String], widths: &[usize]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            format!("| {} |\n", padded.join(" | "))
        };
        out.push_str(&line(&self.headers, &widths));
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
        for row in &self.rows {
            out.push_str(&line(row, &widths));
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let escape = |cell: &str| {
            if cell.contains([',', '"', '\n']) {
                format!("\"{}\"", cell.replace('"', "\"\""))
            } else {
                cell.to_string()
            }
        };
        let mut out = String::new();
        let render_row = |cells: &[String]| {
            cells.iter().map(|c| escape(c)).collect::<Vec<_>>().join(",")
        };
        out.push_str(&render_row(&self.headers));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&render_row(row));
            out.push('\n');
        }
        out
    }
}

/// Fixed-width numeric formatting shared by every report so reruns stay
/// byte-identical.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.abs() >= 1e-4 && x.abs() < 1e7 {
        format!("{x:.6}")
    } else {
        format!("{x:.4e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn fmt_pm(value: f64, stderr: f64) -> String {
    format!("{} +/- {}", fmt_num(value), fmt_num(stderr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_escapes_commas_and_quotes() {
        let mut t = TextTable::new(vec!["a", "b"]);
        t.push(vec!["x,y", "say \"hi\""]);
        let csv = t.render_csv();
        assert_eq!(csv, "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
    }

    #[test]
    fn md_table_is_aligned() {
        let mut t = TextTable::new(vec!["col", "c"]);
        t.push(vec!["v", "value"]);
        let md = t.render_md();
        assert!(md.starts_with("| col | c     |\n|-----|-------|\n"));
    }

    #[test]
    fn numbers_format_stably() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(0.5078521126760563), "0.507852");
        assert_eq!(fmt_num(2.555929969349868e-66), "2.5559e-66");
        assert_eq!(fmt_num(-0.017384877771461058), "-0.017385");
    }
}
