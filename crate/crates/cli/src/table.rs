//! Plain-text, CSV and LaTeX emitters for small tables.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Latex,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Text => self.text(),
            Format::Latex => self.latex(),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&row.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// Left-aligned columns separated by two spaces.
    fn text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                std::iter::once(&self.header).chain(&self.rows).map(|r| r[i].chars().count()).max().unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }

    fn latex(&self) -> String {
        let mut out = format!("\\begin{{tabular}}{{{}}}\n", "r".repeat(self.header.len()));
        let escape = |s: &String| s.replace('_', "\\_");
        out.push_str(&format!("{} \\\\\n\\hline\n", self.header.iter().map(escape).collect::<Vec<_>>().join(" & ")));
        for row in &self.rows {
            out.push_str(&format!("{} \\\\\n", row.iter().map(|c| format!("${c}$")).collect::<Vec<_>>().join(" & ")));
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

pub fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emitters() {
        let mut t = Table::new(&["n", "value"]);
        t.push(vec!["0".into(), "1.5".into()]);
        t.push(vec!["10".into(), "a,b".into()]);
        assert_eq!(t.render(Format::Csv), "n,value\n0,1.5\n10,\"a,b\"\n");
        assert_eq!(t.render(Format::Text), "n   value\n0   1.5\n10  a,b\n");
        assert!(t.render(Format::Latex).contains("$10$ & $a,b$ \\\\"));
    }
}
