//! `key: value` line records.

use std::fmt::Display;

#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    failed: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.lines.push(format!("{key}: {value}"));
        self
    }

    /// Several fields on one record.
    pub fn record(&mut self, fields: &[(&str, String)]) -> &mut Self {
        let parts: Vec<String> = fields.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        self.lines.push(parts.join(", "));
        self
    }

    pub fn raw(&mut self, text: &str) -> &mut Self {
        self.lines.extend(text.lines().map(str::to_string));
        self
    }

    /// Marks a failed check; the run exits with status 1.
    pub fn check(&mut self, name: &str, pass: bool) -> &mut Self {
        self.failed |= !pass;
        self.record(&[
            ("check", name.into()),
            ("status", if pass { "pass" } else { "fail" }.into()),
        ])
    }

    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

pub fn join<T: Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}
