use std::fmt;

use crate::error::{FimError, Result};

/// A structured report: an ordered list of named sections, each an ordered
/// list of key–value items. The emission is line-based and deterministic,
/// and `parse` inverts `emit` exactly, so reports can be diffed, archived,
/// and machine-read without a second format.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub items: Vec<(String, String)>,
}

fn clean_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(['\n', '[', ']'])
}

fn clean_key(key: &str) -> bool {
    // a trailing space would merge into the `: ` separator on re-parse
    !key.is_empty()
        && !key.contains(['\n', ':'])
        && !key.starts_with('[')
        && !key.ends_with(' ')
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Appends a section and hands it back for item chaining.
    pub fn section(&mut self, name: impl Into<String>) -> &mut Section {
        let name = name.into();
        assert!(clean_name(&name), "section name {name:?} would not re-parse");
        self.sections.push(Section {
            name,
            items: Vec::new(),
        });
        self.sections.last_mut().expect("just pushed")
    }

    pub fn find(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for (k, section) in self.sections.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", section.name));
            for (key, value) in &section.items {
                out.push_str(&format!("{key}: {value}\n"));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Report> {
        let mut report = Report::new();
        let mut current: Option<Section> = None;
        for (lineno, line) in text.lines().enumerate() {
            let at = lineno + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                if !clean_name(name) {
                    return Err(FimError::Parse(format!(
                        "report line {at}: bad section name {name:?}"
                    )));
                }
                if let Some(done) = current.replace(Section {
                    name: name.to_string(),
                    items: Vec::new(),
                }) {
                    report.sections.push(done);
                }
                continue;
            }
            let Some((key, value)) = line.split_once(": ") else {
                return Err(FimError::Parse(format!(
                    "report line {at}: expected `key: value`, got {line:?}"
                )));
            };
            if !clean_key(key) {
                return Err(FimError::Parse(format!(
                    "report line {at}: bad key {key:?}"
                )));
            }
            let Some(section) = current.as_mut() else {
                return Err(FimError::Parse(format!(
                    "report line {at}: item before any [section]"
                )));
            };
            section
                .items
                .push((key.to_string(), value.to_string()));
        }
        if let Some(done) = current {
            report.sections.push(done);
        }
        Ok(report)
    }
}

impl Section {
    /// Adds one item. Keys must stay parseable; values may hold anything
    /// printable on one line.
    pub fn item(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Section {
        let key = key.into();
        let value = value.to_string();
        assert!(clean_key(&key), "item key {key:?} would not re-parse");
        assert!(
            !value.contains('\n'),
            "item value for {key:?} spans lines and would not re-parse"
        );
        self.items.push((key, value));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn a_small_report_round_trips() {
        let mut r = Report::new();
        r.section("dimensions")
            .item("box", "(3,3)")
            .item("(2,1)", 2);
        r.section("verdicts").item("relative projective", true);
        let text = r.emit();
        assert_eq!(Report::parse(&text).unwrap(), r);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn values_may_contain_separators() {
        let mut r = Report::new();
        r.section("s").item("k", "a: b: c");
        assert_eq!(Report::parse(&r.emit()).unwrap(), r);
    }

    #[test]
    fn stray_items_and_bad_lines_are_located() {
        let err = Report::parse("k: v\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
        let err = Report::parse("[s]\nnonsense\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn the_empty_report_is_the_empty_string() {
        assert_eq!(Report::new().emit(), "");
        assert_eq!(Report::parse("").unwrap(), Report::new());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Emission followed by parsing is the identity on well-formed
        /// reports, whatever the section and item contents.
        #[test]
        fn emit_then_parse_is_identity(
            sections in prop::collection::vec(
                (
                    "[a-z][a-z0-9 _.-]{0,11}",
                    prop::collection::vec(
                        ("[a-zA-Z(][a-zA-Z0-9 ()_,.-]{0,11}", "[ -~]{0,16}"),
                        0..4,
                    ),
                ),
                0..4,
            )
        ) {
            let mut r = Report::new();
            for (name, items) in &sections {
                let s = r.section(name.clone());
                for (k, v) in items {
                    s.item(k.trim_end(), v);
                }
            }
            prop_assert_eq!(Report::parse(&r.emit()).unwrap(), r);
        }
    }
}
