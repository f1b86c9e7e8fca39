use fimkit::format::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Table,
    Structured,
}

pub fn render(report: &Report, format: OutFormat) -> String {
    match format {
        OutFormat::Structured => report.emit(),
        OutFormat::Table => table(report),
    }
}

fn table(report: &Report) -> String {
    let mut out = String::new();
    for (k, section) in report.sections.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str(&section.name);
        out.push('\n');
        out.extend(std::iter::repeat('-').take(section.name.len()));
        out.push('\n');
        let width = section
            .items
            .iter()
            .map(|(key, _)| key.len())
            .max()
            .unwrap_or(0);
        for (key, value) in &section.items {
            out.push_str(&format!("{key:<width$}  {value}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fimkit::format::Report;

    #[test]
    fn table_aligns_values_per_section() {
        let mut report = Report::new();
        report.section("alpha").item("k", 1).item("longer key", 22);
        report.section("beta").item("x", "y z");
        let text = render(&report, OutFormat::Table);
        let expected = "\
alpha
-----
k           1
longer key  22

beta
----
x  y z
";
        assert_eq!(text, expected);
    }

    #[test]
    fn structured_output_round_trips() {
        let mut report = Report::new();
        report.section("alpha").item("k", "v: w");
        let text = render(&report, OutFormat::Structured);
        assert_eq!(Report::parse(&text).unwrap(), report);
    }
}
