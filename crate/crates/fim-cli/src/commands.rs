use std::path::Path;

use fimkit::combinat::Shape;
use fimkit::error::{FimError, Result};
use fimkit::format::{parse_presentation, PresentationFile, Report};
use fimkit::functors::{four_term_table, shift_many};
use fimkit::homology::{
    homology, relative_projective_test, shift_resolution, torsion_analysis, Verdict,
};
use fimkit::linalg::FieldSpec;
use fimkit::module::{GradedDims, TruncatedModule};
use fimkit::stability::{decompose, hilbert_fit, stability_report, StabilityVerdict};

/// A finished run: the report plus whether it contains findings — theorem
/// violations or an inconclusive answer to the question the command was
/// required to settle. Findings map to exit code 1.
pub struct Outcome {
    pub report: Report,
    pub findings: bool,
}

impl Outcome {
    fn clean(report: Report) -> Outcome {
        Outcome {
            report,
            findings: false,
        }
    }
}

pub struct Ctx {
    pub file: PresentationFile,
    pub module: TruncatedModule,
}

pub fn load(
    input: &Path,
    field_override: Option<FieldSpec>,
    box_override: Option<&Shape>,
) -> Result<Ctx> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| FimError::Parse(format!("{}: {e}", input.display())))?;
    let file = parse_presentation(&text, field_override)?;
    let module = file.build(box_override)?;
    Ok(Ctx { file, module })
}

fn fmt_graded(g: &GradedDims) -> String {
    if g.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = g
        .entries()
        .filter(|(_, d)| *d > 0)
        .map(|(n, d)| format!("{n}={d}"))
        .collect();
    parts.join(" ")
}

fn fmt_list<T: std::fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

fn header(report: &mut Report, ctx: &Ctx) {
    report
        .section("module")
        .item("field", ctx.module.field())
        .item("box", ctx.module.bound())
        .item("factors", ctx.module.arity())
        .item("generators", ctx.file.presentation.generators.len())
        .item("relations", ctx.file.presentation.relations.len())
        .item("total dimension", ctx.module.total_dim());
}

fn dims_section(report: &mut Report, v: &TruncatedModule) {
    let bound = v.bound().clone();
    let section = report.section("dimensions");
    section.item("box", &bound);
    match v.arity() {
        1 => {
            let row: Vec<String> = (0..=bound.entry(0))
                .map(|n| v.dim(&Shape::new(vec![n])).to_string())
                .collect();
            section.item("dims", row.join(" "));
        }
        2 => {
            for n1 in 0..=bound.entry(0) {
                let row: Vec<String> = (0..=bound.entry(1))
                    .map(|n2| v.dim(&Shape::new(vec![n1, n2])).to_string())
                    .collect();
                section.item(format!("n1={n1}"), row.join(" "));
            }
        }
        _ => {
            for n in v.lattice().iter() {
                let d = v.dim(&n);
                section.item(n.to_string(), d);
            }
        }
    }
}

pub fn cmd_expand(ctx: &Ctx) -> Result<Outcome> {
    let mut report = Report::new();
    header(&mut report, ctx);
    dims_section(&mut report, &ctx.module);
    Ok(Outcome::clean(report))
}

pub fn cmd_analyze(ctx: &Ctx, s_max: usize) -> Result<Outcome> {
    let v = &ctx.module;
    let mut report = Report::new();
    let mut findings = false;
    header(&mut report, ctx);

    let hom = homology(v, s_max)?;
    {
        let section = report.section("homology");
        section.item("gd", hom.gd);
        for s in 0..=s_max {
            section.item(format!("H_{s}"), fmt_graded(&hom.h[s]));
        }
        for s in 1..=s_max {
            section.item(format!("hd_{s}"), hom.hd[s]);
        }
    }

    let torsion = torsion_analysis(v)?;
    {
        let section = report.section("torsion");
        for (i, td) in torsion.td.iter().enumerate() {
            section.item(format!("td_{}", i + 1), td);
        }
        section.item("td total", torsion.td_total);
        section.item("certified up to", &torsion.margin);
    }

    let relproj = relative_projective_test(v)?;
    {
        let section = report.section("relative-projectivity");
        match &relproj.verdict {
            Verdict::True => {
                section.item("relative projective", true);
            }
            Verdict::False { witness } => {
                section
                    .item("relative projective", false)
                    .item("witness", witness);
            }
            Verdict::Inconclusive { reason } => {
                section.item("relative projective", format!("inconclusive: {reason}"));
                findings = true;
            }
        }
        section.item("H_1", fmt_graded(&relproj.h1));
    }

    let ones = Shape::new(vec![1; v.arity()]);
    let resolution = shift_resolution(v, &ones)?;
    {
        let section = report.section("shift-resolution");
        section
            .item("length", resolution.length)
            .item("exhausted", resolution.exhausted);
        for (i, t) in resolution.thresholds.iter().enumerate() {
            section.item(format!("N_{}", i + 1), t);
        }
        section.item("piece gd", fmt_list(&resolution.piece_gd));
        match resolution.bounds_hold {
            Some(ok) => {
                section.item("bounds hold", ok);
                if !ok {
                    findings = true;
                }
            }
            None => {
                section.item("bounds hold", "inconclusive: box exhausted");
            }
        }
    }

    match hilbert_fit(v) {
        Ok(fit) => {
            let section = report.section("hilbert");
            section.item("grid origin", &fit.grid_origin);
            for (i, p) in fit.polys.iter().enumerate() {
                section.item(format!("P_{}", i + 1), p);
            }
            if fit.residual_ok {
                section.item("residual", "exact match on the stable grid");
            } else {
                let miss = fit.mismatch.as_ref().expect("mismatch recorded");
                section
                    .item("residual", "product does not match the dimension table")
                    .item("mismatch at", &miss.at)
                    .item("predicted", &miss.predicted)
                    .item("actual", miss.actual);
                findings = true;
            }
        }
        Err(FimError::BoxTooSmall(reason)) => {
            report
                .section("hilbert")
                .item("fit", format!("inconclusive: {reason}"));
        }
        Err(e) => return Err(e),
    }

    match stability_report(v) {
        Ok(stab) => {
            let section = report.section("stability");
            section.item("required from", &stab.required);
            match &stab.verdict {
                StabilityVerdict::Stable => {
                    section.item("verdict", "stable");
                }
                StabilityVerdict::Inconclusive { reason } => {
                    section.item("verdict", format!("inconclusive: {reason}"));
                }
                StabilityVerdict::Unstable { witness, reason } => {
                    section
                        .item("verdict", "unstable")
                        .item("witness", witness)
                        .item("reason", reason);
                    findings = true;
                }
            }
            match &stab.onset {
                Some(o) => section.item("observed from", o),
                None => section.item("observed from", "never inside this box"),
            };
            for (tail, mult) in &stab.stable_multiplicities {
                section.item(format!("family {tail}"), mult);
            }
        }
        Err(FimError::NeedsCharZero(_)) => {
            report.section("stability").item(
                "verdict",
                "unsupported over a prime field: irreducible multiplicities need characteristic zero",
            );
        }
        Err(e) => return Err(e),
    }

    Ok(Outcome { report, findings })
}

pub fn cmd_check(ctx: &Ctx) -> Result<Outcome> {
    let v = &ctx.module;
    let mut report = Report::new();
    let mut findings = false;
    header(&mut report, ctx);
    {
        let section = report.section("axioms");
        match v.check_axioms() {
            Ok(()) => {
                section.item("structure maps", "pass");
            }
            Err(e) => {
                section.item("structure maps", format!("FAIL: {e}"));
                findings = true;
            }
        }
    }
    {
        let section = report.section("four-term identity");
        match four_term_table(v) {
            Ok(table) => match table.first_violation() {
                None => {
                    section.item("objects checked", table.rows.len());
                    section.item("identity", "pass");
                }
                Some(row) => {
                    section
                        .item("identity", "FAIL")
                        .item("at", &row.shape)
                        .item(
                            "kernel + shifted",
                            row.kernel + row.shifted,
                        )
                        .item("source + derivative", row.source + row.derivative);
                    findings = true;
                }
            },
            Err(e) => {
                section.item("identity", format!("inconclusive: {e}"));
            }
        }
    }
    Ok(Outcome { report, findings })
}

pub fn cmd_shift(ctx: &Ctx, amount: &Shape) -> Result<Outcome> {
    let shifted = shift_many(&ctx.module, amount)?;
    let mut report = Report::new();
    header(&mut report, ctx);
    report
        .section("shift")
        .item("amount", amount)
        .item("box loss", &shifted.box_loss);
    dims_section(&mut report, &shifted.output);
    Ok(Outcome::clean(report))
}

pub fn cmd_nagpal(ctx: &Ctx, amount: Option<&Shape>) -> Result<Outcome> {
    let v = &ctx.module;
    let ones = Shape::new(vec![1; v.arity()]);
    let amount = amount.unwrap_or(&ones);
    let resolution = shift_resolution(v, amount)?;
    let mut report = Report::new();
    let mut findings = false;
    header(&mut report, ctx);
    {
        let section = report.section("shift-resolution");
        section
            .item("shift amount", amount)
            .item("length", resolution.length)
            .item("exhausted", resolution.exhausted)
            .item("input gd", resolution.input_gd)
            .item("piece gd", fmt_list(&resolution.piece_gd));
        for (i, t) in resolution.thresholds.iter().enumerate() {
            section.item(format!("N_{}", i + 1), t);
        }
        match resolution.bounds_hold {
            Some(ok) => {
                section.item("bounds hold", ok);
                if !ok {
                    findings = true;
                }
            }
            None => {
                section.item("bounds hold", "inconclusive: box exhausted");
            }
        }
    }
    {
        let section = report.section("complex homology");
        for (j, h) in resolution.homology.iter().enumerate() {
            section.item(format!("H_{j}"), fmt_graded(h));
        }
    }
    Ok(Outcome { report, findings })
}

pub fn cmd_decompose(ctx: &Ctx) -> Result<Outcome> {
    let v = &ctx.module;
    let mut report = Report::new();
    header(&mut report, ctx);
    let shapes: Vec<Shape> = v.lattice().iter().collect();
    for n in shapes {
        let table = decompose(v, &n)?;
        let section = report.section(format!("multiplicities {n}"));
        section.item("dimension", v.dim(&n));
        for (lambda, mult) in &table.mults {
            // partition displays open with '[', which a bare report key may not
            section.item(format!("mult {lambda}"), mult);
        }
    }
    Ok(Outcome::clean(report))
}

pub fn cmd_hilbert(ctx: &Ctx) -> Result<Outcome> {
    let mut report = Report::new();
    header(&mut report, ctx);
    match hilbert_fit(&ctx.module) {
        Ok(fit) => {
            let mut findings = false;
            let section = report.section("hilbert");
            section
                .item("grid origin", &fit.grid_origin)
                .item("gd", fit.gd)
                .item("degrees", fmt_list(&fit.degrees()));
            for (i, p) in fit.polys.iter().enumerate() {
                section.item(format!("P_{}", i + 1), p);
            }
            section.item("leading product", fit.leading_product());
            if fit.residual_ok {
                section.item("residual", "exact match on the stable grid");
            } else {
                let miss = fit.mismatch.as_ref().expect("mismatch recorded");
                section
                    .item("residual", "product does not match the dimension table")
                    .item("mismatch at", &miss.at)
                    .item("predicted", &miss.predicted)
                    .item("actual", miss.actual);
                findings = true;
            }
            Ok(Outcome { report, findings })
        }
        Err(FimError::BoxTooSmall(reason)) => {
            report
                .section("hilbert")
                .item("fit", format!("inconclusive: {reason}"));
            Ok(Outcome {
                report,
                findings: true,
            })
        }
        Err(e) => Err(e),
    }
}
