use serde::{Deserialize, Serialize};

use crate::combinat::{parse_image_lists, Injection, Shape};
use crate::error::{FimError, Result};
use crate::linalg::FieldSpec;
use crate::module::{
    from_presentation, Generator, Presentation, Relation, RelationTerm, TruncatedModule,
};

/// The on-disk document. Shapes and injections use their textual
/// encodings inside JSON strings; generator references in relation terms
/// may be labels or zero-based indices.
#[derive(Serialize, Deserialize)]
struct PresentationDoc {
    field: String,
    m: usize,
    #[serde(rename = "box")]
    bound: String,
    generators: Vec<GeneratorDoc>,
    relations: Vec<RelationDoc>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorDoc {
    shape: String,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct RelationDoc {
    shape: String,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    gen: serde_json::Value,
    injection: String,
    coeff: String,
}

/// A parsed presentation file: the presentation plus the box it declares.
#[derive(Clone, Debug)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub bound: Shape,
}

impl PresentationFile {
    /// Builds the module on the declared box, or on an override. The box
    /// must contain every generator — a module truncated below its own
    /// generators would silently lose them.
    pub fn build(&self, box_override: Option<&Shape>) -> Result<TruncatedModule> {
        let bound = box_override.unwrap_or(&self.bound);
        bound.check_arity(self.presentation.arity)?;
        for gen in &self.presentation.generators {
            if !gen.shape.leq(bound) {
                return Err(FimError::BoxTooSmall(format!(
                    "generator {:?} at {} does not fit in the box {bound}",
                    gen.label, gen.shape
                )));
            }
        }
        from_presentation(&self.presentation, bound)
    }
}

fn resolve_gen(
    value: &serde_json::Value,
    labels: &[String],
    at: &str,
) -> Result<usize> {
    match value {
        serde_json::Value::String(label) => labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| {
                FimError::BadPresentation(format!(
                    "{at}: unknown generator label {label:?}"
                ))
            }),
        serde_json::Value::Number(x) => {
            let idx = x.as_u64().ok_or_else(|| {
                FimError::BadPresentation(format!("{at}: generator index {x} is not a natural number"))
            })? as usize;
            if idx >= labels.len() {
                return Err(FimError::BadPresentation(format!(
                    "{at}: generator index {idx} out of range, only {} generators",
                    labels.len()
                )));
            }
            Ok(idx)
        }
        other => Err(FimError::BadPresentation(format!(
            "{at}: generator reference must be a label or an index, got {other}"
        ))),
    }
}

/// Parses a presentation document. `field_override` re-reads every
/// coefficient under the given field instead of the declared one, so a
/// rational file with integer coefficients can be rerun mod p.
pub fn parse_presentation(
    text: &str,
    field_override: Option<FieldSpec>,
) -> Result<PresentationFile> {
    let doc: PresentationDoc = serde_json::from_str(text).map_err(|e| {
        FimError::Parse(format!(
            "presentation file, line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let declared: FieldSpec = doc.field.parse()?;
    let field = field_override.unwrap_or(declared);
    if doc.m == 0 {
        return Err(FimError::BadPresentation(
            "the number of factors m must be at least 1".into(),
        ));
    }
    let bound: Shape = doc.bound.parse()?;
    bound.check_arity(doc.m)?;
    let mut labels: Vec<String> = Vec::with_capacity(doc.generators.len());
    let mut generators = Vec::with_capacity(doc.generators.len());
    for (g, gen) in doc.generators.iter().enumerate() {
        let shape: Shape = gen.shape.parse().map_err(|e| {
            FimError::BadPresentation(format!("generator {g} ({:?}): {e}", gen.label))
        })?;
        shape.check_arity(doc.m).map_err(|e| {
            FimError::BadPresentation(format!("generator {g} ({:?}): {e}", gen.label))
        })?;
        if gen.label.is_empty() {
            return Err(FimError::BadPresentation(format!(
                "generator {g} needs a nonempty label"
            )));
        }
        if labels.contains(&gen.label) {
            return Err(FimError::BadPresentation(format!(
                "generator label {:?} appears twice",
                gen.label
            )));
        }
        labels.push(gen.label.clone());
        generators.push(Generator {
            shape,
            label: gen.label.clone(),
        });
    }
    let mut relations = Vec::with_capacity(doc.relations.len());
    for (r, rel) in doc.relations.iter().enumerate() {
        let shape: Shape = rel
            .shape
            .parse()
            .map_err(|e| FimError::BadPresentation(format!("relation {r}: {e}")))?;
        shape
            .check_arity(doc.m)
            .map_err(|e| FimError::BadPresentation(format!("relation {r}: {e}")))?;
        let mut terms = Vec::with_capacity(rel.terms.len());
        for (t, term) in rel.terms.iter().enumerate() {
            let at = format!("relation {r}, term {t}");
            let gen = resolve_gen(&term.gen, &labels, &at)?;
            let images = parse_image_lists(&term.injection)
                .map_err(|e| FimError::BadPresentation(format!("{at}: {e}")))?;
            let injection =
                Injection::new(generators[gen].shape.clone(), shape.clone(), images)
                    .map_err(|e| FimError::BadPresentation(format!("{at}: {e}")))?;
            let coeff = field
                .parse_coeff(&term.coeff)
                .map_err(|e| FimError::BadPresentation(format!("{at}: {e}")))?;
            terms.push(RelationTerm {
                gen,
                injection,
                coeff,
            });
        }
        relations.push(Relation { shape, terms });
    }
    let presentation = Presentation {
        field,
        arity: doc.m,
        generators,
        relations,
    };
    presentation.validate()?;
    Ok(PresentationFile {
        presentation,
        bound,
    })
}

/// Canonical emission: generators referenced by label, two-space indented,
/// trailing newline. `parse_presentation` inverts it.
pub fn emit_presentation(p: &Presentation, bound: &Shape) -> String {
    let field = p.field;
    let doc = PresentationDoc {
        field: field.to_string(),
        m: p.arity,
        bound: bound.to_string(),
        generators: p
            .generators
            .iter()
            .map(|g| GeneratorDoc {
                shape: g.shape.to_string(),
                label: g.label.clone(),
            })
            .collect(),
        relations: p
            .relations
            .iter()
            .map(|rel| RelationDoc {
                shape: rel.shape.to_string(),
                terms: rel
                    .terms
                    .iter()
                    .map(|term| TermDoc {
                        gen: serde_json::Value::String(
                            p.generators[term.gen].label.clone(),
                        ),
                        injection: term.injection.to_string(),
                        coeff: field.format(&term.coeff),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut text =
        serde_json::to_string_pretty(&doc).expect("document maps to plain JSON");
    text.push('\n');
    text
}
