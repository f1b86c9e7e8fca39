use super::shift::shift;
use crate::error::Result;
use crate::module::{realize_span, span_from_closed, LatticeMap, TruncatedModule};

/// The chain of iterated images of a module inside its own shifts along one
/// direction: stage `j+1` is the image of stage `j` under the natural map
/// into its shift.
pub struct FiltrationResult {
    /// Stage 0 is the input; each later stage lives on a box one step
    /// smaller in the chosen direction.
    pub stages: Vec<TruncatedModule>,
    /// First `j` with the dimensions of stage `j` (restricted to the next
    /// box) equal to those of stage `j+1`; `None` when the box runs out
    /// before the dimensions settle.
    pub stabilization: Option<usize>,
}

pub fn iterated_image_filtration(
    v: &TruncatedModule,
    direction: usize,
) -> Result<FiltrationResult> {
    assert!(direction < v.arity(), "direction out of range");
    let mut stages = vec![v.clone()];
    let mut stabilization = None;
    loop {
        let current = stages.last().unwrap();
        let shifted = match shift(current, direction) {
            Ok(s) => s,
            // the box is exhausted before the dimensions settled
            Err(_) => break,
        };
        let image_gens = LatticeMap::build(shifted.output.lattice(), |n| {
            let x = shifted.connecting.get(n);
            (0..x.cols).map(|c| x.column(c).clone()).collect()
        });
        let image_span = span_from_closed(&shifted.output, &image_gens);
        let (next, _) = realize_span(&shifted.output, &image_span);
        let settled = current
            .restrict_to_box(next.bound())?
            .dims_table()
            == next.dims_table();
        stages.push(next);
        if settled {
            stabilization = Some(stages.len() - 2);
            break;
        }
    }
    Ok(FiltrationResult {
        stages,
        stabilization,
    })
}
