use crate::combinat::Shape;
use crate::error::Result;
use crate::linalg::SpMat;
use crate::module::TruncatedModule;

/// Restrict the value tables to the objects satisfying `keep`, zeroing out
/// everything else. Inclusions that cross the boundary become zero maps of
/// the right shape.
fn masked(v: &TruncatedModule, keep: impl Fn(&Shape) -> bool) -> TruncatedModule {
    let field = v.field();
    let lattice = v.lattice().clone();
    let dims = crate::module::LatticeMap::build(&lattice, |n| if keep(n) { v.dim(n) } else { 0 });
    let trans = crate::module::LatticeMap::build(&lattice, |n| {
        if keep(n) {
            (0..v.arity())
                .map(|i| {
                    (1..n.entry(i))
                        .map(|j| v.trans_mat(n, i, j).clone())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        } else {
            (0..v.arity())
                .map(|i| vec![SpMat::zeros(field, 0, 0); n.entry(i).saturating_sub(1)])
                .collect()
        }
    });
    let incl = crate::module::LatticeMap::build(&lattice, |n| {
        (0..v.arity())
            .map(|i| {
                let up = n.plus_unit(i);
                if !lattice.contains(&up) {
                    return None;
                }
                let mat = match (keep(n), keep(&up)) {
                    (true, true) => v.incl_mat(n, i).unwrap().clone(),
                    (true, false) => SpMat::zeros(field, 0, v.dim(n)),
                    (false, true) => SpMat::zeros(field, v.dim(&up), 0),
                    (false, false) => SpMat::zeros(field, 0, 0),
                };
                Some(mat)
            })
            .collect()
    });
    TruncatedModule::from_parts(field, dims, trans, incl)
        .expect("masking preserves the table axioms")
}

/// Split a module along direction `i` into the part supported where the
/// `i`-th coordinate is zero and the part supported where it is positive.
/// The two pieces partition the dimensions objectwise; the first is killed
/// by shifting along `i`.
pub fn truncation_and_ideal(
    v: &TruncatedModule,
    i: usize,
) -> Result<(TruncatedModule, TruncatedModule)> {
    assert!(i < v.arity(), "direction out of range");
    let tau = masked(v, |n| n.entry(i) == 0);
    let ideal = masked(v, |n| n.entry(i) > 0);
    Ok((tau, ideal))
}
