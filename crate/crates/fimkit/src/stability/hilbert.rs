use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::combinat::Shape;
use crate::error::{FimError, Result};
use crate::homology::{homology, shift_resolution};
use crate::module::TruncatedModule;

/// Dense univariate polynomial with exact rational coefficients, stored
/// in ascending powers with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn evaluate_at(&self, x: i64) -> BigRational {
        self.evaluate(&BigRational::from_integer(BigInt::from(x)))
    }

    fn scaled(&self, c: &BigRational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
                let b = other.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
                a + b
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Multiply by the monic linear factor `x - root`.
    fn times_linear(&self, root: i64) -> Poly {
        let r = BigRational::from_integer(BigInt::from(root));
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] += c;
            coeffs[k] -= c * &r;
        }
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag} ")?;
                }
                if k == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{k}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Exact interpolation through the given sample points.
fn lagrange(points: &[(i64, usize)]) -> Poly {
    let mut sum = Poly::zero();
    for (j, &(xj, yj)) in points.iter().enumerate() {
        if yj == 0 {
            continue;
        }
        let mut basis = Poly::from_coeffs(vec![BigRational::one()]);
        let mut denom = BigRational::one();
        for (k, &(xk, _)) in points.iter().enumerate() {
            if k == j {
                continue;
            }
            basis = basis.times_linear(xk);
            denom *= BigRational::from_integer(BigInt::from(xj - xk));
        }
        let scale = BigRational::from_integer(BigInt::from(yj)) / denom;
        sum = sum.add(&basis.scaled(&scale));
    }
    sum
}

/// A grid point where the fitted product and the actual dimension differ.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub at: Shape,
    pub predicted: BigRational,
    pub actual: usize,
}

/// Product-polynomial fit of the dimension table over the stable grid:
/// dim at n should equal P_1(n_1) ··· P_m(n_m) from the grid origin on.
/// The gauge puts the global constant into the first factor, so every
/// other factor evaluates to 1 at its origin coordinate.
pub struct HilbertFit {
    pub polys: Vec<Poly>,
    /// Lower corner of the grid the fit was sampled and verified on.
    pub grid_origin: Shape,
    pub gd: i64,
    /// True when the product matches the dimension at every grid point.
    /// False is a finding, not a failure: it certifies the dimension
    /// table has no product shape on this grid.
    pub residual_ok: bool,
    pub mismatch: Option<Mismatch>,
}

impl HilbertFit {
    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(Poly::degree).collect()
    }

    /// Product of the leading coefficients — the growth constant of the
    /// whole dimension table.
    pub fn leading_product(&self) -> BigRational {
        self.polys
            .iter()
            .fold(BigRational::one(), |acc, p| acc * p.leading())
    }

    pub fn predicted(&self, n: &Shape) -> BigRational {
        self.polys
            .iter()
            .enumerate()
            .fold(BigRational::one(), |acc, (i, p)| {
                acc * p.evaluate_at(n.entry(i) as i64)
            })
    }
}

/// Fit one polynomial per direction along the axis lines through the grid
/// origin, then verify the product against every dimension on the grid.
/// The origin is the guaranteed polynomiality threshold; the fit degree is
/// capped by the generation degree, so each axis needs that many steps of
/// room inside the box.
pub fn hilbert_fit(v: &TruncatedModule) -> Result<HilbertFit> {
    let m = v.arity();
    let gd = homology(v, 0)?.gd;
    if v.is_zero() {
        return Ok(HilbertFit {
            polys: vec![Poly::zero(); m],
            grid_origin: Shape::zero(m),
            gd,
            residual_ok: true,
            mismatch: None,
        });
    }
    let thresholds = shift_resolution(v, &Shape::new(vec![1; m]))?.thresholds;
    let deg = gd.max(0) as usize;
    let origin = Shape::new(
        (0..m)
            .map(|i| gd.max(thresholds[i] + 1).max(0) as usize)
            .collect(),
    );
    let bound = v.bound().clone();
    for i in 0..m {
        if origin.entry(i) + deg > bound.entry(i) {
            return Err(FimError::BoxTooSmall(format!(
                "fitting direction {} needs {} samples from {}, but the box ends at {}",
                i + 1,
                deg + 1,
                origin.entry(i),
                bound.entry(i)
            )));
        }
    }
    let d = v.dim(&origin);
    if d == 0 {
        // nothing to gauge against: the only product through a vanishing
        // base is zero, so any nonzero grid value disproves product shape
        let mismatch = v
            .lattice()
            .iter()
            .filter(|n| origin.leq(n))
            .find(|n| v.dim(n) != 0)
            .map(|at| {
                let actual = v.dim(&at);
                Mismatch {
                    at,
                    predicted: BigRational::zero(),
                    actual,
                }
            });
        return Ok(HilbertFit {
            polys: vec![Poly::zero(); m],
            grid_origin: origin,
            gd,
            residual_ok: mismatch.is_none(),
            mismatch,
        });
    }
    let d_rat = BigRational::from_integer(BigInt::from(d));
    let mut polys = Vec::with_capacity(m);
    for i in 0..m {
        let points: Vec<(i64, usize)> = (0..=deg)
            .map(|t| {
                let mut probe = origin.clone();
                probe.0[i] += t;
                ((origin.entry(i) + t) as i64, v.dim(&probe))
            })
            .collect();
        let raw = lagrange(&points);
        polys.push(if i == 0 { raw } else { raw.scaled(&d_rat.recip()) });
    }
    let fit = HilbertFit {
        polys,
        grid_origin: origin,
        gd,
        residual_ok: true,
        mismatch: None,
    };
    let mismatch = v
        .lattice()
        .iter()
        .filter(|n| fit.grid_origin.leq(n))
        .find(|n| fit.predicted(n) != BigRational::from_integer(BigInt::from(v.dim(n))))
        .map(|at| {
            let predicted = fit.predicted(&at);
            let actual = v.dim(&at);
            Mismatch {
                at,
                predicted,
                actual,
            }
        });
    Ok(HilbertFit {
        residual_ok: mismatch.is_none(),
        mismatch,
        ..fit
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;
    use crate::module::{basic_relative_projective, direct_sum, GroupRep, Presentation};

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn a_trivial_seed_fits_a_product_of_lines() {
        let field = FieldSpec::Rational;
        let v = basic_relative_projective(
            field,
            &GroupRep::trivial(field, sh(&[1, 1])),
            &sh(&[6, 6]),
        )
        .unwrap();
        let fit = hilbert_fit(&v).unwrap();
        assert!(fit.residual_ok, "dims n1*n2 should factor exactly");
        assert_eq!(fit.grid_origin, sh(&[2, 2]));
        assert_eq!(fit.degrees(), vec![1, 1]);
        // first factor absorbs the constant: 2x, second is y/2
        assert_eq!(fit.polys[0].coeffs(), &[rat(0, 1), rat(2, 1)]);
        assert_eq!(fit.polys[1].coeffs(), &[rat(0, 1), rat(1, 2)]);
        assert!(fit.leading_product().is_one());
    }

    #[test]
    fn the_sign_seed_fits_choose_two() {
        let field = FieldSpec::Rational;
        let v = basic_relative_projective(field, &GroupRep::sign(field, sh(&[2])), &sh(&[6]))
            .unwrap();
        let fit = hilbert_fit(&v).unwrap();
        assert!(fit.residual_ok);
        assert_eq!(fit.polys[0].coeffs(), &[rat(0, 1), rat(-1, 2), rat(1, 2)]);
        assert_eq!(fit.leading_product(), rat(1, 2));
        assert_eq!(format!("{}", fit.polys[0]), "1/2 x^2 - 1/2 x");
    }

    #[test]
    fn the_zero_module_fits_the_zero_family() {
        let field = FieldSpec::Rational;
        let p = Presentation {
            field,
            arity: 2,
            generators: vec![],
            relations: vec![],
        };
        let v = crate::module::from_presentation(&p, &sh(&[3, 3])).unwrap();
        let fit = hilbert_fit(&v).unwrap();
        assert!(fit.residual_ok);
        assert!(fit.polys.iter().all(Poly::is_zero));
    }

    #[test]
    fn a_sum_of_different_seeds_has_no_product_shape() {
        // dims n1 + n2: the fit goes through both axis lines but the grid
        // check catches the first interior point where a product cannot
        // reproduce a sum
        let field = FieldSpec::Rational;
        let a = basic_relative_projective(
            field,
            &GroupRep::trivial(field, sh(&[1, 0])),
            &sh(&[5, 5]),
        )
        .unwrap();
        let b = basic_relative_projective(
            field,
            &GroupRep::trivial(field, sh(&[0, 1])),
            &sh(&[5, 5]),
        )
        .unwrap();
        let v = direct_sum(&a, &b).unwrap();
        let fit = hilbert_fit(&v).unwrap();
        assert!(!fit.residual_ok);
        let miss = fit.mismatch.expect("a mismatch witness is recorded");
        assert_eq!(miss.at, sh(&[2, 2]));
        assert_eq!(miss.predicted, rat(9, 2));
        assert_eq!(miss.actual, 4);
    }

    #[test]
    fn a_box_ending_before_the_grid_is_refused() {
        let field = FieldSpec::Rational;
        let v = basic_relative_projective(field, &GroupRep::trivial(field, sh(&[2])), &sh(&[3]))
            .unwrap();
        assert!(matches!(hilbert_fit(&v), Err(FimError::BoxTooSmall(_))));
    }

    #[test]
    fn interpolation_reproduces_binomials_exactly() {
        // C(x, 3) through four points, evaluated far outside the sample
        let points: Vec<(i64, usize)> = (3..=6).map(|x| (x, choose(x, 3))).collect();
        let p = lagrange(&points);
        assert_eq!(p.degree(), 3);
        for x in 0..20 {
            assert_eq!(
                p.evaluate_at(x),
                BigRational::from_integer(BigInt::from(choose(x, 3)))
            );
        }
    }

    fn choose(n: i64, k: i64) -> usize {
        let mut num = 1i64;
        let mut den = 1i64;
        for j in 0..k {
            num *= n - j;
            den *= j + 1;
        }
        (num / den).max(0) as usize
    }
}
