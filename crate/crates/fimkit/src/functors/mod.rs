//! The shift, derivative, kernel, truncation, and iterated-image operations
//! on truncated modules, each returning both the resulting module and the
//! natural maps that define it. Every operation shrinks the box it can
//! certify results on; the loss is reported, never silently absorbed.

mod derivative;
mod filtration;
mod shift;
mod truncation;

pub use derivative::{
    derivative_and_kernel, derivative_functor, four_term_table, kernel_functor, total_derivative,
    total_kernel, DerivativeKernel, FourTermRow, FourTermTable,
};
pub use filtration::{iterated_image_filtration, FiltrationResult};
pub use shift::{shift, shift_many, total_shift, FunctorResult};
pub use truncation::truncation_and_ideal;
