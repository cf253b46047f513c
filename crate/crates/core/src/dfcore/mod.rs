//! Exact and floating-point algebra of double forms on an orthonormal frame.

pub mod basis;
pub mod form;
pub mod ops;

pub use basis::{binomial, combinations, MultiIndex, MAX_DIM};
pub use form::DoubleForm;
pub use ops::{
    contract, contract_times, double_star_is_odd, first_bianchi_defect, hodge_star,
    inner_product, metric_mult, metric_mult_via_star, metric_power, norm_sq, power, product, star_pairing,
};
