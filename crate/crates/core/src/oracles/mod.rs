//! Classical stand-ins for period finding, discrete logarithms and factoring.

mod dlog;
mod factor;
mod orbit;
mod order;

pub use dlog::{
    dlog, dlog_brute, dlog_bsgs, dlog_rho, dlog_with_order, group_dlog, DlogDomain, FieldDomain,
    GroupDomain, MatrixDomain, BRUTE_LIMIT,
};
pub use factor::{factor_integer, factor_power_minus_one, Factorization};
pub use orbit::{brent, orbit_index_period, OrbitShape};
pub use order::{
    endo_order, field_element_order, gl_exponent_multiple, gl_exponent_multiple_q, linear_order, matrix_order,
    multiplicative_order, unit_group_order,
};
