// SPDX-License-Identifier: Apache-2.0

//! Parametric engine for longitudinal profile drawings of outdoor
//! water-supply and sewer networks.

// Negated float comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod model;
pub mod linkage;
pub mod datatable;
pub mod editops;
pub mod render;
pub mod store;
pub mod sample;
