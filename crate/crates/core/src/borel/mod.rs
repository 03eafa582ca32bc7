//! Formal monomial Borel and Laplace transforms, the monomial convolution and
//! the blow-up commutation identity.

mod io;
mod series;
mod transforms;

pub use io::{read_borel_csv, write_borel_csv};
pub use series::BorelSeries;
pub use transforms::{
    blowup_offset_gap, borel_blowup_commute_check, convolve, formal_borel, formal_laplace, split_summand,
};
