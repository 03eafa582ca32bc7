//! Truncated multivariate power series with vector coefficients.

mod io;
mod multi_index;
mod truncated;

pub use io::{read_series_csv, write_series_csv, SeriesCsv};
pub use multi_index::MultiIndex;
pub(crate) use truncated::outer;
pub use truncated::TruncatedSeries;
