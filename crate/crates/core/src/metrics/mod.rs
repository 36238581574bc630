//! Performance metrics of a tracking system at stationarity.

mod consecutive;
mod error_rate;
mod rates;
mod remarks;
mod report;

pub use consecutive::ConsecErrorSpec;
pub use error_rate::{
    actuation_error_cost, actuation_error_cost_rs, reconstruction_error_rate, reconstruction_error_rate_rs,
};
pub use rates::{
    sampling_rate_change_aware, sampling_rate_rs, sampling_rate_semantics, sampling_rate_uniform,
};
pub use remarks::{MonotoneRegion, MonotoneRegions, RsVsSemantics, monotone_regions};
pub use report::{MetricReport, analyze};
