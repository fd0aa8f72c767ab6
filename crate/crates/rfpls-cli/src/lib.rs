//! Implementation of the `rfpls` command-line tool: dataset simulation and
//! ingestion, model fitting, prediction, evaluation, and reproducible Monte
//! Carlo benchmarks.

pub mod bench;
pub mod commands;
pub mod manifest;

/// Exit codes of the binary.
pub mod exit_codes {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const DATA: i32 = 3;
    pub const ESTIMATION: i32 = 4;
}

/// Map a library error onto the documented exit codes.
pub fn exit_code_for(err: &rfpls::Error<f64>) -> i32 {
    use rfpls::Error;
    match err {
        Error::InvalidConfig(_) => exit_codes::USAGE,
        Error::Data { .. }
        | Error::Io(_)
        | Error::Serde(_)
        | Error::Incompatible(_)
        | Error::DimensionMismatch(_)
        | Error::OutOfDomain { .. } => exit_codes::DATA,
        Error::Separation { .. }
        | Error::SingularFit(_)
        | Error::DegenerateColumn { .. }
        | Error::Estimation(_)
        | Error::UndefinedMetric(_)
        | Error::Domain(_) => exit_codes::ESTIMATION,
    }
}
