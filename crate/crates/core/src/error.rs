use thiserror::Error;

use crate::dsl::ParseDiagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed formula: {0}")]
    Malformed(String),

    #[error("modal operator in a context that requires a static formula: {0}")]
    NotStatic(String),

    #[error("unsupported in queries: {0}")]
    Unsupported(String),

    #[error("undeclared symbol: {0}")]
    Undeclared(String),

    #[error("invalid theory: {0}")]
    InvalidTheory(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("resource limit exceeded: {what} ({count} > cap {cap})")]
    Resource { what: String, count: u128, cap: u128 },

    #[error("{}", render_diagnostics(.0))]
    Parse(Vec<ParseDiagnostic>),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }

    pub(crate) fn resource(what: impl Into<String>, count: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::Resource { what: what.into(), count: count.into(), cap: cap.into() }
    }
}

fn render_diagnostics(diags: &[ParseDiagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}
