use std::io;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] dot11ah_core::Error),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("{0}")]
    Usage(String),

    #[error("cannot parse TOML: {0}")]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// 2 for anything the caller got wrong, 1 for runtime failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Model(_) | Error::Scenario(_) | Error::Usage(_) | Error::Toml(_) => 2,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
