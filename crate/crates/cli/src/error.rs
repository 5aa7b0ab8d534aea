use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] coherence_core::Error),

    #[error("{context}: {source}")]
    At {
        context: String,
        #[source]
        source: coherence_core::Error,
    },

    #[error("{context}: {message}")]
    Nested { context: String, message: String, code: u8 },

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("invalid document: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn at(context: String, source: coherence_core::Error) -> CliError {
        CliError::At { context, source }
    }

    /// Prefixes the message with where it happened, keeping the exit code.
    pub fn within(self, context: String) -> CliError {
        let code = self.exit_code();
        CliError::Nested { context, message: self.to_string(), code }
    }

    /// 1 when the inputs are well formed but incoherent, 2 otherwise.
    pub fn exit_code(&self) -> u8 {
        use coherence_core::Error as E;
        match self {
            CliError::Core(E::IncoherentBase | E::IncoherentOperands { .. })
            | CliError::At { source: E::IncoherentBase | E::IncoherentOperands { .. }, .. } => 1,
            CliError::Nested { code, .. } => *code,
            _ => 2,
        }
    }
}
