use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty collection")]
    EmptyCollection,

    #[error("malformed FASTA: line {line} is not a header")]
    MalformedFasta { line: usize },

    #[error("corrupt parsing: {0}")]
    CorruptParsing(String),

    #[error("graph not strongly connected")]
    NotStronglyConnected,

    #[error("not an arborescence: {0}")]
    NotAnArborescence(String),

    #[error("reference {reference} out of range for {m} sequences")]
    ReferenceOutOfRange { reference: usize, m: usize },

    #[error("corrupt archive: {0}")]
    CorruptArchive(String),

    #[error("corrupt archive file: {0}")]
    CorruptArchiveFile(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
