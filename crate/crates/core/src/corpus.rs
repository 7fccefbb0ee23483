//! Sequence collections and their text formats.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::{Error, Result};

/// Text layout a collection was read from and is written back as.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// `>`-prefixed header lines followed by sequence lines.
    Fasta,
    /// One sequence per line, names are generated.
    Lines,
}

/// An ordered, non-empty list of named byte sequences.
///
/// Sequences are addressed by 0-based index `i`, which is the sequence with
/// id `i + 1`. Order is never changed after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    names: Vec<Vec<u8>>,
    sequences: Vec<Vec<u8>>,
    format: Format,
    trailing_newline: bool,
}

impl Collection {
    pub fn new(
        names: Vec<Vec<u8>>,
        sequences: Vec<Vec<u8>>,
        format: Format,
        trailing_newline: bool,
    ) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::EmptyCollection);
        }
        assert_eq!(names.len(), sequences.len(), "one name per sequence");
        Ok(Self {
            names,
            sequences,
            format,
            trailing_newline,
        })
    }

    /// Plain-text collection with generated names `seq1..seqm`.
    pub fn from_sequences(sequences: Vec<Vec<u8>>) -> Result<Self> {
        let names = generated_names(sequences.len());
        Self::new(names, sequences, Format::Lines, true)
    }

    /// Number of sequences, `m`.
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// Total byte length, `n`.
    pub fn total_len(&self) -> usize {
        self.sequences.iter().map(Vec::len).sum()
    }

    pub fn sequence(&self, i: usize) -> &[u8] {
        &self.sequences[i]
    }

    pub fn sequences(&self) -> &[Vec<u8>] {
        &self.sequences
    }

    pub fn name(&self, i: usize) -> &[u8] {
        &self.names[i]
    }

    pub fn names(&self) -> &[Vec<u8>] {
        &self.names
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn trailing_newline(&self) -> bool {
        self.trailing_newline
    }

    /// Writes the collection in its own format.
    ///
    /// FASTA records are written with the whole sequence on one line, so a
    /// FASTA input round-trips byte-exactly only if it was unwrapped.
    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        let m = self.len();
        for (i, seq) in self.sequences.iter().enumerate() {
            if self.format == Format::Fasta {
                out.write_all(b">")?;
                out.write_all(&self.names[i])?;
                out.write_all(b"\n")?;
            }
            out.write_all(seq)?;
            if i + 1 < m || self.trailing_newline {
                out.write_all(b"\n")?;
            }
        }
        out.flush()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.total_len() + 2 * self.len());
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }
}

pub(crate) fn generated_names(m: usize) -> Vec<Vec<u8>> {
    (1..=m).map(|i| format!("seq{i}").into_bytes()).collect()
}

pub fn load_fasta<P: AsRef<Path>>(path: P) -> Result<Collection> {
    parse_fasta(&fs::read(path)?)
}

pub fn load_lines<P: AsRef<Path>>(path: P) -> Result<Collection> {
    parse_lines(&fs::read(path)?)
}

pub fn load<P: AsRef<Path>>(path: P, format: Format) -> Result<Collection> {
    parse(&fs::read(path)?, format)
}

pub fn parse(data: &[u8], format: Format) -> Result<Collection> {
    match format {
        Format::Fasta => parse_fasta(data),
        Format::Lines => parse_lines(data),
    }
}

/// Parses FASTA text. Only `\n` line breaks are removed; every other byte of a
/// record (including `\r`) is kept.
pub fn parse_fasta(data: &[u8]) -> Result<Collection> {
    let trailing_newline = data.last() == Some(&b'\n');
    let mut names = Vec::new();
    let mut sequences: Vec<Vec<u8>> = Vec::new();

    for (lineno, line) in split_lines(data).enumerate() {
        if let Some(header) = line.strip_prefix(b">") {
            names.push(header.to_vec());
            sequences.push(Vec::new());
        } else if let Some(seq) = sequences.last_mut() {
            seq.extend_from_slice(line);
        } else if !line.is_empty() {
            return Err(Error::MalformedFasta { line: lineno + 1 });
        }
    }
    Collection::new(names, sequences, Format::Fasta, trailing_newline)
}

/// Parses newline-delimited text, one sequence per line. A final line without
/// a terminating newline still counts.
pub fn parse_lines(data: &[u8]) -> Result<Collection> {
    let sequences: Vec<Vec<u8>> = split_lines(data).map(<[u8]>::to_vec).collect();
    let trailing_newline = data.last() == Some(&b'\n');
    let names = generated_names(sequences.len());
    Collection::new(names, sequences, Format::Lines, trailing_newline)
}

fn split_lines(data: &[u8]) -> impl Iterator<Item = &[u8]> {
    let body = data.strip_suffix(b"\n").unwrap_or(data);
    let empty = data.is_empty();
    body.split(|&b| b == b'\n').filter(move |_| !empty)
}
