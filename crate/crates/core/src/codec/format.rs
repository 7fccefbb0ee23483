//! Binary archive layout.
//!
//! ```text
//! "HRLZ" version:u8=1 mode:u8 (0 rlz, 1 hrlz) flags:u8 (bit0 trailing newline, bit1 names)
//! varint m, varint root
//! hrlz only: parent of every non-root node, ascending node id
//! names (if flagged): varint length + bytes, per node
//! varint |root sequence| + bytes
//! per non-root node in BFS order: varint z, then z phrases
//!     copy    = varint (0-based start + 1), varint length
//!     literal = varint 0, one raw byte
//! ```
//!
//! All varints are unsigned LEB128; ids and positions on the wire are 0-based.

use super::{Archive, Mode};
use crate::arborescence::{bfs_order, Arborescence};
use crate::parse::{Parsing, Phrase};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"HRLZ";
pub const VERSION: u8 = 1;

const FLAG_TRAILING_NEWLINE: u8 = 1;
const FLAG_NAMES: u8 = 1 << 1;

pub fn write_varint(out: &mut Vec<u8>, mut value: u64) {
    while value >= 0x80 {
        out.push((value as u8) | 0x80);
        value >>= 7;
    }
    out.push(value as u8);
}

pub fn serialize(archive: &Archive) -> Vec<u8> {
    let m = archive.parent.len();
    let mut out = Vec::with_capacity(archive.root_sequence.len() + 16 * m + 16);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(match archive.mode {
        Mode::Rlz => 0,
        Mode::Hrlz => 1,
    });
    let mut flags = 0;
    if archive.trailing_newline {
        flags |= FLAG_TRAILING_NEWLINE;
    }
    if archive.names.is_some() {
        flags |= FLAG_NAMES;
    }
    out.push(flags);

    write_varint(&mut out, m as u64);
    write_varint(&mut out, archive.root as u64);
    if archive.mode == Mode::Hrlz {
        for p in archive.parent.iter().flatten() {
            write_varint(&mut out, *p as u64);
        }
    }
    if let Some(names) = &archive.names {
        for name in names {
            write_varint(&mut out, name.len() as u64);
            out.extend_from_slice(name);
        }
    }
    write_varint(&mut out, archive.root_sequence.len() as u64);
    out.extend_from_slice(&archive.root_sequence);

    for v in archive.decode_order().into_iter().skip(1) {
        let parsing = &archive.parsings[v];
        write_varint(&mut out, parsing.len() as u64);
        for phrase in parsing.phrases() {
            match *phrase {
                Phrase::Copy { start, len } => {
                    write_varint(&mut out, start as u64);
                    write_varint(&mut out, len as u64);
                }
                Phrase::Literal(b) => {
                    write_varint(&mut out, 0);
                    out.push(b);
                }
            }
        }
    }
    out
}

fn corrupt<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::CorruptArchiveFile(msg.into()))
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    fn byte(&mut self) -> Result<u8> {
        let b = *self
            .data
            .get(self.pos)
            .ok_or_else(|| Error::CorruptArchiveFile("truncated".into()))?;
        self.pos += 1;
        Ok(b)
    }

    fn bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        if n > self.remaining() {
            return corrupt("truncated");
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn varint(&mut self) -> Result<u64> {
        let mut value = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.byte()?;
            let bits = u64::from(b & 0x7f);
            if shift == 63 && bits > 1 {
                return corrupt("varint overflow");
            }
            value |= bits << shift;
            if b & 0x80 == 0 {
                return Ok(value);
            }
        }
        corrupt("varint overflow")
    }

    fn usize(&mut self) -> Result<usize> {
        let v = self.varint()?;
        usize::try_from(v).or_else(|_| corrupt("value exceeds address space"))
    }

    /// A count of items, each at least `min_size` bytes long on the wire.
    fn count(&mut self, min_size: usize) -> Result<usize> {
        let n = self.usize()?;
        if n.saturating_mul(min_size) > self.remaining() {
            return corrupt("truncated");
        }
        Ok(n)
    }
}

pub fn deserialize(data: &[u8]) -> Result<Archive> {
    let mut r = Reader { data, pos: 0 };
    if r.bytes(4).ok() != Some(&MAGIC[..]) {
        return corrupt("bad magic");
    }
    let version = r.byte()?;
    if version != VERSION {
        return corrupt(format!("unsupported version {version}"));
    }
    let mode = match r.byte()? {
        0 => Mode::Rlz,
        1 => Mode::Hrlz,
        other => return corrupt(format!("unknown mode {other}")),
    };
    let flags = r.byte()?;
    if flags & !(FLAG_TRAILING_NEWLINE | FLAG_NAMES) != 0 {
        return corrupt(format!("unknown flags {flags:#04x}"));
    }

    let m = r.count(1)?;
    if m == 0 {
        return corrupt("no sequences");
    }
    let root = r.usize()?;
    if root >= m {
        return corrupt(format!("root {root} out of range"));
    }
    let tree = match mode {
        Mode::Rlz => Arborescence::star(m, root),
        Mode::Hrlz => {
            let mut parent = vec![None; m];
            for (v, slot) in parent.iter_mut().enumerate() {
                if v != root {
                    let p = r.usize()?;
                    if p >= m {
                        return corrupt(format!("parent {p} of node {v} out of range"));
                    }
                    *slot = Some(p);
                }
            }
            Arborescence { root, parent, weight: 0 }
        }
    };
    if tree.validate().is_err() {
        return corrupt("parent map is not a tree");
    }

    let names = if flags & FLAG_NAMES != 0 {
        let mut names = Vec::with_capacity(m);
        for _ in 0..m {
            let len = r.usize()?;
            names.push(r.bytes(len)?.to_vec());
        }
        Some(names)
    } else {
        None
    };
    let root_len = r.usize()?;
    let root_sequence = r.bytes(root_len)?.to_vec();

    let mut parsings = vec![Parsing::default(); m];
    for v in bfs_order(root, &tree.children()).into_iter().skip(1) {
        let z = r.count(2)?;
        let mut phrases = Vec::with_capacity(z);
        for _ in 0..z {
            let start = r.usize()?;
            if start == 0 {
                phrases.push(Phrase::Literal(r.byte()?));
            } else {
                let len = r.usize()?;
                if len == 0 {
                    return corrupt("empty copy phrase");
                }
                phrases.push(Phrase::Copy { start, len });
            }
        }
        parsings[v] = Parsing::from_phrases(phrases);
    }
    if r.remaining() != 0 {
        return corrupt("trailing bytes");
    }

    Ok(Archive {
        mode,
        root,
        parent: tree.parent,
        names,
        trailing_newline: flags & FLAG_TRAILING_NEWLINE != 0,
        root_sequence,
        parsings,
    })
}
