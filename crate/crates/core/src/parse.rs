//! Greedy relative Lempel-Ziv parsing of a target against a reference.

use crate::{Error, Result};

/// One unit of a parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phrase {
    /// `reference[start - 1 .. start - 1 + len]`; `start` is 1-based, `len >= 1`.
    Copy { start: usize, len: usize },
    /// A single byte that does not occur in the reference.
    Literal(u8),
}

impl Phrase {
    /// Number of target bytes this phrase decodes to.
    pub fn decoded_len(&self) -> usize {
        match *self {
            Phrase::Copy { len, .. } => len,
            Phrase::Literal(_) => 1,
        }
    }
}

/// Factorization of a target string against a reference.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Parsing {
    phrases: Vec<Phrase>,
    target_len: usize,
}

impl Parsing {
    pub fn from_phrases(phrases: Vec<Phrase>) -> Self {
        let target_len = phrases
            .iter()
            .fold(0usize, |n, p| n.saturating_add(p.decoded_len()));
        Self {
            phrases,
            target_len,
        }
    }

    pub fn phrases(&self) -> &[Phrase] {
        &self.phrases
    }

    /// Phrase count, `z`.
    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    /// True iff every copy phrase lies inside a reference of `reference_len` bytes.
    pub fn fits(&self, reference_len: usize) -> bool {
        self.phrases.iter().all(|p| match *p {
            Phrase::Copy { start, len } => {
                start >= 1 && len >= 1 && (start - 1).checked_add(len).is_some_and(|end| end <= reference_len)
            }
            Phrase::Literal(_) => true,
        })
    }
}

/// Longest-match index over one reference string.
///
/// Backed by a suffix array; a query narrows the suffix interval one target
/// byte at a time by binary search and switches to direct comparison once a
/// single suffix remains.
#[derive(Debug, Clone)]
pub struct Matcher<'r> {
    reference: &'r [u8],
    suffixes: Vec<usize>,
}

impl<'r> Matcher<'r> {
    pub fn new(reference: &'r [u8]) -> Self {
        Self {
            reference,
            suffixes: suffix_array(reference),
        }
    }

    pub fn reference(&self) -> &'r [u8] {
        self.reference
    }

    /// Longest prefix of `pattern` occurring in the reference, as
    /// `(0-based start, length)`. Length 0 means not even the first byte occurs.
    pub fn longest_match(&self, pattern: &[u8]) -> (usize, usize) {
        let sa = &self.suffixes;
        let text = self.reference;
        let (mut lo, mut hi) = (0, sa.len());
        let mut depth = 0;
        while depth < pattern.len() && lo < hi {
            if hi - lo == 1 {
                let pos = sa[lo];
                let ext = common_prefix(&text[pos + depth..], &pattern[depth..]);
                return (pos, depth + ext);
            }
            // Suffixes in [lo, hi) all start with pattern[..depth].
            let c = Some(pattern[depth]);
            let key = |&p: &usize| text.get(p + depth).copied();
            let range = &sa[lo..hi];
            let new_lo = lo + range.partition_point(|p| key(p) < c);
            let new_hi = lo + range.partition_point(|p| key(p) <= c);
            if new_lo == new_hi {
                break;
            }
            lo = new_lo;
            hi = new_hi;
            depth += 1;
        }
        if depth == 0 {
            (0, 0)
        } else {
            (sa[lo], depth)
        }
    }
}

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Suffix array by prefix doubling with counting sorts, O(n log n).
pub(crate) fn suffix_array(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<usize> = (0..n).collect();
    sa.sort_by_key(|&i| s[i]);
    let mut rank = vec![0usize; n];
    for w in 1..n {
        rank[sa[w]] = rank[sa[w - 1]] + usize::from(s[sa[w]] != s[sa[w - 1]]);
    }
    let mut classes = rank[sa[n - 1]] + 1;
    let mut tmp = vec![0usize; n];
    let mut count = vec![0usize; n.max(256)];
    let mut k = 1;
    while classes < n {
        // Order by second key: suffixes without a second half come first.
        let mut w = 0;
        for i in n.saturating_sub(k)..n {
            tmp[w] = i;
            w += 1;
        }
        for &p in &sa {
            if p >= k {
                tmp[w] = p - k;
                w += 1;
            }
        }
        // Stable counting sort by first key.
        count[..classes].iter_mut().for_each(|c| *c = 0);
        for &r in &rank {
            count[r] += 1;
        }
        let mut sum = 0;
        for c in &mut count[..classes] {
            let t = *c;
            *c = sum;
            sum += t;
        }
        for &p in &tmp {
            sa[count[rank[p]]] = p;
            count[rank[p]] += 1;
        }
        let second = |i: usize| if i + k < n { Some(rank[i + k]) } else { None };
        tmp[sa[0]] = 0;
        for w in 1..n {
            let (a, b) = (sa[w - 1], sa[w]);
            let differs = rank[a] != rank[b] || second(a) != second(b);
            tmp[b] = tmp[a] + usize::from(differs);
        }
        std::mem::swap(&mut rank, &mut tmp);
        classes = rank[sa[n - 1]] + 1;
        k *= 2;
    }
    sa
}

/// Greedy left-to-right parsing: the longest reference match at every step,
/// or a literal for a byte absent from the reference.
pub fn greedy_parse(matcher: &Matcher<'_>, target: &[u8]) -> Parsing {
    let mut phrases = Vec::new();
    let mut pos = 0;
    while pos < target.len() {
        let (start, len) = matcher.longest_match(&target[pos..]);
        if len == 0 {
            phrases.push(Phrase::Literal(target[pos]));
            pos += 1;
        } else {
            phrases.push(Phrase::Copy {
                start: start + 1,
                len,
            });
            pos += len;
        }
    }
    Parsing {
        phrases,
        target_len: target.len(),
    }
}

/// Phrase count of the greedy parsing, without materializing the phrases.
pub fn greedy_phrase_count(matcher: &Matcher<'_>, target: &[u8]) -> usize {
    let mut z = 0;
    let mut pos = 0;
    while pos < target.len() {
        let (_, len) = matcher.longest_match(&target[pos..]);
        pos += len.max(1);
        z += 1;
    }
    z
}

/// Reconstructs the target of `parsing` from its reference.
pub fn decode(reference: &[u8], parsing: &Parsing) -> Result<Vec<u8>> {
    let capacity = if parsing.fits(reference.len()) { parsing.target_len } else { 0 };
    let mut out = Vec::with_capacity(capacity);
    decode_into(reference, parsing, &mut out)?;
    Ok(out)
}

pub(crate) fn decode_into(reference: &[u8], parsing: &Parsing, out: &mut Vec<u8>) -> Result<()> {
    for (k, phrase) in parsing.phrases.iter().enumerate() {
        match *phrase {
            Phrase::Copy { start, len } => {
                let slice = start
                    .checked_sub(1)
                    .and_then(|s| reference.get(s..s.checked_add(len)?))
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| {
                        Error::CorruptParsing(format!(
                            "phrase {k} ({start},{len}) outside reference of length {}",
                            reference.len()
                        ))
                    })?;
                out.extend_from_slice(slice);
            }
            Phrase::Literal(b) => out.push(b),
        }
    }
    Ok(())
}
