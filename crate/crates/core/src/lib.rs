//! Hierarchical relative Lempel-Ziv (HRLZ) compression for collections of
//! similar byte strings.
//!
//! Every sequence is parsed greedily against its parent in a rooted tree over
//! the collection; only the root is stored verbatim. The tree is a minimum
//! weight spanning arborescence of a cost graph whose edge weights are phrase
//! counts, built either over all ordered pairs or over a min-hash sparsified
//! subset of them.
//!
//! ```
//! use hrlz::{codec, corpus::Collection};
//!
//! let c = Collection::from_sequences(vec![b"actccta".to_vec(), b"ctctcc".to_vec()]).unwrap();
//! let archive = codec::compress_optimal(&c, codec::RootCost::Ignore);
//! assert_eq!(codec::decompress(&archive).unwrap(), c);
//! ```

pub mod arborescence;
pub mod cli;
pub mod codec;
pub mod corpus;
pub mod costgraph;
mod error;
pub mod parse;

pub use error::{Error, Result};
