//! Meldable priority queue with constant-time add-to-all.
//!
//! A two-level heap is a top binary heap holding the minimum of each of a list
//! of bottom binary heaps. Every heap carries an additive offset: an element
//! stored as `x` in heap `h` has actual value `x + offset(h)`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Debug, Clone)]
struct Bottom<P> {
    offset: i64,
    heap: BinaryHeap<Reverse<(i64, P)>>,
}

impl<P: Ord + Copy> Bottom<P> {
    fn min(&self) -> Option<(i64, P)> {
        self.heap.peek().map(|Reverse(e)| *e)
    }
}

/// Min-queue of `(value, payload)` pairs. Equal values are ordered by payload.
#[derive(Debug, Clone)]
pub struct TwoLevelHeap<P> {
    offset: i64,
    /// `(stored value relative to the top offset, payload, bottom slot)`.
    top: BinaryHeap<Reverse<(i64, P, usize)>>,
    bottoms: Vec<Option<Bottom<P>>>,
    live_bottoms: usize,
    len: usize,
}

impl<P: Ord + Copy> Default for TwoLevelHeap<P> {
    fn default() -> Self {
        Self {
            offset: 0,
            top: BinaryHeap::new(),
            bottoms: Vec::new(),
            live_bottoms: 0,
            len: 0,
        }
    }
}

impl<P: Ord + Copy> TwoLevelHeap<P> {
    pub fn new() -> Self {
        Self::default()
    }

    /// One bottom heap holding all `elements`, heapified in linear time.
    pub fn from_elements(elements: Vec<(i64, P)>) -> Self {
        let mut h = Self::new();
        if elements.is_empty() {
            return h;
        }
        h.len = elements.len();
        let heap: BinaryHeap<_> = elements.into_iter().map(Reverse).collect();
        h.push_bottom(Bottom { offset: 0, heap });
        h
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of non-empty bottom heaps.
    pub fn bottom_count(&self) -> usize {
        self.live_bottoms
    }

    pub fn peek_min(&self) -> Option<(i64, P)> {
        self.top
            .peek()
            .map(|Reverse((x, p, _))| (x + self.offset, *p))
    }

    /// Removes and returns the minimum element with its actual value.
    /// `None` on underflow.
    pub fn extract_min(&mut self) -> Option<(i64, P)> {
        let Reverse((x, payload, slot)) = self.top.pop()?;
        let bottom = self.bottoms[slot].as_mut().expect("top entry points at a live bottom");
        let Reverse((_, removed)) = bottom.heap.pop().expect("bottom heap holds its minimum");
        debug_assert!(removed == payload);
        match bottom.min() {
            Some((y, p)) => {
                let stored = y + bottom.offset;
                self.top.push(Reverse((stored, p, slot)));
            }
            None => {
                self.bottoms[slot] = None;
                self.live_bottoms -= 1;
            }
        }
        self.len -= 1;
        Some((x + self.offset, payload))
    }

    /// Adds `delta` to every element.
    pub fn add(&mut self, delta: i64) {
        self.offset += delta;
    }

    /// Moves every element of `other` into `self`. The bottom heaps of the
    /// heap with fewer bottoms are moved into the other one.
    pub fn meld(&mut self, mut other: Self) {
        if other.live_bottoms > self.live_bottoms {
            std::mem::swap(self, &mut other);
        }
        let shift = other.offset - self.offset;
        self.len += other.len;
        for mut bottom in other.bottoms.into_iter().flatten() {
            bottom.offset += shift;
            self.push_bottom(bottom);
        }
    }

    fn push_bottom(&mut self, bottom: Bottom<P>) {
        let (y, p) = bottom.min().expect("only non-empty bottoms are stored");
        let slot = self.bottoms.len();
        self.top.push(Reverse((y + bottom.offset, p, slot)));
        self.bottoms.push(Some(bottom));
        self.live_bottoms += 1;
    }

    /// All elements with their actual values, in no particular order.
    pub fn to_vec(&self) -> Vec<(i64, P)> {
        self.bottoms
            .iter()
            .flatten()
            .flat_map(|b| {
                b.heap
                    .iter()
                    .map(move |Reverse((x, p))| (x + b.offset + self.offset, *p))
            })
            .collect()
    }
}
