//! Bounded replay memory with oldest-first eviction and support for the
//! modified-replay draw (newest game guaranteed present).

use mxz_eval::ReplaySample;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::VecDeque;

#[derive(Debug)]
pub struct ReplayMemory {
    buf: VecDeque<ReplaySample>,
    capacity: usize,
    /// Total samples ever inserted.
    inserted: u64,
    /// How many of the newest samples belong to the most recent game.
    newest_len: usize,
}

impl ReplayMemory {
    pub fn new(capacity: usize) -> ReplayMemory {
        assert!(capacity > 0, "memory capacity μ must be positive");
        ReplayMemory { buf: VecDeque::new(), capacity, inserted: 0, newest_len: 0 }
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn inserted(&self) -> u64 {
        self.inserted
    }

    /// Append one game's samples, evicting oldest-first past capacity.
    pub fn push_game(&mut self, samples: Vec<ReplaySample>) {
        self.newest_len = samples.len().min(self.capacity);
        for s in samples {
            if self.buf.len() == self.capacity {
                self.buf.pop_front();
            }
            self.buf.push_back(s);
            self.inserted += 1;
        }
    }

    pub fn clear(&mut self) {
        self.buf.clear();
        self.newest_len = 0;
    }

    /// Number of samples a phase draws: ⌈σ·|memory|⌉.
    pub fn draw_size(&self, sampling_rate: f64) -> usize {
        (sampling_rate * self.buf.len() as f64).ceil() as usize
    }

    /// Uniform draw without replacement of ⌈σ·|memory|⌉ samples. With
    /// `include_newest`, the latest game's samples are guaranteed in the
    /// draw (all of them if they exceed the nominal size).
    pub fn draw<R: Rng>(
        &self,
        sampling_rate: f64,
        include_newest: bool,
        rng: &mut R,
    ) -> Vec<ReplaySample> {
        let n = self.draw_size(sampling_rate);
        let len = self.buf.len();
        if n >= len {
            return self.buf.iter().cloned().collect();
        }
        if include_newest && self.newest_len > 0 {
            let newest_start = len - self.newest_len.min(len);
            let mut out: Vec<ReplaySample> =
                self.buf.iter().skip(newest_start).cloned().collect();
            let mut rest: Vec<usize> = (0..newest_start).collect();
            rest.shuffle(rng);
            for &i in rest.iter().take(n.saturating_sub(out.len())) {
                out.push(self.buf[i].clone());
            }
            return out;
        }
        let mut idx: Vec<usize> = (0..len).collect();
        idx.shuffle(rng);
        idx.truncate(n);
        idx.into_iter().map(|i| self.buf[i].clone()).collect()
    }
}
