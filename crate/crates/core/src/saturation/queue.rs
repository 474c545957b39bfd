//! Passive clause queue with a fairness interleave.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::calculus::ClauseId;

/// Ordering key; smaller is selected first.
pub type Priority = (u8, u8, u64, ClauseId);

/// Pops by priority, except that every `oldest_every`-th pop takes the
/// oldest clause. Entries are removed lazily: `pop` skips ids the caller
/// reports as gone.
pub struct PassiveQueue {
    by_priority: BinaryHeap<Reverse<Priority>>,
    by_age: BinaryHeap<Reverse<ClauseId>>,
    oldest_every: usize,
    picks: usize,
}

impl PassiveQueue {
    pub fn new(oldest_every: usize) -> Self {
        PassiveQueue {
            by_priority: BinaryHeap::new(),
            by_age: BinaryHeap::new(),
            oldest_every,
            picks: 0,
        }
    }

    pub fn push(&mut self, p: Priority) {
        self.by_age.push(Reverse(p.3));
        self.by_priority.push(Reverse(p));
    }

    pub fn pop(&mut self, live: impl Fn(ClauseId) -> bool) -> Option<ClauseId> {
        self.picks += 1;
        let by_age = self.oldest_every > 0 && self.picks % self.oldest_every == 0;
        if by_age {
            while let Some(Reverse(id)) = self.by_age.pop() {
                if live(id) {
                    return Some(id);
                }
            }
        } else {
            while let Some(Reverse(p)) = self.by_priority.pop() {
                if live(p.3) {
                    return Some(p.3);
                }
            }
        }
        // the other heap may still hold live entries
        while let Some(Reverse(p)) = self.by_priority.pop() {
            if live(p.3) {
                return Some(p.3);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleaves_oldest() {
        let mut q = PassiveQueue::new(3);
        // id 0 is heavy, the rest light
        q.push((0, 0, 100, 0));
        for id in 1..6 {
            q.push((0, 0, 1, id));
        }
        let mut taken = std::collections::HashSet::new();
        let mut order = Vec::new();
        while let Some(id) = q.pop(|id| !taken.contains(&id)) {
            taken.insert(id);
            order.push(id);
        }
        assert_eq!(order, vec![1, 2, 0, 3, 4, 5]);
    }
}
