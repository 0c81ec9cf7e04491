//! Deterministic work accounting. Searches charge elementary steps against a
//! budget instead of consulting a clock, so identical (inputs, seed, budget)
//! runs do identical work on every machine.

/// A step counter with a hard limit. One step is one unit of search work:
/// a candidate evaluated, a local symbol computed, a descent iteration.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    /// Charges `n` steps. Returns false once the budget is exhausted
    /// (the charge is still recorded, saturating).
    #[must_use]
    pub fn charge(&mut self, n: u64) -> bool {
        self.used = self.used.saturating_add(n);
        self.used <= self.limit
    }

    pub fn exhausted(&self) -> bool {
        self.used > self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Remaining steps (zero when exhausted).
    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used)
    }

    /// Splits off a sub-budget of at most `n` steps; work charged to the
    /// child is charged back to this budget by `absorb`.
    pub fn child(&self, n: u64) -> Budget {
        Budget::new(n.min(self.remaining()))
    }

    pub fn absorb(&mut self, child: &Budget) {
        self.used = self.used.saturating_add(child.used());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charges_and_exhausts() {
        let mut b = Budget::new(10);
        assert!(b.charge(4));
        assert!(b.charge(6));
        assert!(!b.charge(1));
        assert!(b.exhausted());
        assert_eq!(b.used(), 11);
        assert_eq!(b.remaining(), 0);
    }

    #[test]
    fn child_absorb() {
        let mut b = Budget::new(100);
        assert!(b.charge(30));
        let mut c = b.child(1000);
        assert_eq!(c.limit(), 70);
        assert!(c.charge(50));
        b.absorb(&c);
        assert_eq!(b.used(), 80);
    }
}
