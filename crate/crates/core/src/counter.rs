/// Number of fitness evaluations consumed so far. Only ever increases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvaluationCounter {
    count: u64,
}

impl EvaluationCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn tick(&mut self) {
        self.count += 1;
    }

    #[inline]
    pub fn count(&self) -> u64 {
        self.count
    }
}
