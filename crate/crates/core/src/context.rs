use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{EvaluatedSolution, ProblemModel, SolutionStructure};
use crate::ranking::{self, Comparison};

/// Per-run search state shared by every operator: the model, the random
/// stream and the evaluation counter.
pub struct SearchContext<'m, R = ChaCha8Rng> {
    pub model: &'m ProblemModel,
    pub rng: R,
    evaluations: u64,
}

impl<'m> SearchContext<'m, ChaCha8Rng> {
    pub fn seeded(model: &'m ProblemModel, seed: u64) -> Self {
        Self::new(model, ChaCha8Rng::seed_from_u64(seed))
    }
}

impl<'m, R: Rng> SearchContext<'m, R> {
    pub fn new(model: &'m ProblemModel, rng: R) -> Self {
        Self {
            model,
            rng,
            evaluations: 0,
        }
    }

    /// Evaluates an operator-built structure.
    ///
    /// Operators only produce structures that satisfy the model dimensions,
    /// so the dimension check is skipped in release builds.
    pub fn evaluate(&mut self, structure: SolutionStructure) -> EvaluatedSolution {
        self.evaluations += 1;
        self.model.evaluate_unchecked(structure)
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn compare(&self, a: &EvaluatedSolution, b: &EvaluatedSolution) -> Comparison {
        ranking::compare(a, b, self.model.sense())
    }

    pub fn is_better(&self, a: &EvaluatedSolution, b: &EvaluatedSolution) -> bool {
        self.compare(a, b) == Comparison::Better
    }
}
