use flathist_core::{Distribution, MixtureSpec, SampleSource};

/// An explicitly known distribution to learn: learners sample from it and
/// the harness scores hypotheses against it exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Single(Distribution),
    Mixture(MixtureSpec),
}

impl Target {
    /// The target's pmf.
    pub fn exact(&self) -> &Distribution {
        match self {
            Target::Single(p) => p,
            Target::Mixture(m) => m.to_distribution(),
        }
    }

    pub fn n(&self) -> usize {
        self.exact().n()
    }
}

impl SampleSource for Target {
    fn domain_size(&self) -> usize {
        self.n()
    }

    fn draw_counts(&self, m: u64, seed: u64) -> Vec<u64> {
        match self {
            Target::Single(p) => p.draw_counts(m, seed),
            Target::Mixture(mix) => mix.draw_counts(m, seed),
        }
    }
}
