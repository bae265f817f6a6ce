use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// The single tolerance policy threaded through every numerical decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig<T> {
    /// Relative equality of elements and residual checks.
    pub tau_eq: T,
    /// Singular-value cutoff for rank decisions.
    pub tau_rank: T,
    /// Eigenvalue clustering.
    pub tau_cluster: T,
    /// Structural zeros (block pattern, phase pivots).
    pub tau_struct: T,
}

impl<T: Real> ToleranceConfig<T> {
    pub fn new(tau_eq: T, tau_rank: T, tau_cluster: T, tau_struct: T) -> Result<Self> {
        let cfg = Self { tau_eq, tau_rank, tau_cluster, tau_struct };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let zero = T::zero();
        if !(self.tau_eq > zero && self.tau_rank > zero && self.tau_cluster > zero && self.tau_struct > zero) {
            return Err(Error::InvalidTolerance("all tolerances must be strictly positive".into()));
        }
        if !(self.tau_struct <= self.tau_eq && self.tau_eq <= self.tau_cluster) {
            return Err(Error::InvalidTolerance("require tau_struct <= tau_eq <= tau_cluster".into()));
        }
        Ok(())
    }

    /// Defaults suited to single precision.
    pub fn single_precision() -> Self {
        Self { tau_eq: lit(1e-4), tau_rank: lit(1e-4), tau_cluster: lit(1e-3), tau_struct: lit(1e-5) }
    }

    /// `tau_eq` scaled by `max(1, scale)`.
    pub fn eq_at(&self, scale: T) -> T {
        self.tau_eq * scale.max(T::one())
    }

    pub fn cluster_at(&self, scale: T) -> T {
        self.tau_cluster * scale.max(T::one())
    }

    pub fn struct_at(&self, scale: T) -> T {
        self.tau_struct * scale.max(T::one())
    }

    pub fn rank_at(&self, scale: T) -> T {
        self.tau_rank * scale.max(T::one())
    }
}

impl<T: Real> Default for ToleranceConfig<T> {
    fn default() -> Self {
        Self { tau_eq: lit(1e-9), tau_rank: lit(1e-8), tau_cluster: lit(1e-7), tau_struct: lit(1e-10) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_ordered() {
        let t = ToleranceConfig::<f64>::default();
        assert!(t.validate().is_ok());
        assert_eq!(t.tau_eq, 1e-9);
        assert_eq!(t.tau_rank, 1e-8);
        assert_eq!(t.tau_cluster, 1e-7);
        assert_eq!(t.tau_struct, 1e-10);
        assert!(ToleranceConfig::<f32>::single_precision().validate().is_ok());
    }

    #[test]
    fn rejects_misordered_or_nonpositive() {
        assert!(ToleranceConfig::new(1e-9, 1e-8, 1e-10, 1e-11).is_err());
        assert!(ToleranceConfig::new(0.0, 1e-8, 1e-7, 1e-10).is_err());
        assert!(ToleranceConfig::new(1e-9, 1e-8, 1e-7, 1e-8).is_err());
    }
}
