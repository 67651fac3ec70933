use core::fmt;

use crate::error::ConfigError;

/// Supersymmetry sector label (τ₃, σ₃).
///
/// τ₃ = +1 is the sector annihilated by Q (upper components), τ₃ = −1 the
/// one annihilated by Q†. σ₃ is the spin projection along z; on the axial
/// line it is a spectator and conventionally +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sector {
    tau3: i8,
    sigma3: i8,
}

impl Sector {
    pub const UP: Sector = Sector { tau3: 1, sigma3: 1 };
    pub const DOWN: Sector = Sector { tau3: -1, sigma3: 1 };

    pub fn new(tau3: i8, sigma3: i8) -> Result<Self, ConfigError> {
        if tau3.abs() != 1 {
            return Err(ConfigError::InvalidSector { label: "tau3", value: tau3 });
        }
        if sigma3.abs() != 1 {
            return Err(ConfigError::InvalidSector { label: "sigma3", value: sigma3 });
        }
        Ok(Sector { tau3, sigma3 })
    }

    pub fn tau3(self) -> i8 {
        self.tau3
    }

    pub fn sigma3(self) -> i8 {
        self.sigma3
    }

    pub fn tau(self) -> f64 {
        f64::from(self.tau3)
    }

    pub fn sigma(self) -> f64 {
        f64::from(self.sigma3)
    }

    /// The sector and angular quantum number that the supercharge connects
    /// this block to: (τ₃, σ₃, m) ↔ (−τ₃, −σ₃, m + σ₃).
    ///
    /// On the axial line only τ₃ flips; pass `m = 0` and ignore the
    /// returned angular number there.
    pub fn superpartner(self, m: i32) -> (Sector, i32) {
        (
            Sector { tau3: -self.tau3, sigma3: -self.sigma3 },
            m + i32::from(self.sigma3),
        )
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(tau3={:+}, sigma3={:+})", self.tau3, self.sigma3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superpartner_is_an_involution() {
        for &(t, s) in &[(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let sec = Sector::new(t, s).unwrap();
            for m in -3..=3 {
                let (p, mp) = sec.superpartner(m);
                assert_eq!(p.superpartner(mp), (sec, m));
            }
        }
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(Sector::new(0, 1).is_err());
        assert!(Sector::new(1, 2).is_err());
    }
}
