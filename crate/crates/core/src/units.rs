//! Physical constants and the natural unit system.
//!
//! Internally every quantity is expressed in electron natural units
//! (`hbar = m_e = c = 1`). Lengths are then multiples of the reduced
//! Compton wavelength, momenta multiples of `m_e c`, and a field value `E`
//! is stored as `e E` in units of `m_e^2 c^3 / hbar`.

use crate::Real;

/// Planck constant, J s (exact).
pub const PLANCK_SI: f64 = 6.626_070_15e-34;
/// Speed of light, m/s (exact).
pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;
/// Electron rest mass, kg.
pub const ELECTRON_MASS_SI: f64 = 9.109_383_701_5e-31;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE_SI: f64 = 1.602_176_634e-19;

/// CODATA 2018 constants in SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants<T> {
    pub hbar: T,
    pub c: T,
    pub m_e: T,
    /// Magnitude of the electron charge.
    pub e_charge: T,
    /// Compton wavelength `h / (m_e c)`.
    pub lambda_c: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn codata2018() -> Self {
        let h = PLANCK_SI;
        Self {
            hbar: T::lit(h / (2.0 * std::f64::consts::PI)),
            c: T::lit(SPEED_OF_LIGHT_SI),
            m_e: T::lit(ELECTRON_MASS_SI),
            e_charge: T::lit(ELEMENTARY_CHARGE_SI),
            lambda_c: T::lit(h / (ELECTRON_MASS_SI * SPEED_OF_LIGHT_SI)),
        }
    }

    /// Metres per natural length unit (`hbar / m_e c`).
    pub fn length_unit(&self) -> T {
        self.hbar / (self.m_e * self.c)
    }

    /// Seconds per natural time unit (`hbar / m_e c^2`).
    pub fn time_unit(&self) -> T {
        self.length_unit() / self.c
    }

    /// kg m/s per natural momentum unit.
    pub fn momentum_unit(&self) -> T {
        self.m_e * self.c
    }

    /// Joules per natural energy unit.
    pub fn energy_unit(&self) -> T {
        self.m_e * self.c * self.c
    }

    /// V/m per natural field unit (`m_e^2 c^3 / e hbar`).
    pub fn field_unit(&self) -> T {
        self.energy_unit() / (self.e_charge * self.length_unit())
    }

    pub fn length_from_si(&self, metres: T) -> T {
        metres / self.length_unit()
    }

    pub fn length_to_si(&self, l: T) -> T {
        l * self.length_unit()
    }

    pub fn time_from_si(&self, seconds: T) -> T {
        seconds / self.time_unit()
    }

    pub fn time_to_si(&self, t: T) -> T {
        t * self.time_unit()
    }

    pub fn momentum_to_si(&self, p: T) -> T {
        p * self.momentum_unit()
    }

    pub fn field_from_si(&self, volts_per_metre: T) -> T {
        volts_per_metre / self.field_unit()
    }

    pub fn field_to_si(&self, f: T) -> T {
        f * self.field_unit()
    }

    /// Natural energy to electron-volts.
    pub fn energy_to_ev(&self, e: T) -> T {
        e * self.energy_unit() / self.e_charge
    }
}

impl<T: Real> Default for PhysicalConstants<T> {
    fn default() -> Self {
        Self::codata2018()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compton_wavelength_consistent() {
        let k = PhysicalConstants::<f64>::codata2018();
        let lc = 2.0 * std::f64::consts::PI * k.hbar / (k.m_e * k.c);
        assert!((lc / k.lambda_c - 1.0).abs() < 1e-12);
        assert!((k.lambda_c - 2.426_310_238_67e-12).abs() < 1e-21);
        for v in [k.hbar, k.c, k.m_e, k.e_charge, k.lambda_c] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn unit_round_trips() {
        let k = PhysicalConstants::<f64>::codata2018();
        let l = 2.5e-6;
        assert!((k.length_to_si(k.length_from_si(l)) / l - 1.0).abs() < 1e-15);
        // Schwinger field
        assert!((k.field_unit() / 1.323_285e18 - 1.0).abs() < 1e-6);
        // rest energy
        assert!((k.energy_to_ev(1.0) / 510_998.95 - 1.0).abs() < 1e-8);
    }
}
