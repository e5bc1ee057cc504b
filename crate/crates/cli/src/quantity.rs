//! SI quantities written as strings with an explicit unit suffix,
//! e.g. `"8 um"`, `"1.2e8 V/m"`, `"0 rad"`.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub trait Dimension {
    const NAME: &'static str;
    /// Unit used when serializing.
    const CANONICAL: &'static str;
    /// Accepted suffixes and their SI scale.
    fn scale(unit: &str) -> Option<f64>;
}

fn metric(unit: &str, base: &str) -> Option<f64> {
    let prefix = unit.strip_suffix(base)?;
    Some(match prefix {
        "" => 1.0,
        "k" => 1e3,
        "M" => 1e6,
        "G" => 1e9,
        "c" => 1e-2,
        "m" => 1e-3,
        "u" | "µ" | "μ" => 1e-6,
        "n" => 1e-9,
        "p" => 1e-12,
        "f" => 1e-15,
        "a" => 1e-18,
        _ => return None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Length;
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Time;
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field;
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Angle;

impl Dimension for Length {
    const NAME: &'static str = "length";
    const CANONICAL: &'static str = "m";
    fn scale(unit: &str) -> Option<f64> {
        metric(unit, "m")
    }
}

impl Dimension for Time {
    const NAME: &'static str = "time";
    const CANONICAL: &'static str = "s";
    fn scale(unit: &str) -> Option<f64> {
        metric(unit, "s")
    }
}

impl Dimension for Field {
    const NAME: &'static str = "electric field";
    const CANONICAL: &'static str = "V/m";
    fn scale(unit: &str) -> Option<f64> {
        let (num, den) = unit.split_once('/')?;
        Some(metric(num, "V")? / metric(den, "m")?)
    }
}

impl Dimension for Angle {
    const NAME: &'static str = "angle";
    const CANONICAL: &'static str = "rad";
    fn scale(unit: &str) -> Option<f64> {
        match unit {
            "rad" => Some(1.0),
            "mrad" => Some(1e-3),
            "deg" => Some(std::f64::consts::PI / 180.0),
            "pi" => Some(std::f64::consts::PI),
            _ => None,
        }
    }
}

/// A value of dimension `D` stored in SI base units.
pub struct Quantity<D> {
    si: f64,
    _dim: PhantomData<D>,
}

impl<D> Clone for Quantity<D> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<D> Copy for Quantity<D> {}

impl<D> PartialEq for Quantity<D> {
    fn eq(&self, other: &Self) -> bool {
        self.si.to_bits() == other.si.to_bits() || self.si == other.si
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<D: Dimension> fmt::Display for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} {}", self.si, D::CANONICAL)
    }
}

impl<D: Dimension> Quantity<D> {
    pub fn si(si: f64) -> Self {
        Self {
            si,
            _dim: PhantomData,
        }
    }

    pub fn value(&self) -> f64 {
        self.si
    }

    pub fn parse(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let split = t.find(char::is_whitespace).ok_or_else(|| {
            format!(
                "{} `{s}` needs a unit suffix such as \"1 {}\"",
                D::NAME,
                D::CANONICAL
            )
        })?;
        let (num, unit) = t.split_at(split);
        let unit = unit.trim();
        let (num, pi) = match num.strip_suffix("pi") {
            Some(n) if unit == "rad" => (n, true),
            _ => (num, false),
        };
        let v: f64 = if num.is_empty() && pi {
            1.0
        } else {
            num.parse()
                .map_err(|_| format!("`{num}` is not a number in {} `{s}`", D::NAME))?
        };
        let scale =
            D::scale(unit).ok_or_else(|| format!("unknown {} unit `{unit}` in `{s}`", D::NAME))?;
        let si = v * scale * if pi { std::f64::consts::PI } else { 1.0 };
        if !si.is_finite() {
            return Err(format!("{} `{s}` is not finite", D::NAME));
        }
        Ok(Self::si(si))
    }
}

impl<D: Dimension> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct QuantityVisitor<D>(PhantomData<D>);

impl<D: Dimension> Visitor<'_> for QuantityVisitor<D> {
    type Value = Quantity<D>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(
            f,
            "a {} string with a unit, e.g. \"1 {}\"",
            D::NAME,
            D::CANONICAL
        )
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
        Quantity::parse(v).map_err(E::custom)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        d.deserialize_str(QuantityVisitor(PhantomData))
    }
}
