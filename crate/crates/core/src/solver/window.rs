use crate::params::FieldDrive;
use crate::Real;

/// Longitudinal profile of the interaction region.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Envelope<T> {
    /// Indicator of `[window_start, window_start + l_i]`.
    #[default]
    Sharp,
    /// Flat top with `1/2 (1 - cos)` ramps of length `edge` inside the
    /// interaction length.
    RaisedCosine { edge: T },
}

/// Part of the window with a flat profile (`ramp = None`) or a cosine ramp of
/// the given length anchored at the nearer window edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece<T> {
    pub z_lo: T,
    pub z_hi: T,
    pub ramp: Option<T>,
}

/// Drive restricted to its interaction window.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldWindow<T> {
    pub drive: FieldDrive<T>,
    pub envelope: Envelope<T>,
    /// Uniform scalar potential added everywhere (zero for physical runs).
    pub bias: T,
}

impl<T: Real> FieldWindow<T> {
    pub fn sharp(drive: FieldDrive<T>) -> Self {
        Self {
            drive,
            envelope: Envelope::Sharp,
            bias: T::zero(),
        }
    }

    pub fn with_envelope(drive: FieldDrive<T>, envelope: Envelope<T>) -> Self {
        Self {
            drive,
            envelope,
            bias: T::zero(),
        }
    }

    pub fn start(&self) -> T {
        self.drive.window_start
    }

    pub fn end(&self) -> T {
        self.drive.window_start + self.drive.l_i
    }

    /// Envelope value at lab position `z`, in `[0, 1]`.
    pub fn profile(&self, z: T) -> T {
        let (a, b) = (self.start(), self.end());
        if z < a || z > b {
            return T::zero();
        }
        match self.envelope {
            Envelope::Sharp => T::one(),
            Envelope::RaisedCosine { edge } => {
                let edge = edge.min(self.drive.l_i * T::lit(0.5));
                let d = (z - a).min(b - z);
                if d >= edge {
                    T::one()
                } else {
                    T::lit(0.5) * (T::one() - (T::PI() * d / edge).cos())
                }
            }
        }
    }

    /// Segments of the window on which the profile is flat or a single ramp.
    pub fn pieces(&self) -> Vec<Piece<T>> {
        let (a, b) = (self.start(), self.end());
        match self.envelope {
            Envelope::Sharp => vec![Piece {
                z_lo: a,
                z_hi: b,
                ramp: None,
            }],
            Envelope::RaisedCosine { edge } => {
                let e = edge.min(self.drive.l_i * T::lit(0.5));
                if !(e > T::zero()) {
                    return vec![Piece {
                        z_lo: a,
                        z_hi: b,
                        ramp: None,
                    }];
                }
                let mut out = vec![Piece {
                    z_lo: a,
                    z_hi: a + e,
                    ramp: Some(e),
                }];
                if b - e > a + e {
                    out.push(Piece {
                        z_lo: a + e,
                        z_hi: b - e,
                        ramp: None,
                    });
                }
                out.push(Piece {
                    z_lo: b - e,
                    z_hi: b,
                    ramp: Some(e),
                });
                out
            }
        }
    }

    /// Bound on the potential energy over space and time for an electron of speed `v0`.
    pub fn max_potential(&self, v0: T) -> T {
        let scale = v0 / self.drive.omega;
        self.drive
            .harmonics
            .iter()
            .fold(self.bias.abs(), |acc, h| acc + h.amplitude.abs() * scale)
    }
}
