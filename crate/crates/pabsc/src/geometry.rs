//! 3D coordinate bookkeeping for the room, waveguides, antennas, backscatter
//! device and eavesdropper.
//!
//! The coordinate origin sits at the center of the width side on the floor,
//! on the same side as the waveguide feed points: `x` runs along the room
//! length in `[0, L]`, `y` across the width in `[-D/2, D/2]`, `z` up from the
//! floor. Both waveguides are mounted at ceiling height `H` and both feed
//! points are at `x = 0`.

use crate::channel::RfConstants;
use crate::{Error, Result};

/// A point in room coordinates, meters.
pub type Point3 = [f64; 3];

/// Euclidean distance between two points.
pub fn distance(p: Point3, q: Point3) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    let dz = p[2] - q[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Rectangular-cuboid service room.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Room {
    /// Length along the waveguides, meters.
    pub length: f64,
    /// Width, meters.
    pub width: f64,
    /// Ceiling height, meters.
    pub height: f64,
}

impl Room {
    pub fn new(length: f64, width: f64, height: f64) -> Result<Self> {
        for (name, v) in [("length", length), ("width", width), ("height", height)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be a positive finite length, got {v}"),
                });
            }
        }
        Ok(Self {
            length,
            width,
            height,
        })
    }
}

/// Lateral offsets of the transmit and receive waveguides.
///
/// Both waveguides run the full room length at ceiling height; only their
/// `y` offsets differ. Feed points are fixed at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguidePair {
    /// Transmit waveguide lateral offset, meters.
    pub y_t: f64,
    /// Receive waveguide lateral offset, meters.
    pub y_r: f64,
}

/// Floor nodes and the current antenna placements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeLayout {
    /// Backscatter device, on the floor (`z = 0`).
    pub bd: Point3,
    /// Estimated eavesdropper location, on the floor (`z = 0`).
    pub eve_estimate: Point3,
    /// Transmit pinching antenna position along its waveguide, meters.
    pub tpa_x: f64,
    /// Receive pinching antenna position along its waveguide, meters.
    pub rpa_x: f64,
}

/// Immutable description of one deployment: room, waveguides, node
/// positions and RF constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub room: Room,
    pub waveguides: WaveguidePair,
    pub layout: NodeLayout,
    pub rf: RfConstants,
}

/// The five link distances used by every power expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkDistances {
    /// Feed point to TPA, in-waveguide, meters.
    pub d_ft_pt: f64,
    /// TPA to backscatter device, meters.
    pub d_pt_b: f64,
    /// Backscatter device to RPA, meters.
    pub d_b_pr: f64,
    /// RPA to feed point, in-waveguide, meters.
    pub d_pr_fr: f64,
    /// Backscatter device to estimated eavesdropper, on the floor, meters.
    pub d_b_e_est: f64,
}

impl Scenario {
    pub fn new(
        room: Room,
        waveguides: WaveguidePair,
        layout: NodeLayout,
        rf: RfConstants,
    ) -> Result<Self> {
        let half_w = room.width / 2.0;
        for (name, y) in [("y_wt", waveguides.y_t), ("y_wr", waveguides.y_r)] {
            if !(-half_w..=half_w).contains(&y) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("waveguide offset {y} outside [-{half_w}, {half_w}]"),
                });
            }
        }
        for (name, p) in [("bd", layout.bd), ("eve_estimate", layout.eve_estimate)] {
            if !(0.0..=room.length).contains(&p[0]) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("x = {} outside [0, {}]", p[0], room.length),
                });
            }
            if !(-half_w..=half_w).contains(&p[1]) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("y = {} outside [-{half_w}, {half_w}]", p[1]),
                });
            }
            if p[2] != 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("floor node must have z = 0, got {}", p[2]),
                });
            }
        }
        for (name, x) in [("tpa_x", layout.tpa_x), ("rpa_x", layout.rpa_x)] {
            if !(0.0..=room.length).contains(&x) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("antenna position {x} outside [0, {}]", room.length),
                });
            }
        }
        Ok(Self {
            room,
            waveguides,
            layout,
            rf,
        })
    }

    /// TPA coordinates for an arbitrary position along its waveguide.
    pub fn tpa_at(&self, tpa_x: f64) -> Point3 {
        [tpa_x, self.waveguides.y_t, self.room.height]
    }

    /// TPA coordinates at the configured position.
    pub fn tpa(&self) -> Point3 {
        self.tpa_at(self.layout.tpa_x)
    }

    /// RPA coordinates.
    pub fn rpa(&self) -> Point3 {
        [self.layout.rpa_x, self.waveguides.y_r, self.room.height]
    }

    /// Transmit-waveguide feed point.
    pub fn feed_t(&self) -> Point3 {
        [0.0, self.waveguides.y_t, self.room.height]
    }

    /// Receive-waveguide feed point.
    pub fn feed_r(&self) -> Point3 {
        [0.0, self.waveguides.y_r, self.room.height]
    }

    /// TPA-to-device distance for an arbitrary TPA position.
    pub fn d_pt_b_at(&self, tpa_x: f64) -> f64 {
        distance(self.tpa_at(tpa_x), self.layout.bd)
    }

    /// TPA-to-point distance (used for the warden's direct link).
    pub fn d_pt_to(&self, tpa_x: f64, p: Point3) -> f64 {
        distance(self.tpa_at(tpa_x), p)
    }

    /// Device-to-RPA distance (independent of the TPA position).
    pub fn d_b_pr(&self) -> f64 {
        distance(self.layout.bd, self.rpa())
    }
}

/// All five link distances at the scenario's configured antenna positions.
pub fn link_distances(scenario: &Scenario) -> LinkDistances {
    LinkDistances {
        d_ft_pt: distance(scenario.feed_t(), scenario.tpa()),
        d_pt_b: distance(scenario.tpa(), scenario.layout.bd),
        d_b_pr: scenario.d_b_pr(),
        d_pr_fr: distance(scenario.rpa(), scenario.feed_r()),
        d_b_e_est: distance(scenario.layout.bd, scenario.layout.eve_estimate),
    }
}
