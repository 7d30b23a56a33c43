use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// A constant rate on the half-open box `[t0, t1) x [x0, x1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateBox {
    /// `[t0, t1)` in seconds.
    pub time: [f64; 2],
    /// `[x0, x1)` in metres.
    pub space: [f64; 2],
    /// Rate in m/s.
    pub rate: f64,
}

impl RateBox {
    pub fn new(time: [f64; 2], space: [f64; 2], rate: f64) -> Self {
        Self { time, space, rate }
    }

    pub fn contains(&self, t: f64, x: f64) -> bool {
        self.time[0] <= t && t < self.time[1] && self.space[0] <= x && x < self.space[1]
    }

    fn overlaps(&self, other: &RateBox) -> bool {
        let open = |a: [f64; 2], b: [f64; 2]| a[0].max(b[0]) < a[1].min(b[1]);
        open(self.time, other.time) && open(self.space, other.space)
    }
}

/// Rain `R` and infiltration `I` as piecewise-constant boxes, zero elsewhere.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceField {
    #[serde(default)]
    pub rain: Vec<RateBox>,
    #[serde(default)]
    pub infiltration: Vec<RateBox>,
}

/// Per-cell rates at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceRates {
    pub rain: Vec<f64>,
    pub infiltration: Vec<f64>,
    /// `rain - infiltration`.
    pub net: Vec<f64>,
}

impl SourceRates {
    pub fn zero(n: usize) -> Self {
        Self {
            rain: vec![0.0; n],
            infiltration: vec![0.0; n],
            net: vec![0.0; n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rain
            .iter()
            .chain(&self.infiltration)
            .all(|&v| v == 0.0)
    }
}

impl SourceField {
    pub fn uniform_rain(time: [f64; 2], space: [f64; 2], rate: f64) -> Self {
        Self {
            rain: vec![RateBox::new(time, space, rate)],
            infiltration: Vec::new(),
        }
    }

    /// Checks rates, box geometry against `[0, final_time] x [0, length]`, and overlaps.
    pub fn validate(&self, final_time: f64, length: f64) -> Result<()> {
        for (field, boxes) in [("rain", &self.rain), ("infiltration", &self.infiltration)] {
            for (k, b) in boxes.iter().enumerate() {
                let key = || format!("sources.{field}[{k}]");
                let finite = b
                    .time
                    .iter()
                    .chain(&b.space)
                    .chain([&b.rate])
                    .all(|v| v.is_finite());
                if !finite {
                    return Err(Error::invalid(key(), "non-finite entry"));
                }
                if !(b.time[0] < b.time[1]) || !(b.space[0] < b.space[1]) {
                    return Err(Error::invalid(key(), "empty or reversed interval"));
                }
                if b.time[0] < 0.0 || b.time[1] > final_time {
                    return Err(Error::invalid(
                        key(),
                        format!("time interval {:?} leaves [0, {final_time}]", b.time),
                    ));
                }
                if b.space[0] < 0.0 || b.space[1] > length {
                    return Err(Error::invalid(
                        key(),
                        format!("space interval {:?} leaves [0, {length}]", b.space),
                    ));
                }
                if field == "rain" && b.rate < 0.0 {
                    return Err(Error::invalid(
                        key(),
                        format!("rain rate must be >= 0, got {}", b.rate),
                    ));
                }
            }
            for i in 0..boxes.len() {
                for j in i + 1..boxes.len() {
                    if boxes[i].overlaps(&boxes[j]) {
                        return Err(Error::OverlappingBoxes {
                            field,
                            first: i,
                            second: j,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn boxes(&self) -> impl Iterator<Item = &RateBox> {
        self.rain.iter().chain(&self.infiltration)
    }

    /// Earliest box edge strictly after `t`, if any.
    pub fn next_breakpoint(&self, t: f64) -> Option<f64> {
        self.boxes()
            .flat_map(|b| b.time)
            .filter(|&s| s > t)
            .min_by(f64::total_cmp)
    }

    /// Whether some box that adds water (rain, or exfiltration) is active at or after `t`.
    pub fn adds_water_after(&self, t: f64) -> bool {
        self.rain.iter().any(|b| b.rate > 0.0 && b.time[1] > t)
            || self
                .infiltration
                .iter()
                .any(|b| b.rate < 0.0 && b.time[1] > t)
    }

    /// Largest positive net rate over any box active at or after `t`.
    pub fn max_gain_after(&self, t: f64) -> f64 {
        let rain: f64 = self
            .rain
            .iter()
            .filter(|b| b.time[1] > t)
            .map(|b| b.rate)
            .fold(0.0, f64::max);
        let exfil: f64 = self
            .infiltration
            .iter()
            .filter(|b| b.time[1] > t)
            .map(|b| -b.rate)
            .fold(0.0, f64::max);
        rain + exfil
    }
}

fn accumulate(boxes: &[RateBox], t: f64, grid: &Grid) -> Vec<f64> {
    let mut out = vec![0.0; grid.cells()];
    for b in boxes.iter().filter(|b| b.time[0] <= t && t < b.time[1]) {
        for (v, &x) in out.iter_mut().zip(grid.centers()) {
            if b.space[0] <= x && x < b.space[1] {
                *v = b.rate;
            }
        }
    }
    out
}

/// Samples `R`, `I` and `S = R - I` at cell centres at time `t`.
pub fn evaluate_sources(sf: &SourceField, t: f64, grid: &Grid) -> SourceRates {
    let rain = accumulate(&sf.rain, t, grid);
    let infiltration = accumulate(&sf.infiltration, t, grid);
    let net = rain.iter().zip(&infiltration).map(|(r, i)| r - i).collect();
    SourceRates {
        rain,
        infiltration,
        net,
    }
}
