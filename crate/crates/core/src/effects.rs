//! The five ALAAM effects and fixed-size vectors indexed by them.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const NUM_EFFECTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Effect {
    Density,
    Activity,
    Contagion,
    Binary,
    Continuous,
}

impl Effect {
    pub const ALL: [Effect; NUM_EFFECTS] = [
        Effect::Density,
        Effect::Activity,
        Effect::Contagion,
        Effect::Binary,
        Effect::Continuous,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Effect::Density => "Density",
            Effect::Activity => "Activity",
            Effect::Contagion => "Contagion",
            Effect::Binary => "Binary",
            Effect::Continuous => "Continuous",
        }
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Effect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Effect::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown effect name {s:?}")))
    }
}

macro_rules! effect_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
        pub struct $name(pub [f64; NUM_EFFECTS]);

        impl $name {
            pub const ZERO: $name = $name([0.0; NUM_EFFECTS]);

            pub fn new(density: f64, activity: f64, contagion: f64, binary: f64, continuous: f64) -> Self {
                $name([density, activity, contagion, binary, continuous])
            }

            pub fn density(&self) -> f64 { self.0[0] }
            pub fn activity(&self) -> f64 { self.0[1] }
            pub fn contagion(&self) -> f64 { self.0[2] }
            pub fn binary(&self) -> f64 { self.0[3] }
            pub fn continuous(&self) -> f64 { self.0[4] }

            pub fn as_array(&self) -> &[f64; NUM_EFFECTS] { &self.0 }

            pub fn iter(&self) -> impl Iterator<Item = (Effect, f64)> + '_ {
                Effect::ALL.into_iter().map(move |e| (e, self.0[e.index()]))
            }

            pub fn is_finite(&self) -> bool { self.0.iter().all(|v| v.is_finite()) }

            pub fn scale(self, k: f64) -> Self {
                $name(self.0.map(|v| v * k))
            }
        }

        impl Index<Effect> for $name {
            type Output = f64;
            fn index(&self, e: Effect) -> &f64 { &self.0[e.index()] }
        }

        impl IndexMut<Effect> for $name {
            fn index_mut(&mut self, e: Effect) -> &mut f64 { &mut self.0[e.index()] }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, o: $name) -> $name {
                let mut out = self;
                out += o;
                out
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, o: $name) {
                for k in 0..NUM_EFFECTS {
                    self.0[k] += o.0[k];
                }
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, o: $name) -> $name {
                let mut out = self;
                for k in 0..NUM_EFFECTS {
                    out.0[k] -= o.0[k];
                }
                out
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name { $name(self.0.map(|v| -v)) }
        }
    };
}

effect_vector!(
    /// Model parameters, one per effect.
    ParameterVector
);

effect_vector!(
    /// Sufficient statistics, one per effect. All but `continuous` are counts.
    StatisticsVector
);

impl ParameterVector {
    /// Unnormalized log-probability `theta . z`.
    pub fn dot(&self, z: &StatisticsVector) -> f64 {
        self.0.iter().zip(z.0.iter()).map(|(a, b)| a * b).sum()
    }
}
