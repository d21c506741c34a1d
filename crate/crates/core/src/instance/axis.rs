use super::generator::GeneratorParams;
use std::fmt;
use std::str::FromStr;

/// A generator parameter that a benchmark sweep varies while the others stay
/// at their defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    NumJobs,
    NumResources,
    ResourceStrength,
    ResourceFactor,
    NetworkComplexity,
    MaxDuration,
}

impl Axis {
    pub const ALL: [Axis; 6] = [
        Axis::NumJobs,
        Axis::NumResources,
        Axis::ResourceStrength,
        Axis::ResourceFactor,
        Axis::NetworkComplexity,
        Axis::MaxDuration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::NumJobs => "num_jobs",
            Axis::NumResources => "num_resources",
            Axis::ResourceStrength => "resource_strength",
            Axis::ResourceFactor => "resource_factor",
            Axis::NetworkComplexity => "network_complexity",
            Axis::MaxDuration => "max_duration",
        }
    }

    /// Values swept when none are given explicitly.
    pub fn default_values(self) -> &'static [f64] {
        match self {
            Axis::NumJobs => &[30.0, 60.0, 120.0, 240.0, 480.0],
            Axis::NumResources => &[1.0, 2.0, 4.0, 8.0, 16.0],
            Axis::ResourceStrength => &[0.0, 0.1, 0.25, 0.5, 1.0],
            Axis::ResourceFactor => &[0.25, 0.5, 0.75, 1.0],
            Axis::NetworkComplexity => &[0.0, 0.5, 1.0, 2.0, 4.0],
            Axis::MaxDuration => &[1.0, 5.0, 10.0, 20.0, 40.0],
        }
    }

    /// `base` with this axis set to `value`. Integer axes round to the
    /// nearest integer.
    pub fn apply(self, base: &GeneratorParams, value: f64) -> GeneratorParams {
        let mut p = base.clone();
        let as_count = || value.round().max(0.0) as usize;
        match self {
            Axis::NumJobs => p.num_jobs = as_count(),
            Axis::NumResources => p.num_resources = as_count(),
            Axis::ResourceStrength => p.resource_strength = value,
            Axis::ResourceFactor => p.resource_factor = value,
            Axis::NetworkComplexity => p.network_complexity = value,
            Axis::MaxDuration => p.max_duration = as_count() as u32,
        }
        p
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown axis {s:?}, expected one of num_jobs, num_resources, resource_strength, resource_factor, network_complexity, max_duration"))
    }
}
