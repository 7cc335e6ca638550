use thiserror::Error;

/// Invalid parameters or scenario configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid parameter `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("unknown guidance law `{0}` (expected one of: los, alos, vfalos, vfilos, tlos)")]
    UnknownLaw(String),
    #[error("unknown config key `{key}`; valid keys are:\n  {}", valid.join("\n  "))]
    UnknownKey { key: String, valid: Vec<String> },
    #[error("malformed override `{0}` (expected key=value)")]
    MalformedOverride(String),
    #[error("could not read config: {0}")]
    Io(String),
    #[error("could not parse config: {0}")]
    Parse(String),
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("position coincides with the centre of arc segment {segment}; azimuth is undefined")]
    DegenerateProjection { segment: usize },
    #[error("segment index {index} out of range for a path of {len} segments")]
    SegmentOutOfRange { index: usize, len: usize },
    #[error("ground speed is zero; course angle is undefined")]
    UndefinedCourse,
    #[error("turn radius {radius} m is below the vector-field minimum {r_min} m")]
    TurnTooTight { radius: f64, r_min: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("simulation diverged: `{quantity}` became non-finite at t = {time} s")]
    NonFinite { quantity: &'static str, time: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("log has {samples} samples; at least {required} are needed for a stability fit")]
    InsufficientData { samples: usize, required: usize },
}
