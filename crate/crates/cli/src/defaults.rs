//! Every default used by the subcommands.
//!
//! | knob          | default        | used by                        |
//! |---------------|----------------|--------------------------------|
//! | `--out`       | `weylkit-out`  | all (or `$WEYLKIT_OUT`)        |
//! | `--xmax`      | `2`            | direct, inverse                |
//! | `--nx`        | `21`           | direct, inverse                |
//! | `--z`         | `0+1i`         | direct, fundamental, interpolate (series needs `Im z > 1/2 + ε`, so interpolate uses `0+3i`) |
//! | `--h`         | `1/256`        | recover                        |
//! | `--l`         | `1`            | recover, fundamental           |
//! | `--eta`       | `1`            | recover                        |
//! | `--a`         | `200`, capped by the sample range | recover     |
//! | `--mu`        | `1`            | recover                        |
//! | `--tolerance` | `1e-3`         | recover (truncation check)     |
//! | `--eps`       | `0.1`          | interpolate                    |
//! | `--n`         | `60`           | interpolate                    |
//!
//! The values below are the single source for both clap and the manifest.

pub const OUT_DIR: &str = "weylkit-out";
pub const OUT_ENV: &str = "WEYLKIT_OUT";

pub const XMAX: f64 = 2.0;
pub const NX: usize = 21;
pub const Z: &str = "0+1i";
pub const Z_INTERPOLATE: &str = "0+3i";

pub const H: f64 = 1.0 / 256.0;
pub const L: f64 = 1.0;
pub const ETA: f64 = 1.0;
pub const A: f64 = 200.0;
pub const MU: f64 = 1.0;
pub const TOLERANCE: f64 = 1e-3;

pub const EPS: &str = "0.1";
pub const N: usize = 60;

/// Name of the fixture index read by `check`.
pub const CHECK_INDEX: &str = "check.json";
