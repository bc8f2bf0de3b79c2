//! Shared helpers for the integration suites.
#![allow(dead_code)]

use solcurv::config::{Preset, RunConfig};
use solcurv::report::Pipeline;

pub fn pipeline(preset: Preset, epsilon: i8) -> Pipeline {
    let cfg = RunConfig::preset(preset, epsilon).expect("valid preset");
    Pipeline::new(cfg).expect("pipeline builds")
}

pub fn all_preset_pipelines() -> Vec<Pipeline> {
    let mut out = Vec::new();
    for preset in [Preset::Sol3A, Preset::Sol3B, Preset::Sol3Lc] {
        for eps in [1i8, -1] {
            out.push(pipeline(preset, eps));
        }
    }
    out
}

pub fn goldens_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../goldens")
        .canonicalize()
        .expect("goldens directory exists")
}
