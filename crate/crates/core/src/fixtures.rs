//! Versioned pipeline configs and golden Lagrangians shipped in `data/`.

use crate::error::{Error, Result};
use crate::graded_forms::{parse_target, Target};
use crate::pipeline::PipelineConfig;

const PIPELINES: &[(&str, &str)] = &[
    ("lorentz", include_str!("../data/pipelines/lorentz.json")),
    ("b5", include_str!("../data/pipelines/b5.json")),
    ("c3", include_str!("../data/pipelines/c3.json")),
    ("c3_paired", include_str!("../data/pipelines/c3_paired.json")),
    ("c5", include_str!("../data/pipelines/c5.json")),
    ("c5_lovelock", include_str!("../data/pipelines/c5_lovelock.json")),
];

const GOLDENS: &[(&str, &str)] = &[
    ("b5_lagrangian", include_str!("../data/targets/b5_lagrangian.target")),
    ("c3_lagrangian", include_str!("../data/targets/c3_lagrangian.target")),
    ("c3_lagrangian_kh0", include_str!("../data/targets/c3_lagrangian_kh0.target")),
    ("c5_lagrangian", include_str!("../data/targets/c5_lagrangian.target")),
    ("c5_lagrangian_h0", include_str!("../data/targets/c5_lagrangian_h0.target")),
    ("c5_lagrangian_k0", include_str!("../data/targets/c5_lagrangian_k0.target")),
    ("c5_lagrangian_kh0", include_str!("../data/targets/c5_lagrangian_kh0.target")),
    ("c5_q_a2_a1", include_str!("../data/targets/c5_q_a2_a1.target")),
    ("c5_q_a_a2", include_str!("../data/targets/c5_q_a_a2.target")),
];

pub fn pipeline_names() -> impl Iterator<Item = &'static str> {
    PIPELINES.iter().map(|(n, _)| *n)
}

pub fn golden_names() -> impl Iterator<Item = &'static str> {
    GOLDENS.iter().map(|(n, _)| *n)
}

pub fn pipeline(name: &str) -> Result<PipelineConfig> {
    let (_, src) = PIPELINES.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    PipelineConfig::from_json(src)
}

/// Golden target by registry name, or by path to a `.target` file.
pub fn golden(name: &str) -> Result<Target> {
    match GOLDENS.iter().find(|(n, _)| *n == name) {
        Some((_, src)) => parse_target(src),
        None if name.ends_with(".target") => parse_target(&std::fs::read_to_string(name)?),
        None => Err(Error::UnknownFixture(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_parses() {
        for n in pipeline_names() {
            pipeline(n).unwrap();
        }
        for n in golden_names() {
            assert!(!golden(n).unwrap().terms.is_empty(), "{n}");
        }
        assert!(matches!(golden("nope"), Err(Error::UnknownFixture(_))));
    }
}
