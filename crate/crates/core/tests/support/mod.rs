#![allow(dead_code)]

pub mod engines;
pub mod fixture_gen;
pub mod mock_http;
pub mod sandbox;

use std::path::PathBuf;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}
