//! Randomized law checks shared by the crate's tests and the acceptance suite.
#![allow(dead_code)]

pub mod brackets;
pub mod dsl;
pub mod geometric;
pub mod laplacian;
pub mod pencil;

use std::sync::Arc;

use superdelta::Chart;

/// The charts every suite runs on.
pub fn charts() -> Vec<Arc<Chart>> {
    vec![
        Chart::standard(1, 1),
        Chart::standard(1, 2),
        Chart::standard(2, 2),
        Chart::standard(0, 2),
        Chart::standard(0, 3),
    ]
}

pub fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn lift<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}
