//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! Every export takes and returns JSON strings; errors come back as thrown
//! strings. The plain functions in [`demo`] hold the logic so they can be
//! tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Instance file for a seeded Heisenberg platform over `F_p`.
#[wasm_bindgen]
pub fn heisenberg(p: u32, seed: u32) -> Result<String, JsValue> {
    js(demo::heisenberg(p as u64, seed as u64))
}

/// Orbit points `ρ^t(1)` up to the first repeat (at most `limit` of them).
#[wasm_bindgen]
pub fn orbit(instance: &str, limit: u32) -> Result<String, JsValue> {
    js(demo::orbit(instance, limit as usize))
}

/// Runs a key exchange; `x` and `y` are decimal strings, empty to draw them.
#[wasm_bindgen]
pub fn exchange(instance: &str, x: &str, y: &str, seed: u32) -> Result<String, JsValue> {
    js(demo::exchange(instance, x, y, seed as u64))
}

#[wasm_bindgen]
pub fn attack(transcript: &str, solver: &str) -> Result<String, JsValue> {
    js(demo::attack(transcript, solver))
}

#[wasm_bindgen]
pub fn solve(instance: &str, solver: &str) -> Result<String, JsValue> {
    js(demo::solve(instance, solver))
}
