//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes a scenario as JSON text and returns text, so the page
//! needs no glue beyond the generated `pkg/` module.

use nudicke::encoders::EncodingKind;
use nudicke::scenario::{circuit_at_step, compare_scenario, format_comparison, run_scenario, ScenarioConfig};
use wasm_bindgen::prelude::*;

pub const BUNDLED: [(&str, &str); 3] = [
    ("fig3", include_str!("../../../scenarios/fig3.json")),
    ("fig4", include_str!("../../../scenarios/fig4.json")),
    ("no_coupling", include_str!("../../../scenarios/no_coupling.json")),
];

fn parse(config: &str) -> Result<ScenarioConfig, String> {
    let cfg = ScenarioConfig::from_json(config).map_err(|e| e.to_string())?;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Survival report of a scenario as JSON: `times`, then per encoding the
/// `circuit`, `exact` and `trotter` series indexed `[step][mode]`.
pub fn simulate(config: &str) -> Result<String, String> {
    let report = run_scenario(&parse(config)?).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Same report as CSV.
pub fn simulate_csv(config: &str) -> Result<String, String> {
    Ok(run_scenario(&parse(config)?).map_err(|e| e.to_string())?.to_csv())
}

/// Resource table of all encodings in the scenario.
pub fn compare(config: &str) -> Result<String, String> {
    let rows = compare_scenario(&parse(config)?).map_err(|e| e.to_string())?;
    Ok(format_comparison(&rows))
}

/// OpenQASM 3 text of the circuit reaching time point `step`.
pub fn qasm(config: &str, encoding: &str, step: usize) -> Result<String, String> {
    let cfg = parse(config)?;
    let kind = EncodingKind::ALL
        .into_iter()
        .find(|k| k.name() == encoding)
        .ok_or_else(|| format!("unknown encoding `{encoding}`"))?;
    if step > cfg.n_steps {
        return Err(format!("step {step} is past n_steps = {}", cfg.n_steps));
    }
    let circ = circuit_at_step(&cfg, kind, step).map_err(|e| e.to_string())?;
    Ok(nudicke::circuit::export_qasm(&circ))
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = bundledScenarios)]
pub fn bundled_scenarios() -> String {
    let map: serde_json::Map<String, serde_json::Value> = BUNDLED
        .iter()
        .map(|&(name, text)| (name.to_string(), serde_json::Value::String(text.to_string())))
        .collect();
    serde_json::Value::Object(map).to_string()
}

#[wasm_bindgen(js_name = runScenario)]
pub fn run_scenario_js(config: &str) -> Result<String, JsError> {
    js(simulate(config))
}

#[wasm_bindgen(js_name = runScenarioCsv)]
pub fn run_scenario_csv_js(config: &str) -> Result<String, JsError> {
    js(simulate_csv(config))
}

#[wasm_bindgen(js_name = compareEncodings)]
pub fn compare_js(config: &str) -> Result<String, JsError> {
    js(compare(config))
}

#[wasm_bindgen(js_name = exportQasm)]
pub fn export_qasm_js(config: &str, encoding: &str, step: usize) -> Result<String, JsError> {
    js(qasm(config, encoding, step))
}
