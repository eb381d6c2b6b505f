//! Browser bindings: solve a case, render an escherized spread, list the
//! classification table.
//!
//! The exported functions are thin wrappers; the plain functions beside them
//! do the work and are what the native tests call.

use chair_escher::classify::classify_all;
use chair_escher::edge::AMPLITUDE_CAP;
use chair_escher::escher::{render, PerturbationAssignment};
use chair_escher::{solve, Prototile, Solution, SolveMode};
use wasm_bindgen::prelude::*;

/// Largest spread level the page will draw.
pub const MAX_LEVEL: u32 = 5;

fn pattern(p: i32) -> Result<Option<u8>, String> {
    if p < 0 {
        return Ok(None);
    }
    u8::try_from(p).map(Some).map_err(|_| format!("pattern {p} is outside 0..=15"))
}

fn solve_case(mode: &str, i: i32, j: i32) -> Result<Solution, String> {
    let mode: SolveMode = mode.parse().map_err(|e: chair_escher::Error| e.to_string())?;
    solve(mode, pattern(i)?, pattern(j)?).map_err(|e| e.to_string())
}

/// Solution report as JSON. Pass a negative pattern to omit it.
pub fn solve_report(mode: &str, i: i32, j: i32) -> Result<String, String> {
    let report = solve_case(mode, i, j)?.report();
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// SVG of the level-`level` spread with random edge curves drawn from `seed`.
pub fn render_spread(
    mode: &str,
    i: i32,
    j: i32,
    level: u32,
    seed: u32,
    amplitude: f64,
    target: &str,
) -> Result<String, String> {
    if level > MAX_LEVEL {
        return Err(format!("level {level} is above {MAX_LEVEL}"));
    }
    if !(0.0..=AMPLITUDE_CAP).contains(&amplitude) {
        return Err(format!("amplitude must lie in [0, {AMPLITUDE_CAP}]"));
    }
    let target: Prototile = target.parse().map_err(|e: chair_escher::Error| e.to_string())?;
    let sol = solve_case(mode, i, j)?;
    let params = PerturbationAssignment::random(&sol.system, u64::from(seed), amplitude);
    let tiling = render(&sol, target, level, &params).map_err(|e| e.to_string())?;
    Ok(tiling.to_svg())
}

/// The two-rule classification as JSON.
pub fn classification() -> Result<String, String> {
    classify_all().map(|t| t.to_json()).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = solveCase)]
pub fn solve_case_js(mode: &str, i: i32, j: i32) -> Result<String, JsError> {
    solve_report(mode, i, j).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = renderSvg)]
pub fn render_svg_js(
    mode: &str,
    i: i32,
    j: i32,
    level: u32,
    seed: u32,
    amplitude: f64,
    target: &str,
) -> Result<String, JsError> {
    render_spread(mode, i, j, level, seed, amplitude, target).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classifyAll)]
pub fn classify_all_js() -> Result<String, JsError> {
    classification().map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_two_rule() {
        let v: serde_json::Value = serde_json::from_str(&solve_report("two-rule", 5, 10).unwrap()).unwrap();
        assert_eq!(v["degree"], 2);
        assert_eq!(v["presentation"], "a=c=g=m / f=j=l=p; b=d=h=n / e=i=k=o");
    }

    #[test]
    fn solve_single_ignores_patterns() {
        let v: serde_json::Value = serde_json::from_str(&solve_report("single", -1, -1).unwrap()).unwrap();
        assert_eq!(v["degree"], 1);
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(solve_report("two-rule", 0, 15).unwrap_err().contains("excluded"));
        assert!(solve_report("two-rule", 300, 1).is_err());
        assert!(solve_report("sideways", 1, 2).is_err());
        assert!(render_spread("two-rule", 5, 10, 9, 0, 0.2, "alpha").is_err());
        assert!(render_spread("two-rule", 5, 10, 2, 0, 0.5, "alpha").is_err());
    }

    #[test]
    fn render_is_seeded() {
        let a = render_spread("two-rule", 5, 10, 2, 11, 0.25, "beta").unwrap();
        let b = render_spread("two-rule", 5, 10, 2, 11, 0.25, "beta").unwrap();
        let c = render_spread("two-rule", 5, 10, 2, 12, 0.25, "beta").unwrap();
        assert!(a.contains("<svg"));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn classification_lists_every_class() {
        let v: serde_json::Value = serde_json::from_str(&classification().unwrap()).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 119);
    }
}
