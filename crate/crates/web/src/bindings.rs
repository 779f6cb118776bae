use wasm_bindgen::prelude::*;

fn js(result: Result<String, String>) -> Result<String, JsError> {
    result.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classifyStructure)]
pub fn classify_structure(text: &str, equality: bool) -> Result<String, JsError> {
    js(crate::classify_report(text, equality))
}

#[wasm_bindgen(js_name = evaluateSentence)]
pub fn evaluate_sentence(structure: &str, formula: &str) -> Result<String, JsError> {
    js(crate::evaluate_report(structure, formula))
}

#[wasm_bindgen(js_name = latticeSvg)]
pub fn lattice_svg(n: usize) -> Result<String, JsError> {
    js(crate::lattice_svg(n))
}

#[wasm_bindgen(js_name = latticeDot)]
pub fn lattice_dot(n: usize) -> Result<String, JsError> {
    js(crate::lattice_dot(n))
}

#[wasm_bindgen(js_name = fixtureText)]
pub fn fixture_text(spec: &str) -> Result<String, JsError> {
    js(crate::fixture_text(spec))
}
