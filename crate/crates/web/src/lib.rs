//! Browser bindings for the demo page in `www/`. Each export takes strings
//! and returns a JSON string, or throws the error message.

use kirbykit::{corpus, knot, surgery, HandleStructure, KnotDiagram, LaurentPoly};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn err(e: kirbykit::Error) -> String {
    e.to_string()
}

fn coefficients(p: &LaurentPoly, var: &str) -> Vec<Value> {
    p.terms()
        .map(|(m, c)| json!({ "exponent": m.exponent(var), "coefficient": c.to_string() }))
        .collect()
}

/// Catalog name or PD-code JSON.
fn parse_knot(input: &str) -> Result<KnotDiagram, String> {
    let s = input.trim();
    if s.starts_with('[') || s.starts_with('{') {
        KnotDiagram::from_json(s).map_err(err)
    } else {
        knot::catalog(s).map_err(err)
    }
}

pub fn alexander_report(input: &str) -> Result<String, String> {
    let k = parse_knot(input)?;
    let seifert = k.alexander().map_err(err)?;
    let fox = k.alexander_fox().map_err(err)?;
    let v = k.seifert_matrix().map_err(err)?;
    Ok(json!({
        "alexander": seifert.to_string(),
        "fox": fox.to_string(),
        "agreement": seifert == fox,
        "crossings": k.crossing_count(),
        "genus_bound": v.genus(),
        "signature": v.signature(),
        "coefficients": coefficients(&seifert, knot::ALEXANDER_VAR),
    })
    .to_string())
}

pub fn invariants_report(kby: &str) -> Result<String, String> {
    let x = HandleStructure::from_json(kby).map_err(err)?;
    let inv = x.invariants().map_err(err)?;
    Ok(json!({ "invariants": inv, "summary": inv.to_string() }).to_string())
}

pub fn sw_report(knot_input: &str, class: i64) -> Result<String, String> {
    let delta = parse_knot(knot_input)?.alexander().map_err(err)?;
    let k3 = corpus::k3();
    let out = surgery::sw_knot_surgery(&k3, &[class], &delta).map_err(err)?;
    let classes: Vec<Value> = out
        .basic_classes()
        .into_iter()
        .map(|(c, coeff)| json!({ "class": out.class_name(&c), "exponent": c[0], "coefficient": coeff.to_string() }))
        .collect();
    Ok(json!({
        "alexander": delta.to_string(),
        "sw": out.display_poly(),
        "basic_classes": classes,
        "fake_pair": surgery::is_fake_pair(&k3, &out).map_err(err)?,
    })
    .to_string())
}

/// The corpus `.kby` files as `[{name, text}]`.
pub fn examples_report() -> Result<String, String> {
    let files = corpus::files().map_err(err)?;
    let list: Vec<Value> = files
        .into_iter()
        .filter(|(n, _)| n.ends_with(".kby"))
        .map(|(name, text)| json!({ "name": name, "text": text }))
        .collect();
    Ok(Value::Array(list).to_string())
}

#[wasm_bindgen]
pub fn alexander(input: &str) -> Result<String, JsError> {
    alexander_report(input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn invariants(kby: &str) -> Result<String, JsError> {
    invariants_report(kby).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sw_surgery(knot: &str, class: i32) -> Result<String, JsError> {
    sw_report(knot, class.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn examples() -> Result<String, JsError> {
    examples_report().map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn alexander_by_name_and_pd() {
        let v = parse(&alexander_report("figure-eight").unwrap());
        assert_eq!(v["alexander"], "-t + 3 - t^-1");
        assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
        let pd = knot::right_trefoil().to_json();
        let w = parse(&alexander_report(&pd).unwrap());
        assert_eq!((w["alexander"].as_str(), w["signature"].as_i64()), (Some("t - 1 + t^-1"), Some(-2)));
        assert!(alexander_report("stevedore").is_err());
        assert!(alexander_report("[1,2").is_err());
    }

    #[test]
    fn invariants_of_an_example() {
        let list = parse(&examples_report().unwrap());
        let cusp = list.as_array().unwrap().iter().find(|e| e["name"] == "cusp.kby").unwrap();
        let v = parse(&invariants_report(cusp["text"].as_str().unwrap()).unwrap());
        assert_eq!(v["invariants"]["chi"], 2);
        assert!(invariants_report("{}").is_err());
    }

    #[test]
    fn sw_of_k3_surgery() {
        let v = parse(&sw_report("trefoil", 1).unwrap());
        assert_eq!(v["sw"], "exp(2T) - 1 + exp(-2T)");
        assert_eq!(v["basic_classes"][0]["exponent"], 2);
        assert!(sw_report("trefoil", 0).is_err());
    }
}
