//! JSON renderings of the library's results.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cusps::CuspLayout;
use crate::gl2::UnitLabel;
use crate::runge::{RungeReport, RungeUnit};
use crate::units::{Divisor, ModularCurve};

pub const SCHEMA: u32 = 1;

/// Integers that fit in i64 become JSON numbers, larger ones decimal strings.
pub fn big(n: &BigInt) -> Value {
    crate::bounds::bigint_json(n)
}

pub fn label(a: &UnitLabel) -> Value {
    json!([a.k1(), a.k2()])
}

pub fn cusps(layout: &CuspLayout) -> Value {
    let list: Vec<Value> = (0..layout.num_geometric())
        .map(|i| {
            let (x, y) = layout.representative(i).vector();
            json!({"vector": [x, y], "width": layout.width(i)})
        })
        .collect();
    Value::Array(list)
}

pub fn orbits(layout: &CuspLayout) -> Value {
    json!(layout.galois_orbits())
}

pub fn divisor(d: &Divisor) -> Value {
    let terms: Vec<Value> =
        d.coefficients.iter().enumerate().map(|(i, v)| json!({"cusp": i, "ord": big(v)})).collect();
    Value::Array(terms)
}

pub fn labelled_divisor(a: &UnitLabel, d: &Divisor) -> Value {
    json!({"a": label(a), "divisor": divisor(d)})
}

pub fn group_summary(curve: &ModularCurve) -> Value {
    json!({
        "level": curve.level(),
        "group_order": curve.group().order(),
        "det_image": curve.group().det_image().elements(),
        "galois": curve.h_k().elements(),
        "gprime_order": curve.g_prime().order(),
    })
}

pub fn runge_unit(curve: &ModularCurve, unit: &RungeUnit, bound: f64, check: &RungeReport) -> Value {
    let exponents: Vec<Value> = curve
        .labels()
        .iter()
        .zip(unit.exponents.entries())
        .filter(|(_, b)| *b != &BigInt::from(0))
        .map(|(a, b)| json!({"a": label(a), "b": big(b)}))
        .collect();
    json!({
        "sigma": unit.sigma,
        "s": unit.s,
        "exponents": exponents,
        "B": big(&unit.budget_b),
        "bound": bound,
        "lambda_height": unit.lambda_height,
        "divisor": divisor(&unit.divisor),
        "verification": check,
    })
}

/// Wrap a payload as a versioned document.
pub fn document(command: &str, mut payload: Value) -> Value {
    if let Value::Object(map) = &mut payload {
        map.insert("schema".into(), json!(SCHEMA));
        map.insert("command".into(), json!(command));
        payload
    } else {
        json!({"schema": SCHEMA, "command": command, "result": payload})
    }
}
