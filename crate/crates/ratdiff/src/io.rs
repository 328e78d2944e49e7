//! JSON system documents.
//!
//! ```json
//! {
//!   "k": 2,
//!   "x": { "num": { "const": 1, "x": [1, 0], "y": [0, 0] },
//!          "den": { "const": 1, "x": [0, 0], "y": [0, 1] } },
//!   "y": { "num": { "const": 1, "x": [1, 0], "y": [0, 0] },
//!          "den": { "const": 1, "x": [0, 0], "y": [0, 1] } },
//!   "asserted_comparability": [
//!     { "shape": "two_sided_linear", "direction": "original", "constants": null }
//!   ],
//!   "asserted_bounds": [ { "sequence": "y", "side": "above" } ],
//!   "init": { "x": [1, 1], "y": [1, 1] }
//! }
//! ```
//!
//! Position `i − 1` of a coefficient array holds the lag-`i` coefficient. Numbers are read
//! as exact decimals. `constants: null` asserts existence without values.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::comparability::{ComparabilityFact, Constants, Direction, Shape};
use crate::model::{validate_system, AffineForm, CoefficientVector, Equation, RationalSystem};
use crate::number::{parse_decimal, to_decimal, Rational};
use crate::rules::{Sequence, Side};
use crate::simulate::InitialConditions;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaViolation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() {
            "/"
        } else {
            &self.path
        };
        write!(f, "{path}: {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("not valid JSON: {0}")]
    Json(String),
    #[error("{} schema violation(s): {}", .0.len(), join(.0))]
    Schema(Vec<SchemaViolation>),
}

fn join(v: &[SchemaViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDocument {
    pub system: RationalSystem,
    pub facts: Vec<ComparabilityFact>,
    pub asserted_bounds: Vec<(Sequence, Side)>,
    pub init: Option<InitialConditions>,
}

impl SystemDocument {
    pub fn new(system: RationalSystem) -> Self {
        SystemDocument {
            system,
            facts: Vec::new(),
            asserted_bounds: Vec::new(),
            init: None,
        }
    }
}

struct Reader {
    violations: Vec<SchemaViolation>,
}

impl Reader {
    fn fail(&mut self, path: &str, message: impl Into<String>) {
        self.violations.push(SchemaViolation {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn object<'v>(
        &mut self,
        v: &'v Value,
        path: &str,
        required: &[&str],
        optional: &[&str],
    ) -> Option<&'v Map<String, Value>> {
        let Some(map) = v.as_object() else {
            self.fail(path, "expected an object");
            return None;
        };
        for key in map.keys() {
            if !required.contains(&key.as_str()) && !optional.contains(&key.as_str()) {
                self.fail(&format!("{path}/{key}"), "unknown key");
            }
        }
        for key in required {
            if !map.contains_key(*key) {
                self.fail(&format!("{path}/{key}"), "missing key");
            }
        }
        Some(map)
    }

    fn number(&mut self, v: &Value, path: &str) -> Option<Rational> {
        match v {
            Value::Number(n) => match parse_decimal(&n.to_string()) {
                Ok(r) => Some(r),
                Err(e) => {
                    self.fail(path, e.to_string());
                    None
                }
            },
            _ => {
                self.fail(path, "expected a number");
                None
            }
        }
    }

    fn numbers(&mut self, v: &Value, path: &str) -> Option<Vec<Rational>> {
        let Some(items) = v.as_array() else {
            self.fail(path, "expected an array of numbers");
            return None;
        };
        let parsed: Vec<Option<Rational>> = items
            .iter()
            .enumerate()
            .map(|(i, item)| self.number(item, &format!("{path}/{i}")))
            .collect();
        parsed.into_iter().collect()
    }

    fn string<'v>(&mut self, v: &'v Value, path: &str) -> Option<&'v str> {
        let s = v.as_str();
        if s.is_none() {
            self.fail(path, "expected a string");
        }
        s
    }

    fn affine(&mut self, v: &Value, path: &str) -> Option<AffineForm> {
        let map = self.object(v, path, &["const", "x", "y"], &[])?;
        let constant = map
            .get("const")
            .and_then(|c| self.number(c, &format!("{path}/const")));
        let x = map
            .get("x")
            .and_then(|c| self.numbers(c, &format!("{path}/x")));
        let y = map
            .get("y")
            .and_then(|c| self.numbers(c, &format!("{path}/y")));
        Some(AffineForm {
            constant: constant?,
            x: CoefficientVector(x?),
            y: CoefficientVector(y?),
        })
    }

    fn equation(&mut self, v: &Value, path: &str) -> Option<Equation> {
        let map = self.object(v, path, &["num", "den"], &[])?;
        let num = map
            .get("num")
            .and_then(|f| self.affine(f, &format!("{path}/num")));
        let den = map
            .get("den")
            .and_then(|f| self.affine(f, &format!("{path}/den")));
        Some(Equation {
            num: num?,
            den: den?,
        })
    }

    fn fact(&mut self, v: &Value, path: &str) -> Option<ComparabilityFact> {
        let map = self.object(
            v,
            path,
            &["shape", "direction", "constants"],
            &["strict_affine"],
        )?;
        let shape = map.get("shape").and_then(|s| {
            let p = format!("{path}/shape");
            let text = self.string(s, &p)?;
            let shape = Shape::parse(text);
            if shape.is_none() {
                self.fail(&p, format!("unknown shape {text:?}"));
            }
            shape
        });
        let direction = map.get("direction").and_then(|s| {
            let p = format!("{path}/direction");
            let text = self.string(s, &p)?;
            let d = Direction::parse(text);
            if d.is_none() {
                self.fail(&p, format!("unknown direction {text:?}"));
            }
            d
        });
        let constants = map.get("constants").and_then(|c| {
            let p = format!("{path}/constants");
            if c.is_null() {
                Some(Constants::Existential)
            } else {
                self.numbers(c, &p).map(Constants::Values)
            }
        });
        let strict = match map.get("strict_affine") {
            None => Some(false),
            Some(Value::Bool(b)) => Some(*b),
            Some(_) => {
                self.fail(&format!("{path}/strict_affine"), "expected a boolean");
                None
            }
        };
        let (shape, direction, constants, strict) = (shape?, direction?, constants?, strict?);
        if let Constants::Values(vals) = &constants {
            let p = format!("{path}/constants");
            if vals.len() != shape.arity() {
                self.fail(
                    &p,
                    format!(
                        "{} takes {} constants, found {}",
                        shape.name(),
                        shape.arity(),
                        vals.len()
                    ),
                );
                return None;
            }
            if vals.iter().any(|r| r < &Rational::from_integer(0.into())) {
                self.fail(&p, "constants must be non-negative");
                return None;
            }
        }
        if strict && shape != Shape::TwoSidedAffine {
            self.fail(
                &format!("{path}/strict_affine"),
                "only two_sided_affine facts can be strict",
            );
            return None;
        }
        let fact = ComparabilityFact::asserted(shape, direction, constants, strict);
        if strict && !fact.strict_affine {
            self.fail(
                &format!("{path}/strict_affine"),
                "constants do not satisfy M₄ > M₂ > 0",
            );
            return None;
        }
        Some(fact)
    }

    fn bound(&mut self, v: &Value, path: &str) -> Option<(Sequence, Side)> {
        let map = self.object(v, path, &["sequence", "side"], &[])?;
        let sequence = map.get("sequence").and_then(|s| {
            let p = format!("{path}/sequence");
            let text = self.string(s, &p)?;
            let r = Sequence::parse(text);
            if r.is_none() {
                self.fail(&p, "expected \"x\" or \"y\"");
            }
            r
        });
        let side = map.get("side").and_then(|s| {
            let p = format!("{path}/side");
            let text = self.string(s, &p)?;
            let r = Side::parse(text);
            if r.is_none() {
                self.fail(&p, "expected \"above\" or \"below\"");
            }
            r
        });
        Some((sequence?, side?))
    }
}

/// Parses a document, reporting every schema or validity problem with its JSON pointer.
pub fn parse_document(text: &str) -> Result<SystemDocument, DocumentError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
    parse_value(&value)
}

pub fn parse_value(value: &Value) -> Result<SystemDocument, DocumentError> {
    let mut r = Reader {
        violations: Vec::new(),
    };
    let Some(root) = r.object(
        value,
        "",
        &["k", "x", "y"],
        &["asserted_comparability", "asserted_bounds", "init"],
    ) else {
        return Err(DocumentError::Schema(r.violations));
    };
    let k = match root.get("k") {
        Some(v) => match v.as_u64() {
            Some(k) if k >= 1 => Some(k as usize),
            _ => {
                r.fail("/k", "expected a positive integer");
                None
            }
        },
        None => None,
    };
    let x = root.get("x").and_then(|e| r.equation(e, "/x"));
    let y = root.get("y").and_then(|e| r.equation(e, "/y"));

    let mut facts = Vec::new();
    if let Some(v) = root.get("asserted_comparability") {
        match v.as_array() {
            Some(items) => {
                for (i, item) in items.iter().enumerate() {
                    if let Some(f) = r.fact(item, &format!("/asserted_comparability/{i}")) {
                        if facts.iter().any(|g: &ComparabilityFact| g.key() == f.key()) {
                            r.fail(
                                &format!("/asserted_comparability/{i}"),
                                "duplicate shape and direction",
                            );
                        }
                        facts.push(f);
                    }
                }
            }
            None => r.fail("/asserted_comparability", "expected an array"),
        }
    }

    let mut bounds = Vec::new();
    if let Some(v) = root.get("asserted_bounds") {
        match v.as_array() {
            Some(items) => {
                for (i, item) in items.iter().enumerate() {
                    if let Some(b) = r.bound(item, &format!("/asserted_bounds/{i}")) {
                        bounds.push(b);
                    }
                }
            }
            None => r.fail("/asserted_bounds", "expected an array"),
        }
    }

    let init = root.get("init").and_then(|v| {
        let map = r.object(v, "/init", &["x", "y"], &[])?;
        let ix = map.get("x").and_then(|a| r.numbers(a, "/init/x"));
        let iy = map.get("y").and_then(|a| r.numbers(a, "/init/y"));
        Some(InitialConditions { x: ix?, y: iy? })
    });

    if let (Some(k), Some(x), Some(y)) = (k, x, y) {
        let system = RationalSystem { k, x, y };
        if let Err(vs) = validate_system(&system) {
            for v in vs {
                r.fail(&v.path, v.kind.to_string());
            }
        }
        if let Some(init) = &init {
            if let Err(e) = init.validate(k) {
                r.fail("/init", e.to_string());
            }
        }
        if r.violations.is_empty() {
            return Ok(SystemDocument {
                system,
                facts,
                asserted_bounds: bounds,
                init,
            });
        }
    }
    Err(DocumentError::Schema(r.violations))
}

fn number_value(r: &Rational) -> Value {
    match to_decimal(r) {
        Some(text) => {
            Value::Number(Number::from_str(&text).expect("decimal text is a JSON number"))
        }
        // not reachable from parsed documents; keep the exact value readable
        None => Value::String(crate::number::format_rational(r)),
    }
}

fn numbers_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(number_value).collect())
}

fn affine_value(f: &AffineForm) -> Value {
    let mut m = Map::new();
    m.insert("const".into(), number_value(&f.constant));
    m.insert("x".into(), numbers_value(&f.x.0));
    m.insert("y".into(), numbers_value(&f.y.0));
    Value::Object(m)
}

fn equation_value(e: &Equation) -> Value {
    let mut m = Map::new();
    m.insert("num".into(), affine_value(&e.num));
    m.insert("den".into(), affine_value(&e.den));
    Value::Object(m)
}

/// Canonical JSON value: sorted keys, exact decimals, optional sections only when present.
pub fn document_value(doc: &SystemDocument) -> Value {
    let mut root = Map::new();
    root.insert("k".into(), Value::Number(doc.system.k.into()));
    root.insert("x".into(), equation_value(&doc.system.x));
    root.insert("y".into(), equation_value(&doc.system.y));
    if !doc.facts.is_empty() {
        let facts = doc
            .facts
            .iter()
            .map(|f| {
                let mut m = Map::new();
                m.insert("shape".into(), Value::String(f.shape.name().into()));
                m.insert("direction".into(), Value::String(f.direction.name().into()));
                m.insert(
                    "constants".into(),
                    match &f.constants {
                        Constants::Existential => Value::Null,
                        Constants::Values(v) => numbers_value(v),
                    },
                );
                if f.shape == Shape::TwoSidedAffine && f.strict_affine {
                    m.insert("strict_affine".into(), Value::Bool(true));
                }
                Value::Object(m)
            })
            .collect();
        root.insert("asserted_comparability".into(), Value::Array(facts));
    }
    if !doc.asserted_bounds.is_empty() {
        let bounds = doc
            .asserted_bounds
            .iter()
            .map(|(s, side)| {
                let mut m = Map::new();
                m.insert("sequence".into(), Value::String(s.name().into()));
                m.insert("side".into(), Value::String(side.name().into()));
                Value::Object(m)
            })
            .collect();
        root.insert("asserted_bounds".into(), Value::Array(bounds));
    }
    if let Some(init) = &doc.init {
        let mut m = Map::new();
        m.insert("x".into(), numbers_value(&init.x));
        m.insert("y".into(), numbers_value(&init.y));
        root.insert("init".into(), Value::Object(m));
    }
    Value::Object(root)
}

pub fn to_canonical_json(doc: &SystemDocument) -> String {
    let mut s = serde_json::to_string_pretty(&document_value(doc)).expect("serializable");
    s.push('\n');
    s
}

/// Parses `{"x": [...], "y": [...]}` initial conditions for a system of order `k`.
pub fn parse_init(text: &str, k: usize) -> Result<InitialConditions, DocumentError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
    let mut r = Reader {
        violations: Vec::new(),
    };
    let init = r.object(&value, "", &["x", "y"], &[]).and_then(|map| {
        let ix = map.get("x").and_then(|a| r.numbers(a, "/x"));
        let iy = map.get("y").and_then(|a| r.numbers(a, "/y"));
        Some(InitialConditions { x: ix?, y: iy? })
    });
    if let Some(init) = &init {
        if let Err(e) = init.validate(k) {
            r.fail("", e.to_string());
        }
    }
    match init {
        Some(init) if r.violations.is_empty() => Ok(init),
        _ => Err(DocumentError::Schema(r.violations)),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
