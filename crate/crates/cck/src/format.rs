//! JSON file formats for Cartan data, weights, crystal elements, cellular
//! crystal descriptors and membership certificates.

use std::collections::BTreeMap;
use std::path::Path;

use cck_core::crystal::Crystal;
use cck_core::subcrystal::Membership;
use cck_core::{CartanDatum, CartanError, CartanType, CellVec, CellularCrystal, CellularError, Element, Weight};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Cellular(#[from] CellularError),
    #[error("malformed element: {0}")]
    Element(String),
}

/// On-disk Cartan datum. Symmetrizers are optional on input and always
/// written on output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanJson {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetrizers: Option<Vec<i64>>,
}

impl CartanJson {
    pub fn from_datum(d: &CartanDatum) -> Self {
        CartanJson {
            labels: d.labels().to_vec(),
            matrix: d.matrix().to_vec(),
            symmetrizers: Some(d.symmetrizers().to_vec()),
        }
    }

    pub fn into_datum(self) -> Result<CartanDatum, CartanError> {
        CartanDatum::new(self.labels, self.matrix, self.symmetrizers)
    }
}

pub fn parse_cartan(text: &str) -> Result<CartanDatum, FormatError> {
    let raw: CartanJson = serde_json::from_str(text)?;
    Ok(raw.into_datum()?)
}

pub fn load_cartan(path: &Path) -> Result<CartanDatum, FormatError> {
    parse_cartan(&read(path)?)
}

pub fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Either a built-in type name or an inline datum.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CartanSpec {
    Name(String),
    Data(CartanJson),
}

impl CartanSpec {
    pub fn resolve(self) -> Result<CartanDatum, FormatError> {
        match self {
            CartanSpec::Name(n) => Ok(CartanDatum::builtin(n.parse::<CartanType>()?)),
            CartanSpec::Data(d) => Ok(d.into_datum()?),
        }
    }
}

/// `{"cartan": ..., "word": ["1","2","1"]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrystalDescriptor {
    pub cartan: CartanSpec,
    pub word: Vec<String>,
}

impl CrystalDescriptor {
    pub fn of(c: &CellularCrystal) -> Self {
        CrystalDescriptor {
            cartan: CartanSpec::Data(CartanJson::from_datum(c.datum())),
            word: word_labels(c.datum(), c.letters()),
        }
    }

    pub fn resolve(self) -> Result<CellularCrystal, FormatError> {
        let datum = self.cartan.resolve()?;
        let letters = self
            .word
            .iter()
            .map(|l| datum.index_of(l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CellularCrystal::new(datum, letters)?)
    }
}

pub fn word_labels(d: &CartanDatum, word: &[usize]) -> Vec<String> {
    word.iter().map(|&i| d.label(i).to_string()).collect()
}

pub fn cellvec_json(x: &CellVec) -> Value {
    json!(x.0)
}

pub fn parse_cellvec(v: &Value) -> Result<CellVec, FormatError> {
    Ok(CellVec(serde_json::from_value(v.clone())?))
}

fn label_map(d: &CartanDatum, coeffs: &[i64]) -> Value {
    let m: Map<String, Value> = d
        .labels()
        .iter()
        .zip(coeffs)
        .map(|(l, &c)| (l.clone(), json!(c)))
        .collect();
    Value::Object(m)
}

fn parse_label_map(d: &CartanDatum, v: &Value) -> Result<Vec<i64>, FormatError> {
    let m: BTreeMap<String, i64> = serde_json::from_value(v.clone())?;
    let mut out = vec![0; d.rank()];
    for (l, c) in m {
        out[d.index_of(&l)?] = c;
    }
    Ok(out)
}

/// A weight as two label-keyed objects, `{"lam": {...}, "rt": {...}}`.
pub fn weight_json(d: &CartanDatum, w: &Weight) -> Value {
    json!({"lam": label_map(d, &w.lam), "rt": label_map(d, &w.rt)})
}

pub fn parse_weight(d: &CartanDatum, v: &Value) -> Result<Weight, FormatError> {
    let part = |k: &str| match v.get(k) {
        Some(p) => parse_label_map(d, p),
        None => Ok(vec![0; d.rank()]),
    };
    Ok(Weight {
        lam: part("lam")?,
        rt: part("rt")?,
    })
}

/// `{"kind":"b","i":"1","n":-2}`, `{"kind":"t","lam":{...}}` (with an
/// optional `"rt"` sibling), `{"kind":"tensor","parts":[...]}`.
pub fn element_json(d: &CartanDatum, e: &Element) -> Value {
    match e {
        Element::B { i, n } => json!({"kind": "b", "i": d.label(*i), "n": n}),
        Element::T { lam } => {
            let mut v = json!({"kind": "t", "lam": label_map(d, &lam.lam)});
            if lam.rt.iter().any(|&c| c != 0) {
                v["rt"] = label_map(d, &lam.rt);
            }
            v
        }
        Element::Tensor(parts) => json!({
            "kind": "tensor",
            "parts": parts.iter().map(|p| element_json(d, p)).collect::<Vec<_>>(),
        }),
    }
}

pub fn parse_element(d: &CartanDatum, v: &Value) -> Result<Element, FormatError> {
    let bad = |m: &str| FormatError::Element(m.to_string());
    match v.get("kind").and_then(Value::as_str) {
        Some("b") => {
            let i = v.get("i").and_then(Value::as_str).ok_or_else(|| bad("b needs a string \"i\""))?;
            let n = v.get("n").and_then(Value::as_i64).ok_or_else(|| bad("b needs an integer \"n\""))?;
            Ok(Element::b(d.index_of(i)?, n))
        }
        Some("t") => {
            let lam = v.get("lam").ok_or_else(|| bad("t needs \"lam\""))?;
            Ok(Element::t(Weight {
                lam: parse_label_map(d, lam)?,
                rt: match v.get("rt") {
                    Some(rt) => parse_label_map(d, rt)?,
                    None => vec![0; d.rank()],
                },
            }))
        }
        Some("tensor") => {
            let parts = v.get("parts").and_then(Value::as_array).ok_or_else(|| bad("tensor needs \"parts\""))?;
            Ok(Element::Tensor(
                parts.iter().map(|p| parse_element(d, p)).collect::<Result<_, _>>()?,
            ))
        }
        _ => Err(bad("unknown \"kind\"")),
    }
}

/// `{"member": bool, "path": [["e","1"], ...]}`.
pub fn membership_json(d: &CartanDatum, m: &Membership) -> Value {
    json!({
        "member": m.member,
        "path": m.path.iter().map(|&i| json!(["e", d.label(i)])).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_round_trip() {
        let d = parse_cartan(r#"{"labels":["1","2"],"matrix":[[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(d.symmetrizers(), &[1, 1]);
        let back = serde_json::to_string(&CartanJson::from_datum(&d)).unwrap();
        assert_eq!(back, r#"{"labels":["1","2"],"matrix":[[2,-1],[-1,2]],"symmetrizers":[1,1]}"#);
        let scaled = parse_cartan(r#"{"labels":["a","b"],"matrix":[[2,-3],[-1,2]],"symmetrizers":[2,6]}"#).unwrap();
        assert_eq!(scaled.symmetrizers(), &[1, 3]);
        assert!(parse_cartan(r#"{"labels":["1","2"],"matrix":[[2,1],[-1,2]]}"#).is_err());
        assert!(parse_cartan("{").is_err());
    }

    #[test]
    fn element_round_trip() {
        let d = CartanDatum::builtin(CartanType::A(2));
        let e = Element::Tensor(vec![
            Element::b(0, -2),
            Element::t(Weight {
                lam: vec![1, 0],
                rt: vec![0, -1],
            }),
            Element::Tensor(vec![Element::b(1, 3)]),
        ]);
        let v = element_json(&d, &e);
        assert_eq!(v["parts"][0], json!({"kind":"b","i":"1","n":-2}));
        assert_eq!(parse_element(&d, &v).unwrap(), e);
        assert!(parse_element(&d, &json!({"kind":"b","i":"7","n":0})).is_err());
        assert!(parse_element(&d, &json!({"kind":"q"})).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let v = json!({"cartan": "A1^(1)", "word": ["0", "1", "0"]});
        let desc: CrystalDescriptor = serde_json::from_value(v).unwrap();
        let c = desc.resolve().unwrap();
        assert_eq!(c.letters(), &[0, 1, 0]);
        let again = CrystalDescriptor::of(&c).resolve().unwrap();
        assert_eq!(again.letters(), c.letters());
        let d = CartanDatum::builtin(CartanType::A(2));
        let w = Weight {
            lam: vec![1, 2],
            rt: vec![-1, 0],
        };
        assert_eq!(parse_weight(&d, &weight_json(&d, &w)).unwrap(), w);
    }
}
