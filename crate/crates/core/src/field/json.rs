use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;
use smallvec::SmallVec;

use super::{Field, FieldElement, Repr};
use crate::error::{Error, Result};

/// Serialized form of a field:
/// `{"kind":"prime","p":"101"}`, `{"kind":"extension","p":"2","m":4,"modulus":[...]}` or
/// `{"kind":"rational"}`. Integers are decimal strings; plain JSON numbers are also accepted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescription {
    Prime {
        #[serde(deserialize_with = "string_or_number")]
        p: String,
    },
    Extension {
        #[serde(deserialize_with = "string_or_number")]
        p: String,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none", deserialize_with = "opt_strings")]
        modulus: Option<Vec<String>>,
    },
    Rational,
}

fn value_to_string(v: Value) -> std::result::Result<String, String> {
    match v {
        Value::String(s) => Ok(s),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("expected an integer string, got {other}")),
    }
}

fn string_or_number<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<String, D::Error> {
    value_to_string(Value::deserialize(d)?).map_err(serde::de::Error::custom)
}

fn opt_strings<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<String>>, D::Error> {
    let v: Option<Vec<Value>> = Option::deserialize(d)?;
    v.map(|xs| xs.into_iter().map(value_to_string).collect::<std::result::Result<Vec<_>, _>>())
        .transpose()
        .map_err(serde::de::Error::custom)
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::MalformedDocument(format!("expected a natural number, got {s:?}")))
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::MalformedDocument(format!("expected an integer, got {s:?}")))
}

impl Field {
    /// Builds and validates a field from its description.
    pub fn from_description(desc: &FieldDescription) -> Result<Field> {
        match desc {
            FieldDescription::Prime { p } => Field::prime(parse_u64(p)?),
            FieldDescription::Extension { p, m, modulus } => {
                let p = parse_u64(p)?;
                let modulus = modulus
                    .as_ref()
                    .map(|cs| cs.iter().map(|c| parse_u64(c)).collect::<Result<Vec<_>>>())
                    .transpose()?;
                Field::extension(p, *m, modulus)
            }
            FieldDescription::Rational => Ok(Field::rational()),
        }
    }

    pub fn from_json(text: &str) -> Result<Field> {
        let desc: FieldDescription =
            serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        Field::from_description(&desc)
    }

    pub fn description(&self) -> FieldDescription {
        match &*self.repr {
            Repr::Prime { p } => FieldDescription::Prime { p: p.to_string() },
            Repr::Extension { p, modulus } => FieldDescription::Extension {
                p: p.to_string(),
                m: modulus.len() - 1,
                modulus: Some(modulus.iter().map(|c| c.to_string()).collect()),
            },
            Repr::Rational => FieldDescription::Rational,
        }
    }

    /// Parses an element: an integer string for `F_p`, a coefficient array (or an integer for
    /// a constant) for extensions, `"num/den"` or an integer for `Q`.
    pub fn parse_element(&self, v: &Value) -> Result<FieldElement> {
        match (&*self.repr, v) {
            (Repr::Extension { p, modulus }, Value::Array(items)) => {
                let m = modulus.len() - 1;
                if items.len() > m {
                    return Err(Error::MalformedDocument(format!(
                        "extension element has {} coefficients, field degree is {m}",
                        items.len()
                    )));
                }
                let mut c: super::Coeffs = SmallVec::from_elem(0, m);
                for (slot, item) in c.iter_mut().zip(items) {
                    let s = value_to_string(item.clone()).map_err(Error::MalformedDocument)?;
                    *slot = super::reduce_bigint(&parse_bigint(&s)?, *p);
                }
                Ok(FieldElement::Ext(c))
            }
            (Repr::Rational, _) => {
                let s = value_to_string(v.clone()).map_err(Error::MalformedDocument)?;
                let r = match s.split_once('/') {
                    Some((num, den)) => {
                        let den = parse_bigint(den)?;
                        if den.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        BigRational::new(parse_bigint(num)?, den)
                    }
                    None => BigRational::from_integer(parse_bigint(&s)?),
                };
                Ok(FieldElement::Rational(r))
            }
            (_, Value::String(_) | Value::Number(_)) => {
                let s = value_to_string(v.clone()).map_err(Error::MalformedDocument)?;
                Ok(self.from_bigint(&parse_bigint(&s)?))
            }
            _ => Err(Error::MalformedDocument(format!("cannot read {v} as an element of {self:?}"))),
        }
    }

    /// Serializes an element in the format read by [`Field::parse_element`].
    pub fn element_to_json(&self, a: &FieldElement) -> Value {
        match a {
            FieldElement::Prime(x) => Value::String(x.to_string()),
            FieldElement::Ext(c) => Value::Array(c.iter().map(|x| Value::String(x.to_string())).collect()),
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    Value::String(r.numer().to_string())
                } else {
                    Value::String(format!("{}/{}", r.numer(), r.denom()))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn descriptions_round_trip() {
        for text in [
            r#"{"kind":"prime","p":"101"}"#,
            r#"{"kind":"extension","p":"2","m":4,"modulus":["1","1","0","0","1"]}"#,
            r#"{"kind":"rational"}"#,
        ] {
            let f = Field::from_json(text).unwrap();
            let back = serde_json::to_string(&f.description()).unwrap();
            assert_eq!(Field::from_json(&back).unwrap(), f);
        }
        assert_eq!(Field::from_json(r#"{"kind":"prime","p":4}"#), Err(Error::NotPrime("4".into())));
        let found = Field::from_json(r#"{"kind":"extension","p":"2","m":2}"#).unwrap();
        assert_eq!(found.modulus(), Some(&[1u64, 1, 1][..]));
        assert!(matches!(Field::from_json(r#"{"kind":"prime"}"#), Err(Error::MalformedDocument(_))));
    }

    #[test]
    fn element_formats() {
        let q = Field::rational();
        let a = q.parse_element(&json!("-6/4")).unwrap();
        assert_eq!(q.element_to_json(&a), json!("-3/2"));
        assert_eq!(q.element_to_json(&q.parse_element(&json!("4/2")).unwrap()), json!("2"));
        assert_eq!(q.parse_element(&json!("1/0")), Err(Error::DivisionByZero));

        let f = Field::prime(101).unwrap();
        assert_eq!(f.parse_element(&json!("-1")).unwrap(), FieldElement::Prime(100));
        assert_eq!(f.parse_element(&json!(205)).unwrap(), FieldElement::Prime(3));
        assert!(f.parse_element(&json!("x")).is_err());

        let g = Field::extension(2, 2, None).unwrap();
        let x = g.parse_element(&json!(["0", "1"])).unwrap();
        assert_eq!(x, g.generator().unwrap());
        assert_eq!(g.parse_element(&json!("1")).unwrap(), g.one());
        assert_eq!(g.element_to_json(&x), json!(["0", "1"]));
        assert!(g.parse_element(&json!(["0", "1", "1"])).is_err());
    }
}
