use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Circuit, LinearForm, MultiplicationTerm};
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescription, FieldElement};

/// On-disk circuit format. Each form is its coefficient vector `(a_1, …, a_n)`; in the affine
/// variant every form carries an extra leading constant entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitDocument {
    pub field: FieldDescription,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub terms: Vec<TermDocument>,
    /// Indices of terms containing a form that vanished under a variable reduction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_terms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDocument {
    pub scalar: Value,
    pub forms: Vec<Vec<Value>>,
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::MalformedDocument(e.to_string())
}

fn read_term(field: &Field, t: usize, doc: &TermDocument, width: usize) -> Result<(FieldElement, Vec<Vec<FieldElement>>)> {
    let scalar = field.parse_element(&doc.scalar)?;
    if scalar.is_zero() {
        return Err(Error::ZeroScalar { term: t });
    }
    let forms = doc
        .forms
        .iter()
        .map(|row| {
            if row.len() != width {
                return Err(malformed(format!("term {t}: form has {} entries, expected {width}", row.len())));
            }
            row.iter().map(|v| field.parse_element(v)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((scalar, forms))
}

impl CircuitDocument {
    pub fn parse(text: &str) -> Result<CircuitDocument> {
        serde_json::from_str(text).map_err(malformed)
    }

    pub fn into_circuit(self) -> Result<Circuit> {
        let field = Field::from_description(&self.field)?;
        if self.terms.len() > self.k {
            return Err(Error::TooManyTerms { k: self.k, got: self.terms.len() });
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, doc) in self.terms.iter().enumerate() {
            let (scalar, forms) = read_term(&field, t, doc, self.n)?;
            let forms: Vec<LinearForm> = forms.into_iter().map(LinearForm::new).collect();
            if forms.iter().any(LinearForm::is_zero) {
                return Err(Error::ZeroFormInTerm { term: t });
            }
            terms.push(MultiplicationTerm::from_parts(scalar, forms));
        }
        Circuit::new(&field, self.n, self.d, self.k, terms)
    }

    pub fn into_affine(self) -> Result<AffineCircuit> {
        let field = Field::from_description(&self.field)?;
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(t, doc)| {
                let (scalar, factors) = read_term(&field, t, doc, self.n + 1)?;
                Ok(AffineTerm { scalar, factors })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AffineCircuit { field, n: self.n, d: self.d, k: self.k, terms })
    }
}

impl Circuit {
    /// Parses the JSON circuit format and validates every invariant.
    pub fn from_json(text: &str) -> Result<Circuit> {
        CircuitDocument::parse(text)?.into_circuit()
    }

    pub fn to_document(&self) -> CircuitDocument {
        let f = &self.field;
        CircuitDocument {
            field: f.description(),
            n: self.n,
            d: self.d,
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|t| TermDocument {
                    scalar: f.element_to_json(t.scalar()),
                    forms: t
                        .forms()
                        .iter()
                        .map(|l| l.coeffs().iter().map(|a| f.element_to_json(a)).collect())
                        .collect(),
                })
                .collect(),
            zero_terms: self
                .terms
                .iter()
                .enumerate()
                .filter(|(_, t)| t.is_zero())
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_document()).expect("documents serialize")
    }
}

/// A term whose factors are affine polynomials `a_0 + Σ a_i x_i`, stored as `[a_0, a_1, …, a_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineTerm {
    pub scalar: FieldElement,
    pub factors: Vec<Vec<FieldElement>>,
}

/// Affine or ragged-degree input, terms of degree at most `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineCircuit {
    pub field: Field,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub terms: Vec<AffineTerm>,
}

impl AffineCircuit {
    pub fn from_json(text: &str) -> Result<AffineCircuit> {
        CircuitDocument::parse(text)?.into_affine()
    }

    /// Lifts to a homogeneous ΣΠΣ(k, d, n+1) circuit. Variable 0 stands for the constant 1:
    /// `a_0 + Σ a_i x_i ↦ a_0 x_0 + Σ a_i x_i`, and each term is padded with `x_0` up to
    /// degree `d`. Setting `x_0 = 1` recovers the input.
    pub fn homogenize(&self) -> Result<Circuit> {
        let f = &self.field;
        if self.terms.len() > self.k {
            return Err(Error::TooManyTerms { k: self.k, got: self.terms.len() });
        }
        let width = self.n + 1;
        let x0 = LinearForm::variable(f, width, 0);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, term) in self.terms.iter().enumerate() {
            if term.scalar.is_zero() {
                return Err(Error::ZeroScalar { term: t });
            }
            if term.factors.len() > self.d {
                return Err(Error::DegreeMismatch { term: t, expected: self.d, got: term.factors.len() });
            }
            let mut forms = Vec::with_capacity(self.d);
            for factor in &term.factors {
                if factor.len() != width {
                    return Err(Error::DimensionMismatch { expected: width, got: factor.len() });
                }
                let form = LinearForm::new(factor.clone());
                if form.is_zero() {
                    return Err(Error::ZeroAffineFactor { term: t });
                }
                forms.push(form);
            }
            forms.resize(self.d, x0.clone());
            terms.push(MultiplicationTerm::from_parts(term.scalar.clone(), forms));
        }
        Circuit::new(f, width, self.d, self.k, terms)
    }
}
