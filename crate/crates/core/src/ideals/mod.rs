//! Ideals generated by multiplication terms, radical spans, nodes and paths.
//!
//! Membership is decided in a single graded component (see [`membership`]), which is exact
//! for the homogeneous data used throughout. [`certificate`] searches paths for a
//! non-identity certificate and re-checks one with the membership oracle.

mod certificate;
mod membership;

use crate::circuit::{Circuit, LinearForm, MultiplicationTerm};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::Echelon;
use crate::reduce::ReductionMap;

pub use certificate::{find_certificate, find_certificate_with, verify_certificate, Certificate, SearchOptions};
pub use membership::{
    membership, membership_witness, term_membership, GradedComponent, DEFAULT_GRADED_CAP,
};

/// Default cap on the number of tree nodes visited by [`enumerate_paths`].
pub const DEFAULT_PATH_CAP: usize = 100_000;

/// `⟨f_1, …, f_m⟩` for multiplication terms `f_j` in `n` variables; no generators is `⟨0⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealGens {
    field: Field,
    n: usize,
    generators: Vec<MultiplicationTerm>,
}

impl IdealGens {
    pub fn new(field: &Field, n: usize, generators: Vec<MultiplicationTerm>) -> Result<IdealGens> {
        for g in &generators {
            field.check(g.scalar())?;
            for l in g.forms() {
                if l.n() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: l.n() });
                }
                field.check_all(l.coeffs())?;
            }
        }
        Ok(IdealGens { field: field.clone(), n, generators })
    }

    pub fn zero(field: &Field, n: usize) -> IdealGens {
        IdealGens { field: field.clone(), n, generators: Vec::new() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[MultiplicationTerm] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.iter().all(MultiplicationTerm::is_zero)
    }

    /// `⟨self, extra⟩`.
    pub fn with(&self, extra: MultiplicationTerm) -> IdealGens {
        let mut generators = self.generators.clone();
        generators.push(extra);
        IdealGens { field: self.field.clone(), n: self.n, generators }
    }

    /// `Ψ_β(I)`, generated by the images of the generators. Generators that map to zero are
    /// dropped, which leaves the ideal unchanged.
    pub fn apply_reduction(&self, psi: &ReductionMap) -> Result<IdealGens> {
        let generators = self
            .generators
            .iter()
            .map(|g| psi.apply_term(g))
            .filter(|g| !matches!(g, Ok(t) if t.is_zero()))
            .collect::<Result<Vec<_>>>()?;
        Ok(IdealGens { field: self.field.clone(), n: psi.k(), generators })
    }
}

/// Echelon basis of the span of every form of every generator.
pub fn radsp_echelon(gens: &IdealGens) -> Echelon {
    let mut e = Echelon::new(&gens.field, gens.n);
    for l in gens.generators.iter().flat_map(|g| g.forms()) {
        e.insert(l.coeffs());
    }
    e
}

/// A row-reduced basis of the radical span; empty for `⟨0⟩`.
pub fn radsp(gens: &IdealGens) -> Vec<LinearForm> {
    radsp_echelon(gens).basis().map(|row| LinearForm::new(row.to_vec())).collect()
}

/// One similarity class of `L(f)` modulo a radical span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityClass {
    /// First form of the class in `L(f)`, or `None` for the forms inside the radical span.
    pub representative: Option<LinearForm>,
    /// Positions in `L(f)` of the class members.
    pub members: Vec<usize>,
}

/// Returns `c` with `r = c · s` when `s` is nonzero and the vectors are proportional.
fn ratio(field: &Field, r: &[FieldElement], s: &[FieldElement]) -> Option<FieldElement> {
    let j = s.iter().position(|x| !x.is_zero())?;
    let c = field.div(&r[j], &s[j]).ok()?;
    r.iter().zip(s).all(|(a, b)| *a == field.mul(&c, b)).then_some(c)
}

/// Partitions `L(f)` by `ℓ ~ ℓ'` iff `ℓ' ∈ F*ℓ + radsp(gens)`. Forms inside the radical
/// span make up the class with no representative. Classes appear in order of first
/// occurrence.
///
/// Residues modulo a reduced echelon basis are canonical, so two forms are similar exactly
/// when their residues are nonzero multiples of each other.
pub fn similarity_classes(f: &MultiplicationTerm, gens: &IdealGens) -> Vec<SimilarityClass> {
    let e = radsp_echelon(gens);
    let mut classes: Vec<SimilarityClass> = Vec::new();
    let mut residues: Vec<Option<Vec<FieldElement>>> = Vec::new();
    for (pos, l) in f.forms().iter().enumerate() {
        let r = e.reduce(l.coeffs()).residue;
        let zero = r.iter().all(FieldElement::is_zero);
        let found = residues.iter().position(|s| match s {
            None => zero,
            Some(s) => !zero && ratio(&gens.field, &r, s).is_some(),
        });
        match found {
            Some(c) => classes[c].members.push(pos),
            None => {
                classes.push(SimilarityClass {
                    representative: (!zero).then(|| l.clone()),
                    members: vec![pos],
                });
                residues.push((!zero).then_some(r));
            }
        }
    }
    classes
}

/// `nod_I(f)`: one node per similarity class, the product of that class's forms.
pub fn nodes(f: &MultiplicationTerm, gens: &IdealGens) -> Vec<MultiplicationTerm> {
    similarity_classes(f, gens)
        .into_iter()
        .map(|c| {
            let forms = c.members.iter().map(|&i| f.forms()[i].clone()).collect();
            MultiplicationTerm::product(&gens.field, forms)
        })
        .collect()
}

/// `(I, v_1, …, v_i)` with each `v_j` a node of `T_j` modulo `⟨I, v_1, …, v_{j-1}⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub base: IdealGens,
    pub nodes: Vec<MultiplicationTerm>,
}

impl Path {
    pub fn empty(base: IdealGens) -> Path {
        Path { base, nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `⟨p̄⟩ = ⟨I, v_1, …, v_i⟩`.
    pub fn ideal(&self) -> IdealGens {
        let mut ideal = self.base.clone();
        ideal.generators.extend(self.nodes.iter().cloned());
        ideal
    }

    pub fn radsp_rank(&self) -> usize {
        radsp_echelon(&self.ideal()).rank()
    }
}

/// All paths of length `i` of `C` modulo `base`, depth first: `v_1` over the nodes of `T_1`,
/// then `v_2` over the nodes of `T_2` modulo `⟨base, v_1⟩`, and so on. Fails once more than
/// `cap` tree nodes have been visited.
pub fn enumerate_paths(circuit: &Circuit, i: usize, base: &IdealGens, cap: usize) -> Result<Vec<Path>> {
    if i > circuit.terms().len() {
        return Err(Error::IndexOutOfRange { index: i, len: circuit.terms().len() });
    }
    if base.n != circuit.n() {
        return Err(Error::DimensionMismatch { expected: circuit.n(), got: base.n });
    }
    let mut out = Vec::new();
    let mut visited = 0usize;
    let mut stack = vec![Path::empty(base.clone())];
    while let Some(path) = stack.pop() {
        visited += 1;
        if visited > cap {
            return Err(Error::PathExplosion { cap });
        }
        if path.len() == i {
            out.push(path);
            continue;
        }
        let choices = nodes(&circuit.terms()[path.len()], &path.ideal());
        // Pushed in reverse so the first node is explored first.
        for v in choices.into_iter().rev() {
            let mut next = path.clone();
            next.nodes.push(v);
            stack.push(next);
        }
    }
    Ok(out)
}

/// `g = M(L(T) ∩ radsp(p̄))`: the product of the forms of `T` inside the path's radical span.
pub fn strip_radsp_factors(term: &MultiplicationTerm, path: &Path) -> MultiplicationTerm {
    let ideal = path.ideal();
    let e = radsp_echelon(&ideal);
    let forms = term.forms().iter().filter(|l| e.contains(l.coeffs())).cloned().collect();
    MultiplicationTerm::product(&ideal.field, forms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::tests::form;

    fn term(f: &Field, forms: &[&[i64]]) -> MultiplicationTerm {
        MultiplicationTerm::product(f, forms.iter().map(|c| form(f, c)).collect())
    }

    fn four_variable_circuit(f: &Field) -> Circuit {
        let t1 = term(f, &[&[1, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 1, 1]]);
        let t2 = term(f, &[&[0, 1, 0, 0], &[2, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 1, 0]]);
        let t3 = term(f, &[&[0, 1, 0, 1], &[-1, 4, 0, 1], &[1, 1, 0, 1], &[-2, 1, 0, 1]]);
        Circuit::new(f, 4, 4, 3, vec![t1, t2, t3]).unwrap()
    }

    #[test]
    fn radsp_examples() {
        let f = Field::prime(101).unwrap();
        let g = IdealGens::new(&f, 2, vec![term(&f, &[&[1, 0], &[1, 0]])]).unwrap();
        assert_eq!(radsp(&g), vec![form(&f, &[1, 0])]);
        let g2 = g.with(term(&f, &[&[0, 1], &[2, 1]]));
        assert_eq!(radsp(&g2).len(), 2);
        assert!(radsp(&IdealGens::zero(&f, 2)).is_empty());
    }

    #[test]
    fn similarity_examples() {
        let f = Field::prime(101).unwrap();
        let t = term(&f, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1], &[0, 1]]);
        let classes = similarity_classes(&t, &IdealGens::zero(&f, 2));
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].members, vec![0, 1]);
        assert_eq!(classes[1].members, vec![2, 3, 4]);

        let v3 = term(&f, &[&[0, 1, 0, 1], &[-1, 4, 0, 1], &[1, 1, 0, 1], &[-2, 1, 0, 1]]);
        let gens = IdealGens::new(&f, 4, vec![term(&f, &[&[1, 0, 0, 0]]), term(&f, &[&[0, 1, 0, 0]])]).unwrap();
        let classes = similarity_classes(&v3, &gens);
        assert_eq!(classes.len(), 1);
        let e = radsp_echelon(&gens);
        let rep = classes[0].representative.clone().unwrap();
        let r = e.reduce(rep.coeffs()).residue;
        assert!(ratio(&f, &r, form(&f, &[0, 0, 0, 1]).coeffs()).is_some());

        let t = term(&f, &[&[1, 0], &[0, 1]]);
        let gens = IdealGens::new(&f, 2, vec![term(&f, &[&[1, 0], &[1, 0], &[1, 0]])]).unwrap();
        let classes = similarity_classes(&t, &gens);
        assert_eq!(classes[0], SimilarityClass { representative: None, members: vec![0] });
        assert_eq!(classes[1].members, vec![1]);
    }

    #[test]
    fn nodes_examples() {
        let f = Field::prime(101).unwrap();
        let t = term(&f, &[&[1, 0], &[1, 0], &[0, 1], &[0, 1], &[0, 1]]);
        let ns = nodes(&t, &IdealGens::zero(&f, 2));
        assert_eq!(ns, vec![term(&f, &[&[1, 0], &[1, 0]]), term(&f, &[&[0, 1], &[0, 1], &[0, 1]])]);

        let c = four_variable_circuit(&f);
        let v1 = term(&f, &[&[1, 0, 0, 0], &[1, 0, 0, 0]]);
        let ns = nodes(&c.terms()[1], &IdealGens::new(&f, 4, vec![v1]).unwrap());
        assert!(ns.contains(&term(&f, &[&[0, 1, 0, 0], &[2, 1, 0, 0]])));

        let t = term(&f, &[&[1, 0], &[2, 0]]);
        let gens = IdealGens::new(&f, 2, vec![term(&f, &[&[1, 0]])]).unwrap();
        assert_eq!(nodes(&t, &gens), vec![t.clone()]);
    }

    #[test]
    fn path_examples() {
        let f = Field::prime(101).unwrap();
        let c = four_variable_circuit(&f);
        let base = IdealGens::zero(&f, 4);
        let empty = enumerate_paths(&c, 0, &base, DEFAULT_PATH_CAP).unwrap();
        assert_eq!(empty, vec![Path::empty(base.clone())]);

        let paths = enumerate_paths(&c, 3, &base, DEFAULT_PATH_CAP).unwrap();
        let want = vec![
            term(&f, &[&[1, 0, 0, 0], &[1, 0, 0, 0]]),
            term(&f, &[&[0, 1, 0, 0], &[2, 1, 0, 0]]),
            c.terms()[2].clone(),
        ];
        assert!(paths.iter().any(|p| p.nodes == want));
        assert!(paths.iter().all(|p| p.radsp_rank() <= 3));

        let single = Circuit::new(&f, 2, 3, 1, vec![term(&f, &[&[1, 0], &[1, 0], &[1, 0]])]).unwrap();
        let paths = enumerate_paths(&single, 1, &IdealGens::zero(&f, 2), DEFAULT_PATH_CAP).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].nodes[0], single.terms()[0]);

        assert_eq!(enumerate_paths(&c, 3, &base, 2), Err(Error::PathExplosion { cap: 2 }));
    }

    #[test]
    fn strip_examples() {
        let f = Field::prime(101).unwrap();
        let base = IdealGens::zero(&f, 2);
        let path = Path { base, nodes: vec![term(&f, &[&[1, 0]])] };
        let t = term(&f, &[&[1, 0], &[1, 0], &[0, 1]]);
        assert_eq!(strip_radsp_factors(&t, &path), term(&f, &[&[1, 0], &[1, 0]]));
        let t = term(&f, &[&[0, 1]]);
        assert_eq!(strip_radsp_factors(&t, &path).degree(), 0);
        let t = term(&f, &[&[3, 0], &[1, 0]]);
        assert_eq!(strip_radsp_factors(&t, &path), t);
    }
}
