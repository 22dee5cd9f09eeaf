//! Exact Gaussian elimination over a [`Field`].
//!
//! [`Echelon`] keeps a reduced row echelon basis of the vectors inserted so far. With tracking
//! enabled every basis row also remembers how it was combined from the inserted vectors,
//! which lets callers recover explicit solutions of linear systems.

use crate::field::{Field, FieldElement};

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    values: Vec<FieldElement>,
    /// Coefficients over the inserted vectors; missing trailing entries are zero.
    combo: Vec<FieldElement>,
}

/// Result of reducing a vector against an [`Echelon`] basis:
/// `v = residue + Σ combination[i] · inserted[i]`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub residue: Vec<FieldElement>,
    pub combination: Vec<FieldElement>,
}

impl Reduction {
    pub fn is_zero(&self) -> bool {
        self.residue.iter().all(FieldElement::is_zero)
    }
}

/// Reduced row echelon basis of a subspace of `F^dim`.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    rows: Vec<Row>,
    track: bool,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: &Field, dim: usize) -> Echelon {
        Echelon { field: field.clone(), dim, rows: Vec::new(), track: false, inserted: 0 }
    }

    /// Like [`Echelon::new`] but records combinations of inserted vectors.
    pub fn with_tracking(field: &Field, dim: usize) -> Echelon {
        Echelon { track: true, ..Echelon::new(field, dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Basis vectors in row echelon order.
    pub fn basis(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.rows.iter().map(|r| r.values.as_slice())
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.pivot)
    }

    pub fn reduce(&self, v: &[FieldElement]) -> Reduction {
        assert_eq!(v.len(), self.dim, "vector length must match the ambient dimension");
        let f = &self.field;
        let mut residue = v.to_vec();
        let mut combination = if self.track { vec![f.zero(); self.inserted] } else { Vec::new() };
        for row in &self.rows {
            let c = residue[row.pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (slot, x) in residue.iter_mut().zip(&row.values).skip(row.pivot) {
                if !x.is_zero() {
                    *slot = f.sub(slot, &f.mul(&c, x));
                }
            }
            if self.track {
                for (slot, x) in combination.iter_mut().zip(&row.combo) {
                    if !x.is_zero() {
                        *slot = f.add(slot, &f.mul(&c, x));
                    }
                }
            }
        }
        Reduction { residue, combination }
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns whether it was independent of the current basis.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        let f = self.field.clone();
        let Reduction { residue, combination } = self.reduce(v);
        self.inserted += 1;
        let Some(pivot) = residue.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let scale = f.inv(&residue[pivot]).expect("pivot is nonzero");
        let values: Vec<FieldElement> = residue.iter().map(|x| f.mul(x, &scale)).collect();
        let combo = if self.track {
            // residue = v - Σ combination[i] inserted[i]
            let mut combo: Vec<FieldElement> = combination.iter().map(|c| f.neg(&f.mul(c, &scale))).collect();
            combo.push(scale.clone());
            combo
        } else {
            Vec::new()
        };
        for row in &mut self.rows {
            let c = row.values[pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (slot, x) in row.values.iter_mut().zip(&values) {
                if !x.is_zero() {
                    *slot = f.sub(slot, &f.mul(&c, x));
                }
            }
            if self.track {
                row.combo.resize(combo.len(), f.zero());
                for (slot, x) in row.combo.iter_mut().zip(&combo) {
                    if !x.is_zero() {
                        *slot = f.sub(slot, &f.mul(&c, x));
                    }
                }
            }
        }
        let at = self.rows.partition_point(|r| r.pivot < pivot);
        self.rows.insert(at, Row { pivot, values, combo });
        true
    }
}

/// Rank of a list of vectors.
pub fn rank(field: &Field, dim: usize, vectors: &[Vec<FieldElement>]) -> usize {
    let mut e = Echelon::new(field, dim);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Finds coefficients `c` with `Σ c[i] · columns[i] = target`, if any exist.
pub fn solve(field: &Field, dim: usize, columns: &[Vec<FieldElement>], target: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let mut e = Echelon::with_tracking(field, dim);
    for c in columns {
        e.insert(c);
    }
    let r = e.reduce(target);
    if !r.is_zero() {
        return None;
    }
    let mut coeffs = r.combination;
    coeffs.resize(columns.len(), field.zero());
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(f: &Field, rows: &[&[i64]]) -> Vec<Vec<FieldElement>> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
    }

    #[test]
    fn rank_examples() {
        let f = Field::prime(101).unwrap();
        assert_eq!(rank(&f, 2, &vecs(&f, &[&[1, 0], &[0, 1], &[1, 1]])), 2);
        assert_eq!(rank(&f, 2, &[]), 0);
        assert_eq!(rank(&f, 2, &vecs(&f, &[&[1, 0], &[2, 0]])), 1);
        let q = Field::rational();
        assert_eq!(rank(&q, 3, &vecs(&q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        let f3 = Field::prime(3).unwrap();
        // (1,2,3) (4,5,6) (7,8,9) mod 3 -> all multiples of (1,2,0)
        assert_eq!(rank(&f3, 3, &vecs(&f3, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 1);
    }

    #[test]
    fn solve_recovers_combination() {
        let f = Field::prime(13).unwrap();
        let cols = vecs(&f, &[&[1, 2, 0], &[0, 1, 1], &[1, 3, 1]]);
        let target = vecs(&f, &[&[3, 5, -1]])[0].clone();
        let c = solve(&f, 3, &cols, &target).unwrap();
        let mut back = vec![f.zero(); 3];
        for (ci, col) in c.iter().zip(&cols) {
            for (b, x) in back.iter_mut().zip(col) {
                *b = f.add(b, &f.mul(ci, x));
            }
        }
        assert_eq!(back, target);
        assert!(solve(&f, 3, &cols, &vecs(&f, &[&[0, 0, 1]])[0]).is_none());
    }

    #[test]
    fn residues_are_canonical() {
        let f = Field::prime(7).unwrap();
        let mut e = Echelon::new(&f, 3);
        e.insert(&vecs(&f, &[&[1, 1, 0]])[0]);
        let a = e.reduce(&vecs(&f, &[&[2, 0, 1]])[0]).residue;
        let b = e.reduce(&vecs(&f, &[&[0, -2, 1]])[0]).residue;
        assert_eq!(a, b);
    }
}
