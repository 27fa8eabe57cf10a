use std::sync::Arc;

use super::factor::roots;
use super::uni::UniPoly;
use crate::gf::{fp, Elem, FieldCtx, GfError};

/// Explicit embedding of `small = F_{p^m}` into `big = F_{p^n}`, `m | n`,
/// sending the generator of `small` to a fixed root of its modulus in `big`.
pub struct Embedding {
    small: Arc<FieldCtx>,
    big: Arc<FieldCtx>,
    /// `theta^0, ..., theta^(m-1)` in `big`.
    basis: Vec<Elem>,
}

impl Embedding {
    pub fn new(small: &Arc<FieldCtx>, big: &Arc<FieldCtx>) -> Result<Embedding, GfError> {
        let (m, n) = (small.degree(), big.degree());
        if small.p() != big.p() || n % m != 0 {
            return Err(GfError::NotASubfield { m, k: n });
        }
        let theta = if m == 1 {
            big.zero()
        } else {
            let modulus = UniPoly::new(
                big.clone(),
                small.modulus().iter().map(|&c| big.from_u64(c as u64)).collect(),
            );
            roots(&modulus, 0).into_iter().next().expect("subfield modulus splits")
        };
        let mut basis = vec![big.one()];
        for i in 1..m {
            let next = big.mul(&basis[i - 1], &theta);
            basis.push(next);
        }
        Ok(Embedding { small: small.clone(), big: big.clone(), basis })
    }

    pub fn small(&self) -> &Arc<FieldCtx> {
        &self.small
    }

    pub fn big(&self) -> &Arc<FieldCtx> {
        &self.big
    }

    pub fn forward(&self, a: &Elem) -> Elem {
        let mut acc = self.big.zero();
        for (c, b) in a.iter().zip(&self.basis) {
            if *c != 0 {
                self.big.add_assign(&mut acc, &self.big.scale(b, *c));
            }
        }
        acc
    }

    /// Preimage of `e`, or `None` when `e` lies outside the subfield.
    pub fn backward(&self, e: &Elem) -> Option<Elem> {
        let p = self.big.p();
        let m = self.basis.len();
        let n = self.big.degree();
        if m == 1 {
            return e[1..].iter().all(|&c| c == 0).then(|| self.small.from_u64(e[0] as u64));
        }
        // Rows are coordinates of big, columns the basis plus the target.
        let mut rows: Vec<Vec<u32>> = (0..n)
            .map(|r| {
                let mut row: Vec<u32> = self.basis.iter().map(|b| b[r]).collect();
                row.push(e[r]);
                row
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for col in 0..m {
            let Some(sel) = (pivot_row..n).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(pivot_row, sel);
            let inv = fp::inv_mod(rows[pivot_row][col], p);
            for v in rows[pivot_row].iter_mut() {
                *v = fp::mul_mod(*v, inv, p);
            }
            for r in 0..n {
                if r != pivot_row && rows[r][col] != 0 {
                    let f = rows[r][col];
                    for c in 0..=m {
                        let t = fp::mul_mod(f, rows[pivot_row][c], p);
                        rows[r][c] = fp::sub_mod(rows[r][c], t, p);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        if rows[pivot_row..].iter().any(|row| row[m] != 0) {
            return None;
        }
        let mut out = self.small.zero();
        for (r, &col) in pivots.iter().enumerate() {
            out[col] = rows[r][m];
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;

    #[test]
    fn embedding_is_a_ring_map_and_invertible() {
        let small = build_field(3, 2).unwrap();
        let big = build_field(3, 6).unwrap();
        let emb = Embedding::new(&small, &big).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let (a, b) = (small.elem_from_index(i), small.elem_from_index(j));
                assert_eq!(
                    emb.forward(&small.mul(&a, &b)),
                    big.mul(&emb.forward(&a), &emb.forward(&b))
                );
                assert_eq!(
                    emb.forward(&small.add(&a, &b)),
                    big.add(&emb.forward(&a), &emb.forward(&b))
                );
            }
            let a = small.elem_from_index(i);
            assert_eq!(emb.backward(&emb.forward(&a)), Some(a));
        }
        // A generator of F_729 is not in F_9.
        assert_eq!(emb.backward(&big.gen()), None);
    }
}
