use num_traits::{Signed, Zero};

use crate::scalars::{GaussRational, Rational};

/// Square matrix over the Gaussian rationals; Hermitian when extracted from a real form.
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianMatrix {
    pub entries: Vec<Vec<GaussRational>>,
}

impl HermitianMatrix {
    pub fn zero(n: usize) -> Self {
        HermitianMatrix { entries: vec![vec![GaussRational::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut h = Self::zero(n);
        for j in 0..n {
            h.entries[j][j] = GaussRational::one();
        }
        h
    }

    /// Diagonal matrix unit `E_jj` (0-based).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut h = Self::zero(n);
        h.entries[j][j] = GaussRational::one();
        h
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(GaussRational::is_zero)
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.n();
        (0..n).all(|j| (0..n).all(|k| self.entries[j][k] == self.entries[k][j].conj()))
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &GaussRational) -> HermitianMatrix {
        HermitianMatrix { entries: self.entries.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    pub fn trace(&self) -> GaussRational {
        let mut acc = GaussRational::zero();
        for (j, row) in self.entries.iter().enumerate() {
            acc += &row[j];
        }
        acc
    }

    /// The pairing `Σ_jk H_jk P_jk`, i.e. `top(h-form ∧ p-form)` for dual-degree forms.
    pub fn pairing(&self, other: &HermitianMatrix) -> GaussRational {
        let mut acc = GaussRational::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            for (x, y) in a.iter().zip(b) {
                if !x.is_zero() && !y.is_zero() {
                    acc += &(x * y);
                }
            }
        }
        acc
    }

    pub fn determinant(&self) -> GaussRational {
        determinant(self.entries.clone())
    }

    /// Leading principal minors `det H[..k, ..k]` for k = 1..n.
    pub fn leading_minors(&self) -> Vec<GaussRational> {
        (1..=self.n())
            .map(|k| determinant(self.entries[..k].iter().map(|r| r[..k].to_vec()).collect()))
            .collect()
    }

    /// Sylvester's criterion: every leading principal minor is a positive rational.
    pub fn is_positive_definite(&self) -> bool {
        self.is_hermitian()
            && self.leading_minors().iter().all(|m| m.im.is_zero() && m.re.is_positive())
    }

    /// Coefficients `c_0..c_n` of `det(λI − H) = Σ c_k λ^k` (Faddeev–LeVerrier).
    pub fn characteristic_polynomial(&self) -> Vec<GaussRational> {
        let n = self.n();
        let mut coeffs = vec![GaussRational::zero(); n + 1];
        coeffs[n] = GaussRational::one();
        let mut m = vec![vec![GaussRational::zero(); n]; n];
        for k in 1..=n {
            // M_k = H M_{k-1} + c_{n-k+1} I
            let mut next = mat_mul(&self.entries, &m);
            for (j, row) in next.iter_mut().enumerate() {
                row[j] += &coeffs[n - k + 1];
            }
            m = next;
            let hm = mat_mul(&self.entries, &m);
            let mut tr = GaussRational::zero();
            for (j, row) in hm.iter().enumerate() {
                tr += &row[j];
            }
            coeffs[n - k] = -(tr.scale(&Rational::new(1.into(), (k as i64).into())));
        }
        coeffs
    }

    /// A Hermitian matrix is PSD iff the coefficients of `det(λI − H)` alternate
    /// in sign weakly: `(−1)^(n−k) c_k ≥ 0`.
    pub fn is_positive_semidefinite(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        let n = self.n();
        self.characteristic_polynomial().iter().enumerate().all(|(k, c)| {
            let c = &c.re;
            if (n - k) % 2 == 0 {
                !c.is_negative()
            } else {
                !c.is_positive()
            }
        })
    }

    /// Real coordinates: diagonal entries, then `Re H_jk, Im H_jk` for j < k.
    pub fn to_real_coords(&self) -> Vec<GaussRational> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            out.push(GaussRational::real(self.entries[j][j].re.clone()));
        }
        for j in 0..n {
            for k in j + 1..n {
                out.push(GaussRational::real(self.entries[j][k].re.clone()));
                out.push(GaussRational::real(self.entries[j][k].im.clone()));
            }
        }
        out
    }

    pub fn from_real_coords(n: usize, coords: &[GaussRational]) -> Self {
        let mut h = Self::zero(n);
        for j in 0..n {
            h.entries[j][j] = GaussRational::real(coords[j].re.clone());
        }
        let mut idx = n;
        for j in 0..n {
            for k in j + 1..n {
                let v = GaussRational::new(coords[idx].re.clone(), coords[idx + 1].re.clone());
                h.entries[k][j] = v.conj();
                h.entries[j][k] = v;
                idx += 2;
            }
        }
        h
    }

    pub fn to_f64(&self) -> Vec<Vec<(f64, f64)>> {
        self.entries.iter().map(|r| r.iter().map(GaussRational::to_f64_pair).collect()).collect()
    }

    pub fn rows_display(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }
}

fn mat_mul(a: &[Vec<GaussRational>], b: &[Vec<GaussRational>]) -> Vec<Vec<GaussRational>> {
    let n = a.len();
    let mut out = vec![vec![GaussRational::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[l][j].is_zero() {
                    out[i][j] += &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

pub(crate) fn determinant(mut m: Vec<Vec<GaussRational>>) -> GaussRational {
    let n = m.len();
    let mut det = GaussRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return GaussRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det = &det * &pivot;
        let inv = pivot.inv();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] * &inv;
            for k in c..n {
                let delta = &factor * &m[c][k];
                m[r][k] -= &delta;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    fn herm(rows: &[&[(i64, i64)]]) -> HermitianMatrix {
        HermitianMatrix {
            entries: rows
                .iter()
                .map(|r| r.iter().map(|&(a, b)| GaussRational::new(rat(a, 1), rat(b, 1))).collect())
                .collect(),
        }
    }

    #[test]
    fn sylvester_and_psd() {
        let pd = herm(&[&[(2, 0), (0, 1)], &[(0, -1), (2, 0)]]);
        assert!(pd.is_positive_definite());
        assert!(pd.is_positive_semidefinite());
        let rank_one = HermitianMatrix::unit(3, 1);
        assert!(!rank_one.is_positive_definite());
        assert!(rank_one.is_positive_semidefinite());
        let indefinite = herm(&[&[(1, 0), (2, 0)], &[(2, 0), (1, 0)]]);
        assert!(!indefinite.is_positive_semidefinite());
        // leading minors miss this one: diag (0, -1)
        let neg = herm(&[&[(0, 0), (0, 0)], &[(0, 0), (-1, 0)]]);
        assert!(!neg.is_positive_semidefinite());
        assert!(HermitianMatrix::zero(2).is_positive_semidefinite());
    }

    #[test]
    fn char_poly_of_diagonal() {
        let d = herm(&[&[(1, 0), (0, 0)], &[(0, 0), (3, 0)]]);
        // (λ-1)(λ-3) = λ² - 4λ + 3
        let c = d.characteristic_polynomial();
        assert_eq!(c, vec![GaussRational::int(3), GaussRational::int(-4), GaussRational::int(1)]);
    }

    #[test]
    fn real_coords_round_trip() {
        let h = herm(&[&[(1, 0), (2, 3), (0, 0)], &[(2, -3), (5, 0), (0, 1)], &[(0, 0), (0, -1), (7, 0)]]);
        assert_eq!(HermitianMatrix::from_real_coords(3, &h.to_real_coords()), h);
    }
}
