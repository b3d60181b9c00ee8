#![allow(dead_code)]

use std::path::PathBuf;

use nilgeo::exterior::{Form, Mono};
use nilgeo::scalars::{rat, GaussRational};
use nilgeo::structeq::{validate, ComplexNilmanifold, StructureEquations};
use num_traits::ToPrimitive;
use rand::Rng;

pub fn corpus() -> Vec<(String, ComplexNilmanifold)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut entries: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "nil"))
        .collect();
    entries.sort();
    entries
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).expect("corpus file");
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let m = nilgeo::structeq::load(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, m)
        })
        .collect()
}

pub fn iwasawa() -> ComplexNilmanifold {
    nilgeo::deform::iwasawa()
}

fn random_coeff(rng: &mut impl Rng) -> GaussRational {
    match rng.random_range(0..9) {
        0 => GaussRational::int(1),
        1 => GaussRational::int(-1),
        2 => GaussRational::i(),
        3 => GaussRational::real(rat(1, 2)),
        4 => GaussRational::new(rat(1, 1), rat(-1, 3)),
        _ => GaussRational::zero(),
    }
}

/// Random triangular equations without (0,2)-terms, with shuffled labels.
pub fn random_equations(rng: &mut impl Rng, n: usize) -> StructureEquations {
    let mut table = vec![Form::zero(n); n];
    for k in 1..n {
        let mut f = Form::zero(n);
        for a in 0..k {
            for b in 0..k {
                if a < b {
                    f.add_term(Mono((1 << a) | (1 << b)), random_coeff(rng));
                }
                f.add_term(Mono((1 << a) | (1 << (n + b))), random_coeff(rng));
            }
        }
        table[k] = f;
    }
    // shuffle the labels so the triangular order is hidden
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let images: Vec<Form<GaussRational>> =
        (0..2 * n).map(|g| if g < n { Form::phi(n, perm[g] + 1) } else { Form::phibar(n, perm[g - n] + 1) }).collect();
    let mut out = vec![Form::zero(n); n];
    for k in 0..n {
        out[perm[k]] = table[k].substitute(&images);
    }
    StructureEquations::from_forms(&out)
}

pub fn random_manifold(rng: &mut impl Rng, n: usize) -> Option<ComplexNilmanifold> {
    validate(&random_equations(rng, n)).ok()
}

/// Independent rank computations modulo a prime `p ≡ 1 (mod 4)`, with its own
/// exterior algebra on ordered generator lists.
pub struct Oracle {
    n: usize,
    /// `d` of each of the `2n` generators as (sorted generator pair, coefficient).
    dgen: Vec<Vec<((usize, usize), u64)>>,
}

pub const P: u64 = 998_244_353;

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

fn sqrt_minus_one() -> u64 {
    pow_mod(3, (P - 1) / 4)
}

fn rational_mod(r: &nilgeo::scalars::Rational) -> u64 {
    let p = num_bigint::BigInt::from(P);
    let num = ((r.numer() % &p) + &p) % &p;
    let den = ((r.denom() % &p) + &p) % &p;
    num.to_u64().unwrap() * inv_mod(den.to_u64().unwrap()) % P
}

fn gauss_mod(c: &GaussRational, conj: bool) -> u64 {
    let i = sqrt_minus_one();
    let im = rational_mod(&c.im) * i % P;
    let re = rational_mod(&c.re);
    if conj {
        (re + P - im) % P
    } else {
        (re + im) % P
    }
}

/// Sorts a generator list, returning the sign of the permutation, or `None` on a repeat.
fn sort_sign(list: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 0..list.len() {
        for j in 0..list.len() - 1 - i {
            if list[j] == list[j + 1] {
                return None;
            }
            if list[j] > list[j + 1] {
                list.swap(j, j + 1);
                neg = !neg;
            }
        }
    }
    if list.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(neg)
}

fn subsets(total: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize == k {
            out.push((0..total).filter(|g| mask & (1 << g) != 0).collect());
        }
    }
    out
}

fn rank_mod(mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = inv_mod(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = *x * inv % P;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + P - f * y % P) % P;
                }
            }
        }
        r += 1;
    }
    r
}

impl Oracle {
    pub fn new(m: &ComplexNilmanifold) -> Self {
        let n = m.n();
        let mut dgen = vec![Vec::new(); 2 * n];
        for (k, f) in m.d_phi().iter().enumerate() {
            for (mono, c) in f.terms() {
                let gens: Vec<usize> = (0..2 * n).filter(|g| mono.0 & (1 << g) != 0).collect();
                dgen[k].push(((gens[0], gens[1]), gauss_mod(c, false)));
                // conjugate: swap the holomorphic and antiholomorphic halves
                let mut bar: Vec<usize> = gens.iter().map(|&g| if g < n { g + n } else { g - n }).collect();
                let neg = sort_sign(&mut bar).expect("distinct generators");
                let cb = gauss_mod(c, true);
                dgen[n + k].push(((bar[0], bar[1]), if neg { (P - cb) % P } else { cb }));
            }
        }
        Oracle { n, dgen }
    }

    fn d_list(&self, list: &[usize]) -> Vec<(Vec<usize>, u64)> {
        let mut out = Vec::new();
        for (pos, &g) in list.iter().enumerate() {
            for &((a, b), c) in &self.dgen[g] {
                let mut l: Vec<usize> = list[..pos].to_vec();
                l.push(a);
                l.push(b);
                l.extend_from_slice(&list[pos + 1..]);
                let Some(neg) = sort_sign(&mut l) else { continue };
                let neg = neg ^ (pos % 2 == 1);
                out.push((l, if neg { (P - c) % P } else { c }));
            }
        }
        out
    }

    fn bidegree(&self, l: &[usize]) -> (usize, usize) {
        let p = l.iter().filter(|&&g| g < self.n).count();
        (p, l.len() - p)
    }

    /// Rank of `d` (or of its `(0,1)`-shift when `delbar`) from `source` to `target`.
    fn rank(&self, source: &[Vec<usize>], target: &[Vec<usize>], delbar: bool) -> usize {
        if source.is_empty() || target.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<u64>> = source
            .iter()
            .map(|s| {
                let mut row = vec![0u64; target.len()];
                let (p, q) = self.bidegree(s);
                for (l, c) in self.d_list(s) {
                    if delbar && self.bidegree(&l) != (p, q + 1) {
                        continue;
                    }
                    let idx = target.iter().position(|t| *t == l).expect("target basis");
                    row[idx] = (row[idx] + c) % P;
                }
                row
            })
            .collect();
        rank_mod(rows)
    }

    pub fn betti(&self) -> Vec<usize> {
        let total = 2 * self.n;
        let bases: Vec<Vec<Vec<usize>>> = (0..=total + 1).map(|k| subsets(total, k)).collect();
        let ranks: Vec<usize> = (0..=total).map(|k| self.rank(&bases[k], &bases[k + 1], false)).collect();
        (0..=total).map(|k| bases[k].len() - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 }).collect()
    }

    fn bigraded(&self, p: usize, q: usize) -> Vec<Vec<usize>> {
        subsets(2 * self.n, p + q).into_iter().filter(|l| self.bidegree(l) == (p, q)).collect()
    }

    /// `table[p][q] = h^{p,q}`.
    pub fn hodge(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut t = vec![vec![0; n + 1]; n + 1];
        for (p, row) in t.iter_mut().enumerate() {
            for (q, h) in row.iter_mut().enumerate() {
                let here = self.bigraded(p, q);
                let out = self.rank(&here, &self.bigraded(p, q + 1), true);
                let inc = if q > 0 { self.rank(&self.bigraded(p, q - 1), &here, true) } else { 0 };
                *h = here.len() - out - inc;
            }
        }
        t
    }

    /// Number of closed forms in the span of `φ^1..φ^n`.
    pub fn closed_holomorphic_one_forms(&self) -> usize {
        let src: Vec<Vec<usize>> = (0..self.n).map(|g| vec![g]).collect();
        self.n - self.rank(&src, &subsets(2 * self.n, 2), false)
    }
}
