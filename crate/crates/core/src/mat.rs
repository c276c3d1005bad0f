//! 3x3 matrices over `F_q`: group arithmetic, characteristic and minimal
//! polynomials, Jordan-type classification, projective normalisation and
//! conjugacy signatures.
//!
//! A matrix packs into a 36-bit code, nine 4-bit entries in row-major order
//! with entry `(0, 0)` in the most significant nibble, so numeric order of
//! codes is lexicographic order of entries. The vertex tables in
//! [`crate::pgl`] are keyed by this code.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

pub type Vec3 = [FieldElem; 3];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mat3(pub [FieldElem; 9]);

impl Mat3 {
    pub fn zero() -> Mat3 {
        Mat3([FieldElem::ZERO; 9])
    }

    pub fn identity() -> Mat3 {
        Mat3::scalar(FieldElem::ONE)
    }

    pub fn scalar(c: FieldElem) -> Mat3 {
        Mat3::diag(c, c, c)
    }

    pub fn diag(a: FieldElem, b: FieldElem, c: FieldElem) -> Mat3 {
        let z = FieldElem::ZERO;
        Mat3([a, z, z, z, b, z, z, z, c])
    }

    /// Matrix from entry codes in row-major order.
    pub fn from_codes(codes: [u8; 9]) -> Mat3 {
        Mat3(codes.map(FieldElem::from_code))
    }

    pub fn from_columns(c0: Vec3, c1: Vec3, c2: Vec3) -> Mat3 {
        Mat3([c0[0], c1[0], c2[0], c0[1], c1[1], c2[1], c0[2], c1[2], c2[2]])
    }

    /// `diag(a, C)` with `a` in the top-left corner.
    pub fn block_diag(a: FieldElem, c: &Mat2) -> Mat3 {
        let z = FieldElem::ZERO;
        let m = c.0;
        Mat3([a, z, z, z, m[0], m[1], z, m[2], m[3]])
    }

    /// `diag(C, a)` with `a` in the bottom-right corner.
    pub fn block_diag_low(c: &Mat2, a: FieldElem) -> Mat3 {
        let z = FieldElem::ZERO;
        let m = c.0;
        Mat3([m[0], m[1], z, m[2], m[3], z, z, z, a])
    }

    /// The elementary matrix with a single 1 at `(i, j)`.
    pub fn unit(i: usize, j: usize) -> Mat3 {
        let mut m = Mat3::zero();
        m.0[3 * i + j] = FieldElem::ONE;
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.0[3 * i + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.0[3 * i + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec3 {
        [self.get(0, j), self.get(1, j), self.get(2, j)]
    }

    pub fn row(&self, i: usize) -> Vec3 {
        [self.get(i, 0), self.get(i, 1), self.get(i, 2)]
    }

    pub fn transpose(&self) -> Mat3 {
        let m = self.0;
        Mat3([m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]])
    }

    pub fn pack(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, e| (acc << 4) | e.code() as u64)
    }

    pub fn unpack(code: u64) -> Mat3 {
        let mut m = [FieldElem::ZERO; 9];
        for (i, e) in m.iter_mut().enumerate() {
            *e = FieldElem::from_code(((code >> (4 * (8 - i))) & 0xf) as u8);
        }
        Mat3(m)
    }

    /// Mixed-radix index `sum e_i q^(8-i)` in `[0, q^9)`; monotone in the
    /// packed code for fixed `q`.
    pub fn radix_index(&self, q: u32) -> u64 {
        self.0.iter().fold(0u64, |acc, e| acc * q as u64 + e.code() as u64)
    }

    pub fn from_radix_index(mut idx: u64, q: u32) -> Mat3 {
        let mut m = [FieldElem::ZERO; 9];
        for e in m.iter_mut().rev() {
            *e = FieldElem::from_code((idx % q as u64) as u8);
            idx /= q as u64;
        }
        Mat3(m)
    }

    pub fn mul(&self, rhs: &Mat3, f: &Field) -> Mat3 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [FieldElem::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = f.mul(a[3 * i], b[j]);
                acc = f.add(acc, f.mul(a[3 * i + 1], b[3 + j]));
                acc = f.add(acc, f.mul(a[3 * i + 2], b[6 + j]));
                out[3 * i + j] = acc;
            }
        }
        Mat3(out)
    }

    pub fn add(&self, rhs: &Mat3, f: &Field) -> Mat3 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o = f.add(*o, r);
        }
        Mat3(out)
    }

    pub fn sub(&self, rhs: &Mat3, f: &Field) -> Mat3 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o = f.sub(*o, r);
        }
        Mat3(out)
    }

    pub fn scale(&self, c: FieldElem, f: &Field) -> Mat3 {
        Mat3(self.0.map(|e| f.mul(c, e)))
    }

    /// `A - cI`.
    pub fn shift(&self, c: FieldElem, f: &Field) -> Mat3 {
        let mut out = *self;
        for i in 0..3 {
            out.0[4 * i] = f.sub(out.0[4 * i], c);
        }
        out
    }

    pub fn apply(&self, v: &Vec3, f: &Field) -> Vec3 {
        let mut out = [FieldElem::ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = FieldElem::ZERO;
            for (j, &x) in v.iter().enumerate() {
                acc = f.add(acc, f.mul(self.get(i, j), x));
            }
            *o = acc;
        }
        out
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        let m = &self.0;
        let minor = |a: usize, b: usize, c: usize, d: usize| f.sub(f.mul(m[a], m[d]), f.mul(m[b], m[c]));
        let t0 = f.mul(m[0], minor(4, 5, 7, 8));
        let t1 = f.mul(m[1], minor(3, 5, 6, 8));
        let t2 = f.mul(m[2], minor(3, 4, 6, 7));
        f.add(f.sub(t0, t1), t2)
    }

    pub fn trace(&self, f: &Field) -> FieldElem {
        f.add(f.add(self.0[0], self.0[4]), self.0[8])
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        !self.det(f).is_zero()
    }

    /// Inverse through the adjugate.
    pub fn inv(&self, f: &Field) -> Result<Mat3> {
        let d = self.det(f);
        if d.is_zero() {
            return Err(Error::Singular);
        }
        let di = f.inv_nonzero(d);
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            f.sub(f.mul(m[3 * r0 + c0], m[3 * r1 + c1]), f.mul(m[3 * r0 + c1], m[3 * r1 + c0]))
        };
        let mut out = [FieldElem::ZERO; 9];
        for i in 0..3 {
            for j in 0..3 {
                // adj[i][j] = (-1)^(i+j) * minor(j, i)
                let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                let mut c = cof(rows[0], rows[1], cols[0], cols[1]);
                if (i + j) % 2 == 1 {
                    c = f.neg(c);
                }
                out[3 * i + j] = f.mul(c, di);
            }
        }
        Ok(Mat3(out))
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Mat3 {
        let mut base = *self;
        let mut acc = Mat3::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    /// `g A g^-1`.
    pub fn conjugate_by(&self, g: &Mat3, f: &Field) -> Result<Mat3> {
        Ok(g.mul(self, f).mul(&g.inv(f)?, f))
    }

    /// The scalar `c` if `self = cI`.
    pub fn scalar_value(&self) -> Option<FieldElem> {
        let m = &self.0;
        let z = FieldElem::ZERO;
        let off = [1, 2, 3, 5, 6, 7].iter().all(|&i| m[i] == z);
        (off && m[0] == m[4] && m[4] == m[8]).then_some(m[0])
    }

    pub fn is_scalar(&self) -> bool {
        self.scalar_value().is_some()
    }

    /// Whether `self = c * other` for some nonzero `c`.
    pub fn projectively_equal(&self, other: &Mat3, f: &Field) -> bool {
        self.canonical_projective_rep(f) == other.canonical_projective_rep(f)
    }

    pub fn rank(&self, f: &Field) -> usize {
        let mut rows = vec![self.row(0), self.row(1), self.row(2)];
        rref(&mut rows, f)
    }

    pub fn char_poly(&self, f: &Field) -> CubicPoly {
        let m = &self.0;
        let minor = |a: usize, b: usize, c: usize, d: usize| f.sub(f.mul(m[a], m[d]), f.mul(m[b], m[c]));
        let e2 = f.add(f.add(minor(0, 1, 3, 4), minor(0, 2, 6, 8)), minor(4, 5, 7, 8));
        CubicPoly {
            c0: f.neg(self.det(f)),
            c1: e2,
            c2: f.neg(self.trace(f)),
        }
    }

    pub fn min_poly(&self, f: &Field) -> MinPoly {
        if let Some(c) = self.scalar_value() {
            return MinPoly::linear(f.neg(c));
        }
        let sq = self.mul(self, f);
        // Solve A^2 = alpha A + beta I; I and A are independent here.
        let m = &self.0;
        let alpha = if let Some(i) = [1, 2, 3, 5, 6, 7].into_iter().find(|&i| !m[i].is_zero()) {
            f.mul(sq.0[i], f.inv_nonzero(m[i]))
        } else {
            let (i, j) = [(0, 4), (0, 8), (4, 8)]
                .into_iter()
                .find(|&(i, j)| m[i] != m[j])
                .expect("nonscalar diagonal matrix has two distinct diagonal entries");
            f.mul(f.sub(sq.0[i], sq.0[j]), f.inv_nonzero(f.sub(m[i], m[j])))
        };
        let rest = sq.sub(&self.scale(alpha, f), f);
        if let Some(beta) = rest.scalar_value() {
            return MinPoly {
                degree: 2,
                coeffs: [f.neg(beta), f.neg(alpha), FieldElem::ZERO],
            };
        }
        let cp = self.char_poly(f);
        MinPoly {
            degree: 3,
            coeffs: [cp.c0, cp.c1, cp.c2],
        }
    }

    pub fn jordan_type(&self, f: &Field) -> Result<JordanType> {
        if !self.is_invertible(f) {
            return Err(Error::Singular);
        }
        let roots = self.char_poly(f).roots(f);
        Ok(match roots.as_slice() {
            [] => JordanType::Irreducible,
            [(_, 1)] => JordanType::LP,
            [(_, 1), (_, 1), (_, 1)] => JordanType::LLL,
            [(a, 2), (_, 1)] | [(_, 1), (a, 2)] => {
                if self.shift(*a, f).rank(f) == 1 {
                    JordanType::Pivot
                } else {
                    JordanType::LLP
                }
            }
            [(a, 3)] => {
                let n = self.shift(*a, f);
                if n == Mat3::zero() {
                    JordanType::Central
                } else if n.mul(&n, f) == Mat3::zero() {
                    JordanType::JordanPivot
                } else {
                    JordanType::NPJ
                }
            }
            other => return Err(Error::Internal(format!("impossible root pattern {other:?}"))),
        })
    }

    pub fn is_decomposable(&self, f: &Field) -> Result<bool> {
        Ok(self.jordan_type(f)?.is_decomposable())
    }

    /// Least `k >= 1` with `A^k` scalar.
    pub fn projective_order(&self, f: &Field) -> u64 {
        let mut p = *self;
        let mut k = 1;
        while !p.is_scalar() {
            p = p.mul(self, f);
            k += 1;
        }
        k
    }

    /// Least `k >= 1` with `A^k = I`.
    pub fn mult_order(&self, f: &Field) -> u64 {
        let k = self.projective_order(f);
        let c = self.pow(k, f).scalar_value().expect("A^k scalar");
        k * f.mult_order(c).expect("invertible matrix has nonzero scalar power")
    }

    /// The scalar multiple whose first nonzero row-major entry is 1.
    pub fn canonical_projective_rep(&self, f: &Field) -> Mat3 {
        match self.0.iter().find(|e| !e.is_zero()) {
            Some(&lead) if lead != FieldElem::ONE => self.scale(f.inv_nonzero(lead), f),
            _ => *self,
        }
    }

    pub fn class_signature(&self, f: &Field) -> ClassSignature {
        let cp = self.char_poly(f);
        let mp = self.min_poly(f);
        f.nonzero()
            .map(|c| ClassSignature {
                char_poly: cp.scaled(c, f),
                min_poly: mp.scaled(c, f),
            })
            .min()
            .expect("F_q* is nonempty")
    }

    /// GL-conjugacy signature: the unscaled (char, min) pair.
    pub fn gl_class_signature(&self, f: &Field) -> ClassSignature {
        ClassSignature {
            char_poly: self.char_poly(f),
            min_poly: self.min_poly(f),
        }
    }

    pub fn eigen_structure(&self, f: &Field) -> EigenStructure {
        let roots = self.char_poly(f).roots(f);
        let mut eigen = Vec::new();
        let mut generalized = Vec::new();
        for &(a, mult) in &roots {
            let n = self.shift(a, f);
            eigen.push((a, Subspace::kernel(&n, f)));
            generalized.push((a, Subspace::kernel(&n.pow(mult as u64, f), f)));
        }
        EigenStructure {
            eigen,
            generalized,
            invariant: invariant_subspaces(self, f),
        }
    }

    /// A conjugator `P` and `(a, C)` with `P^-1 A P = diag(a, C)`, when `A` is
    /// decomposable. The split puts a simple eigenvalue in the corner when
    /// one exists.
    pub fn block_decomposition(&self, f: &Field) -> Result<Option<BlockDecomposition>> {
        let ty = self.jordan_type(f)?;
        if !ty.is_decomposable() {
            return Ok(None);
        }
        let roots = self.char_poly(f).roots(f);
        let (line, plane) = match ty {
            JordanType::JordanPivot => {
                let (a, _) = roots[0];
                let n = self.shift(a, f);
                let ker = Subspace::kernel(&n, f);
                let img = Subspace::column_space(&n, f);
                let v = ker
                    .basis()
                    .into_iter()
                    .find(|v| !img.contains_vector(v, f))
                    .ok_or_else(|| Error::Internal("kernel equals image".into()))?;
                let w = standard_basis()
                    .into_iter()
                    .find(|w| !ker.contains_vector(w, f))
                    .ok_or_else(|| Error::Internal("nilpotent part vanishes".into()))?;
                (v, [n.apply(&w, f), w])
            }
            _ => {
                let (a, _) = *roots
                    .iter()
                    .find(|(_, m)| *m == 1)
                    .ok_or_else(|| Error::Internal("no simple eigenvalue".into()))?;
                let n = self.shift(a, f);
                let line = Subspace::kernel(&n, f).basis()[0];
                // The complementary invariant plane is ker g(A) for the cofactor
                // g = charpoly / (t - a); it equals the image of (A - aI).
                let plane = Subspace::column_space(&n, f);
                let b = plane.basis();
                (line, [b[0], b[1]])
            }
        };
        let p = Mat3::from_columns(line, plane[0], plane[1]);
        let inner = p.inv(f)?.mul(self, f).mul(&p, f);
        let c = Mat2([inner.get(1, 1), inner.get(1, 2), inner.get(2, 1), inner.get(2, 2)]);
        Ok(Some(BlockDecomposition {
            conjugator: p,
            corner: inner.get(0, 0),
            block: c,
        }))
    }

    pub fn companion(poly: &CubicPoly, f: &Field) -> Mat3 {
        let z = FieldElem::ZERO;
        let o = FieldElem::ONE;
        Mat3([z, z, f.neg(poly.c0), o, z, f.neg(poly.c1), z, o, f.neg(poly.c2)])
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:09x}", self.pack())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub conjugator: Mat3,
    pub corner: FieldElem,
    pub block: Mat2,
}

/// Row-major 2x2 matrix.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mat2(pub [FieldElem; 4]);

impl Mat2 {
    pub fn identity() -> Mat2 {
        Mat2([FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE])
    }

    pub fn scalar(c: FieldElem) -> Mat2 {
        Mat2([c, FieldElem::ZERO, FieldElem::ZERO, c])
    }

    /// Companion matrix of `t^2 + c1 t + c0`.
    pub fn companion(c0: FieldElem, c1: FieldElem, f: &Field) -> Mat2 {
        Mat2([FieldElem::ZERO, f.neg(c0), FieldElem::ONE, f.neg(c1)])
    }

    pub fn mul(&self, rhs: &Mat2, f: &Field) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let dot = |x: FieldElem, y: FieldElem, z: FieldElem, w: FieldElem| f.add(f.mul(x, y), f.mul(z, w));
        Mat2([
            dot(a[0], b[0], a[1], b[2]),
            dot(a[0], b[1], a[1], b[3]),
            dot(a[2], b[0], a[3], b[2]),
            dot(a[2], b[1], a[3], b[3]),
        ])
    }

    pub fn add(&self, rhs: &Mat2, f: &Field) -> Mat2 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o = f.add(*o, r);
        }
        Mat2(out)
    }

    pub fn scale(&self, c: FieldElem, f: &Field) -> Mat2 {
        Mat2(self.0.map(|e| f.mul(c, e)))
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        f.sub(f.mul(self.0[0], self.0[3]), f.mul(self.0[1], self.0[2]))
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.0[2 * i + j]
    }

    pub fn trace(&self, f: &Field) -> FieldElem {
        f.add(self.0[0], self.0[3])
    }

    pub fn inv(&self, f: &Field) -> Result<Mat2> {
        let d = self.det(f);
        if d.is_zero() {
            return Err(Error::Singular);
        }
        let di = f.inv(d)?;
        let m = &self.0;
        Ok(Mat2([m[3], f.neg(m[1]), f.neg(m[2]), m[0]]).scale(di, f))
    }

    /// Roots in `F_q` of the characteristic polynomial, with multiplicity.
    pub fn eigenvalues(&self, f: &Field) -> Vec<FieldElem> {
        let (t, d) = (self.trace(f), self.det(f));
        let mut out = Vec::new();
        for x in f.elements() {
            // x^2 - t x + d
            let v = f.add(f.sub(f.mul(x, x), f.mul(t, x)), d);
            if v.is_zero() {
                out.push(x);
            }
        }
        if out.len() == 1 {
            out.push(out[0]);
        }
        out
    }

    pub fn apply(&self, v: [FieldElem; 2], f: &Field) -> [FieldElem; 2] {
        let m = &self.0;
        [
            f.add(f.mul(m[0], v[0]), f.mul(m[1], v[1])),
            f.add(f.mul(m[2], v[0]), f.mul(m[3], v[1])),
        ]
    }

    pub fn from_columns(c0: [FieldElem; 2], c1: [FieldElem; 2]) -> Mat2 {
        Mat2([c0[0], c1[0], c0[1], c1[1]])
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Mat2 {
        let mut base = *self;
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    pub fn scalar_value(&self) -> Option<FieldElem> {
        let m = &self.0;
        (m[1].is_zero() && m[2].is_zero() && m[0] == m[3]).then_some(m[0])
    }

    /// Least `k >= 1` with `C^k = I`; `None` for singular input.
    pub fn mult_order(&self, f: &Field) -> Option<u64> {
        if self.det(f).is_zero() {
            return None;
        }
        let mut p = *self;
        let mut k = 1;
        while p != Mat2::identity() {
            p = p.mul(self, f);
            k += 1;
        }
        Some(k)
    }

    /// Every invertible 2x2 matrix over `f`, in code order.
    pub fn all_invertible(f: &Field) -> impl Iterator<Item = Mat2> + '_ {
        let q = f.q() as u64;
        (0..q.pow(4)).filter_map(move |mut idx| {
            let mut m = [FieldElem::ZERO; 4];
            for e in m.iter_mut().rev() {
                *e = FieldElem::from_code((idx % q) as u8);
                idx /= q;
            }
            let m = Mat2(m);
            (!m.det(f).is_zero()).then_some(m)
        })
    }
}

/// Monic cubic `t^3 + c2 t^2 + c1 t + c0`; the characteristic polynomial is
/// `det(tI - A)`, so `c0 = -det A`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct CubicPoly {
    pub c0: FieldElem,
    pub c1: FieldElem,
    pub c2: FieldElem,
}

impl CubicPoly {
    pub fn eval(&self, t: FieldElem, f: &Field) -> FieldElem {
        let mut acc = FieldElem::ONE;
        acc = f.add(f.mul(acc, t), self.c2);
        acc = f.add(f.mul(acc, t), self.c1);
        f.add(f.mul(acc, t), self.c0)
    }

    /// Evaluates the polynomial at a matrix argument.
    pub fn eval_matrix(&self, a: &Mat3, f: &Field) -> Mat3 {
        let mut acc = Mat3::identity();
        for c in [self.c2, self.c1, self.c0] {
            acc = acc.mul(a, f).add(&Mat3::scalar(c), f);
        }
        acc
    }

    /// Distinct roots in `F_q` with multiplicity, ascending by code.
    pub fn roots(&self, f: &Field) -> Vec<(FieldElem, u8)> {
        let mut coeffs = vec![self.c0, self.c1, self.c2, FieldElem::ONE];
        let mut out: Vec<(FieldElem, u8)> = Vec::new();
        for t in f.elements() {
            while coeffs.len() > 1 && eval_poly(&coeffs, t, f).is_zero() {
                coeffs = divide_linear(&coeffs, t, f);
                match out.last_mut() {
                    Some((r, m)) if *r == t => *m += 1,
                    _ => out.push((t, 1)),
                }
            }
        }
        out
    }

    /// Characteristic polynomial of `cA` given that of `A`.
    pub fn scaled(&self, c: FieldElem, f: &Field) -> CubicPoly {
        let c2 = f.mul(c, c);
        CubicPoly {
            c0: f.mul(self.c0, f.mul(c2, c)),
            c1: f.mul(self.c1, c2),
            c2: f.mul(self.c2, c),
        }
    }

    pub fn is_irreducible(&self, f: &Field) -> bool {
        self.roots(f).is_empty()
    }
}

/// Monic polynomial of degree 1..=3, lower coefficients stored constant-first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct MinPoly {
    pub degree: u8,
    pub coeffs: [FieldElem; 3],
}

impl MinPoly {
    fn linear(c0: FieldElem) -> MinPoly {
        MinPoly {
            degree: 1,
            coeffs: [c0, FieldElem::ZERO, FieldElem::ZERO],
        }
    }

    /// Coefficients including the leading 1, constant first.
    pub fn full_coeffs(&self) -> Vec<FieldElem> {
        let mut v = self.coeffs[..self.degree as usize].to_vec();
        v.push(FieldElem::ONE);
        v
    }

    pub fn eval_matrix(&self, a: &Mat3, f: &Field) -> Mat3 {
        let mut acc = Mat3::identity();
        for &c in self.coeffs[..self.degree as usize].iter().rev() {
            acc = acc.mul(a, f).add(&Mat3::scalar(c), f);
        }
        acc
    }

    pub fn scaled(&self, c: FieldElem, f: &Field) -> MinPoly {
        let d = self.degree as usize;
        let mut out = *self;
        for i in 0..d {
            out.coeffs[i] = f.mul(self.coeffs[i], f.pow(c, (d - i) as u64));
        }
        out
    }

    pub fn is_irreducible(&self, f: &Field) -> bool {
        let c = self.full_coeffs();
        self.degree == 1 || f.elements().all(|t| !eval_poly(&c, t, f).is_zero())
    }

    /// Whether this polynomial divides `cubic`.
    pub fn divides(&self, cubic: &CubicPoly, f: &Field) -> bool {
        let mut r = vec![cubic.c0, cubic.c1, cubic.c2, FieldElem::ONE];
        let d = self.degree as usize;
        let den = self.full_coeffs();
        while r.len() > d {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - d;
            for (i, &c) in den.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(lead, c));
            }
            r.pop();
        }
        r.iter().all(|c| c.is_zero())
    }
}

fn eval_poly(coeffs: &[FieldElem], t: FieldElem, f: &Field) -> FieldElem {
    coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, t), c))
}

/// Quotient of a monic polynomial by `(t - r)`, assuming `r` is a root.
fn divide_linear(coeffs: &[FieldElem], r: FieldElem, f: &Field) -> Vec<FieldElem> {
    let n = coeffs.len() - 1;
    let mut out = vec![FieldElem::ZERO; n];
    let mut carry = FieldElem::ZERO;
    for i in (0..n).rev() {
        carry = f.add(coeffs[i + 1], f.mul(carry, r));
        out[i] = carry;
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum JordanType {
    Central,
    Pivot,
    LLL,
    Irreducible,
    LP,
    JordanPivot,
    LLP,
    NPJ,
}

impl JordanType {
    pub const ALL: [JordanType; 8] = [
        JordanType::Central,
        JordanType::Pivot,
        JordanType::LLL,
        JordanType::Irreducible,
        JordanType::LP,
        JordanType::JordanPivot,
        JordanType::LLP,
        JordanType::NPJ,
    ];

    pub fn is_decomposable(self) -> bool {
        matches!(
            self,
            JordanType::LLL | JordanType::Pivot | JordanType::LP | JordanType::LLP | JordanType::JordanPivot
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            JordanType::Central => "Central",
            JordanType::Pivot => "Pivot",
            JordanType::LLL => "LLL",
            JordanType::Irreducible => "Irreducible",
            JordanType::LP => "LP",
            JordanType::JordanPivot => "JordanPivot",
            JordanType::LLP => "LLP",
            JordanType::NPJ => "NPJ",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Scalar-minimised (characteristic, minimal) polynomial pair. For 3x3
/// matrices this determines the projective conjugacy class.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct ClassSignature {
    pub char_poly: CubicPoly,
    pub min_poly: MinPoly,
}

impl ClassSignature {
    /// Injective 32-bit key: 3 char coefficients, degree, 3 min coefficients.
    pub fn key(&self) -> u32 {
        let c = &self.char_poly;
        let m = &self.min_poly;
        [c.c0, c.c1, c.c2]
            .iter()
            .map(|e| e.code() as u32)
            .chain(std::iter::once(m.degree as u32))
            .chain(m.coeffs.iter().map(|e| e.code() as u32))
            .fold(0u32, |acc, x| (acc << 4) | x)
    }
}

/// A subspace of `F_q^3` stored as its reduced row-echelon basis, so that
/// equality of subspaces is equality of values.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subspace {
    dim: u8,
    rows: [Vec3; 3],
}

impl Subspace {
    pub fn span(vectors: &[Vec3], f: &Field) -> Subspace {
        let mut rows = vectors.to_vec();
        let r = rref(&mut rows, f);
        let mut out = [[FieldElem::ZERO; 3]; 3];
        out[..r].copy_from_slice(&rows[..r]);
        Subspace { dim: r as u8, rows: out }
    }

    /// Null space `{v : M v = 0}`.
    pub fn kernel(m: &Mat3, f: &Field) -> Subspace {
        let mut rows = vec![m.row(0), m.row(1), m.row(2)];
        let r = rref(&mut rows, f);
        let mut pivots = Vec::new();
        for row in rows.iter().take(r) {
            pivots.push(row.iter().position(|e| !e.is_zero()).expect("nonzero rref row"));
        }
        let mut basis = Vec::new();
        for free in (0..3).filter(|c| !pivots.contains(c)) {
            let mut v = [FieldElem::ZERO; 3];
            v[free] = FieldElem::ONE;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = f.neg(row[free]);
            }
            basis.push(v);
        }
        Subspace::span(&basis, f)
    }

    pub fn column_space(m: &Mat3, f: &Field) -> Subspace {
        Subspace::span(&[m.column(0), m.column(1), m.column(2)], f)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn basis(&self) -> Vec<Vec3> {
        self.rows[..self.dim as usize].to_vec()
    }

    pub fn contains_vector(&self, v: &Vec3, f: &Field) -> bool {
        let mut rows = self.basis();
        rows.push(*v);
        rref(&mut rows, f) == self.dim as usize
    }

    pub fn contains(&self, other: &Subspace, f: &Field) -> bool {
        other.basis().iter().all(|v| self.contains_vector(v, f))
    }

    pub fn join(&self, other: &Subspace, f: &Field) -> Subspace {
        let mut v = self.basis();
        v.extend(other.basis());
        Subspace::span(&v, f)
    }

    pub fn is_invariant_under(&self, a: &Mat3, f: &Field) -> bool {
        self.basis().iter().all(|v| self.contains_vector(&a.apply(v, f), f))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis()
            .iter()
            .map(|r| format!("({},{},{})", r[0], r[1], r[2]))
            .collect();
        write!(f, "span[{}]", rows.join(","))
    }
}

pub fn standard_basis() -> [Vec3; 3] {
    let z = FieldElem::ZERO;
    let o = FieldElem::ONE;
    [[o, z, z], [z, o, z], [z, z, o]]
}

/// Eigenspaces, generalized eigenspaces and the invariant lines/planes of a
/// matrix. Subspaces are in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenStructure {
    pub eigen: Vec<(FieldElem, Subspace)>,
    pub generalized: Vec<(FieldElem, Subspace)>,
    /// All invariant lines and planes, sorted.
    pub invariant: Vec<Subspace>,
}

impl EigenStructure {
    pub fn eigenspaces(&self) -> Vec<Subspace> {
        let mut v: Vec<Subspace> = self.eigen.iter().map(|(_, s)| *s).collect();
        v.sort();
        v
    }

    pub fn generalized_eigenspaces(&self) -> Vec<Subspace> {
        let mut v: Vec<Subspace> = self.generalized.iter().map(|(_, s)| *s).collect();
        v.sort();
        v
    }

    pub fn eigenspace_of(&self, a: FieldElem) -> Option<Subspace> {
        self.eigen.iter().find(|(x, _)| *x == a).map(|(_, s)| *s)
    }

    /// Eigenspaces of a given dimension.
    pub fn eigenspaces_of_dim(&self, d: usize) -> Vec<Subspace> {
        self.eigenspaces().into_iter().filter(|s| s.dim() == d).collect()
    }
}

/// Gaussian elimination to reduced row-echelon form in place; returns the
/// rank and leaves zero rows at the end.
pub fn rref(rows: &mut Vec<Vec3>, f: &Field) -> usize {
    let mut r = 0;
    for c in 0..3 {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv_nonzero(rows[r][c]);
        rows[r] = rows[r].map(|e| f.mul(e, inv));
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c];
                let pr = rows[r];
                for j in 0..3 {
                    rows[i][j] = f.sub(rows[i][j], f.mul(factor, pr[j]));
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Every one-dimensional subspace of `F_q^3` (first nonzero coordinate 1).
pub fn all_lines(f: &Field) -> Vec<Vec3> {
    let q = f.q() as u64;
    (1..q.pow(3))
        .map(|mut idx| {
            let mut v = [FieldElem::ZERO; 3];
            for e in v.iter_mut().rev() {
                *e = FieldElem::from_code((idx % q) as u8);
                idx /= q;
            }
            v
        })
        .filter(|v| v.iter().find(|e| !e.is_zero()) == Some(&FieldElem::ONE))
        .collect()
}

/// Invariant lines and planes of `a`, sorted. A plane `ker(phi)` is
/// invariant exactly when `phi` is a left eigenvector.
pub fn invariant_subspaces(a: &Mat3, f: &Field) -> Vec<Subspace> {
    let at = a.transpose();
    let mut out = Vec::new();
    for v in all_lines(f) {
        let line = Subspace::span(&[v], f);
        if line.contains_vector(&a.apply(&v, f), f) {
            out.push(line);
        }
        if line.contains_vector(&at.apply(&v, f), f) {
            let z = FieldElem::ZERO;
            let phi = Mat3([v[0], v[1], v[2], z, z, z, z, z, z]);
            out.push(Subspace::kernel(&phi, f));
        }
    }
    out.sort();
    out
}
