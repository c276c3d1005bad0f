//! Constructive path and factorization certificates, and the explicit
//! matrix pairs whose graph distance realises the main-component diameter.
//!
//! Every construction here returns a checkable object. A [`PathCertificate`]
//! lists matrices together with, for each consecutive pair, an exponent `k`
//! and scalar `c` such that one matrix is `c` times the `k`-th power of the
//! other. Verification is independent of how the path was found.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{classify_prime_power, factorize, is_prime, Field, FieldElem};
use crate::graph::PowerGraph;
use crate::mat::{JordanType, Mat2, Mat3, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `next = c * current^k`.
    Forward,
    /// `current = c * next^k`.
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateStep {
    pub exponent: u64,
    pub scalar: FieldElem,
    pub direction: Direction,
}

impl CertificateStep {
    fn holds(&self, cur: &Mat3, next: &Mat3, f: &Field) -> bool {
        let (base, target) = match self.direction {
            Direction::Forward => (cur, next),
            Direction::Backward => (next, cur),
        };
        !self.scalar.is_zero() && base.pow(self.exponent, f).scale(self.scalar, f) == *target
    }
}

/// Finds `(k, c)` with `b = c a^k` or `a = c b^k`, smallest `k` first.
pub fn power_witness(a: &Mat3, b: &Mat3, f: &Field) -> Option<CertificateStep> {
    let search = |base: &Mat3, target: &Mat3, direction| {
        let order = base.mult_order(f);
        let mut p = *base;
        for k in 1..=order {
            if let Some(c) = scalar_ratio(target, &p, f) {
                return Some(CertificateStep {
                    exponent: k,
                    scalar: c,
                    direction,
                });
            }
            p = p.mul(base, f);
        }
        None
    };
    search(a, b, Direction::Forward).or_else(|| search(b, a, Direction::Backward))
}

/// `c` with `target = c * m`, if one exists.
fn scalar_ratio(target: &Mat3, m: &Mat3, f: &Field) -> Option<FieldElem> {
    let i = (0..9).find(|&i| !m.0[i].is_zero())?;
    let c = f.div(target.0[i], m.0[i]).ok()?;
    (!c.is_zero() && m.scale(c, f) == *target).then_some(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCertificate {
    pub q: u32,
    pub matrices: Vec<Mat3>,
    pub steps: Vec<CertificateStep>,
    /// Which branch of the construction produced the path.
    pub branch: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub failing_step: Option<usize>,
}

impl CertificateCheck {
    fn fail(step: usize) -> Self {
        CertificateCheck {
            valid: false,
            failing_step: Some(step),
        }
    }

    const OK: CertificateCheck = CertificateCheck {
        valid: true,
        failing_step: None,
    };
}

impl PathCertificate {
    /// Links a walk through the given matrices, dropping consecutive
    /// projective duplicates. Fails if some consecutive pair is not related
    /// by a power.
    pub fn through(path: &[Mat3], f: &Field, branch: Option<&str>) -> Result<PathCertificate> {
        let mut matrices: Vec<Mat3> = Vec::with_capacity(path.len());
        for m in path {
            if m.is_scalar() {
                return Err(Error::Internal(format!("scalar matrix {m} on a certificate path")));
            }
            if matrices.last().is_some_and(|l| l.projectively_equal(m, f)) {
                continue;
            }
            matrices.push(*m);
        }
        let mut steps = Vec::with_capacity(matrices.len().saturating_sub(1));
        for w in matrices.windows(2) {
            let step = power_witness(&w[0], &w[1], f)
                .ok_or_else(|| Error::Internal(format!("{} and {} are not power-related", w[0], w[1])))?;
            steps.push(step);
        }
        Ok(PathCertificate {
            q: f.q(),
            matrices,
            steps,
            branch: branch.map(str::to_string),
        })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> Mat3 {
        self.matrices[0]
    }

    pub fn end(&self) -> Mat3 {
        *self.matrices.last().unwrap()
    }

    /// Checks every step by multiplication.
    pub fn check_algebra(&self, f: &Field) -> CertificateCheck {
        if self.q != f.q() || self.matrices.is_empty() || self.steps.len() + 1 != self.matrices.len() {
            return CertificateCheck::fail(0);
        }
        for (i, step) in self.steps.iter().enumerate() {
            let (cur, next) = (&self.matrices[i], &self.matrices[i + 1]);
            if cur.is_scalar() || next.is_scalar() || cur.projectively_equal(next, f) || !step.holds(cur, next, f) {
                return CertificateCheck::fail(i);
            }
        }
        CertificateCheck::OK
    }
}

impl Serialize for PathCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Steps<'a>(&'a PathCertificate);
        impl Serialize for Steps<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let c = self.0;
                let mut seq = s.serialize_seq(Some(c.matrices.len()))?;
                for (i, m) in c.matrices.iter().enumerate() {
                    let step = i.checked_sub(1).map(|j| c.steps[j]);
                    seq.serialize_element(&StepJson {
                        matrix: format!("{:09x}", m.pack()),
                        exponent: step.map(|s| s.exponent),
                        scalar: step.map(|s| s.scalar.code()),
                        direction: step.map(|s| s.direction),
                    })?;
                }
                seq.end()
            }
        }
        #[derive(Serialize)]
        struct StepJson {
            matrix: String,
            exponent: Option<u64>,
            scalar: Option<u8>,
            direction: Option<Direction>,
        }
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("q", &self.q)?;
        map.serialize_entry("branch", &self.branch)?;
        map.serialize_entry("length", &self.len())?;
        map.serialize_entry("steps", &Steps(self))?;
        map.end()
    }
}

/// Re-checks the algebra of every step and confirms each consecutive pair
/// is an edge of `g`.
pub fn verify_certificate(g: &PowerGraph, cert: &PathCertificate) -> CertificateCheck {
    let f = g.field();
    if cert.q != f.q() {
        return CertificateCheck::fail(0);
    }
    let algebra = cert.check_algebra(f);
    if !algebra.valid {
        return algebra;
    }
    let ids: Vec<Option<u32>> = cert.matrices.iter().map(|m| g.id_of(m)).collect();
    if ids[0].is_none() {
        return CertificateCheck::fail(0);
    }
    for i in 0..cert.steps.len() {
        match (ids[i], ids[i + 1]) {
            (Some(u), Some(v)) if g.are_adjacent(u, v) => {}
            _ => return CertificateCheck::fail(i),
        }
    }
    CertificateCheck::OK
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Centralizer {
    /// Commutes with `diag(b, 1, b)`.
    S2,
    /// Commutes with `diag(b, b, 1)`.
    S3,
    /// Commutes with `I + E_{23}`.
    SJ,
}

impl Centralizer {
    pub fn name(self) -> &'static str {
        match self {
            Centralizer::S2 => "S2",
            Centralizer::S3 => "S3",
            Centralizer::SJ => "SJ",
        }
    }

    /// The matrix whose centralizer this is.
    pub fn defining_matrix(self, b: FieldElem, f: &Field) -> Mat3 {
        match self {
            Centralizer::S2 => Mat3::diag(b, FieldElem::ONE, b),
            Centralizer::S3 => Mat3::diag(b, b, FieldElem::ONE),
            Centralizer::SJ => Mat3::identity().add(&Mat3::unit(1, 2), f),
        }
    }

    /// The element `D` that commutes with both pivot frames and with the
    /// middle factor; `x` is a nonzero scalar other than 1.
    pub fn bridge(self, x: FieldElem, f: &Field) -> Mat3 {
        self.defining_matrix(x, f)
    }
}

/// Which part of the block partition `X = [[a, v^T], [w, B]]` drove the
/// factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorizationCase {
    SingularBlock,
    BlockDiagonal,
    ZeroTopRow,
    ZeroLeftColumn,
    NonzeroPairing,
    ZeroPairing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationTriple {
    #[serde(serialize_with = "hex_matrix")]
    pub x1: Mat3,
    #[serde(serialize_with = "hex_matrix")]
    pub x2: Mat3,
    #[serde(serialize_with = "hex_matrix")]
    pub x3: Mat3,
    pub branch: Centralizer,
    pub case: FactorizationCase,
}

fn hex_matrix<S: Serializer>(m: &Mat3, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{:09x}", m.pack()))
}

fn commutes(a: &Mat3, b: &Mat3, f: &Field) -> bool {
    a.mul(b, f) == b.mul(a, f)
}

impl FactorizationTriple {
    /// Product identity and centralizer memberships.
    pub fn holds(&self, x: &Mat3, b: FieldElem, f: &Field) -> bool {
        let s1 = Mat3::diag(FieldElem::ONE, b, b);
        self.x1.mul(&self.x2, f).mul(&self.x3, f) == *x
            && [self.x1, self.x2, self.x3].iter().all(|m| m.is_invertible(f))
            && commutes(&self.x1, &s1, f)
            && commutes(&self.x3, &s1, f)
            && commutes(&self.x2, &self.branch.defining_matrix(b, f), f)
    }
}

fn lift(m: &Mat2) -> Mat3 {
    Mat3::block_diag(FieldElem::ONE, m)
}

/// A vector independent of the nonzero vector `c`.
fn complement(c: [FieldElem; 2]) -> [FieldElem; 2] {
    if c[1].is_zero() {
        [FieldElem::ZERO, FieldElem::ONE]
    } else {
        [FieldElem::ONE, FieldElem::ZERO]
    }
}

/// Writes an invertible `X` as `X1 X2 X3` with `X1, X3` commuting with
/// `diag(1, b, b)` and `X2` in one of the centralizers of [`Centralizer`].
pub fn centralizer_factorization(x: &Mat3, b: FieldElem, f: &Field) -> Result<FactorizationTriple> {
    if b.is_zero() || b == FieldElem::ONE {
        return Err(Error::Precondition("b must differ from 0 and 1".into()));
    }
    if !x.is_invertible(f) {
        return Err(Error::Singular);
    }
    let (o, z) = (FieldElem::ONE, FieldElem::ZERO);
    let a = x.get(0, 0);
    let v = [x.get(0, 1), x.get(0, 2)];
    let w = [x.get(1, 0), x.get(2, 0)];
    let blk = Mat2([x.get(1, 1), x.get(1, 2), x.get(2, 1), x.get(2, 2)]);
    let is_zero = |u: [FieldElem; 2]| u[0].is_zero() && u[1].is_zero();
    let row_times = |u: [FieldElem; 2], m: &Mat2| {
        [
            f.add(f.mul(u[0], m.get(0, 0)), f.mul(u[1], m.get(1, 0))),
            f.add(f.mul(u[0], m.get(0, 1)), f.mul(u[1], m.get(1, 1))),
        ]
    };

    if blk.det(f).is_zero() {
        // Rank one: blk = col * row = B1 E11 B2.
        let idx = (0..4).find(|&i| !blk.0[i].is_zero()).ok_or(Error::Singular)?;
        let (i, j) = (idx / 2, idx % 2);
        let col = [blk.get(0, j), blk.get(1, j)];
        let pivot_inv = f.inv(blk.get(i, j))?;
        let row = [f.mul(blk.get(i, 0), pivot_inv), f.mul(blk.get(i, 1), pivot_inv)];
        let b1 = Mat2::from_columns(col, complement(col));
        let s = complement(row);
        let b2 = Mat2([row[0], row[1], s[0], s[1]]);
        let [xv, yv] = row_times(v, &b2.inv(f)?);
        let [cw, dw] = b1.inv(f)?.apply(w, f);
        let left = Mat3::identity().add(&Mat3::unit(1, 2).scale(f.div(cw, dw)?, f), f);
        let right = Mat3::identity().add(&Mat3::unit(2, 1).scale(f.div(xv, yv)?, f), f);
        let middle = Mat3([a, z, yv, z, o, z, dw, z, z]);
        return Ok(FactorizationTriple {
            x1: lift(&b1).mul(&left, f),
            x2: middle,
            x3: right.mul(&lift(&b2), f),
            branch: Centralizer::S2,
            case: FactorizationCase::SingularBlock,
        });
    }

    if is_zero(v) && is_zero(w) {
        return Ok(FactorizationTriple {
            x1: *x,
            x2: Mat3::identity(),
            x3: Mat3::identity(),
            branch: Centralizer::S2,
            case: FactorizationCase::BlockDiagonal,
        });
    }
    if is_zero(w) {
        let t = centralizer_factorization(&x.transpose(), b, f)?;
        return Ok(FactorizationTriple {
            x1: t.x3.transpose(),
            x2: t.x2.transpose(),
            x3: t.x1.transpose(),
            branch: t.branch,
            case: FactorizationCase::ZeroLeftColumn,
        });
    }

    // Y with B Y^-1 e1 = w, i.e. Y^-1 e1 = B^-1 w.
    let binv = blk.inv(f)?;
    let first = binv.apply(w, f);
    let y_inv = Mat2::from_columns(first, complement(first));
    let y = y_inv.inv(f)?;
    let outer_left = lift(&blk.mul(&y_inv, f));
    let outer_right = lift(&y);
    if is_zero(v) {
        return Ok(FactorizationTriple {
            x1: outer_left,
            x2: Mat3([a, z, z, o, o, z, z, z, o]),
            x3: outer_right,
            branch: Centralizer::S3,
            case: FactorizationCase::ZeroTopRow,
        });
    }
    let [xv, yv] = row_times(v, &y_inv);
    if xv.is_zero() {
        return Ok(FactorizationTriple {
            x1: outer_left,
            x2: Mat3([a, z, yv, o, o, z, z, z, o]),
            x3: outer_right,
            branch: Centralizer::SJ,
            case: FactorizationCase::ZeroPairing,
        });
    }
    let t = f.div(yv, xv)?;
    let shear = |s: FieldElem| Mat3::identity().add(&Mat3::unit(1, 2).scale(s, f), f);
    Ok(FactorizationTriple {
        x1: outer_left.mul(&shear(f.neg(t)), f),
        x2: Mat3([a, xv, z, o, o, z, z, z, o]),
        x3: shear(t).mul(&outer_right, f),
        branch: Centralizer::S3,
        case: FactorizationCase::NonzeroPairing,
    })
}

/// `(simple eigenvalue, double eigenvalue, X)` with
/// `A = X diag(a1, a2, a2) X^-1`.
pub fn pivot_frame(a: &Mat3, f: &Field) -> Result<(FieldElem, FieldElem, Mat3)> {
    if a.jordan_type(f)? != JordanType::Pivot {
        return Err(Error::Precondition(format!("{a} is not a pivot matrix")));
    }
    let roots = a.char_poly(f).roots(f);
    let simple = roots.iter().find(|r| r.1 == 1).unwrap().0;
    let double = roots.iter().find(|r| r.1 == 2).unwrap().0;
    let line = Subspace::kernel(&a.shift(simple, f), f).basis()[0];
    let plane = Subspace::kernel(&a.shift(double, f), f).basis();
    Ok((simple, double, Mat3::from_columns(line, plane[0], plane[1])))
}

fn distinct_prime_factors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// A path of length at most 4 between two pivot matrices of multiplicative
/// order `p0`, through a bridge element of order `p1` (or `p`).
pub fn pivot_path(a: &Mat3, b: &Mat3, p0: u64, p1: u64, f: &Field) -> Result<PathCertificate> {
    let q = f.q() as u64;
    if classify_prime_power(q - 1).map_or(true, |c| c.is_prime_power()) {
        return Err(Error::Precondition(format!("q - 1 = {} is a prime power", q - 1)));
    }
    let primes = distinct_prime_factors(q - 1);
    if p0 == p1 || !primes.contains(&p0) || !primes.contains(&p1) {
        return Err(Error::Precondition(format!(
            "p0 = {p0} and p1 = {p1} must be distinct prime factors of {}",
            q - 1
        )));
    }
    for m in [a, b] {
        if m.jordan_type(f)? != JordanType::Pivot || m.mult_order(f) != p0 {
            return Err(Error::Precondition(format!("{m} is not a pivot of order {p0}")));
        }
    }
    if a.projectively_equal(b, f) {
        return PathCertificate::through(&[*a], f, Some("identical"));
    }
    let (a1, a2, xa) = pivot_frame(a, f)?;
    let (b1, b2, xb) = pivot_frame(b, f)?;
    let x = f.element_of_order(p1)?;
    let triple = centralizer_factorization(&xa.inv(f)?.mul(&xb, f), x, f)?;
    let d = triple.branch.bridge(x, f);
    let ad = Mat3::diag(a1, a2, a2);
    let bd = Mat3::diag(b1, b2, b2);
    let g1 = xa.mul(&triple.x1, f);
    let g2 = g1.mul(&triple.x2, f);
    let path = [
        *a,
        ad.mul(&d, f).conjugate_by(&g1, f)?,
        d.conjugate_by(&g1, f)?,
        bd.mul(&d, f).conjugate_by(&g2, f)?,
        *b,
    ];
    PathCertificate::through(&path, f, Some(triple.branch.name()))
}

fn pow_signed(f: &Field, x: FieldElem, e: i64, modulus: u64) -> FieldElem {
    f.pow(x, e.rem_euclid(modulus as i64) as u64)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// From a decomposable `A` whose projective order `k` is coprime to `p0`,
/// builds a `p0`-th root `R` of a scalar multiple of `A` with `R^k` a pivot
/// of multiplicative order `p0`. The certificate is `[A, R, R^k]`.
pub fn p0th_root_pivotize(a: &Mat3, p0: u64, f: &Field) -> Result<PathCertificate> {
    let q = f.q() as u64;
    if p0 < 2 || (q - 1) % p0 != 0 {
        return Err(Error::OrderDoesNotDivide { m: p0, order: q - 1 });
    }
    if a.is_scalar() || !a.is_invertible(f) {
        return Err(Error::Precondition(format!("{a} is not a nonscalar invertible matrix")));
    }
    let ty = a.jordan_type(f)?;
    let k = a.projective_order(f);
    if ty == JordanType::Pivot && k == p0 && a.mult_order(f) == p0 {
        return PathCertificate::through(&[*a], f, Some("already_pivot"));
    }
    if !ty.is_decomposable() {
        return Err(Error::Precondition(format!("{a} is {ty}, not decomposable")));
    }
    if gcd(k, p0) != 1 {
        return Err(Error::Precondition(format!("projective order {k} is not coprime to {p0}")));
    }
    let dec = a
        .block_decomposition(f)?
        .ok_or_else(|| Error::Internal("decomposable matrix without a block split".into()))?;
    let c0 = dec.block.scale(f.inv(dec.corner)?, f);
    let root = Mat2::all_invertible(f)
        .find(|c| c.pow(p0, f) == c0 && c.mult_order(f).is_some_and(|o| o % p0 == 0))
        .ok_or_else(|| Error::Internal(format!("no {p0}-th root of {:?}", c0)))?;
    let x = f.element_of_order(p0)?;
    let eig = root.pow(k, f).eigenvalues(f);
    if eig.len() != 2 {
        return Err(Error::Internal("root power is not split".into()));
    }
    let s1 = f.log(x, eig[0]).ok_or_else(|| Error::Internal("eigenvalue outside <x>".into()))? as i64;
    let s2 = f.log(x, eig[1]).ok_or_else(|| Error::Internal("eigenvalue outside <x>".into()))? as i64;
    let kp = (1..p0).find(|j| (j * k) % p0 == 1).unwrap() as i64;
    let (scale, branch) = if (s1 - s2).rem_euclid(p0 as i64) == 0 {
        (pow_signed(f, x, kp * (1 - s1), p0), "equal_exponents")
    } else {
        (pow_signed(f, x, -kp * s1, p0), "distinct_exponents")
    };
    let inner = Mat3::block_diag(FieldElem::ONE, &root.scale(scale, f));
    let p = dec.conjugator;
    let r = p.mul(&inner, f).mul(&p.inv(f)?, f);
    let rk = r.pow(k, f);
    if rk.jordan_type(f)? != JordanType::Pivot || rk.mult_order(f) != p0 {
        return Err(Error::Internal(format!("{rk} is not a pivot of order {p0}")));
    }
    PathCertificate::through(&[*a, r, rk], f, Some(branch))
}

/// `(a^-1 A)^(k/2)` for decomposable `A` of even projective order `k`, where
/// `a` is the corner eigenvalue of its block split; a pivot of order 2.
pub fn halforder_pivot(a: &Mat3, f: &Field) -> Result<Mat3> {
    if f.p() == 2 {
        return Err(Error::Precondition("q must be odd".into()));
    }
    let ty = a.jordan_type(f)?;
    if !ty.is_decomposable() {
        return Err(Error::Precondition(format!("{a} is {ty}, not decomposable")));
    }
    let k = a.projective_order(f);
    if k % 2 != 0 {
        return Err(Error::Precondition(format!("projective order {k} is odd")));
    }
    let dec = a
        .block_decomposition(f)?
        .ok_or_else(|| Error::Internal("decomposable matrix without a block split".into()))?;
    Ok(a.scale(f.inv(dec.corner)?, f).pow(k / 2, f))
}

/// Pivot `A` and Jordan pivot `B` (eigenvalue `b`) are compatible when the
/// plane of `A` contains `col(B - bI)` and `ker(B - bI)` contains the line
/// of `A`.
pub fn compatible(a: &Mat3, b: &Mat3, f: &Field) -> Result<bool> {
    let (l, p) = pivot_spaces(a, f)?;
    if b.jordan_type(f)? != JordanType::JordanPivot {
        return Err(Error::Precondition(format!("{b} is not a Jordan pivot matrix")));
    }
    let ev = b.char_poly(f).roots(f)[0].0;
    let n = b.shift(ev, f);
    Ok(p.contains(&Subspace::column_space(&n, f), f) && Subspace::kernel(&n, f).contains(&l, f))
}

/// `(line, plane)` eigenspaces of a pivot matrix.
pub fn pivot_spaces(a: &Mat3, f: &Field) -> Result<(Subspace, Subspace)> {
    let (s, d, _) = pivot_frame(a, f)?;
    Ok((
        Subspace::kernel(&a.shift(s, f), f),
        Subspace::kernel(&a.shift(d, f), f),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessConstruction {
    /// `diag(1, x, x^2)` against a conjugate by the all-ones-plus-diagonal
    /// matrix.
    DiagonalConjugate,
    /// `diag(C', 1)` with `C'` in a quadratic extension, against `I + E13`.
    TorusJordanPivot,
    /// `diag(C', 1)` against the regular unipotent `I + E12 + E23`.
    TorusUnipotent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPair {
    pub q: u32,
    #[serde(serialize_with = "hex_matrix")]
    pub a: Mat3,
    #[serde(serialize_with = "hex_matrix")]
    pub b: Mat3,
    pub lower_bound: u32,
    pub p0: u64,
    pub construction: WitnessConstruction,
}

/// Smallest code not in `{0, 1, -2}`.
fn off_diagonal_parameter(f: &Field) -> Option<FieldElem> {
    let minus_two = f.neg(f.from_int(2));
    f.elements().find(|&e| !e.is_zero() && e != FieldElem::ONE && e != minus_two)
}

/// `A = diag(1, x, x^2)` and its conjugate by `X = (x' - 1) I + J`, with
/// `J` the all-ones matrix and `x'` the smallest code outside `{0, 1, -2}`.
pub fn diagonal_conjugate_pair(x: FieldElem, f: &Field) -> Result<(Mat3, Mat3)> {
    let a = Mat3::diag(FieldElem::ONE, x, f.mul(x, x));
    let xp = off_diagonal_parameter(f).ok_or_else(|| Error::Precondition(format!("F_{} has no x' outside {{0, 1, -2}}", f.q())))?;
    let o = FieldElem::ONE;
    let conj = Mat3([xp, o, o, o, xp, o, o, o, xp]);
    Ok((a, a.conjugate_by(&conj, f)?))
}

/// Companion matrix of the least irreducible `t^2 + c1 t + c0` (by
/// `c0 + c1 q`).
pub fn first_irreducible_quadratic(f: &Field) -> Mat2 {
    for c1 in f.elements() {
        for c0 in f.elements() {
            let has_root = f
                .elements()
                .any(|t| f.add(f.add(f.mul(t, t), f.mul(c1, t)), c0).is_zero());
            if !has_root {
                return Mat2::companion(c0, c1, f);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

/// Element of multiplicative order `m` in `F_q[C]`, smallest entries first.
fn extension_element_of_order(c: &Mat2, m: u64, f: &Field) -> Option<Mat2> {
    let mut best: Option<Mat2> = None;
    for alpha in f.elements() {
        for beta in f.elements() {
            let e = Mat2::scalar(alpha).add(&c.scale(beta, f), f);
            if e.mult_order(f) == Some(m) && best.map_or(true, |b| e < b) {
                best = Some(e);
            }
        }
    }
    best
}

/// The explicit pair whose distance meets the main-component diameter.
pub fn build_lower_witness(q: u32) -> Result<WitnessPair> {
    let f = Field::with_order(q)?;
    let q64 = q as u64;
    if q == 2 {
        return Err(Error::Precondition("q = 2 has no pivot component".into()));
    }
    let odd = f.p() != 2;
    let below = classify_prime_power(q64 - 1)?;
    if !below.is_prime_power() {
        let (x, p0) = if odd {
            let p0 = *distinct_prime_factors(q64 - 1)
                .iter()
                .find(|&&p| p != 2)
                .ok_or_else(|| Error::Internal("q - 1 has no odd prime factor".into()))?;
            (f.element_of_order(p0)?, p0)
        } else {
            (f.generator(), q64 - 1)
        };
        let (a, b) = diagonal_conjugate_pair(x, &f)?;
        return Ok(WitnessPair {
            q,
            a,
            b,
            lower_bound: if odd { 8 } else { 10 },
            p0,
            construction: WitnessConstruction::DiagonalConjugate,
        });
    }
    let p0 = if q == 3 {
        8
    } else if odd {
        *distinct_prime_factors(q64 + 1)
            .iter()
            .find(|&&p| p != 2)
            .ok_or_else(|| Error::Internal("q + 1 has no odd prime factor".into()))?
    } else {
        distinct_prime_factors(q64 + 1)[0]
    };
    let c = first_irreducible_quadratic(&f);
    let cp = extension_element_of_order(&c, p0, &f)
        .ok_or_else(|| Error::Internal(format!("no element of order {p0} in F_q[C]")))?;
    let a = Mat3::block_diag_low(&cp, FieldElem::ONE);
    let i = Mat3::identity();
    let (b, lower_bound, construction) = if odd {
        let bound = if q == 3 { 11 } else { 12 };
        (i.add(&Mat3::unit(0, 2), &f), bound, WitnessConstruction::TorusJordanPivot)
    } else {
        debug_assert!(is_prime(q64 - 1));
        (
            i.add(&Mat3::unit(0, 1), &f).add(&Mat3::unit(1, 2), &f),
            13,
            WitnessConstruction::TorusUnipotent,
        )
    };
    Ok(WitnessPair {
        q,
        a,
        b,
        lower_bound,
        p0,
        construction,
    })
}
